"""Exception taxonomy for the whole engine.

Every failure mode the public operations can signal has its own class so
callers (and the CLI exit-code mapping) can discriminate without string
matching.
"""


class PrepCrystalError(Exception):
    """Base class for all engine errors."""


class InputError(PrepCrystalError):
    """Malformed user input (files, config, CLI arguments)."""


class VerificationError(PrepCrystalError):
    """A runtime-checked mathematical invariant failed."""


class BudgetError(PrepCrystalError):
    """A configured resource budget was exhausted."""


# --- Cartan datum validation -------------------------------------------------

class NonSymmetrizable(InputError):
    pass


class BadOrientation(InputError):
    pass


class BadDiagonal(InputError):
    pass


class NotFiniteType(InputError):
    pass


class NotDominant(InputError):
    pass


# --- module representations --------------------------------------------------

class ShapeMismatch(InputError):
    pass


class NotLocallyFreeShape(InputError):
    pass


class NotLocallyFree(InputError):
    pass


class RelationFailure(VerificationError):
    pass


class FieldTooSmall(InputError):
    pass


class PreconditionViolated(InputError):
    pass


# --- genericity / crystal ----------------------------------------------------

class GenericityExhausted(BudgetError):
    """All retries produced draws failing the post-hoc invariant checks."""


class KeyCollision(VerificationError):
    """Two distinct invariant profiles hashed to the same string key."""


class HeightInsufficient(InputError):
    pass


# --- convolution -------------------------------------------------------------

class BudgetExceeded(BudgetError):
    pass


class NonPolynomialCount(VerificationError):
    """Held-out prime check failed; interpolated polynomial is not trusted."""


class BadReduction(InputError):
    pass


class DualityCheckFailed(VerificationError):
    """The rho-evaluation matrix of semicanonical functions is not identity."""
