"""TOML run configuration.

``[cartan]`` carries the datum (C row-major, D or "minimal", Omega or
"default"); ``[policy]`` the genericity policy; ``[budget]`` the
convolution budgets.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cartan import default_orientation, minimal_symmetrizer, validate_datum
from .convolution import ConvBudget
from .errors import InputError
from .genericops import GenericityPolicy


@dataclass
class RunConfig:
    datum: object
    policy: GenericityPolicy
    budget: ConvBudget


def config_from_dict(data) -> RunConfig:
    try:
        cartan = data["cartan"]
        C = cartan["C"]
    except KeyError as exc:
        raise InputError(f"config is missing {exc}") from exc
    D = cartan.get("D", "minimal")
    if D == "minimal":
        D = minimal_symmetrizer(C)
    omega = cartan.get("Omega", "default")
    if omega == "default":
        omega = default_orientation(C)
    else:
        omega = [tuple(p) for p in omega]
    datum = validate_datum(C, D, omega)
    pol = data.get("policy", {})
    policy = GenericityPolicy(
        seed=int(pol.get("seed", 0)),
        samples=int(pol.get("samples", 2)),
        retries=int(pol.get("retries", 8)),
        prime=int(pol.get("prime", 2147483647)))
    bud = data.get("budget", {})
    budget = ConvBudget(
        enum_cap=int(bud.get("enum_cap", 3000)),
        hard_cap=int(bud.get("hard_cap", 20000)),
        sample_draws=int(bud.get("sample_draws", 10)),
        mod_hom_cap=int(bud.get("mod_hom_cap", 200000)),
        max_degree=int(bud.get("max_degree", 64)),
        start_prime=int(bud.get("start_prime", 5)))
    return RunConfig(datum=datum, policy=policy, budget=budget)


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: invalid TOML: {exc}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return config_from_dict(data)
