"""Command-line entry point.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 budget or
genericity exhaustion.  All randomness is funneled through --seed, so a
fixed invocation produces byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

from .cartan import weyl_dim
from .config import load_config
from .convolution import (ConvExpr, efactor, eval_expr, semicanonical_construct,
                          serre_element)
from .crystal import (compare_kostant, emit_dot, emit_json, generate_binfty,
                      lr_decompose, verify_axioms)
from .errors import (BudgetError, InputError, PrepCrystalError,
                     VerificationError)
from .modio import load_rep
from .modrep import (check_relations, ext1_to_E, hom_dim, is_locally_free,
                     jordan_type, make_E, phi, phi_star, rank_vector)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _parse_vector(text, n, what):
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse {what} {text!r}") from exc
    if len(parts) != n:
        raise InputError(f"{what} must have {n} entries")
    return tuple(parts)


def _parse_word(text):
    """Words like "1,2,1" or with divided powers "1^2,2"."""
    factors = []
    for tok in text.split(","):
        tok = tok.strip()
        if "^" in tok:
            i, p = tok.split("^")
            factors.append(efactor(int(i), int(p)))
        else:
            factors.append(efactor(int(tok), 1))
    return tuple(factors)


def cmd_check(args):
    cfg = load_config(args.config)
    M = load_rep(cfg.datum, args.module, check=False)
    bad = check_relations(M)
    lines = [f"dims {list(M.dims)}"]
    for msg, *_ in bad:
        lines.append(f"relation violated: {msg}")
    if not bad:
        lf = is_locally_free(M)
        lines.append(f"locally free: {lf}")
        for i in range(1, cfg.datum.n + 1):
            lines.append(f"jordan type at {i}: "
                         f"{list(jordan_type(M, i))}")
        if lf:
            lines.append(f"rank {tuple(rank_vector(M))}")
            phis = [phi(M, i) for i in range(1, cfg.datum.n + 1)]
            phiss = [phi_star(M, i) for i in range(1, cfg.datum.n + 1)]
            lines.append(f"phi {phis}")
            lines.append(f"phi* {phiss}")
            homs = []
            exts = []
            for i in range(1, cfg.datum.n + 1):
                E = make_E(cfg.datum, i, M.field)
                homs.append((hom_dim(E, M), hom_dim(M, E)))
                exts.append(ext1_to_E(M, i))
            lines.append(f"hom (E_i->M, M->E_i) {homs}")
            lines.append(f"ext1 to E {tuple(exts)}")
    print("\n".join(lines))
    return EXIT_OK if not bad else EXIT_VERIFY


def cmd_crystal(args):
    cfg = load_config(args.config)
    _apply_policy_flags(cfg, args)
    graph = generate_binfty(cfg.datum, args.height, cfg.policy)
    layers = {}
    for b in graph.node_list():
        layers[b.height] = layers.get(b.height, 0) + 1
    print(f"nodes {len(graph.nodes)}")
    print("layers " + ",".join(str(layers.get(h, 0))
                               for h in range(args.height + 1)))
    code = EXIT_OK
    if args.check_axioms:
        violations = verify_axioms(graph)
        print(f"axiom violations {len(violations)}")
        for v in violations:
            print(f"  {v}")
        if violations:
            code = EXIT_VERIFY
    if args.check_kostant:
        mismatches = compare_kostant(graph)
        print(f"kostant mismatches {len(mismatches)}")
        for m in mismatches:
            print(f"  {m}")
        if mismatches:
            code = EXIT_VERIFY
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(emit_dot(graph))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(emit_json(graph))
            fh.write("\n")
    return code


def cmd_lr(args):
    cfg = load_config(args.config)
    _apply_policy_flags(cfg, args)
    lam = _parse_vector(args.lam, cfg.datum.n, "--lambda")
    mu = _parse_vector(args.mu, cfg.datum.n, "--mu")
    graph = generate_binfty(cfg.datum, args.height, cfg.policy)
    pairs, complete = lr_decompose(graph, lam, mu)
    total = 0
    for nu, mult in pairs:
        print(f"nu {','.join(map(str, nu))} multiplicity {mult}")
        total += mult * weyl_dim(cfg.datum, nu)
    want = weyl_dim(cfg.datum, lam) * weyl_dim(cfg.datum, mu)
    print(f"dimension check {total} == {want}: {total == want}")
    print(f"complete {complete}")
    return EXIT_OK if total == want else EXIT_VERIFY


def cmd_conv(args):
    cfg = load_config(args.config)
    M = load_rep(cfg.datum, args.module)
    if args.conv_command == "eval":
        word = _parse_word(args.word)
        expr = ConvExpr.monomial(word)
    else:  # serre
        expr = serre_element(cfg.datum, args.i, args.j)
    val = eval_expr(M, expr, cfg.budget)
    print(str(val))
    return EXIT_OK


def cmd_semican(args):
    cfg = load_config(args.config)
    _apply_policy_flags(cfg, args)
    r = _parse_vector(args.weight, cfg.datum.n, "--weight")
    graph = generate_binfty(cfg.datum, args.height, cfg.policy)
    funcs = semicanonical_construct(graph, r, cfg.policy, cfg.budget)
    for key in sorted(funcs):
        print(f"component {list(key)}: {funcs[key]}")
    return EXIT_OK


def _policy_flags(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--retries", type=int, default=None)
    p.add_argument("--prime", type=int, default=None)


def _apply_policy_flags(cfg, args):
    cfg.policy.seed = args.seed
    if args.samples is not None:
        cfg.policy.samples = args.samples
    if args.retries is not None:
        cfg.policy.retries = args.retries
    if args.prime is not None:
        cfg.policy.prime = args.prime


def build_parser():
    ap = argparse.ArgumentParser(prog="prepcrystal")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="relation-check and profile a module file")
    p.add_argument("--config", required=True)
    p.add_argument("--module", required=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("crystal", help="generate a truncation of B(-infinity)")
    p.add_argument("--config", required=True)
    p.add_argument("--height", type=int, required=True)
    _policy_flags(p)
    p.add_argument("--dot")
    p.add_argument("--json")
    p.add_argument("--check-axioms", action="store_true")
    p.add_argument("--check-kostant", action="store_true")
    p.set_defaults(fn=cmd_crystal)

    p = sub.add_parser("lr", help="Littlewood-Richardson decomposition")
    p.add_argument("--config", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--height", type=int, required=True)
    _policy_flags(p)
    p.set_defaults(fn=cmd_lr)

    p = sub.add_parser("conv", help="convolution-algebra evaluation")
    convsub = p.add_subparsers(dest="conv_command", required=True)
    pe = convsub.add_parser("eval")
    pe.add_argument("--config", required=True)
    pe.add_argument("--module", required=True)
    pe.add_argument("--word", required=True)
    pe.set_defaults(fn=cmd_conv)
    ps = convsub.add_parser("serre")
    ps.add_argument("--config", required=True)
    ps.add_argument("--module", required=True)
    ps.add_argument("--i", type=int, required=True)
    ps.add_argument("--j", type=int, required=True)
    ps.set_defaults(fn=cmd_conv)

    p = sub.add_parser("semican", help="semicanonical functions at a weight")
    p.add_argument("--config", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--height", type=int, required=True)
    _policy_flags(p)
    p.set_defaults(fn=cmd_semican)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PrepCrystalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
