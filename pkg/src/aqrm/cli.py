"""Batch command-line front end.

Every computation and verification in the library is exposed as a
subcommand emitting machine-readable output (JSON or CSV). Exit codes:
0 success/verified, 2 verification failure, 1 usage error. Rational flags
accept "p/q" strings so exact code paths never round; the Fock cutoff for
numeric checks defaults to AQRM_NMAX from the environment when set.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import constraint, gfunction, heun, sl2rep, spectrum
from .exactpoly import isolate_positive_roots, to_fraction

DEFAULT_PRECISION = Fraction(1, 10**12)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; 2 is reserved for verification failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    """Validated plumbing shared by all subcommands."""

    subcommand: str
    format: str
    out: str | None
    seed: int


def _default_nmax() -> int:
    return int(os.environ.get("AQRM_NMAX", spectrum.DEFAULT_NMAX))


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_lines(records: list[dict]) -> str:
    return "\n".join(json.dumps(r) for r in records)


# -- subcommands ---------------------------------------------------------------

def _cmd_poly(cfg: RunConfig, args) -> int:
    fam = constraint.ConstraintFamily(args.N, args.two_eps, args.variant)
    p = constraint.constraint_poly(fam, args.k)
    if cfg.format == "json":
        _emit(cfg, json.dumps({
            "N": args.N, "two_eps": args.two_eps, "variant": args.variant,
            "k": args.k, "text": p.to_text(),
            "terms": json.loads(p.to_json())["terms"]}))
    else:
        _emit(cfg, p.to_text())
    return EXIT_OK


def _cmd_roots(cfg: RunConfig, args) -> int:
    fam = constraint.ConstraintFamily(args.N, args.two_eps, args.variant)
    k = args.k if args.k is not None else args.N
    p = constraint.constraint_poly(fam, k).specialize(args.d)
    intervals = isolate_positive_roots(p, args.precision)
    if cfg.format == "json":
        _emit(cfg, json.dumps({
            "N": args.N, "two_eps": args.two_eps, "variant": args.variant,
            "k": k, "d": str(args.d), "count": len(intervals),
            "intervals": [[str(lo), str(hi)] for lo, hi in intervals]}))
    else:
        rows = ["x_lo,x_hi"] + [f"{lo},{hi}" for lo, hi in intervals]
        _emit(cfg, "\n".join(rows))
    return EXIT_OK


def _cmd_crossings(cfg: RunConfig, args) -> int:
    records = constraint.find_crossings(args.N, args.two_eps, args.delta2,
                                        args.precision)
    payload, code = [], EXIT_OK
    for rec in records:
        row = json.loads(rec.to_json())
        if args.confirm:
            try:
                obs = spectrum.confirm_crossing(rec, n_max=args.n_max)
                row["gap"] = obs.gap
                row["lambda_observed"] = obs.lambda_star
            except ValueError as exc:
                sys.stderr.write(f"confirmation failed: {exc}\n")
                code = EXIT_VERIFICATION
        payload.append(row)
    if cfg.format == "json":
        _emit(cfg, _json_lines(payload) if payload else "")
    else:
        header = "N,two_eps,d,x_lo,x_hi,g,lambda,modules,gap"
        rows = [header]
        for row in payload:
            rows.append(",".join([
                str(row["N"]), str(row["two_eps"]), row["d"], row["x_lo"],
                row["x_hi"], repr(row["g"]), repr(row["lambda"]),
                ";".join(row["modules"]),
                "" if "gap" not in row else repr(row["gap"])]))
        _emit(cfg, "\n".join(rows))
    return code


def _cmd_verify_identity(cfg: RunConfig, args) -> int:
    fault = 0 if args.inject_fault else None
    report = constraint.verify_identity_half(args.N, fault_k=fault)
    _emit(cfg, json.dumps(report))
    return EXIT_OK if report["ok"] else EXIT_VERIFICATION


def _cmd_verify_conjecture(cfg: RunConfig, args) -> int:
    report = constraint.verify_conjecture(args.N, args.ell)
    _emit(cfg, json.dumps({
        "N": report["N"], "ell": report["ell"],
        "remainder_zero": report["remainder_zero"],
        "integer_coeffs": report["integer_coeffs"],
        "all_positive": report["all_positive"],
        "samples": [[str(xv), str(dv), flag]
                    for (xv, dv), flag in report["positivity"]],
        "quotient": report["quotient"].to_text(),
        "ok": report["ok"]}))
    return EXIT_OK if report["ok"] else EXIT_VERIFICATION


def _random_fraction(rng: random.Random, positive: bool = False) -> Fraction:
    num = rng.randint(1 if positive else -9, 9)
    return Fraction(num, rng.randint(1, 6))


def _rep_random_checks(rng: random.Random, trials: int) -> list[dict]:
    checks = []
    for _ in range(trials):
        j = rng.choice((1, 2))
        a = _random_fraction(rng)
        params = sl2rep.RepParams(j, a, -7, 7)
        comm = sl2rep.commutation_relations_check(params)
        cas = sl2rep.casimir_scalar_check(params)
        kcomm = sl2rep.commutator_check(
            params, _random_fraction(rng), _random_fraction(rng, True),
            _random_fraction(rng, True), _random_fraction(rng))
        checks.append({"name": "commutation_relations", "j": j, "a": str(a),
                       "ok": comm["ok"]})
        checks.append({"name": "casimir_scalar", "j": j, "a": str(a),
                       "ok": cas["ok"]})
        checks.append({"name": "mixed_commutator", "j": j, "a": str(a),
                       "ok": kcomm["ok"]})
    return checks


def _rep_block_checks(rng: random.Random, trials: int) -> list[dict]:
    """Exact equality of the K-block with the constraint tridiagonal."""
    checks = []
    for _ in range(trials):
        N = rng.randint(1, 5)
        two_eps = rng.randint(-2, 3)
        variant = rng.choice((constraint.PLAIN, constraint.TILDE))
        g2 = _random_fraction(rng, True)
        d = _random_fraction(rng, True)
        x = 4 * g2  # the constraint variable is (2g)^2
        block = sl2rep.k_block_minus_lambda(N, two_eps, variant, g2, d)
        spec = constraint.tridiag_matrix(
            constraint.ConstraintFamily(N, two_eps, variant), N)
        ok = True
        for r in range(N + 1):
            for c in range(N + 1):
                if c == r:
                    want = spec.diag[r].evaluate(x, d)
                elif c == r + 1:
                    want = spec.sup[r].evaluate(x, d)
                elif c == r - 1:
                    want = spec.sub[r - 1].evaluate(x, d)
                else:
                    want = Fraction(0)
                ok = ok and block[r][c] == want
        checks.append({"name": "k_block_tridiagonal", "N": N,
                       "two_eps": two_eps, "variant": variant, "ok": ok})
    return checks


def _cmd_rep_check(cfg: RunConfig, args) -> int:
    rng = random.Random(cfg.seed)
    checks = _rep_random_checks(rng, args.trials)
    for j in (1, 2):
        for m in (1, 2, 3):
            rep = sl2rep.invariant_subspace_check(j, m)
            checks.append({"name": "invariant_subspace", "j": j, "m": m,
                           "ok": rep["ok"]})
    for a in (Fraction(1, 2), Fraction(1), Fraction(3), Fraction(-3, 2)):
        rep = sl2rep.intertwiner_check(a, (-6, 6))
        checks.append({"name": "intertwiner", "a": str(a), "ok": rep["ok"]})
    checks.extend(_rep_block_checks(rng, args.trials))
    ok = all(c["ok"] for c in checks)
    _emit(cfg, json.dumps({"seed": cfg.seed, "checks": checks, "ok": ok}))
    return EXIT_OK if ok else EXIT_VERIFICATION


def _cmd_heun_check(cfg: RunConfig, args) -> int:
    direct = heun.heun_direct(args.which, args.lam, args.g2, args.d, args.eps)
    from_k = heun.heun_from_K(args.which, args.lam, args.g2, args.d, args.eps)
    expo = heun.exponents(args.which, args.lam, args.g2, args.eps)
    match = direct == from_k
    _emit(cfg, json.dumps({
        "op": json.loads(direct.to_json()),
        "reduction_matches": match,
        "exponents": {
            "at0": [str(e) for e in expo["at0"]],
            "at1": [str(e) for e in expo["at1"]],
            "both_integral": expo["both_integral"]},
        "ok": match}))
    return EXIT_OK if match else EXIT_VERIFICATION


def _cmd_gfunction(cfg: RunConfig, args) -> int:
    if args.g is not None:
        gp = gfunction.g_plus(args.N, args.g, args.delta, args.tol)
        gm = gfunction.g_minus(args.N, args.g, args.delta, args.tol)
        if cfg.format == "json":
            _emit(cfg, json.dumps({
                "N": args.N, "delta": args.delta, "g": args.g,
                "G_plus": vars(gp), "G_minus": vars(gm)}))
        else:
            rows = ["parity,value,n_stop,tail_bound,converged"]
            for name, gv in (("plus", gp), ("minus", gm)):
                rows.append(f"{name},{gv.value!r},{gv.n_stop},"
                            f"{gv.tail_bound!r},{gv.converged}")
            _emit(cfg, "\n".join(rows))
        return EXIT_OK
    if args.g_min is None or args.g_max is None:
        raise ValueError("need either --g or both --g-min and --g-max")
    roots = gfunction.find_exceptional(args.N, args.delta,
                                       (args.g_min, args.g_max), args.tol)
    if cfg.format == "json":
        _emit(cfg, _json_lines([{
            "N": r.N, "delta": r.delta, "g_root": r.g_root,
            "lambda": r.lambda_, "parity": r.parity,
            "G_residual": r.residual} for r in roots]) if roots else "")
    else:
        rows = ["N,delta,g_root,lambda,parity,G_residual"]
        rows += [f"{r.N},{r.delta!r},{r.g_root!r},{r.lambda_!r},"
                 f"{r.parity},{r.residual!r}" for r in roots]
        _emit(cfg, "\n".join(rows))
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig, args) -> int:
    if args.steps < 2:
        raise ValueError("--steps must be >= 2")
    grid = [args.g_min + (args.g_max - args.g_min) * i / (args.steps - 1)
            for i in range(args.steps)]
    sw = spectrum.sweep(args.delta, args.eps, grid, n_max=args.n_max)
    if cfg.format == "json":
        _emit(cfg, json.dumps({
            "delta": sw.delta, "eps": sw.eps, "n_max": sw.n_max,
            "g_grid": list(sw.g_grid),
            "eigenvalues": sw.table.tolist(),
            "converged": sw.converged.astype(bool).tolist(),
            "crossings": [json.loads(c.to_json()) for c in sw.crossings]}))
    else:
        _emit(cfg, sw.to_csv())
    return EXIT_OK


# -- parser construction ---------------------------------------------------------

def _add_common(sub, default_format: str):
    sub.add_argument("--format", choices=("json", "csv"),
                     default=default_format)
    sub.add_argument("--out", metavar="PATH", default=None)
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="aqrm", description=__doc__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("poly", help="print one constraint polynomial")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--two-eps", type=int, default=0)
    p.add_argument("--variant", choices=(constraint.PLAIN, constraint.TILDE),
                   default=constraint.PLAIN)
    p.add_argument("--k", type=int, required=True)
    _add_common(p, "csv")
    p.set_defaults(handler=_cmd_poly)

    p = subs.add_parser("roots", help="isolate positive roots at fixed d")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--two-eps", type=int, default=0)
    p.add_argument("--variant", choices=(constraint.PLAIN, constraint.TILDE),
                   default=constraint.PLAIN)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--d", type=to_fraction, required=True,
                   metavar="P/Q", help="value of d = Delta^2")
    p.add_argument("--precision", type=to_fraction, default=DEFAULT_PRECISION)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_roots)

    p = subs.add_parser("crossings",
                        help="find level crossings, optionally confirm numerically")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--two-eps", type=int, default=0)
    p.add_argument("--delta2", type=to_fraction, required=True,
                   metavar="P/Q", help="value of d = Delta^2")
    p.add_argument("--precision", type=to_fraction, default=DEFAULT_PRECISION)
    p.add_argument("--confirm", action="store_true",
                   help="check each crossing against diagonalization")
    p.add_argument("--n-max", type=int, default=None)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_crossings)

    p = subs.add_parser("verify-identity",
                        help="ladder identity between the two families at eps=1/2")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb one recurrence coefficient (self-test)")
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_verify_identity)

    p = subs.add_parser("verify-conjecture",
                        help="divisibility/positivity of the level-shift quotient")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_verify_conjecture)

    p = subs.add_parser("rep-check",
                        help="commutators, Casimir, block match, intertwiner")
    p.add_argument("--trials", type=int, default=3)
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_rep_check)

    p = subs.add_parser("heun-check",
                        help="operator correspondence and local exponents")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--lambda", dest="lam", type=to_fraction, required=True,
                   metavar="P/Q")
    p.add_argument("--g2", type=to_fraction, required=True, metavar="P/Q")
    p.add_argument("--d", type=to_fraction, required=True, metavar="P/Q")
    p.add_argument("--eps", type=to_fraction, default=Fraction(0),
                   metavar="P/Q")
    _add_common(p, "json")
    p.set_defaults(handler=_cmd_heun_check)

    p = subs.add_parser("gfunction",
                        help="evaluate G+- or scan for exceptional couplings")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--g-min", type=float, default=None)
    p.add_argument("--g-max", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p, "csv")
    p.set_defaults(handler=_cmd_gfunction)

    p = subs.add_parser("sweep", help="tabulate the truncated spectrum over g")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--g-min", type=float, required=True)
    p.add_argument("--g-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--n-max", type=int, default=None)
    _add_common(p, "csv")
    p.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n_max", None) is None and hasattr(args, "n_max"):
        args.n_max = _default_nmax()
    cfg = RunConfig(subcommand=args.subcommand, format=args.format,
                    out=args.out, seed=args.seed)
    try:
        return args.handler(cfg, args)
    except ValueError as exc:
        sys.stderr.write(f"aqrm {cfg.subcommand}: {exc}\n")
        return EXIT_USAGE
    except RuntimeError as exc:
        sys.stderr.write(f"aqrm {cfg.subcommand}: {exc}\n")
        return EXIT_VERIFICATION


if __name__ == "__main__":
    raise SystemExit(main())
