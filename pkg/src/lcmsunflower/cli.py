"""Command-line front end: ``lcmsun <command> ...``.

Exit codes: 0 ok, 2 budget-limited (result not certified exact),
64 usage error, 65 data error or cap exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import capacity, constructions, harmonic, io, lcmfree, primes, setfam
from .errors import InvalidInputError, LcmSunflowerError
from .numeric import parse_rational

EXIT_OK = 0
EXIT_BUDGET = 2
EXIT_USAGE = 64
EXIT_DATA = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default, which is taken
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k(value: str) -> int:
    k = int(value)
    if k < 3:
        raise argparse.ArgumentTypeError(f"k must be >= 3, got {k}")
    return k


def _nonneg(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _int_list(value: str) -> list[int]:
    try:
        return [int(float(x)) if "e" in x.lower() else int(x) for x in value.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def _range(value: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in value.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {value!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {value!r}")
    return lo, hi


# ---------------------------------------------------------------- commands


def cmd_fk_exact(args) -> tuple[dict, int]:
    res = lcmfree.exact_fk(args.N, args.k, budget=args.budget)
    return res.to_json(), EXIT_OK if res.exact else EXIT_BUDGET


def cmd_capacity(args) -> tuple[dict, int]:
    res = capacity.max_sunflower_free(
        args.n, args.k, args.budget, co=args.co, symmetry=not args.no_symmetry, layer_bound=args.layer_bound
    )
    out = res.to_json()
    out["capacity_lower_estimate"] = capacity.capacity_lower_estimate(res) if res.exact and res.n > 0 else None
    return out, EXIT_OK if res.exact else EXIT_BUDGET


def cmd_sunflower_check(args) -> tuple[dict, int]:
    fam = io.load_family(args.family)
    if args.co:
        hit = setfam.find_k_cosunflower(fam, args.k, args.method or "dual")
    else:
        hit = setfam.find_k_sunflower(fam, args.k, args.method or "auto")
    out = {"k": args.k, "co": args.co, "free": hit is None, "witness": None, "family_size": len(fam)}
    if hit is not None:
        sub = setfam.SetFamily(fam.ground_size, tuple(fam.members[i] for i in hit), fam.labels)
        out["witness"] = [[e + 1 for e in setfam.bits(fam.members[i])] for i in hit]
        out["witness_labels"] = sub.label_sets() if fam.labels is not None else None
    return out, EXIT_OK


def cmd_harmonic(args) -> tuple[dict, int]:
    sub = args.hcmd
    if sub == "Hl":
        return harmonic.H_ell(args.N, args.l, args.mode).to_json(), EXIT_OK
    if sub == "Al":
        return {"kind": "A_ell", "bound": args.x, "param": args.l, "count": harmonic.A_ell(args.x, args.l)}, EXIT_OK
    if sub == "zomega":
        s = harmonic.z_omega_sum(args.X, args.z)
        m = harmonic.euler_majorant(args.X, args.z)
        return {"kind": "z_omega", "bound": args.X, "param": args.z, "sum": s, "majorant": m, "holds": s <= m}, EXIT_OK
    if sub == "G":
        g = harmonic.G_constant(args.z, args.cutoff)
        return {
            "kind": "G",
            "param": args.z,
            "value": g.value,
            "cutoff": g.cutoff,
            "log_tail_bound": g.log_tail_bound,
            "abs_error_bound": g.abs_error_bound,
        }, EXIT_OK
    if sub == "sathe":
        main = harmonic.sathe_selberg_main_term(args.x, args.l, args.cutoff)
        count = harmonic.A_ell(args.x, args.l)
        return {
            "kind": "sathe_selberg",
            "bound": args.x,
            "param": args.l,
            "count": count,
            "main_term": main,
            "ratio": count / main,
        }, EXIT_OK
    raise UsageError(f"unknown harmonic subcommand {sub!r}")


def cmd_harmonic_trend(args) -> list[dict]:
    return harmonic.trend_rows(args.Ns, args.ells)


def _thm12(args) -> dict:
    table = primes.sieve_primes(args.prime_limit)
    pool = constructions.prime_pool(table, args.prime_min, args.prime_limit)
    B = constructions.optimal_B(args.k) if args.B == "auto" else float(parse_rational(args.B))
    buckets = constructions.greedy_buckets(pool, Fraction(B), count_target=args.t, max_blocks=args.t or None)
    report = constructions.thm12_construction(
        args.k, buckets, enumerate=args.emit_elements, cap=args.cap, allow_truncate=args.allow_truncate
    )
    report.params["B_mode"] = args.B
    out = report.to_json()
    out["buckets"] = buckets.to_json()
    return out


def _thm15(args) -> dict:
    fam = io.load_family(args.family)
    table = primes.sieve_primes(args.prime_limit)
    pool = constructions.prime_pool(table, args.prime_min, args.prime_limit)
    t = fam.ground_size
    buckets = constructions.greedy_buckets(pool, 1, count_target=t, max_blocks=t, mode="thm15")
    report = constructions.thm15_construction(fam, buckets, k=args.k, sample=args.sample, materialize_cap=args.cap)
    out = report.to_json()
    out["buckets"] = buckets.to_json()
    return out


def _weights(spec: str, ps: Sequence[int]) -> constructions.WeightedGroundSet:
    compact = spec.replace(" ", "")
    if compact == "1/(p+1)":
        return constructions.WeightedGroundSet.prime_weights(ps)
    if compact == "1/p":
        return constructions.WeightedGroundSet(tuple(ps), tuple(Fraction(1, p) for p in ps))
    raise UsageError(f"unsupported weight rule {spec!r}; use 1/(p+1) or 1/p")


def _weighted(args) -> dict:
    base = io.load_family(args.base)
    lo, hi = args.prime_range
    table = primes.sieve_primes(hi)
    ps = constructions.prime_pool(table, lo, hi)
    if len(ps) > 64:
        raise InvalidInputError(f"prime range holds {len(ps)} primes; at most 64 fit a ground set")
    wgs = _weights(args.weights, ps)
    res = constructions.weighted_cosunflower_pipeline(wgs, parse_rational(args.c), base, k=args.k, cap=args.cap)
    out = res.report.to_json()
    if args.weights.replace(" ", "") == "1/(p+1)":
        left, right = constructions.harmonic_measure_identity(res.family, ps)
        out["freeness_checks"]["harmonic_identity"] = left == right
        out["extras"]["harmonic_sum_of_products"] = str(left)
    out["extras"]["primes"] = list(ps)
    if args.emit_elements:
        out["sampled_elements"] = sorted(math.prod(q, start=1) for q in res.family.label_sets())
    return out


def cmd_construct(args) -> tuple[dict, int]:
    handler = {"thm12": _thm12, "thm15": _thm15, "weighted": _weighted}[args.ccmd]
    return handler(args), EXIT_OK


def cmd_params(args) -> tuple[dict, int]:
    B = None if args.B == "auto" else float(parse_rational(args.B))
    return constructions.asymptotic_parameters(args.N_log10, args.k, args.kind, B), EXIT_OK


def cmd_report(args) -> tuple[dict, int]:
    from . import report

    cfg = report.load_config(args.config)
    summary = report.run_report(cfg, args.out, jobs=args.jobs)
    return summary, EXIT_OK if summary["failures"] == 0 else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lcmsun", description="LCM-free sets and sunflower-free families: exact solvers and experiments.")
    p.add_argument("--output", "-o", help="write the result here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    q = sub.add_parser("fk-exact", help="exact f_k(N) by branch-and-bound")
    q.add_argument("--N", type=_nonneg, required=True)
    q.add_argument("--k", type=_k, required=True)
    q.add_argument("--budget", type=_positive)
    q.set_defaults(func=cmd_fk_exact)

    q = sub.add_parser("capacity", help="exact F_k(n), the largest k-sunflower-free family on [n]")
    q.add_argument("--n", type=_nonneg, required=True)
    q.add_argument("--k", type=_k, required=True)
    q.add_argument("--co", action="store_true", help="forbid cosunflowers instead of sunflowers")
    q.add_argument("--budget", type=_positive)
    q.add_argument("--no-symmetry", action="store_true")
    q.add_argument("--layer-bound", action="store_true")
    q.set_defaults(func=cmd_capacity)

    q = sub.add_parser("sunflower-check", help="search a family file for a k-(co)sunflower")
    q.add_argument("--family", required=True)
    q.add_argument("--k", type=_k, required=True)
    q.add_argument("--co", action="store_true")
    q.add_argument("--method", choices=("auto", "buckets", "enumerate", "dual", "direct"))
    q.set_defaults(func=cmd_sunflower_check)

    h = sub.add_parser("harmonic", help="harmonic sums over squarefree almost primes")
    hs = h.add_subparsers(dest="hcmd", required=True, parser_class=_Parser)
    q = hs.add_parser("Hl")
    q.add_argument("--N", type=_positive, required=True)
    q.add_argument("--l", type=_nonneg, required=True)
    q.add_argument("--mode", choices=("auto", "float", "exact"), default="auto")
    q = hs.add_parser("Al")
    q.add_argument("--x", type=_positive, required=True)
    q.add_argument("--l", type=_nonneg, required=True)
    q = hs.add_parser("zomega")
    q.add_argument("--X", type=_positive, required=True)
    q.add_argument("--z", type=float, required=True)
    q = hs.add_parser("G")
    q.add_argument("--z", type=float, required=True)
    q.add_argument("--cutoff", type=_positive, default=10**6)
    q = hs.add_parser("sathe")
    q.add_argument("--x", type=_positive, required=True)
    q.add_argument("--l", type=_positive, required=True)
    q.add_argument("--cutoff", type=_positive, default=10**6)
    q = hs.add_parser("trend")
    q.add_argument("--Ns", type=_int_list, default=[10**4, 10**5, 10**6])
    q.add_argument("--ells", type=_int_list, default=[1, 2, 3])
    h.set_defaults(func=cmd_harmonic)

    c = sub.add_parser("construct", help="lower-bound constructions on synthetic prime pools")
    cs = c.add_subparsers(dest="ccmd", required=True, parser_class=_Parser)
    q = cs.add_parser("thm12", help="r = k-2 primes from each greedy block")
    q.add_argument("--k", type=_k, required=True)
    q.add_argument("--prime-limit", type=_positive, required=True)
    q.add_argument("--prime-min", type=_positive, default=2)
    q.add_argument("--B", default="auto", help='block threshold, or "auto" for e*(r!)^(1/r)')
    q.add_argument("--t", type=_nonneg, default=0, help="blocks required (0: as many as the pool allows)")
    q.add_argument("--emit-elements", action="store_true")
    q.add_argument("--allow-truncate", action="store_true")
    q.add_argument("--cap", type=_positive)
    q = cs.add_parser("thm15", help="encode a cosunflower-free family with one prime per block")
    q.add_argument("--family", required=True)
    q.add_argument("--prime-limit", type=_positive, required=True)
    q.add_argument("--prime-min", type=_positive, default=2)
    q.add_argument("--k", type=_k, default=3)
    q.add_argument("--sample", type=_nonneg, default=0)
    q.add_argument("--cap", type=_positive)
    q = cs.add_parser("weighted", help="blow-up of a base family over a weighted prime partition")
    q.add_argument("--c", required=True)
    q.add_argument("--base", required=True)
    q.add_argument("--weights", default="1/(p+1)")
    q.add_argument("--prime-range", type=_range, required=True)
    q.add_argument("--k", type=_k, default=3)
    q.add_argument("--cap", type=_positive)
    q.add_argument("--emit-elements", action="store_true")
    c.set_defaults(func=cmd_construct)

    q = sub.add_parser("params", help="asymptotic parameter choices for a given N")
    q.add_argument("--N-log10", type=float, required=True)
    q.add_argument("--k", type=_k, default=3)
    q.add_argument("--kind", choices=("thm12", "thm15"), default="thm12")
    q.add_argument("--B", default="auto")
    q.set_defaults(func=cmd_params)

    q = sub.add_parser("report", help="run a config of experiments into a CSV/JSON bundle")
    q.add_argument("--config", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--jobs", type=_positive, default=1)
    q.set_defaults(func=cmd_report)
    return p


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    trend = args.cmd == "harmonic" and args.hcmd == "trend"
    if args.format == "csv" and not trend:
        print("lcmsun: error: --format csv only applies to tabular output (harmonic trend)", file=sys.stderr)
        return EXIT_USAGE
    try:
        if trend:
            rows = cmd_harmonic_trend(args)
            text = harmonic.rows_to_csv(rows) if args.format == "csv" else io.dumps({"kind": "trend", "rows": rows})
            _emit(text, args.output)
            return EXIT_OK
        obj, code = args.func(args)
    except UsageError as exc:
        print(f"lcmsun: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LcmSunflowerError as exc:
        print(f"lcmsun: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    _emit(io.dumps(obj), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
