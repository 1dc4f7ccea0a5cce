"""Command-line front end.

Exit codes: 0 ok, 1 internal error, 2 usage or parse error, 3 domain
precondition failed, 4 probabilistic budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import acceptance, bounds, codes, gf2, recovery, tanner
from .pcm import PcmParseError, format_pcm, read_pcm

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3, 4
SEED_ENV = "QLRC_SEED"
MAX_SEED = 2**64 - 1


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    restart_budget: int | None = None
    distance_cap: int = codes.DEFAULT_DISTANCE_CAP
    exhaustive_cap: int = 20_000
    output_path: Path | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= MAX_SEED:
            raise UsageError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        for name in ("restart_budget", "distance_cap", "exhaustive_cap"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise UsageError(f"{name.replace('_', '-')} must be >= 1")


def _seed_from(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        seed=_seed_from(args),
        restart_budget=getattr(args, "restarts", None),
        distance_cap=getattr(args, "distance_cap", codes.DEFAULT_DISTANCE_CAP),
        output_path=getattr(args, "out", None),
    )


def _load(path: str):
    try:
        return read_pcm(path)
    except PcmParseError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def cmd_bounds_sweep(args: argparse.Namespace) -> int:
    try:
        kinds = [bounds.BoundKind.parse(k) for k in args.bounds.split(",") if k.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.min is None or args.max is None:
        raise UsageError("--n-min and --n-max (range of the swept variable) are required")
    if args.min > args.max:
        raise UsageError(f"empty range: {args.min} > {args.max}")
    fixed = {k: getattr(args, k) for k in ("n", "d", "r", "t", "s")}
    fixed[args.sweep] = args.min
    if fixed["n"] is None:
        raise UsageError("--n is required when sweeping another variable")
    try:
        template = bounds.BoundParams(**fixed)
        table = bounds.sweep(kinds, template, args.sweep, range(args.min, args.max + 1))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(table.to_csv(), _config(args).output_path)
    return EXIT_OK


def cmd_check_exact(args: argparse.Namespace) -> int:
    H = _load(args.matrix)
    G = tanner.from_matrix(H)
    report = tanner.check_exact(G, args.r, args.t, args.s)
    if report.is_exact:
        print(f"exact ({args.r},{args.t},{args.s}): bits={G.n_bits} checks={G.n_checks}")
        return EXIT_OK
    print(f"not ({args.r},{args.t},{args.s})-exact: {report.first_violation()}")
    return EXIT_PRECONDITION


def _iterate(G: tanner.BipartiteGraph, m: int) -> tuple[tanner.BipartiteGraph, tanner.BipartiteGraph]:
    """Factors whose product is the m-th self-product of G."""
    half = codes.iterated_product(G, m - 1)
    return half, half


def cmd_product(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if args.iterate is not None:
        if args.matrix2 is not None:
            raise UsageError("--iterate takes a single matrix file")
        if args.iterate < 2:
            raise UsageError("--iterate must be >= 2")
        G1, G2 = _iterate(tanner.from_matrix(_load(args.matrix1)), args.iterate)
    else:
        if args.matrix2 is None:
            raise UsageError("two matrix files are required unless --iterate is given")
        G1 = tanner.from_matrix(_load(args.matrix1))
        G2 = tanner.from_matrix(_load(args.matrix2))
    try:
        r1, t1 = codes.infer_rt(G1)
        r2, t2 = codes.infer_rt(G2)
        css, cert = codes.build_product_code(G1, G2, r1, t1, r2, t2, distance_cap=cfg.distance_cap)
    except (codes.PreconditionFailed, gf2.NotSelfOrthogonal) as exc:
        raise DomainError(str(exc)) from None
    if cfg.output_path is not None:
        _emit(format_pcm(css.H), cfg.output_path)
    lines = [cert.summary()]
    for check in cert.appendix_report:
        dims = " ".join(f"{k}={v}" for k, v in check.dims.items())
        lines.append(f"appendix.{check.lemma_id}={'PASS' if check.passed else 'FAIL'} {dims}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify_paper_examples(args: argparse.Namespace) -> int:
    H = _load(args.matrix) if args.matrix else None
    results = acceptance.run_battery(H)
    if args.json:
        payload = {"passed": all(r.passed for r in results), "criteria": acceptance.results_as_dicts(results)}
        print(json.dumps(payload, indent=2))
    else:
        for r in results:
            print(r.line())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"first failing criterion: {failed[0].id} ({failed[0].name})", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_sample_sets(args: argparse.Namespace) -> int:
    cfg = _config(args)
    H = _load(args.matrix)
    try:
        F = tanner.recovery_family(tanner.from_matrix(H))
        cs = recovery.disjoint_correctable_sets(
            F, args.variant, d=args.d, seed=cfg.seed, max_restarts=cfg.restart_budget
        )
    except (recovery.RestartsExhausted, recovery.BoundNotMet) as exc:
        print(f"error: {exc}; raise the budget with --restarts", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    for label, cert in zip("AB", cs.certificates):
        problems = cert.violations(F)
        if problems:
            print(f"internal error: certificate {label} failed: {problems[0]}", file=sys.stderr)
            return EXIT_INTERNAL
    if cs.A & cs.B:
        print("internal error: A and B overlap", file=sys.stderr)
        return EXIT_INTERNAL
    out = [f"variant={args.variant} d={args.d} seed={cfg.seed}"]
    for label, members, cert in (("A", cs.A, cs.certificate_a), ("B", cs.B, cs.certificate_b)):
        out.append(f"{label}={sorted(members)} size={len(members)}")
        steps = []
        for k, (j, alpha) in enumerate(zip(cert.positions, cert.alphas)):
            steps.append(f"{j}:free" if k < cert.prefix_free_from else f"{j}:{alpha}")
        out.append(f"{label}.sequence={' '.join(steps)}")
    out.append(f"k_bound={cs.k_bound}")
    print("\n".join(out))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _seed_arg(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qlrc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("bounds-sweep", help="tabulate upper bounds on k as CSV")
    s.add_argument("--bounds", required=True, help="comma-separated ids: " + ",".join(k.value for k in bounds.BoundKind))
    s.add_argument("--sweep", choices=bounds.SWEEP_VARIABLES, default="n", help="variable to sweep (default n)")
    s.add_argument("--n-min", "--min", dest="min", type=int, help="first value of the swept variable")
    s.add_argument("--n-max", "--max", dest="max", type=int, help="last value of the swept variable")
    for name in ("n", "d", "r", "t", "s"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--out", type=Path, help="write CSV here instead of stdout")
    s.set_defaults(func=cmd_bounds_sweep)

    s = sub.add_parser("check-exact", help="test the (r,t,s)-exact condition of a .pcm matrix")
    s.add_argument("matrix")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--s", type=int, required=True)
    s.set_defaults(func=cmd_check_exact)

    s = sub.add_parser("product", help="build the product code of two exact Tanner graphs")
    s.add_argument("matrix1")
    s.add_argument("matrix2", nargs="?")
    s.add_argument("--out", type=Path, help="write the product parity-check matrix here")
    s.add_argument("--iterate", type=int, help="m-th self-product of matrix1 (m >= 2)")
    s.add_argument("--distance-cap", type=int, default=codes.DEFAULT_DISTANCE_CAP)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("verify-paper-examples", help="run the bundled acceptance battery")
    s.add_argument("--json", action="store_true", help="machine-readable output")
    s.add_argument("--matrix", help="replace the bundled Hamming matrix (mutation testing)")
    s.set_defaults(func=cmd_verify_paper_examples)

    s = sub.add_parser("sample-sets", help="construct two disjoint correctable sets")
    s.add_argument("matrix")
    s.add_argument("--variant", choices=recovery.VARIANTS, default="pe")
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--seed", type=_seed_arg, help=f"default from ${SEED_ENV}, else 0")
    s.add_argument("--restarts", type=int, help="restart budget (default 64 n)")
    s.set_defaults(func=cmd_sample_sets)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except Exception as exc:  # last-resort contract: exit 1, never a traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
