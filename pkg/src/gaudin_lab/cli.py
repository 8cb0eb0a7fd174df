"""Command-line harness: ``gaudin-lab {solve,verify,fiber,series,report}``.

All output files are deterministic JSON. Wall times are left out unless
``--timings`` is given so that reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .bethe import BAEOptions, solve_bae
from .kzb import KZBSingularError, KZBSystem, build_eigenfunction
from .scalars import is_exact_scalar, parse_scalar, to_complex
from .serialize import dumps
from .suites import FAIL, SUITES, RunConfig, run_suite
from .wronski import NonGenericError, wronski_fiber


def _scalar_list(text: str) -> list:
    return [parse_scalar(p) for p in text.split(",") if p.strip()]


def _int_list(text: str) -> list:
    return [int(p) for p in text.split(",") if p.strip()]


def _add_space(p: argparse.ArgumentParser, weight: bool = True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--n", type=int, help="number of sites, each V_1")
    g.add_argument("--ms", type=_int_list, help="comma-separated highest weights")
    if weight:
        w = p.add_mutually_exclusive_group()
        w.add_argument("--m", type=int, help="number of Bethe roots (nu = M - 2m)")
        w.add_argument("--nu", type=int, help="weight of the block")
    p.add_argument("--mu", type=parse_scalar, help="spectral parameter, e.g. 1/3 or 0.4")
    p.add_argument("--z", type=_scalar_list, help="comma-separated poles (default: random integers in [1, 100])")
    p.add_argument("--backend", choices=["auto", "exact", "float"], default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=24, help="Newton starts per round")
    p.add_argument("--tol", type=float, default=1e-8, help="verification tolerance")


def _config(args) -> RunConfig:
    if args.ms is not None:
        ms = tuple(args.ms)
    elif args.n is not None:
        ms = (1,) * args.n
    else:
        ms = (1, 1)
    backend = args.backend
    if backend == "auto":
        values = [v for v in [args.mu, *(args.z or [])] if v is not None]
        backend = "exact" if all(is_exact_scalar(v) for v in values) else "float"
    return RunConfig(ms=ms, m=getattr(args, "m", None), nu=getattr(args, "nu", None), mu=args.mu,
                     z=tuple(args.z) if args.z else None, backend=backend, tol=args.tol,
                     K=getattr(args, "K", 8), starts=args.starts, seed=args.seed)


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_solve(args) -> int:
    cfg = _config(args).resolve()
    nu = cfg.weight()
    res = solve_bae([to_complex(v) for v in cfg.z], to_complex(cfg.mu), nu, cfg.ms,
                    BAEOptions(starts=cfg.starts, seed=cfg.seed))
    records = [s.to_record() for s in res.solutions]
    _write(args.out, dumps(records))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "root", "re", "im", "residual"])
            for i, s in enumerate(res.solutions):
                for j, t in enumerate(s.canonical):
                    w.writerow([i, j, repr(t.real), repr(t.imag), repr(s.residual)])
    note = "; ".join(res.notes)
    print(f"{len(res.solutions)} of {res.expected_count} solutions" + (f" ({note})" if note else ""),
          file=sys.stderr)
    if res.assumption_violated:
        return 0
    return 0 if res.complete else 1


def cmd_verify(args) -> int:
    cfg = _config(args)
    reports = run_suite(args.suite, cfg)
    for rep in reports:
        print(rep.summary())
    if args.out:
        payload = [r.to_record(args.timings) for r in reports]
        _write(args.out, dumps(payload if len(payload) > 1 else payload[0]))
    return 0 if all(r.ok for r in reports) else 1


def cmd_fiber(args) -> int:
    a = args.a
    opts = BAEOptions(starts=args.starts, seed=args.seed)
    try:
        fib = wronski_fiber(a, args.zeta, args.m, args.l, opts)
    except NonGenericError as exc:
        print(f"non-generic: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.out, dumps(fib.to_record()))
    print(f"{fib.count} of {fib.expected} fiber points", file=sys.stderr)
    return 0 if fib.complete else 1


def cmd_series(args) -> int:
    cfg = _config(args)
    if cfg.mu is None:
        print("error: --mu is required", file=sys.stderr)
        return 2
    system = KZBSystem.build(cfg.ms, cfg.backend)
    d = system.space.dim(0)
    if args.v:
        v = cfg.scalars(args.v)
    else:
        v = [1] + [0] * (d - 1)
        v = cfg.scalars(v)
    (mu,) = cfg.scalars([cfg.mu])
    try:
        psi = build_eigenfunction(v, mu, args.K, system=system)
    except KZBSingularError as exc:
        print(f"error: singular recursion at order {exc.k}: {exc}", file=sys.stderr)
        return 1
    rec = psi.to_record()
    rec["ms"] = list(cfg.ms)
    _write(args.out, dumps(rec))
    return 0


def cmd_report(args) -> int:
    ok = True
    for path in args.files:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        for rep in data if isinstance(data, list) else [data]:
            print(f"{path}: suite {rep['suite']}")
            for c in rep["checks"]:
                print(f"  [{c['status']:>18}] {c['name']:<44} defect={c['defect']}  ({c['anchor']})")
                ok = ok and c["status"] != FAIL
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaudin-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve the Bethe ansatz equations")
    _add_space(p)
    p.add_argument("--out", default="solutions.json", help="output file ('-' for stdout)")
    p.add_argument("--csv", help="also write a root table as CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="run verification suites")
    _add_space(p)
    p.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    p.add_argument("--K", type=int, default=8, help="series truncation order")
    p.add_argument("--out", default="report.json", help="JSON report ('-' for stdout, '' to skip)")
    p.add_argument("--timings", action="store_true", help="include wall times in the JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fiber", help="compute a fiber of the Wronski map")
    p.add_argument("--a", type=_scalar_list, required=True, help="comma-separated Wronskian coefficients")
    p.add_argument("--zeta", type=parse_scalar, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=24)
    p.add_argument("--out", default="fiber.json")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("series", help="dump an H0 eigenfunction as a truncated series")
    _add_space(p, weight=False)
    p.add_argument("--K", type=int, default=8)
    p.add_argument("--v", type=_scalar_list, help="leading vector in V[0] (default: first basis vector)")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("report", help="summarize saved verification reports")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
