"""Count Bethe solutions against dim V[nu] over random generic instances.

    python scripts/sweep_completeness.py --trials 20 --nmax 5
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from gaudin_lab.bethe import BAEOptions, bethe_basis_sv, factorization_defect, solve_bae, verify_eigenvector


@dataclass
class SweepConfig:
    nmax: int = 4
    trials: int = 10
    seed: int = 0
    starts: int = 24


def random_instance(rng, n):
    while True:
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        gaps = np.abs(z[:, None] - z[None, :]) + 10 * np.eye(n)
        if np.min(np.abs(z)) > 0.2 and np.min(gaps) > 0.2:
            break
    frac = rng.uniform(0.1, 0.4) + (0.5 if rng.random() < 0.5 else 0.0)
    return list(z), float(rng.integers(-2, 3) + frac)


def sweep(cfg: SweepConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in range(2, cfg.nmax + 1):
        for m in range(1, n // 2 + 1):
            found = worst_res = worst_eig = worst_fac = 0.0
            min_sv = np.inf
            t0 = time.perf_counter()
            for _ in range(cfg.trials):
                z, mu = random_instance(rng, n)
                res = solve_bae(z, mu, n - 2 * m, (1,) * n, BAEOptions(starts=cfg.starts, seed=cfg.seed))
                found += len(res) == comb(n, m)
                for s in res:
                    worst_res = max(worst_res, s.residual)
                    worst_eig = max(worst_eig, verify_eigenvector(s).max_error)
                    worst_fac = max(worst_fac, factorization_defect(s))
                if len(res):
                    min_sv = min(min_sv, bethe_basis_sv(res.solutions))
            rows.append({"n": n, "m": m, "dim": comb(n, m), "complete": int(found), "trials": cfg.trials,
                         "residual": worst_res, "eigen": worst_eig, "factorization": worst_fac,
                         "min_sv": float(min_sv), "seconds": time.perf_counter() - t0})
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(SweepConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    ap.add_argument("--json", help="write rows to this file")
    args = ap.parse_args()
    cfg = SweepConfig(**{k: getattr(args, k) for k in asdict(SweepConfig())})
    rows = sweep(cfg)
    print(f"{'n':>2} {'m':>2} {'dim':>4} {'complete':>9} {'residual':>9} {'eigen':>9} {'factor':>9} {'min sv':>9} {'s':>6}")
    for r in rows:
        print(f"{r['n']:>2} {r['m']:>2} {r['dim']:>4} {r['complete']:>4}/{r['trials']:<4} {r['residual']:9.1e} "
              f"{r['eigen']:9.1e} {r['factorization']:9.1e} {r['min_sv']:9.2e} {r['seconds']:6.1f}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
