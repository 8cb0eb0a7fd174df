"""Census of Wronski fibers: point counts, dictionary defects and the graded character.

    python scripts/fiber_census.py --trials 10 --nmax 4
"""

from __future__ import annotations

import argparse
from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from gaudin_lab.wronski import (
    NonGenericError,
    dictionary_defect,
    graded_character,
    kernel_dictionary_defect,
    weyl_diagram_defect,
    wronski_fiber,
)


@dataclass
class CensusConfig:
    nmax: int = 4
    trials: int = 10
    seed: int = 1
    maxdeg: int = 8


def random_a(rng, n):
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = np.poly(b)
    return [complex(c[s] * (-1) ** s) for s in range(1, n + 1)]


def random_zeta(rng):
    # stays a distance from (1/4)Z so that 2 zeta + nu/2 is never an integer
    return float(rng.uniform(0.03, 0.22) + 0.25 * rng.integers(-4, 4))


def census(cfg: CensusConfig):
    rng = np.random.default_rng(cfg.seed)
    for n in range(2, cfg.nmax + 1):
        for m in range(0, n + 1):
            l = n - m
            counts, dic, ker, weyl = [], 0.0, 0.0, 0.0
            for _ in range(cfg.trials):
                try:
                    fib = wronski_fiber(random_a(rng, n), random_zeta(rng), m, l)
                except NonGenericError:
                    continue
                counts.append(fib.count)
                dic = max(dic, dictionary_defect(fib))
                for pt in fib.points:
                    ker = max(ker, kernel_dictionary_defect(pt))
                    weyl = max(weyl, weyl_diagram_defect(pt))
            yield n, m, l, comb(n, m), counts, dic, ker, weyl


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(CensusConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    args = ap.parse_args()
    cfg = CensusConfig(**{k: getattr(args, k) for k in asdict(CensusConfig())})
    print(f"{'n':>2} {'m':>2} {'l':>2} {'deg':>4} {'counts':<16} {'dictionary':>10} {'kernel':>9} {'weyl':>9}")
    for n, m, l, deg, counts, dic, ker, weyl in census(cfg):
        seen = ",".join(str(c) for c in sorted(set(counts)))
        print(f"{n:>2} {m:>2} {l:>2} {deg:>4} {seen:<16} {dic:10.1e} {ker:9.1e} {weyl:9.1e}")
    print("\ngraded character of the fiber algebra, coefficients of a^0..a^%d:" % cfg.maxdeg)
    for n in range(1, cfg.nmax + 1):
        for m in range(0, n // 2 + 1):
            print(f"  (m, l) = ({m}, {n - m}): {graded_character(m, n - m, cfg.maxdeg)}")


if __name__ == "__main__":
    main()
