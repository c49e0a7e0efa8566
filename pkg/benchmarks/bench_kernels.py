"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on the same inputs under both backends; the table shows the
best-of-N wall time per call and the speedup.
"""
import argparse
import math
import random
import sys
import timeit

from acars_audit import _pykernels
from acars_audit.cipher import ALPHABET

try:
    from acars_audit import _kernels
except ImportError:
    _kernels = None


def workloads(rng: random.Random):
    pans = ["".join(rng.choice("0123456789") for _ in range(16)) for _ in range(2000)]
    text = " ".join("".join(rng.choice(ALPHABET) for _ in range(rng.randint(3, 12))) for _ in range(3000))
    digits = " ".join(f"{rng.randrange(10**16):016d}" if rng.random() < 0.3 else "POS N47.5 E008.5"
                      for _ in range(2000))
    n_plain, n_pos = 30, 40
    logp = [[math.log(rng.random() + 1e-9) for _ in range(n_plain)] for _ in range(n_pos)]
    rows = [(rng.randrange(30), rng.randrange(n_pos)) for _ in range(20000)]
    return {
        "luhn_ok x2000": lambda k: [k.luhn_ok(p) for p in pans],
        "char_stats 30kB": lambda k: k.char_stats(text, ALPHABET),
        "digit_runs 40kB": lambda k: k.digit_runs(digits, 12, 19),
        "position_loglik 20k": lambda k: k.position_loglik(rows, logp, n_plain),
    }


def best(fn, impl, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(impl), number=1, repeat=repeat))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'kernel':<22}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, fn in workloads(random.Random(0)).items():
        assert fn(_pykernels) == fn(_kernels), name
        py, cy = best(fn, _pykernels, args.repeat), best(fn, _kernels, args.repeat)
        print(f"{name:<22}{py * 1e3:>12.2f}{cy * 1e3:>12.2f}{py / cy:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
