"""Time the compiled and numpy kernels on the same inputs.

Usage::

    python benchmarks/bench_kernels.py [--n 500] [--block 22] [--repeat 5]

Prints the best-of-``repeat`` wall time of each kernel per backend and the
speed-up of the compiled one. Results are checked for equality first.
"""
import argparse
import timeit

import numpy as np

from lrdcp import _pykernels
from lrdcp.lrd_sim import simulate_fgn
from lrdcp.scores import ScoreSpec, make_scores


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=500)
    parser.add_argument("--block", type=int, default=22)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    try:
        from lrdcp import _kernels
    except ImportError:
        _kernels = None
        print("compiled kernels are not built; timing the numpy backend only")

    x = simulate_fgn(args.n, 0.7, 1).values
    v = make_scores(ScoreSpec.vdw(), args.n)[np.argsort(np.argsort(x))]
    scores = make_scores(ScoreSpec.wilcoxon(), args.block)
    cases = {
        f"sn_values(n={args.n})": lambda mod: mod.sn_values(v),
        f"window_sn_max(n={args.n}, l={args.block})": lambda mod: mod.window_sn_max(x, args.block, scores),
    }
    backends = {"python": _pykernels}
    if _kernels is not None:
        backends["cython"] = _kernels
        for name, fn in cases.items():
            if not np.array_equal(fn(_pykernels), fn(_kernels)):
                raise SystemExit(f"{name}: backends disagree")

    print(f"{'kernel':40s} {'backend':8s} {'best [ms]':>10s}")
    for name, fn in cases.items():
        best = {}
        for label, mod in backends.items():
            timer = timeit.Timer(lambda: fn(mod))
            loops, _ = timer.autorange()
            best[label] = min(timer.repeat(args.repeat, loops)) / loops
            print(f"{name:40s} {label:8s} {best[label] * 1e3:10.3f}")
        if "cython" in best:
            print(f"{'':40s} speed-up {best['python'] / best['cython']:9.1f}x")


if __name__ == "__main__":
    main()
