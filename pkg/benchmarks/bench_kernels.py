"""Time the brute-force oracle with the compiled and the numpy scan kernels.

Usage: python3 benchmarks/bench_kernels.py [--bound 1000] [--repeat 3]
"""
import argparse
import time

from dioph import best_approx as ba
from dioph import _kernels
from dioph.gallery import GallerySpec, build

MATRICES = [(1, 101), (2, 102), (3, 103)]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    backends = ["python"]
    try:
        _kernels.get_backend("compiled")
        backends.insert(0, "compiled")
    except ImportError:
        print("compiled kernels not built; timing the python backend only")

    print(f"{'matrix':<14}{'kind':<11}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for n, seed in MATRICES:
        th = build(GallerySpec("random", n, seed)).theta
        for kind in ba.KINDS:
            times, seqs = [], []
            for b in backends:
                t, s = best_of(lambda: ba.brute_force(th, args.bound, kind, backend=b, limit=max(args.bound, ba.oracle_limit(kind))), args.repeat)
                times.append(t)
                seqs.append(s)
            assert all(s.same_records(seqs[0]) for s in seqs), "backends disagree"
            speed = f"{times[-1] / times[0]:>9.1f}x" if len(times) == 2 else ""
            print(f"{'n=%d s=%d' % (n, seed):<14}{kind:<11}" + "".join(f"{t:>11.3f}s" for t in times) + speed)


if __name__ == "__main__":
    main()
