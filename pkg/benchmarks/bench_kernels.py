"""Timing comparison of the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--rows 4000] [--features 24] [--repeat 5]

Also cross-checks that both backends return identical results on the
benchmark inputs.
"""

import argparse
import time

import numpy as np

from lfg.kernels import available_backends
from lfg.models import DecisionTree, KNearestNeighbors


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=4000)
    parser.add_argument("--features", type=int, default=24)
    parser.add_argument("--classes", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    if "native" not in backends:
        print("compiled extension not built; run `pip install -e .` first")

    rng = np.random.default_rng(0)
    n_train = int(args.rows * 0.55)
    train = rng.normal(size=(n_train, args.features))
    test = rng.normal(size=(args.rows - n_train, args.features))
    labels = rng.integers(0, args.classes, n_train)

    print(f"rows={args.rows} (train {n_train}) features={args.features} "
          f"classes={args.classes} repeat={args.repeat}\n")
    print(f"{'kernel':<18} {'backend':<8} {'best time':>12} {'speedup':>9}")

    results = {}
    for kernel_name, call in [
        ("knn_predict(k=5)", lambda mod: mod.knn_predict(train, labels, test, 5, args.classes)),
        ("best_gini_split", lambda mod: mod.best_gini_split(train, labels, args.classes, 5)),
    ]:
        timings = {}
        outputs = {}
        for backend_name, mod in backends.items():
            timings[backend_name], outputs[backend_name] = timed(
                lambda m=mod: call(m), args.repeat
            )
        base = timings["pure"]
        for backend_name, seconds in timings.items():
            speedup = base / seconds if seconds else float("inf")
            print(f"{kernel_name:<18} {backend_name:<8} {seconds * 1000:>10.2f}ms "
                  f"{speedup:>8.1f}x")
        results[kernel_name] = outputs

    knn_outs = results["knn_predict(k=5)"]
    split_outs = results["best_gini_split"]
    if "native" in backends:
        assert np.array_equal(knn_outs["pure"], knn_outs["native"]), "knn outputs differ"
        assert split_outs["pure"] == split_outs["native"], "split outputs differ"
        print("\nbackends agree on all benchmark outputs")

    # whole-model comparison: full tree build and knn scoring
    print(f"\n{'model':<18} {'backend':<8} {'best time':>12}")
    import lfg.kernels as kernels_mod

    for backend_name, mod in backends.items():
        kernels_mod.knn_predict = mod.knn_predict
        kernels_mod.best_gini_split = mod.best_gini_split
        knn_t, _ = timed(
            lambda: KNearestNeighbors(5).fit(train, labels, args.classes).predict(test),
            args.repeat,
        )
        tree_t, _ = timed(
            lambda: DecisionTree(8, 5).fit(train, labels, args.classes).predict(test),
            args.repeat,
        )
        print(f"{'knn model':<18} {backend_name:<8} {knn_t * 1000:>10.2f}ms")
        print(f"{'tree model':<18} {backend_name:<8} {tree_t * 1000:>10.2f}ms")


if __name__ == "__main__":
    main()
