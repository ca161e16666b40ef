"""Time each numeric kernel in both implementations.

Run as ``python3 benchmarks/bench_kernels.py``. The numba timings
exclude JIT compilation (one warmup call per kernel); outputs are also
cross-checked bitwise so the table can't silently compare different
math. Input sizes are chosen to resemble a mid-sized scenario, not the
tiny fixtures the tests use.
"""

import argparse
import time

import numpy as np

from metaselect.learners._kernels import USING_NUMBA, kernel_pairs


def bench_inputs(name, rng):
    if name == "best_split_reg":
        n = 20000
        values = np.sort(rng.normal(size=n))
        return (values, rng.normal(size=n), rng.uniform(0.1, 2.0, size=n), 5)
    if name == "best_split_cls":
        n = 20000
        values = np.sort(rng.normal(size=n))
        labels = rng.integers(0, 4, size=n).astype(np.int64)
        return (values, labels, rng.uniform(0.1, 2.0, size=n), 4, 5)
    if name == "pairwise_sq_dists":
        return (rng.normal(size=(400, 32)), rng.normal(size=(300, 32)))
    if name == "kmeans_accumulate":
        x = rng.normal(size=(20000, 16))
        assign = rng.integers(0, 32, size=20000).astype(np.int64)
        return (x, assign, 32)
    if name == "tree_apply":
        return full_tree(depth=12) + (rng.normal(size=(20000, 16)),)
    raise SystemExit(f"no benchmark inputs for kernel {name!r}")


def full_tree(depth):
    """A complete binary tree: internal nodes split random features at 0."""
    n_internal = 2**depth - 1
    n_nodes = 2 ** (depth + 1) - 1
    feature = np.full(n_nodes, -1, dtype=np.int64)
    threshold = np.zeros(n_nodes)
    left = np.full(n_nodes, -1, dtype=np.int64)
    right = np.full(n_nodes, -1, dtype=np.int64)
    feature[:n_internal] = np.arange(n_internal) % 16
    left[:n_internal] = 2 * np.arange(n_internal) + 1
    right[:n_internal] = 2 * np.arange(n_internal) + 2
    return feature, threshold, left, right


def best_of(fn, args, repeats):
    timings = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn(*args)
        timings.append(time.perf_counter() - started)
    return min(timings)


def as_tuple(result):
    return result if isinstance(result, tuple) else (result,)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed calls per kernel; best-of is reported")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"active family: {'numba' if USING_NUMBA else 'numpy'} "
          f"(METASELECT_NUMBA flag)")
    header = f"{'kernel':<22}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, np_impl, nb_impl in kernel_pairs():
        inputs = bench_inputs(name, rng)
        np_out = np_impl(*inputs)
        nb_out = nb_impl(*inputs)  # warmup doubles as the JIT compile
        for a, b in zip(as_tuple(np_out), as_tuple(nb_out)):
            np.testing.assert_array_equal(np.asarray(a), np.asarray(b))
        np_ms = best_of(np_impl, inputs, args.repeats) * 1e3
        nb_ms = best_of(nb_impl, inputs, args.repeats) * 1e3
        print(f"{name:<22}{np_ms:>12.3f}{nb_ms:>12.3f}{np_ms / nb_ms:>9.1f}x")


if __name__ == "__main__":
    main()
