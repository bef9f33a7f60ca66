"""Compare the compiled and pure-Python kernels on one synthetic snapshot.

    python benchmarks/bench_kernels.py --nodes 200 --repeat 3

Both backends consume the same random stream, so the script also checks that
their outputs agree before reporting timings.
"""

import argparse
import time

import numpy as np

from tempembed import _kernels
from tempembed.embed import noise_cdf
from tempembed.graph import synth_dynamic_sbm


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=200)
    parser.add_argument("--dim", type=int, default=32)
    parser.add_argument("--walk-length", type=int, default=40)
    parser.add_argument("--walks-per-node", type=int, default=2)
    parser.add_argument("--line-samples", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if _kernels.compiled is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")

    snap = synth_dynamic_sbm(args.nodes, 4, 2, 0.2, 0.01, 0.0, seed=0).snapshots[0]
    indptr, indices = snap.csr()
    active = np.flatnonzero(snap.degrees() > 0).astype(np.int64)
    starts = np.tile(active, args.walks_per_node)
    cdf = noise_cdf(snap.degrees())
    src = np.concatenate([snap.src, snap.dst]).astype(np.int64)
    dst = np.concatenate([snap.dst, snap.src]).astype(np.int64)
    init = (np.random.default_rng(0).random((args.nodes, args.dim)) - 0.5) / args.dim

    def cases(impl):
        walks = impl.node2vec_walks(indptr, indices, starts, args.walk_length, 0.5, 2.0, 1)

        def walk():
            return impl.node2vec_walks(indptr, indices, starts, args.walk_length, 0.5, 2.0, 1)

        def sgns():
            e_in, e_out = init.copy(), np.zeros_like(init)
            impl.sgns_train(walks, 8, 5, cdf, e_in, e_out, 0.025, 1, 2)
            return e_in

        def line():
            emb = init.copy()
            impl.line_train(src, dst, 5, cdf, emb, emb, args.line_samples, 0.025, 3)
            return emb

        return {"node2vec walks": walk, "skip-gram SGD": sgns, "LINE SGD": line}

    fast, slow = cases(_kernels.compiled), cases(_kernels.python)
    print(f"{'kernel':<16}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}  outputs")
    for name in fast:
        t_c, out_c = _best_of(fast[name], args.repeat)
        t_p, out_p = _best_of(slow[name], 1)
        same = "identical" if np.array_equal(out_c, out_p) else (
            "match" if np.allclose(out_c, out_p, rtol=0, atol=1e-12) else "DIFFER")
        print(f"{name:<16}{t_c:>12.4f}{t_p:>12.4f}{t_p / t_c:>9.0f}x  {same}")


if __name__ == "__main__":
    main()
