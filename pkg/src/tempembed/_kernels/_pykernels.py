"""Pure-Python twins of the compiled kernels (same RNG stream, same rules)."""

from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV53 = 1.0 / 9007199254740992.0
_MAX_LOGIT = 30.0


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next() >> 11) * _INV53


def _sigmoid(f: float) -> float:
    f = min(max(f, -_MAX_LOGIT), _MAX_LOGIT)
    return 1.0 / (1.0 + math.exp(-f))


def _draw(cdf: list, u: float) -> int:
    return min(bisect_right(cdf, u), len(cdf) - 1)


def splitmix_uniforms(seed: int, count: int) -> np.ndarray:
    rng = SplitMix64(seed)
    return np.array([rng.uniform() for _ in range(count)])


def node2vec_walks(indptr, indices, starts, walk_length, p, q, seed):
    rng = SplitMix64(seed)
    indptr = np.asarray(indptr)
    indices = np.asarray(indices)
    uniform = p == 1.0 and q == 1.0
    inv_p, inv_q = 1.0 / p, 1.0 / q
    walks = np.empty((len(starts), walk_length), dtype=np.int64)
    for w, start in enumerate(np.asarray(starts).tolist()):
        cur, prev = start, -1
        walks[w, 0] = cur
        for step in range(1, walk_length):
            b, e = indptr[cur], indptr[cur + 1]
            deg = e - b
            u = rng.uniform()
            if deg == 0:
                walks[w, step] = cur
                continue
            nbrs = indices[b:e]
            if prev < 0 or uniform:
                k = min(int(u * deg), deg - 1)
            else:
                prev_nbrs = indices[indptr[prev]:indptr[prev + 1]]
                pos = np.searchsorted(prev_nbrs, nbrs)
                linked = (pos < len(prev_nbrs)) & (prev_nbrs[np.minimum(pos, len(prev_nbrs) - 1)] == nbrs)
                weights = np.where(nbrs == prev, inv_p, np.where(linked, 1.0, inv_q))
                cum = np.cumsum(weights)
                k = min(int(np.searchsorted(cum, u * cum[-1], side="right")), deg - 1)
            prev, cur = cur, int(nbrs[k])
            walks[w, step] = cur
    return walks


def sgns_train(walks, window, negative, noise_cdf, emb_in, emb_out, lr0, epochs, seed):
    rng = SplitMix64(seed)
    cdf = list(np.asarray(noise_cdf, dtype=float))
    walks = np.asarray(walks)
    n_walks, length = walks.shape
    total = float(epochs * n_walks * length) + 1.0
    processed = 0.0
    for _ in range(epochs):
        for w in range(n_walks):
            row = walks[w].tolist()
            for i, center in enumerate(row):
                lr = lr0 * max(1.0 - processed / total, 1e-4)
                processed += 1.0
                h = emb_in[center]
                for j in range(max(i - window, 0), min(i + window + 1, length)):
                    if j == i:
                        continue
                    ctx = row[j]
                    neu = np.zeros_like(h)
                    for k in range(negative + 1):
                        if k == 0:
                            tgt = ctx
                        else:
                            tgt = _draw(cdf, rng.uniform())
                            if tgt == ctx:
                                continue
                        out = emb_out[tgt]
                        g = ((1.0 if k == 0 else 0.0) - _sigmoid(float(h @ out))) * lr
                        neu += g * out
                        out += g * h
                    h += neu


def line_train(arc_src, arc_dst, negative, noise_cdf, emb, ctx, samples, lr0, seed):
    rng = SplitMix64(seed)
    cdf = list(np.asarray(noise_cdf, dtype=float))
    src = np.asarray(arc_src).tolist()
    dst = np.asarray(arc_dst).tolist()
    m = len(src)
    for s in range(samples):
        lr = lr0 * max(1.0 - s / samples, 1e-4)
        e = min(int(rng.uniform() * m), m - 1)
        a, b = src[e], dst[e]
        h = emb[a]
        err = np.zeros_like(h)
        for k in range(negative + 1):
            if k == 0:
                tgt = b
            else:
                tgt = _draw(cdf, rng.uniform())
                if tgt == a or tgt == b:
                    continue
            out = ctx[tgt]
            g = ((1.0 if k == 0 else 0.0) - _sigmoid(float(h @ out))) * lr
            err += g * out
            out += g * h
        h += err
