# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled SGD and random-walk kernels.

Semantics mirror ``_pykernels`` exactly: same splitmix64 stream, same draw
order, same sampling rules.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef double _INV53 = 1.0 / 9007199254740992.0
cdef double _MAX_LOGIT = 30.0


cdef inline uint64_t _mix(uint64_t* state) nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t* state) nogil:
    return <double>(_mix(state) >> 11) * _INV53


cdef inline Py_ssize_t _draw(const double[::1] cdf, double u) nogil:
    # first i with cdf[i] > u
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    if lo >= cdf.shape[0]:
        lo = cdf.shape[0] - 1
    return lo


cdef inline double _sigmoid(double f) nogil:
    if f > _MAX_LOGIT:
        f = _MAX_LOGIT
    elif f < -_MAX_LOGIT:
        f = -_MAX_LOGIT
    return 1.0 / (1.0 + exp(-f))


cdef inline bint _has(const int64_t[::1] indices, int64_t lo, int64_t hi, int64_t x) nogil:
    cdef int64_t end = hi, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if indices[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < end and indices[lo] == x


def splitmix_uniforms(uint64_t seed, Py_ssize_t count):
    cdef uint64_t state = seed
    out = np.empty(count)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(count):
        o[i] = _uniform(&state)
    return out


def node2vec_walks(const int64_t[::1] indptr, const int64_t[::1] indices,
                   const int64_t[::1] starts, Py_ssize_t walk_length,
                   double p, double q, uint64_t seed):
    cdef Py_ssize_t n_walks = starts.shape[0]
    walks_arr = np.empty((n_walks, walk_length), dtype=np.int64)
    cdef int64_t[:, ::1] walks = walks_arr
    cdef uint64_t state = seed
    cdef bint uniform = (p == 1.0 and q == 1.0)
    cdef double inv_p = 1.0 / p, inv_q = 1.0 / q
    cdef Py_ssize_t w, step, k, deg, maxdeg = 0
    cdef int64_t cur, prev, x, b, e, pb, pe
    cdef double u, total, target
    cdef Py_ssize_t v
    for v in range(indptr.shape[0] - 1):
        if indptr[v + 1] - indptr[v] > maxdeg:
            maxdeg = indptr[v + 1] - indptr[v]
    cum_arr = np.empty(max(maxdeg, 1))
    cdef double[::1] cum = cum_arr

    with nogil:
        for w in range(n_walks):
            cur = starts[w]
            prev = -1
            walks[w, 0] = cur
            for step in range(1, walk_length):
                b = indptr[cur]
                e = indptr[cur + 1]
                deg = e - b
                u = _uniform(&state)
                if deg == 0:
                    # stranded walker stays put; cannot happen from non-isolated starts
                    walks[w, step] = cur
                    continue
                if prev < 0 or uniform:
                    k = <Py_ssize_t>(u * deg)
                    if k >= deg:
                        k = deg - 1
                else:
                    pb = indptr[prev]
                    pe = indptr[prev + 1]
                    total = 0.0
                    for k in range(deg):
                        x = indices[b + k]
                        if x == prev:
                            total = total + inv_p
                        elif _has(indices, pb, pe, x):
                            total = total + 1.0
                        else:
                            total = total + inv_q
                        cum[k] = total
                    target = u * total
                    k = 0
                    while k < deg - 1 and not (cum[k] > target):
                        k += 1
                prev = cur
                cur = indices[b + k]
                walks[w, step] = cur
    return walks_arr


def sgns_train(const int64_t[:, ::1] walks, Py_ssize_t window, Py_ssize_t negative,
               const double[::1] noise_cdf, double[:, ::1] emb_in, double[:, ::1] emb_out,
               double lr0, Py_ssize_t epochs, uint64_t seed):
    cdef uint64_t state = seed
    cdef Py_ssize_t n_walks = walks.shape[0], length = walks.shape[1]
    cdef Py_ssize_t d = emb_in.shape[1]
    cdef double total = <double>(epochs * n_walks * length) + 1.0
    cdef double processed = 0.0, lr, f, g
    cdef Py_ssize_t ep, w, i, j, lo, hi, k, c, r
    cdef int64_t center, ctx, tgt
    neu_arr = np.zeros(d)
    cdef double[::1] neu = neu_arr
    with nogil:
        for ep in range(epochs):
            for w in range(n_walks):
                for i in range(length):
                    lr = 1.0 - processed / total
                    if lr < 1e-4:
                        lr = 1e-4
                    lr = lr * lr0
                    processed += 1.0
                    center = walks[w, i]
                    lo = i - window
                    if lo < 0:
                        lo = 0
                    hi = i + window + 1
                    if hi > length:
                        hi = length
                    for j in range(lo, hi):
                        if j == i:
                            continue
                        ctx = walks[w, j]
                        for c in range(d):
                            neu[c] = 0.0
                        for k in range(negative + 1):
                            if k == 0:
                                tgt = ctx
                            else:
                                tgt = _draw(noise_cdf, _uniform(&state))
                                if tgt == ctx:
                                    continue
                            f = 0.0
                            for c in range(d):
                                f = f + emb_in[center, c] * emb_out[tgt, c]
                            g = ((1.0 if k == 0 else 0.0) - _sigmoid(f)) * lr
                            for c in range(d):
                                neu[c] = neu[c] + g * emb_out[tgt, c]
                            for c in range(d):
                                emb_out[tgt, c] = emb_out[tgt, c] + g * emb_in[center, c]
                        for c in range(d):
                            emb_in[center, c] = emb_in[center, c] + neu[c]


def line_train(const int64_t[::1] arc_src, const int64_t[::1] arc_dst, Py_ssize_t negative,
               const double[::1] noise_cdf, double[:, ::1] emb, double[:, ::1] ctx,
               Py_ssize_t samples, double lr0, uint64_t seed):
    cdef uint64_t state = seed
    cdef Py_ssize_t m = arc_src.shape[0], d = emb.shape[1]
    cdef Py_ssize_t s, e, k, c
    cdef int64_t a, b, tgt
    cdef double lr, f, g
    err_arr = np.zeros(d)
    cdef double[::1] err = err_arr
    with nogil:
        for s in range(samples):
            lr = 1.0 - <double>s / <double>samples
            if lr < 1e-4:
                lr = 1e-4
            lr = lr * lr0
            e = <Py_ssize_t>(_uniform(&state) * m)
            if e >= m:
                e = m - 1
            a = arc_src[e]
            b = arc_dst[e]
            for c in range(d):
                err[c] = 0.0
            for k in range(negative + 1):
                if k == 0:
                    tgt = b
                else:
                    tgt = _draw(noise_cdf, _uniform(&state))
                    if tgt == a or tgt == b:
                        continue
                f = 0.0
                for c in range(d):
                    f = f + emb[a, c] * ctx[tgt, c]
                g = ((1.0 if k == 0 else 0.0) - _sigmoid(f)) * lr
                for c in range(d):
                    err[c] = err[c] + g * ctx[tgt, c]
                for c in range(d):
                    ctx[tgt, c] = ctx[tgt, c] + g * emb[a, c]
            for c in range(d):
                emb[a, c] = emb[a, c] + err[c]
