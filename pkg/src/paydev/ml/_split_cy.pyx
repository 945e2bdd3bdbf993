# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled split-search kernel (compiled twin of _split_py).

Same contract and same score expression as _split_py.best_split; the two
must return bit-identical results. Scores come from exact int64 class
counts, so the only float operations are two divisions and one addition
per candidate, identical to the numpy path.
"""

from libc.stdlib cimport free, malloc, qsort

import numpy as np


cdef struct ValY:
    double v
    long long cy


cdef int _cmp_valy(const void* a, const void* b) noexcept nogil:
    cdef double av = (<const ValY*> a).v
    cdef double bv = (<const ValY*> b).v
    if av < bv:
        return -1
    if av > bv:
        return 1
    return 0


def best_split(double[:, ::1] X, const signed char[::1] y,
               const long long[::1] idx, const long long[::1] feats):
    """See _split_py.best_split for the contract."""
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t n_feats = feats.shape[0]
    cdef long long pos = 0, neg
    cdef Py_ssize_t i, k
    cdef long long f, best_f = -1
    cdef long long nl, pl, ql, nr, pr, qr, num_l, num_r
    cdef double score, best_score, best_thr = 0.0
    cdef ValY* buf

    for i in range(n):
        pos += y[idx[i]]
    neg = n - pos
    best_score = <double> (n * n - pos * pos - neg * neg) / <double> n

    buf = <ValY*> malloc(n * sizeof(ValY))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(n_feats):
                f = feats[k]
                for i in range(n):
                    buf[i].v = X[idx[i], f]
                    buf[i].cy = y[idx[i]]
                qsort(buf, n, sizeof(ValY), _cmp_valy)

                pl = 0
                for i in range(n - 1):
                    pl += buf[i].cy
                    if buf[i].v != buf[i + 1].v:
                        nl = i + 1
                        ql = nl - pl
                        nr = n - nl
                        pr = pos - pl
                        qr = neg - ql
                        num_l = nl * nl - pl * pl - ql * ql
                        num_r = nr * nr - pr * pr - qr * qr
                        score = (<double> num_l) / (<double> nl) \
                            + (<double> num_r) / (<double> nr)
                        if score < best_score:
                            best_f = f
                            best_thr = (buf[i].v + buf[i + 1].v) / 2.0
                            best_score = score
    finally:
        free(buf)

    return int(best_f), best_thr, best_score
