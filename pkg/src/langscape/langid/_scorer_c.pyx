# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scoring kernel for the per-record classification hot loop.

Must stay add-for-add identical to _scorer_py.accumulate: same traversal
order, plain IEEE double additions, no reassociation.
"""

import numpy as np


def accumulate(const int[::1] ids, const signed char[::1] order_idx,
               const double[:, ::1] logprob, const double[:, ::1] unseen):
    cdef Py_ssize_t n_lang = logprob.shape[0]
    cdef Py_ssize_t n_orders = unseen.shape[1]
    cdef Py_ssize_t n_tok = ids.shape[0]

    sums_arr = np.zeros((n_lang, n_orders), dtype=np.float64)
    counts_arr = np.zeros(n_orders, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef long long[::1] counts = counts_arr

    cdef Py_ssize_t lang, t
    cdef int i
    cdef signed char o

    for t in range(n_tok):
        counts[order_idx[t]] += 1

    for lang in range(n_lang):
        for t in range(n_tok):
            i = ids[t]
            o = order_idx[t]
            if i >= 0:
                sums[lang, o] += logprob[lang, i]
            else:
                sums[lang, o] += unseen[lang, o]

    return sums_arr, counts_arr
