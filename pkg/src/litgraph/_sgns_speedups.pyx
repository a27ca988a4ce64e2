# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled training kernel for skip-gram with negative sampling.

Mirrors _sgns_pure.train_epoch operation for operation: the SplitMix64
recurrence, the two-branch sigmoid, the softplus loss and every update
run in the same order on the same float64 values, so the two backends
return bit-identical results.  Compiled with -ffp-contract=off to keep
multiply-add sequences un-fused.  Keep the two files in sync.
"""

import numpy as np

from libc.math cimport exp, log1p

cdef unsigned long long _GAMMA = 0x9E3779B97F4A7C15ULL
cdef unsigned long long _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long _MIX2 = 0x94D049BB133111EBULL


cdef inline unsigned long long _next(unsigned long long *state) noexcept nogil:
    cdef unsigned long long z
    state[0] = state[0] + _GAMMA
    z = state[0]
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


def train_epoch(long long[::1] tokens, long long[::1] offsets,
                double[:, ::1] syn0, double[:, ::1] syn1,
                double[::1] noise_prob, long long[::1] noise_alias,
                int window, int negatives,
                double lr_start, double lr_end,
                long long tokens_done, long long total_tokens,
                unsigned long long rng_state):
    """One pass over all walks.  Mutates syn0/syn1 in place.

    Returns (rng_state, tokens_done, loss_sum) so the caller can chain
    epochs on one continuous random stream and learning-rate schedule.
    """
    cdef Py_ssize_t dim = syn0.shape[1]
    cdef unsigned long long table_size = <unsigned long long> noise_prob.shape[0]
    cdef double[::1] work = np.zeros(dim, dtype=np.float64)
    cdef unsigned long long state = rng_state
    cdef unsigned long long z, ww = <unsigned long long> window
    cdef double loss_sum = 0.0
    cdef double lr, u, dot, f, g, label, e, x
    cdef long long center, context, target, idx
    cdef Py_ssize_t w, i, j, k, m, start, end, lo, hi, b

    with nogil:
        for w in range(offsets.shape[0] - 1):
            start = <Py_ssize_t> offsets[w]
            end = <Py_ssize_t> offsets[w + 1]
            for i in range(start, end):
                lr = lr_start + (lr_end - lr_start) * (<double> tokens_done / <double> total_tokens)
                center = tokens[i]

                z = _next(&state)
                b = <Py_ssize_t> (1 + z % ww)

                lo = i - b
                if lo < start:
                    lo = start
                hi = i + b
                if hi > end - 1:
                    hi = end - 1
                for j in range(lo, hi + 1):
                    if j == i:
                        continue
                    context = tokens[j]
                    for m in range(dim):
                        work[m] = 0.0
                    for k in range(negatives + 1):
                        if k == 0:
                            target = context
                            label = 1.0
                        else:
                            z = _next(&state)
                            idx = <long long> (z % table_size)
                            z = _next(&state)
                            u = <double> (z >> 11) * (2.0 ** -53)
                            target = idx if u < noise_prob[idx] else noise_alias[idx]
                            if target == context:
                                continue
                            label = 0.0
                        dot = 0.0
                        for m in range(dim):
                            dot += syn0[center, m] * syn1[target, m]
                        if dot >= 0.0:
                            f = 1.0 / (1.0 + exp(-dot))
                        else:
                            e = exp(dot)
                            f = e / (1.0 + e)
                        g = (label - f) * lr
                        if label == 1.0:
                            x = -dot
                        else:
                            x = dot
                        if x > 0.0:
                            loss_sum += x + log1p(exp(-x))
                        else:
                            loss_sum += log1p(exp(x))
                        for m in range(dim):
                            work[m] += g * syn1[target, m]
                        for m in range(dim):
                            syn1[target, m] += g * syn0[center, m]
                    for m in range(dim):
                        syn0[center, m] += work[m]
                tokens_done += 1

    return state, tokens_done, loss_sum
