"""Pure-Python training kernel for skip-gram with negative sampling.

Fallback used when the compiled extension is unavailable.  Every
arithmetic operation (including the inlined SplitMix64 recurrence, the
two-branch sigmoid and the softplus loss) mirrors the compiled kernel
expression for expression, in the same order, so both backends produce
bit-identical vectors from the same inputs.  Keep the two files in sync.
"""

from __future__ import annotations

from math import exp, log1p

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def train_epoch(tokens, offsets, syn0, syn1, noise_prob, noise_alias,
                window, negatives, lr_start, lr_end,
                tokens_done, total_tokens, rng_state):
    """One pass over all walks.  Mutates syn0/syn1 in place.

    Returns (rng_state, tokens_done, loss_sum) so the caller can chain
    epochs on one continuous random stream and learning-rate schedule.
    """
    s0 = syn0.tolist()
    s1 = syn1.tolist()
    probs = noise_prob.tolist()
    aliases = noise_alias.tolist()
    toks = tokens.tolist()
    offs = offsets.tolist()
    table_size = len(probs)
    dim = syn0.shape[1]
    work = [0.0] * dim
    state = rng_state & _MASK
    loss_sum = 0.0

    for w in range(len(offs) - 1):
        start = offs[w]
        end = offs[w + 1]
        for i in range(start, end):
            lr = lr_start + (lr_end - lr_start) * (tokens_done / total_tokens)
            center = toks[i]

            state = (state + _GAMMA) & _MASK
            z = state
            z = ((z ^ (z >> 30)) * _MIX1) & _MASK
            z = ((z ^ (z >> 27)) * _MIX2) & _MASK
            z = z ^ (z >> 31)
            b = 1 + z % window

            lo = i - b
            if lo < start:
                lo = start
            hi = i + b
            if hi > end - 1:
                hi = end - 1
            vc = s0[center]
            for j in range(lo, hi + 1):
                if j == i:
                    continue
                context = toks[j]
                for m in range(dim):
                    work[m] = 0.0
                for k in range(negatives + 1):
                    if k == 0:
                        target = context
                        label = 1.0
                    else:
                        state = (state + _GAMMA) & _MASK
                        z = state
                        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
                        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
                        z = z ^ (z >> 31)
                        idx = z % table_size
                        state = (state + _GAMMA) & _MASK
                        z = state
                        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
                        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
                        z = z ^ (z >> 31)
                        u = (z >> 11) * 2.0 ** -53
                        target = idx if u < probs[idx] else aliases[idx]
                        if target == context:
                            continue
                        label = 0.0
                    ut = s1[target]
                    dot = 0.0
                    for m in range(dim):
                        dot += vc[m] * ut[m]
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
                        work[m] += g * ut[m]
                    for m in range(dim):
                        ut[m] += g * vc[m]
                for m in range(dim):
                    vc[m] += work[m]
            tokens_done += 1

    syn0[:] = s0
    syn1[:] = s1
    return state, tokens_done, loss_sum
