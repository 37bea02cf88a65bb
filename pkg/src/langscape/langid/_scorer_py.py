"""Pure-Python scoring kernel, the fallback when the extension is absent.

Accumulation order is token order within each (language, order) cell,
matching the compiled kernel add-for-add so both produce identical floats.
"""

from __future__ import annotations

import numpy as np


def accumulate(ids, order_idx, logprob, unseen):
    """Sum log probabilities of a token stream against every profile.

    ids: int32 array of vocabulary ids, -1 for out-of-vocabulary grams.
    order_idx: int8 array, n-gram order index per token.
    logprob: (languages, vocab) float64 matrix.
    unseen: (languages, orders) float64 matrix.

    Returns (sums, counts): per-language per-order log-prob totals and the
    per-order token counts.
    """
    n_lang = logprob.shape[0]
    n_orders = unseen.shape[1]
    id_list = ids.tolist()
    order_list = order_idx.tolist()
    n_tok = len(id_list)

    counts = [0] * n_orders
    for o in order_list:
        counts[o] += 1

    sums = np.zeros((n_lang, n_orders), dtype=np.float64)
    lp_rows = logprob.tolist()
    un_rows = unseen.tolist()
    for lang in range(n_lang):
        row = lp_rows[lang]
        fallback = un_rows[lang]
        acc = [0.0] * n_orders
        for t in range(n_tok):
            i = id_list[t]
            o = order_list[t]
            if i >= 0:
                acc[o] += row[i]
            else:
                acc[o] += fallback[o]
        sums[lang] = acc
    return sums, np.asarray(counts, dtype=np.int64)
