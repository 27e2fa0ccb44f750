"""Pure numpy fallback for the perpetuity simulation kernel.

Draws advance together one term at a time; finished draws drop out of the
active set. Arithmetic order matches the compiled kernel term for term.
"""

from __future__ import annotations

import numpy as np

from .rng import draw_keys, term_uniforms

CHUNK = 1 << 18


def _simulate_chunk(law, q, eps, max_terms, key, first, n):
    dkeys = draw_keys(key, first, n)
    values = np.zeros(n)
    prods = np.ones(n)
    terms = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    t = 0
    while active.size:
        t += 1
        values[active] += q * prods[active]
        m = law._invert(term_uniforms(dkeys[active], t))
        p = prods[active] * m
        prods[active] = p
        terms[active] = t
        active = active[~((p < eps) | (t >= max_terms))]
    return values, prods, terms


def simulate_block(law, q: float, eps: float, max_terms: int, key: int,
                   first: int, n: int):
    """Simulate draws ``first .. first+n-1`` of the substream ``key``.

    Returns ``(values, partial_products, terms)``.
    """
    out = [_simulate_chunk(law, q, eps, max_terms, key, s, min(CHUNK, first + n - s))
           for s in range(first, first + n, CHUNK)]
    if not out:
        return np.zeros(0), np.ones(0), np.zeros(0, dtype=np.int64)
    return tuple(np.concatenate(parts) for parts in zip(*out))
