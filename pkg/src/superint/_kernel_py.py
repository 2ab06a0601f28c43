"""Pure-Python term-arithmetic kernel.

Terms are dicts mapping exponent tuples (one slot per ring symbol,
ints, negatives allowed for Laurent symbols) to exact rational
coefficients.  Zero coefficients are never stored.

superint._speedups is the compiled twin of this module; the two must
stay behaviourally identical (tests/test_kernel.py checks that).
"""

from __future__ import annotations

BACKEND = "pure"


def mul_terms(a, b):
    """Raw product of two term dicts (no rewrite normalization)."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            c = ca * cb
            prev = get(key)
            if prev is None:
                out[key] = c
            else:
                c = prev + c
                if c:
                    out[key] = c
                else:
                    del out[key]
    return out


def square_terms(a):
    """Raw square of a term dict; exploits symmetry of the term pairs."""
    items = list(a.items())
    n = len(items)
    out = {}
    get = out.get
    for idx in range(n):
        ka, ca = items[idx]
        key = tuple(x + x for x in ka)
        c = ca * ca
        prev = get(key)
        if prev is None:
            out[key] = c
        else:
            c = prev + c
            if c:
                out[key] = c
            else:
                del out[key]
        twice = ca + ca
        for jdx in range(idx + 1, n):
            kb, cb = items[jdx]
            key = tuple(x + y for x, y in zip(ka, kb))
            c = twice * cb
            prev = get(key)
            if prev is None:
                out[key] = c
            else:
                c = prev + c
                if c:
                    out[key] = c
                else:
                    del out[key]
    return out


def add_into(acc, other, coeff=None):
    """In-place acc += other (optionally scaled by a rational coeff)."""
    get = acc.get
    if coeff is None:
        for key, c in other.items():
            prev = get(key)
            if prev is None:
                acc[key] = c
            else:
                c = prev + c
                if c:
                    acc[key] = c
                else:
                    del acc[key]
    else:
        if not coeff:
            return acc
        for key, c in other.items():
            c = c * coeff
            prev = get(key)
            if prev is None:
                acc[key] = c
            else:
                c = prev + c
                if c:
                    acc[key] = c
                else:
                    del acc[key]
    return acc


def scale_terms(a, coeff):
    if not coeff:
        return {}
    return {key: c * coeff for key, c in a.items()}


def neg_terms(a):
    return {key: -c for key, c in a.items()}
