"""Univariate factorization over finite fields.

Pipeline: squarefree decomposition (with p-th-root descent), distinct-degree
splitting, then Cantor-Zassenhaus equal-degree splitting.  The equal-degree
stage is randomized; its generator is seeded from the input polynomial and
the caller's seed, so output is reproducible and independent of call order.
"""

from __future__ import annotations

import random

from .fields import FieldCtx, embed
from .polys import UniPoly, pth_power_test

DEFAULT_SCAN_THRESHOLD = 1 << 6
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _stable_seed(*ints: int) -> int:
    h = _FNV_OFFSET
    for v in ints:
        v = int(v)
        h ^= 0x9E3779B9  # value separator
        h = (h * _FNV_PRIME) % (1 << 64)
        while True:
            h ^= v & 0xFF
            h = (h * _FNV_PRIME) % (1 << 64)
            v >>= 8
            if not v:
                break
    return h


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Monic squarefree parts with multiplicities; product recovers f.monic()."""
    if f.is_zero():
        raise ValueError("zero polynomial has no squarefree decomposition")
    out: dict[UniPoly, int] = {}
    _squarefree(f.monic(), 1, out)
    return sorted(out.items(), key=lambda t: (t[1], t[0].key()))

def _squarefree(f: UniPoly, mult: int, out: dict) -> None:
    if f.is_constant():
        return
    fp = f.derivative()
    if fp.is_zero():
        g = pth_power_test(f)
        assert g is not None
        _squarefree(g.monic(), mult * f.ctx.p, out)
        return
    c = f.gcd(fp)
    w = f.divexact(c)
    i = 1
    while not w.is_constant():
        y = w.gcd(c)
        z = w.divexact(y)
        if z.degree >= 1:
            out[z.monic()] = out.get(z.monic(), 0) + mult * i
        w = y
        c = c.divexact(y)
        i += 1
    if not c.is_constant():
        g = pth_power_test(c)
        assert g is not None
        _squarefree(g.monic(), mult * f.ctx.p, out)


def distinct_degree(w: UniPoly) -> list[tuple[UniPoly, int]]:
    """(product of irreducibles of degree d, d) for monic squarefree w."""
    ctx = w.ctx
    q = ctx.order
    out = []
    f = w.monic()
    h = UniPoly.x(ctx) % f
    d = 0
    while f.degree >= 1:
        d += 1
        if f.degree < 2 * d:
            out.append((f, int(f.degree)))
            break
        h = h.pow_mod(q, f)
        g = f.gcd(h - UniPoly.x(ctx))
        if g.degree >= 1:
            out.append((g, d))
            f = f.divexact(g)
            h = h % f
    return out


def _trace_split(g: UniPoly, r: UniPoly, d: int) -> UniPoly:
    # char 2: additive trace down to F_2 of r, reduced mod g
    ctx = g.ctx
    acc = r % g
    t = acc
    for _ in range(ctx.k * d - 1):
        t = (t * t) % g
        acc = acc + t
    return g.gcd(acc)


def equal_degree(g: UniPoly, d: int, rng: random.Random) -> list[UniPoly]:
    """Split a monic product of distinct irreducibles, all of degree d."""
    ctx = g.ctx
    q = ctx.order
    if g.degree == d:
        return [g.monic()]
    while True:
        r = UniPoly(ctx, [rng.randrange(q) for _ in range(int(g.degree))])
        if r.degree < 1:
            continue
        h = g.gcd(r)
        if not 0 < h.degree < g.degree:
            if ctx.p == 2:
                h = _trace_split(g, r, d)
            else:
                s = r.pow_mod((q**d - 1) // 2, g)
                h = g.gcd(s - UniPoly.one(ctx))
        if 0 < h.degree < g.degree:
            rest = g.divexact(h)
            return equal_degree(h, d, rng) + equal_degree(rest, d, rng)


def uni_factor(h: UniPoly, seed: int = 0) -> list[tuple[UniPoly, int]]:
    """Complete factorization into monic irreducibles with multiplicities.

    The product of the factors equals h up to the leading coefficient.
    Output is sorted in the canonical polynomial order.
    """
    if h.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if h.is_constant():
        return []
    ctx = h.ctx
    rng = random.Random(_stable_seed(seed, ctx.p, ctx.k, *h.coeffs))
    out: list[tuple[UniPoly, int]] = []
    for part, mult in squarefree_decomposition(h):
        for prod, d in distinct_degree(part):
            for irr in equal_degree(prod, d, rng):
                out.append((irr, mult))
    out.sort(key=lambda t: (t[0].key(), t[1]))
    return out


def roots(h: UniPoly, seed: int = 0) -> list[int]:
    """Distinct roots of h in its own coefficient field, ascending codes."""
    if h.is_zero():
        raise ValueError("zero polynomial has every element as a root")
    ctx = h.ctx
    if h.degree < 1:
        return []
    q = ctx.order
    xq = UniPoly.x(ctx).pow_mod(q, h)
    lin = h.gcd(xq - UniPoly.x(ctx))
    if lin.degree < 1:
        return []
    rng = random.Random(_stable_seed(seed, 1, ctx.p, ctx.k, *h.coeffs))
    out = []
    for f in equal_degree(lin, 1, rng):
        out.append(ctx.neg(f.coeffs[0]))
    return sorted(out)


def count_roots(h: UniPoly, ctx: FieldCtx,
                scan_threshold: int = DEFAULT_SCAN_THRESHOLD) -> int:
    """Number of distinct roots of h in ctx.

    h may live over a subfield; its coefficients are embedded first.  Small
    fields are scanned directly; larger ones use deg gcd(x^q - x, h).  The
    crossover is configurable and the two paths agree everywhere.
    """
    if h.is_zero():
        raise ValueError("zero polynomial has every element as a root")
    if h.ctx is not ctx:
        h = h.embed_into(embed(h.ctx, ctx))
    if h.degree < 1:
        return 0
    q = ctx.order
    if q <= scan_threshold:
        return sum(1 for c in range(q) if h.eval(c) == 0)
    xq = UniPoly.x(ctx).pow_mod(q, h)
    g = h.gcd(xq - UniPoly.x(ctx))
    return int(g.degree) if g.degree >= 1 else 0
