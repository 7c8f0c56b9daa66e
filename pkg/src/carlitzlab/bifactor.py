"""Bivariate factorization and absolute irreducibility over finite fields.

The squarefree, y-separable core is factored by the classical lift-and-
recombine scheme: shear x -> x + lam*y until the polynomial is monic in y
with its full total degree, pick a fiber x = x0 whose specialization is
squarefree, factor that univariate fiber, Hensel-lift the fiber factors in
powers of (x - x0), and assemble true factors from subsets of lifted
factors, smallest subsets first, each candidate certified by exact
bivariate division.  General inputs reduce to the core by separable-part
extraction, a variable swap, or p-th-root descent.  When the base field is
too small to host a shear direction or a squarefree fiber, the search moves
to a canonical extension and the factors found there are merged along
Frobenius orbits back into base-field irreducibles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapError
from .fields import FieldCtx, embed, extension_of, prime_factors
from .polys import (BiPoly, UniPoly, bi_divmod_exact, bi_gcd, normalize_bi)
from .unifactor import count_roots, uni_factor


@dataclass
class BiFactorization:
    input: BiPoly
    factors: list[tuple[BiPoly, int]]  # canonical order, normalized
    unit: int                          # scalar code
    extension_used: int                # 1 when the base field sufficed


@dataclass
class AbsIrredVerdict:
    factor: BiPoly
    absolutely_irreducible: bool
    witness_degree: int | None = None          # least splitting extension
    witness_field: str | None = None
    witness_factors: list[BiPoly] | None = None


@dataclass
class ScreenResult:
    count: int
    level: int
    hint: str  # "likely-abs-irred-factor-present" | "likely-none"


# ---------------------------------------------------------------------------


def _bi_pth_root(g: BiPoly) -> BiPoly:
    ctx = g.ctx
    p = ctx.p
    terms = []
    for i, j, c in g.terms():
        assert i % p == 0 and j % p == 0, "not a p-th power"
        terms.append((i // p, j // p, ctx.pth_root(c)))
    return BiPoly.from_terms(ctx, terms)


def _trunc(f: UniPoly, prec: int) -> UniPoly:
    if len(f.coeffs) <= prec:
        return f
    return UniPoly(f.ctx, f.coeffs[:prec])


def _series_mul(a: list[UniPoly], b: list[UniPoly], prec: int,
                ctx: FieldCtx) -> list[UniPoly]:
    """Product of polys in y whose coefficients are u-series mod u^prec."""
    out = [UniPoly.zero(ctx) for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if not ai.is_zero():
            for j, bj in enumerate(b):
                if not bj.is_zero():
                    out[i + j] = out[i + j] + _trunc(ai * bj, prec)
    return out


def _hensel_lift(gser: list[UniPoly], fiber_factors: list[UniPoly],
                 prec: int, ctx: FieldCtx) -> list[list[UniPoly]]:
    """Lift the fiber factorization of gser (y-view, u-series coefficients,
    monic in y) to a congruence mod u^prec.  Returns one y-view per factor."""
    h = fiber_factors
    r = len(h)
    # partial-fraction inverses: tau_i = (prod_{j!=i} h_j)^(-1) mod h_i
    taus = []
    for i in range(r):
        b = UniPoly.one(ctx)
        for j in range(r):
            if j != i:
                b = (b * h[j]) % h[i]
        g, s, _ = b.ext_gcd(h[i])
        assert g.degree == 0 and g.coeffs == (1,), "fiber factors not coprime"
        taus.append(s % h[i])
    lifted = [[UniPoly.const(ctx, c) for c in f.coeffs] for f in h]
    for m in range(1, prec):
        prod = lifted[0]
        for i in range(1, r):
            prod = _series_mul(prod, lifted[i], m + 1, ctx)
        err = [gser[j] - prod[j] if j < len(prod) else gser[j]
               for j in range(len(gser))]
        em = UniPoly(ctx, [e[m] for e in err])
        if em.is_zero():
            continue
        for i in range(r):
            delta = (em * taus[i]) % h[i]
            if delta.is_zero():
                continue
            col = lifted[i]
            for j, c in enumerate(delta.coeffs):
                if c:
                    col[j] = col[j] + UniPoly(ctx, (0,) * m + (c,))
    return lifted


def _fiber_factor(R: BiPoly, seed: int):
    """Core factorization of a squarefree y-separable R over its own field.

    Returns the list of irreducible factors (canonically normalized), or
    None when the field has no shear direction or squarefree fiber.
    """
    ctx = R.ctx
    D = int(R.total_degree)
    top = R.top_form()
    lead = UniPoly(ctx, [top.coeff(i, D - i) for i in range(D + 1)])
    lam = None
    sheared = None
    for cand in range(ctx.order):
        if lead.eval(cand) == 0:
            continue
        sh = R.shear_x(cand)
        sh = sh.scale(ctx.inv(sh.coeff(0, D)))
        # shearing can turn a y-separable factor y-inseparable, which would
        # kill every fiber; each factor rules out at most one lam
        if not bi_gcd(sh, sh.partial_y()).is_constant():
            continue
        lam = cand
        sheared = sh
        break
    if lam is None:
        return None

    x0 = None
    fiber = None
    for cand in range(ctx.order):
        h = sheared.subst_x(cand)
        if h.degree == D and h.gcd(h.derivative()).degree == 0:
            x0 = cand
            fiber = h
            break
    if x0 is None:
        return None

    facs = uni_factor(fiber, seed)
    assert all(m == 1 for _, m in facs)
    parts = [f for f, _ in facs]
    if len(parts) == 1:
        return [normalize_bi(R)[1]]

    prec = 2 * D + 1
    gser = [col.compose_shift(x0) for col in sheared.to_y_view()]
    lifted = _hensel_lift(gser, parts, prec, ctx)

    out = []
    pool = list(range(len(parts)))
    current = sheared
    neg_x0 = ctx.neg(x0)
    while pool:
        found = False
        for size in range(1, len(pool)):
            for combo in itertools.combinations(pool, size):
                w = lifted[combo[0]]
                for i in combo[1:]:
                    w = _series_mul(w, lifted[i], prec, ctx)
                if any(col.degree > D for col in w):
                    continue
                cols = [col.compose_shift(neg_x0) for col in w]
                cand = BiPoly.from_y_view(ctx, cols)
                quo = bi_divmod_exact(current, cand)
                if quo is None:
                    continue
                out.append(cand)
                current = quo
                pool = [i for i in pool if i not in combo]
                found = True
                break
            if found:
                break
        if not found:
            out.append(current)
            pool = []
    return [normalize_bi(w.shear_x(ctx.neg(lam)))[1] for w in out]


def _descend(factors, base: FieldCtx, ext: FieldCtx) -> list[BiPoly]:
    """Merge Frobenius orbits of extension-field factors into base-field
    irreducibles."""
    q = base.order
    emb = embed(base, ext)

    def frob(w: BiPoly) -> BiPoly:
        return w.map_coeffs(lambda c: ext.pow(c, q))

    remaining = sorted(factors, key=lambda w: w.key())
    out = []
    while remaining:
        w = remaining.pop(0)
        orbit = [w]
        cur = frob(w)
        while cur != w:
            remaining.remove(cur)
            orbit.append(cur)
            cur = frob(cur)
        prod = orbit[0]
        for o in orbit[1:]:
            prod = prod * o
        down = prod.map_coeffs(emb.preimage, base)
        out.append(normalize_bi(down)[1])
    return out


def _factor_sqfree_separable(R: BiPoly, seed: int, ext_note: list[int]
                             ) -> list[BiPoly]:
    ctx = R.ctx
    if R.total_degree == 1:
        return [normalize_bi(R)[1]]
    D = int(R.total_degree)
    ext_deg = 1
    while True:
        if ext_deg == 1:
            got = _fiber_factor(R, seed)
            if got is not None:
                return got
        else:
            K = extension_of(ctx, ext_deg, max_order=None)
            R_ext = R.embed_into(embed(ctx, K))
            got = _fiber_factor(R_ext, seed)
            if got is not None:
                ext_note[0] = max(ext_note[0], ext_deg)
                return _descend(got, ctx, K)
        ext_deg += 1
        if ctx.order ** (ext_deg - 1) > 2 * D * D + 2 * D:
            raise RuntimeError("no usable fiber found (unreachable)")


def _factor_all(G: BiPoly, seed: int, ext_note: list[int]
                ) -> list[tuple[BiPoly, int]]:
    ctx = G.ctx
    out: list[tuple[BiPoly, int]] = []
    while not G.is_constant():
        Gy = G.partial_y()
        if Gy.is_zero():
            Gx = G.partial_x()
            if Gx.is_zero():
                root = _bi_pth_root(G)
                for w, m in _factor_all(root, seed, ext_note):
                    out.append((w, m * ctx.p))
            else:
                for w, m in _factor_all(G.swap_vars(), seed, ext_note):
                    out.append((normalize_bi(w.swap_vars())[1], m))
            return out
        C = bi_gcd(G, Gy)
        R = G if C.is_constant() else bi_divmod_exact(G, C)
        assert R is not None
        for w in _factor_sqfree_separable(R, seed, ext_note):
            m = 0
            while True:
                quo = bi_divmod_exact(G, w)
                if quo is None:
                    break
                G = quo
                m += 1
            assert m >= 1
            out.append((w, m))
    return out


def bi_factor(g: BiPoly, seed: int = 0) -> BiFactorization:
    """Complete irreducible factorization over the coefficient field.

    Factors are canonically normalized and sorted; unit * product of
    factors^multiplicity reproduces the input exactly.
    """
    if g.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    ext_note = [1]
    unit, mon = normalize_bi(g)
    if mon.is_constant():
        return BiFactorization(g, [], unit, 1)
    factors = _factor_all(mon, seed, ext_note)
    factors.sort(key=lambda t: (t[0].key(), t[1]))
    return BiFactorization(g, factors, unit, ext_note[0])


def is_abs_irreducible(g: BiPoly, seed: int = 0) -> AbsIrredVerdict:
    """Decide absolute irreducibility of an F_q-irreducible polynomial.

    An irreducible of total degree e factors over the algebraic closure
    into conjugate pieces whose count divides e, so testing the prime
    divisors r of e decides the question; the least witnessing r is also
    the least extension where any splitting happens.
    """
    fac = bi_factor(g, seed)
    if len(fac.factors) != 1 or fac.factors[0][1] != 1:
        raise ValueError("input polynomial is reducible over its field")
    w = fac.factors[0][0]
    ctx = w.ctx
    e = int(w.total_degree)
    for r in prime_factors(e):
        K = extension_of(ctx, r, max_order=None)
        w_ext = w.embed_into(embed(ctx, K))
        sub = bi_factor(w_ext, seed)
        if len(sub.factors) > 1 or sub.factors[0][1] > 1:
            return AbsIrredVerdict(
                factor=w, absolutely_irreducible=False, witness_degree=r,
                witness_field=K.spec,
                witness_factors=[f for f, m in sub.factors
                                 for _ in range(m)])
    return AbsIrredVerdict(factor=w, absolutely_irreducible=True)


def point_count_screen(g: BiPoly, n: int,
                       cap: int = 1 << 20) -> ScreenResult:
    """Advisory heuristic: count affine zeros of g over the degree-n
    extension and flag when the count exceeds half the field size.  Never
    authoritative; the rigorous answer comes from is_abs_irreducible."""
    ctx = g.ctx
    if ctx.order**n > cap:
        raise CapError(f"screen level {ctx.order}^{n} exceeds cap {cap}")
    K = ctx if n == 1 else extension_of(ctx, n, max_order=cap)
    gk = g if n == 1 else g.embed_into(embed(ctx, K))
    count = 0
    for x in range(K.order):
        fib = gk.subst_x(x)
        if fib.is_zero():
            count += K.order
        else:
            count += count_roots(fib, K)
    hint = ("likely-abs-irred-factor-present" if 2 * count > K.order
            else "likely-none")
    return ScreenResult(count=count, level=n, hint=hint)
