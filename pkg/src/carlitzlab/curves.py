"""Projective plane curves: smoothness certification and the curve built
from a polynomial f, namely F(x,z) - y^d - b*y^(d-1)*z - a*z^d with F the
degree-d homogenization of f.

Smoothness is decided exactly over the algebraic closure.  On each standard
affine chart the form and its three partials give a bivariate system; a
common zero is located (or ruled out) by gcd reductions plus resultant
elimination, with candidate coordinates taken in the canonical extension
generated by each irreducible factor.  Singular verdicts carry a witness
point that is re-verified by direct substitution.

The (a, b) search follows the recipe the smoothness analysis suggests: a
must avoid the critical values of f derived from the distinguished point
x0 = -b(d-1)/d (when p does not divide d), and when p divides d the
z-partial must not vanish at any point at infinity.  Screens only reject;
every accepted pair is certified by the full Jacobian check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapError
from .fields import FieldCtx, embed, extension_of
from .polys import (BiPoly, UniPoly, bi_divmod_exact, bi_gcd, homogenize,
                    pth_power_test, sylvester_resultant_y)
from .unifactor import roots, uni_factor


class TernaryForm:
    """Homogeneous polynomial in (x, y, z) over a finite field."""

    __slots__ = ("ctx", "degree", "terms")

    def __init__(self, ctx: FieldCtx, degree: int, terms):
        self.ctx = ctx
        self.degree = degree
        clean = {}
        for exps, c in dict(terms).items():
            if c == 0:
                continue
            i, j, k = exps
            if i < 0 or j < 0 or k < 0 or i + j + k != degree:
                raise ValueError(f"term x^{i}y^{j}z^{k} is not "
                                 f"homogeneous of degree {degree}")
            clean[(i, j, k)] = c
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def coeff(self, i: int, j: int, k: int) -> int:
        return self.terms.get((i, j, k), 0)

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return (isinstance(other, TernaryForm) and self.ctx is other.ctx
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.ctx), self.degree, self.key()))

    def __str__(self):
        from .textforms import render_terms
        return render_terms(self.ctx, self.terms, ("x", "y", "z"))

    def partial(self, var: int) -> "TernaryForm":
        ctx = self.ctx
        out = {}
        for (i, j, k), c in self.terms.items():
            e = (i, j, k)[var]
            if e == 0:
                continue
            cc = ctx.mul(c, e % ctx.p)
            if cc == 0:
                continue
            exps = list((i, j, k))
            exps[var] = e - 1
            key = tuple(exps)
            out[key] = ctx.add(out.get(key, 0), cc)
        return TernaryForm(ctx, max(self.degree - 1, 0),
                           {e: c for e, c in out.items() if c})

    def chart(self, var: int) -> BiPoly:
        """Dehomogenize by setting the given variable to 1; the remaining
        coordinates keep their (x, y, z) order as the BiPoly's (x, y)."""
        keep = [v for v in range(3) if v != var]
        terms = []
        for exps, c in self.terms.items():
            terms.append((exps[keep[0]], exps[keep[1]], c))
        return BiPoly.from_terms(self.ctx, terms)

    def eval(self, a: int, b: int, c: int) -> int:
        ctx = self.ctx
        acc = 0
        for (i, j, k), co in self.terms.items():
            v = ctx.mul(co, ctx.pow(a, i))
            v = ctx.mul(v, ctx.pow(b, j))
            v = ctx.mul(v, ctx.pow(c, k))
            acc = ctx.add(acc, v)
        return acc

    def map_coeffs(self, fn, ctx: FieldCtx | None = None) -> "TernaryForm":
        return TernaryForm(ctx or self.ctx, self.degree,
                           {e: fn(c) for e, c in self.terms.items()})

    def embed_into(self, emb) -> "TernaryForm":
        return self.map_coeffs(emb.map, emb.dst)


@dataclass
class SingularWitness:
    field: str                      # field spec of the coordinates
    point: tuple[int, int, int]     # projective coordinates as codes


@dataclass
class SmoothCertificate:
    status: str                     # "smooth" | "singular" | "unknown"
    witness: SingularWitness | None = None


@dataclass
class PlaneCurve:
    form: TernaryForm
    degree: int
    certificate: SmoothCertificate
    genus: int | None               # (d-1)(d-2)/2, only when smooth

    @classmethod
    def from_form(cls, form: TernaryForm, certify: bool = True
                  ) -> "PlaneCurve":
        if form.is_zero():
            raise ValueError("zero form does not define a curve")
        d = form.degree
        if certify:
            cert = jacobian_smooth_check(form)
        else:
            cert = SmoothCertificate("unknown")
        g = (d - 1) * (d - 2) // 2 if cert.status == "smooth" else None
        return cls(form=form, degree=d, certificate=cert, genus=g)


@dataclass
class CurveSearchTrace:
    a: int
    b: int
    field: str
    x0: int | None
    forbidden_values: tuple[int, ...]
    rejected: list[tuple[str, int, int, str]]   # (field, a, b, reason)
    notes: list[str] = field(default_factory=list)


# --------------------------------------------------------------- zero search


def _least_root_witness(h: UniPoly, K: FieldCtx):
    """(field, root) for the least root of the irreducible h, moving to the
    canonical extension of degree deg h when needed."""
    e = int(h.degree)
    if e == 1:
        return K, roots(h)[0]
    M = extension_of(K, e, max_order=None)
    hM = h.embed_into(embed(K, M))
    return M, roots(hM)[0]


def _point_on(w: BiPoly):
    """Any zero of a nonconstant bivariate over a canonical extension."""
    ctx = w.ctx
    if w.deg_y == 0:
        h = uni_factor(w.subst_y(0))[0][0]
        M, r = _least_root_witness(h, ctx)
        return M, r, 0
    lead = w.to_y_view()[-1]
    level = 1
    while True:
        K = ctx if level == 1 else extension_of(ctx, level, max_order=None)
        wK = w if level == 1 else w.embed_into(embed(ctx, K))
        leadK = lead if level == 1 else lead.embed_into(embed(ctx, K))
        for cand in range(K.order):
            if leadK.eval(cand) == 0:
                continue
            h = uni_factor(wK.subst_x(cand))[0][0]
            M, r = _least_root_witness(h, K)
            x_star = cand if M is K else embed(K, M).map(cand)
            return M, x_star, r
        level += 1


def _check_x_candidates(U: UniPoly, system: list[BiPoly]):
    """Search for a common zero of the system whose x-coordinate is a root
    of U, exhaustively over the factor fields of U."""
    ctx = U.ctx
    if U.degree < 1:
        return None
    for h, _ in uni_factor(U):
        e = int(h.degree)
        if e == 1:
            K, hK, sysK = ctx, h, system
        else:
            K = extension_of(ctx, e, max_order=None)
            emb = embed(ctx, K)
            hK = h.embed_into(emb)
            sysK = [p.embed_into(emb) for p in system]
        for x_star in roots(hK):
            fibers = [p.subst_x(x_star) for p in sysK]
            live = [f for f in fibers if not f.is_zero()]
            if not live:
                return K, x_star, 0
            if any(f.degree == 0 for f in live):
                continue
            g = live[0]
            for f in live[1:]:
                g = g.gcd(f)
                if g.degree == 0:
                    break
            if g.degree == 0:
                continue
            hy = uni_factor(g)[0][0]
            M, y_star = _least_root_witness(hy, K)
            xM = x_star if M is K else embed(K, M).map(x_star)
            return M, xM, y_star
    return None


def _common_zero(polys: list[BiPoly]):
    """A common zero of the system over the algebraic closure, as
    (field, x, y) in a canonical extension, or None if there is none."""
    ctx = polys[0].ctx
    live = [p for p in polys if not p.is_zero()]
    if not live:
        return ctx, 0, 0
    for p in live:
        if p.is_constant():
            return None
    if len(live) == 1:
        return _point_on(live[0])
    W = live[0]
    for p in live[1:]:
        W = bi_gcd(W, p)
        if W.is_constant():
            break
    if not W.is_constant():
        return _point_on(W)
    pure = [p for p in live if p.deg_y == 0]
    if pure:
        return _check_x_candidates(pure[0].subst_y(0), live)
    srt = sorted(live, key=lambda p: (p.deg_y, p.key()))
    A, B = srt[0], srt[1]
    h = bi_gcd(A, B)
    if not h.is_constant():
        # V(A, B) = V(h) union V(A/h, B/h); intersect each with the rest
        rest = [p for p in live if p is not A and p is not B]
        got = _common_zero(rest + [h]) if rest else _point_on(h)
        if got:
            return got
        return _common_zero(rest + [bi_divmod_exact(A, h),
                                    bi_divmod_exact(B, h)])
    return _check_x_candidates(sylvester_resultant_y(A, B), live)


def _chart_point(chart_var: int, u: int, v: int) -> tuple[int, int, int]:
    if chart_var == 2:
        return (u, v, 1)
    if chart_var == 1:
        return (u, 1, v)
    return (1, u, v)


def jacobian_smooth_check(curve) -> SmoothCertificate:
    """Decide whether the form and its three partials share a projective
    zero over the algebraic closure; singular verdicts carry a verified
    witness point."""
    form = curve.form if isinstance(curve, PlaneCurve) else curve
    if form.is_zero():
        raise ValueError("zero form")
    partials = [form.partial(v) for v in range(3)]
    for chart_var in (2, 1, 0):
        system = [form.chart(chart_var)] + [p.chart(chart_var)
                                            for p in partials]
        got = _common_zero(system)
        if got is None:
            continue
        K, u, v = got
        point = _chart_point(chart_var, u, v)
        if K is form.ctx:
            formK, partsK = form, partials
        else:
            emb = embed(form.ctx, K)
            formK = form.embed_into(emb)
            partsK = [p.embed_into(emb) for p in partials]
        assert formK.eval(*point) == 0
        assert all(p.eval(*point) == 0 for p in partsK)
        return SmoothCertificate("singular", SingularWitness(K.spec, point))
    return SmoothCertificate("smooth")


# ------------------------------------------------------------ paper curve


def paper_form(f: UniPoly, a: int, b: int) -> TernaryForm:
    """F(x,z) - y^d - b*y^(d-1)*z - a*z^d for monic f with f(0) = 0."""
    ctx = f.ctx
    d = int(f.degree)
    F = homogenize(f, d)
    terms = {}
    for i, k, c in F.terms():
        terms[(i, 0, k)] = c
    terms[(0, d, 0)] = ctx.neg(1)
    if b:
        terms[(0, d - 1, 1)] = ctx.neg(b)
    if a:
        terms[(0, 0, d)] = ctx.neg(a)
    return TernaryForm(ctx, d, terms)


def _mu_d_elements(K: FieldCtx, d: int) -> tuple[FieldCtx, list[int]]:
    """All d-th roots of unity over the canonical splitting extension."""
    p = K.p
    dp = d
    while dp % p == 0:
        dp //= p
    m = 1
    while (K.order**m - 1) % dp != 0:
        m += 1
    M = K if m == 1 else extension_of(K, m, max_order=None)
    poly = UniPoly(M, tuple([M.neg(1)] + [0] * (dp - 1) + [1]))
    return M, roots(poly)


def construct_paper_curve(f: UniPoly, max_ext_degree: int = 4
                          ) -> tuple[PlaneCurve, CurveSearchTrace]:
    """Search (a, b) in canonical order for a smooth curve, escalating to
    canonical extensions when the base field has no usable pair."""
    ctx = f.ctx
    if f.is_zero() or f.degree < 2:
        raise ValueError("construction requires deg f >= 2")
    d = int(f.degree)
    if f.eval(0) != 0:
        raise ValueError("normalization violated: f(0) != 0")
    if pth_power_test(f) is not None:
        raise ValueError("normalization violated: f is a p-th power")
    notes = []
    if not f.is_monic():
        notes.append(f"rescaled by unit inverse of lc code {f.lc()}")
        f = f.monic()
    p = ctx.p
    rejected: list[tuple[str, int, int, str]] = []
    for level in range(1, max_ext_degree + 1):
        if level == 1:
            K, fK = ctx, f
        else:
            K = extension_of(ctx, level, max_order=None)
            fK = f.embed_into(embed(ctx, K))
        fpK = fK.derivative()
        c1 = fK[d - 1]
        mu_field = mu = None
        if d % p == 0:
            mu_field, mu = _mu_d_elements(K, d)
        for a in range(1, K.order):
            for b in range(K.order):
                x0 = None
                if d % p != 0:
                    ratio = K.mul((d - 1) % p, K.inv(d % p))
                    x0 = K.neg(K.mul(b, ratio))
                    v2 = K.add(a, K.mul(K.pow(x0, d - 1), K.add(x0, b)))
                    forbidden = (a, v2)
                    hit = fpK.gcd(fK - UniPoly.const(K, v2)).degree > 0
                    if not hit and d >= 3:
                        hit = fpK.gcd(fK - UniPoly.const(K, a)).degree > 0
                    if hit:
                        rejected.append((K.spec, a, b, "critical-value-hit"))
                        continue
                else:
                    forbidden = (a,)
                    if b != 0 and d >= 3 and \
                            fpK.gcd(fK - UniPoly.const(K, a)).degree > 0:
                        rejected.append((K.spec, a, b, "critical-value-hit"))
                        continue
                    # at infinity every partial except the z-one vanishes,
                    # so b must dodge c1*zeta^(d-1) for all zeta^d = 1
                    embM = (None if mu_field is K
                            else embed(K, mu_field))
                    c1M = c1 if embM is None else embM.map(c1)
                    bM = b if embM is None else embM.map(b)
                    bad = any(mu_field.mul(c1M, mu_field.pow(z, d - 1)) == bM
                              for z in mu)
                    if bad:
                        rejected.append(
                            (K.spec, a, b, "infinity-partial-vanishes"))
                        continue
                form = paper_form(fK, a, b)
                cert = jacobian_smooth_check(form)
                if cert.status == "smooth":
                    curve = PlaneCurve(form=form, degree=d, certificate=cert,
                                       genus=(d - 1) * (d - 2) // 2)
                    trace = CurveSearchTrace(
                        a=a, b=b, field=K.spec, x0=x0,
                        forbidden_values=forbidden, rejected=rejected,
                        notes=notes)
                    return curve, trace
                rejected.append((K.spec, a, b, "jacobian-singular"))
    raise CapError(f"no smooth (a, b) found within extension degree "
                   f"{max_ext_degree}")


def points_at_infinity(curve: PlaneCurve, ctx: FieldCtx
                       ) -> list[tuple[int, int, int]]:
    """Rational points of the curve on the line z = 0 over ctx; these are
    (zeta : 1 : 0) for the d-th roots of unity zeta in ctx."""
    base = curve.form.ctx
    if ctx.p != base.p or ctx.k % base.k != 0:
        raise ValueError("ctx is not an extension of the curve's field")
    d = curve.degree
    poly = UniPoly(ctx, tuple([ctx.neg(1)] + [0] * (d - 1) + [1]))
    return [(z, 1, 0) for z in roots(poly)]
