"""Dense univariate and bivariate polynomials over a FieldCtx.

Coefficients are stored as integer element codes.  UniPoly keeps an
ascending coefficient tuple with no trailing zeros; the zero polynomial has
an empty tuple and degree NEG_INF.  BiPoly keeps a rectangular matrix
indexed by (degree in x, degree in y), trimmed on both axes.

Polynomials are immutable; arithmetic returns fresh objects and refuses to
mix field contexts.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldCtx, Embedding

NEG_INF = float("-inf")


def _same_ctx(a, b):
    if a.ctx is not b.ctx:
        raise ValueError("polynomials belong to different field contexts")


class UniPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (1,))

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, (c,))

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def from_ints(cls, ctx, ints):
        """Coefficients given as plain integers, mapped into the prime field."""
        return cls(ctx, tuple(i % ctx.p for i in ints))

    # -- structure ------------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def key(self):
        """Canonical sort key: by degree, then coefficients constant-first."""
        return (len(self.coeffs), self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __str__(self):
        from .textforms import render_uni
        return render_uni(self)

    __repr__ = __str__

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        _same_ctx(self, other)
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = ctx.add(out[i], c)
        return UniPoly(ctx, out)

    def __neg__(self) -> "UniPoly":
        ctx = self.ctx
        return UniPoly(ctx, [ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        _same_ctx(self, other)
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(ctx)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
        return UniPoly(ctx, out)

    def scale(self, c: int) -> "UniPoly":
        ctx = self.ctx
        if c == 0:
            return UniPoly.zero(ctx)
        return UniPoly(ctx, [ctx.mul(c, a) for a in self.coeffs])

    def shift_up(self, n: int) -> "UniPoly":
        """Multiply by x^n."""
        if self.is_zero():
            return self
        return UniPoly(self.ctx, (0,) * n + self.coeffs)

    def monic(self) -> "UniPoly":
        if self.is_zero() or self.is_monic():
            return self
        return self.scale(self.ctx.inv(self.lc()))

    def divmod(self, other: "UniPoly"):
        _same_ctx(self, other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        rem = list(self.coeffs)
        dB = len(other.coeffs) - 1
        inv_lead = ctx.inv(other.lc())
        if len(rem) - 1 < dB:
            return UniPoly.zero(ctx), self
        quo = [0] * (len(rem) - dB)
        for top in range(len(rem) - 1, dB - 1, -1):
            c = rem[top]
            if c:
                c = ctx.mul(c, inv_lead)
                quo[top - dB] = c
                for i, bi in enumerate(other.coeffs):
                    rem[top - dB + i] = ctx.sub(rem[top - dB + i],
                                                ctx.mul(c, bi))
        return UniPoly(ctx, quo), UniPoly(ctx, rem)

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def divexact(self, other: "UniPoly"):
        """Quotient if the division is exact, else None."""
        q, r = self.divmod(other)
        return q if r.is_zero() else None

    def gcd(self, other: "UniPoly") -> "UniPoly":
        _same_ctx(self, other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def ext_gcd(self, other: "UniPoly"):
        """(g, s, t) monic with s*self + t*other = g."""
        ctx = self.ctx
        r0, r1 = self, other
        s0, s1 = UniPoly.one(ctx), UniPoly.zero(ctx)
        t0, t1 = UniPoly.zero(ctx), UniPoly.one(ctx)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = ctx.inv(r0.lc())
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def pow_mod(self, e: int, m: "UniPoly") -> "UniPoly":
        result = UniPoly.one(self.ctx) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def derivative(self) -> "UniPoly":
        ctx = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(ctx.mul(i % ctx.p, self.coeffs[i]))
        return UniPoly(ctx, out)

    def eval(self, a: int) -> int:
        ctx = self.ctx
        r = 0
        for c in reversed(self.coeffs):
            r = ctx.add(ctx.mul(r, a), c)
        return r

    def eval_vec(self, xs: np.ndarray) -> np.ndarray:
        ctx = self.ctx
        out = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            out = ctx.vec_mul(out, xs)
            if c:
                out = ctx.vec_add(out, np.full_like(xs, c))
        return out

    def compose_shift(self, s: int) -> "UniPoly":
        """f(x + s)."""
        ctx = self.ctx
        if s == 0 or self.is_zero():
            return self
        # Horner: f(x+s) = (...((c_n)(x+s) + c_{n-1})(x+s) + ...)
        shifted = UniPoly(ctx, (s, 1))
        out = UniPoly.zero(ctx)
        for c in reversed(self.coeffs):
            out = out * shifted + UniPoly.const(ctx, c)
        return out

    def map_coeffs(self, fn, ctx: FieldCtx | None = None) -> "UniPoly":
        return UniPoly(ctx or self.ctx, [fn(c) for c in self.coeffs])

    def embed_into(self, emb: Embedding) -> "UniPoly":
        if emb.src is not self.ctx:
            raise ValueError("embedding source does not match polynomial context")
        return UniPoly(emb.dst, [emb.map(c) for c in self.coeffs])


class BiPoly:
    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: FieldCtx, rows=()):
        # rows[i][j] = coefficient of x^i y^j; trim zero fringe rows/columns
        mat = [list(r) for r in rows]
        while mat and not any(mat[-1]):
            mat.pop()
        width = 0
        for r in mat:
            w = len(r)
            while w and r[w - 1] == 0:
                w -= 1
            width = max(width, w)
        self.ctx = ctx
        self.rows = tuple(tuple(r[:width]) + (0,) * (width - len(r[:width]))
                          for r in mat) if width else ()

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, ((c,),))

    @classmethod
    def from_terms(cls, ctx, terms):
        """terms: iterable of (i, j, code)."""
        terms = list(terms)
        if not terms:
            return cls.zero(ctx)
        dx = max(t[0] for t in terms)
        dy = max(t[1] for t in terms)
        mat = [[0] * (dy + 1) for _ in range(dx + 1)]
        for i, j, c in terms:
            mat[i][j] = ctx.add(mat[i][j], c)
        return cls(ctx, mat)

    @classmethod
    def x(cls, ctx):
        return cls(ctx, ((0,), (1,)))

    @classmethod
    def y(cls, ctx):
        return cls(ctx, ((0, 1),))

    @classmethod
    def from_uni_x(cls, f: UniPoly):
        return cls(f.ctx, tuple((c,) for c in f.coeffs))

    @classmethod
    def from_uni_y(cls, f: UniPoly):
        return cls(f.ctx, (f.coeffs,) if f.coeffs else ())

    # -- structure ------------------------------------------------------------

    def is_zero(self):
        return not self.rows

    def is_constant(self):
        return len(self.rows) <= 1 and (not self.rows or len(self.rows[0]) <= 1)

    @property
    def deg_x(self):
        return len(self.rows) - 1 if self.rows else NEG_INF

    @property
    def deg_y(self):
        return len(self.rows[0]) - 1 if self.rows else NEG_INF

    @property
    def total_degree(self):
        if not self.rows:
            return NEG_INF
        return max(i + j for i, row in enumerate(self.rows)
                   for j, c in enumerate(row) if c)

    def terms(self):
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if c:
                    yield (i, j, c)

    def coeff(self, i: int, j: int) -> int:
        if 0 <= i < len(self.rows) and 0 <= j < len(self.rows[i]):
            return self.rows[i][j]
        return 0

    def key(self):
        return (len(self.rows), tuple(len(r) for r in self.rows), self.rows)

    def __eq__(self, other):
        return (isinstance(other, BiPoly) and self.ctx is other.ctx
                and self.rows == other.rows)

    def __hash__(self):
        return hash((id(self.ctx), self.rows))

    def __str__(self):
        from .textforms import render_bi
        return render_bi(self)

    __repr__ = __str__

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        _same_ctx(self, other)
        ctx = self.ctx
        nr = max(len(self.rows), len(other.rows))
        nc = max(len(self.rows[0]) if self.rows else 0,
                 len(other.rows[0]) if other.rows else 0)
        mat = [[0] * nc for _ in range(nr)]
        for src in (self, other):
            for i, row in enumerate(src.rows):
                for j, c in enumerate(row):
                    if c:
                        mat[i][j] = ctx.add(mat[i][j], c)
        return BiPoly(ctx, mat)

    def __neg__(self) -> "BiPoly":
        ctx = self.ctx
        return BiPoly(ctx, [[ctx.neg(c) for c in row] for row in self.rows])

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        _same_ctx(self, other)
        ctx = self.ctx
        if self.is_zero() or other.is_zero():
            return BiPoly.zero(ctx)
        ra, ca = len(self.rows), len(self.rows[0])
        rb, cb = len(other.rows), len(other.rows[0])
        mat = [[0] * (ca + cb - 1) for _ in range(ra + rb - 1)]
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if c:
                    for u, row2 in enumerate(other.rows):
                        for v, d in enumerate(row2):
                            if d:
                                mat[i + u][j + v] = ctx.add(
                                    mat[i + u][j + v], ctx.mul(c, d))
        return BiPoly(ctx, mat)

    def scale(self, c: int) -> "BiPoly":
        ctx = self.ctx
        if c == 0:
            return BiPoly.zero(ctx)
        return BiPoly(ctx, [[ctx.mul(c, a) for a in row] for row in self.rows])

    def pow(self, e: int) -> "BiPoly":
        result = BiPoly.const(self.ctx, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- calculus and substitution ---------------------------------------------

    def partial_x(self) -> "BiPoly":
        ctx = self.ctx
        mat = []
        for i in range(1, len(self.rows)):
            f = i % ctx.p
            mat.append([ctx.mul(f, c) for c in self.rows[i]])
        return BiPoly(ctx, mat)

    def partial_y(self) -> "BiPoly":
        ctx = self.ctx
        mat = []
        for row in self.rows:
            mat.append([ctx.mul(j % ctx.p, row[j])
                        for j in range(1, len(row))])
        return BiPoly(ctx, mat)

    def swap_vars(self) -> "BiPoly":
        if not self.rows:
            return self
        nr, nc = len(self.rows), len(self.rows[0])
        return BiPoly(self.ctx, [[self.rows[i][j] for i in range(nr)]
                                 for j in range(nc)])

    def eval(self, a: int, b: int) -> int:
        ctx = self.ctx
        r = 0
        for row in reversed(self.rows):
            inner = 0
            for c in reversed(row):
                inner = ctx.add(ctx.mul(inner, b), c)
            r = ctx.add(ctx.mul(r, a), inner)
        return r

    def subst_x(self, a: int) -> UniPoly:
        """g(a, y) as a univariate in y."""
        ctx = self.ctx
        if not self.rows:
            return UniPoly.zero(ctx)
        out = [0] * len(self.rows[0])
        for row in reversed(self.rows):
            for j in range(len(out)):
                out[j] = ctx.add(ctx.mul(out[j], a), row[j])
        return UniPoly(ctx, out)

    def subst_y(self, b: int) -> UniPoly:
        """g(x, b) as a univariate in x."""
        ctx = self.ctx
        out = []
        for row in self.rows:
            acc = 0
            for c in reversed(row):
                acc = ctx.add(ctx.mul(acc, b), c)
            out.append(acc)
        return UniPoly(ctx, out)

    def shear_x(self, lam: int) -> "BiPoly":
        """g(x + lam*y, y)."""
        if lam == 0 or self.is_zero():
            return self
        ctx = self.ctx
        sub = BiPoly.from_terms(ctx, [(1, 0, 1), (0, 1, lam)])
        powers = [BiPoly.const(ctx, 1)]
        for _ in range(len(self.rows) - 1):
            powers.append(powers[-1] * sub)
        acc = BiPoly.zero(ctx)
        for i, row in enumerate(self.rows):
            r = BiPoly(ctx, (row,))
            if not r.is_zero():
                acc = acc + r * powers[i]
        return acc

    def top_form(self) -> "BiPoly":
        """Homogeneous part of highest total degree."""
        if not self.rows:
            return self
        d = self.total_degree
        return BiPoly.from_terms(self.ctx,
                                 [(i, j, c) for i, j, c in self.terms()
                                  if i + j == d])

    # -- views ------------------------------------------------------------------

    def to_y_view(self) -> list[UniPoly]:
        """Coefficients of y^j as univariate polynomials in x, j ascending."""
        if not self.rows:
            return []
        nc = len(self.rows[0])
        return [UniPoly(self.ctx, [row[j] for row in self.rows])
                for j in range(nc)]

    @classmethod
    def from_y_view(cls, ctx, cols: list[UniPoly]) -> "BiPoly":
        while cols and cols[-1].is_zero():
            cols = cols[:-1]
        if not cols:
            return cls.zero(ctx)
        nr = max(len(c.coeffs) for c in cols)
        mat = [[0] * len(cols) for _ in range(nr)]
        for j, c in enumerate(cols):
            for i, a in enumerate(c.coeffs):
                mat[i][j] = a
        return cls(ctx, mat)

    def map_coeffs(self, fn, ctx: FieldCtx | None = None) -> "BiPoly":
        return BiPoly(ctx or self.ctx,
                      [[fn(c) for c in row] for row in self.rows])

    def embed_into(self, emb: Embedding) -> "BiPoly":
        if emb.src is not self.ctx:
            raise ValueError("embedding source does not match polynomial context")
        return self.map_coeffs(emb.map, emb.dst)


# ---------------------------------------------------------------------------
# derived constructions


def diff_quotient(f: UniPoly) -> BiPoly:
    """(f(x) - f(y)) / (x - y); the coefficient of x^a y^b is f_{a+b+1}."""
    if f.is_zero() or f.degree < 1:
        return BiPoly.zero(f.ctx)
    d = len(f.coeffs) - 1
    mat = [[f.coeffs[a + b + 1] if a + b + 1 <= d else 0
            for b in range(d)] for a in range(d)]
    return BiPoly(f.ctx, mat)


def homogenize(f: UniPoly, d: int) -> BiPoly:
    """Binary form F(x, z) of degree d with F(x, 1) = f(x)."""
    if f.is_zero():
        raise ValueError("cannot homogenize the zero polynomial")
    if d < f.degree:
        raise ValueError(f"target degree {d} below deg f = {f.degree}")
    return BiPoly.from_terms(f.ctx,
                             [(i, d - i, c) for i, c in enumerate(f.coeffs)
                              if c])


def pth_power_test(f: UniPoly) -> UniPoly | None:
    """g with g^p = f, or None.  Exact over a perfect field."""
    ctx = f.ctx
    p = ctx.p
    if f.is_zero():
        return UniPoly.zero(ctx)
    out = [0] * (len(f.coeffs) // p + 1)
    for i, c in enumerate(f.coeffs):
        if c:
            if i % p:
                return None
            out[i // p] = ctx.pth_root(c)
    return UniPoly(ctx, out)


# ---------------------------------------------------------------------------
# bivariate gcd and exact division (primitive PRS over F_q[x])


def _content_y(g: BiPoly) -> UniPoly:
    """Monic gcd in F_q[x] of the y-view coefficients."""
    cols = g.to_y_view()
    acc = UniPoly.zero(g.ctx)
    for c in cols:
        acc = acc.gcd(c)
        if acc.degree == 0:
            break
    return acc


def _divide_cols(g: BiPoly, u: UniPoly) -> BiPoly:
    cols = [c.divexact(u) for c in g.to_y_view()]
    assert all(c is not None for c in cols), "content division not exact"
    return BiPoly.from_y_view(g.ctx, cols)


def _prem_y(a: list[UniPoly], b: list[UniPoly], ctx) -> list[UniPoly]:
    """Pseudo-remainder of a by b, both ascending y-views, deg a >= deg b."""
    a = list(a)
    db = len(b) - 1
    lcb = b[-1]
    while len(a) - 1 >= db and any(not c.is_zero() for c in a):
        while a and a[-1].is_zero():
            a.pop()
        if len(a) - 1 < db:
            break
        s = a[-1]
        shift = len(a) - 1 - db
        a = [c * lcb for c in a]
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - s * bi
        a.pop()
        while a and a[-1].is_zero():
            a.pop()
    return a


def bi_gcd(A: BiPoly, B: BiPoly) -> BiPoly:
    """Gcd in F_q[x, y], canonically normalized."""
    _same_ctx(A, B)
    ctx = A.ctx
    if A.is_zero():
        return normalize_bi(B)[1]
    if B.is_zero():
        return normalize_bi(A)[1]
    contA, contB = _content_y(A), _content_y(B)
    cont = contA.gcd(contB)
    a = _divide_cols(A, contA).to_y_view()
    b = _divide_cols(B, contB).to_y_view()
    if len(a) < len(b):
        a, b = b, a
    while b and any(not c.is_zero() for c in b):
        r = _prem_y(a, b, ctx)
        pr = BiPoly.from_y_view(ctx, r)
        if not pr.is_zero():
            pr = _divide_cols(pr, _content_y(pr))
        a, b = b, pr.to_y_view()
    g = BiPoly.from_y_view(ctx, a)
    g = BiPoly.from_uni_x(cont) * g
    return normalize_bi(g)[1]


def bi_divmod_exact(A: BiPoly, B: BiPoly) -> BiPoly | None:
    """Quotient A / B if B divides A exactly, else None."""
    _same_ctx(A, B)
    ctx = A.ctx
    if B.is_zero():
        raise ZeroDivisionError("bivariate division by zero")
    if A.is_zero():
        return A
    b = B.to_y_view()
    a = A.to_y_view()
    db = len(b) - 1
    if db == 0:
        cols = [c.divexact(b[0]) for c in a]
        if any(c is None for c in cols):
            return None
        return BiPoly.from_y_view(ctx, cols)
    lcb = b[-1]
    quo: list[UniPoly] = []
    while True:
        while a and a[-1].is_zero():
            a.pop()
        da = len(a) - 1
        if da < db:
            break
        q = a[-1].divexact(lcb)
        if q is None:
            return None
        shift = da - db
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - q * bi
        while len(quo) <= shift:
            quo.append(UniPoly.zero(ctx))
        quo[shift] = q
        if not a[-1].is_zero():
            return None
        a.pop()
    if any(not c.is_zero() for c in a):
        return None
    return BiPoly.from_y_view(ctx, quo)


def canonical_lead_monomial(g: BiPoly) -> tuple[int, int]:
    """(i, j) of the leading term: max total degree, then max x-degree."""
    best = None
    for i, j, _ in g.terms():
        k = (i + j, i)
        if best is None or k > best:
            best = k
    if best is None:
        raise ValueError("zero polynomial has no leading monomial")
    return (best[1], best[0] - best[1])


def normalize_bi(g: BiPoly) -> tuple[int, BiPoly]:
    """(unit, monic) with monic scaled so its leading coefficient is 1."""
    if g.is_zero():
        return 1, g
    i, j = canonical_lead_monomial(g)
    u = g.coeff(i, j)
    if u == 1:
        return 1, g
    return u, g.scale(g.ctx.inv(u))


def sylvester_resultant_y(A: BiPoly, B: BiPoly) -> UniPoly:
    """Res_y(A, B) as a polynomial in x, by fraction-free elimination on the
    Sylvester matrix over F_q[x].  Requires positive y-degree on both sides;
    zero iff A and B share a factor of positive y-degree."""
    _same_ctx(A, B)
    ctx = A.ctx
    a = A.to_y_view()
    b = B.to_y_view()
    m, n = len(a) - 1, len(b) - 1
    if m < 1 or n < 1:
        raise ValueError("resultant needs positive y-degree on both sides")
    size = m + n
    zero = UniPoly.zero(ctx)
    mat = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        mat.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        mat.append(row)
    # Bareiss: divisions are exact in the integral domain F_q[x]
    sign = 1
    prev = UniPoly.one(ctx)
    for k in range(size - 1):
        if mat[k][k].is_zero():
            swap = next((i for i in range(k + 1, size)
                         if not mat[i][k].is_zero()), None)
            if swap is None:
                return zero
            mat[k], mat[swap] = mat[swap], mat[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                t = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]
                mat[i][j] = t.divexact(prev)
                assert mat[i][j] is not None
            mat[i][k] = zero
        prev = mat[k][k]
    det = mat[size - 1][size - 1]
    if sign < 0 and ctx.p != 2:
        det = -det
    return det
