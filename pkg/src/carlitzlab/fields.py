"""Finite fields F_{p^k} with deterministic construction and embeddings.

Elements are stored as integer codes in [0, p^k): the code's base-p digits
are the coefficients of the residue polynomial in t, constant digit first.
Code order is the canonical element order (0, 1, ..., p-1, t, t+1, ...),
so enumeration is just range(order).

The defining modulus is the lexicographically least monic irreducible of
degree k over F_p, coefficients compared from the constant term upward.
Two constructions of the same field return the identical context object.

Scalar arithmetic works on codes.  Small fields get full multiplication
tables, mid-size fields get discrete log/antilog tables (an optimization,
not part of any contract), and everything falls back to residue-polynomial
arithmetic.  Bulk numpy helpers (vec_add, vec_mul, ...) power the counting
loops elsewhere; they require the log tables and are capped accordingly.
"""

from __future__ import annotations

import functools
from math import isqrt

import numpy as np

from .errors import CapError

DEFAULT_MAX_ORDER = 1 << 20
_MUL_TABLE_MAX = 1 << 8
_LOG_TABLE_MAX = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f <= isqrt(n):
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# F_p[t] on plain coefficient lists (ascending degree, no trailing zeros).
# Only what modulus selection needs; everything later uses UniPoly instead.


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin test for a monic polynomial over F_p of degree >= 1."""
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]
    xq = _ppowmod(x, p**k, f, p)
    if _trim([(c - d) % p for c, d in
              zip(xq + [0] * len(x), x + [0] * len(xq))]) != []:
        return False
    for ell in prime_factors(k):
        xe = _ppowmod(x, p ** (k // ell), f, p)
        diff = [(c - d) % p for c, d in
                zip(xe + [0] * len(x), x + [0] * len(xe))]
        if len(_pgcd(_trim(diff), f, p)) > 1:
            return False
    return True


def canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are compared coefficient-wise from the constant term upward.
    Polynomials with zero constant term are divisible by t and skipped for
    k >= 2, which prunes the huge all-reducible prefix of the enumeration.
    """
    if k == 1:
        return (0, 1)

    def search(prefix: list[int], idx: int) -> tuple[int, ...] | None:
        # prefix fixes c_0..c_{idx-1}; deeper coefficients vary fastest in
        # the subsequent recursion, matching the constant-first comparison.
        if idx == k:
            cand = prefix + [1]
            if _is_irreducible(cand, p):
                return tuple(cand)
            return None
        lo = 1 if idx == 0 else 0
        for c in range(lo, p):
            hit = search(prefix + [c], idx + 1)
            if hit is not None:
                return hit
        return None

    result = search([], 0)
    assert result is not None, "no irreducible found (unreachable)"
    return result


# ---------------------------------------------------------------------------


class FieldElem:
    """An element of a FieldCtx; thin wrapper over an integer code."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx: "FieldCtx", code: int):
        self.ctx = ctx
        self.code = code

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("elements belong to different field contexts")
            return other.code
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(self.code, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.sub(c, self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.code, self.ctx.inv(c)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx is other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.ctx.p if self.ctx.k == 1 \
                else self.code == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __bool__(self):
        return self.code != 0

    def __str__(self):
        return self.ctx.elem_str(self.code)

    def __repr__(self):
        return f"FieldElem({self.ctx.spec}, {self.ctx.elem_str(self.code)})"


class FieldCtx:
    """Immutable field context; construct through gf_construct only."""

    def __init__(self, p: int, k: int, _token=None):
        if _token is not _CTX_TOKEN:
            raise TypeError("use gf_construct(p, k) to obtain field contexts")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = canonical_modulus(p, k)
        # reduction of t^(k+i) for i in [0, k-1], as digit lists
        red0 = [(-c) % p for c in self.modulus[:-1]]
        reds = [red0]
        for _ in range(k - 2):
            prev = reds[-1]
            nxt = [0] + prev[:-1]
            top = prev[-1]
            if top:
                for j in range(k):
                    nxt[j] = (nxt[j] + top * red0[j]) % p
            reds.append(nxt)
        self._reds = reds
        self._pow_p = [p**i for i in range(k)]
        self._mul_table: list[int] | None = None
        self._inv_table: list[int] | None = None
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._gen: int | None = None
        self._digits: np.ndarray | None = None
        self._tables_building = False

    # -- representation -----------------------------------------------------

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.k}" if self.k > 1 else str(self.p)

    def __repr__(self):
        return f"FieldCtx(F_{self.p}^{self.k})"

    def coeffs_of(self, a: int) -> tuple[int, ...]:
        """Base-p digits of the code: residue coefficients, constant first."""
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def elem_from_coeffs(self, coeffs) -> int:
        a = 0
        for c, w in zip(coeffs, self._pow_p):
            a += (c % self.p) * w
        return a

    def elem_str(self, a: int) -> str:
        if self.k == 1:
            return str(a % self.p)
        digs = self.coeffs_of(a)
        parts = []
        for i in range(self.k - 1, -1, -1):
            c = digs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("t" if c == 1 else f"{c}*t")
            else:
                parts.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
        return "+".join(parts) if parts else "0"

    def elem(self, code: int) -> FieldElem:
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for F_{self.spec}")
        return FieldElem(self, code)

    def elements(self):
        """All elements in canonical order, 0 first."""
        for c in range(self.order):
            yield FieldElem(self, c)

    # -- scalar arithmetic on codes ------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out = 0
        for w in self._pow_p:
            out += (((a // w) + (b // w)) % self.p) * w
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out = 0
        for w in self._pow_p:
            out += (-(a // w) % self.p) * w
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_generic(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da = self.coeffs_of(a)
        db = self.coeffs_of(b)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    if bj:
                        prod[i + j] = (prod[i + j] + ai * bj) % p
        out = prod[:k]
        for i in range(k, 2 * k - 1):
            c = prod[i]
            if c:
                red = self._reds[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * red[j]) % p
        return self.elem_from_coeffs(out)

    def _ensure_tables(self):
        # scalar ops are hot inside factorization; build the log table the
        # first time any product is requested, not just on vector ops
        if self._exp is None and not self._tables_building \
                and self.order <= _LOG_TABLE_MAX:
            self._build_tables()

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        t = self._mul_table
        if t is not None:
            return t[a * self.order + b]
        if self._exp is None:
            self._ensure_tables()
        if self._exp is not None:
            return int(self._exp[(int(self._log[a]) + int(self._log[b]))
                                 % (self.order - 1)])
        return self._mul_generic(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inversion of zero in F_{self.spec}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is not None:
            return self._inv_table[a]
        if self._exp is None:
            self._ensure_tables()
        if self._exp is not None:
            return int(self._exp[(-int(self._log[a])) % (self.order - 1)])
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 0 if e else 1
        if self.k == 1:
            return pow(a, e, self.p)
        e %= self.order - 1
        if self._exp is None:
            self._ensure_tables()
        if self._exp is not None:
            return int(self._exp[(int(self._log[a]) * e)
                                 % (self.order - 1)])
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: int, times: int = 1) -> int:
        """a -> a^(p^times)."""
        return self.pow(a, self.p ** (times % self.k))

    def pth_root(self, a: int) -> int:
        """Inverse of Frobenius; exact since the field is perfect."""
        return self.pow(a, self.p ** (self.k - 1))

    # -- tables ---------------------------------------------------------------

    def _build_tables(self):
        if self.k == 1 or self._exp is not None or self._tables_building:
            return
        q = self.order
        if q > _LOG_TABLE_MAX:
            return
        self._tables_building = True
        g = self.generator()
        exp = np.zeros(q - 1, dtype=np.int64)
        exp[0] = 1
        # batched doubling: exp[L:2L] = exp[L] * exp[0:L]
        length = 1
        while length < q - 1:
            s = int(exp[length - 1])
            s = self._mul_generic(s, g)  # g^length
            take = min(length, q - 1 - length)
            block = self._vec_mul_scalar_generic(exp[:take], s)
            exp[length:length + take] = block
            length += take
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        self._exp = exp
        self._log = log
        self._tables_building = False
        if q <= _MUL_TABLE_MAX:
            mt = [0] * (q * q)
            for a in range(1, q):
                base = a * q
                la = int(log[a])
                for b in range(1, q):
                    mt[base + b] = int(exp[(la + int(log[b])) % (q - 1)])
            self._mul_table = mt
            self._inv_table = [0] + [
                int(exp[(-int(log[a])) % (q - 1)]) for a in range(1, q)
            ]

    def generator(self) -> int:
        """Least code generating the multiplicative group."""
        if self._gen is not None:
            return self._gen
        q = self.order
        fac = prime_factors(q - 1)
        for g in range(1, q):
            if all(self.pow(g, (q - 1) // ell) != 1 for ell in fac):
                self._gen = g
                return g
        raise RuntimeError("no generator found (unreachable)")

    # -- bulk numpy helpers ----------------------------------------------------

    def _digit_matrix(self) -> np.ndarray:
        if self._digits is None:
            codes = np.arange(self.order, dtype=np.int64)
            digs = np.empty((self.order, self.k), dtype=np.int64)
            for i in range(self.k):
                digs[:, i] = codes % self.p
                codes //= self.p
            self._digits = digs
        return self._digits

    def _encode_digits(self, digs: np.ndarray) -> np.ndarray:
        w = np.array(self._pow_p, dtype=np.int64)
        return digs @ w

    def _scalar_matrix(self, s: int) -> np.ndarray:
        """Multiplication by s as a k x k matrix over F_p (columns s*t^j)."""
        cols = []
        cur = s
        for _ in range(self.k):
            cols.append(self.coeffs_of(cur))
            cur = self._mul_generic(cur, self.p)  # times t
        return np.array(cols, dtype=np.int64)  # row j = digits of s*t^j

    def _vec_mul_scalar_generic(self, arr: np.ndarray, s: int) -> np.ndarray:
        digs = np.empty((arr.shape[0], self.k), dtype=np.int64)
        a = arr.astype(np.int64).copy()
        for i in range(self.k):
            digs[:, i] = a % self.p
            a //= self.p
        m = self._scalar_matrix(s)
        return self._encode_digits((digs @ m) % self.p)

    def vec_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        digs = self._digit_matrix()
        return self._encode_digits((digs[a] + digs[b]) % self.p)

    def vec_neg(self, a: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._encode_digits((-self._digit_matrix()[a]) % self.p)

    def vec_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a * b) % self.p
        self._build_tables()
        if self._exp is None:
            raise CapError(
                f"bulk multiplication needs log tables; |F_{self.spec}| "
                f"exceeds the table cap {_LOG_TABLE_MAX}")
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        if np.any(nz):
            an = np.broadcast_to(a, out.shape)[nz]
            bn = np.broadcast_to(b, out.shape)[nz]
            out[nz] = self._exp[(self._log[an] + self._log[bn])
                                % (self.order - 1)]
        return out

    def vec_mul_scalar(self, a: np.ndarray, s: int) -> np.ndarray:
        if self.k == 1:
            return (a * s) % self.p
        if s == 0:
            return np.zeros_like(a)
        if s == 1:
            return a.copy()
        if self._exp is not None:
            out = np.zeros_like(a)
            nz = a != 0
            out[nz] = self._exp[(self._log[a[nz]] + int(self._log[s]))
                                % (self.order - 1)]
            return out
        return self._vec_mul_scalar_generic(a, s)

    def vec_pow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e == 0:
            return np.ones_like(a)
        if self.k == 1:
            # pow by repeated squaring on the whole array
            out = np.ones_like(a)
            base = a % self.p
            while e:
                if e & 1:
                    out = (out * base) % self.p
                base = (base * base) % self.p
                e >>= 1
            return out
        self._build_tables()
        if self._exp is None:
            raise CapError(
                f"bulk powering needs log tables; |F_{self.spec}| "
                f"exceeds the table cap {_LOG_TABLE_MAX}")
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = self._exp[(self._log[a[nz]] * (e % (self.order - 1)))
                            % (self.order - 1)]
        return out


_CTX_TOKEN = object()


@functools.lru_cache(maxsize=None)
def _construct(p: int, k: int) -> FieldCtx:
    return FieldCtx(p, k, _token=_CTX_TOKEN)


def gf_construct(p: int, k: int, max_order: int | None = DEFAULT_MAX_ORDER
                 ) -> FieldCtx:
    """The canonical field context for F_{p^k}.

    max_order caps the field size (None disables the check); the cap guards
    enumeration-scale loops, so callers that only do residue arithmetic in a
    large field may raise it explicitly.
    """
    if not isinstance(p, int) or not isinstance(k, int) or k < 1:
        raise ValueError(f"invalid field parameters p={p!r}, k={k!r}")
    if not is_prime(p):
        raise ValueError(f"field characteristic {p} is not prime")
    if max_order is not None and p**k > max_order:
        raise CapError(f"field order {p}^{k} exceeds the cap {max_order}")
    return _construct(p, k)


class Embedding:
    """Canonical field homomorphism F_{p^k} -> F_{p^{k*m}}.

    Sends the source generator t to the least root (canonical element
    order) of the source modulus in the target.  As a linear map over F_p
    it is stored as a k x (k*m) digit matrix.
    """

    __slots__ = ("src", "dst", "gen_image", "_matrix", "_solve_cache")

    def __init__(self, src: FieldCtx, dst: FieldCtx, gen_image: int):
        self.src = src
        self.dst = dst
        self.gen_image = gen_image
        rows = []
        cur = 1
        for _ in range(src.k):
            rows.append(dst.coeffs_of(cur))
            cur = dst.mul(cur, gen_image)
        self._matrix = np.array(rows, dtype=np.int64)  # row i = digits of image of t^i
        self._solve_cache: dict | None = None

    def map(self, code: int) -> int:
        digs = np.array(self.src.coeffs_of(code), dtype=np.int64)
        return int(self.dst._encode_digits(digs @ self._matrix % self.src.p))

    def map_vec(self, codes: np.ndarray) -> np.ndarray:
        digs = np.empty((codes.shape[0], self.src.k), dtype=np.int64)
        a = codes.astype(np.int64).copy()
        for i in range(self.src.k):
            digs[:, i] = a % self.src.p
            a //= self.src.p
        return self.dst._encode_digits(digs @ self._matrix % self.src.p)

    def _solver(self):
        # Row-reduce the embedding matrix once for preimage extraction.
        if self._solve_cache is None:
            p = self.src.p
            m = self._matrix % p
            rows, cols = m.shape
            aug = m.copy()
            pivots = []
            basis = np.eye(rows, dtype=np.int64)
            r = 0
            for c in range(cols):
                sel = None
                for rr in range(r, rows):
                    if aug[rr, c] % p:
                        sel = rr
                        break
                if sel is None:
                    continue
                aug[[r, sel]] = aug[[sel, r]]
                basis[[r, sel]] = basis[[sel, r]]
                inv = pow(int(aug[r, c]), p - 2, p)
                aug[r] = (aug[r] * inv) % p
                basis[r] = (basis[r] * inv) % p
                for rr in range(rows):
                    if rr != r and aug[rr, c] % p:
                        f = int(aug[rr, c])
                        aug[rr] = (aug[rr] - f * aug[r]) % p
                        basis[rr] = (basis[rr] - f * basis[r]) % p
                pivots.append(c)
                r += 1
                if r == rows:
                    break
            self._solve_cache = (aug % p, basis % p, pivots)
        return self._solve_cache

    def preimage(self, code: int) -> int:
        """Source code mapping to the given target code; errors if outside
        the embedded subfield."""
        p = self.src.p
        reduced, basis, pivots = self._solver()
        target = np.array(self.dst.coeffs_of(code), dtype=np.int64)
        x = np.zeros(self.src.k, dtype=np.int64)
        for i, c in enumerate(pivots):
            x = (x + int(target[c]) * basis[i]) % p
        cand = int(self.src._encode_digits(x))
        if self.map(cand) != code:
            raise ValueError(
                f"{self.dst.elem_str(code)} is not in the image of "
                f"F_{self.src.spec}")
        return cand


@functools.lru_cache(maxsize=None)
def _embed_cached(p: int, k_src: int, k_dst: int) -> Embedding:
    src = _construct(p, k_src)
    dst = _construct(p, k_dst)
    if k_src == 1:
        return Embedding(src, dst, 1 % dst.order)
    from .unifactor import roots as _roots
    from .polys import UniPoly
    mod_in_dst = UniPoly(dst, tuple(c % p for c in src.modulus))
    rs = _roots(mod_in_dst)
    if not rs:
        raise RuntimeError("source modulus has no root in target (unreachable)")
    return Embedding(src, dst, min(rs))


def embed(src: FieldCtx, dst: FieldCtx) -> Embedding:
    """Canonical embedding; requires equal characteristic and src.k | dst.k."""
    if src.p != dst.p:
        raise ValueError("embeddings require equal characteristic")
    if dst.k % src.k != 0:
        raise ValueError(
            f"F_{src.spec} is not a subfield of F_{dst.spec}")
    return _embed_cached(src.p, src.k, dst.k)


def extension_of(ctx: FieldCtx, m: int, max_order: int | None = None
                 ) -> FieldCtx:
    """Canonical degree-m extension (always built directly over F_p)."""
    return gf_construct(ctx.p, ctx.k * m, max_order=max_order)
