"""Textual polynomial grammar and field specs.

Terms look like "c*x^2*y" joined by "+" or "-"; the "*" is optional and
whitespace is ignored.  Coefficients are prime-field integers or, over
extension fields, t-polynomials in brackets: "[t+1]*x^3".  Rendering emits
canonical codes joined by "+" only, descending in (total degree, exponents),
and round-trips exactly through the parser.

Field specs are "q" or "q^m" for any prime-power order, e.g. "2^4" or "4".
"""

from __future__ import annotations

import math

from .errors import ParseError
from .fields import FieldCtx, gf_construct
from .polys import BiPoly, UniPoly

Exps = tuple[int, ...]


def parse_field_spec(text: str, max_order=None) -> FieldCtx:
    s = text.strip()
    if "^" in s:
        base, _, exp = s.partition("^")
    else:
        base, exp = s, "1"
    try:
        b, m = int(base), int(exp)
    except ValueError:
        raise ParseError("field spec must be 'q' or 'q^m'", text, 0) from None
    if b < 2 or m < 1:
        raise ParseError("field order must be a prime power >= 2", text, 0)
    # the base may itself be a prime power: "4^1" and "2^2" name one field
    p = b
    for c in range(2, math.isqrt(b) + 1):
        if b % c == 0:
            p = c
            break
    j, r = 0, b
    while r % p == 0:
        r //= p
        j += 1
    if r != 1:
        raise ParseError(f"{b} is not a prime power", text, 0)
    if max_order is None:
        return gf_construct(p, j * m)
    return gf_construct(p, j * m, max_order=max_order)


# -- parsing ----------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str, varnames: tuple[str, ...]):
        self.text = text
        self.varnames = varnames
        self.i = 0

    def err(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.i)

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def read_int(self) -> int:
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == start:
            raise self.err("expected an integer")
        return int(self.text[start:self.i])


def _eval_bracket(scan: _Scanner, ctx: FieldCtx) -> int:
    start = scan.i
    depth = 0
    while scan.i < len(scan.text):
        ch = scan.text[scan.i]
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                inner = scan.text[start + 1:scan.i]
                scan.i += 1
                terms = parse_terms(inner, ctx, ("t",))
                code = 0
                for (e,), c in terms.items():
                    if e and ctx.k == 1:
                        raise ParseError(
                            "t-polynomial coefficient over a prime field",
                            scan.text, start)
                    code = ctx.add(code, ctx.mul(c, ctx.pow(ctx.p, e))) \
                        if ctx.k > 1 else ctx.add(code, c)
                return code
        scan.i += 1
    raise ParseError("unterminated '['", scan.text, start)


def parse_terms(text: str, ctx: FieldCtx,
                varnames: tuple[str, ...]) -> dict[Exps, int]:
    """Exponent-tuple -> coefficient code; raises ParseError with position."""
    scan = _Scanner(text, varnames)
    terms: dict[Exps, int] = {}
    scan.skip_ws()
    if scan.i == len(text):
        raise scan.err("empty polynomial")
    first = True
    while scan.i < len(text):
        sign = 1
        scan.skip_ws()
        while scan.peek() in "+-":
            if scan.peek() == "-":
                sign = -sign
            elif not first and scan.peek() == "+":
                pass
            scan.i += 1
            scan.skip_ws()
        coeff = 1
        exps = [0] * len(varnames)
        consumed = False
        while True:
            scan.skip_ws()
            ch = scan.peek()
            if ch.isdigit():
                coeff = ctx.mul(coeff, scan.read_int() % ctx.p)
                consumed = True
            elif ch == "[":
                coeff = ctx.mul(coeff, _eval_bracket(scan, ctx))
                consumed = True
            elif ch in varnames:
                idx = varnames.index(ch)
                scan.i += 1
                e = 1
                if scan.peek() == "^":
                    scan.i += 1
                    e = scan.read_int()
                exps[idx] += e
                consumed = True
            else:
                break
            scan.skip_ws()
            if scan.peek() == "*":
                scan.i += 1
        if not consumed:
            raise scan.err("expected a term")
        key = tuple(exps)
        code = coeff if sign == 1 else ctx.neg(coeff)
        terms[key] = ctx.add(terms.get(key, 0), code)
        scan.skip_ws()
        if scan.i < len(text) and scan.peek() not in "+-":
            raise scan.err("expected '+' or '-' between terms")
        first = False
    return {k: v for k, v in terms.items() if v}


def parse_uni(text: str, ctx: FieldCtx, var: str = "x") -> UniPoly:
    terms = parse_terms(text, ctx, (var,))
    if not terms:
        return UniPoly.zero(ctx)
    deg = max(e for (e,) in terms)
    coeffs = [0] * (deg + 1)
    for (e,), c in terms.items():
        coeffs[e] = c
    return UniPoly(ctx, coeffs)


def parse_bi(text: str, ctx: FieldCtx,
             varnames: tuple[str, str] = ("x", "y")) -> BiPoly:
    terms = parse_terms(text, ctx, varnames)
    return BiPoly.from_terms(ctx, [(i, j, c) for (i, j), c in terms.items()])


def parse_ternary(text: str, ctx: FieldCtx) -> dict[Exps, int]:
    return parse_terms(text, ctx, ("x", "y", "z"))


# -- rendering ----------------------------------------------------------------


def render_coeff(ctx: FieldCtx, code: int) -> str:
    if ctx.k == 1:
        return str(code)
    return f"[{ctx.elem_str(code)}]"


def render_terms(ctx: FieldCtx, terms: dict[Exps, int],
                 varnames: tuple[str, ...]) -> str:
    items = [(k, v) for k, v in terms.items() if v]
    if not items:
        return "0"
    items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
    rendered = []
    for exps, code in items:
        parts = []
        for name, e in zip(varnames, exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        if not parts or code != 1:
            parts.insert(0, render_coeff(ctx, code))
        rendered.append("*".join(parts))
    return "+".join(rendered)


def render_uni(f: UniPoly, var: str = "x") -> str:
    return render_terms(f.ctx, {(i,): c for i, c in enumerate(f.coeffs) if c},
                        (var,))


def render_bi(g: BiPoly, varnames: tuple[str, str] = ("x", "y")) -> str:
    return render_terms(g.ctx, {(i, j): c for i, j, c in g.terms()}, varnames)
