"""Operator expressions over the paraproduct letters M, S, T and delta atoms.

Grammar (whitespace insignificant)::

    expr    := ["+"|"-"] term (("+"|"-") term)*
    term    := factor ("*" factor)*
    factor  := primary ("^" NAT)?
    primary := LETTER gpow? | "d0" ("{" upoly "}")? | scalar | "(" expr ")"
    LETTER  := "M" | "S" | "T"
    gpow    := "(" "g" "^" NAT ")"

Scalars are rationals such as ``3/2`` combined with ``i`` and ``w`` (the
formal value ``g(0)``); a ``d0{...}`` payload may also use ``u`` (standing for
``g - g(0)``).

``A*B`` is the composition A after B, so ``S*T`` applies T first.  With this
convention identities read as usual, e.g. ``T*S = S*T - T^2 - d0{w*u}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from .algebra import Scalar, UPoly, WPoly

__all__ = [
    "Letter",
    "Delta",
    "Sum",
    "Product",
    "Power",
    "ScalarMul",
    "OperatorExpr",
    "ParseError",
    "parse",
    "parse_upoly",
    "parse_poly",
    "format_expr",
    "format_wpoly",
    "format_upoly",
    "format_scalar",
    "scalar_normalize",
    "letter_count",
]


class ParseError(ValueError):
    """Syntax error; ``offset`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Letter:
    """``M``, ``S`` or ``T`` with symbol ``g^m``."""

    name: str
    m: int = 1

    def __post_init__(self):
        if self.name not in ("M", "S", "T"):
            raise ValueError(f"unknown letter {self.name!r}")
        if self.m < 1:
            raise ValueError("letter power m must be >= 1")


@dataclass(frozen=True)
class Delta:
    """``f -> P(g - g(0)) * f(0)``."""

    payload: UPoly = UPoly.constant(1)


@dataclass(frozen=True)
class Sum:
    terms: Tuple["OperatorExpr", ...]


@dataclass(frozen=True)
class Product:
    """Composition; ``factors[-1]`` acts first."""

    factors: Tuple["OperatorExpr", ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("empty product")


@dataclass(frozen=True)
class Power:
    base: "OperatorExpr"
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("operator exponents must be >= 1")


@dataclass(frozen=True)
class ScalarMul:
    coef: WPoly
    expr: "OperatorExpr"


OperatorExpr = Union[Letter, Delta, Sum, Product, Power, ScalarMul]
Atom = (Letter, Delta)


def letter_count(e: OperatorExpr) -> int:
    """Number of atoms, counting powers with multiplicity."""
    if isinstance(e, Atom):
        return 1
    if isinstance(e, Sum):
        return max((letter_count(t) for t in e.terms), default=0)
    if isinstance(e, Product):
        return sum(letter_count(f) for f in e.factors)
    if isinstance(e, Power):
        return letter_count(e.base) * e.exponent
    if isinstance(e, ScalarMul):
        return letter_count(e.expr)
    raise TypeError(e)


def scalar_normalize(e: OperatorExpr) -> OperatorExpr:
    """Pull scalars out of products/powers, merge nested ScalarMul, drop 1."""

    def go(e) -> Tuple[WPoly, OperatorExpr]:
        if isinstance(e, Atom):
            return WPoly.constant(1), e
        if isinstance(e, ScalarMul):
            c, inner = go(e.expr)
            return e.coef * c, inner
        if isinstance(e, Product):
            c = WPoly.constant(1)
            fs = []
            for f in e.factors:
                cf, inner = go(f)
                c = c * cf
                fs.append(inner)
            return c, Product(tuple(fs))
        if isinstance(e, Power):
            c, inner = go(e.base)
            return c**e.exponent, Power(inner, e.exponent)
        if isinstance(e, Sum):
            return WPoly.constant(1), Sum(tuple(wrap(*go(t)) for t in e.terms))
        raise TypeError(e)

    def wrap(c: WPoly, inner):
        return inner if c == 1 else ScalarMul(c, inner)

    return wrap(*go(e))


# -- tokenizer ----------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+(?:/\d+)?)|(?P<d0>d0)|(?P<name>[A-Za-z])|(?P<op>[-+*^(){}])"
)


@dataclass
class _Tok:
    kind: str  # num | name | d0 | op | end
    text: str
    offset: int


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    toks.append(_Tok("end", "", _byte_offset(text, len(text))))
    return toks


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


# -- parser -------------------------------------------------------------------
# Scalar values are carried as UPoly in (var, w) where var is "u" in payloads
# and "z" in plain polynomials; in operator mode var is not allowed.


class _Parser:
    def __init__(self, text: str, mode: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.mode = mode  # "op" | "upoly" | "poly"

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            got = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, got {got!r}", self.tok.offset)
        return self.advance()

    def error(self, msg: str, tok: _Tok | None = None):
        raise ParseError(msg, (tok or self.tok).offset)

    def parse_all(self):
        if self.tok.kind == "end":
            self.error("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")
        return value

    def nat(self, what: str = "exponent") -> int:
        t = self.tok
        if t.kind != "num" or "/" in t.text:
            self.error("expected a natural number")
        self.advance()
        n = int(t.text)
        if n == 0:
            self.error(f"{what} 0 is not allowed (the algebra has no identity)", t)
        return n

    # expr := ["+"|"-"] term (("+"|"-") term)*
    def expr(self):
        start = self.tok
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.advance().text == "-" else 1
        first = self.term()
        terms = [_negate(first) if sign < 0 else first]
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            neg = self.advance().text == "-"
            t = self.term()
            terms.append(_negate(t) if neg else t)
        scalars = [isinstance(t, UPoly) for t in terms]
        if all(scalars):
            out = terms[0]
            for t in terms[1:]:
                out = out + t
            return out
        if any(scalars):
            self.error("cannot add a scalar to an operator (the algebra has no identity)", start)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    # term := factor ("*" factor)*
    def term(self):
        factors = [self.factor()]
        while self.tok.kind == "op" and self.tok.text == "*":
            self.advance()
            factors.append(self.factor())
        coef = UPoly.constant(1)
        ops = []
        for f in factors:
            if isinstance(f, UPoly):
                coef = coef * f
            else:
                ops.append(f)
        if not ops:
            return coef
        body = ops[0] if len(ops) == 1 else Product(tuple(ops))
        if coef == 1:
            return body
        return _scale(_as_wpoly(coef), body)

    # factor := primary ("^" NAT)?
    def factor(self):
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            n = self.nat()
            if isinstance(base, UPoly):
                return base**n
            return Power(base, n)
        return base

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return UPoly.constant(Scalar(Fraction(t.text)))
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "d0":
            if self.mode != "op":
                self.error("d0 is only allowed in operator expressions")
            self.advance()
            payload = UPoly.constant(1)
            if self.tok.text == "{":
                self.advance()
                sub = _Parser.__new__(_Parser)
                sub.text, sub.toks, sub.i, sub.mode = self.text, self.toks, self.i, "upoly"
                if sub.tok.text == "}":
                    self.error("empty d0 payload")
                payload = sub.expr()
                self.i = sub.i
                self.expect("}")
            return Delta(payload)
        if t.kind == "name":
            name = t.text
            if name in ("M", "S", "T"):
                if self.mode != "op":
                    self.error(f"letter {name} is only allowed in operator expressions")
                self.advance()
                m = 1
                if (
                    self.tok.text == "("
                    and self.toks[self.i + 1].kind == "name"
                    and self.toks[self.i + 1].text == "g"
                ):
                    self.advance()
                    self.advance()
                    self.expect("^")
                    m = self.nat("symbol power m =")
                    self.expect(")")
                return Letter(name, m)
            self.advance()
            if name == "i":
                return UPoly.constant(Scalar(0, 1))
            if name == "w":
                if self.mode == "poly":
                    self.error("w is not allowed in a concrete polynomial", t)
                return UPoly.w()
            if name == "u" and self.mode == "upoly":
                return UPoly.u()
            if name == "z" and self.mode == "poly":
                return UPoly.u()
            if name == "g":
                self.error("g may only appear as T(g^m), S(g^m), M(g^m)", t)
            self.error(f"unknown symbol {name!r}", t)
        if t.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.text!r}")


def _negate(v):
    if isinstance(v, UPoly):
        return -v
    return _scale(WPoly.constant(-1), v)


def _scale(c: WPoly, e: OperatorExpr) -> OperatorExpr:
    if isinstance(e, ScalarMul):
        c, e = c * e.coef, e.expr
    return e if c == 1 else ScalarMul(c, e)


def _as_wpoly(p: UPoly) -> WPoly:
    return p.coeff(0)


def parse(text: str) -> OperatorExpr:
    """Parse an operator expression."""
    value = _Parser(text, "op").parse_all()
    if isinstance(value, UPoly):
        raise ParseError("expression contains no operator (the algebra has no identity)", 0)
    return value


def parse_upoly(text: str) -> UPoly:
    """Parse a polynomial in ``u`` and ``w`` (a d0 payload)."""
    return _Parser(text, "upoly").parse_all()


def parse_poly(text: str) -> List[Scalar]:
    """Parse a concrete polynomial in ``z``; returns dense coefficients."""
    p = _Parser(text, "poly").parse_all()
    d = max(p.degree(), 0)
    return [p.coeff(k).constant_term() for k in range(d + 1)]


# -- formatting -----------------------------------------------------------------


def format_scalar(c: Scalar, as_factor: bool = False) -> str:
    s = str(c)
    if as_factor and c.re != 0 and c.im != 0:
        return f"({s})"
    return s


def _format_terms(terms: List[Tuple[Scalar, str]]) -> str:
    """Join coefficient/monomial pairs as a signed sum."""
    parts: List[str] = []
    for c, mono in terms:
        if not mono:
            t = format_scalar(c, as_factor=True)
        elif c == 1:
            t = mono
        elif c == -1:
            t = "-" + mono
        else:
            t = f"{format_scalar(c, as_factor=True)}*{mono}"
        if parts and t.startswith("-"):
            parts.append(" - " + t[1:])
        elif parts:
            parts.append(" + " + t)
        else:
            parts.append(t)
    return "".join(parts) if parts else "0"


def _mono(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def format_wpoly(p: WPoly) -> str:
    terms = [(c, _mono("w", k[0])) for k, c in sorted(p.items())]
    return _format_terms(terms)


def format_upoly(p: UPoly, var: str = "u") -> str:
    terms = []
    for (a, b), c in sorted(p.items()):
        mono = "*".join(x for x in (_mono("w", b), _mono(var, a)) if x)
        terms.append((c, mono))
    return _format_terms(terms)


def _coef_negative(c: WPoly) -> bool:
    return len(c) == 1 and next(iter(c.items()))[1].is_negative()


def _fmt_coef(c: WPoly) -> str:
    s = format_wpoly(c)
    return f"({s})" if len(c) > 1 else s


def _plain(e: OperatorExpr) -> str:
    if isinstance(e, Letter):
        return e.name if e.m == 1 else f"{e.name}(g^{e.m})"
    if isinstance(e, Delta):
        return "d0" if e.payload == 1 else "d0{" + format_upoly(e.payload) + "}"
    if isinstance(e, Power):
        inner = _plain(e.base)
        if not isinstance(e.base, Atom):
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    if isinstance(e, Product):
        return "*".join(
            _plain(f) if isinstance(f, (Letter, Delta, Power)) else f"({_plain(f)})"
            for f in e.factors
        )
    if isinstance(e, ScalarMul):
        body = _plain(e.expr)
        if isinstance(e.expr, (Sum, ScalarMul)):
            body = f"({body})"
        if e.coef == 1:
            return f"1*{body}"
        if e.coef == -1:
            return f"-{body}"
        return f"{_fmt_coef(e.coef)}*{body}"
    if isinstance(e, Sum):
        out = []
        for k, t in enumerate(e.terms):
            s = f"({_plain(t)})" if isinstance(t, Sum) else _plain(t)
            if k == 0:
                out.append(s)
            elif isinstance(t, ScalarMul) and _coef_negative(t.coef):
                out.append(" - " + _plain_scaled(-t.coef, t.expr))
            else:
                out.append(" + " + s)
        return "".join(out)
    raise TypeError(e)


def _plain_scaled(c: WPoly, e: OperatorExpr) -> str:
    if c == 1:
        body = _plain(e)
        return f"({body})" if isinstance(e, (Sum, ScalarMul)) else body
    return _plain(ScalarMul(c, e))


def _latex_scalar(c: Scalar) -> str:
    def frac(q: Fraction) -> str:
        if q.denominator == 1:
            return str(q.numerator)
        sign = "-" if q < 0 else ""
        return f"{sign}\\tfrac{{{abs(q.numerator)}}}{{{q.denominator}}}"

    if c.im == 0:
        return frac(c.re)
    if c.re == 0:
        return f"{frac(c.im)}i"
    return f"({frac(c.re)}+{frac(c.im)}i)"


def _latex_poly(p, kind: str) -> str:
    terms = []
    items = sorted(p.items())
    for key, c in items:
        if kind == "w":
            mono = "" if key[0] == 0 else ("g(0)" if key[0] == 1 else f"g(0)^{{{key[0]}}}")
        else:
            a, b = key
            parts = []
            if b:
                parts.append("g(0)" if b == 1 else f"g(0)^{{{b}}}")
            if a:
                parts.append("(g-g(0))" if a == 1 else f"(g-g(0))^{{{a}}}")
            mono = "".join(parts)
        if not mono:
            terms.append(_latex_scalar(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(_latex_scalar(c) + mono)
    s = "+".join(terms).replace("+-", "-")
    return s or "0"


def _latex(e: OperatorExpr) -> str:
    if isinstance(e, Letter):
        return f"{e.name}_g" if e.m == 1 else f"{e.name}_{{g^{{{e.m}}}}}"
    if isinstance(e, Delta):
        if e.payload == 1:
            return "\\delta_0"
        body = _latex_poly(e.payload, "u")
        if len(e.payload) > 1:
            body = f"({body})"
        return f"{body}\\,\\delta_0"
    if isinstance(e, Power):
        inner = _latex(e.base)
        if isinstance(e.base, Letter) and e.base.m == 1:
            return f"{inner}^{{{e.exponent}}}"
        return f"({inner})^{{{e.exponent}}}"
    if isinstance(e, Product):
        return "".join(
            _latex(f) if isinstance(f, (Letter, Delta, Power)) else f"({_latex(f)})"
            for f in e.factors
        )
    if isinstance(e, ScalarMul):
        body = _latex(e.expr)
        if isinstance(e.expr, (Sum, ScalarMul)):
            body = f"({body})"
        c = _latex_poly(e.coef, "w")
        if len(e.coef) > 1:
            c = f"({c})"
        if c == "1":
            return body
        return ("-" if c == "-1" else c) + body
    if isinstance(e, Sum):
        s = "+".join(_latex(t) for t in e.terms)
        return s.replace("+-", "-")
    raise TypeError(e)


def _to_json(e: OperatorExpr):
    if isinstance(e, Letter):
        return {"letter": e.name, "m": e.m}
    if isinstance(e, Delta):
        return {"delta": format_upoly(e.payload)}
    if isinstance(e, Power):
        return {"power": _to_json(e.base), "exponent": e.exponent}
    if isinstance(e, Product):
        return {"product": [_to_json(f) for f in e.factors]}
    if isinstance(e, ScalarMul):
        return {"scale": format_wpoly(e.coef), "expr": _to_json(e.expr)}
    if isinstance(e, Sum):
        return {"sum": [_to_json(t) for t in e.terms]}
    raise TypeError(e)


def format_expr(e: OperatorExpr, style: str = "plain") -> str:
    """Render ``e`` as ``plain`` text (re-parseable), ``latex`` or ``json``."""
    if style == "plain":
        return _plain(e)
    if style == "latex":
        return _latex(e)
    if style == "json":
        return json.dumps(_to_json(e), sort_keys=True)
    raise ValueError(f"unknown style {style!r}")
