"""Reduction of operator expressions to canonical S^j T^k form.

Every element of the algebra generated by M, S, T (and delta atoms) has a
unique expansion::

    sum_{j,k} c_{j,k} S^j T^k  +  D(u, w) d0

where ``d0 f = f(0)``, ``u = g - g(0)`` and ``w = g(0)``.  Normalization works
right to left: every word is built by prepending one letter at a time to an
already canonical suffix, using

    S * S^j T^k = S^{j+1} T^k
    T * T^k     = T^{k+1}
    T * S^j T^k = S*R - T*R   (- w*u*d0 when j = 1, k = 0),  R = T * S^{j-1} T^k
    M           = S + T + w*d0
    d0 * S^j T^k = 0          (j + k >= 1)

The evaluation oracle :func:`evaluate_exact` applies the integral definitions
of the letters to polynomials directly and shares no code with the rewriter.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (
    Scalar,
    UPoly,
    WPoly,
    as_scalar,
    upoly_M_transform,
    upoly_S_transform,
    upoly_T_transform,
)
from .expr import (
    Delta,
    Letter,
    OperatorExpr,
    Power,
    Product,
    ScalarMul,
    Sum,
    format_upoly,
    format_wpoly,
    parse,
)

__all__ = [
    "CanonicalForm",
    "GroupedForm",
    "NormalizationLimitError",
    "WDependentCoefficient",
    "normalize",
    "group",
    "is_trivial",
    "commutator",
    "iterated_commutator",
    "commutator_closed_form",
    "evaluate_exact",
    "st_monomial_action",
    "random_expr",
    "random_rewrite",
    "DEFAULT_MAX_TERMS",
]

DEFAULT_MAX_TERMS = 10**6

Key = Tuple[int, int, int]  # (S power, T power, w power)


class NormalizationLimitError(RuntimeError):
    """Raised when an intermediate form exceeds the term budget."""


class WDependentCoefficient(ValueError):
    """An S^j T^k coefficient involves w, so grouping is not defined."""


def _acc(out: dict, key, c: Scalar):
    if key in out:
        s = out[key] + c
        if s:
            out[key] = s
        else:
            del out[key]
    elif c:
        out[key] = c


class CanonicalForm:
    """Coefficients on the words S^j T^k plus a delta payload.

    ``st`` maps ``(j, k)`` to a ``WPoly`` coefficient; ``delta`` is a UPoly.
    """

    __slots__ = ("_st", "_delta")

    def __init__(self, st=None, delta: UPoly | None = None):
        flat: Dict[Key, Scalar] = {}
        for (j, k), c in (st or {}).items():
            if j < 0 or k < 0 or j + k < 1:
                raise ValueError(f"invalid basis word S^{j}T^{k}")
            if not isinstance(c, WPoly):
                c = WPoly.constant(c)
            for (b,), v in c.items():
                _acc(flat, (j, k, b), v)
        self._st = flat
        self._delta = delta if delta is not None else UPoly()

    @classmethod
    def _raw(cls, st: Dict[Key, Scalar], delta: UPoly) -> "CanonicalForm":
        obj = object.__new__(cls)
        obj._st = st
        obj._delta = delta
        return obj

    @property
    def st(self) -> Dict[Tuple[int, int], WPoly]:
        grouped: Dict[Tuple[int, int], Dict[Tuple[int], Scalar]] = {}
        for (j, k, b), c in self._st.items():
            grouped.setdefault((j, k), {})[(b,)] = c
        return {jk: WPoly._from_clean(t) for jk, t in grouped.items()}

    @property
    def delta(self) -> UPoly:
        return self._delta

    def coef(self, j: int, k: int) -> WPoly:
        return self.st.get((j, k), WPoly())

    def words(self) -> List[Tuple[int, int]]:
        """Basis words in display order: by length, then more S first."""
        return sorted({(j, k) for j, k, _ in self._st}, key=lambda w: (w[0] + w[1], -w[0]))

    def is_zero(self) -> bool:
        return not self._st and not self._delta

    def size(self) -> int:
        return len(self._st) + len(self._delta)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self._st == other._st and self._delta == other._delta

    def __hash__(self):
        return hash((frozenset(self._st.items()), self._delta))

    def __add__(self, other: "CanonicalForm") -> "CanonicalForm":
        st = dict(self._st)
        for key, c in other._st.items():
            _acc(st, key, c)
        return CanonicalForm._raw(st, self._delta + other._delta)

    def __neg__(self) -> "CanonicalForm":
        return self.scale(WPoly.constant(-1))

    def __sub__(self, other: "CanonicalForm") -> "CanonicalForm":
        return self + (-other)

    def scale(self, c) -> "CanonicalForm":
        """Multiply by a scalar or a polynomial in w."""
        if not isinstance(c, WPoly):
            c = WPoly.constant(as_scalar(c))
        st: Dict[Key, Scalar] = {}
        for (b2,), v in c.items():
            for (j, k, b), x in self._st.items():
                _acc(st, (j, k, b + b2), x * v)
        return CanonicalForm._raw(st, self._delta * c)

    def to_expr(self) -> Optional[OperatorExpr]:
        """Equivalent expression in the parser's grammar (None for zero)."""
        terms: List[OperatorExpr] = []
        st = self.st
        for j, k in self.words():
            parts: List[OperatorExpr] = []
            if j:
                parts.append(_pow(Letter("S"), j))
            if k:
                parts.append(_pow(Letter("T"), k))
            word = parts[0] if len(parts) == 1 else Product(tuple(parts))
            c = st[(j, k)]
            terms.append(word if c == 1 else ScalarMul(c, word))
        if self._delta:
            terms.append(Delta(self._delta))
        if not terms:
            return None
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def __str__(self) -> str:
        from .expr import format_expr

        e = self.to_expr()
        return "0" if e is None else format_expr(e)

    def __repr__(self) -> str:
        return f"CanonicalForm({self})"

    def to_json(self) -> dict:
        st = self.st
        return {
            "st": [{"j": j, "k": k, "coef": format_wpoly(st[(j, k)])} for j, k in self.words()],
            "delta": format_upoly(self._delta),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _pow(e: OperatorExpr, n: int) -> OperatorExpr:
    return e if n == 1 else Power(e, n)


# -- the rewriting core ---------------------------------------------------------
# Cached results below are w-free on their st part, stored as
# ({(j, k): Scalar}, UPoly) and shared read-only.

_Basic = Tuple[Tuple[Tuple[Tuple[int, int], Scalar], ...], UPoly]
_NEG_WU = UPoly({(1, 1): -1})


@lru_cache(maxsize=None)
def _prepend_T(j: int, k: int) -> _Basic:
    """Canonical form of T * S^j T^k; (0, 0) stands for the empty word."""
    if j == 0:
        return (((0, k + 1), Scalar(1)),), UPoly()
    r_st, r_delta = _prepend_T(j - 1, k)
    st: Dict[Tuple[int, int], Scalar] = {}
    delta = upoly_S_transform(r_delta) - upoly_T_transform(r_delta)
    for (a, b), c in r_st:
        _acc(st, (a + 1, b), c)
        t_st, t_delta = _prepend_T(a, b)
        for key, v in t_st:
            _acc(st, key, -c * v)
        if t_delta:
            delta = delta - t_delta * c
    if j == 1 and k == 0:
        delta = delta + _NEG_WU
    return tuple(sorted(st.items())), delta


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit

    def check(self, f: CanonicalForm) -> CanonicalForm:
        if f.size() > self.limit:
            raise NormalizationLimitError(
                f"intermediate form has {f.size()} terms, limit is {self.limit}"
            )
        return f


def _apply_S_power(f: CanonicalForm, j: int) -> CanonicalForm:
    if j == 0:
        return f
    st = {(a + j, b, c): v for (a, b, c), v in f._st.items()}
    delta = f._delta
    for _ in range(j):
        delta = upoly_S_transform(delta)
    return CanonicalForm._raw(st, delta)


def _apply_T(f: CanonicalForm) -> CanonicalForm:
    st: Dict[Key, Scalar] = {}
    delta = upoly_T_transform(f._delta)
    for (a, b, wp), c in f._st.items():
        t_st, t_delta = _prepend_T(a, b)
        for (x, y), v in t_st:
            _acc(st, (x, y, wp), c * v)
        if t_delta:
            delta = delta + t_delta * UPoly({(0, wp): c})
    return CanonicalForm._raw(st, delta)


def _apply_M(f: CanonicalForm) -> CanonicalForm:
    # words: M*W = S*W + T*W; delta part uses the multiplication transform
    words = CanonicalForm._raw(f._st, UPoly())
    out = _apply_S_power(words, 1) + _apply_T(words)
    return CanonicalForm._raw(out._st, out._delta + upoly_M_transform(f._delta))


def compose(a: CanonicalForm, b: CanonicalForm, budget: _Budget | None = None) -> CanonicalForm:
    """Canonical form of a o b (b acts first)."""
    budget = budget or _Budget(DEFAULT_MAX_TERMS)
    by_t: Dict[int, List[Tuple[int, int, Scalar]]] = {}
    for (j, k, wp), c in a._st.items():
        by_t.setdefault(k, []).append((j, wp, c))
    st: Dict[Key, Scalar] = {}
    delta = UPoly()
    current = b
    for k in range(max(by_t, default=0) + 1):
        if k:
            current = budget.check(_apply_T(current))
        for j, wp, c in by_t.get(k, ()):
            part = _apply_S_power(current, j)
            for (x, y, z), v in part._st.items():
                _acc(st, (x, y, z + wp), v * c)
            delta = delta + part._delta * UPoly({(0, wp): c})
        if len(st) > budget.limit:
            budget.check(CanonicalForm._raw(st, delta))
    if a._delta:
        delta = delta + a._delta * b._delta.at_u_zero()
    return budget.check(CanonicalForm._raw(st, delta))


def _power(f: CanonicalForm, n: int, budget: _Budget) -> CanonicalForm:
    result = None
    base = f
    while n:
        if n & 1:
            result = base if result is None else compose(result, base, budget)
        n >>= 1
        if n:
            base = compose(base, base, budget)
    return result


_M_FORM = CanonicalForm._raw({(1, 0, 0): Scalar(1), (0, 1, 0): Scalar(1)}, UPoly.w())


def _atom_form(e: OperatorExpr, budget: _Budget) -> CanonicalForm:
    if isinstance(e, Delta):
        return CanonicalForm._raw({}, e.payload)
    if e.name == "S":
        return CanonicalForm._raw({(e.m, 0, 0): Scalar(1)}, UPoly())
    if e.name == "T":
        return CanonicalForm._raw({(e.m - 1, 1, 0): Scalar(e.m)}, UPoly())
    return _power(_M_FORM, e.m, budget)


def normalize(e: Union[OperatorExpr, str], max_terms: int = DEFAULT_MAX_TERMS) -> CanonicalForm:
    """Canonical form of an expression (or of expression text)."""
    if isinstance(e, str):
        e = parse(e)
    budget = _Budget(max_terms)

    def go(e) -> CanonicalForm:
        if isinstance(e, (Letter, Delta)):
            return _atom_form(e, budget)
        if isinstance(e, Sum):
            out = CanonicalForm()
            for t in e.terms:
                out = budget.check(out + go(t))
            return out
        if isinstance(e, Product):
            out = go(e.factors[-1])
            for f in reversed(e.factors[:-1]):
                out = _left_mul(go(f), out, f)
            return out
        if isinstance(e, Power):
            return _power(go(e.base), e.exponent, budget)
        if isinstance(e, ScalarMul):
            return go(e.expr).scale(e.coef)
        raise TypeError(f"not an operator expression: {e!r}")

    def _left_mul(a: CanonicalForm, b: CanonicalForm, node) -> CanonicalForm:
        # single letters are cheaper applied directly
        if isinstance(node, Letter) and node.m == 1:
            if node.name == "T":
                return budget.check(_apply_T(b))
            if node.name == "S":
                return _apply_S_power(b, 1)
            return budget.check(_apply_M(b))
        return compose(a, b, budget)

    return go(e)


def is_trivial(c: CanonicalForm) -> bool:
    """True when the operator kills every z^l with l >= 1."""
    return not c._st


# -- grouped form ---------------------------------------------------------------


@dataclass(frozen=True)
class GroupedForm:
    """Grouping of a canonical form by the S-power of the T-words.

    ``P[j][k-1]`` is the coefficient of S^j T^k (k >= 1); ``Pn1[j-1]`` that of
    S^j; ``Pn2`` the delta payload divided by w, or None when not divisible
    (then ``delta`` holds it raw).
    """

    n: int
    P: Tuple[Tuple[Scalar, ...], ...]
    Pn1: Tuple[Scalar, ...]
    Pn2: Optional[UPoly]
    delta: UPoly

    @property
    def delta_divisible(self) -> bool:
        return self.Pn2 is not None


def _trim(seq: List[Scalar]) -> Tuple[Scalar, ...]:
    while seq and not seq[-1]:
        seq.pop()
    return tuple(seq)


def group(c: CanonicalForm) -> GroupedForm:
    rows: Dict[int, Dict[int, Scalar]] = {}
    pure_s: Dict[int, Scalar] = {}
    for (j, k, wp), v in c._st.items():
        if wp:
            raise WDependentCoefficient(f"coefficient of S^{j}T^{k} depends on w")
        if k == 0:
            pure_s[j] = v
        else:
            rows.setdefault(j, {})[k] = v
    n = max(rows, default=-1)
    P = tuple(
        _trim([rows.get(j, {}).get(k, Scalar(0)) for k in range(1, max(rows.get(j, {0: 0})) + 1)])
        if j in rows
        else ()
        for j in range(n + 1)
    )
    Pn1 = _trim([pure_s.get(j, Scalar(0)) for j in range(1, max(pure_s, default=0) + 1)])
    return GroupedForm(n, P, Pn1, c._delta.divide_by_w(), c._delta)


# -- commutators ----------------------------------------------------------------


def commutator(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr:
    return Sum((Product((a, b)), ScalarMul(WPoly.constant(-1), Product((b, a)))))


def iterated_commutator(a: OperatorExpr, b: OperatorExpr, k: int) -> OperatorExpr:
    """sum_j (-1)^j C(k, j) B^j A B^(k-j)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    terms = []
    for j in range(k + 1):
        parts = []
        if j:
            parts.append(_pow(b, j))
        parts.append(a)
        if k - j:
            parts.append(_pow(b, k - j))
        word = Product(tuple(parts))
        c = (-1) ** j * math.comb(k, j)
        terms.append(word if c == 1 else ScalarMul(WPoly.constant(c), word))
    return Sum(tuple(terms))


def commutator_closed_form(k: int, j: int) -> CanonicalForm:
    """Closed form of the j-fold commutator of S^k with T.

    For j <= k it is k!/(k-j)! T^j S^(k-j) T^j plus a delta term; for j > k
    only the delta term ``-(-1)^j/j! w^k u^j d0`` survives.
    """
    delta = UPoly({(j, k): Fraction(-((-1) ** j), math.factorial(j))})
    if j > k:
        return CanonicalForm(delta=delta)
    parts = [_pow(Letter("T"), j)]
    if k - j:
        parts.append(_pow(Letter("S"), k - j))
    parts.append(_pow(Letter("T"), j))
    word = normalize(Product(tuple(parts)))
    return word.scale(Fraction(math.factorial(k), math.factorial(k - j))) + CanonicalForm(
        delta=delta
    )


# -- exact evaluation oracle ------------------------------------------------------

Poly = List[Scalar]


def _poly(p: Sequence) -> Poly:
    return [as_scalar(c) for c in p]


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return out


def _pscale(a: Poly, c: Scalar) -> Poly:
    return [x * c for x in a]


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [Scalar(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _pderiv(a: Poly) -> Poly:
    return [a[n] * n for n in range(1, len(a))]


def _pint(a: Poly) -> Poly:
    return [Scalar(0)] + [c / (n + 1) for n, c in enumerate(a)]


def _ppow(a: Poly, m: int) -> Poly:
    out: Poly = [Scalar(1)]
    for _ in range(m):
        out = _pmul(out, a)
    return out


def _pstrip(a: Poly) -> Poly:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _upoly_at(p: UPoly, g: Poly) -> Poly:
    """P(g - g(0)) with w = g(0), as a polynomial in z."""
    w = g[0] if g else Scalar(0)
    u = [Scalar(0)] + list(g[1:])
    out: Poly = []
    for (a, b), c in p.items():
        out = _padd(out, _pscale(_ppow(u, a), c * w**b))
    return out


def _letter(name: str, f: Poly, gm: Poly) -> Poly:
    if name == "M":
        return _pmul(f, gm)
    if name == "T":
        return _pint(_pmul(f, _pderiv(gm)))
    return _pint(_pmul(_pderiv(f), gm))


def evaluate_exact(L, f: Sequence, g: Sequence) -> Poly:
    """Apply an expression or canonical form to the polynomial ``f``.

    ``f`` and ``g`` are coefficient sequences (index = power of z).  The
    result has trailing zeros stripped.
    """
    f = _pstrip(_poly(f))
    g = _pstrip(_poly(g))
    w = g[0] if g else Scalar(0)
    if isinstance(L, str):
        L = parse(L)
    if isinstance(L, CanonicalForm):
        return _pstrip(_eval_form(L, f, g, w))
    gpow: Dict[int, Poly] = {}

    def gp(m: int) -> Poly:
        if m not in gpow:
            gpow[m] = _ppow(g, m)
        return gpow[m]

    def go(e, f: Poly) -> Poly:
        if isinstance(e, Letter):
            return _letter(e.name, f, gp(e.m))
        if isinstance(e, Delta):
            f0 = f[0] if f else Scalar(0)
            return _pscale(_upoly_at(e.payload, g), f0)
        if isinstance(e, Sum):
            out: Poly = []
            for t in e.terms:
                out = _padd(out, go(t, f))
            return out
        if isinstance(e, Product):
            for factor in reversed(e.factors):
                f = go(factor, f)
            return f
        if isinstance(e, Power):
            for _ in range(e.exponent):
                f = go(e.base, f)
            return f
        if isinstance(e, ScalarMul):
            return _pscale(go(e.expr, f), as_scalar(e.coef(w)))
        raise TypeError(e)

    return _pstrip(go(L, f))


def _eval_form(c: CanonicalForm, f: Poly, g: Poly, w: Scalar) -> Poly:
    st = c.st
    out = _pscale(_upoly_at(c.delta, g), f[0] if f else Scalar(0))
    by_t: Dict[int, List[int]] = {}
    for j, k in st:
        by_t.setdefault(k, []).append(j)
    current = f
    for k in range(max(by_t, default=-1) + 1):
        if k:
            current = _letter("T", current, g)
        js = sorted(by_t.get(k, ()))
        s_img = current
        done = 0
        for j in js:
            while done < j:
                s_img = _letter("S", s_img, g)
                done += 1
            out = _padd(out, _pscale(s_img, as_scalar(st[(j, k)](w))))
    return out


def st_monomial_action(m: int, j: int, n: int) -> Tuple[Fraction, int]:
    """Leading coefficient and degree in u of S^(m-j) T^j applied to u^n."""
    if not 0 <= j <= m:
        raise ValueError("need 0 <= j <= m")
    lead = Fraction(math.factorial(n), (m + n) * math.factorial(n + j - 1))
    return lead, m + n


# -- random expressions -------------------------------------------------------------


def _random_scalar(rng: random.Random, complex_ok: bool, w_ok: bool) -> WPoly:
    re = Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3))
    im = Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if complex_ok and rng.random() < 0.3 else 0
    c = WPoly.constant(Scalar(re, im))
    if w_ok and rng.random() < 0.2:
        c = c * WPoly.w()
    return c


def random_expr(
    rng: random.Random,
    max_letters: int = 6,
    max_depth: int = 4,
    allow_delta: bool = True,
    allow_general: bool = True,
    complex_ok: bool = True,
    w_scalars: bool = False,
) -> OperatorExpr:
    """Random expression with at most ``max_letters`` letters per word."""

    def atom() -> OperatorExpr:
        if allow_delta and rng.random() < 0.12:
            terms = {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) or 1}
            return Delta(UPoly(terms))
        m = rng.randint(1, 2) if allow_general and rng.random() < 0.25 else 1
        return Letter(rng.choice("MST"), m)

    def build(budget: int, depth: int) -> OperatorExpr:
        if budget <= 1 or depth <= 0:
            return atom()
        r = rng.random()
        if r < 0.35:
            split = rng.randint(1, budget - 1)
            return Product((build(split, depth - 1), build(budget - split, depth - 1)))
        if r < 0.6:
            return Sum(tuple(build(budget, depth - 1) for _ in range(rng.randint(2, 3))))
        if r < 0.75:
            n = rng.randint(2, 3)
            if budget // n >= 1:
                return Power(build(budget // n, depth - 1), n)
        if r < 0.9:
            return ScalarMul(_random_scalar(rng, complex_ok, w_scalars), build(budget, depth - 1))
        return atom()

    return build(rng.randint(1, max_letters), max_depth)


def random_rewrite(e: OperatorExpr, rng: random.Random) -> OperatorExpr:
    """An algebraically equal variant of ``e`` (reassociated, reordered)."""

    def go(e):
        if isinstance(e, (Letter, Delta)):
            if isinstance(e, Letter) and e.m > 1 and e.name in "MS" and rng.random() < 0.5:
                # M(g^m) = M^m and S(g^m) = S^m
                return Power(Letter(e.name), e.m)
            return e
        if isinstance(e, Sum):
            terms = [go(t) for t in e.terms]
            rng.shuffle(terms)
            if len(terms) > 2 and rng.random() < 0.5:
                terms = [Sum(tuple(terms[:2]))] + terms[2:]
            return Sum(tuple(terms))
        if isinstance(e, Product):
            fs = []
            for f in e.factors:
                f = go(f)
                fs.extend(f.factors if isinstance(f, Product) else [f])
            if len(fs) > 2:
                cut = rng.randint(1, len(fs) - 1)
                left = fs[:cut] if cut > 1 else fs[:1]
                right = fs[cut:]
                lhs = Product(tuple(left)) if len(left) > 1 else left[0]
                rhs = Product(tuple(right)) if len(right) > 1 else right[0]
                return Product((lhs, rhs))
            return Product(tuple(fs))
        if isinstance(e, Power):
            base = go(e.base)
            if e.exponent > 1 and rng.random() < 0.5:
                return Product((base, _pow(base, e.exponent - 1)))
            return Power(base, e.exponent)
        if isinstance(e, ScalarMul):
            inner = go(e.expr)
            if isinstance(inner, Product) and rng.random() < 0.5:
                # move the scalar onto a factor
                fs = list(inner.factors)
                i = rng.randrange(len(fs))
                fs[i] = ScalarMul(e.coef, fs[i])
                return Product(tuple(fs))
            return ScalarMul(e.coef, inner)
        raise TypeError(e)

    return go(e)
