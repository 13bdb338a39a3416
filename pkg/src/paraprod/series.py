"""Truncated Taylor series on the disc and the symbols used in experiments.

A :class:`TaylorSeries` holds coefficients ``a_0..a_N`` either exactly (as
``Scalar``) or as a complex numpy array.  All products are truncated at N,
so derivative-then-antiderivative pipelines such as the paraproduct actions
are exact to order N.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from typing import List, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algebra import Scalar, UPoly, as_scalar
from .expr import Delta, Letter, Power, Product, ScalarMul, Sum, parse, parse_poly

__all__ = [
    "TaylorSeries",
    "SymbolSpec",
    "Polynomial",
    "LogEKernel",
    "PowerSymbol",
    "Dilated",
    "TestFunctionH",
    "TestFunctionF",
    "symbol_series",
    "apply_letter",
    "apply_expr",
    "test_function_h",
    "test_function_f",
    "parse_symbol",
    "DEFAULT_N",
]

DEFAULT_N = 256


class TaylorSeries:
    """Coefficients ``a_0..a_N`` of an analytic function."""

    __slots__ = ("coeffs", "exact")

    def __init__(self, coeffs, N: int | None = None, exact: bool | None = None):
        if isinstance(coeffs, TaylorSeries):
            exact = coeffs.exact if exact is None else exact
            coeffs = coeffs.coeffs
        if exact is None:
            exact = not isinstance(coeffs, np.ndarray) and all(
                isinstance(c, (int, Fraction, Scalar)) for c in coeffs
            )
        if exact:
            data = [as_scalar(c) for c in coeffs]
            if N is not None:
                data = (data + [Scalar(0)] * (N + 1))[: N + 1]
            if not data:
                data = [Scalar(0)]
        else:
            arr = np.asarray(
                [complex(c) for c in coeffs] if not isinstance(coeffs, np.ndarray) else coeffs,
                dtype=complex,
            )
            if N is not None:
                out = np.zeros(N + 1, dtype=complex)
                m = min(N + 1, arr.size)
                out[:m] = arr[:m]
                arr = out
            data = arr if arr.size else np.zeros(1, dtype=complex)
        self.coeffs = data
        self.exact = exact

    # -- construction --
    @classmethod
    def zeros(cls, N: int, exact: bool = False) -> "TaylorSeries":
        return cls([Scalar(0)] * (N + 1) if exact else np.zeros(N + 1, dtype=complex), exact=exact)

    @classmethod
    def constant(cls, c, N: int, exact: bool = False) -> "TaylorSeries":
        return cls([c], N=N, exact=exact)

    @classmethod
    def monomial(cls, n: int, N: int, exact: bool = False) -> "TaylorSeries":
        data = [0] * n + [1]
        return cls(data, N=N, exact=exact)

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def _like(self, data) -> "TaylorSeries":
        return TaylorSeries(data, exact=self.exact)

    def _check(self, other: "TaylorSeries"):
        if not isinstance(other, TaylorSeries):
            raise TypeError("expected a TaylorSeries")
        if other.exact != self.exact or other.N != self.N:
            raise ValueError("series must share mode and truncation order")

    def to_float(self) -> "TaylorSeries":
        if not self.exact:
            return self
        return TaylorSeries(np.array([complex(c) for c in self.coeffs]), exact=False)

    def truncate(self, N: int) -> "TaylorSeries":
        return TaylorSeries(self.coeffs, N=N, exact=self.exact)

    def as_array(self) -> np.ndarray:
        return self.to_float().coeffs

    # -- arithmetic --
    def __add__(self, other):
        if not isinstance(other, TaylorSeries):
            other = TaylorSeries.constant(other, self.N, self.exact)
        self._check(other)
        if self.exact:
            return self._like([a + b for a, b in zip(self.coeffs, other.coeffs)])
        return self._like(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        if self.exact:
            return self._like([-a for a in self.coeffs])
        return self._like(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TaylorSeries":
        if self.exact:
            c = as_scalar(c)
            return self._like([a * c for a in self.coeffs])
        return self._like(self.coeffs * complex(c))

    def __mul__(self, other):
        if not isinstance(other, TaylorSeries):
            return self.scale(other)
        self._check(other)
        N = self.N
        if self.exact:
            a, b = self.coeffs, other.coeffs
            out = [Scalar(0)] * (N + 1)
            for i, x in enumerate(a):
                if not x:
                    continue
                for j in range(N + 1 - i):
                    y = b[j]
                    if y:
                        out[i + j] = out[i + j] + x * y
            return self._like(out)
        return self._like(np.convolve(self.coeffs, other.coeffs)[: N + 1])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TaylorSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("use pow_real for non-integer powers")
        out = TaylorSeries.constant(1, self.N, self.exact)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def differentiate(self) -> "TaylorSeries":
        """Derivative; the top coefficient becomes 0 (length is kept)."""
        if self.exact:
            d = [self.coeffs[n] * n for n in range(1, self.N + 1)] + [Scalar(0)]
            return self._like(d)
        d = np.zeros_like(self.coeffs)
        d[:-1] = self.coeffs[1:] * np.arange(1, self.N + 1)
        return self._like(d)

    def antidifferentiate(self) -> "TaylorSeries":
        """Antiderivative vanishing at 0, truncated at N."""
        if self.exact:
            return self._like([Scalar(0)] + [self.coeffs[n] / (n + 1) for n in range(self.N)])
        d = np.zeros_like(self.coeffs)
        d[1:] = self.coeffs[:-1] / np.arange(1, self.N + 1)
        return self._like(d)

    def dilate(self, lam) -> "TaylorSeries":
        """Coefficients a_n * lam^n, i.e. z -> f(lam z)."""
        if self.exact:
            lam = as_scalar(lam)
            return self._like([c * lam**n for n, c in enumerate(self.coeffs)])
        return self._like(self.coeffs * complex(lam) ** np.arange(self.N + 1))

    def log(self) -> "TaylorSeries":
        """Principal logarithm; needs a nonzero constant term."""
        a = self.coeffs
        if not a[0]:
            raise ValueError("log of a series with zero constant term")
        if self.exact:
            if a[0] != 1:
                raise ValueError("exact log needs constant term 1")
            b = [Scalar(0)] * (self.N + 1)
            for n in range(1, self.N + 1):
                acc = a[n] * n
                for k in range(1, n):
                    acc = acc - b[k] * k * a[n - k]
                b[n] = acc / n
            return self._like(b)
        N = self.N
        b = np.zeros(N + 1, dtype=complex)
        b[0] = cmath.log(a[0])
        kb = np.zeros(N + 1, dtype=complex)  # k * b_k
        for n in range(1, N + 1):
            kb[n] = (n * a[n] - np.dot(kb[1:n], a[n - 1 : 0 : -1])) / a[0]
            b[n] = kb[n] / n
        return self._like(b)

    def exp(self) -> "TaylorSeries":
        a = self.coeffs
        if self.exact:
            if a[0]:
                raise ValueError("exact exp needs zero constant term")
            e = [Scalar(1)] + [Scalar(0)] * self.N
            for n in range(1, self.N + 1):
                acc = Scalar(0)
                for k in range(1, n + 1):
                    acc = acc + a[k] * k * e[n - k]
                e[n] = acc / n
            return self._like(e)
        N = self.N
        ka = a * np.arange(N + 1)
        e = np.zeros(N + 1, dtype=complex)
        e[0] = cmath.exp(a[0])
        for n in range(1, N + 1):
            e[n] = np.dot(ka[1 : n + 1], e[n - 1 :: -1]) / n
        return self._like(e)

    def pow_real(self, beta: float) -> "TaylorSeries":
        """Principal branch of s^beta (float mode); needs s(0) != 0.

        Uses the recursion obtained from s * (s^beta)' = beta * s' * s^beta.
        """
        if self.exact:
            raise ValueError("real powers are float-mode only")
        a = self.coeffs
        if a[0] == 0:
            raise ValueError("real power of a series with zero constant term")
        N = self.N
        out = np.zeros(N + 1, dtype=complex)
        out[0] = cmath.exp(beta * cmath.log(a[0]))
        for n in range(1, N + 1):
            k = np.arange(1, n + 1)
            out[n] = np.dot(((beta + 1) * k - n) * a[1 : n + 1], out[n - 1 :: -1]) / (n * a[0])
        return self._like(out)

    # -- evaluation --
    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.as_array())

    def eval_deriv(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), npoly.polyder(self.as_array()))

    def max_abs_diff(self, other: "TaylorSeries") -> float:
        return float(np.max(np.abs(self.as_array() - other.as_array())))

    def __eq__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        if self.exact and other.exact:
            return self.coeffs == other.coeffs
        return self.N == other.N and np.array_equal(self.as_array(), other.as_array())

    def __repr__(self):
        shown = ", ".join(str(c) for c in list(self.coeffs[:6]))
        more = ", ..." if self.N >= 6 else ""
        return f"TaylorSeries([{shown}{more}], N={self.N}, exact={self.exact})"

    def to_json(self) -> list:
        if self.exact:
            return [str(c) for c in self.coeffs]
        return [[float(c.real), float(c.imag)] for c in self.coeffs]


# -- symbols ------------------------------------------------------------------------


class SymbolSpec:
    """An analytic function given by a formula; series plus closed forms."""

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        raise NotImplementedError

    def evaluate(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError

    def __call__(self, z):
        return self.evaluate(z)

    def eval(self, z):
        return self.evaluate(z)

    def eval_deriv(self, z):
        return self.deriv(z)


class Polynomial(SymbolSpec):
    def __init__(self, coeffs: Sequence):
        self.coeffs = [as_scalar(c) if isinstance(c, (int, Fraction, Scalar)) else complex(c) for c in coeffs]
        if not self.coeffs:
            self.coeffs = [Scalar(0)]

    @property
    def exact_ok(self) -> bool:
        return all(isinstance(c, Scalar) for c in self.coeffs)

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        if exact and not self.exact_ok:
            raise ValueError("float coefficients cannot form an exact series")
        return TaylorSeries(self.coeffs, N=N, exact=exact)

    def _arr(self):
        return np.array([complex(c) for c in self.coeffs])

    def evaluate(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self._arr())

    def deriv(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), npoly.polyder(self._arr()))

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"


class LogEKernel(SymbolSpec):
    """g(z) = log(e/(1-z)) = 1 + sum_{n>=1} z^n/n."""

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        if exact:
            return TaylorSeries([Scalar(1)] + [Scalar(Fraction(1, n)) for n in range(1, N + 1)], exact=True)
        a = np.zeros(N + 1, dtype=complex)
        a[0] = 1
        a[1:] = 1.0 / np.arange(1, N + 1)
        return TaylorSeries(a, exact=False)

    def evaluate(self, z):
        return 1 - np.log(1 - np.asarray(z, dtype=complex))

    def deriv(self, z):
        return 1 / (1 - np.asarray(z, dtype=complex))

    def __repr__(self):
        return "LogEKernel()"


class PowerSymbol(SymbolSpec):
    """base^beta on the principal branch (base(0) != 0)."""

    def __init__(self, base: SymbolSpec, beta: float):
        c0 = complex(base.evaluate(0.0))
        if c0 == 0:
            raise ValueError("real power needs a base with nonzero constant term")
        self.base = base
        self.beta = float(beta)

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        if exact:
            if float(self.beta).is_integer() and self.beta >= 0:
                return self.base.series(N, exact=True) ** int(self.beta)
            raise ValueError("real powers are float-mode only")
        return self.base.series(N).pow_real(self.beta)

    def evaluate(self, z):
        return np.exp(self.beta * np.log(self.base.evaluate(z)))

    def deriv(self, z):
        b = self.base.evaluate(z)
        return self.beta * np.exp((self.beta - 1) * np.log(b)) * self.base.deriv(z)

    def __repr__(self):
        return f"PowerSymbol({self.base!r}, {self.beta})"


class Dilated(SymbolSpec):
    """z -> base(lam z), |lam| <= 1."""

    def __init__(self, base: SymbolSpec, lam):
        if abs(complex(lam)) > 1:
            raise ValueError("dilation needs |lambda| <= 1")
        self.base = base
        self.lam = lam

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        return self.base.series(N, exact).dilate(self.lam)

    def evaluate(self, z):
        return self.base.evaluate(complex(self.lam) * np.asarray(z, dtype=complex))

    def deriv(self, z):
        lam = complex(self.lam)
        return lam * self.base.deriv(lam * np.asarray(z, dtype=complex))

    def __repr__(self):
        return f"Dilated({self.base!r}, {self.lam})"


class TestFunctionH(SymbolSpec):
    """(1-|lam|^2)^((alpha+2)/p) / (1 - conj(lam) z)^((2 alpha+4)/p); unit norm in A^p_alpha."""

    __test__ = False

    def __init__(self, lam, alpha: float, p: float):
        lam = complex(lam)
        if abs(lam) >= 1:
            raise ValueError("need |lambda| < 1")
        self.lam, self.alpha, self.p = lam, float(alpha), float(p)

    @property
    def s(self) -> float:
        return (2 * self.alpha + 4) / self.p

    @property
    def prefactor(self) -> float:
        return (1 - abs(self.lam) ** 2) ** ((self.alpha + 2) / self.p)

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        if exact:
            raise ValueError("test functions are float-mode only")
        return TaylorSeries(self.prefactor * _binomial_series(self.s, self.lam.conjugate(), N), exact=False)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return self.prefactor * np.exp(-self.s * np.log(1 - self.lam.conjugate() * z))

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        lb = self.lam.conjugate()
        return self.prefactor * self.s * lb * np.exp(-(self.s + 1) * np.log(1 - lb * z))


class TestFunctionF(SymbolSpec):
    """z / (1 - conj(lam) z)^gamma."""

    __test__ = False

    def __init__(self, gamma: float, lam):
        lam = complex(lam)
        if not 0 < abs(lam) < 1:
            raise ValueError("need 0 < |lambda| < 1")
        if gamma <= 0:
            raise ValueError("need gamma > 0")
        self.gamma, self.lam = float(gamma), lam

    def series(self, N: int, exact: bool = False) -> TaylorSeries:
        if exact:
            raise ValueError("test functions are float-mode only")
        out = np.zeros(N + 1, dtype=complex)
        if N >= 1:
            out[1:] = _binomial_series(self.gamma, self.lam.conjugate(), N - 1)
        return TaylorSeries(out, exact=False)

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return z * np.exp(-self.gamma * np.log(1 - self.lam.conjugate() * z))

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        lb = self.lam.conjugate()
        q = 1 - lb * z
        return np.exp(-self.gamma * np.log(q)) * (1 + self.gamma * lb * z / q)


def _binomial_series(s: float, b: complex, N: int) -> np.ndarray:
    """Coefficients of (1 - b z)^(-s): binom(s+n-1, n) b^n."""
    n = np.arange(1, N + 1)
    ratios = np.empty(N + 1, dtype=complex)
    ratios[0] = 1
    ratios[1:] = (s + n - 1) / n * b
    return np.cumprod(ratios)


def symbol_series(spec: SymbolSpec, N: int, exact: bool = False) -> TaylorSeries:
    if N < 0:
        raise ValueError("N must be >= 0")
    return spec.series(N, exact)


def test_function_h(lam, alpha: float, p: float, N: int) -> TaylorSeries:
    return TestFunctionH(lam, alpha, p).series(N)


def test_function_f(gamma: float, lam, N: int) -> TaylorSeries:
    return TestFunctionF(gamma, lam).series(N)


test_function_h.__test__ = False
test_function_f.__test__ = False


# -- letter actions -------------------------------------------------------------------


def _delta_series(payload: UPoly, f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    w = g.coeffs[0]
    u = g - w
    f0 = f.coeffs[0]
    out = TaylorSeries.zeros(g.N, g.exact)
    upow = {0: TaylorSeries.constant(1, g.N, g.exact)}
    for (a, b), c in sorted(payload.items()):
        if a not in upow:
            top = max(upow)
            cur = upow[top]
            for k in range(top + 1, a + 1):
                cur = cur * u
                upow[k] = cur
        coef = c * w**b * f0 if g.exact else complex(c) * w**b * f0
        out = out + upow[a].scale(coef)
    return out


def apply_letter(letter, f: TaylorSeries, g: TaylorSeries) -> TaylorSeries:
    """Apply ``"M"``, ``"S"``, ``"T"`` or a delta payload with symbol series ``g``."""
    f._check(g)
    if isinstance(letter, Delta):
        letter = letter.payload
    if isinstance(letter, UPoly):
        return _delta_series(letter, f, g)
    if letter == "M":
        return f * g
    if letter == "T":
        return (f * g.differentiate()).antidifferentiate()
    if letter == "S":
        return (f.differentiate() * g).antidifferentiate()
    raise ValueError(f"unknown letter {letter!r}")


def apply_expr(e, f: TaylorSeries, g: Union[SymbolSpec, TaylorSeries], N: int | None = None) -> TaylorSeries:
    """Apply an expression (or canonical form) to ``f`` with symbol ``g``."""
    from .rewrite import CanonicalForm

    if isinstance(e, str):
        e = parse(e)
    N = f.N if N is None else N
    f = f.truncate(N) if f.N != N else f
    gs = g if isinstance(g, TaylorSeries) else g.series(N, f.exact)
    if gs.N != N:
        gs = gs.truncate(N)
    w = gs.coeffs[0]
    gpow = {1: gs}

    def gm(m: int) -> TaylorSeries:
        if m not in gpow:
            gpow[m] = gs**m
        return gpow[m]

    def wval(c):
        v = c(w)
        return v if f.exact else complex(v)

    if isinstance(e, CanonicalForm):
        out = apply_letter(e.delta, f, gs)
        st = e.st
        by_t = {}
        for j, k in st:
            by_t.setdefault(k, []).append(j)
        cur = f
        for k in range(max(by_t, default=-1) + 1):
            if k:
                cur = apply_letter("T", cur, gs)
            img, done = cur, 0
            for j in sorted(by_t.get(k, ())):
                while done < j:
                    img = apply_letter("S", img, gs)
                    done += 1
                out = out + img.scale(wval(st[(j, k)]))
        return out

    def go(e, f: TaylorSeries) -> TaylorSeries:
        if isinstance(e, Letter):
            return apply_letter(e.name, f, gm(e.m))
        if isinstance(e, Delta):
            return apply_letter(e.payload, f, gs)
        if isinstance(e, Sum):
            out = go(e.terms[0], f)
            for t in e.terms[1:]:
                out = out + go(t, f)
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
            return go(e.expr, f).scale(wval(e.coef))
        raise TypeError(e)

    return go(e, f)


# -- textual symbol specs ----------------------------------------------------------------


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    return complex(t)


def _split_args(text: str) -> List[str]:
    depth, parts, cur = 0, [], ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


_CALL = re.compile(r"^\s*([a-z]+)\s*\((.*)\)\s*$", re.S)


def parse_symbol(text: str) -> SymbolSpec:
    """Parse a symbol description.

    Forms: ``log``; a polynomial in z such as ``1+z^2``; ``pow(SPEC, beta)``;
    ``dil(SPEC, lam)``; ``h(lam, alpha, p)``; ``ftest(gamma, lam)``.
    """
    t = text.strip()
    if t == "log":
        return LogEKernel()
    m = _CALL.match(t)
    if m:
        name, args = m.group(1), _split_args(m.group(2))
        if name == "pow" and len(args) == 2:
            return PowerSymbol(parse_symbol(args[0]), float(args[1]))
        if name == "dil" and len(args) == 2:
            return Dilated(parse_symbol(args[0]), _complex(args[1]))
        if name == "h" and len(args) == 3:
            return TestFunctionH(_complex(args[0]), float(args[1]), float(args[2]))
        if name == "ftest" and len(args) == 2:
            return TestFunctionF(float(args[0]), _complex(args[1]))
        raise ValueError(f"cannot parse symbol {text!r}")
    return Polynomial(parse_poly(t))
