"""Exact scalars and the polynomial rings used for delta-payloads.

Three value types live here:

``Scalar``
    A Gaussian rational ``re + im*i`` with arbitrary-precision components.
``WPoly``
    A polynomial in the formal symbol ``w`` (standing for ``g(0)``).
``UPoly``
    A polynomial in ``u`` (standing for ``g - g(0)``) whose coefficients are
    ``WPoly``.  Stored sparsely as ``{(u_power, w_power): Scalar}``.

All values are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

__all__ = [
    "Scalar",
    "WPoly",
    "UPoly",
    "as_scalar",
    "upoly_T_transform",
    "upoly_S_transform",
    "upoly_M_transform",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


class Scalar:
    """Exact complex rational number."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("Scalar(Scalar, im) is ambiguous")
            re, im = re.re, re.im
        elif isinstance(re, complex):
            re, im = Fraction(re.real), Fraction(re.imag) + _frac(im)
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # construction helpers
    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "Scalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        object.__setattr__(obj, "_hash", None)
        return obj

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exactly."""
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.re) if self.im == 0 else hash((self.re, self.im))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __neg__(self) -> "Scalar":
        return Scalar._make(-self.re, -self.im)

    def __pos__(self) -> "Scalar":
        return self

    def __add__(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return Scalar._make(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return Scalar._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return Scalar._make(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return Scalar._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other) -> "Scalar":
        return (-self) + other

    def __mul__(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.im == 0:
                return Scalar._make(self.re * other.re, self.im * other.re)
            if self.im == 0:
                return Scalar._make(self.re * other.re, self.re * other.im)
            return Scalar._make(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Rational)):
            return Scalar._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("Scalar division by zero")
            return Scalar._make(self.re / other, self.im / other)
        if isinstance(other, Scalar):
            d = other.abs2()
            if d == 0:
                raise ZeroDivisionError("Scalar division by zero")
            num = self * other.conjugate()
            return Scalar._make(num.re / d, num.im / d)
        return NotImplemented

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar(other) / self

    def __pow__(self, n: int) -> "Scalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return Scalar(1) / (self ** (-n))
        result, base = Scalar._make(Fraction(1), Fraction(0)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_negative(self) -> bool:
        """True when the leading nonzero part is negative (used for printing)."""
        return self.re < 0 or (self.re == 0 and self.im < 0)

    def __str__(self) -> str:
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = f"{im}*i"
        if re == 0:
            return ims
        sign = "-" if im < 0 else "+"
        ims = ims.lstrip("-")
        return f"{re}{sign}{ims}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


ZERO = Scalar(0)
ONE = Scalar(1)

ScalarLike = Union[Scalar, int, Fraction]


def as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


def _is_exact(x) -> bool:
    return isinstance(x, (Scalar, int, Rational))


class _SparsePoly:
    """Shared machinery for sparse multivariate polynomials over Scalar."""

    __slots__ = ("_terms", "_hash")
    nvars = 0

    def __init__(self, terms: Mapping[Tuple[int, ...], ScalarLike] | None = None):
        clean: Dict[Tuple[int, ...], Scalar] = {}
        if terms:
            for key, c in terms.items():
                key = tuple(key)
                if len(key) != self.nvars or any(e < 0 for e in key):
                    raise ValueError(f"bad exponent key {key!r}")
                c = as_scalar(c)
                if c:
                    clean[key] = clean[key] + c if key in clean else c
                    if not clean[key]:
                        del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: Dict[Tuple[int, ...], Scalar]):
        obj = object.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: ScalarLike):
        return cls({(0,) * cls.nvars: c})

    @property
    def terms(self) -> Dict[Tuple[int, ...], Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Tuple[int, ...], Scalar]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, type(self)):
            return self._terms == other._terms
        if isinstance(other, (Scalar, int, Fraction)):
            return self == type(self).constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, (Scalar, int, Fraction)):
            return type(self).constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return self._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return self._from_clean({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: ScalarLike):
        c = as_scalar(c)
        if not c:
            return self._from_clean({})
        return self._from_clean({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: Dict[Tuple[int, ...], Scalar] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                v = c1 * c2
                if k in out:
                    s = out[k] + v
                    if s:
                        out[k] = s
                    else:
                        del out[k]
                else:
                    out[k] = v
        return self._from_clean(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = type(self).constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


class WPoly(_SparsePoly):
    """Polynomial in ``w``; ``WPoly({(2,): 3})`` is ``3*w^2``."""

    nvars = 1

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[ScalarLike]) -> "WPoly":
        return cls({(k,): c for k, c in enumerate(coeffs)})

    @classmethod
    def w(cls) -> "WPoly":
        return cls({(1,): 1})

    @property
    def coefficients(self) -> Tuple[Scalar, ...]:
        """Dense coefficient tuple, index = power of w, trailing zeros trimmed."""
        if not self._terms:
            return ()
        d = self.degree()
        return tuple(self._terms.get((k,), ZERO) for k in range(d + 1))

    def coeff(self, k: int) -> Scalar:
        return self._terms.get((k,), ZERO)

    def degree(self) -> int:
        """Degree in w; -1 for the zero polynomial."""
        return max((k[0] for k in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(k == (0,) for k in self._terms)

    def constant_term(self) -> Scalar:
        return self.coeff(0)

    def __call__(self, w):
        exact = _is_exact(w)
        acc = 0
        for (k,), c in self._terms.items():
            acc = acc + (c if exact else complex(c)) * w**k
        return acc

    def __repr__(self) -> str:
        from .expr import format_wpoly

        return f"WPoly({format_wpoly(self)})"


class UPoly(_SparsePoly):
    """Polynomial in ``u`` with ``WPoly`` coefficients.

    Keys are ``(u_power, w_power)``.
    """

    nvars = 2

    @classmethod
    def u(cls) -> "UPoly":
        return cls({(1, 0): 1})

    @classmethod
    def w(cls) -> "UPoly":
        return cls({(0, 1): 1})

    @classmethod
    def from_wpoly(cls, p: WPoly, upower: int = 0) -> "UPoly":
        return cls._from_clean({(upower, k[0]): c for k, c in p.items()})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[WPoly | ScalarLike]) -> "UPoly":
        out = cls()
        for i, c in enumerate(coeffs):
            if not isinstance(c, WPoly):
                c = WPoly.constant(c)
            out = out + cls.from_wpoly(c, i)
        return out

    def _coerce(self, other):
        if isinstance(other, WPoly):
            return UPoly.from_wpoly(other)
        return super()._coerce(other)

    def coeff(self, i: int) -> WPoly:
        """Coefficient of ``u^i`` as a WPoly."""
        return WPoly._from_clean({(k,): c for (a, k), c in self._terms.items() if a == i})

    @property
    def coefficients(self) -> Tuple[WPoly, ...]:
        d = self.degree()
        return tuple(self.coeff(i) for i in range(d + 1))

    def degree(self) -> int:
        """Degree in u; -1 for zero."""
        return max((k[0] for k in self._terms), default=-1)

    def at_u_zero(self) -> WPoly:
        return self.coeff(0)

    def divide_by_w(self) -> "UPoly | None":
        """Exact quotient by ``w`` or None when some term is w-free."""
        if any(k[1] == 0 for k in self._terms):
            return None
        return UPoly._from_clean({(a, b - 1): c for (a, b), c in self._terms.items()})

    def is_w_free(self) -> bool:
        return all(k[1] == 0 for k in self._terms)

    def __call__(self, u, w):
        exact = _is_exact(u) and _is_exact(w)
        acc = 0
        for (a, b), c in self._terms.items():
            acc = acc + (c if exact else complex(c)) * (u**a) * (w**b)
        return acc

    def __repr__(self) -> str:
        from .expr import format_upoly

        return f"UPoly({format_upoly(self)})"


# -- delta-payload transforms -------------------------------------------------
# A trivial operator P(g-g(0)) delta_0 composed on the left with a letter is
# again trivial; these give the new payload.


def upoly_T_transform(p: UPoly) -> UPoly:
    """Antiderivative in u vanishing at u = 0."""
    return UPoly._from_clean({(a + 1, b): c / (a + 1) for (a, b), c in p.items()})


def upoly_S_transform(p: UPoly) -> UPoly:
    """``w*(P(u) - P(0)) + int_0^u t P'(t) dt``."""
    out: Dict[Tuple[int, int], Scalar] = {}
    for (a, b), c in p.items():
        if a == 0:
            continue
        for key, v in (((a, b + 1), c), ((a + 1, b), c * Fraction(a, a + 1))):
            if key in out:
                s = out[key] + v
                if s:
                    out[key] = s
                else:
                    del out[key]
            else:
                out[key] = v
    return UPoly._from_clean(out)


_U_PLUS_W = UPoly({(1, 0): 1, (0, 1): 1})


def upoly_M_transform(p: UPoly) -> UPoly:
    """Multiplication by ``g = u + w``."""
    return _U_PLUS_W * p
