"""Norms and seminorms on the unit disc, and truncated operator matrices.

``f`` arguments are duck-typed: anything with vectorized ``eval(z)`` (and
``eval_deriv(z)`` where derivatives are needed) works, so both
:class:`~paraprod.series.TaylorSeries` and the closed-form symbols from
:mod:`paraprod.series` can be passed.  Closed forms are preferable near the
boundary, where truncated series converge slowly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.special import gammaln, roots_jacobi

from .algebra import UPoly, as_scalar
from .expr import Delta, Letter, OperatorExpr, Power, Product, ScalarMul, Sum, parse
from .series import TaylorSeries

__all__ = [
    "QuadConfig",
    "OperatorMatrix",
    "ConvergenceError",
    "moment",
    "moment_float",
    "bergman_norm",
    "bergman_norm_coeffs",
    "hardy_norm",
    "hardy_norm_coeffs",
    "bloch_seminorm",
    "bloch_profile",
    "garsia_bmoa",
    "garsia_profile",
    "sup_norm",
    "default_grid",
    "operator_matrix",
    "operator_norm_trunc",
]


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadConfig:
    """Radial Gauss nodes, uniform angular nodes, and boundary refinement.

    With ``refine = q`` the radial variable is ``t = r^2 = 1 - s^q`` so nodes
    cluster near the circle as q grows; q = 1 is plain Gauss-Jacobi in t.
    """

    radial: int = 64
    angular: int = 256
    refine: float = 1.0

    def __post_init__(self):
        if self.radial < 8 or self.angular < 8:
            raise ValueError("node counts must be >= 8")
        if self.refine < 1:
            raise ValueError("refinement exponent must be >= 1")

    def doubled(self) -> "QuadConfig":
        return QuadConfig(2 * self.radial, 2 * self.angular, self.refine)


def moment(n: int, alpha: int) -> Fraction:
    """||z^n||^2 in A^2_alpha (alpha = -1 is H^2), exactly."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if alpha != int(alpha) or alpha < -1:
        raise ValueError("exact moments need an integer alpha >= -1")
    alpha = int(alpha)
    if alpha == -1:
        return Fraction(1)
    return Fraction(math.factorial(alpha + 1) * math.factorial(n), math.factorial(n + alpha + 1))


def moment_float(n, alpha: float) -> np.ndarray:
    """Vectorized ||z^n||^2 for real alpha > -1 (or alpha = -1)."""
    n = np.asarray(n, dtype=float)
    if alpha == -1:
        return np.ones_like(n)
    return np.exp(gammaln(alpha + 2) + gammaln(n + 1) - gammaln(n + alpha + 2))


def _radial_rule(alpha: float, cfg: QuadConfig):
    """Nodes r and weights for (alpha+1) int_0^1 F(t) (1-t)^alpha dt, t = r^2."""
    q = cfg.refine
    b = q * (alpha + 1) - 1
    x, wts = roots_jacobi(cfg.radial, 0.0, b)
    s = (x + 1) / 2
    t = 1 - s**q
    weights = (alpha + 1) * q * wts / 2 ** (b + 1)
    return np.sqrt(np.clip(t, 0, 1)), weights


def _circle(K: int, offset: float = 0.0) -> np.ndarray:
    return np.exp(2j * np.pi * (np.arange(K) + offset) / K)


def bergman_norm(f, alpha: float, p: float = 2.0, cfg: QuadConfig = QuadConfig()) -> float:
    """||f||_{alpha,p} by product quadrature; alpha = -1 falls back to hardy_norm."""
    if alpha == -1:
        return hardy_norm(f, p, cfg.angular)
    if not alpha > -1:
        raise ValueError("alpha must be > -1")
    r, w = _radial_rule(alpha, cfg)
    z = r[:, None] * _circle(cfg.angular)[None, :]
    vals = np.abs(f.eval(z)) ** p
    return float(np.dot(w, vals.mean(axis=1)) ** (1 / p))


def bergman_norm_coeffs(f: TaylorSeries, alpha: float) -> float:
    """Exact p = 2 norm from coefficients: sqrt(sum |a_n|^2 m_n)."""
    a = f.as_array()
    m = moment_float(np.arange(a.size), alpha)
    return float(np.sqrt(np.sum(np.abs(a) ** 2 * m)))


def hardy_norm(f, p: float = 2.0, K: Optional[int] = None) -> float:
    """((1/K) sum |f(zeta_j)|^p)^(1/p) over the K-th roots of unity."""
    if K is None:
        K = 4 * (f.N + 1) if isinstance(f, TaylorSeries) else 4096
    vals = np.abs(f.eval(_circle(K))) ** p
    return float(vals.mean() ** (1 / p))


def hardy_norm_coeffs(f: TaylorSeries) -> float:
    return float(np.sqrt(np.sum(np.abs(f.as_array()) ** 2)))


def default_grid(jmax: int = 6, angles: int = 64) -> np.ndarray:
    """Points on circles of radius 0 and 1 - 10^-j, j = 1..jmax."""
    radii = np.concatenate([[0.0], 1 - 10.0 ** -np.arange(1, jmax + 1)])
    return (radii[:, None] * _circle(angles)[None, :]).ravel()


def bloch_seminorm(f, grid: Optional[Iterable[complex]] = None) -> float:
    """max over the grid of (1-|z|^2)|f'(z)|; a lower bound of the true sup."""
    z = np.asarray(default_grid() if grid is None else list(grid), dtype=complex)
    return float(np.max((1 - np.abs(z) ** 2) * np.abs(f.eval_deriv(z))))


def bloch_profile(f, radii: Sequence[float], direction: complex = 1.0) -> np.ndarray:
    """(1-r^2)|f'(r*direction)| for each radius."""
    z = np.asarray(radii, dtype=float) * direction
    return (1 - np.abs(z) ** 2) * np.abs(f.eval_deriv(z))


def sup_norm(f, grid: Optional[Iterable[complex]] = None) -> float:
    """max |f| over the grid; a lower bound of ||f||_infinity."""
    z = np.asarray(default_grid() if grid is None else list(grid), dtype=complex)
    return float(np.max(np.abs(f.eval(z))))


def _garsia_at(f, a: complex, K: int) -> float:
    # ||f o phi_a - f(a)||_{H^2}^2 equals the Poisson average of |f - f(a)|^2;
    # sampling at phi_a of uniform nodes is the same integral after the
    # conformal change of variables and keeps the nodes dense near a/|a|.
    eta = _circle(K, offset=0.5)
    zeta = (a - eta) / (1 - np.conj(a) * eta)
    fa = complex(np.asarray(f.eval(np.asarray([a], dtype=complex)))[0])
    return float(np.mean(np.abs(f.eval(zeta) - fa) ** 2))


def garsia_profile(f, a_grid: Iterable[complex], K: int = 1024) -> np.ndarray:
    """sqrt of the Garsia quantity at each a."""
    return np.sqrt(np.array([_garsia_at(f, complex(a), K) for a in a_grid]))


def garsia_bmoa(f, a_grid: Optional[Iterable[complex]] = None, K: int = 1024) -> float:
    """sup over the a-grid of ||f o phi_a - f(a)||_{H^2} (Garsia seminorm)."""
    if a_grid is None:
        a_grid = default_grid(jmax=3, angles=16)
    return float(np.max(garsia_profile(f, a_grid, K)))


# -- operator matrices -----------------------------------------------------------------


@dataclass
class OperatorMatrix:
    """Columns are images of the first N orthonormal basis vectors of A^2_alpha."""

    matrix: np.ndarray
    alpha: int
    bandwidth: int

    @property
    def N(self) -> int:
        return self.matrix.shape[1]


def _bandwidth(e: OperatorExpr, d: int) -> int:
    if isinstance(e, Letter):
        return e.m * d
    if isinstance(e, Delta):
        return max(e.payload.degree(), 0) * d
    if isinstance(e, Sum):
        return max(_bandwidth(t, d) for t in e.terms)
    if isinstance(e, Product):
        return sum(_bandwidth(f, d) for f in e.factors)
    if isinstance(e, Power):
        return e.exponent * _bandwidth(e.base, d)
    if isinstance(e, ScalarMul):
        return _bandwidth(e.expr, d)
    raise TypeError(e)


def _conv_rows(F: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Multiply every column polynomial by c, truncating to the row count."""
    out = np.zeros_like(F)
    R = F.shape[0]
    for i, ci in enumerate(c):
        if ci != 0 and i < R:
            out[i:] += ci * F[: R - i]
    return out


def _deriv_rows(F: np.ndarray) -> np.ndarray:
    out = np.zeros_like(F)
    out[:-1] = F[1:] * np.arange(1, F.shape[0])[:, None]
    return out


def _int_rows(F: np.ndarray) -> np.ndarray:
    out = np.zeros_like(F)
    out[1:] = F[:-1] / np.arange(1, F.shape[0])[:, None]
    return out


def _poly_pow(c: np.ndarray, m: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(m):
        out = np.convolve(out, c)
    return out


def _payload_poly(P: UPoly, g: np.ndarray) -> np.ndarray:
    w = g[0]
    u = g.copy()
    u[0] = 0
    out = np.zeros(1, dtype=complex)
    for (a, b), c in P.items():
        term = complex(c) * w**b * _poly_pow(u, a)
        if term.size > out.size:
            out = np.pad(out, (0, term.size - out.size))
        out[: term.size] += term
    return out


def _act(e, F: np.ndarray, g: np.ndarray, gcache: dict) -> np.ndarray:
    if isinstance(e, Letter):
        if e.m not in gcache:
            gcache[e.m] = _poly_pow(g, e.m)
        gm = gcache[e.m]
        if e.name == "M":
            return _conv_rows(F, gm)
        if e.name == "T":
            return _int_rows(_conv_rows(F, np.polynomial.polynomial.polyder(gm) if gm.size > 1 else np.zeros(1)))
        return _int_rows(_conv_rows(_deriv_rows(F), gm))
    if isinstance(e, Delta):
        pp = _payload_poly(e.payload, g)
        out = np.zeros_like(F)
        k = min(pp.size, F.shape[0])
        out[:k] = np.outer(pp[:k], F[0])
        return out
    if isinstance(e, Sum):
        return sum(_act(t, F, g, gcache) for t in e.terms)
    if isinstance(e, Product):
        for factor in reversed(e.factors):
            F = _act(factor, F, g, gcache)
        return F
    if isinstance(e, Power):
        for _ in range(e.exponent):
            F = _act(e.base, F, g, gcache)
        return F
    if isinstance(e, ScalarMul):
        return complex(e.coef(complex(g[0]))) * _act(e.expr, F, g, gcache)
    raise TypeError(e)


def operator_matrix(e, g: Sequence, alpha: int, N: int) -> OperatorMatrix:
    """Finite section of ``e`` in the orthonormal monomial basis of A^2_alpha.

    ``g`` is a coefficient sequence.  Rows run to N - 1 + bandwidth, so each
    column is the exact image of its basis vector.
    """
    from .rewrite import CanonicalForm

    if isinstance(e, str):
        e = parse(e)
    if isinstance(e, CanonicalForm):
        e = e.to_expr()
        if e is None:
            return OperatorMatrix(np.zeros((N, N), dtype=complex), alpha, 0)
    g = np.array([complex(as_scalar(c)) if not isinstance(c, (complex, float)) else complex(c) for c in g])
    d = max(len(np.trim_zeros(g, "b")) - 1, 0)
    bw = _bandwidth(e, d)
    R = N + bw
    F = np.zeros((R, N), dtype=complex)
    F[np.arange(N), np.arange(N)] = 1.0
    img = _act(e, F, g, {})
    m = np.array([float(moment(n, alpha)) for n in range(R)]) if alpha == int(alpha) else moment_float(np.arange(R), alpha)
    scale = np.sqrt(m)[:, None] / np.sqrt(m[:N])[None, :]
    return OperatorMatrix(img * scale, int(alpha), bw)


def _pow2_normalize(v: np.ndarray) -> np.ndarray:
    # scale by a power of two so structured vectors stay exactly representable
    mx = np.max(np.abs(v))
    if mx == 0:
        return v
    return np.ldexp(v.real, -math.frexp(mx)[1]) + 1j * np.ldexp(v.imag, -math.frexp(mx)[1])


def operator_norm_trunc(Mx: Union[OperatorMatrix, np.ndarray], tol: float = 1e-12, max_iter: int = 20000) -> float:
    """Largest singular value by power iteration on A^H A.

    The estimate ||A v|| / ||v|| is a lower bound at every step.
    """
    A = Mx.matrix if isinstance(Mx, OperatorMatrix) else np.asarray(Mx)
    if A.size == 0 or not np.any(A):
        return 0.0
    v = np.ones(A.shape[1], dtype=complex)
    est = 0.0
    for _ in range(max_iter):
        Av = A @ v
        new = float(np.sqrt(np.vdot(Av, Av).real / np.vdot(v, v).real))
        if new == 0.0:
            # start vector in the kernel; restart from a fixed generic vector
            v = np.random.default_rng(0).normal(size=A.shape[1]) + 0j
            continue
        if abs(new - est) <= tol * new:
            return new
        est = new
        v = _pow2_normalize(A.conj().T @ Av)
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")
