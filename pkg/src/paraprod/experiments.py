"""Reproducible verification suites.

Each suite returns a :class:`Report`.  The exact suites (oracle,
commutators, determinants, nesting, trivial) never touch floating point.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np
from scipy.special import hyp2f1, roots_legendre

from .algebra import Scalar, UPoly, WPoly
from .expr import Delta, Letter, OperatorExpr, Power, Product, ScalarMul, Sum, letter_count, parse
from .norms import (
    bergman_norm_coeffs,
    bloch_profile,
    bloch_seminorm,
    garsia_profile,
    operator_matrix,
    operator_norm_trunc,
)
from .rewrite import (
    CanonicalForm,
    commutator_closed_form,
    evaluate_exact,
    is_trivial,
    iterated_commutator,
    normalize,
    random_expr,
    random_rewrite,
)
from .series import (
    LogEKernel,
    Polynomial,
    PowerSymbol,
    SymbolSpec,
    TaylorSeries,
    TestFunctionF,
    TestFunctionH,
    apply_letter,
)

__all__ = [
    "Report",
    "parallel_map",
    "verify_oracle",
    "verify_commutators",
    "verify_determinants",
    "verify_nesting",
    "verify_trivial",
    "dilation_monotonicity",
    "power_inequality_scan",
    "counterexample_growth",
    "counterexample_bounded",
    "factorization_check",
    "pointwise_bound_check",
    "vmoa_probe",
    "pochhammer",
    "fraction_det",
    "D_matrix",
    "Delta_matrix",
    "test_norm_fk",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 20240611


@dataclass
class Report:
    name: str
    parameters: dict
    observations: List[dict] = field(default_factory=list)
    verdict: str = "informational"

    def observe(self, label: str, value):
        self.observations.append({"label": label, "value": _jsonable(value)})

    def get(self, label: str):
        for o in self.observations:
            if o["label"] == label:
                return o["value"]
        raise KeyError(label)

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "observations": self.observations,
            "verdict": self.verdict,
        }


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (Fraction, Scalar)):
        return str(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v if v is None or isinstance(v, str) else str(v)


def parallel_map(fn: Callable, items: Iterable) -> list:
    """map, spread over PARAPROD_THREADS worker threads (default 1)."""
    items = list(items)
    try:
        threads = int(os.environ.get("PARAPROD_THREADS", "1"))
    except ValueError:
        threads = 1
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _random_rational_poly(rng: random.Random, deg_min: int, deg_max: int, nonzero_const=True, complex_ok=False):
    deg = rng.randint(deg_min, deg_max)
    out = []
    for n in range(deg + 1):
        re = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if complex_ok and rng.random() < 0.3 else 0
        out.append(Scalar(re, im))
    if nonzero_const and not out[0]:
        out[0] = Scalar(rng.choice([-2, -1, 1, 2, 3]))
    if deg and not out[-1]:
        out[-1] = Scalar(1)
    return out


def _monomial(l: int) -> list:
    return [0] * l + [1]


# -- exact suites ------------------------------------------------------------------


def verify_oracle(trials: int = 200, seed: int = DEFAULT_SEED, max_letters: int = 6, max_depth: int = 4, lmax: int = 12) -> Report:
    """Normalization agrees with direct evaluation, and with reassociated variants."""
    rep = Report("oracle", {"trials": trials, "seed": seed, "max_letters": max_letters, "max_depth": max_depth, "lmax": lmax})
    rng = random.Random(seed)
    cases = []
    for _ in range(trials):
        e = random_expr(rng, max_letters, max_depth, w_scalars=True)
        g = _random_rational_poly(rng, 1, 4, complex_ok=True)
        cases.append((e, g, random_rewrite(e, rng)))

    def run(case):
        e, g, e2 = case
        c = normalize(e)
        bad = sum(
            evaluate_exact(e, _monomial(l), g) != evaluate_exact(c, _monomial(l), g) for l in range(lmax + 1)
        )
        return bad, normalize(e2) != c, c.size()

    results = parallel_map(run, cases)
    mismatches = sum(r[0] for r in results)
    reassoc = sum(bool(r[1]) for r in results)
    rep.observe("evaluations", trials * (lmax + 1))
    rep.observe("mismatches", mismatches)
    rep.observe("reassociation_mismatches", reassoc)
    rep.observe("max_canonical_terms", max(r[2] for r in results) if results else 0)
    rep.verdict = "pass" if mismatches == 0 and reassoc == 0 else "fail"
    return rep


def _S_power(k: int) -> OperatorExpr:
    return Letter("S") if k == 1 else Power(Letter("S"), k)


def verify_commutators(k_max: int = 5, j_max: int = 7) -> Report:
    """j-fold commutators of S^k with T against their closed forms."""
    if k_max > 5 or j_max > 7:
        raise ValueError("k_max <= 5 and j_max <= 7 (blowup guard)")
    rep = Report("commutators", {"k_max": k_max, "j_max": j_max})
    failures = []
    T = Letter("T")
    for k in range(1, k_max + 1):
        A = _S_power(k)
        for j in range(1, j_max + 1):
            lhs = normalize(iterated_commutator(A, T, j))
            if lhs != commutator_closed_form(k, j):
                failures.append([k, j])
        # single commutator: T T(g^k) + w^k u d0
        single = normalize(Product((T, Letter("T", k)))) + CanonicalForm(delta=UPoly({(1, k): 1}))
        if normalize(iterated_commutator(A, T, 1)) != single:
            failures.append([k, "single"])
    rep.observe("cases", k_max * j_max + k_max)
    rep.observe("failures", failures)
    rep.verdict = "pass" if not failures else "fail"
    return rep


def pochhammer(k, l: int):
    """Rising factorial k (k+1) ... (k+l-1)."""
    out = 1
    for i in range(l):
        out *= k + i
    return out


def fraction_det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


def D_matrix(m: int, n: int):
    return [[Fraction(1, math.factorial(n + m - j + k)) for k in range(m + 1)] for j in range(m + 1)]


def Delta_matrix(m: int, n: int):
    return [[pochhammer(n + m + 1 - j + k, j) for k in range(m + 1)] for j in range(m + 1)]


def verify_determinants(m_max: int = 6, n_max: int = 6) -> Report:
    if m_max > 6 or n_max > 6:
        raise ValueError("m_max, n_max <= 6")
    rep = Report("determinants", {"m_max": m_max, "n_max": n_max})
    zero_D, bad_rec, bad_base = [], [], []
    values = {}
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            D = fraction_det(D_matrix(m, n))
            Dl = fraction_det(Delta_matrix(m, n))
            values[f"{m},{n}"] = {"D": str(D), "Delta": str(Dl)}
            if D == 0:
                zero_D.append([m, n])
            if m == 1 and Dl != 1:
                bad_base.append([m, n])
            if m > 1 and Dl != math.factorial(m) * fraction_det(Delta_matrix(m - 1, n + 1)):
                bad_rec.append([m, n])
    rep.observe("D_1_1", str(fraction_det(D_matrix(1, 1))))
    rep.observe("zero_D", zero_D)
    rep.observe("recursion_failures", bad_rec)
    rep.observe("base_failures", bad_base)
    rep.observe("values", values)
    rep.verdict = "pass" if not (zero_D or bad_rec or bad_base) else "fail"
    return rep


NESTING_PAIRS = ((1, 2), (2, 3), (1, 3))


def _oscillation(f: List[Scalar], m: int, weight) -> Fraction:
    """sum_{k>=1} |c_k|^2 weight(k) for f^m - f^m(0)."""
    p = [Scalar(1)]
    for _ in range(m):
        q = [Scalar(0)] * (len(p) + len(f) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(f):
                q[i + j] = q[i + j] + x * y
        p = q
    return sum((p[k].abs2() * weight(k) for k in range(1, len(p))), Fraction(0))


SPACES = {
    "H2": lambda k: 1,
    "A2_0": lambda k: Fraction(1, k + 1),
}


def nesting_holds(f: Sequence, m: int, n: int, space: str) -> bool:
    """(A_m)^n <= (A_n)^m, the squared radical-free form of the power inequality."""
    f = [Scalar(c) if not isinstance(c, Scalar) else c for c in f]
    w = SPACES[space]
    return _oscillation(f, m, w) ** n <= _oscillation(f, n, w) ** m


def verify_nesting(trials: int = 100, deg_max: int = 5, seed: int = DEFAULT_SEED) -> Report:
    rep = Report("nesting", {"trials": trials, "deg_max": deg_max, "seed": seed, "pairs": NESTING_PAIRS})
    rng = random.Random(seed)
    polys = [_random_rational_poly(rng, 0, deg_max, nonzero_const=False, complex_ok=True) for _ in range(trials)]

    def run(f):
        return [
            (space, m, n)
            for space in SPACES
            for m, n in NESTING_PAIRS
            if not nesting_holds(f, m, n, space)
        ]

    violations = [v for vs in parallel_map(run, polys) for v in vs]
    rep.observe("checks", trials * len(SPACES) * len(NESTING_PAIRS))
    rep.observe("violations", len(violations))
    rep.verdict = "pass" if not violations else "fail"
    return rep


def _trivial_candidate(rng: random.Random) -> OperatorExpr:
    e = random_expr(rng, 4, 3)
    kind = rng.randrange(5)
    minus = WPoly.constant(-1)
    payload = UPoly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(1, 3)})
    if kind == 0:
        return Sum((e, ScalarMul(minus, random_rewrite(e, rng))))
    if kind == 1:
        return Product((e, Delta(payload)))
    if kind == 2:
        return Product((Delta(payload), e))
    if kind == 3:
        return parse("M - S - T")
    k = rng.randint(1, 2)
    return iterated_commutator(_S_power(k), Letter("T"), k + rng.randint(1, 2))


def verify_trivial(trials: int = 100, seed: int = DEFAULT_SEED) -> Report:
    """is_trivial agrees with vanishing on z^l, l = 1..letters+1."""
    rep = Report("trivial", {"trials": trials, "seed": seed})
    rng = random.Random(seed)
    cases = []
    for i in range(trials):
        e = _trivial_candidate(rng) if i % 2 == 0 else random_expr(rng, 5, 3)
        g = _random_rational_poly(rng, 2, 4)
        cases.append((e, g))

    def run(case):
        e, g = case
        symbolic = is_trivial(normalize(e))
        vanishes = all(not evaluate_exact(e, _monomial(l), g) for l in range(1, letter_count(e) + 2))
        return symbolic, vanishes

    results = parallel_map(run, cases)
    disagreements = sum(s != v for s, v in results)
    rep.observe("trivial_count", sum(s for s, _ in results))
    rep.observe("disagreements", disagreements)
    rep.verdict = "pass" if disagreements == 0 else "fail"
    return rep


# -- numeric suites -----------------------------------------------------------------


def dilation_monotonicity(e="T", g: Sequence = (0, 1), alpha: int = 0, r_list: Sequence[float] = (0.3, 0.6, 0.9), N: int = 150, tol: float = 1e-3) -> Report:
    """Finite-section norms of L with dilated symbols g(rz) against r = 1."""
    rep = Report("dilation", {"expr": str(e), "g": [str(c) for c in g], "alpha": alpha, "r_list": list(r_list), "N": N, "tol": tol})
    g = [complex(c) for c in g]
    full = operator_norm_trunc(operator_matrix(e, g, alpha, N))
    norms = []
    for r in r_list:
        gr = [c * r**n for n, c in enumerate(g)]
        norms.append(operator_norm_trunc(operator_matrix(e, gr, alpha, N)))
    chain = norms + [full]
    below = all(x <= full * (1 + tol) for x in norms)
    monotone = all(b >= a * (1 - tol) for a, b in zip(chain, chain[1:]))
    rep.observe("norms", norms)
    rep.observe("norm_at_1", full)
    rep.observe("below_full", below)
    rep.observe("nondecreasing", monotone)
    rep.verdict = "informational" if below and monotone else "fail"
    return rep


def power_inequality_scan(g: Sequence = (0, 1), n: int = 2, N: int = 64, samples: int = 50, seed: int = DEFAULT_SEED, alpha: float = 0) -> Report:
    """max over f of ||T f||^n / (||T^n f|| ||f||^(n-1)) in A^2_alpha."""
    rep = Report("power_inequality", {"g": [str(c) for c in g], "n": n, "N": N, "samples": samples, "seed": seed, "alpha": alpha})
    rng = np.random.default_rng(seed)
    gs = Polynomial([complex(c) for c in g])
    deg_g = max(len(g) - 1, 0)
    size = N + n * deg_g

    def ratio(fc: np.ndarray) -> float:
        f = TaylorSeries(fc, N=size, exact=False)
        gser = gs.series(size)
        tf = apply_letter("T", f, gser)
        tnf = f
        for _ in range(n):
            tnf = apply_letter("T", tnf, gser)
        num = bergman_norm_coeffs(tf, alpha) ** n
        den = bergman_norm_coeffs(tnf, alpha) * bergman_norm_coeffs(f, alpha) ** (n - 1)
        return num / den if den > 0 else math.inf

    def draw(k):
        out = [np.array([1.0 + 0j])]
        for _ in range(k - 1):
            d = int(rng.integers(0, min(N, 12)))
            out.append(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))
        return out

    base = draw(samples)
    extra = draw(samples + 1)[1:]
    r1 = max(ratio(f) for f in base)
    r2 = max(r1, max(ratio(f) for f in extra))
    rep.observe("max_ratio", r1)
    rep.observe("max_ratio_doubled_samples", r2)
    rep.observe("ratio_f_equals_1", ratio(np.array([1.0 + 0j])))
    finite = math.isfinite(r1) and math.isfinite(r2)
    rep.observe("finite", finite)
    rep.verdict = "informational" if finite else "fail"
    return rep


# Counterexample growth: test functions (1 - r z)^(-k).


def _panels(r: float) -> np.ndarray:
    """Breakpoints in t = |z|^2 clustering geometrically toward 1."""
    width = max(1 - r * r, 1e-300)
    pts = [0.0]
    gap = 0.5
    while gap > width * 1e-3:
        pts.append(1 - gap)
        gap /= 4
    pts.append(1.0)
    return np.array(pts)


def test_norm_fk(r: float, k: float, alpha: float, p: float, nodes: int = 32) -> float:
    """||(1 - r z)^(-k)||_{alpha,p}; the angular mean is 2F1(s, s; 1; r^2 t), s = kp/2."""
    s = k * p / 2
    if alpha == -1:
        return float(hyp2f1(s, s, 1, r * r)) ** (1 / p)
    x, w = roots_legendre(nodes)
    total = 0.0
    bps = _panels(r)
    for a, b in zip(bps[:-1], bps[1:]):
        t = (b - a) / 2 * x + (a + b) / 2
        vals = (alpha + 1) * (1 - t) ** alpha * hyp2f1(s, s, 1, r * r * t)
        total += (b - a) / 2 * np.dot(w, vals)
    return float(total) ** (1 / p)


test_norm_fk.__test__ = False


def growth_lower_bound(r: float, k: float) -> float:
    """|(S_g T_g^2 f_{r,k})'(r)| is at least this, for g the log kernel."""
    return 1 / (k * (1 - r)) * math.log(math.e / (1 - r)) * (1 / (1 - r * r) ** k - 1)


def counterexample_growth(k: float = 2, alpha: float = 0, p: float = 2, r_list: Optional[Sequence[float]] = None, nodes: int = 32) -> Report:
    """Normalized lower bound Q(r); boundedness would keep it bounded."""
    if not k * p > alpha + 2:
        raise ValueError("need k*p > alpha + 2 for finite test-function norms")
    if r_list is None:
        r_list = [1 - 10.0**-j for j in range(1, 7)]
    rep = Report("counterexample_growth", {"k": k, "alpha": alpha, "p": p, "r_list": list(r_list), "nodes": nodes})

    def Q(r, nodes):
        nf = test_norm_fk(r, k, alpha, p, nodes)
        return growth_lower_bound(r, k) * (1 - r) ** (1 + (alpha + 2) / p) / nf

    q = np.array([Q(r, nodes) for r in r_list])
    q2 = np.array([Q(r, 2 * nodes) for r in r_list])
    rel = np.abs(q2 - q) / np.abs(q)
    increasing = bool(np.all(np.diff(q) > 0))
    ratio = float(q[-1] / q[0])
    rep.observe("Q", q)
    rep.observe("Q_doubled_nodes", q2)
    rep.observe("max_relative_change_on_doubling", float(rel.max()))
    rep.observe("strictly_increasing", increasing)
    rep.observe("dynamic_range", ratio)
    rep.verdict = "pass" if increasing and ratio > 100 and rel.max() < 0.01 else "fail"
    return rep


def _sym(spec: SymbolSpec, N: int, cache: dict, beta: float) -> TaylorSeries:
    if beta not in cache:
        base = spec.series(N)
        cache[beta] = base if beta == 1 else base.pow_real(beta)
    return cache[beta]


def factorization_check(beta: float = 0.6, eps: float = 0.1, N: int = 256, f_list=None) -> dict:
    """Both sides of the S T^2 factorization with the log kernel applied to f."""
    g = LogEKernel()
    cache: dict = {}

    def G(b):
        return _sym(g, N, cache, b)

    def T(h, f):
        return apply_letter("T", f, h)

    def S(h, f):
        return apply_letter("S", f, h)

    def M(h, f):
        return apply_letter("M", f, h)

    pre1 = (2 * beta - 1) * beta / (1 - eps)
    pre2 = beta**2 / (1 - eps)
    if f_list is None:
        f_list = [TaylorSeries.constant(1, N), TaylorSeries.monomial(1, N)]
    out = []
    for f in f_list:
        lhs = S(G(beta), T(G(beta), T(G(beta), f)))
        rhs = T(G(1), T(G(1 - eps), M(G(2 * beta - 2 + eps), T(G(beta), f)))).scale(pre1) + T(
            G(1), T(G(1 - eps), M(G(3 * beta - 2 + eps), f))
        ).scale(pre2)
        out.append(lhs.max_abs_diff(rhs))
    return {"prefactor": pre1, "prefactor2": pre2, "max_diffs": out}


def _st2_norm(h: TaylorSeries, gb: TaylorSeries, alpha: float) -> float:
    img = apply_letter("S", apply_letter("T", apply_letter("T", h, gb), gb), gb)
    return bergman_norm_coeffs(img, alpha)


def counterexample_bounded(beta: float = 0.6, eps: float = 0.1, alpha: float = 0, p: float = 2, lam_list: Optional[Sequence[float]] = None, N: int = 4096, radii: Optional[Sequence[float]] = None, fact_N: int = 256, band: float = 10.0) -> Report:
    """Bounded/compact side: factorization, Bloch growth of g^(2 beta), test-function band."""
    if not 0.5 < beta < 2 / 3:
        raise ValueError("need 1/2 < beta < 2/3")
    if not 0 < eps < min(2 - 3 * beta, 1):
        raise ValueError("need 0 < eps < min(2 - 3 beta, 1)")
    if p != 2:
        raise ValueError("only the p = 2 path is implemented")
    if lam_list is None:
        lam_list = [0.0] + [1 - 10.0**-j for j in range(1, 6)]
    if radii is None:
        radii = [1 - 10.0**-j for j in range(1, 7)]
    rep = Report(
        "counterexample_bounded",
        {"beta": beta, "eps": eps, "alpha": alpha, "p": p, "lam_list": list(lam_list), "N": N, "radii": list(radii), "factorization_N": fact_N, "band": band},
    )
    fc = factorization_check(beta, eps, fact_N)
    fact_ok = max(fc["max_diffs"]) <= 1e-8
    rep.observe("prefactor", fc["prefactor"])
    rep.observe("factorization_max_diff", max(fc["max_diffs"]))
    rep.observe("factorization_ok", fact_ok)

    bloch = bloch_profile(PowerSymbol(LogEKernel(), 2 * beta), radii)
    bloch_up = bool(np.all(np.diff(bloch) > 0))
    rep.observe("bloch_values", bloch)
    rep.observe("bloch_strictly_increasing", bloch_up)

    gb = LogEKernel().series(N).pow_real(beta)
    vals = np.array([_st2_norm(TestFunctionH(lam, alpha, p).series(N), gb, alpha) for lam in lam_list])
    first = vals[0]
    in_band = bool(np.all(vals <= band * first))
    down = bool(vals[-1] < vals[-2]) if len(vals) > 1 else True
    rep.observe("test_norms", vals)
    rep.observe("truncation_tail_lambda_pow_N", [abs(l) ** N for l in lam_list])
    rep.observe("within_band", in_band)
    rep.observe("terminal_decrease", down)
    rep.verdict = "pass" if fact_ok and bloch_up and in_band and down else "fail"
    return rep


def pointwise_bound_check(g: SymbolSpec = None, gamma: float = 8, lam_list: Sequence[complex] = (0.9,), k_max: int = 3, t_grid: Optional[Sequence[float]] = None, N: int = 2048, bloch_estimate: Optional[float] = None, seed: int = DEFAULT_SEED) -> Report:
    """|T^k f_{gamma,lam}(t lam)| against ||g||_B^k / (|lam|^k gamma^k (1 - t|lam|^2)^gamma)."""
    g = LogEKernel() if g is None else g
    if t_grid is None:
        t_grid = np.linspace(0, 1, 20)
    if bloch_estimate is None:
        bloch_estimate = 2.0 if isinstance(g, LogEKernel) else bloch_seminorm(g)
    rep = Report("pointwise_bound", {"g": repr(g), "gamma": gamma, "lam_list": list(lam_list), "k_max": k_max, "t_grid": list(t_grid), "N": N, "bloch_estimate": bloch_estimate})
    gs = g.series(N)
    t = np.asarray(t_grid, dtype=float)
    worst = 0.0
    violations = 0
    rng = np.random.default_rng(seed)
    combo_ok = True
    for lam in lam_list:
        lam = complex(lam)
        f = TestFunctionF(gamma, lam).series(N)
        iterates = [f]
        for k in range(1, k_max + 1):
            iterates.append(apply_letter("T", iterates[-1], gs))
            lhs = np.abs(iterates[-1].eval(t * lam))
            rhs = bloch_estimate**k / (abs(lam) ** k * gamma**k * (1 - t * abs(lam) ** 2) ** gamma)
            violations += int(np.sum(lhs > rhs * (1 + 1e-9)))
            worst = max(worst, float(np.max(lhs / rhs)))
        if gamma * abs(lam) > bloch_estimate:
            a = rng.normal(size=k_max + 1) + 1j * rng.normal(size=k_max + 1)
            val = abs(sum(a[k] * iterates[k].eval(lam) for k in range(k_max + 1)))
            bound = abs(a[0]) * abs(lam) / (1 - abs(lam) ** 2) ** gamma + np.sum(np.abs(a[1:])) * bloch_estimate / (
                abs(lam) * gamma * (1 - abs(lam) ** 2) ** gamma
            )
            combo_ok = combo_ok and bool(val <= bound * (1 + 1e-9))
    rep.observe("violations", violations)
    rep.observe("max_lhs_over_bound", worst)
    rep.observe("combination_bound_holds", combo_ok)
    rep.verdict = "pass" if violations == 0 and combo_ok else "fail"
    return rep


def vmoa_probe(beta: float = 0.6, a_list: Optional[Sequence[float]] = None, K: int = 4096) -> Report:
    """Garsia quantity of (log kernel)^beta along a -> 1 (informational)."""
    if a_list is None:
        a_list = [0.0] + [1 - 10.0**-j for j in range(1, 5)]
    spec = LogEKernel() if beta == 1 else PowerSymbol(LogEKernel(), beta)
    rep = Report("vmoa_probe", {"beta": beta, "a_list": list(a_list), "K": K})
    vals = garsia_profile(spec, a_list, K)
    vals2 = garsia_profile(spec, a_list, 2 * K)
    rep.observe("garsia", vals)
    rep.observe("garsia_doubled_nodes", vals2)
    rep.observe("decreasing_tail", bool(vals[-1] < vals[1]) if len(vals) > 2 else None)
    rep.verdict = "informational"
    return rep
