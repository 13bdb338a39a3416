"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary.  Run standalone with
``python3 tests/test_acceptance.py``.
"""

import json
import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from paraprod import experiments as ex
from paraprod.classify import SpaceClass, two_letter_table
from paraprod.cli import run
from paraprod.norms import QuadConfig, bergman_norm, hardy_norm, hardy_norm_coeffs, moment, operator_matrix, operator_norm_trunc
from paraprod.expr import parse, parse_upoly
from paraprod.rewrite import normalize
from paraprod.series import TaylorSeries, TestFunctionH

GOLDEN = Path(__file__).parent / "golden"
RESULTS = {}


def record(n, title, ok, detail=""):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    RESULTS[n] = line
    print(line)
    return ok


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def words(c):
    return {k: v.constant_term() for k, v in c.st.items()}


# (lhs, expected basis coefficients, expected delta payload)
IDENTITIES = [
    ("M^2", {(2, 0): 1, (1, 1): 2}, "w^2"),
    ("M*T", {(1, 1): 1, (0, 2): 1}, "0"),
    ("S*M", {(1, 1): 1, (2, 0): 1}, "0"),
    ("T*M", {(1, 1): 1}, "0"),
    ("T*S", {(1, 1): 1, (0, 2): -1}, "-w*u"),
    ("M*S", {(1, 1): 1, (0, 2): -1, (2, 0): 1}, "-w*u"),
    ("M", {(1, 0): 1, (0, 1): 1}, "w"),
    ("1/4*T(g^2)^2", {(2, 2): 1, (1, 3): -1}, "0"),
]


def test_identities():
    bad = []
    with Timer() as t:
        for lhs, st, delta in IDENTITIES:
            c = normalize(lhs)
            if words(c) != st or c.delta != parse_upoly(delta):
                bad.append(lhs)
    ok = record(1, "identity suite", not bad and t.elapsed < 5, f"{len(IDENTITIES)} identities, {len(bad)} wrong, {t.elapsed:.2f}s")
    assert ok, bad


def test_oracle_equivalence():
    with Timer() as t:
        rep = ex.verify_oracle(trials=200)
    ok = rep.get("mismatches") == 0 and rep.get("reassociation_mismatches") == 0 and t.elapsed < 60
    record(2, "oracle equivalence", ok, f"{rep.get('evaluations')} evaluations, mismatches {rep.get('mismatches')}/{rep.get('reassociation_mismatches')}, {t.elapsed:.1f}s")
    assert ok


def test_commutators():
    with Timer() as t:
        rep = ex.verify_commutators(k_max=5, j_max=7)
    ok = rep.verdict == "pass" and t.elapsed < 30
    record(3, "commutator closed forms", ok, f"{rep.get('cases')} cases, failures {rep.get('failures')}, {t.elapsed:.2f}s")
    assert ok


def test_determinants():
    # independent spot value: det [[1/2!, 1/3!], [1/1!, 1/2!]]
    hand = Fraction(1, 2) * Fraction(1, 2) - Fraction(1, 6) * 1
    with Timer() as t:
        rep = ex.verify_determinants(6, 6)
    ok = rep.verdict == "pass" and rep.get("D_1_1") == str(hand) == "1/12" and t.elapsed < 5
    record(4, "determinants", ok, f"D_1^(1) = {rep.get('D_1_1')}, {t.elapsed:.2f}s")
    assert ok


def test_nesting():
    with Timer() as t:
        rep = ex.verify_nesting(trials=100)
    ok = rep.verdict == "pass" and rep.get("violations") == 0 and t.elapsed < 30
    record(5, "power nesting inequality", ok, f"{rep.get('checks')} checks, {rep.get('violations')} violations, {t.elapsed:.2f}s")
    assert ok


def test_norm_sanity():
    errs = {}
    with Timer() as t:
        e = 0.0
        for alpha in (0, 1, 2):
            for n in range(31):
                f = TaylorSeries.monomial(n, n)
                e = max(e, abs(bergman_norm(f, alpha, 2) ** 2 - float(moment(n, alpha))))
        errs["moments"] = e
        rng = np.random.default_rng(ex.DEFAULT_SEED)
        e = 0.0
        for _ in range(50):
            c = rng.normal(size=12) + 1j * rng.normal(size=12)
            f = TaylorSeries(c)
            e = max(e, abs(hardy_norm(f, 2) - hardy_norm_coeffs(f)))
        errs["hardy"] = e
        e = 0.0
        for alpha, p, lam in ((0, 2, 0.5), (-1, 2, 0.7), (1, 4, 0.3)):
            h = TestFunctionH(lam, alpha, p)
            val = hardy_norm(h, p, 4096) if alpha == -1 else bergman_norm(h, alpha, p, QuadConfig(128, 512))
            e = max(e, abs(val - 1))
        errs["kernels"] = e
    ok = errs["moments"] <= 1e-9 and errs["hardy"] <= 1e-10 and errs["kernels"] <= 1e-2 and t.elapsed < 30
    record(6, "norm sanity", ok, ", ".join(f"{k} err {v:.1e}" for k, v in errs.items()) + f", {t.elapsed:.2f}s")
    assert ok


def test_operator_norm():
    # weighted shift z^n -> z^(n+1)/(n+1); in the orthonormal basis the weights are 1/sqrt((n+1)(n+2))
    shift = max(1 / math.sqrt((n + 1) * (n + 2)) for n in range(200))
    with Timer() as t:
        val = operator_norm_trunc(operator_matrix(parse("T"), [0, 1], 0, 200))
        exact_M = all(operator_norm_trunc(operator_matrix(parse("M"), [c], 0, 64)) == abs(c) for c in (3, -2, 2.5, 0.75))
    ok = abs(val - 1 / math.sqrt(2)) <= 1e-3 and abs(shift - 1 / math.sqrt(2)) < 1e-15 and exact_M and t.elapsed < 30
    record(7, "operator norm spot values", ok, f"||T_z|| = {val:.8f}, ||M_c|| exact: {exact_M}, {t.elapsed:.2f}s")
    assert ok


# expected verdicts for the nine two-letter words, keyed "X*Y" = X after Y
TABLE = {
    "T*T": ("bloch", 1), "S*T": ("bloch", 2), "M*T": ("bloch", 2),
    "T*S": ("bloch", 2), "S*S": ("hinfty", None), "M*S": ("hinfty", None),
    "T*M": ("bloch", 2), "S*M": ("hinfty", None), "M*M": ("hinfty", None),
}


def test_two_letter_table(capsys):
    bad = []
    for kind in ("bergman", "hardy"):
        sp = SpaceClass.hardy() if kind == "hardy" else SpaceClass.bergman()
        table = two_letter_table(sp)
        for word, (cls, power) in TABLE.items():
            want = {"bloch": "iff_g_power_in_bmoa" if kind == "hardy" else "iff_g_power_in_bloch", "hinfty": "iff_g_in_hinfty"}[cls]
            if (table[word].verdict, table[word].power) != (want, power):
                bad.append((kind, word))
        capsys.readouterr()
        run(["table", "--space", kind])
        out = capsys.readouterr().out
        if out != (GOLDEN / f"table_{kind}.json").read_text() or len(json.loads(out)["rows"]) != 9:
            bad.append((kind, "golden"))
    ok = record(8, "two-letter table", not bad, f"18 entries, mismatches {bad}")
    assert ok


def test_counterexample_growth():
    r_list = [1 - 10.0**-j for j in range(1, 7)]
    with Timer() as t:
        rep = ex.counterexample_growth(k=2, alpha=0, p=2, r_list=r_list)
    q = rep.get("Q")
    inc = all(a < b for a, b in zip(q, q[1:]))
    ratio = q[-1] / q[0]
    stable = rep.get("max_relative_change_on_doubling") < 0.01
    ok = inc and ratio > 100 and stable and t.elapsed < 60
    record(9, "counterexample growth", ok, f"increasing {inc}, Q(last)/Q(first) = {ratio:.2f} (need > 100), doubling change {rep.get('max_relative_change_on_doubling'):.1e}, {t.elapsed:.2f}s")
    assert ok


def test_factorization():
    with Timer() as t:
        fc = ex.factorization_check(beta=0.6, eps=0.1, N=256, f_list=[TaylorSeries.constant(1.0, 256), TaylorSeries.monomial(1, 256)])
    beta, eps = Fraction(3, 5), Fraction(1, 10)
    pre = (2 * beta - 1) * beta / (1 - eps)
    ok = max(fc["max_diffs"]) <= 1e-8 and pre == Fraction(2, 15) and abs(fc["prefactor"] - 2 / 15) < 1e-15 and t.elapsed < 60
    record(10, "factorization identity", ok, f"max diff {max(fc['max_diffs']):.1e}, prefactor {pre}, {t.elapsed:.2f}s")
    assert ok


def test_counterexample_dichotomy():
    lam = [1 - 10.0**-j for j in range(0, 6)]
    with Timer() as t:
        rep = ex.counterexample_bounded(beta=0.6, eps=0.1, alpha=0, p=2, lam_list=lam, N=4096)
    bloch = rep.get("bloch_values")
    norms = rep.get("test_norms")
    grows = all(a < b for a, b in zip(bloch, bloch[1:]))
    # band: no value exceeds ten times the lambda = 0 baseline
    band = max(norms) <= 10 * norms[0]
    ok = grows and band and t.elapsed < 120
    record(
        11,
        "counterexample dichotomy",
        ok,
        f"bloch increasing {grows}, max/baseline {max(norms) / norms[0]:.2f}, max/min {max(norms) / min(norms):.1f}, {t.elapsed:.2f}s",
    )
    assert ok


def test_trivial_characterization():
    with Timer() as t:
        rep = ex.verify_trivial(trials=100)
    ok = rep.verdict == "pass" and rep.get("disagreements") == 0
    record(12, "trivial characterization", ok, f"{rep.get('trivial_count')} trivial of 100, {rep.get('disagreements')} disagreements, {t.elapsed:.2f}s")
    assert ok


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
