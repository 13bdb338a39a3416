import json
import math
from fractions import Fraction

import numpy as np
import pytest

from paraprod import experiments as ex
from paraprod.algebra import Scalar
from paraprod.expr import parse, parse_upoly
from paraprod.rewrite import commutator_closed_form, evaluate_exact, normalize


def test_oracle_small_run():
    rep = ex.verify_oracle(trials=25)
    assert rep.verdict == "pass"
    assert rep.get("mismatches") == 0
    assert rep.get("reassociation_mismatches") == 0


def test_oracle_hand_case():
    for f in ([1], [0, 1], [0, 0, 1]):
        a = evaluate_exact("T*S", f, [1, 1])
        assert a == evaluate_exact(normalize("T*S"), f, [1, 1])
    # S z = z + z^2/2, then T integrates against g' = 1
    assert evaluate_exact("T*S", [0, 1], [1, 1]) == [Scalar(0), Scalar(0), Scalar(Fraction(1, 2)), Scalar(Fraction(1, 6))]


def test_oracle_with_delta_atoms():
    e = parse("d0{w*u^2}*T + S*d0{u} - T*d0")
    for l in range(5):
        f = [0] * l + [1]
        assert evaluate_exact(e, f, [2, -1, 3]) == evaluate_exact(normalize(e), f, [2, -1, 3])


def test_reports_are_deterministic():
    a = ex.verify_trivial(trials=15)
    b = ex.verify_trivial(trials=15)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())


def test_commutator_examples():
    c = commutator_closed_form(2, 2)
    assert {k: v.constant_term() for k, v in c.st.items()} == {(0, 4): 2}
    assert c.delta == parse_upoly("-1/2*w^2*u^2")
    c = commutator_closed_form(2, 3)
    assert not c.st and c.delta == parse_upoly("1/6*w^2*u^3")
    c = commutator_closed_form(1, 1)
    assert {k: v.constant_term() for k, v in c.st.items()} == {(0, 2): 1}
    assert c.delta == parse_upoly("w*u")
    assert ex.verify_commutators(3, 4).verdict == "pass"


def test_determinants():
    # 2x2 by hand: [[1/2, 1/6], [1, 1/2]]
    assert Fraction(1, 2) * Fraction(1, 2) - Fraction(1, 6) == Fraction(1, 12)
    assert ex.fraction_det(ex.D_matrix(1, 1)) == Fraction(1, 12)
    for n in range(1, 7):
        assert ex.fraction_det(ex.Delta_matrix(2, n)) == 2
        assert ex.fraction_det(ex.Delta_matrix(3, n)) == 12
    assert ex.pochhammer(3, 4) == 3 * 4 * 5 * 6
    assert ex.pochhammer(5, 0) == 1
    rep = ex.verify_determinants(4, 4)
    assert rep.verdict == "pass" and rep.get("D_1_1") == "1/12"


def test_nesting_examples():
    assert ex.nesting_holds([1, 1], 1, 2, "H2")
    assert ex.nesting_holds([7], 1, 3, "A2_0")
    rep = ex.verify_nesting(trials=20)
    assert rep.verdict == "pass" and rep.get("violations") == 0


def test_dilation():
    rep = ex.dilation_monotonicity("T", [0, 1], 0, (0.3, 0.6, 0.9, 1.0), 100)
    norms = rep.get("norms")
    full = rep.get("norm_at_1")
    assert norms[-1] == pytest.approx(full)
    assert np.allclose(norms, np.array([0.3, 0.6, 0.9, 1.0]) * full, rtol=1e-10)
    rep = ex.dilation_monotonicity("S*T", [1, 1], 0, (0.3, 0.6, 0.9), 150)
    assert rep.get("nondecreasing") and rep.get("below_full")
    assert rep.verdict != "fail"


def test_power_inequality():
    rep = ex.power_inequality_scan([0, 1], 1, 32, 10)
    assert rep.get("max_ratio") == pytest.approx(1)
    rep = ex.power_inequality_scan([0, 1], 2, 32, 10)
    # f = 1: ||T 1||^2 / ||T^2 1|| = (1/2) / (1/(2 sqrt 3)) on A^2_0
    assert rep.get("ratio_f_equals_1") == pytest.approx(math.sqrt(3))
    rep = ex.power_inequality_scan([0, 1], 3, 48, 50)
    assert rep.get("finite") and rep.verdict == "informational"


def test_counterexample_growth_shape():
    rep = ex.counterexample_growth(r_list=[0.1, 0.5, 0.9])
    q = rep.get("Q")
    assert q[0] > 0 and q[0] < q[1] < q[2]
    assert rep.get("max_relative_change_on_doubling") < 1e-2
    with pytest.raises(ValueError):
        ex.counterexample_growth(k=0.5, alpha=0, p=2)


def test_factorization():
    fc = ex.factorization_check(0.6, 0.1, 128)
    assert fc["prefactor"] == pytest.approx(2 / 15)
    assert max(fc["max_diffs"]) < 1e-8
    with pytest.raises(ValueError):
        ex.counterexample_bounded(beta=0.8)


def test_pointwise_bound():
    rep = ex.pointwise_bound_check(gamma=8, lam_list=(0.9,), k_max=3, N=1024)
    assert rep.verdict == "pass" and rep.get("violations") == 0


def test_vmoa_probe():
    rep = ex.vmoa_probe(0.6, [0, 0.9, 0.99, 0.999], K=2048)
    vals = rep.get("garsia")
    assert vals[0] > 0 and vals[-1] < vals[1]
    rep = ex.vmoa_probe(1.0, [0, 0.9, 0.99, 0.999], K=2048)
    assert rep.get("garsia")[-1] > 1


def test_thread_pool(monkeypatch):
    monkeypatch.setenv("PARAPROD_THREADS", "3")
    assert ex.parallel_map(lambda x: x * x, range(6)) == [0, 1, 4, 9, 16, 25]
