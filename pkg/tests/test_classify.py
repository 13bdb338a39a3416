from hypothesis import given, settings
from hypothesis import strategies as st

from paraprod.algebra import WPoly
from paraprod.classify import (
    BLOCH,
    BMOA,
    BMOA_OPEN,
    FACTS,
    HINFTY,
    TRIVIAL,
    UNCOVERED,
    ZERO,
    Classification,
    SpaceClass,
    classify,
    classify_expr,
    detect_poly_in_Tgm,
    two_letter_table,
)
from paraprod.expr import ScalarMul, format_expr
from paraprod.rewrite import group, normalize
from paraprod.algebra import Scalar

from conftest import nonzero_scalars, plain_asts

BERGMAN = SpaceClass.bergman(0.0, 2.0)
HARDY = SpaceClass.hardy(2.0)


def verdict(text, sp):
    return classify(group(normalize(text)), sp)


def test_examples():
    assert verdict("S", BERGMAN).verdict == HINFTY
    cl = verdict("T*S", BERGMAN)
    assert (cl.verdict, cl.power) == (BLOCH, 2)
    for sp in (BERGMAN, HARDY, SpaceClass.bergman(3.5, 1.0)):
        assert verdict("S*T^2", sp).verdict == UNCOVERED
        assert "log-kernel-counterexample" in verdict("S*T^2", sp).provenance
    cl = verdict("T^2", HARDY)
    assert (cl.verdict, cl.power) == (BMOA, 1)


def test_zero_and_trivial():
    assert verdict("M - S - T - d0{w}", BERGMAN).verdict == ZERO
    cl = verdict("M - S - T", BERGMAN)
    assert (cl.verdict, cl.power) == (TRIVIAL, 0)
    cl = verdict("T*d0{w} - d0{w*u}", BERGMAN)
    assert cl.verdict == ZERO
    cl = verdict("T*S - S*T + T^2", HARDY)
    assert (cl.verdict, cl.power) == (TRIVIAL, 1)


def test_open_hardy_case_is_never_claimed():
    # top polynomial 1 + z: non-constant, nonzero at the origin
    e = "S*T + S*T^2"
    assert verdict(e, BERGMAN).verdict == BLOCH
    cl = verdict(e, HARDY)
    assert cl.verdict == BMOA_OPEN and cl.power == 2
    assert "open-hardy-question" in cl.provenance
    assert "necessity" in cl.bounded_iff


def test_provenance_is_resolvable():
    for e in ("S", "T*S", "S*T^2", "T^2", "d0{w*u}", "0*S + d0{w}", "S*T + S*T^2"):
        for sp in (BERGMAN, HARDY):
            cl = classify_expr(e, sp)
            assert cl.provenance
            data = cl.to_json()
            assert all(p["quote"] == FACTS[p["theorem"]] for p in data["provenance"])


def test_verdict_needs_provenance():
    import pytest

    with pytest.raises(ValueError):
        Classification(ZERO, BERGMAN, None, ())


def test_detect_poly_in_Tgm():
    hit = detect_poly_in_Tgm("T(g^2)^2 - 3*T(g^2)")
    assert hit.m == 2 and hit.Q == (Scalar(0), Scalar(-3), Scalar(1))
    assert detect_poly_in_Tgm("(S*T)^2") is None
    hit = detect_poly_in_Tgm("T^3")
    assert hit.m == 1 and hit.Q == (Scalar(0),) * 3 + (Scalar(1),)
    assert detect_poly_in_Tgm("T + T(g^2)") is None
    assert detect_poly_in_Tgm("S") is None


@st.composite
def polys_in_T(draw):
    m = draw(st.integers(1, 3))
    coeffs = draw(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
    if not coeffs[-1]:
        coeffs[-1] = 1
    atom = "T" if m == 1 else f"T(g^{m})"
    text = " + ".join(f"({c})*{atom}^{k + 1}" for k, c in enumerate(coeffs) if c)
    return m, coeffs, text


@given(polys_in_T())
def test_detect_recovers_construction(case):
    m, coeffs, text = case
    hit = detect_poly_in_Tgm(text)
    assert hit.m == m
    assert hit.Q == (Scalar(0),) + tuple(Scalar(c) for c in coeffs)


def test_lemma_overrides_uncovered_only():
    # T(g^2)^2 = 4 S T S T reduces to a top polynomial vanishing at 0
    assert verdict("T(g^2)^2", BERGMAN).verdict == UNCOVERED
    cl = classify_expr("T(g^2)^2", BERGMAN)
    assert (cl.verdict, cl.power) == (BLOCH, 2)
    cl = classify_expr("T(g^2)^2", HARDY)
    assert (cl.verdict, cl.power) == (BMOA, 2)
    assert classify_expr("S*T^2", BERGMAN).verdict == UNCOVERED


def test_two_letter_entries():
    table = two_letter_table(BERGMAN)
    assert (table["T*M"].verdict, table["T*M"].power) == (BLOCH, 2)
    assert table["S*M"].verdict == HINFTY
    assert table["M*M"].verdict == HINFTY
    hardy = two_letter_table(HARDY)
    for word, cl in table.items():
        h = hardy[word]
        assert h.power == cl.power
        assert h.verdict == (BMOA if cl.verdict == BLOCH else cl.verdict)


coef5 = st.tuples(*[st.integers(-2, 2)] * 5)


@settings(max_examples=200)
@given(coef5, st.sampled_from([BERGMAN, HARDY]))
def test_five_coefficient_family(a, sp):
    a1, a2, a3, a4, a5 = a
    text = f"({a1})*T + ({a2})*T^2 + ({a3})*S*T + ({a4})*S + ({a5})*S^2 + d0{{w*u^2}}"
    cl = classify_expr(text, sp)
    t_kind = BMOA if sp.is_hardy else BLOCH
    if a4 or a5:
        assert cl.verdict == HINFTY
    elif a3:
        assert (cl.verdict, cl.power) == (t_kind, 2)
    elif a1 or a2:
        assert (cl.verdict, cl.power) == (t_kind, 1)
    else:
        assert (cl.verdict, cl.power) == (TRIVIAL, 2)


@settings(max_examples=80, deadline=None)
@given(plain_asts, nonzero_scalars, st.sampled_from([BERGMAN, HARDY]))
def test_scaling_invariance(e, c, sp):
    a = classify_expr(e, sp)
    b = classify_expr(ScalarMul(WPoly.constant(c), e), sp)
    assert (a.verdict, a.power) == (b.verdict, b.power)


@settings(max_examples=80, deadline=None)
@given(plain_asts)
def test_hardy_never_upgrades_open_case(e):
    b = classify_expr(e, BERGMAN)
    h = classify_expr(e, HARDY)
    assert h.power == b.power
    if h.verdict == BMOA_OPEN:
        assert b.verdict == BLOCH
    assert format_expr(e)
