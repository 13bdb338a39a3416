import random
from fractions import Fraction

from hypothesis import strategies as st

from paraprod.algebra import Scalar, UPoly, WPoly
from paraprod.expr import Delta, Letter, Power, Product, ScalarMul, Sum

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 5))
scalars = st.builds(Scalar, fractions, st.one_of(st.just(Fraction(0)), fractions))
nonzero_scalars = scalars.filter(bool)


@st.composite
def wpolys(draw, max_deg=2):
    coeffs = draw(st.lists(scalars, min_size=1, max_size=max_deg + 1))
    return WPoly.from_coefficients(coeffs)


@st.composite
def upolys(draw, max_u=3, max_w=2):
    terms = draw(
        st.dictionaries(st.tuples(st.integers(0, max_u), st.integers(0, max_w)), nonzero_scalars, max_size=4)
    )
    return UPoly(terms)


letters = st.builds(Letter, st.sampled_from("MST"), st.integers(1, 3))
deltas = st.builds(Delta, upolys())

asts = st.recursive(
    st.one_of(letters, letters, deltas),
    lambda inner: st.one_of(
        st.builds(lambda ts: Sum(tuple(ts)), st.lists(inner, min_size=2, max_size=3)),
        st.builds(lambda fs: Product(tuple(fs)), st.lists(inner, min_size=2, max_size=3)),
        st.builds(Power, inner, st.integers(1, 3)),
        st.builds(ScalarMul, wpolys().filter(lambda p: not p.is_zero()), inner),
    ),
    max_leaves=6,
)

# Delta-free, w-free expressions built only from the three letters
plain_asts = st.recursive(
    letters,
    lambda inner: st.one_of(
        st.builds(lambda ts: Sum(tuple(ts)), st.lists(inner, min_size=2, max_size=3)),
        st.builds(lambda fs: Product(tuple(fs)), st.lists(inner, min_size=2, max_size=3)),
        st.builds(Power, inner, st.integers(1, 2)),
        st.builds(lambda c, e: ScalarMul(WPoly.constant(c), e), nonzero_scalars, inner),
    ),
    max_leaves=5,
)


@st.composite
def rational_g(draw, max_deg=4):
    """Polynomial symbol with g(0) != 0 and positive degree."""
    coeffs = draw(st.lists(scalars, min_size=2, max_size=max_deg + 1))
    if not coeffs[0]:
        coeffs[0] = Scalar(2)
    if not coeffs[-1]:
        coeffs[-1] = Scalar(1)
    return coeffs


@st.composite
def seeded_rng(draw):
    return random.Random(draw(st.integers(0, 2**32 - 1)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
