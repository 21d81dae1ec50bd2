from hypothesis import settings, strategies as st

from lgorbifold.poly import MultiPoly
from lgorbifold.scalars import CycScalar, euler_phi

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ORDERS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw, order=None):
    n = order if order is not None else draw(st.sampled_from(ORDERS))
    coeffs = draw(st.lists(rationals, min_size=euler_phi(n), max_size=euler_phi(n)))
    return CycScalar(coeffs, n)


@st.composite
def x_polys(draw, nvars=2, order=3, max_terms=4, max_exp=3):
    """Random polynomial in block x with small integer coefficients."""
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(nvars))
        terms[e] = draw(st.integers(-3, 3))
    return MultiPoly.from_x_dict(terms, nvars, order)


_ALGEBRAS = {}

REGRESSION = ["fermat3", "fermat3x3", "chain33", "chain34", "chain43", "loop22", "surface2"]


def algebra(name):
    """Session-cached TwistedAlgebra for a preset model."""
    if name not in _ALGEBRAS:
        from lgorbifold.models import PRESETS
        from lgorbifold.orbifold import TwistedAlgebra
        m = PRESETS[name]()
        A = TwistedAlgebra(m.W, m.group)
        A.sigma_table()
        _ALGEBRAS[name] = A
    return _ALGEBRAS[name]


ACCEPTANCE = {}


def record(n, ok, note=""):
    """Store one acceptance line; printed in the terminal summary."""
    ACCEPTANCE[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f" ({note})" if note else "")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
