"""Jet arithmetic against independent oracles.

Ring laws are exact over Fraction coefficients; over complex floats the
same identities hold to rounding.  Derivatives are checked against
central finite differences, and the nested-jet mixed coefficient against
an exact bivariate polynomial expansion written out independently here.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biforge.algebra import Jet2, jet_div, jet_pow, leading_value
from biforge.errors import DegenerateJetDivision

fractions_st = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)
jets_st = st.builds(Jet2, fractions_st, fractions_st, fractions_st)
nonzero_jets_st = st.builds(
    Jet2, fractions_st.filter(lambda f: f != 0), fractions_st, fractions_st
)


def test_identity_and_coordinate_products():
    one = Jet2(1, 0, 0)
    x = Jet2(2.5 + 1j, -0.5, 3.0)
    assert (one * x).as_tuple() == x.as_tuple()
    s = Jet2(0, 1, 0)
    assert (s * s).as_tuple() == (0, 0, 1)
    assert (s**3).as_tuple() == (0, 0, 0)


def test_division_long_division_oracle():
    # (2+s)/(1+s) = 2 - s + s^2 + O(s^3), by expanding (2+s)(1 - s + s^2)
    x = Jet2(Fraction(2), Fraction(1), Fraction(0))
    y = Jet2(Fraction(1), Fraction(1), Fraction(0))
    assert jet_div(x, y).as_tuple() == (2, -1, 1)


def test_pow_examples():
    assert jet_pow(Jet2(1, 1, 0), 2).as_tuple() == (1, 2, 1)
    assert jet_pow(Jet2(3.5, -2.0, 1.0), 0).as_tuple() == (1, 0, 0)


def test_division_by_zero_leading_value():
    with pytest.raises(DegenerateJetDivision):
        jet_div(Jet2(1, 0, 0), Jet2(0, 1, 0))
    # nested: the divisor's innermost value part is zero
    nested = Jet2(Jet2(0, 1, 0), Jet2(1, 0, 0), Jet2(0, 0, 0))
    with pytest.raises(DegenerateJetDivision):
        jet_div(Jet2(Jet2(1, 0, 0), 0, 0), nested)


@settings(max_examples=150, deadline=None)
@given(jets_st, jets_st, jets_st)
def test_ring_laws_exact_over_fractions(x, y, z):
    assert ((x + y) + z) == (x + (y + z))
    assert (x * y) == (y * x)
    assert (x * (y + z)) == (x * y + x * z)
    assert ((x * y) * z) == (x * (y * z))


@settings(max_examples=100, deadline=None)
@given(jets_st, nonzero_jets_st)
def test_division_inverts_multiplication_exactly(x, y):
    assert (x / y) * y == x


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=-(2**63), max_value=2**63),
    st.integers(min_value=1, max_value=2**63),
    st.integers(min_value=-(2**63), max_value=2**63),
    st.integers(min_value=1, max_value=2**63),
)
def test_rational_arithmetic_exact(a, b, c, d):
    assert (Fraction(a, b) + Fraction(c, d)) * b * d == a * d + c * b


def _smooth_map(u):
    # rational map built from the supported ring operations; the
    # denominator is bounded away from zero for |u| <= 1.5
    return (u * u * u - 2 * u + 1) / (u * u + 3)


def test_jet_matches_central_differences():
    rng = np.random.default_rng(5)
    h = 1e-4
    for _ in range(10):
        a0, a1, a2 = (rng.normal(3) * 0.4 + 1j * rng.normal(3) * 0.4 for _ in range(3))
        a0, a1, a2 = complex(a0), complex(a1), complex(a2)

        def path(s):
            return _smooth_map(a0 + a1 * s + a2 * s * s)

        jet = _smooth_map(Jet2(a0, a1, a2))
        d1 = (path(h) - path(-h)) / (2 * h)
        d2 = (path(h) - 2 * path(0.0) + path(-h)) / (h * h)
        assert abs(jet.a1 - d1) <= 1e-6 * max(1.0, abs(d1))
        assert abs(2 * jet.a2 - d2) <= 1e-6 * max(1.0, abs(d2))


def _poly4(u):
    return ((u + 2) * u - 1) * u * u + 3 * u + 5


def _eval_series(coeffs, s, t):
    # coeffs[i][j] multiplies s**i t**j
    return sum(coeffs[i][j] * s**i * t**j for i in range(3) for j in range(3))


def test_nested_jets_match_finite_differences():
    # mixed d^2/ds^2 d^2/dt^2 of a degree-4 polynomial composed with a
    # two-parameter quadratic path, against Richardson-extrapolated
    # double central second differences
    rng = np.random.default_rng(11)
    for _ in range(6):
        coeffs = (0.4 * rng.normal(size=(3, 3)) + 0.4j * rng.normal(size=(3, 3)))
        nested = Jet2(
            Jet2(coeffs[0][0], coeffs[0][1], coeffs[0][2]),
            Jet2(coeffs[1][0], coeffs[1][1], coeffs[1][2]),
            Jet2(coeffs[2][0], coeffs[2][1], coeffs[2][2]),
        )
        result = _poly4(nested)
        mixed_from_jet = 4.0 * complex(result.a2.a2)

        def f(s, t):
            return _poly4(_eval_series(coeffs, s, t))

        def double_second(hs, ht):
            total = 0.0
            for ws, i in ((1, 1), (-2, 0), (1, -1)):
                for wt, j in ((1, 1), (-2, 0), (1, -1)):
                    total += ws * wt * f(i * hs, j * ht)
            return total / (hs * hs * ht * ht)

        h = 0.05
        fd = (
            16 * double_second(h / 2, h / 2)
            - 4 * double_second(h / 2, h)
            - 4 * double_second(h, h / 2)
            + double_second(h, h)
        ) / 9
        assert abs(mixed_from_jet - fd) <= 1e-5 * max(1.0, abs(fd))


def test_nested_jets_match_exact_polynomial_expansion():
    # independent exact oracle: multiply bivariate polynomials over
    # Fraction without any truncation, then read the s^2 t^2 coefficient
    def poly_mul(p, q):
        out = {}
        for (i, j), c in p.items():
            for (k, l), d in q.items():
                key = (i + k, j + l)
                out[key] = out.get(key, Fraction(0)) + c * d
        return out

    rng = np.random.default_rng(23)
    for _ in range(5):
        vals = [Fraction(int(v), 7) for v in rng.integers(-20, 20, size=9)]
        series = {
            (i, j): vals[3 * i + j] for i in range(3) for j in range(3)
        }
        nested = Jet2(
            Jet2(series[(0, 0)], series[(0, 1)], series[(0, 2)]),
            Jet2(series[(1, 0)], series[(1, 1)], series[(1, 2)]),
            Jet2(series[(2, 0)], series[(2, 1)], series[(2, 2)]),
        )
        # P(u) = u^3 - 2u^2 + 5
        jet_value = nested**3 - 2 * (nested**2) + 5
        u = dict(series)
        u2 = poly_mul(u, u)
        u3 = poly_mul(u2, u)
        exact = {}
        for key, c in u3.items():
            exact[key] = exact.get(key, Fraction(0)) + c
        for key, c in u2.items():
            exact[key] = exact.get(key, Fraction(0)) - 2 * c
        exact[(0, 0)] = exact.get((0, 0), Fraction(0)) + 5
        assert jet_value.a2.a2 == exact.get((2, 2), Fraction(0))


def test_constant_lift_and_leading_value():
    c = Jet2.constant(4 - 2j)
    assert c.as_tuple() == (4 - 2j, 0, 0)
    nested = Jet2(Jet2(7.0, 1.0, 0.0), Jet2(0.0, 0.0, 0.0), Jet2(0.0, 0.0, 0.0))
    assert leading_value(nested) == 7.0


def test_scalar_mixing():
    x = Jet2(2.0 + 0j, 1.0, 0.5)
    assert (3 * x).as_tuple() == (6, 3, 1.5)
    assert (x + 1).a0 == 3.0
    assert (1 - x).as_tuple() == (-1, -1, -0.5)
    assert (1 / x).a0 == 0.5


def test_mul_jet_by_nested_scalar_zero():
    inner = Jet2(1.0 + 0j, 2.0, 3.0)
    outer = Jet2(inner, 0, 0)
    prod = outer * outer
    assert prod.a0 == inner * inner
    assert leading_value(prod.a1) == 0 and leading_value(prod.a2) == 0
