import random
from fractions import Fraction as Fr

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from shintani import barnes
from shintani.barnes import (
    BarycentricPoint,
    barnes_zeta_at0,
    barnes_zeta_at0_ladder,
    barnes_zeta_deriv0,
    barnes_zeta_direct,
    bernoulli_poly,
    c_integral,
    multiple_sine,
    shintani_zeta_at0,
    shintani_zeta_deriv0,
    xi_at0,
    xi_value_and_deriv0,
)
from shintani.errors import BoundaryPoint, NotConvergent, OrderOverflow
from shintani.precision import DEFAULT
from shintani.suites import distribution_trials, lerch_oracle, sine_oracle, xi_zero_trials

TOL = mpmath.mpf("1e-10")


@pytest.fixture(autouse=True)
def working_precision():
    with mpmath.workprec(128):
        yield


def close(est, want, tol=TOL):
    with mpmath.workprec(128):
        return abs(est.value - want) <= tol and abs(est.value - want) <= est.error + mpmath.mpf("1e-20")


# -- Bernoulli polynomials -------------------------------------------------------

def test_bernoulli_examples():
    assert bernoulli_poly(0, Fr(3, 7)) == 1
    assert bernoulli_poly(1, Fr(1, 2)) == 0
    assert bernoulli_poly(2, 0) == Fr(1, 6)
    with pytest.raises(OrderOverflow):
        bernoulli_poly(65, 0)


@given(st.integers(0, 20), st.fractions(-3, 3, max_denominator=12))
def test_bernoulli_shift(l, x):
    # B_l(x + 1) - B_l(x) = l x^(l-1)
    want = l * x ** (l - 1) if l else 0
    assert bernoulli_poly(l, x + 1) - bernoulli_poly(l, x) == want


def test_bernoulli_real_argument():
    with mpmath.workprec(128):
        assert abs(bernoulli_poly(3, mpmath.mpf("0.25")) - mpmath.mpf(Fr(3, 64).numerator) / 64) < 1e-30


# -- direct summation --------------------------------------------------------------

def test_direct_examples():
    with mpmath.workprec(128):
        assert close(barnes_zeta_direct(2, 1, (1,)), mpmath.pi ** 2 / 6)
        assert close(barnes_zeta_direct(2, 2, (2,)), mpmath.pi ** 2 / 24)
        assert close(barnes_zeta_direct(3, 1, (1, 1)), mpmath.zeta(2))
    with pytest.raises(NotConvergent):
        barnes_zeta_direct(2, 1, (1, 1))


# -- values at s = 0 ------------------------------------------------------------------

def test_at0_examples():
    assert barnes_zeta_at0((Fr(1, 2),), (1,)) == 0
    for w in (Fr(1), Fr(7, 3), Fr(10)):
        for x in (Fr(1, 5), Fr(1, 2), Fr(1)):
            assert barnes_zeta_at0((x,), (w,)) == Fr(1, 2) - x
    value = barnes_zeta_at0((1, 1), (Fr(1), Fr(1)))
    assert isinstance(value, Fr)
    assert value == barnes_zeta_at0_ladder(Fr(2), (Fr(1), Fr(1)))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.data())
def test_at0_closed_form_matches_ladder(d, data):
    om = tuple(data.draw(st.fractions(Fr(1, 4), 6, max_denominator=8)) for _ in range(d))
    x = tuple(data.draw(st.fractions(0, 2, max_denominator=8)) for _ in range(d))
    if all(c == 0 for c in x):
        return
    z = sum((c * w for c, w in zip(x, om)), Fr(0))
    assert barnes_zeta_at0(x, om) == barnes_zeta_at0_ladder(z, om)


def test_distribution_relation_small():
    res = distribution_trials(seed=5, count=30, deriv_count=4)
    assert res.passed, res.examples


def test_xi_zero_small():
    assert xi_zero_trials(seed=6, count=60).passed


# -- derivatives at s = 0 ---------------------------------------------------------------

def test_deriv0_examples():
    with mpmath.workprec(128):
        assert close(barnes_zeta_deriv0(Fr(1, 2), (1,)), -mpmath.log(2) / 2)
        assert close(barnes_zeta_deriv0(1, (1,)), -mpmath.log(2 * mpmath.pi) / 2)


def test_deriv0_error_meets_target():
    for z, om in ((Fr(1, 3), (Fr(1), Fr(2))), (Fr(5, 2), (Fr(1, 3), Fr(3), Fr(1)))):
        assert barnes_zeta_deriv0(z, om).error <= DEFAULT.target_error


@pytest.mark.parametrize("z,om", [
    (Fr(1, 3), (Fr(1), Fr(1))),
    (Fr(7, 5), (Fr(2), Fr(1, 3))),
    (Fr(1, 10), (Fr(3), Fr(5), Fr(1, 2))),
])
def test_ladder_identity(z, om):
    with mpmath.workprec(128):
        for k in range(len(om)):
            lhs = barnes_zeta_deriv0(z, om) - barnes_zeta_deriv0(z + om[k], om)
            rhs = barnes_zeta_deriv0(z, om[:k] + om[k + 1:])
            assert abs(lhs.value - rhs.value) < 1e-9


def test_lerch_and_sine_oracles():
    assert lerch_oracle().passed
    assert sine_oracle(seed=1, count=15).passed


# -- correction integrals -------------------------------------------------------------

def test_c_integral_examples():
    assert c_integral((1, 1), ((1, 2), (3, 5))).value == 0
    assert c_integral((1,), ((1, 2),)).value == 0
    with mpmath.workprec(128):
        # the two ordered pairs give log 2 and -log 2
        assert abs(c_integral((2, 0), ((1, 2), (1, 1))).value) < 1e-25
        # pairs give log(3)/2 and -log(3/2)/2
        got = c_integral((2, 0), ((1, 3), (1, 2)))
        assert abs(got.value - mpmath.log(2) / 2) < 1e-25
        assert got.error < 1e-20


def test_c_integral_rejects_bad_l():
    with pytest.raises(ValueError):
        c_integral((1, 2), ((1, 2), (3, 5)))


# -- Shintani zeta --------------------------------------------------------------------

def test_shintani_at0_examples(Q5):
    assert shintani_zeta_at0((1,), ((Fr(2), Fr(3)),)) == Fr(-1, 2)
    assert shintani_zeta_at0((1,), (Q5.element([2, 1]),)) == Fr(-1, 2)
    x, om = (Fr(1, 3), Fr(3, 4)), (Fr(2), Fr(5, 3))
    assert shintani_zeta_at0(x, tuple((w,) for w in om)) == barnes_zeta_at0(x, om)


def test_shintani_deriv0_reductions():
    with mpmath.workprec(128):
        x, om = (Fr(1, 3), Fr(3, 4)), (Fr(2), Fr(5, 3))
        a = shintani_zeta_deriv0(x, tuple((w,) for w in om))
        z = x[0] * om[0] + x[1] * om[1]
        b = barnes_zeta_deriv0(z, om)
        assert abs(a.value - b.value) < 1e-25
        p = shintani_zeta_deriv0((Fr(2, 5),), ((Fr(3), Fr(7, 2)),))
        q = barnes_zeta_deriv0(Fr(6, 5), (3,)) + barnes_zeta_deriv0(Fr(7, 5), (Fr(7, 2),))
        assert abs(p.value - q.value) < 1e-25


def test_shintani_field_symmetric_at0(Q5):
    om = (Q5.one, Q5.element([9, 4]))
    v = shintani_zeta_at0((Fr(1, 2), Fr(1, 3)), om)
    assert isinstance(v, Fr)
    w = shintani_zeta_at0((Fr(1, 2), Fr(1, 3)), ((Fr(1), Fr(1)), (9 + 4 * mpmath.sqrt(5), 9 - 4 * mpmath.sqrt(5))))
    assert abs(w - mpmath.mpf(v.numerator) / v.denominator) < 1e-25


# -- xi and multiple sines -------------------------------------------------------------

def test_xi_examples():
    with mpmath.workprec(128):
        xi0, d = xi_value_and_deriv0((Fr(1, 2),), (1,))
        assert xi0 == 0
        assert abs(d.value - mpmath.log(2)) < 1e-25
    with pytest.raises(BoundaryPoint):
        xi_value_and_deriv0((0, 0), (1, 2))
    with pytest.raises(BoundaryPoint):
        xi_at0((1, 1), (1, 2))


@pytest.mark.parametrize("x,om", [
    ((Fr(1, 3),), (Fr(2),)),
    ((Fr(1, 3), Fr(4, 5)), (Fr(2), Fr(1, 7))),
    ((Fr(1, 2), Fr(0), Fr(2, 3)), (Fr(1), Fr(3), Fr(5, 2))),
])
def test_xi_symmetry(x, om):
    # xi(|w| - z) = (-1)^(d+1) xi(z): for d = 1, -zeta(z) - zeta(w - z) is symmetric
    refl = tuple(1 - c for c in x)
    _, a = xi_value_and_deriv0(x, om)
    _, b = xi_value_and_deriv0(refl, om)
    assert abs(b.value - (-1) ** (len(x) + 1) * a.value) < 1e-25


def test_sine_examples():
    with mpmath.workprec(128):
        assert abs(multiple_sine(Fr(1, 2), (1,)).value - 2) < 1e-25
        for lam in (Fr(2), Fr(3, 2), Fr(10)):
            assert abs(multiple_sine(lam / 2, (lam,)).value - 2) < TOL


@settings(max_examples=12, deadline=None)
@given(st.fractions(Fr(1, 10), 5, max_denominator=10), st.fractions(Fr(1, 10), 5, max_denominator=10),
       st.fractions(Fr(1, 20), Fr(19, 20), max_denominator=20), st.fractions(Fr(1, 5), 7, max_denominator=5))
def test_sine_homogeneity(w1, w2, t, lam):
    z = t * w2
    a = multiple_sine(z, (w1, w2))
    b = multiple_sine(lam * z, (lam * w1, lam * w2))
    with mpmath.workprec(128):
        assert abs(a.value - b.value) < 1e-9 * (1 + abs(a.value))


@settings(max_examples=12, deadline=None)
@given(st.fractions(Fr(1, 10), 5, max_denominator=10), st.fractions(Fr(1, 10), 5, max_denominator=10),
       st.fractions(Fr(1, 20), Fr(19, 20), max_denominator=20))
def test_double_sine_shift(w1, w2, t):
    z = t * w2
    with mpmath.workprec(128):
        lhs = multiple_sine(z + w1, (w1, w2)).value * multiple_sine(z, (w2,)).value
        rhs = multiple_sine(z, (w1, w2)).value
        assert abs(lhs - rhs) < 1e-9 * (1 + abs(rhs))


def test_joint_equals_product_of_places():
    rng = random.Random(9)
    for _ in range(8):
        d, m = rng.randint(1, 3), rng.randint(2, 3)
        om = tuple(tuple(Fr(rng.randint(1, 20), rng.randint(1, 6)) for _ in range(m)) for _ in range(d))
        x = tuple(Fr(rng.randint(1, 11), 12) for _ in range(d))
        _, joint = xi_value_and_deriv0(x, om, mode="joint")
        _, per = xi_value_and_deriv0(x, om, mode="embedding")
        assert abs(joint.value - per.value) < 1e-8
        assert multiple_sine(BarycentricPoint(x), om, mode="joint").value > 0


def test_field_tuple_joint_equals_product(Q5):
    om = (Q5.one, Q5.element([9, 4]))
    x = (Fr(1, 2), Fr(1, 3))
    _, joint = xi_value_and_deriv0(x, om, mode="joint")
    per = sum(barnes.xi_deriv0_place(x, om, i).value for i in (1, 2))
    assert abs(joint.value - per) < 1e-20
