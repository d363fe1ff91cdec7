import itertools
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from shintani import _linalg as la
from shintani.cones import (
    ParallelotopeVariant as PV,
    RationalLattice,
    SyntheticSpace,
    chi,
    classify_face,
    cocycle_residual,
    cone_make,
    conjugate_point,
    faces,
    lcl_contains,
    omega_partition,
    parallelotope_points,
    prism_pi,
    prism_residual,
    quadratic_standard_fan,
    sign_cone,
    sign_incidence,
    star_sign_sum,
    subdivide,
    ucl_contains,
    upper_reciprocity_residual,
)
from shintani.errors import (
    DependentGenerators,
    EqualHeights,
    RayNotInterior,
    ZeroCoefficient,
)
from shintani.suites import cover_trials


def v(*xs):
    return tuple(Fr(x) for x in xs)


S2 = SyntheticSpace(2)
Z2 = RationalLattice.standard(2)


def cone(*gens, h=None):
    return cone_make([v(*g) for g in gens], h=h, space=SyntheticSpace(len(gens[0])))


SIGMA = cone((1, 1), (1, 3), h=2)


# -- construction and faces ---------------------------------------------------

def test_cone_make_examples():
    assert cone((1, 0), (0, 1)).d == 2
    with pytest.raises(DependentGenerators):
        cone((1, 2), (2, 4))
    assert SIGMA.gens == (v(1, 3), v(1, 1))
    with pytest.raises(EqualHeights):
        cone((1, 1), (2, 1), h=2)


@pytest.mark.parametrize("d,count", [(1, 1), (2, 3), (3, 7)])
def test_face_counts(d, count):
    gens = [tuple(Fr(int(i == j)) for i in range(3)) for j in range(d)]
    assert len(faces(cone_make(gens, space=SyntheticSpace(3)))) == count


# -- upper and lower faces ---------------------------------------------------------

def test_omega_partition_examples():
    plus, minus = omega_partition(SIGMA, 2)
    assert plus == (v(1, 3),) and minus == (v(1, 1),)
    with pytest.raises(ZeroCoefficient):
        omega_partition(cone((1, 0), (0, 1)), 2)
    plus, minus = omega_partition(cone((2, 1), (1, 2)), 1)
    assert plus == (v(2, 1),) and minus == (v(1, 2),)


def test_classify_face_examples():
    assert classify_face(SIGMA, cone((1, 3)), 2) == "upper"
    assert classify_face(SIGMA, cone((1, 1)), 2) == "lower"
    assert classify_face(SIGMA, SIGMA, 2) == "both"


def test_closure_membership_examples():
    assert ucl_contains(SIGMA, v(2, 4), 2)
    assert ucl_contains(SIGMA, v(1, 3), 2)
    assert not ucl_contains(SIGMA, v(1, 1), 2)
    assert lcl_contains(SIGMA, v(1, 1), 2)
    assert not ucl_contains(SIGMA, v(-1, 0), 2)


def _random_full_cone(rng, n, h):
    while True:
        gens = [tuple(Fr(rng.randint(1, 6)) if i == h - 1 else Fr(rng.randint(-6, 6)) for i in range(n))
                for _ in range(n)]
        try:
            sigma = cone_make(gens, h=h, space=SyntheticSpace(n))
            omega_partition(sigma, h)
            return sigma
        except (DependentGenerators, EqualHeights, ZeroCoefficient):
            continue


@pytest.mark.parametrize("n", [2, 3, 4])
def test_upper_face_count(n):
    rng = random.Random(n)
    for _ in range(60):
        h = rng.randint(1, n)
        sigma = _random_full_cone(rng, n, h)
        plus, _ = omega_partition(sigma, h)
        kinds = {tau: classify_face(sigma, tau, h) for tau in faces(sigma)}
        proper = [k for t, k in kinds.items() if t.d < n]
        assert "both" not in proper
        if n == 2:
            assert set(proper) <= {"upper", "lower"}
        assert sum(k in ("upper", "both") for k in kinds.values()) == 2 ** (n - len(plus))


# -- parallelotopes --------------------------------------------------------------

def _coords(points):
    return [p.coords for p in points]


def test_parallelotope_examples():
    half = v(Fr(1, 2), Fr(1, 2))
    assert [p.point for p in parallelotope_points(cone((1, 0), (0, 1)), Z2, half)] == [half]
    got = {p.point for p in parallelotope_points(cone((2, 0), (0, 1)), Z2, half)}
    assert got == {half, v(Fr(3, 2), Fr(1, 2))}
    unit = cone((1, 0), (0, 1))
    assert [p.point for p in parallelotope_points(unit, Z2, v(0, 0), PV.P)] == [v(1, 1)]
    assert parallelotope_points(unit, Z2, v(0, 0), PV.OPEN) == []
    up = parallelotope_points(unit, Z2, v(0, 0), PV.UPPER, plus=(v(0, 1),))
    assert [p.point for p in up] == [v(0, 1)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4),
       st.tuples(st.fractions(0, 1, max_denominator=6), st.fractions(0, 1, max_denominator=6)))
def test_parallelotope_count_is_index(m, shift):
    g1, g2 = (m[0], m[1]), (m[2], m[3])
    det = m[0] * m[3] - m[1] * m[2]
    if det == 0:
        return
    sigma = cone_make([v(*g1), v(*g2)], space=S2)
    pts = parallelotope_points(sigma, Z2, shift)
    assert len(pts) == abs(det)
    assert all(0 < c <= 1 for p in pts for c in p.coords)


def test_parallelotope_lower_dimensional():
    ray = cone_make([v(2, 2)], space=S2)
    assert _coords(parallelotope_points(ray, Z2, v(1, 1))) == [(Fr(1, 2),), (Fr(1),)]
    assert parallelotope_points(ray, Z2, v(Fr(1, 2), 0)) == []


def test_conjugate_point_examples():
    assert conjugate_point(v(Fr(1, 2), Fr(1, 2))) == v(Fr(1, 2), Fr(1, 2))
    assert conjugate_point(v(1, 1)) == v(1, 1)
    assert conjugate_point(v(Fr(1, 4), Fr(3, 4))) == v(Fr(3, 4), Fr(1, 4))


def test_conjugate_point_bijection():
    rng = random.Random(7)
    for _ in range(40):
        while True:
            gens = [v(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(2)]
            if la.det(gens) != 0:
                break
        sigma = cone_make(gens, space=S2)
        z = v(Fr(rng.randint(0, 5), 6), Fr(rng.randint(0, 5), 6))
        plus = {p.coords for p in parallelotope_points(sigma, Z2, z)}
        minus = {p.coords for p in parallelotope_points(sigma, Z2, tuple(-c for c in z))}
        assert {conjugate_point(c) for c in plus} == minus
        assert all(conjugate_point(conjugate_point(c)) == c for c in plus)


# -- signs ------------------------------------------------------------------

def test_sign_examples():
    sigma = cone((1, 0), (0, 1))
    assert sign_cone(sigma) == 1
    assert sign_cone(cone((0, 1), (1, 0))) == -1
    ray = cone((0, 1))
    assert sign_incidence(sigma, ray) == 1
    other = cone((0, 1), (-1, 1))
    assert sign_incidence(other, ray) == -sign_incidence(sigma, ray)


@pytest.mark.parametrize("n", [2, 3])
def test_sign_incidence_antisymmetry(n):
    rng = random.Random(11 * n)
    sp = SyntheticSpace(n)
    done = 0
    while done < 100:
        tau = [tuple(Fr(rng.randint(-5, 5)) for _ in range(n)) for _ in range(n - 1)]
        a = tuple(Fr(rng.randint(-5, 5)) for _ in range(n))
        b = tuple(Fr(rng.randint(-5, 5)) for _ in range(n))
        da, db = la.det(tau + [a]), la.det(tau + [b])
        if da == 0 or db == 0 or (da > 0) == (db > 0):
            continue
        la_, lb = rng.randint(0, n - 1), rng.randint(0, n - 1)
        sigma = cone_make(tau[:la_] + [a] + tau[la_:], space=sp)
        sigma2 = cone_make(tau[:lb] + [b] + tau[lb:], space=sp)
        t = cone_make(tau, space=sp)
        assert sign_incidence(sigma, t) == -sign_incidence(sigma2, t)
        done += 1


# -- chi, prisms and cocycles ------------------------------------------------------

def test_chi_examples():
    om = (v(1, 1), v(0, 1))
    assert chi(om, v(1, 2), 2) == 1
    assert chi(om[::-1], v(1, 2), 2) == -1
    assert chi(om, v(-1, 1), 2) == 0
    assert chi((v(1, 1), v(2, 2)), v(3, 3), 2) == 0


def test_prism_pi_examples():
    assert prism_pi((v(1, 1),), (v(-1, 1),), v(0, 2), 2) == -1
    assert prism_pi((v(1, 1),), (v(-1, 1),), v(3, 1), 2) == 0
    assert prism_pi((v(1, 1),), (v(1, 1),), v(0, 2), 2) == 0


def test_cocycle_example():
    assert cocycle_residual((v(1, 1), v(2, 1), v(1, 2)), v(3, 2), 2) == 0


def test_prism_residual_examples():
    om, et = (v(1, 1), v(1, 3)), (v(2, 1), v(1, 2))
    assert prism_residual(om, et, v(2, 3), 2) == 0
    assert prism_residual(om, om, v(2, 3), 2) == 0
    shared = (v(1, 3), v(2, 1))
    for closure in ("upper", "lower"):
        assert prism_residual(om, shared, v(2, 6), 2, closure) == 0


def test_upper_reciprocity_examples():
    assert upper_reciprocity_residual(SIGMA, cone((1, 1)), 2) == 0
    assert upper_reciprocity_residual(SIGMA, cone((1, 3)), 2) == 0
    assert upper_reciprocity_residual(SIGMA, SIGMA, 2) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_upper_reciprocity_random(n):
    rng = random.Random(100 + n)
    for _ in range(80):
        h = rng.randint(1, n)
        sigma = _random_full_cone(rng, n, h)
        for tau in faces(sigma):
            assert upper_reciprocity_residual(sigma, tau, h) == 0


# -- subdivision and stars ---------------------------------------------------------

def test_subdivide_example():
    parts = subdivide(cone((1, 0), (0, 1)), v(1, 1))
    want = {cone((1, 1)).key(), cone((1, 0), (1, 1)).key(), cone((1, 1), (0, 1)).key()}
    assert {p.key() for p in parts} == want
    with pytest.raises(RayNotInterior):
        subdivide(cone((1, 0)), v(1, 0))
    with pytest.raises(RayNotInterior):
        subdivide(cone((1, 0), (0, 1)), v(1, -1))


def _orthant3():
    return cone((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_subdivide_partition_3d():
    sigma = _orthant3()
    parts = subdivide(sigma, v(1, 2, 3))
    assert sorted(p.d for p in parts) == [1, 2, 2, 2, 3, 3, 3]
    rng = random.Random(3)
    for _ in range(1000):
        coeffs = [Fr(rng.randint(1, 6)) for _ in range(3)]
        if rng.random() < 0.3:
            # aim at the internal walls of the fragment
            t = Fr(rng.randint(1, 4))
            coeffs = [t * c for c in (1, 2, 3)]
            coeffs[rng.randrange(3)] += Fr(rng.randint(0, 3))
        x = tuple(coeffs)
        assert sum(p.contains(x) for p in parts) == 1


def test_subdivision_ucl_additivity():
    rng = random.Random(4)
    h = 3
    sigma = cone_make([v(1, 0, 1), v(0, 1, 2), v(-2, -3, 3)], h=h, space=SyntheticSpace(3))
    ray = sum_vec(sigma.gens)
    parts = [p for p in subdivide(sigma, ray) if p.d == 3]
    parts = [cone_make(p.gens, h=h, space=p.space) for p in parts]
    lower_dim = [p for p in subdivide(sigma, ray) if p.d < 3]
    checked = 0
    for _ in range(1500):
        a = [Fr(rng.randint(0, 4)) for _ in range(3)]
        x = tuple(sum(c * g[i] for c, g in zip(a, sigma.gens)) for i in range(3))
        if all(c == 0 for c in x) or any(p.contains(x) for p in lower_dim):
            continue
        assert sum(ucl_contains(p, x, h) for p in parts) == int(ucl_contains(sigma, x, h))
        checked += 1
    assert checked > 500


def sum_vec(gens):
    return tuple(sum(g[i] for g in gens) for i in range(len(gens[0])))


def test_star_sign_sum_examples(Q5):
    eps = Q5.element([9, 4])
    fan = quadratic_standard_fan(Q5, eps)
    rho = fan.cones[1]
    star = fan.star(rho)
    assert sorted(c.d for c in star) == [1, 2, 2]
    assert star_sign_sum(star, rho) == 1
    sigma = _orthant3()
    assert star_sign_sum([sigma], sigma) == -1
    axis = cone((1, 1, 1))
    assert star_sign_sum(subdivide(sigma, v(1, 1, 1)), axis) == -1


# -- the standard quadratic fan ----------------------------------------------------

def test_quadratic_standard_fan(Q5):
    eps = Q5.element([9, 4])
    fan = quadratic_standard_fan(Q5, eps)
    assert [c.gens for c in fan.cones] == [(Q5.one, eps), (Q5.one,)]
    assert fan.units == (eps,)


def test_fan_cover_and_ucl_partition(sqrt5_f2, sqrt2_f3):
    for _, fan in (sqrt5_f2, sqrt2_f3):
        cov, ucl = cover_trials(fan, seed=20240607, count=1000)
        assert cov.passed and ucl.passed, (cov.examples, ucl.examples)
