"""Rational simplicial cones, fans and lattice points in parallelotopes.

Points live in one of two spaces:

* ``SyntheticSpace(n)``: plain rational vectors, the i-th coordinate playing
  the role of the i-th real place;
* ``FieldSpace(F)``: elements of a totally real field, viewed in R^n through
  their real embeddings.

All membership and sign questions are answered exactly.  Coordinates of a
point relative to cone generators are found by solving a rational linear
system in the Q-coordinates of the space, which is legitimate because the
embedding map is Q-linear and injective.
"""
from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from . import _linalg as la
from .errors import (
    DependentGenerators,
    EqualHeights,
    GeneratorNotInLattice,
    NonGenericPoint,
    NotAFace,
    NotInHalfspace,
    RayNotInterior,
    ZeroCoefficient,
)
from .field import FieldElement, FractionalIdeal, NumberField, fractional_part


# -- spaces --------------------------------------------------------------------

class SyntheticSpace:
    """Q^n with coordinate i standing in for the i-th real place."""

    def __init__(self, n: int):
        self.n = n

    def __eq__(self, other):
        return isinstance(other, SyntheticSpace) and other.n == self.n

    def __hash__(self):
        return hash(("synthetic", self.n))

    def __repr__(self):
        return f"SyntheticSpace({self.n})"

    def coords(self, p) -> tuple:
        return tuple(la.as_fraction(c) for c in p)

    def make(self, coords) -> tuple:
        return tuple(la.as_fraction(c) for c in coords)

    def sign_at(self, p, h: int) -> int:
        c = la.as_fraction(p[h - 1])
        return (c > 0) - (c < 0)

    def det_sign(self, pts) -> int:
        d = la.det([self.coords(p) for p in pts])
        return (d > 0) - (d < 0)

    def eh_signs(self, gens, h: int) -> tuple[int, ...]:
        e = [Fraction(int(i == h - 1)) for i in range(self.n)]
        b = la.solve_columns([self.coords(g) for g in gens], e)
        return tuple((c > 0) - (c < 0) for c in b)

    def real(self, p, i: int, prec: int = 128):
        c = la.as_fraction(p[i - 1])
        with mpmath.workprec(prec):
            return mpmath.mpf(c.numerator) / c.denominator


class FieldSpace:
    """A totally real field embedded in R^n by its ordered real places."""

    def __init__(self, F: NumberField):
        self.F = F
        self.n = F.n

    def __eq__(self, other):
        return isinstance(other, FieldSpace) and other.F == self.F

    def __hash__(self):
        return hash(("field", self.F))

    def __repr__(self):
        return f"FieldSpace({self.F!r})"

    def coords(self, p) -> tuple:
        return self.F(p).coords

    def make(self, coords) -> FieldElement:
        return self.F.element(coords)

    def sign_at(self, p, h: int) -> int:
        return self.F(p).sign(h)

    def det_sign(self, pts) -> int:
        d = la.det([self.coords(p) for p in pts])
        return ((d > 0) - (d < 0)) * self.F.basis_det_sign()

    def eh_signs(self, gens, h: int) -> tuple[int, ...]:
        """Signs of b_k in e_h = sum b_k w_k; b_k is the h-th embedding of the trace-dual basis."""
        n = self.n
        T = [[(gens[a] * gens[b]).trace() for b in range(n)] for a in range(n)]
        Ti = la.inverse(T)
        out = []
        for k in range(n):
            dual = self.F.zero
            for j in range(n):
                if Ti[k][j]:
                    dual = dual + gens[j] * Ti[k][j]
            out.append(dual.sign(h))
        return tuple(out)

    def real(self, p, i: int, prec: int = 128):
        return self.F(p).real(i, prec)


def space_of(p) -> SyntheticSpace | FieldSpace:
    if isinstance(p, FieldElement):
        return FieldSpace(p.field)
    return SyntheticSpace(len(p))


def _combine(space, coeffs, gens):
    c = [Fraction(0)] * space.n
    for a, g in zip(coeffs, gens):
        if a:
            for i, v in enumerate(space.coords(g)):
                c[i] += a * v
    return space.make(c)


def ray_key(space, p) -> tuple[int, ...]:
    """Primitive integer direction of p; equal keys mean equal rays."""
    return la.primitive_integer_vector(space.coords(p))


# -- lattices ------------------------------------------------------------------

class RationalLattice:
    """A full-rank lattice in Q^n given by basis vectors (synthetic counterpart of an ideal)."""

    def __init__(self, basis: Sequence[Sequence]):
        self.basis = tuple(tuple(la.as_fraction(c) for c in b) for b in basis)
        n = len(self.basis)
        if la.det(self.basis) == 0:
            raise ValueError("lattice basis is singular")
        self.n = n
        self._inv = la.inverse(la.transpose(self.basis))

    @classmethod
    def standard(cls, n: int) -> "RationalLattice":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def coordinates(self, x) -> list[Fraction]:
        return la.matvec(self._inv, [la.as_fraction(c) for c in x])

    def contains(self, x) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    __contains__ = contains

    def element_rational(self, coeffs) -> tuple:
        out = [Fraction(0)] * self.n
        for a, b in zip(coeffs, self.basis):
            for i, v in enumerate(b):
                out[i] += a * v
        return tuple(out)

    element = element_rational


def primitive_on_ray(v, lattice):
    """The primitive lattice vector on the ray through v."""
    coords = lattice.coordinates(v)
    prim = la.primitive_integer_vector(coords)
    return lattice.element_rational([Fraction(c) for c in prim])


# -- cones ---------------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    """Open simplicial cone on an ordered tuple of linearly independent generators."""

    gens: tuple
    space: object = field(compare=False)

    @property
    def d(self) -> int:
        return len(self.gens)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def rays(self) -> tuple:
        return tuple(ray_key(self.space, g) for g in self.gens)

    def key(self) -> frozenset:
        return frozenset(self.rays)

    def coefficients(self, x) -> list[Fraction] | None:
        """Exact a with x = sum a_k w_k, or None if x is not in the span."""
        return la.solve_columns([self.space.coords(g) for g in self.gens], self.space.coords(x))

    def contains(self, x) -> bool:
        a = self.coefficients(x)
        return a is not None and all(c > 0 for c in a)

    def scaled(self, u) -> "Cone":
        """The cone u * sigma (u a field element; generator order kept)."""
        return Cone(tuple(u * g for g in self.gens), self.space)

    def __repr__(self):
        return f"Cone({', '.join(map(str, self.gens))})"


def cone_make(gens: Iterable, h: int | None = None, space=None) -> Cone:
    gens = tuple(gens)
    if not gens:
        raise ValueError("a cone needs at least one generator")
    space = space or space_of(gens[0])
    if isinstance(space, FieldSpace):
        gens = tuple(space.F(g) for g in gens)
    else:
        gens = tuple(space.make(g) for g in gens)
    if len(gens) > space.n:
        raise DependentGenerators(f"{len(gens)} generators in dimension {space.n}")
    if la.rank([space.coords(g) for g in gens]) < len(gens):
        raise DependentGenerators(f"generators {gens} are linearly dependent")
    if h is not None:
        gens = sort_by_height(gens, h, space)
    return Cone(gens, space)


def sort_by_height(gens, h, space):
    def cmp(a, b):
        s = space.sign_at(_combine(space, [1, -1], [a, b]), h)
        if s == 0:
            raise EqualHeights(f"generators {a} and {b} have equal height at place {h}")
        return -s
    import functools
    return tuple(sorted(gens, key=functools.cmp_to_key(cmp)))


def faces(sigma: Cone) -> list[Cone]:
    """All 2^d - 1 nonzero faces, generator order inherited, smallest first."""
    out = []
    for r in range(1, sigma.d + 1):
        for idx in itertools.combinations(range(sigma.d), r):
            out.append(Cone(tuple(sigma.gens[i] for i in idx), sigma.space))
    return out


def is_face(tau: Cone, sigma: Cone) -> bool:
    return set(tau.rays) <= set(sigma.rays)


def omega_partition(sigma: Cone, h: int) -> tuple[tuple, tuple]:
    if sigma.d != sigma.n:
        raise ValueError("omega_partition needs a full-dimensional cone")
    signs = sigma.space.eh_signs(sigma.gens, h)
    if 0 in signs:
        raise ZeroCoefficient(f"e_{h} lies in a proper face span of {sigma}")
    plus = tuple(g for g, s in zip(sigma.gens, signs) if s > 0)
    minus = tuple(g for g, s in zip(sigma.gens, signs) if s < 0)
    return plus, minus


def classify_face(sigma: Cone, tau: Cone, h: int) -> str:
    if not is_face(tau, sigma):
        raise NotAFace(f"{tau} is not a face of {sigma}")
    plus, minus = omega_partition(sigma, h)
    rays = set(tau.rays)
    up = {ray_key(sigma.space, g) for g in plus} <= rays
    low = {ray_key(sigma.space, g) for g in minus} <= rays
    if up and low:
        return "both"
    return "upper" if up else "lower" if low else "neither"


def locate_face(sigma: Cone, x) -> Cone | None:
    """The unique open face of sigma containing x, or None."""
    a = sigma.coefficients(x)
    if a is None or any(c < 0 for c in a) or all(c == 0 for c in a):
        return None
    return Cone(tuple(g for g, c in zip(sigma.gens, a) if c > 0), sigma.space)


def ucl_contains(sigma: Cone, x, h: int) -> bool:
    tau = locate_face(sigma, x)
    return tau is not None and classify_face(sigma, tau, h) in ("upper", "both")


def lcl_contains(sigma: Cone, x, h: int) -> bool:
    tau = locate_face(sigma, x)
    return tau is not None and classify_face(sigma, tau, h) in ("lower", "both")


# -- parallelotopes ------------------------------------------------------------

class ParallelotopeVariant(enum.Enum):
    P = "P"            # (0,1]^d
    OPEN = "open"      # (0,1)^d
    UPPER = "upper"    # (0,1] on Omega_+, [0,1) on Omega_-
    LOWER = "lower"    # [0,1) on Omega_+, (0,1] on Omega_-


@dataclass(frozen=True)
class LatticePoint:
    coords: tuple     # barycentric coordinates over the cone generators
    point: object

    def __repr__(self):
        return f"LatticePoint({[str(c) for c in self.coords]})"


def parallelotope_points(sigma: Cone, lattice, shift, variant=ParallelotopeVariant.P,
                         h: int | None = None, plus: Sequence | None = None) -> list[LatticePoint]:
    """Points of (shift + lattice) in the parallelotope spanned by gen sigma.

    The upper/lower variants need Omega_+; it is computed from ``h`` unless
    given explicitly as ``plus`` (a subset of the generators).
    """
    space = sigma.space
    variant = ParallelotopeVariant(variant)
    G = []
    for g in sigma.gens:
        c = lattice.coordinates(g)
        if any(v.denominator != 1 for v in c):
            raise GeneratorNotInLattice(f"generator {g} is not in the lattice")
        G.append([int(v) for v in c])
    Gm = la.transpose(G)                       # n x d, columns = generators
    zc = lattice.coordinates(shift)
    n, d = len(Gm), sigma.d
    best = None
    for rows in itertools.combinations(range(n), d):
        sub = [Gm[r] for r in rows]
        dt = la.det(sub)
        if dt != 0 and (best is None or abs(dt) < best[0]):
            best = (abs(dt), rows, sub)
    _, rows, sub = best
    inv = la.inverse(sub)
    flags = None
    if variant in (ParallelotopeVariant.UPPER, ParallelotopeVariant.LOWER):
        if d != sigma.n or (h is None and plus is None):
            raise ValueError("upper/lower parallelotopes need a full cone and a height index")
        if plus is None:
            plus, _ = omega_partition(sigma, h)
        pk = {ray_key(space, g) for g in plus}
        flags = [ray_key(space, g) in pk for g in sigma.gens]
    out = []
    for m in la.coset_representatives(sub):
        rhs = [zc[r] + m[k] for k, r in enumerate(rows)]
        x = [fractional_part(v) for v in la.matvec(inv, rhs)]
        full = la.matvec(Gm, x)
        if any((full[i] - zc[i]).denominator != 1 for i in range(n)):
            continue
        if variant is ParallelotopeVariant.OPEN and any(v == 1 for v in x):
            continue
        if flags is not None:
            keep_one = flags if variant is ParallelotopeVariant.UPPER else [not f for f in flags]
            x = [v if (v != 1 or k1) else Fraction(0) for v, k1 in zip(x, keep_one)]
        out.append(LatticePoint(tuple(x), _combine(space, x, sigma.gens)))
    out.sort(key=lambda p: p.coords)
    return out


def conjugate_point(coords: Sequence) -> tuple:
    """Coordinatewise <-x_k>: the involution of P_sigma pairing z + b with -z + b."""
    return tuple(fractional_part(-la.as_fraction(x)) for x in coords)


# -- signs, chi and prisms -----------------------------------------------------

def sign_cone(sigma: Cone) -> int:
    if sigma.d != sigma.n:
        raise ValueError("sign is defined for full-dimensional cones")
    return sigma.space.det_sign(sigma.gens)


def sign_incidence(sigma: Cone, tau: Cone) -> int:
    """sign(sigma) (-1)^(l+1) where tau is sigma with its l-th generator deleted."""
    if tau.d != sigma.d - 1:
        raise NotAFace(f"{tau} is not a facet of {sigma}")
    srays = sigma.rays
    trays = tau.rays
    for l in range(sigma.d):
        if srays[:l] + srays[l + 1:] == trays:
            return sign_cone(sigma) * (-1) ** (l + 2)
    raise NotAFace(f"{tau} is not a facet of {sigma} in the stored generator order")


def _check_halfspace(space, vectors, h):
    for v in vectors:
        if space.sign_at(v, h) <= 0:
            raise NotInHalfspace(f"{v} has non-positive height at place {h}")


def _solve_tuple(space, omega, x):
    cols = [space.coords(w) for w in omega]
    if la.det(cols) == 0:
        return None
    return la.solve_columns(cols, space.coords(x))


def chi(omega: Sequence, x, h: int, space=None) -> int:
    """sign det(omega) if x is a positive combination of omega, else 0."""
    space = space or space_of(x)
    _check_halfspace(space, list(omega) + [x], h)
    a = _solve_tuple(space, omega, x)
    if a is None or any(c <= 0 for c in a):
        return 0
    return space.det_sign(omega)


def chi_closure(omega: Sequence, x, h: int, upper: bool = True, space=None) -> int:
    """lim_{t -> +0} chi(omega)(x -+ t e_h), read off exactly from signs."""
    space = space or space_of(x)
    _check_halfspace(space, list(omega) + [x], h)
    a = _solve_tuple(space, omega, x)
    if a is None or any(c < 0 for c in a):
        return 0
    if all(c > 0 for c in a):
        return space.det_sign(omega)
    b = space.eh_signs(tuple(omega), h)
    step = -1 if upper else 1           # coefficient of e_h in the shifted point
    for c, s in zip(a, b):
        if c == 0 and step * s <= 0:
            return 0
    return space.det_sign(omega)


def prism_pi(omega: Sequence, eta: Sequence, x, h: int, closure: str | None = None, space=None) -> int:
    """sum_{k=1}^{n-1} (-1)^k chi(omega_1..omega_k, eta_k..eta_{n-1})(x)."""
    m = len(omega)
    total = 0
    for k in range(1, m + 1):
        tup = tuple(omega[:k]) + tuple(eta[k - 1:])
        total += (-1) ** k * _chi_variant(tup, x, h, closure, space)
    return total


def _chi_variant(tup, x, h, closure, space):
    if closure is None:
        return chi(tup, x, h, space)
    return chi_closure(tup, x, h, upper=(closure == "upper"), space=space)


def is_generic(x, vectors: Sequence, space=None) -> bool:
    """x lies on no cone generated by n-1 or fewer of ``vectors``."""
    space = space or space_of(x)
    n = space.n
    xc = space.coords(x)
    vec = [space.coords(v) for v in vectors]
    for r in range(1, n):
        for idx in itertools.combinations(range(len(vec)), r):
            cols = [vec[i] for i in idx]
            if la.rank(cols) < r:
                continue
            a = la.solve_columns(cols, xc)
            if a is not None and all(c >= 0 for c in a):
                return False
    return True


def cocycle_residual(vectors: Sequence, x, h: int, space=None) -> int:
    space = space or space_of(x)
    if len(vectors) != space.n + 1:
        raise ValueError("the cocycle relation takes n+1 vectors")
    if not is_generic(x, vectors, space):
        raise NonGenericPoint(f"{x} is not generic")
    return sum((-1) ** l * chi(tuple(vectors[:l]) + tuple(vectors[l + 1:]), x, h, space)
               for l in range(len(vectors)))


def prism_residual(omega: Sequence, eta: Sequence, x, h: int, closure: str | None = None,
                   space=None) -> int:
    """chi(omega) - chi(eta) - sum_l (-1)^(l+1) pi(omega[l], eta[l]), generic or closure form."""
    space = space or space_of(x)
    n = len(omega)
    if closure is None and not is_generic(x, list(omega) + list(eta), space):
        raise NonGenericPoint(f"{x} is not generic")
    lhs = _chi_variant(tuple(omega), x, h, closure, space) - _chi_variant(tuple(eta), x, h, closure, space)
    rhs = 0
    for l in range(1, n + 1):
        om = tuple(omega[:l - 1]) + tuple(omega[l:])
        et = tuple(eta[:l - 1]) + tuple(eta[l:])
        rhs += (-1) ** (l + 1) * prism_pi(om, et, x, h, closure, space)
    return lhs - rhs


def star_sign_sum(star: Iterable[Cone], rho: Cone) -> int:
    """sum of (-1)^d(sigma) over the supplied cones having rho as a face."""
    return sum((-1) ** s.d for s in star if is_face(rho, s))


def upper_reciprocity_residual(sigma: Cone, tau: Cone, h: int) -> int:
    if not is_face(tau, sigma):
        raise NotAFace(f"{tau} is not a face of {sigma}")
    total = 0
    for rho in faces(sigma):
        if is_face(tau, rho) and classify_face(sigma, rho, h) in ("upper", "both"):
            total += (-1) ** rho.d
    if classify_face(sigma, tau, h) in ("lower", "both"):
        total -= (-1) ** sigma.n
    return total


def subdivide(sigma: Cone, ray) -> list[Cone]:
    """Stellar subdivision of sigma at an interior ray (2^d - 1 open cones)."""
    if sigma.d < 2:
        raise RayNotInterior("a ray has no interior subdivision")
    space = sigma.space
    ray = space.F(ray) if isinstance(space, FieldSpace) else space.make(ray)
    if not sigma.contains(ray):
        raise RayNotInterior(f"{ray} is not in the interior of {sigma}")
    out = []
    for r in range(sigma.d):
        for idx in itertools.combinations(range(sigma.d), r):
            out.append(Cone(tuple(sigma.gens[i] for i in idx) + (ray,), space))
    return out


# -- fans ----------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    """Cones whose unit translates are meant to tile the totally positive orthant."""

    cones: tuple
    units: tuple = ()
    h: int = 1
    face_closed: bool = False
    lattice: object = field(default=None, compare=False)

    @property
    def space(self):
        return self.cones[0].space

    @property
    def n(self) -> int:
        return self.space.n

    def full(self) -> list[Cone]:
        return [c for c in self.cones if c.d == self.n]

    def attach(self, lattice, h: int | None = None) -> "Fan":
        """Replace generators by primitive lattice vectors on the same rays, sorted by height."""
        h = h or self.h
        new = []
        for c in self.cones:
            gens = tuple(primitive_on_ray(g, lattice) for g in c.gens)
            new.append(Cone(sort_by_height(gens, h, c.space), c.space))
        return Fan(tuple(new), self.units, h, self.face_closed, lattice)

    def replace(self, index: int, cones: Sequence[Cone], face_closed: bool | None = None) -> "Fan":
        """Swap cone ``index`` for ``cones`` (generators are re-normalized on the next attach)."""
        lst = list(self.cones)
        lst[index:index + 1] = list(cones)
        return Fan(tuple(lst), self.units, self.h,
                   self.face_closed if face_closed is None else face_closed, None)

    def rescale(self, index: int, gen: int, k: int) -> "Fan":
        """Multiply one generator of one cone by the positive integer k, keeping the lattice."""
        if k < 1:
            raise ValueError("rescaling factor must be a positive integer")
        c = self.cones[index]
        gens = list(c.gens)
        gens[gen] = gens[gen] * k
        lst = list(self.cones)
        lst[index] = Cone(tuple(gens), c.space)
        return Fan(tuple(lst), self.units, self.h, self.face_closed, self.lattice)

    def with_h(self, h: int) -> "Fan":
        return Fan(self.cones, self.units, h, self.face_closed, self.lattice)

    # unit action (one generator, i.e. n = 2, or a box of exponents in general)
    def unit_power(self, k: Sequence[int]):
        u = self.space.F.one
        for e, k_i in zip(self.units, k):
            u = u * e ** k_i
        return u

    def _exponent_guess(self, x) -> list[tuple[int, ...]]:
        r = len(self.units)
        if r == 1:
            F = self.space.F
            with mpmath.workprec(96):
                eps = self.units[0]
                t = (mpmath.log(x.real(1, 96)) - mpmath.log(x.real(2, 96))) / \
                    (mpmath.log(eps.real(1, 96)) - mpmath.log(eps.real(2, 96)))
            # the fan's own cones sit near exponent 0; test a small window
            k0 = int(mpmath.floor(t))
            return [(k,) for k in range(k0 - 3, k0 + 4)]
        return list(itertools.product(range(-3, 4), repeat=r))

    def locate(self, x) -> list[tuple[tuple[int, ...], int]]:
        """All (exponent, cone index) with x in unit^exponent * cone."""
        hits = []
        for k in self._exponent_guess(x):
            y = x * self.unit_power(k).inverse()
            for idx, c in enumerate(self.cones):
                if c.contains(y):
                    hits.append((k, idx))
        return hits

    def locate_ucl(self, x, h: int | None = None) -> list[tuple[tuple[int, ...], int]]:
        h = h or self.h
        hits = []
        for k in self._exponent_guess(x):
            u = self.unit_power(k)
            y = x * u.inverse()
            for idx, c in enumerate(self.cones):
                # u preserves e_h-direction signs, so ucl(u sigma) = u ucl(sigma)
                if c.d == self.n and ucl_contains(c, y, h):
                    hits.append((k, idx))
        return hits

    def star(self, rho: Cone, radius: int = 2) -> list[Cone]:
        """Unit translates of fan cones (exponents in a box) having rho as a face."""
        out = {}
        r = len(self.units)
        for k in itertools.product(range(-radius, radius + 1), repeat=r):
            u = self.unit_power(k)
            for c in self.cones:
                t = c.scaled(u)
                if is_face(rho, t):
                    out[t.key()] = t
        return list(out.values())


def quadratic_standard_fan(F: NumberField, eps: FieldElement, h: int = 1) -> Fan:
    """{cone(1, eps), ray(1)} with unit action by eps."""
    if (eps - 1).sign(1) <= 0 and (eps - 1).sign(2) <= 0:
        raise ValueError("eps must exceed 1 at some place")
    space = FieldSpace(F)
    sigma = cone_make((F.one, eps), h=None, space=space)
    tau = cone_make((F.one,), space=space)
    return Fan((sigma, tau), (eps,), h, True)


def sample_totally_positive(F: NumberField, count: int, seed: int, units=()) -> list[FieldElement]:
    """Deterministic mix of generic totally positive elements and boundary-ray points."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if units and rng.random() < 0.2:
            k = rng.randint(-3, 3)
            x = units[0] ** k * Fraction(rng.randint(1, 50), rng.randint(1, 50))
        else:
            den = rng.randint(1, 60)
            coords = [Fraction(rng.randint(-400, 400), den) for _ in range(F.n)]
            x = F.element(coords)
            if x.is_zero() or any(x.sign(i) <= 0 for i in range(1, F.n + 1)):
                continue
        out.append(x)
    return out
