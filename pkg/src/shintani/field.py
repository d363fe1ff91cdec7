"""Exact arithmetic in totally real number fields.

Two modes share one implementation:

* quadratic mode, ``NumberField.quadratic(D)``: F = Q(sqrt D) with power basis
  (1, sqrt D); place 1 sends sqrt D to +sqrt D, place 2 to -sqrt D.  All sign
  decisions are exact.
* embedded mode, ``NumberField.from_polynomial(coeffs)``: F = Q[x]/(f) for a
  monic irreducible totally real f.  Real places are the real roots of f,
  isolated by rational intervals; signs are decided by exact interval
  evaluation with geometric precision escalation.

Elements are stored as rational coordinates in the power basis 1, t, ..., t^(n-1).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

import mpmath

from . import _linalg as la
from .errors import (
    InvalidDatum,
    NotAMember,
    NotQuadratic,
    PrecisionExhausted,
    SearchExhausted,
)

SIGN_BITS_START = 64
SIGN_BITS_CAP = 4096


def _squarefree(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class NumberField:
    """A totally real number field with a fixed numbering of its real places."""

    def __init__(self, poly: Sequence, *, integral_basis: Sequence[Sequence] | None = None,
                 embedding_order: Sequence[int] | None = None, quadratic_d: int | None = None,
                 sign_bits_cap: int = SIGN_BITS_CAP):
        coeffs = [la.as_fraction(c) for c in poly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        lead = coeffs[-1]
        self.poly = tuple(c / lead for c in coeffs)
        self.n = len(self.poly) - 1
        if self.n < 2:
            raise ValueError("degree must be at least 2")
        self.D = quadratic_d
        self.sign_bits_cap = sign_bits_cap
        self._pow_table = self._build_power_table()
        self._roots: list[tuple[Fraction, Fraction]] | None = None
        if quadratic_d is None:
            self._isolate_roots(embedding_order)
        elif embedding_order is not None and list(embedding_order) != [0, 1]:
            raise ValueError("quadratic mode uses the fixed place order (+sqrt D, -sqrt D)")
        if integral_basis is None:
            integral_basis = [[int(i == k) for k in range(self.n)] for i in range(self.n)]
        self.integral_basis = tuple(self.element(c) for c in integral_basis)
        if la.det([e.coords for e in self.integral_basis]) == 0:
            raise ValueError("integral basis is not a basis")

    # -- constructors -------------------------------------------------------
    @classmethod
    def quadratic(cls, D: int) -> "NumberField":
        D = int(D)
        if D <= 1 or not _squarefree(D):
            raise ValueError(f"D={D} must be a square-free integer > 1")
        if D % 4 == 1:
            basis = [[1, 0], [Fraction(1, 2), Fraction(1, 2)]]
        else:
            basis = [[1, 0], [0, 1]]
        return cls([-D, 0, 1], integral_basis=basis, quadratic_d=D)

    @classmethod
    def from_polynomial(cls, coeffs: Sequence, **kwargs) -> "NumberField":
        """Field defined by ``coeffs`` (constant term first)."""
        return cls(coeffs, **kwargs)

    @property
    def is_quadratic(self) -> bool:
        return self.D is not None

    def __repr__(self):
        if self.is_quadratic:
            return f"NumberField.quadratic({self.D})"
        return f"NumberField.from_polynomial({[str(c) for c in self.poly]})"

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, NumberField) and self.poly == other.poly and \
            self.D == other.D and \
            [b.coords for b in self.integral_basis] == [b.coords for b in other.integral_basis] and \
            self._place_key() == other._place_key()

    def __hash__(self):
        return hash((self.poly, self.D))

    def _place_key(self):
        return None if self._roots is None else tuple(self._roots)

    # -- structure ----------------------------------------------------------
    def _build_power_table(self):
        """Coordinates of t^k for k < 2n - 1."""
        n = self.n
        table = []
        for k in range(2 * n - 1):
            if k < n:
                table.append(tuple(Fraction(int(i == k)) for i in range(n)))
            else:
                prev = table[-1]
                # t * prev, then reduce t^n = -sum poly[i] t^i
                shifted = [Fraction(0)] + list(prev[:-1])
                top = prev[-1]
                table.append(tuple(shifted[i] - top * self.poly[i] for i in range(n)))
        return table

    def element(self, coords: Iterable) -> "FieldElement":
        c = tuple(la.as_fraction(x) for x in coords)
        if len(c) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(c)}")
        return FieldElement(self, c)

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value] + [0] * (self.n - 1))

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def gen(self) -> "FieldElement":
        return self.element([int(i == 1) for i in range(self.n)])

    def _mul_coords(self, a, b):
        n = self.n
        out = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        res = [Fraction(0)] * n
        for k, c in enumerate(out):
            if c:
                row = self._pow_table[k]
                for i in range(n):
                    res[i] += c * row[i]
        return tuple(res)

    def mult_matrix(self, x: "FieldElement") -> list[list[Fraction]]:
        """Matrix of y -> x*y in the power basis (columns are images of t^k)."""
        cols = [self._mul_coords(x.coords, self._pow_table[k]) for k in range(self.n)]
        return la.transpose(cols)

    @property
    def maximal_order(self) -> "FractionalIdeal":
        return FractionalIdeal(self, self.integral_basis)

    # -- real places --------------------------------------------------------
    def _isolate_roots(self, order):
        import sympy

        x = sympy.Symbol("x")
        p = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.poly)], x)
        if not p.is_irreducible:
            raise ValueError("defining polynomial is not irreducible over Q")
        ivs = p.intervals()
        if sum(m for _, m in ivs) != self.n:
            raise ValueError("defining polynomial is not totally real")
        roots = [(Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))) for (a, b), _ in ivs]
        roots.sort(key=lambda ab: ab[0], reverse=True)
        if order is not None:
            if sorted(order) != list(range(self.n)):
                raise ValueError("embedding_order must be a permutation of 0..n-1")
            roots = [roots[k] for k in order]
        self._roots = roots

    def _peval(self, t: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.poly):
            acc = acc * t + c
        return acc

    def root_interval(self, place: int, bits: int) -> tuple[Fraction, Fraction]:
        """Isolating interval of width <= 2^-bits for the root at ``place`` (1-based)."""
        a, b = self._roots[place - 1]
        fa = self._peval(a)
        target = Fraction(1, 1 << bits)
        while b - a > target:
            m = (a + b) / 2
            fm = self._peval(m)
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        self._roots[place - 1] = (a, b)
        return a, b

    def sign(self, x: "FieldElement", place: int) -> int:
        if not 1 <= place <= self.n:
            raise ValueError(f"place {place} out of range 1..{self.n}")
        if all(c == 0 for c in x.coords):
            return 0
        if self.is_quadratic:
            return _quadratic_sign(x.coords[0], x.coords[1] if place == 1 else -x.coords[1], self.D)
        bits = SIGN_BITS_START
        while True:
            lo, hi = _interval_horner(x.coords, self.root_interval(place, bits))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if bits >= self.sign_bits_cap:
                raise PrecisionExhausted(
                    f"sign of {x} at place {place} undecided at {bits} bits")
            bits *= 2

    def real(self, x: "FieldElement", place: int, prec: int = 128) -> mpmath.mpf:
        with mpmath.workprec(prec + 20):
            if self.is_quadratic:
                s = mpmath.sqrt(self.D)
                b = x.coords[1] if place == 1 else -x.coords[1]
                v = mpmath.mpf(x.coords[0].numerator) / x.coords[0].denominator + \
                    mpmath.mpf(b.numerator) / b.denominator * s
            else:
                a, b = self.root_interval(place, prec + 40)
                t = mpmath.mpf((a + b).numerator) / (a + b).denominator / 2
                v = mpmath.mpf(0)
                for c in reversed(x.coords):
                    v = v * t + mpmath.mpf(c.numerator) / c.denominator
        return +v

    def basis_det_sign(self) -> int:
        """Sign of det(t_i^k) (rows = places, columns = power basis)."""
        if self.is_quadratic:
            return -1
        s = 1
        for i in range(self.n):
            for j in range(i + 1, self.n):
                # Vandermonde factor (t_j - t_i); isolating intervals are disjoint
                s *= 1 if self._roots[j][0] > self._roots[i][0] else -1
        return s


def _quadratic_sign(a: Fraction, b: Fraction, D: int) -> int:
    """Exact sign of a + b*sqrt(D)."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    cmp = a * a - b * b * D
    return sa if cmp > 0 else sb


def _interval_horner(coords, iv):
    lo, hi = Fraction(0), Fraction(0)
    a, b = iv
    for c in reversed(coords):
        prods = (lo * a, lo * b, hi * a, hi * b)
        lo, hi = min(prods) + c, max(prods) + c
    return lo, hi


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberField
    coords: tuple

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, tuple(x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(x * other for x in self.coords))
        o = self._coerce(other)
        return FieldElement(self.field, self.field._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        m = self.field.mult_matrix(self)
        one = [Fraction(int(i == 0)) for i in range(self.field.n)]
        return FieldElement(self.field, tuple(la.solve_columns(la.transpose(m), one)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(x / other for x in self.coords))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coords == other.coords and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self.coords == self.field(other).coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def sign(self, place: int) -> int:
        return self.field.sign(self, place)

    def signs(self) -> tuple[int, ...]:
        return tuple(self.sign(i) for i in range(1, self.field.n + 1))

    def real(self, place: int, prec: int = 128) -> mpmath.mpf:
        return self.field.real(self, place, prec)

    def embeddings(self, prec: int = 128) -> tuple:
        return tuple(self.real(i, prec) for i in range(1, self.field.n + 1))

    def trace(self) -> Fraction:
        m = self.field.mult_matrix(self)
        return sum((m[i][i] for i in range(self.field.n)), Fraction(0))

    def norm(self) -> Fraction:
        return la.det(self.field.mult_matrix(self))

    def conjugate(self) -> "FieldElement":
        if not self.field.is_quadratic:
            raise NotQuadratic("conjugate is only defined in quadratic mode")
        a, b = self.coords
        return FieldElement(self.field, (a, -b))

    def floor(self, place: int = 1) -> int:
        """Exact floor of the real number x^(place)."""
        approx = self.real(place, 96)
        k = int(mpmath.floor(approx))
        while (self - k).sign(place) < 0:
            k -= 1
        while (self - (k + 1)).sign(place) >= 0:
            k += 1
        return k

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        if self.field.is_quadratic:
            a, b = self.coords
            if b == 0:
                return str(a)
            root = f"sqrt({self.field.D})"
            bs = root if b == 1 else f"-{root}" if b == -1 else f"{b}*{root}"
            if a == 0:
                return bs
            return f"{a}{bs}" if bs.startswith("-") else f"{a}+{bs}"
        terms = []
        for k, c in enumerate(self.coords):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*t" if k == 1 else f"{c}*t^{k}")
        return " + ".join(terms) if terms else "0"


class FractionalIdeal:
    """A full-rank Z-lattice in F given by a Z-basis (kept in Hermite form)."""

    def __init__(self, field: NumberField, basis: Sequence[FieldElement]):
        self.field = field
        basis = [field(b) for b in basis]
        if len(basis) != field.n or la.det([b.coords for b in basis]) == 0:
            raise ValueError("basis must consist of n linearly independent elements")
        self.basis = _hermite_basis(field, basis)
        self._matrix_t = [b.coords for b in self.basis]          # rows = basis coords
        self._inv = la.inverse(la.transpose(self._matrix_t))

    @classmethod
    def from_generators(cls, field: NumberField, gens: Iterable[FieldElement]) -> "FractionalIdeal":
        """Z-span of the given elements (must have full rank)."""
        gens = [field(g) for g in gens]
        den = la.common_denominator(c for g in gens for c in g.coords)
        rows = la.hnf_rows([[int(c * den) for c in g.coords] for g in gens])
        if len(rows) != field.n:
            raise ValueError("generators do not span a full lattice")
        return cls(field, [field.element([Fraction(c, den) for c in r]) for r in rows])

    @classmethod
    def generated_by(cls, field: NumberField, gens: Iterable[FieldElement]) -> "FractionalIdeal":
        """The O_F-module sum of g O_F over the given elements."""
        gens = [field(g) for g in gens]
        if not gens or all(g.is_zero() for g in gens):
            raise ValueError("an ideal needs a non-zero generator")
        return cls.from_generators(field, [g * b for g in gens for b in field.integral_basis])

    @classmethod
    def principal(cls, x: FieldElement) -> "FractionalIdeal":
        return cls(x.field, [x * b for b in x.field.integral_basis])

    def __repr__(self):
        return f"FractionalIdeal([{', '.join(str(b) for b in self.basis)}])"

    def __eq__(self, other):
        return isinstance(other, FractionalIdeal) and self.basis == other.basis

    def __hash__(self):
        return hash(tuple(self.basis))

    def coordinates(self, x: FieldElement) -> list[Fraction]:
        return la.matvec(self._inv, self.field(x).coords)

    def contains(self, x) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(self.field(x)))

    __contains__ = contains

    def element(self, int_coords: Sequence[int]) -> FieldElement:
        out = self.field.zero
        for c, b in zip(int_coords, self.basis):
            if c:
                out = out + b * c
        return out

    def scale(self, x: FieldElement) -> "FractionalIdeal":
        return FractionalIdeal(self.field, [x * b for b in self.basis])

    def __mul__(self, other):
        if isinstance(other, FractionalIdeal):
            return FractionalIdeal.from_generators(
                self.field, [a * b for a in self.basis for b in other.basis])
        return self.scale(self.field(other))

    __rmul__ = __mul__

    def inverse(self) -> "FractionalIdeal":
        """{y : y * self is contained in O_F}."""
        F = self.field
        O = F.maximal_order
        rows = []
        for a in self.basis:
            # coordinates in O-basis of a * (O-basis element k), as functions of y's O-coords
            images = [O.coordinates(a * w) for w in O.basis]
            rows.extend(la.transpose(images))
        den = la.common_denominator(c for r in rows for c in r)
        hb = la.hnf_rows([[int(c * den) for c in r] for r in rows])
        lat = [[Fraction(c, den) for c in r] for r in hb]
        dual = la.inverse(lat)  # columns span {v : lat v in Z^n}
        gens = [O.element_rational([dual[i][k] for i in range(F.n)]) for k in range(F.n)]
        return FractionalIdeal(F, gens)

    def element_rational(self, coords: Sequence[Fraction]) -> FieldElement:
        out = self.field.zero
        for c, b in zip(coords, self.basis):
            if c:
                out = out + b * c
        return out

    def norm(self) -> Fraction:
        """Absolute norm [O_F : self] (extended multiplicatively to fractional ideals)."""
        d = la.det([b.coords for b in self.basis])
        d0 = la.det([b.coords for b in self.field.integral_basis])
        return abs(d / d0)

    def is_integral(self) -> bool:
        O = self.field.maximal_order
        return all(O.contains(b) for b in self.basis)


def _hermite_basis(field, basis):
    den = la.common_denominator(c for b in basis for c in b.coords)
    rows = la.hnf_rows([[int(c * den) for c in b.coords] for b in basis])
    return tuple(field.element([Fraction(c, den) for c in r]) for r in rows)


@dataclass(frozen=True)
class UnitGroupData:
    """Generators of E_f together with the checks that were carried out on them."""

    generators: tuple
    totally_positive: bool
    congruent_one: bool

    @classmethod
    def certify(cls, gens: Sequence[FieldElement], f: FractionalIdeal) -> "UnitGroupData":
        gens = tuple(gens)
        for e in gens:
            if abs(e.norm()) != 1 or not f.field.maximal_order.contains(e) or \
                    not f.field.maximal_order.contains(e.inverse()):
                raise InvalidDatum(f"{e} is not a unit")
        return cls(gens, all(is_totally_positive(e) for e in gens),
                   all(ideal_member(e - 1, f) for e in gens))


# -- operations -------------------------------------------------------------

def norm(x: FieldElement) -> Fraction:
    return x.norm()


def is_totally_positive(x: FieldElement) -> bool:
    if x.is_zero():
        raise ValueError("zero is not in the domain of is_totally_positive")
    return all(x.sign(i) > 0 for i in range(1, x.field.n + 1))


def ideal_member(x: FieldElement, b: FractionalIdeal) -> bool:
    return b.contains(x)


def is_primitive(w: FieldElement, b: FractionalIdeal) -> bool:
    """True iff w is in b and w/k is not, for every integer k >= 2."""
    coords = b.coordinates(w)
    if any(c.denominator != 1 for c in coords):
        raise NotAMember(f"{w} is not in {b}")
    g = 0
    for c in coords:
        g = gcd(g, int(c))
    if g == 0:
        raise ValueError("zero is never primitive")
    return g == 1


def fractional_part(x):
    """The t in (0, 1] with x - t an integer.

    Accepts ints/Fractions (exact) or an ``(value, error)`` enclosure of a real.
    """
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        t = x - (x.numerator // x.denominator)
        return t if t else Fraction(1)
    if isinstance(x, str):
        return fractional_part(Fraction(x))
    value, err = (x.value, x.error) if hasattr(x, "error") else (mpmath.mpf(x), mpmath.mpf(0))
    lo = mpmath.floor(value - err)
    if mpmath.floor(value + err) != lo or (err > 0 and value - err <= lo) or value == lo:
        if value == lo and err == 0:
            return mpmath.mpf(1)
        raise PrecisionExhausted(f"fractional part of {value} +- {err} straddles an integer")
    return value - lo


def fundamental_unit(F: NumberField) -> FieldElement:
    """Fundamental unit eta of O_F with eta^(1) > 1, via the continued fraction of the order generator."""
    if not F.is_quadratic:
        raise NotQuadratic("fundamental unit search is implemented for real quadratic fields")
    w = F.integral_basis[1]
    alpha = w
    p_prev, p = 1, alpha.floor()
    q_prev, q = 0, 1
    a = p
    for _ in range(10_000):
        beta = w * (-q) + p
        if abs(beta.norm()) == 1:
            eta = beta.conjugate()
            return eta if eta.sign(1) > 0 else -eta
        alpha = (alpha - a).inverse()
        a = alpha.floor()
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    raise SearchExhausted("continued fraction period too long")


def fundamental_unit_Ef(F: NumberField, f: FractionalIdeal, place: int = 1,
                        bound: int = 1000) -> FieldElement:
    """Generator eps of E_f (totally positive units = 1 mod f) with eps^(place) > 1."""
    if not F.is_quadratic:
        raise NotQuadratic("fundamental_unit_Ef requires a real quadratic field")
    eta = fundamental_unit(F)
    power = F.one
    for k in range(1, bound + 1):
        power = power * eta
        if is_totally_positive(power) and ideal_member(power - 1, f):
            return power if (power - 1).sign(place) > 0 else power.inverse()
    raise SearchExhausted(f"no power eta^k with k <= {bound} lies in E_f")


def _shell(dim: int, r: int):
    """Integer vectors of sup-norm exactly r in lexicographic order."""
    for c in itertools.product(range(-r, r + 1), repeat=dim):
        if max(map(abs, c), default=0) == r:
            yield c


def find_signed_generator(f: FractionalIdeal, j: int, bound: int = 50) -> FieldElement:
    """An element mu_j of 1 + f negative at place j and positive at all other places.

    Candidates 1 + sum c_k beta_k are scanned in shells of increasing sup-norm
    of the integer vector c; within the first shell containing a valid
    candidate, the one of smallest trace form Tr(x^2) is returned (ties by
    lexicographic order of c).
    """
    F = f.field
    n = F.n
    if not 1 <= j <= n:
        raise ValueError(f"place {j} out of range")
    want = tuple(-1 if i == j else 1 for i in range(1, n + 1))
    for r in range(1, bound + 1):
        best = None
        for c in _shell(n, r):
            x = f.element(c) + 1
            if x.is_zero() or x.signs() != want:
                continue
            key = ((x * x).trace(), c)
            if best is None or key < best[0]:
                best = (key, x)
        if best is not None:
            return best[1]
    raise SearchExhausted(f"no signed generator with coefficients bounded by {bound}")
