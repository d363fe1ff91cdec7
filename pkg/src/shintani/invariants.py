"""Ray class invariants X(C) and X_i(C) and checks of the identities they satisfy.

Conventions.  A class C is fixed by an integral representative a0 (coprime
to f) and a totally positive z; then b = z a0^-1 f and

    zeta(s, C)   = N(b^-1 f)^-s  zeta_f(s, z + b),
    log X(C)     = -zeta'(0, C) + (-1)^n zeta'(0, mu C),
    log X_i(C)   = sum_{sigma in Phi} sum_{z_sigma in P_sigma cap (z+b)} xi_d'(0, z_sigma^(i), sigma^(i)).

The class mu C is represented by (mu a0, -mu z) and mu_j C by (mu_j a0, z).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import barnes
from .cones import (
    Cone,
    Fan,
    LatticePoint,
    ParallelotopeVariant,
    omega_partition,
    parallelotope_points,
    quadratic_standard_fan,
    subdivide,
)
from .errors import EmptyTable, InvalidDatum, NotQuadratic, ShiftInLattice, UnitIdealModulus
from .field import (
    FieldElement,
    FractionalIdeal,
    NumberField,
    UnitGroupData,
    find_signed_generator,
    fundamental_unit_Ef,
    ideal_member,
    is_totally_positive,
)
from .precision import DEFAULT, Estimate, PrecisionContext, esum

SLACK = mpmath.mpf("1e-12")


# -- data ----------------------------------------------------------------------

@dataclass(frozen=True)
class RayClassDatum:
    F: NumberField
    f: FractionalIdeal
    a0: FractionalIdeal
    z: FieldElement
    b: FractionalIdeal
    units: UnitGroupData
    mu: tuple              # mu_1, ..., mu_n
    unit_place: int = 1

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def mu_total(self) -> FieldElement:
        out = self.F.one
        for m in self.mu:
            out = out * m
        return out

    def norm_bf(self) -> Fraction:
        """N(b^-1 f)."""
        return self.f.norm() / self.b.norm()

    def mu_class(self) -> "RayClassDatum":
        """Datum for mu C: (mu a0, -mu z), which has the same b."""
        m = self.mu_total
        return make_datum(self.F, self.f, self.a0.scale(m), -m * self.z,
                          units=self.units.generators, mu=self.mu, unit_place=self.unit_place)

    def mu_j_class(self, j: int) -> "RayClassDatum":
        """Datum for mu_j C: (mu_j a0, z), so that b becomes mu_j^-1 b."""
        return make_datum(self.F, self.f, self.a0.scale(self.mu[j - 1]), self.z,
                          units=self.units.generators, mu=self.mu, unit_place=self.unit_place)

    def with_z(self, z: FieldElement) -> "RayClassDatum":
        return make_datum(self.F, self.f, self.a0, z, units=self.units.generators,
                          mu=self.mu, unit_place=self.unit_place)


def default_z(F: NumberField, a0: FractionalIdeal, f: FractionalIdeal, bound: int = 20) -> FieldElement:
    """First totally positive element of O_F, in shells of the integral basis, not in a0^-1 f z."""
    O = F.maximal_order
    inv = a0.inverse() * f
    for r in range(0, bound + 1):
        for c in itertools.product(range(-r, r + 1), repeat=F.n):
            if max(map(abs, c)) != r:
                continue
            x = O.element([1 + c[0]] + list(c[1:]))
            if x.is_zero() or not is_totally_positive(x):
                continue
            if not inv.scale(x).contains(x):
                return x
    raise InvalidDatum("no admissible z found; a0 is probably not coprime to f")


def make_datum(F: NumberField, f: FractionalIdeal, a0: FractionalIdeal | None = None,
               z: FieldElement | None = None, *, units: Sequence | None = None,
               mu: Sequence | None = None, unit_place: int = 1) -> RayClassDatum:
    O = F.maximal_order
    if not f.is_integral():
        raise InvalidDatum("f must be an integral ideal")
    if f == O:
        raise UnitIdealModulus("f = O_F is excluded: the modulus must be a proper ideal (f strictly inside O_F)")
    a0 = a0 if a0 is not None else O
    if not a0.is_integral():
        raise InvalidDatum("a0 must be an integral ideal")
    z = F(z) if z is not None else default_z(F, a0, f)
    if z.is_zero() or not is_totally_positive(z):
        raise InvalidDatum(f"z = {z} is not totally positive")
    b = (a0.inverse() * f).scale(z)
    if b.contains(z):
        raise ShiftInLattice(f"z = {z} lies in b; a0 must be coprime to f")
    if units is None:
        if not F.is_quadratic:
            raise NotQuadratic("units must be supplied for fields of degree > 2")
        units = [fundamental_unit_Ef(F, f, unit_place)]
    ud = UnitGroupData.certify([F(u) for u in units], f)
    if not (ud.totally_positive and ud.congruent_one):
        raise InvalidDatum("unit generators must be totally positive and congruent to 1 mod f")
    if mu is None:
        mu = [find_signed_generator(f, j) for j in range(1, F.n + 1)]
    mu = tuple(F(m) for m in mu)
    for j, m in enumerate(mu, start=1):
        want = tuple(-1 if i == j else 1 for i in range(1, F.n + 1))
        if m.signs() != want or not ideal_member(m - 1, f):
            raise InvalidDatum(f"mu_{j} = {m} violates the sign/congruence conditions")
    return RayClassDatum(F, f, a0, z, b, ud, mu, unit_place)


def standard_fan(datum: RayClassDatum, h: int = 1) -> Fan:
    return quadratic_standard_fan(datum.F, datum.units.generators[0], h)


def _attached(fan: Fan, datum: RayClassDatum) -> Fan:
    if fan.lattice is not None and fan.lattice == datum.b:
        return fan
    return fan.attach(datum.b)


# -- ledger --------------------------------------------------------------------

@dataclass(frozen=True)
class LedgerEntry:
    cone_index: int
    cone: Cone
    coords: tuple
    point: FieldElement

    def to_json(self) -> dict:
        return {"cone": self.cone_index,
                "generators": [[str(c) for c in g.coords] for g in self.cone.gens],
                "coords": [str(c) for c in self.coords]}


def zeta_terms(fan: Fan, datum: RayClassDatum, sign: int = 1,
               variant=ParallelotopeVariant.P, h: int | None = None) -> list[LedgerEntry]:
    """Lattice points of (sign*z + b) in each parallelotope P_sigma, sigma in the fan."""
    fan = _attached(fan, datum)
    shift = datum.z if sign > 0 else -datum.z
    out = []
    for idx, c in enumerate(fan.cones):
        if variant in (ParallelotopeVariant.UPPER, ParallelotopeVariant.LOWER) and c.d != fan.n:
            continue
        for p in parallelotope_points(c, datum.b, shift, variant, h=h):
            out.append(LedgerEntry(idx, c, p.coords, p.point))
    return out


# -- zeta values ---------------------------------------------------------------

def partial_zeta_at0(datum: RayClassDatum, fan: Fan) -> Fraction:
    """zeta(0, C), exact."""
    total = Fraction(0)
    for e in zeta_terms(fan, datum):
        total += barnes.shintani_zeta_at0(e.coords, e.cone.gens)
    return total


def partial_zeta_deriv0(datum: RayClassDatum, fan: Fan, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """zeta'(0, C) = -log N(b^-1 f) zeta_f(0) + zeta_f'(0)."""
    ledger = zeta_terms(fan, datum)
    z0 = sum((barnes.shintani_zeta_at0(e.coords, e.cone.gens) for e in ledger), Fraction(0))
    with mpmath.workprec(ctx.bits):
        nb = datum.norm_bf()
        logn = mpmath.log(mpmath.mpf(nb.numerator)) - mpmath.log(mpmath.mpf(nb.denominator))
        pref = -logn * (mpmath.mpf(z0.numerator) / z0.denominator)
        terms = [barnes.shintani_zeta_deriv0(e.coords, e.cone.gens, ctx) for e in ledger]
        return esum(terms) + Estimate(pref, abs(pref) * ctx.rounding_unit, ctx.bits)


def log_X_definition(datum: RayClassDatum, fan: Fan, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """-zeta'(0, C) + (-1)^n zeta'(0, mu C), each from its own datum."""
    a = partial_zeta_deriv0(datum, fan, ctx)
    b = partial_zeta_deriv0(datum.mu_class(), fan, ctx)
    return -a + b * (-1) ** datum.n


def compute_X(datum: RayClassDatum, fan: Fan, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """log X(C) = xi_f'(0, z + b), summed over the ledger in joint mode."""
    total_xi0 = Fraction(0)
    terms = []
    for e in zeta_terms(fan, datum):
        xi0, der = barnes.xi_value_and_deriv0(e.coords, e.cone.gens, ctx, mode="joint")
        total_xi0 += xi0
        terms.append(der)
    if total_xi0 != 0:
        raise AssertionError(f"xi_f(0, z + b) = {total_xi0}, expected 0")
    with mpmath.workprec(ctx.bits):
        return esum(terms)


def compute_Xi_faces(datum: RayClassDatum, fan: Fan, i: int, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """log X_i(C) from all cones of the fan, lower-dimensional ones included."""
    with mpmath.workprec(ctx.bits):
        return esum(barnes.xi_deriv0_place(e.coords, e.cone.gens, i, ctx)
                    for e in zeta_terms(fan, datum))


def compute_Xi_upper(datum: RayClassDatum, fan: Fan, i: int, h: int,
                     ctx: PrecisionContext = DEFAULT) -> Estimate:
    """log X_i(C) from full-dimensional cones only, points taken in P^u_sigma."""
    with mpmath.workprec(ctx.bits):
        return esum(barnes.xi_deriv0_place(e.coords, e.cone.gens, i, ctx)
                    for e in zeta_terms(fan, datum, variant=ParallelotopeVariant.UPPER, h=h))


# -- residuals -----------------------------------------------------------------

@dataclass(frozen=True)
class Residual:
    name: str
    value: mpmath.mpf
    tolerance: mpmath.mpf

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)

    def to_json(self) -> dict:
        return {"name": self.name, "value": mpmath.nstr(self.value, 6),
                "tolerance": mpmath.nstr(self.tolerance, 6), "passed": self.passed}


def agreement(name: str, a: Estimate, b: Estimate, sign: int = 1, ctx: PrecisionContext = DEFAULT) -> Residual:
    """Residual |a - sign*b| against the sum of both error bounds plus slack."""
    with mpmath.workprec(ctx.bits):
        val = abs(a.value - sign * b.value)
        tol = (a.error + b.error + SLACK) * ctx.tolerance_scale
    return Residual(name, val, tol)


def verify_factorization(datum, fan, ctx=DEFAULT) -> list[Residual]:
    X = compute_X(datum, fan, ctx)
    parts = [compute_Xi_faces(datum, fan, i, ctx) for i in range(1, datum.n + 1)]
    Xd = log_X_definition(datum, fan, ctx)
    return [agreement("log X = sum_i log X_i", X, esum(parts), ctx=ctx),
            agreement("log X (xi route) = log X (zeta' route)", X, Xd, ctx=ctx)]


def verify_two_path(datum, fan, i: int, h: int, ctx=DEFAULT) -> Residual:
    a = compute_Xi_faces(datum, fan, i, ctx)
    b = compute_Xi_upper(datum, fan, i, h, ctx)
    return agreement(f"X_{i}: faces route = upper route (h={h})", a, b, ctx=ctx)


def verify_relation(datum, fan, i: int, j: int, ctx=DEFAULT, h: int | None = None) -> list[Residual]:
    """log X_i(mu_j C) = log X_i(C) if i = j, -log X_i(C) otherwise."""
    n = datum.n
    other = datum.mu_j_class(j)
    base = compute_Xi_faces(datum, fan, i, ctx)
    moved = compute_Xi_faces(other, fan, i, ctx)
    sign = 1 if i == j else -1
    out = [agreement(f"X_{i}(mu_{j} C) vs X_{i}(C)", moved, base, sign, ctx)]
    if h is None:
        h = next(k for k in range(1, n + 1) if k != j)
    up = compute_Xi_upper(other, fan, i, h, ctx)
    out.append(agreement(f"X_{i}(mu_{j} C) upper route (h={h}) vs X_{i}(C)", up, base, sign, ctx))
    if i == j:
        # reduction: X_i(mu C) = X_i(C)^((-1)^(n-1)), together with the i != j cases
        flip = compute_Xi_faces(datum.mu_class(), fan, i, ctx)
        out.append(agreement(f"X_{i}(mu C) vs X_{i}(C)^((-1)^(n-1))", flip, base, (-1) ** (n - 1), ctx))
    return out


def verify_mu_flip(datum, fan, ctx=DEFAULT) -> list[Residual]:
    n = datum.n
    mc = datum.mu_class()
    out = [agreement("log X(mu C) = (-1)^(n-1) log X(C)", compute_X(mc, fan, ctx),
                     compute_X(datum, fan, ctx), (-1) ** (n - 1), ctx)]
    for i in range(1, n + 1):
        out.append(agreement(f"log X_{i}(mu C) = (-1)^(n-1) log X_{i}(C)",
                             compute_Xi_faces(mc, fan, i, ctx), compute_Xi_faces(datum, fan, i, ctx),
                             (-1) ** (n - 1), ctx))
    return out


def fan_variants(datum: RayClassDatum, fan: Fan, ks: Sequence[int] = (2, 3)) -> dict[str, Fan]:
    """Other fans for the same fundamental domain, built from cone 0.

    Stellar subdivision at the sum of its first two generators, translation
    by the first unit, and rescaling its first generator by each k in ``ks``.
    """
    sigma = fan.cones[0]
    eps = fan.units[0]
    out = {
        "subdivision": fan.replace(0, subdivide(sigma, sigma.gens[0] + sigma.gens[1])),
        "unit-translation": fan.replace(0, [sigma.scaled(eps)]),
    }
    for k in ks:
        out[f"rescale-{k}"] = _attached(fan, datum).rescale(0, 0, k)
    return out


def verify_independence(datum, fan, i: int, ctx=DEFAULT, ks: Sequence[int] = (2, 3),
                        lam: FieldElement | None = None) -> list[Residual]:
    base = compute_Xi_faces(datum, fan, i, ctx)
    out = []
    for name, alt in fan_variants(datum, fan, ks).items():
        out.append(agreement(f"X_{i} under {name}", compute_Xi_faces(datum, alt, i, ctx), base, ctx=ctx))
    lam = lam if lam is not None else default_lambda(datum.F)
    out.append(agreement(f"X_{i} under z -> ({lam}) z",
                         compute_Xi_faces(datum.with_z(lam * datum.z), fan, i, ctx), base, ctx=ctx))
    return out


def default_lambda(F: NumberField) -> FieldElement:
    """A small totally positive non-rational multiplier."""
    for a in range(1, 50):
        x = F.gen + a
        if is_totally_positive(x):
            return x
    raise InvalidDatum("no totally positive multiplier found")


# -- L-function combination ----------------------------------------------------

@dataclass(frozen=True)
class CharacterTable:
    entries: tuple     # (label, chi value (complex), log value)

    def __post_init__(self):
        for label, chi, _ in self.entries:
            if abs(abs(complex(chi)) - 1) > 1e-12:
                raise ValueError(f"character value at {label} is not of modulus 1")


def lfunction_deriv(table: CharacterTable, mode: str = "X"):
    """L'(0, chi) = -1/2 sum_C chi(C) log X(C) (or log X_i(C))."""
    if mode not in ("X", "X_i"):
        raise ValueError("mode must be 'X' or 'X_i'")
    if not table.entries:
        raise EmptyTable("no classes in the character table")
    total = sum(complex(chi) * complex(float(v) if not isinstance(v, complex) else v)
                for _, chi, v in table.entries)
    total = -total / 2
    return total.real if total.imag == 0 else total


# -- report --------------------------------------------------------------------

@dataclass
class InvariantReport:
    zeta0: Fraction
    zeta_deriv0: Estimate
    log_X: Estimate
    log_X_definition: Estimate
    log_Xi: dict            # (route, place, h) -> Estimate
    residuals: list
    ledger: list
    xi0: Fraction = Fraction(0)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals)

    def to_json(self) -> dict:
        def est(e: Estimate) -> dict:
            return {"value": mpmath.nstr(e.value, 25), "error": mpmath.nstr(e.error, 4)}

        return {
            "zeta_at_0": str(self.zeta0),
            "zeta_deriv_at_0": est(self.zeta_deriv0),
            "log_X": est(self.log_X),
            "log_X_from_zeta_derivatives": est(self.log_X_definition),
            "xi_at_0": str(self.xi0),
            "log_X_i": [{"route": r, "place": i, "h": h, **est(v)}
                        for (r, i, h), v in sorted(self.log_Xi.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0))],
            "residuals": [r.to_json() for r in self.residuals],
            "ledger": [e.to_json() for e in self.ledger],
            "status": "PASSED" if self.passed else "FAILED",
            **self.extra,
        }


def compute_report(datum: RayClassDatum, fan: Fan, ctx: PrecisionContext = DEFAULT) -> InvariantReport:
    n = datum.n
    ledger = zeta_terms(fan, datum)
    z0 = partial_zeta_at0(datum, fan)
    zd = partial_zeta_deriv0(datum, fan, ctx)
    X = compute_X(datum, fan, ctx)
    Xd = log_X_definition(datum, fan, ctx)
    logs = {}
    for i in range(1, n + 1):
        logs[("faces", i, None)] = compute_Xi_faces(datum, fan, i, ctx)
        for h in range(1, n + 1):
            logs[("upper", i, h)] = compute_Xi_upper(datum, fan, i, h, ctx)
    res = [agreement("log X = sum_i log X_i", X, esum(logs[("faces", i, None)] for i in range(1, n + 1)), ctx=ctx),
           agreement("log X (xi route) = log X (zeta' route)", X, Xd, ctx=ctx)]
    for i in range(1, n + 1):
        for h in range(1, n + 1):
            res.append(agreement(f"X_{i}: faces route = upper route (h={h})",
                                 logs[("faces", i, None)], logs[("upper", i, h)], ctx=ctx))
    return InvariantReport(z0, zd, X, Xd, logs, res, ledger)
