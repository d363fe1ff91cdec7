"""Seeded randomized and oracle suites shared by the CLI and the test-suite.

Every suite returns a ``SuiteResult``; exact suites count failures, numerical
ones also record the largest residual seen.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dfield
from fractions import Fraction

import mpmath

from . import _linalg as la
from . import barnes
from .cones import (
    Cone,
    SyntheticSpace,
    cone_make,
    cocycle_residual,
    faces,
    is_generic,
    prism_residual,
    sample_totally_positive,
    upper_reciprocity_residual,
)
from .errors import DependentGenerators, EqualHeights, ZeroCoefficient
from .precision import DEFAULT, PrecisionContext


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: int = 0
    max_residual: float = 0.0
    tolerance: float = 0.0
    examples: list = dfield(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.trials > 0 and self.failures == 0

    def record(self, ok: bool, residual=0.0, detail=None):
        self.trials += 1
        self.max_residual = max(self.max_residual, float(residual))
        if not ok:
            self.failures += 1
            if len(self.examples) < 5:
                self.examples.append(detail)

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "failures": self.failures,
                "max_residual": f"{self.max_residual:.3e}", "tolerance": f"{self.tolerance:.1e}",
                "passed": self.passed, "examples": [str(e) for e in self.examples]}


# -- oracles -------------------------------------------------------------------

def lerch_oracle(ctx: PrecisionContext = DEFAULT, tol: float = 1e-10) -> SuiteResult:
    """zeta_1'(0, x, (1)) against log Gamma(x) - log(2 pi)/2 on x = 0.1, ..., 1.9."""
    res = SuiteResult("lerch", tolerance=tol)
    for k in range(1, 20):
        x = Fraction(k, 10)
        got = barnes.barnes_zeta_deriv0(x, (1,), ctx)
        with mpmath.workprec(ctx.bits):
            want = mpmath.loggamma(barnes._mpf(x)) - mpmath.log(2 * mpmath.pi) / 2
            r = abs(got.value - want)
        res.record(r <= tol and r <= got.error + mpmath.mpf(tol), r, x)
    return res


def sine_oracle(seed: int, count: int = 50, ctx: PrecisionContext = DEFAULT,
                tol: float = 1e-10) -> SuiteResult:
    """S_1(z, (w)) against 2 sin(pi z / w) for random rational 0 < z < w."""
    rng = random.Random(seed)
    res = SuiteResult("sine", tolerance=tol)
    for _ in range(count):
        w = Fraction(rng.randint(1, 40), rng.randint(1, 12))
        z = w * Fraction(rng.randint(1, 99), 100)
        got = barnes.multiple_sine(z, (w,), ctx)
        with mpmath.workprec(ctx.bits):
            want = 2 * mpmath.sin(mpmath.pi * barnes._mpf(z / w))
            r = abs(got.value - want)
        res.record(r <= tol, r, (z, w))
    return res


# -- closed forms at s = 0 -----------------------------------------------------

def _random_omega(rng, d, m):
    return tuple(tuple(Fraction(rng.randint(1, 30), rng.randint(1, 10)) for _ in range(m))
                 for _ in range(d))


def _random_coords(rng, d):
    while True:
        x = tuple(Fraction(rng.randint(0, 12), 12) for _ in range(d))
        if any(v != 0 for v in x) and any(v != 1 for v in x):
            return x


def xi_zero_trials(seed: int, count: int = 200) -> SuiteResult:
    """xi_{m,d}(0) = 0 in exact arithmetic, d, m <= 3."""
    rng = random.Random(seed)
    res = SuiteResult("xi(0) = 0")
    for _ in range(count):
        d, m = rng.randint(1, 3), rng.randint(1, 3)
        om = _random_omega(rng, d, m)
        x = _random_coords(rng, d)
        v = barnes.xi_at0(x, om)
        res.record(v == 0, abs(v), (x, om))
    return res


def _split(x, om, j, N):
    """Data for sum_{k<N} zeta(s, z + k w_j, omega with w_j -> N w_j)."""
    om2 = tuple(tuple(N * c for c in w) if i == j else w for i, w in enumerate(om))
    pts = [tuple((v + k) / N if i == j else v for i, v in enumerate(x)) for k in range(N)]
    return om2, pts


def distribution_trials(seed: int, count: int = 100, deriv_count: int = 12,
                        ctx: PrecisionContext = DEFAULT, tol: float = 1e-8) -> SuiteResult:
    """The distribution relation, exactly at s = 0 and in the derivative at 0."""
    rng = random.Random(seed)
    res = SuiteResult("distribution", tolerance=tol)
    for t in range(count):
        d, m = rng.randint(1, 3), rng.randint(1, 3)
        N = rng.choice((2, 3))
        om = _random_omega(rng, d, m)
        x = tuple(Fraction(rng.randint(1, 12), 12) for _ in range(d))
        j = rng.randrange(d)
        om2, pts = _split(x, om, j, N)
        lhs = barnes.shintani_zeta_at0(x, om)
        rhs = sum((barnes.shintani_zeta_at0(p, om2) for p in pts), Fraction(0))
        res.record(lhs == rhs, abs(lhs - rhs), ("s=0", x, om, j, N))
        if t < deriv_count:
            a = barnes.shintani_zeta_deriv0(x, om, ctx)
            b = [barnes.shintani_zeta_deriv0(p, om2, ctx) for p in pts]
            with mpmath.workprec(ctx.bits):
                r = abs(a.value - sum(e.value for e in b))
            res.record(r <= tol, r, ("derivative", x, om, j, N))
    return res


# -- combinatorial identities --------------------------------------------------

def _vec(rng, n, h, lo=-6, hi=6):
    return tuple(Fraction(rng.randint(1, hi)) if i == h - 1 else Fraction(rng.randint(lo, hi))
                 for i in range(n))


def _generic_point(rng, vectors, n, h):
    space = SyntheticSpace(n)
    while True:
        x = tuple(Fraction(rng.randint(-60, 60), rng.randint(1, 7)) for _ in range(n))
        if x[h - 1] <= 0:
            continue
        if is_generic(x, vectors, space):
            return x


def _nonvertical(vectors, n, h) -> bool:
    """e_h lies in no span of n-1 or fewer of ``vectors``.

    Automatic for field elements (e_h is irrational); synthetic integer data
    must be filtered, since otherwise x - t e_h can stay on a face for all t.
    """
    e = tuple(Fraction(int(i == h - 1)) for i in range(n))
    for r in range(1, n):
        for idx in itertools.combinations(range(len(vectors)), r):
            cols = [vectors[i] for i in idx]
            if la.rank(cols) == r and la.solve_columns(cols, e) is not None:
                return False
    return True


def _face_point(rng, vectors, n, h):
    """A point on the span of a random subset of ``vectors`` (often not generic)."""
    if rng.random() < 0.3:
        return _generic_point(rng, vectors, n, h)
    while True:
        k = rng.randint(1, len(vectors))
        idx = rng.sample(range(len(vectors)), k)
        x = tuple(sum((Fraction(rng.randint(0, 4)) * vectors[i][c] for i in idx), Fraction(0))
                  for c in range(n))
        if x[h - 1] > 0:
            return x


def cocycle_trials(seed: int, n: int, count: int = 10_000) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"cocycle n={n}")
    for _ in range(count):
        h = rng.randint(1, n)
        vecs = [_vec(rng, n, h) for _ in range(n + 1)]
        x = _generic_point(rng, vecs, n, h)
        r = cocycle_residual(vecs, x, h, SyntheticSpace(n))
        res.record(r == 0, abs(r), (vecs, x, h))
    return res


def prism_trials(seed: int, n: int, count: int = 10_000, closure: str | None = None) -> SuiteResult:
    rng = random.Random(seed)
    label = "prism" if closure is None else f"prism-{closure}-closure"
    res = SuiteResult(f"{label} n={n}")
    space = SyntheticSpace(n)
    while res.trials < count:
        h = rng.randint(1, n)
        omega = [_vec(rng, n, h) for _ in range(n)]
        eta = [_vec(rng, n, h) for _ in range(n)]
        if closure is not None and not _nonvertical(omega + eta, n, h):
            continue
        if closure is None:
            x = _generic_point(rng, omega + eta, n, h)
        else:
            x = _face_point(rng, omega + eta, n, h)
        r = prism_residual(omega, eta, x, h, closure, space)
        res.record(r == 0, abs(r), (omega, eta, x, h))
    return res


def reciprocity_trials(seed: int, n: int, count: int = 10_000) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"upper reciprocity n={n}")
    space = SyntheticSpace(n)
    while res.trials < count:
        h = rng.randint(1, n)
        try:
            sigma = cone_make([_vec(rng, n, h) for _ in range(n)], h=h, space=space)
            tau = rng.choice(faces(sigma))
            r = upper_reciprocity_residual(sigma, tau, h)
        except (DependentGenerators, EqualHeights, ZeroCoefficient):
            continue
        res.record(r == 0, abs(r), (sigma, tau, h))
    return res


def combinatorics(seed: int, count: int = 10_000, dims=(2, 3)) -> list[SuiteResult]:
    out = []
    for n in dims:
        s = seed + 1000 * n
        out.append(cocycle_trials(s, n, count))
        out.append(prism_trials(s + 1, n, count))
        # closure variant: half the trials from above, half from below
        up = prism_trials(s + 2, n, count - count // 2, "upper")
        low = prism_trials(s + 3, n, count // 2, "lower")
        merged = SuiteResult(f"prism-closure n={n}", up.trials + low.trials,
                             up.failures + low.failures, max(up.max_residual, low.max_residual),
                             examples=up.examples + low.examples)
        out.append(merged)
        out.append(reciprocity_trials(s + 4, n, count))
    return out


# -- fan cover -----------------------------------------------------------------

def cover_trials(fan, seed: int, count: int = 10_000) -> tuple[SuiteResult, SuiteResult]:
    """Each sample lies in exactly one unit translate of a cone, and of an upper closure."""
    F = fan.space.F
    cov = SuiteResult("cover")
    ucl = SuiteResult("upper-closure partition")
    for x in sample_totally_positive(F, count, seed, fan.units):
        hits = fan.locate(x)
        cov.record(len(hits) == 1, abs(len(hits) - 1), (x, hits))
        uh = fan.locate_ucl(x)
        ucl.record(len(uh) == 1, abs(len(uh) - 1), (x, uh))
    return cov, ucl
