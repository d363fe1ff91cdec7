"""Precision settings and error-carrying real values."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import mpmath


@dataclass(frozen=True)
class PrecisionContext:
    """Knobs shared by every numerical routine.

    ``bits`` is the mpmath working precision.  ``target_error`` is the
    absolute error aimed for in each zeta-derivative evaluation.
    ``shift_ratio`` controls how far the ladder pushes z before the
    Euler-Maclaurin expansion: until z >= shift_ratio * max(omega).
    """

    bits: int = 128
    target_error: float = 1e-20
    shift_ratio: int = 30
    max_em_order: int = 40
    quad_degree: int = 64
    quad_max_splits: int = 12
    sign_bits_start: int = 64
    sign_bits_cap: int = 4096
    max_bernoulli: int = 64
    seed: int = 20240607
    tolerance_scale: float = 1.0

    def with_(self, **kw) -> "PrecisionContext":
        return replace(self, **kw)

    def workprec(self):
        return mpmath.workprec(self.bits)

    @property
    def rounding_unit(self) -> mpmath.mpf:
        return mpmath.ldexp(1, -self.bits + 8)


DEFAULT = PrecisionContext()


def _abs(v):
    # plain abs() and unary minus round to the ambient precision
    return v if v >= 0 else mpmath.fneg(v, exact=True)


@dataclass(frozen=True)
class Estimate:
    """A real number known to lie in [value - error, value + error].

    Arithmetic runs at ``bits`` of precision regardless of the ambient
    mpmath setting, so combining estimates never silently drops to 53 bits.
    """

    value: mpmath.mpf
    error: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(0))
    bits: int = 128

    def _b(self, other):
        return max(self.bits, other.bits) if isinstance(other, Estimate) else self.bits

    def __add__(self, other):
        p = self._b(other)
        if isinstance(other, Estimate):
            return Estimate(mpmath.fadd(self.value, other.value, prec=p),
                            mpmath.fadd(self.error, other.error, prec=p, rounding="u"), p)
        return Estimate(mpmath.fadd(self.value, other, prec=p), self.error, p)

    __radd__ = __add__

    def __neg__(self):
        return Estimate(mpmath.fneg(self.value, exact=True), self.error, self.bits)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        p = self._b(c)
        if isinstance(c, Estimate):
            err = mpmath.fadd(mpmath.fmul(_abs(self.value), c.error, prec=p),
                              mpmath.fmul(_abs(c.value), self.error, prec=p), prec=p)
            err = mpmath.fadd(err, mpmath.fmul(self.error, c.error, prec=p), prec=p, rounding="u")
            return Estimate(mpmath.fmul(self.value, c.value, prec=p), err, p)
        return Estimate(mpmath.fmul(self.value, c, prec=p), mpmath.fmul(self.error, _abs(c), prec=p), p)

    __rmul__ = __mul__

    def exp(self) -> "Estimate":
        with mpmath.workprec(self.bits):
            v = mpmath.exp(self.value)
            return Estimate(v, v * (mpmath.exp(self.error) - 1), self.bits)

    def contains(self, x, slack=0) -> bool:
        with mpmath.workprec(self.bits):
            return _abs(self.value - x) <= self.error + slack

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"Estimate({mpmath.nstr(self.value, 20)} +- {mpmath.nstr(self.error, 3)})"


def esum(items) -> Estimate:
    total = Estimate(mpmath.mpf(0))
    for it in items:
        total = total + it
    return total
