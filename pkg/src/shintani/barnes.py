"""Barnes and Shintani multiple zeta functions near s = 0, and multiple sines.

Notation: for positive reals omega = (w_1, ..., w_d) and z > 0,

    zeta_d(s, z, omega) = sum_{k in N^d} (z + k . omega)^(-s).

Values at s = 0 have a closed form in Bernoulli polynomials.  Derivatives
at s = 0 are computed by the ladder

    zeta_d(s, z, omega) = zeta_{d-1}(s, z, omega[k]) + zeta_d(s, z + w_k, omega)

which pushes z past ``shift_ratio * max(omega)``, followed by a
d-dimensional Euler-Maclaurin expansion whose remainder is bounded
rigorously.  Everything analytic in s is differentiated symbolically, so no
finite differences appear anywhere.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .errors import BoundaryPoint, NotConvergent, OrderOverflow, PrecisionExhausted
from .precision import DEFAULT, Estimate, PrecisionContext

MAX_BERNOULLI = 64


# -- Bernoulli numbers and polynomials -----------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2."""
    if k == 0:
        return Fraction(1)
    # sum_{j<=k} C(k+1, j) B_j = 0
    acc = sum((math.comb(k + 1, j) * bernoulli_number(j) for j in range(k)), Fraction(0))
    return -acc / (k + 1)


@lru_cache(maxsize=None)
def _bernoulli_coeffs(l: int) -> tuple[Fraction, ...]:
    """Coefficients of B_l(x), constant term first."""
    return tuple(math.comb(l, k) * bernoulli_number(l - k) for k in range(l + 1))


def bernoulli_poly(l: int, x, max_order: int = MAX_BERNOULLI):
    """B_l(x); exact for rational x."""
    if l < 0:
        raise ValueError("order must be non-negative")
    if l > max_order:
        raise OrderOverflow(f"Bernoulli order {l} exceeds the configured maximum {max_order}")
    coeffs = _bernoulli_coeffs(l)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        acc = Fraction(0)
    elif isinstance(x, str):
        x = Fraction(x)
        acc = Fraction(0)
    else:
        x = mpmath.mpf(x)
        acc = mpmath.mpf(0)
        coeffs = [_mpf(c) for c in coeffs]
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# -- small helpers -------------------------------------------------------------

def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return _mpf(Fraction(x))
    return mpmath.mpf(x)


def _compositions(total: int, parts: int):
    """Tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class OmegaTuple:
    """Positive periods w_1..w_d of a Barnes zeta function."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("omega must be non-empty")
        if any(v <= 0 for v in self.values):
            raise ValueError("omega entries must be positive")

    @property
    def total(self):
        return sum(self.values)


@dataclass(frozen=True)
class BarycentricPoint:
    """z = sum x_k w_k with exact coefficients x_k."""

    coords: tuple

    def value(self, omega: Sequence):
        return sum((_as_num(x) * w for x, w in zip(self.coords, omega)), type(omega[0])(0)) \
            if all(isinstance(w, Fraction) for w in omega) else \
            sum((_mpf(x) * _mpf(w) for x, w in zip(self.coords, omega)), mpmath.mpf(0))

    def reflected(self) -> "BarycentricPoint":
        """Coefficients 1 - x_k, i.e. the point |omega| - z."""
        return BarycentricPoint(tuple(1 - Fraction(x) for x in self.coords))


def _as_num(x):
    return Fraction(x) if isinstance(x, (int, str, Fraction)) else x


# -- Euler-Maclaurin kernel ----------------------------------------------------

@lru_cache(maxsize=None)
def _g_at_zero(Q: int, j: int) -> tuple[Fraction, Fraction]:
    """(g(0), g'(0)) for g(s) = (-s)_falling(Q) / prod_{t=1}^{j} (s + Q - t).

    g is the s-dependence of an Euler-Maclaurin main term after Q derivatives
    and j integrations of u^(-s).  The removable zero factors are cancelled
    exactly before evaluating at s = 0.
    """
    num = [(Fraction(-u), Fraction(-1)) for u in range(Q)]          # -s - u
    den = [(Fraction(Q - t), Fraction(1)) for t in range(1, j + 1)]  # s + Q - t
    sign = 1
    e = 0
    if Q >= 1:
        num = num[1:]
        sign = -1
        e += 1
    if 1 <= Q <= j:
        den = [f for f in den if f[0] != 0]
        e -= 1
    h0 = Fraction(sign)
    for a, _ in num:
        h0 *= a
    for a, _ in den:
        h0 /= a
    dlog = sum((b / a for a, b in num), Fraction(0)) - sum((b / a for a, b in den), Fraction(0))
    if e == 0:
        return h0, h0 * dlog
    return Fraction(0), h0


def _g_at_s(Q: int, j: int, s):
    val = mpmath.mpf(1)
    for u in range(Q):
        val *= -s - u
    for t in range(1, j + 1):
        val /= s + Q - t
    return val


def _coordinate_options(p: int):
    """Per-coordinate Euler-Maclaurin operators: ('I',), ('D', order, coeff), ('R',)."""
    opts = [("I",), ("D", 0, Fraction(1, 2))]
    for k in range(1, p + 1):
        opts.append(("D", 2 * k - 1, -bernoulli_number(2 * k) / math.factorial(2 * k)))
    return opts


@lru_cache(maxsize=None)
def _order_thresholds(d: int, target: float, cap: int) -> tuple:
    """(p, largest log-ratio for which order p meets ``target``), p ascending."""
    out = []
    lt = math.log(target) - 7
    for p in range(max(1, (d + 2) // 2), cap + 1):
        q = 2 * p
        if q <= d:
            continue
        out.append((p, (lt - math.log(2 * d) - math.lgamma(q) + q * math.log(2 * math.pi)) / q))
    return tuple(out)


def _choose_order(ratio, d: int, target, cap: int) -> int:
    """Smallest p whose leading remainder estimate is far below ``target``."""
    lr = math.log(float(ratio)) + 1e-9
    for p, lim in _order_thresholds(d, float(target), cap):
        if lr < lim:
            return p
    return cap


@lru_cache(maxsize=None)
def _g_at_zero_mpf(Q: int, j: int, bits: int):
    with mpmath.workprec(bits):
        g0, g1 = _g_at_zero(Q, j)
        return _mpf(g0), _mpf(g1)


@lru_cache(maxsize=None)
def _d0_remainder_coeff(M: int, k: int, bits: int):
    """(M-1)! / prod_{t=1}^{k} (M - t)."""
    with mpmath.workprec(bits):
        den = mpmath.mpf(1)
        for t in range(1, k + 1):
            den *= M - t
        return mpmath.factorial(M - 1) / den


@lru_cache(maxsize=4096)
def _em_table(omega: tuple, p: int, bits: int) -> tuple:
    """Coefficients K of z-monomials, aggregated by (j, Q, alpha).

    j counts integral factors, Q the total Bernoulli order and alpha the
    remainder factors (whose K are bounds, hence absolute values).
    """
    q = 2 * p
    with mpmath.workprec(bits):
        W = abs(_mpf(bernoulli_number(q))) / math.factorial(q)
        opts = _coordinate_options(p) + [("R",)]
        agg: dict[tuple[int, int, int], mpmath.mpf] = {(0, 0, 0): mpmath.mpf(1)}
        for w in omega:
            factors = []
            for op in opts:
                if op[0] == "I":
                    factors.append(((1, 0, 0), 1 / w))
                elif op[0] == "D":
                    factors.append(((0, op[1], 0), _mpf(op[2]) * w ** op[1]))
                else:
                    factors.append(((0, 0, 1), W * w ** (q - 1)))
            new: dict = {}
            for (j, Q, a), K in agg.items():
                for (dj, dQ, da), f in factors:
                    key = (j + dj, Q + dQ, a + da)
                    c = K * f
                    new[key] = new.get(key, 0) + (c if key[2] == 0 else abs(c))
            agg = new
        return tuple(agg.items())


def _em(z, omega: tuple, mode: str, s, ctx: PrecisionContext):
    """Euler-Maclaurin evaluation at a far-shifted z.

    mode 'v0' -> value at s = 0 (exact if z and omega are Fractions),
    mode 'd0' -> Estimate of the derivative at s = 0,
    mode 's'  -> Estimate of the value at real s > d.
    """
    d = len(omega)
    if mode == "v0":
        # at s = 0 the remainder vanishes identically once q > d, and only
        # main terms with Q <= j survive; exact for rational input
        exact = isinstance(z, Fraction)
        one = Fraction(1) if exact else mpmath.mpf(1)
        acc = 0 * one
        for combo in itertools.product(_coordinate_options(d // 2 + 1), repeat=d):
            K, j, Q = one, 0, 0
            for w, op in zip(omega, combo):
                if op[0] == "I":
                    K /= w
                    j += 1
                else:
                    K *= (op[2] if exact else _mpf(op[2])) * w ** op[1]
                    Q += op[1]
            g0, _ = _g_at_zero(Q, j)
            if g0:
                acc += K * (g0 if exact else _mpf(g0)) * z ** (j - Q)
        return acc

    wmax = max(omega)
    p = _choose_order(wmax / z, d, mpmath.mpf(ctx.target_error), ctx.max_em_order)
    if mode == "d0":
        # the order guess ignores 1/w_k factors in mixed remainder terms;
        # raise it until the actual bound is comfortably below target
        while True:
            est = _em_d0(z, omega, p, ctx)
            if est.error <= ctx.target_error / 8 or p >= ctx.max_em_order:
                return est
            p += 1
    agg = _em_table(omega, p, ctx.bits)
    q = 2 * p
    logz = mpmath.log(z)
    main = mpmath.mpf(0)
    absum = mpmath.mpf(0)
    bound = mpmath.mpf(0)
    for (j, Q, a), K in agg:
        if a == 0:
            if mode == "d0":
                g0, g1 = _g_at_zero_mpf(Q, j, ctx.bits)
                if not g0 and not g1:
                    continue
                t = K * z ** (j - Q) * (g1 - g0 * logz)
            else:
                t = K * _g_at_s(Q, j, s) * z ** (j - Q - s)
            main += t
            absum += abs(t)
        else:
            M = Q + a * q
            if mode == "d0":
                bound += abs(K) * _d0_remainder_coeff(M, j + a, ctx.bits) * z ** (j + a - M)
            else:
                den = mpmath.mpf(1)
                for t in range(1, j + a + 1):
                    den *= M + s - t
                bound += abs(K) * abs(_g_at_s(M, 0, s)) * z ** (j + a - M - s) / den
    return Estimate(main, bound + absum * ctx.rounding_unit, ctx.bits)


@lru_cache(maxsize=4096)
def _em_d0_poly(omega: tuple, p: int, bits: int):
    """The d0 expansion grouped by power of z.

    Returns (main, rem): main maps e -> (A, B, |A|-bound, |B|-bound) with the
    expansion sum_e z^e (A + B log z); rem maps e -> C with the remainder
    bounded by sum_e C z^e.
    """
    q = 2 * p
    main: dict[int, list] = {}
    rem: dict[int, mpmath.mpf] = {}
    with mpmath.workprec(bits):
        for (j, Q, a), K in _em_table(omega, p, bits):
            if a == 0:
                g0, g1 = _g_at_zero_mpf(Q, j, bits)
                if not g0 and not g1:
                    continue
                e = j - Q
                acc = main.setdefault(e, [mpmath.mpf(0)] * 4)
                acc[0] += K * g1
                acc[1] -= K * g0
                acc[2] += abs(K * g1)
                acc[3] += abs(K * g0)
            else:
                M = Q + a * q
                e = j + a - M
                rem[e] = rem.get(e, 0) + abs(K) * _d0_remainder_coeff(M, j + a, bits)
    return (tuple(sorted((e, tuple(v)) for e, v in main.items())),
            tuple(sorted(rem.items())))


def _powers(z, *lows):
    """z^e for integer e, negative powers built by repeated multiplication."""
    lo = min(0, *lows)
    iz = 1 / z
    neg = [mpmath.mpf(1)]
    for _ in range(-lo):
        neg.append(neg[-1] * iz)
    return lambda e: neg[-e] if e <= 0 else z ** e


def _em_d0(z, omega, p, ctx):
    main, rem = _em_d0_poly(omega, p, ctx.bits)
    logz = mpmath.log(z)
    alog = abs(logz)
    val = mpmath.mpf(0)
    absum = mpmath.mpf(0)
    pw = _powers(z, main[0][0] if main else 0, rem[0][0] if rem else 0)
    for e, (A, B, aA, aB) in main:
        ze = pw(e)
        val += ze * (A + B * logz)
        absum += abs(ze) * (aA + aB * alog)
    bound = mpmath.mpf(0)
    for e, C in rem:
        bound += C * pw(e)
    return Estimate(val, bound + absum * ctx.rounding_unit, ctx.bits)


@lru_cache(maxsize=None)
def _half_log_2pi(bits: int):
    with mpmath.workprec(bits):
        return mpmath.log(2 * mpmath.pi) / 2


def _hurwitz_d0(z, w, ctx):
    """zeta_1'(0, z, w) = log Gamma(z/w) - log(2 pi)/2 - (1/2 - z/w) log w."""
    a = z / w
    v = mpmath.loggamma(a) - _half_log_2pi(ctx.bits) - (mpmath.mpf(1) / 2 - a) * mpmath.log(w)
    return Estimate(v, (abs(v) + 1) * ctx.rounding_unit, ctx.bits)


def _hurwitz_d0_run(z, step, w, count, ctx):
    """sum_{k < count} zeta_1'(0, z + k step, w), as one estimate."""
    a, b = z / w, step / w
    lg = mpmath.mpf(0)
    mag = mpmath.mpf(0)
    for _ in range(count):
        g = mpmath.loggamma(a)
        lg += g
        mag += abs(g)
        a += b
    asum = count * (z / w) + b * count * (count - 1) / 2
    logw = mpmath.log(w)
    v = lg - count * _half_log_2pi(ctx.bits) - (mpmath.mpf(count) / 2 - asum) * logw
    mag += count * (1 + abs(logw)) + abs(asum * logw)
    return Estimate(v, mag * ctx.rounding_unit, ctx.bits)


def _ladder(z, omega: tuple, mode: str, s, ctx: PrecisionContext, inner: bool = False):
    d = len(omega)
    if inner and d == 1 and mode == "d0":
        # the top-level one-dimensional case stays on Euler-Maclaurin so that
        # the log-gamma oracle exercises the engine rather than itself
        return _hurwitz_d0(z, omega[0], ctx)
    if d == 0:
        if mode == "v0":
            return Fraction(1) if isinstance(z, Fraction) else mpmath.mpf(1)
        if mode == "d0":
            v = -mpmath.log(z)
        else:
            v = z ** (-s)
        return Estimate(v, abs(v) * ctx.rounding_unit, ctx.bits)
    k = max(range(d), key=lambda i: omega[i])
    wmax = omega[k]
    rest = omega[:k] + omega[k + 1:]
    total = 0 if mode == "v0" else Estimate(mpmath.mpf(0), bits=ctx.bits)
    limit = ctx.shift_ratio * wmax
    if mode == "d0" and d == 2:
        count = max(0, int(mpmath.ceil((limit - z) / wmax)))
        while z + count * wmax < limit:
            count += 1
        total = _hurwitz_d0_run(z, wmax, rest[0], count, ctx)
        return total + _em(z + count * wmax, omega, mode, s, ctx)
    while z < limit:
        total = total + _ladder(z, rest, mode, s, ctx, inner=True)
        z = z + wmax
    return total + _em(z, omega, mode, s, ctx)


GUARD_BITS = 32


@lru_cache(maxsize=200_000)
def _deriv0_cached(z, omega, ctx):
    # guard bits keep rounding far below the truncation target even when the
    # expansion cancels heavily
    inner = ctx.with_(bits=ctx.bits + GUARD_BITS)
    with mpmath.workprec(inner.bits):
        out = _ladder(z, omega, "d0", None, inner)
    if out.error > ctx.target_error:
        raise PrecisionExhausted(
            f"error bound {mpmath.nstr(out.error, 3)} exceeds the target {ctx.target_error:.1e} "
            f"at {ctx.bits} bits; raise the precision or relax the target")
    return out


def _prep(z, omega, ctx):
    with mpmath.workprec(ctx.bits):
        zz = _mpf(z)
        om = tuple(_mpf(w) for w in (omega.values if isinstance(omega, OmegaTuple) else omega))
    if zz <= 0:
        raise ValueError("z must be positive")
    if not om or any(w <= 0 for w in om):
        raise ValueError("omega entries must be positive")
    return zz, om


# -- public Barnes zeta API ----------------------------------------------------

def barnes_zeta_deriv0(z, omega, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """d/ds zeta_d(s, z, omega) at s = 0, with a rigorous error bound."""
    zz, om = _prep(z, omega, ctx)
    return _deriv0_cached(zz, om, ctx)


def barnes_zeta_direct(s, z, omega, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """zeta_d(s, z, omega) for real s > d, with an error bound."""
    d = len(omega.values if isinstance(omega, OmegaTuple) else omega)
    with mpmath.workprec(ctx.bits):
        ss = _mpf(s)
    if ss <= d:
        raise NotConvergent(f"the series converges only for s > {d}, got s = {s}")
    zz, om = _prep(z, omega, ctx)
    with mpmath.workprec(ctx.bits):
        return _ladder(zz, om, "s", ss, ctx)


def barnes_zeta_at0_ladder(z, omega):
    """zeta_d(0, z, omega) through the ladder; exact for rational input."""
    if all(isinstance(v, (int, Fraction)) for v in (z, *omega)):
        zz = Fraction(z)
        om = tuple(Fraction(w) for w in omega)
        return _ladder(zz, om, "v0", None, DEFAULT)
    zz, om = _prep(z, omega, DEFAULT)
    with mpmath.workprec(DEFAULT.bits):
        return _ladder(zz, om, "v0", None, DEFAULT)


def _bernoulli_product(l, x):
    acc = Fraction(1)
    for lk, xk in zip(l, x):
        acc *= bernoulli_poly(lk, Fraction(xk)) / math.factorial(lk)
    return acc


def barnes_zeta_at0(point, omega):
    """Closed form of zeta_d(0, z, omega) from barycentric coordinates of z."""
    x = point.coords if isinstance(point, BarycentricPoint) else tuple(point)
    om = tuple(omega.values if isinstance(omega, OmegaTuple) else omega)
    d = len(om)
    if len(x) != d:
        raise ValueError("coordinate count does not match omega")
    exact = all(isinstance(w, (int, Fraction)) for w in om)
    om = tuple(Fraction(w) for w in om) if exact else tuple(_mpf(w) for w in om)
    total = Fraction(0) if exact else mpmath.mpf(0)
    for l in _compositions(d, d):
        term = _bernoulli_product(l, x)
        if term == 0:
            continue
        w = Fraction(1) if exact else mpmath.mpf(1)
        for lk, wk in zip(l, om):
            w *= wk ** (lk - 1)
        total += w * (term if exact else _mpf(term))
    return total if d % 2 == 0 else -total


# -- Shintani (m-dimensional) zeta at s = 0 ------------------------------------

def _is_field_tuple(omega) -> bool:
    return hasattr(omega[0], "field")


def _embedding_matrix(omega, ctx):
    """Rows k, columns i: omega_k^(i) as mpf."""
    if _is_field_tuple(omega):
        return [list(w.embeddings(ctx.bits)) for w in omega]
    return [[_mpf(c) for c in w] for w in omega]


def shintani_zeta_at0(point, omega):
    """zeta_{m,d}(0, z, omega) from barycentric coordinates of z.

    ``omega`` is a tuple of FieldElements (exact result) or of real m-vectors.
    """
    x = point.coords if isinstance(point, BarycentricPoint) else tuple(point)
    d = len(omega)
    if _is_field_tuple(omega):
        F = omega[0].field
        m = F.n
        total = Fraction(0)
        for l in _compositions(d, d):
            term = _bernoulli_product(l, x)
            if term == 0:
                continue
            prod = F.one
            for lk, wk in zip(l, omega):
                prod = prod * wk ** (lk - 1)
            total += prod.trace() * term
        return total * (-1) ** d / m
    m = len(omega[0])
    exact = all(isinstance(c, (int, Fraction)) for w in omega for c in w)
    total = Fraction(0) if exact else mpmath.mpf(0)
    for i in range(m):
        col = [w[i] for w in omega]
        total += barnes_zeta_at0(x, col)
    return total / m


# -- correction integrals C_l --------------------------------------------------

def _pair_integral(a, b, e, ctx):
    """int_0^1 (prod (a_k + b_k u)^e_k - prod a_k^e_k) du / u by composite Gauss-Legendre."""
    base = mpmath.mpf(1)
    for ak, ek in zip(a, e):
        base *= ak ** ek
    scales = [ak / bk for ak, bk, ek in zip(a, b, e) if ek != 0]
    r = min(scales + [mpmath.mpf(1)])
    pts = [mpmath.mpf(0)]
    edge = r / 1024 if r < 1 else mpmath.mpf(1) / 1024
    t = edge
    while t < 1:
        pts.append(t)
        t *= 2
    pts.append(mpmath.mpf(1))

    def f(u):
        with mpmath.extraprec(64):
            prod = mpmath.mpf(1)
            for ak, bk, ek in zip(a, b, e):
                prod *= (ak + bk * u) ** ek
            return (prod - base) / u

    val, err = mpmath.quad(f, pts, method="gauss-legendre", error=True,
                           maxdegree=max(4, int(math.log2(ctx.quad_degree)) + 2))
    return val, err


def c_integral(l: Sequence[int], omega, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """C_l(omega) = sum over ordered pairs of places i != j of the correction integral."""
    l = tuple(int(v) for v in l)
    d = len(omega)
    if len(l) != d or sum(l) != d or min(l) < 0:
        raise ValueError("l must be a d-tuple of non-negative integers summing to d")
    e = tuple(lk - 1 for lk in l)
    if all(v == 0 for v in e):
        return Estimate(mpmath.mpf(0), bits=ctx.bits)
    with mpmath.workprec(ctx.bits):
        rows = _embedding_matrix(omega, ctx)
        m = len(rows[0])
        total = Estimate(mpmath.mpf(0), bits=ctx.bits)
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                a = [rows[k][i] for k in range(d)]
                b = [rows[k][j] for k in range(d)]
                v, err = _pair_integral(a, b, e, ctx)
                total = total + Estimate(v, abs(err) + abs(v) * ctx.rounding_unit, ctx.bits)
        return total


@lru_cache(maxsize=4096)
def _c_table(key, omega, ctx):
    d = len(omega)
    return {l: c_integral(l, omega, ctx) for l in _compositions(d, d)}


def _c_terms(omega, ctx):
    key = tuple(tuple(w.coords) if hasattr(w, "coords") else tuple(w) for w in omega)
    return _c_table(key, tuple(omega), ctx)


def shintani_zeta_deriv0(point, omega, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """d/ds zeta_{m,d}(s, z, omega) at s = 0.

    Sum of the per-place Barnes derivatives plus the correction integrals.
    """
    x = point.coords if isinstance(point, BarycentricPoint) else tuple(point)
    d = len(omega)
    with mpmath.workprec(ctx.bits):
        rows = _embedding_matrix(omega, ctx)
        m = len(rows[0])
        total = Estimate(mpmath.mpf(0), bits=ctx.bits)
        for i in range(m):
            col = tuple(rows[k][i] for k in range(d))
            z = sum((_mpf(Fraction(xk)) * w for xk, w in zip(x, col)), mpmath.mpf(0))
            total = total + barnes_zeta_deriv0(z, col, ctx)
        if m > 1:
            corr = Estimate(mpmath.mpf(0), bits=ctx.bits)
            for l, c in _c_terms(omega, ctx).items():
                bp = _bernoulli_product(l, x)
                if bp:
                    corr = corr + c * _mpf(bp)
            total = total + corr * (mpmath.mpf((-1) ** d) / m)
        return total


# -- xi and multiple sine ------------------------------------------------------

def _check_point(x):
    if any(not (0 <= Fraction(v) <= 1) for v in x):
        raise BoundaryPoint(f"coordinates {x} must lie in [0, 1]")
    if all(Fraction(v) == 0 for v in x) or all(Fraction(v) == 1 for v in x):
        raise BoundaryPoint("z must differ from 0 and |omega|")


def xi_deriv0_real(z, omega, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """xi_d'(0, z, omega) = -zeta_d'(0, z) + (-1)^d zeta_d'(0, |omega| - z) for one place."""
    zz, om = _prep(z, omega, ctx)
    with mpmath.workprec(ctx.bits):
        other = sum(om) - zz
        if other <= 0:
            raise BoundaryPoint("z must be strictly below |omega|")
        a = _deriv0_cached(zz, om, ctx)
        b = _deriv0_cached(other, om, ctx)
        return -a + b * (-1) ** len(om)


def xi_at0(point, omega):
    """xi_{m,d}(0) = -zeta(0, z) + (-1)^d zeta(0, |omega| - z); exact for rational or field data."""
    x = point.coords if isinstance(point, BarycentricPoint) else tuple(point)
    _check_point(x)
    refl = tuple(1 - Fraction(v) for v in x)
    sgn = (-1) ** len(x)
    if not _is_field_tuple(omega) and not isinstance(omega[0], (tuple, list)):
        om = tuple(omega.values if isinstance(omega, OmegaTuple) else omega)
        return -barnes_zeta_at0(x, om) + sgn * barnes_zeta_at0(refl, om)
    return -shintani_zeta_at0(x, omega) + sgn * shintani_zeta_at0(refl, omega)


def xi_value_and_deriv0(point, omega, ctx: PrecisionContext = DEFAULT, mode: str = "joint"):
    """(xi(0), xi'(0)) for the point with barycentric coordinates ``point``.

    ``omega`` may be one real tuple (Barnes case, m = 1) or a tuple of
    m-vectors / FieldElements.  ``mode='joint'`` evaluates the definition
    through the m-dimensional zeta (correction integrals included);
    ``mode='embedding'`` sums the per-place values.  xi(0) is exact and is
    asserted to vanish.
    """
    x = point.coords if isinstance(point, BarycentricPoint) else tuple(point)
    _check_point(x)
    refl = tuple(1 - Fraction(v) for v in x)
    d = len(x)
    sgn = (-1) ** d
    scalar = not _is_field_tuple(omega) and not isinstance(omega[0], (tuple, list))
    if scalar:
        om = tuple(omega.values if isinstance(omega, OmegaTuple) else omega)
        xi0 = -barnes_zeta_at0(x, om) + sgn * barnes_zeta_at0(refl, om)
        with mpmath.workprec(ctx.bits):
            z = sum((_mpf(Fraction(v)) * _mpf(w) for v, w in zip(x, om)), mpmath.mpf(0))
        return xi0, xi_deriv0_real(z, om, ctx)
    xi0 = -shintani_zeta_at0(x, omega) + sgn * shintani_zeta_at0(refl, omega)
    if isinstance(xi0, Fraction) and xi0 != 0:
        raise AssertionError(f"xi(0) = {xi0} is not zero")
    if mode == "joint":
        der = -shintani_zeta_deriv0(x, omega, ctx) + shintani_zeta_deriv0(refl, omega, ctx) * sgn
        return xi0, der
    with mpmath.workprec(ctx.bits):
        rows = _embedding_matrix(omega, ctx)
        total = Estimate(mpmath.mpf(0), bits=ctx.bits)
        for i in range(len(rows[0])):
            col = tuple(rows[k][i] for k in range(d))
            z = sum((_mpf(Fraction(v)) * w for v, w in zip(x, col)), mpmath.mpf(0))
            total = total + xi_deriv0_real(z, col, ctx)
        return xi0, total


def xi_deriv0_place(point, omega, place: int, ctx: PrecisionContext = DEFAULT) -> Estimate:
    """xi_d'(0, z^(i), omega^(i)) for FieldElement data at one real place."""
    x = point.coords if isinstance(point, BarycentricPoint) else tuple(point)
    _check_point(x)
    with mpmath.workprec(ctx.bits):
        col = tuple(w.real(place, ctx.bits) for w in omega)
        z = sum((_mpf(Fraction(v)) * w for v, w in zip(x, col)), mpmath.mpf(0))
        return xi_deriv0_real(z, col, ctx)


def multiple_sine(point, omega, ctx: PrecisionContext = DEFAULT, mode: str = "embedding") -> Estimate:
    """S(z, omega) = exp(xi'(0)).

    ``point`` is a BarycentricPoint or, for a single real omega tuple, the
    real number z itself.  In joint mode the result is compared against the
    product of the per-place sines.
    """
    if not isinstance(point, (BarycentricPoint, tuple, list)):
        with mpmath.workprec(ctx.bits):
            return xi_deriv0_real(point, omega, ctx).exp()
    if mode == "joint" and (_is_field_tuple(omega) or isinstance(omega[0], (tuple, list))):
        _, joint = xi_value_and_deriv0(point, omega, ctx, mode="joint")
        _, per = xi_value_and_deriv0(point, omega, ctx, mode="embedding")
        if abs(joint.value - per.value) > joint.error + per.error + mpmath.mpf(10) ** -30:
            raise AssertionError("joint multiple sine disagrees with the product over places")
        with mpmath.workprec(ctx.bits):
            return joint.exp()
    _, der = xi_value_and_deriv0(point, omega, ctx, mode="embedding")
    with mpmath.workprec(ctx.bits):
        return der.exp()
