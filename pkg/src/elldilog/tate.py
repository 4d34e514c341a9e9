"""p-adic Tate parameter, N-gon component indices, Bernoulli
polynomials and the integrality-sum condition checker.

p-adic numbers are represented as unit * p^val with the unit kept mod
p^M (default M = 30).  Only unramified data is handled natively; for
ramified extensions the caller supplies component indices directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .curves import Curve, INFINITY, Point, PointLike, _val_p

DEFAULT_PRECISION = 30


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B2(x) = x^2 - x + 1/6, B3(x) = x^3 - 3/2 x^2 + 1/2 x."""
    x = Fraction(x)
    if n == 2:
        return x * x - x + Fraction(1, 6)
    if n == 3:
        return x ** 3 - Fraction(3, 2) * x * x + Fraction(1, 2) * x
    raise ValueError("only B2 and B3 are supported")


# -- p-adic arithmetic -----------------------------------------------------

class PrecisionError(ArithmeticError):
    pass


class Padic:
    """unit * p^val with unit mod p^M; val = None encodes zero."""

    __slots__ = ("p", "M", "val", "unit", "mod")

    def __init__(self, p: int, M: int, val: Optional[int], unit: int):
        self.p = p
        self.M = M
        self.mod = p ** M
        if val is None:
            self.val, self.unit = None, 0
            return
        unit %= self.mod
        if unit == 0:
            self.val, self.unit = None, 0
            return
        while unit % p == 0:
            unit //= p
            val += 1
        self.val = val
        self.unit = unit % self.mod

    @classmethod
    def from_rational(cls, r, p: int, M: int = DEFAULT_PRECISION) -> "Padic":
        r = Fraction(r)
        if r == 0:
            return cls(p, M, None, 0)
        v = _val_p(r, p)
        num = r.numerator // p ** max(v, 0) if v > 0 else r.numerator
        den = r.denominator * p ** 0
        if v < 0:
            den //= p ** (-v)
        mod = p ** M
        unit = num * pow(den, -1, mod) % mod
        return cls(p, M, v, unit)

    def is_zero(self) -> bool:
        return self.val is None

    def __add__(self, other: "Padic") -> "Padic":
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        a = self.unit * self.p ** (self.val - v)
        b = other.unit * self.p ** (other.val - v)
        return Padic(self.p, self.M, v, a + b)

    def __neg__(self) -> "Padic":
        if self.is_zero():
            return self
        return Padic(self.p, self.M, self.val, -self.unit)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "Padic":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Padic(self.p, self.M, None, 0)
        return Padic(self.p, self.M, self.val + other.val,
                     self.unit * other.unit)

    def __truediv__(self, other) -> "Padic":
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("p-adic division by zero")
        if self.is_zero():
            return self
        inv = pow(other.unit, -1, self.mod)
        return Padic(self.p, self.M, self.val - other.val, self.unit * inv)

    def _coerce(self, other) -> "Padic":
        if isinstance(other, Padic):
            return other
        return Padic.from_rational(other, self.p, self.M)

    def valuation(self) -> int:
        if self.is_zero():
            raise ValueError("valuation of zero")
        return self.val

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.M})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.M + self.val})"


# -- q-parameter from the j-series ----------------------------------------

def _j_series_coeffs(n_terms: int) -> list:
    """Integer coefficients c_k with j = 1/q + sum_{k>=0} c_k q^k.

    Computed as E4^3 / Delta with exact integer power series.
    """
    n = n_terms + 2
    sigma3 = [0] * n
    for d in range(1, n):
        for m in range(d, n, d):
            sigma3[m] += d ** 3
    e4 = [240 * sigma3[k] for k in range(n)]
    e4[0] = 1
    e4sq = _series_mul(e4, e4, n)
    e4cube = _series_mul(e4sq, e4, n)
    # Delta/q = prod (1-q^j)^24
    dq = [1] + [0] * (n - 1)
    for j in range(1, n):
        factor = [0] * n
        factor[0] = 1
        if j < n:
            factor[j] = -1
        for _ in range(24):
            dq = _series_mul(dq, factor, n)
    inv = _series_inverse(dq, n)
    jq = _series_mul(e4cube, inv, n)  # j*q as a power series in q
    return jq  # j = (1/q) * sum jq[k] q^k, jq[0] = 1


def _series_mul(a, b, n):
    out = [0] * n
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j_ in range(min(n - i, len(b))):
            if b[j_]:
                out[i + j_] += ai * b[j_]
    return out


def _series_inverse(a, n):
    assert a[0] == 1
    inv = [0] * n
    inv[0] = 1
    for k in range(1, n):
        s = 0
        for i in range(1, k + 1):
            if i < len(a) and a[i]:
                s += a[i] * inv[k - i]
        inv[k] = -s
    return inv


def tate_q(C: Curve, p: int, precision: int = DEFAULT_PRECISION) -> Padic:
    """q with v_p(q) = v_p(Delta), inverting j = 1/q + 744 + 196884 q + ...

    Fixed-point iteration q <- (1 + 744 q + ...)/j gains v_p(Delta)
    digits per round.
    """
    info = C.reduction_type(p)
    if info.ngon is None:
        raise ValueError(f"reduction at {p} is not multiplicative")
    N = info.ngon
    n_terms = precision // N + 3
    coeffs = _j_series_coeffs(n_terms)
    j = Padic.from_rational(C.j, p, precision + 2)
    q = Padic.from_rational(1, p, precision + 2) / j
    for _ in range(precision // N + 3):
        acc = Padic.from_rational(0, p, precision + 2)
        qpow = Padic.from_rational(1, p, precision + 2)
        for c in coeffs:
            if c:
                acc = acc + qpow * c
            qpow = qpow * q
        q = acc / j
    if q.valuation() != N:
        raise PrecisionError(
            f"v_p(q) = {q.valuation()} but v_p(Delta) = {N}")
    return q


def delta_series_valuation(q: Padic) -> int:
    """v_p of q * prod_{j>=1} (1-q^j)^24, evaluated term by term."""
    one = Padic.from_rational(1, q.p, q.M)
    acc = one
    qpow = q
    while not qpow.is_zero() and qpow.valuation() < q.M:
        f = one - qpow
        f2 = f * f
        f4 = f2 * f2
        f8 = f4 * f4
        acc = acc * f8 * f8 * f8  # (1-q^j)^24
        qpow = qpow * q
    return (q * acc).valuation()


# -- Tate curve series -----------------------------------------------------

def tate_x(u: Padic, q: Padic) -> Padic:
    """x(u) = sum_j q^j u/(1-q^j u)^2 - 2 sum_{j>=1} j q^j/(1-q^j)."""
    p, M = u.p, u.M
    one = Padic.from_rational(1, p, M)
    N = q.valuation()
    J = M // N + 2
    acc = Padic.from_rational(0, p, M)
    for j in range(-J, J + 1):
        qj = _qpow(q, j)
        t = qj * u
        d = one - t
        acc = acc + (t / (d * d))
    s = Padic.from_rational(0, p, M)
    for j in range(1, J + 1):
        qj = _qpow(q, j)
        s = s + (qj * j) / (one - qj)
    return acc - (s + s)


def tate_y(u: Padic, q: Padic) -> Padic:
    """y(u) = sum_j q^(2j) u^2/(1-q^j u)^3 + sum_{j>=1} j q^j/(1-q^j)."""
    p, M = u.p, u.M
    one = Padic.from_rational(1, p, M)
    N = q.valuation()
    J = M // N + 2
    acc = Padic.from_rational(0, p, M)
    u2 = u * u
    for j in range(-J, J + 1):
        qj = _qpow(q, j)
        t = qj * qj * u2
        d = one - qj * u
        acc = acc + t / (d * d * d)
    s = Padic.from_rational(0, p, M)
    for j in range(1, J + 1):
        qj = _qpow(q, j)
        s = s + (qj * j) / (one - qj)
    return acc + s


def tate_a4(q: Padic, terms: int = None) -> Padic:
    """a4 = -5 sum j^3 q^j/(1-q^j)."""
    p, M = q.p, q.M
    one = Padic.from_rational(1, p, M)
    J = terms or (M // q.valuation() + 2)
    s = Padic.from_rational(0, p, M)
    for j in range(1, J + 1):
        qj = _qpow(q, j)
        s = s + (qj * j ** 3) / (one - qj)
    return s * (-5)


def tate_a6(q: Padic, terms: int = None) -> Padic:
    """a6 = -(1/12) sum (7j^5 + 5j^3) q^j/(1-q^j)."""
    p, M = q.p, q.M
    one = Padic.from_rational(1, p, M)
    J = terms or (M // q.valuation() + 2)
    s = Padic.from_rational(0, p, M)
    for j in range(1, J + 1):
        qj = _qpow(q, j)
        s = s + (qj * (7 * j ** 5 + 5 * j ** 3)) / (one - qj)
    return s / (-12)


def _qpow(q: Padic, j: int) -> Padic:
    one = Padic.from_rational(1, q.p, q.M)
    out = one
    base = q if j >= 0 else one / q
    for _ in range(abs(j)):
        out = out * base
    return out


# -- component index -------------------------------------------------------

def component_index(x_val, y_val, p: int, q: Padic, eN: int,
                    precision: int = DEFAULT_PRECISION) -> int:
    """Component index nu = v_p(u) mod eN for the Tate parameter u of a
    point with coordinates (x, y) on the Tate curve of parameter q.

    x_val, y_val may be Fractions or Padic numbers.  Points with
    v_p(x) < 0 reduce to the smooth locus of component 0.
    """
    N = q.valuation()
    x = x_val if isinstance(x_val, Padic) else \
        Padic.from_rational(x_val, p, precision)
    y = y_val if isinstance(y_val, Padic) else \
        Padic.from_rational(y_val, p, precision)
    if x.is_zero() or x.valuation() < 0:
        return 0
    m = x.valuation()
    if m == 0 or m >= N:
        # unit x can still sit on component 0 (smooth reduction) --
        # component != 0 forces v(x) = min(nu, N - nu) > 0
        return 0
    candidates = sorted({m, N - m})
    for nu in candidates:
        u = _newton_tate(x, q, nu)
        if u is None:
            continue
        yv = tate_y(u, q)
        if _close(yv, y):
            return nu % eN
    raise PrecisionError("component index Newton iteration failed")


def _close(a: Padic, b: Padic, slack: int = 5) -> bool:
    d = a - b
    return d.is_zero() or d.valuation() >= min(a.M, b.M) - slack


def tate_x_prime(u: Padic, q: Padic) -> Padic:
    """x'(u) = sum_j q^j (1 + q^j u)/(1 - q^j u)^3."""
    p, M = u.p, u.M
    one = Padic.from_rational(1, p, M)
    J = M // q.valuation() + 2
    acc = Padic.from_rational(0, p, M)
    for j in range(-J, J + 1):
        qj = _qpow(q, j)
        t = qj * u
        d = one - t
        acc = acc + qj * (one + t) / (d * d * d)
    return acc


def _newton_tate(x: Padic, q: Padic, nu: int) -> Optional[Padic]:
    """Solve tate_x(u) = x with v(u) = nu by Newton iteration.

    Leading behaviour for v(u) = nu in (0, N): the j = 0 term gives
    x ~ u, the j = -1 term gives x ~ q/u; the smaller valuation wins.
    """
    N = q.valuation()
    u = x if nu <= N - nu else q / x
    for _ in range(x.M + 10):
        fx = tate_x(u, q) - x
        if fx.is_zero() or fx.valuation() >= x.M - 3:
            return u
        d = tate_x_prime(u, q)
        if d.is_zero():
            return None
        u = u - fx / d
        if u.is_zero() or u.valuation() != nu:
            return None
    return None


# -- integrality sums ------------------------------------------------------

@dataclass
class ComponentProfile:
    eN: int
    degrees: Dict[int, int]  # nu in [0, eN) -> degree

    def normalized(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for nu, d in self.degrees.items():
            out[nu % self.eN] = out.get(nu % self.eN, 0) + d
        return out


def integrality_sum(profile: ComponentProfile) -> Fraction:
    """sum over nu in Z/eN of d(nu) * B3(nu / eN), representatives in [0, eN)."""
    total = Fraction(0)
    for nu, d in profile.normalized().items():
        total += d * bernoulli_poly(3, Fraction(nu, profile.eN))
    return total


@dataclass
class ConditionCReport:
    p: int
    eN: int
    profile: Dict[int, int]
    value: Fraction
    passed: bool
    note: str = ""


def condition_c(D, C: Curve, p: int, e: int = 1,
                overrides: Optional[Dict] = None,
                precision: int = DEFAULT_PRECISION) -> ConditionCReport:
    """Integrality condition at a multiplicative prime p.

    Builds the component profile of the divisor (weight = coefficient)
    and requires the B3 sum to vanish exactly.  `overrides` maps support
    points to component indices for ramified or otherwise precomputed
    data.
    """
    info = C.reduction_type(p)
    if info.ngon is None:
        raise ValueError(f"reduction at {p} is not multiplicative")
    N = info.ngon
    eN = e * N
    if eN == 1:
        return ConditionCReport(p, 1, {0: D.degree()}, Fraction(0), True,
                                "one component: sum is empty")
    q = tate_q(C, p, precision)
    degrees: Dict[int, int] = {}
    for P, n in D.items():
        if P is INFINITY:
            nu = 0
        elif overrides and P in overrides:
            nu = overrides[P] % eN
        else:
            if e != 1:
                raise ValueError(
                    "ramified extension: supply component indices explicitly")
            nu = component_index(P.x, P.y, p, q, eN, precision)
        degrees[nu] = degrees.get(nu, 0) + n
    profile = ComponentProfile(eN, degrees)
    val = integrality_sum(profile)
    return ConditionCReport(p, eN, profile.normalized(), val, val == 0)
