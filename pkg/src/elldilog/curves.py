"""Exact arithmetic on elliptic curves in long Weierstrass form over Q.

Everything in this module is exact rational arithmetic (fractions.Fraction);
no floats.  The model is assumed minimal at every prime of interest --
Tate's algorithm is not run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rat = Union[int, Fraction]


class _Infinity:
    """The point at infinity (group identity).  Singleton."""

    __slots__ = ()

    def __repr__(self):
        return "Infinity"


INFINITY = _Infinity()


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __repr__(self):
        return f"({self.x}, {self.y})"


PointLike = Union[Point, _Infinity]


def _frac(v: Rat) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


class Curve:
    """y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6 over Q."""

    def __init__(self, a1: Rat, a2: Rat, a3: Rat, a4: Rat, a6: Rat):
        self.a1 = _frac(a1)
        self.a2 = _frac(a2)
        self.a3 = _frac(a3)
        self.a4 = _frac(a4)
        self.a6 = _frac(a6)
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4
                   + a2 * a3 * a3 - a4 * a4)
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = (-self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6)
        self.disc = (-self.b2 * self.b2 * self.b8 - 8 * self.b4 ** 3
                     - 27 * self.b6 * self.b6 + 9 * self.b2 * self.b4 * self.b6)
        if self.disc == 0:
            raise ValueError("singular cubic: discriminant is zero")

    @property
    def j(self) -> Fraction:
        return self.c4 ** 3 / self.disc

    def __eq__(self, other):
        return (isinstance(other, Curve) and
                (self.a1, self.a2, self.a3, self.a4, self.a6) ==
                (other.a1, other.a2, other.a3, other.a4, other.a6))

    def __hash__(self):
        return hash((self.a1, self.a2, self.a3, self.a4, self.a6))

    def __repr__(self):
        return (f"Curve({self.a1}, {self.a2}, {self.a3}, "
                f"{self.a4}, {self.a6})")

    # -- group law ---------------------------------------------------------

    def on_curve(self, P: PointLike) -> bool:
        if P is INFINITY:
            return True
        x, y = P.x, P.y
        return (y * y + self.a1 * x * y + self.a3 * y
                == x ** 3 + self.a2 * x * x + self.a4 * x + self.a6)

    def point(self, x: Rat, y: Rat) -> Point:
        P = Point(_frac(x), _frac(y))
        if not self.on_curve(P):
            raise ValueError(f"point {P} not on {self}")
        return P

    def neg(self, P: PointLike) -> PointLike:
        if P is INFINITY:
            return INFINITY
        return Point(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: PointLike, Q: PointLike) -> PointLike:
        if not (self.on_curve(P) and self.on_curve(Q)):
            raise ValueError("add: input not on curve")
        if P is INFINITY:
            return Q
        if Q is INFINITY:
            return P
        a1, a2, a3, a4 = self.a1, self.a2, self.a3, self.a4
        if P.x == Q.x:
            if P.y + Q.y + a1 * Q.x + a3 == 0:
                return INFINITY
            # tangent line
            lam = ((3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y)
                   / (2 * P.y + a1 * P.x + a3))
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        nu = P.y - lam * P.x
        x3 = lam * lam + a1 * lam - a2 - P.x - Q.x
        y3 = -(lam + a1) * x3 - nu - a3
        return Point(x3, y3)

    def scalar_mul(self, k: int, P: PointLike) -> PointLike:
        if not self.on_curve(P):
            raise ValueError("scalar_mul: input not on curve")
        if k < 0:
            return self.neg(self.scalar_mul(-k, P))
        R: PointLike = INFINITY
        Q = P
        while k:
            if k & 1:
                R = self.add(R, Q)
            k >>= 1
            if k:
                Q = self.add(Q, Q)
        return R

    # -- reduction data ----------------------------------------------------

    def reduction_type(self, p: int) -> "ReductionInfo":
        if p < 2 or not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        vD = _val_p(self.disc, p)
        if vD == 0:
            return ReductionInfo(p, "good", None)
        if self.c4 == 0 or _val_p(self.c4, p) > 0:
            return ReductionInfo(p, "additive", None)
        # multiplicative: split iff the tangent cone at the node factors
        # into two distinct rational slopes mod p
        split = self._node_split(p)
        kind = "split-multiplicative" if split else "nonsplit-multiplicative"
        return ReductionInfo(p, kind, vD)

    def _node_split(self, p: int) -> bool:
        # locate the singular point of the reduced curve mod p, then check
        # whether t^2 + a1*t - (3*x0 + a2) has two distinct roots in F_p
        a1, a2, a3, a4, a6 = (int(self.a1) % p, int(self.a2) % p,
                              int(self.a3) % p, int(self.a4) % p,
                              int(self.a6) % p)
        for x0 in range(p):
            for y0 in range(p):
                f = (y0 * y0 + a1 * x0 * y0 + a3 * y0
                     - x0 ** 3 - a2 * x0 * x0 - a4 * x0 - a6) % p
                fx = (a1 * y0 - 3 * x0 * x0 - 2 * a2 * x0 - a4) % p
                fy = (2 * y0 + a1 * x0 + a3) % p
                if f == 0 and fx == 0 and fy == 0:
                    roots = {t for t in range(p)
                             if (t * t + a1 * t - (3 * x0 + a2)) % p == 0}
                    return len(roots) == 2
        raise ArithmeticError(f"no singular point mod {p} found")

    def count_ap(self, p: int) -> int:
        """Trace of Frobenius a_p = p + 1 - #E(F_p) at good p; +-1/0 at bad p."""
        info = self.reduction_type(p)
        if info.kind == "split-multiplicative":
            return 1
        if info.kind == "nonsplit-multiplicative":
            return -1
        if info.kind == "additive":
            return 0
        a1, a2, a3, a4, a6 = (int(self.a1) % p, int(self.a2) % p,
                              int(self.a3) % p, int(self.a4) % p,
                              int(self.a6) % p)
        count = 1  # infinity
        for x in range(p):
            rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
            b = (a1 * x + a3) % p
            if p == 2:
                count += sum((y * y + b * y - rhs) % p == 0 for y in range(p))
                continue
            # complete the square: (2y + b)^2 = b^2 + 4*rhs
            d = (b * b + 4 * rhs) % p
            if d == 0:
                count += 1
            else:
                count += 1 + _legendre(d, p)
        return p + 1 - count

    # -- short form --------------------------------------------------------

    def short_form(self):
        """(g2, g3, to_short, from_short) for Y^2 = 4X^3 - g2*X - g3.

        X = x + b2/12, Y = 2y + a1*x + a3.  The change of variables is an
        exact bijection on affine points.
        """
        g2 = self.c4 / 12
        g3 = self.c6 / 216
        b2, a1, a3 = self.b2, self.a1, self.a3

        def to_short(P: PointLike):
            if P is INFINITY:
                return INFINITY
            return (P.x + b2 / 12, 2 * P.y + a1 * P.x + a3)

        def from_short(XY) -> PointLike:
            if XY is INFINITY:
                return INFINITY
            X, Y = XY
            x = X - b2 / 12
            y = (Y - a1 * x - a3) / 2
            return Point(_frac(x), _frac(y))

        return g2, g3, to_short, from_short


@dataclass(frozen=True)
class ReductionInfo:
    p: int
    kind: str  # good | split-multiplicative | nonsplit-multiplicative | additive
    ngon: int | None  # v_p(disc) when multiplicative


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _val_p(r: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if r == 0:
        raise ValueError("valuation of zero")
    v = 0
    n = r.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = r.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def to_short_form(C: Curve):
    """(g2, g3, to_short, from_short) for Y^2 = 4X^3 - g2*X - g3."""
    return C.short_form()


def curve_37a() -> Curve:
    """y^2 - y = x^3 - x: discriminant 37, rank one, generator (0,0)."""
    return Curve(0, 0, -1, -1, 0)
