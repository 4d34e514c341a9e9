"""Formal Z-linear combinations of curve points and their moment tensors.

A divisor is a finite map point -> integer coefficient.  Convolution is
the group-algebra product.  Moments are taken in user-supplied
Mordell-Weil coordinates and detect membership in the powers of the
augmentation ideal: m0 = 0 gives I, m0 = m1 = 0 gives I^2, and so on up
to I^4.  All arithmetic here is exact.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Dict, Iterable, Tuple

from .curves import Curve, INFINITY, Point, PointLike


class Divisor:
    """Finite map point -> int, zero coefficients dropped."""

    def __init__(self, items: Iterable[Tuple[PointLike, int]] = ()):
        m: Dict[PointLike, int] = {}
        for P, n in items:
            key = INFINITY if P is INFINITY else P
            m[key] = m.get(key, 0) + n
        self._m = {P: n for P, n in m.items() if n != 0}

    @classmethod
    def of(cls, *pairs) -> "Divisor":
        return cls(pairs)

    def items(self):
        return self._m.items()

    def support(self):
        return list(self._m.keys())

    def __getitem__(self, P) -> int:
        return self._m.get(P, 0)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._m == other._m

    def __hash__(self):
        return hash(frozenset(self._m.items()))

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._m.items()) + list(other._m.items()))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-1) * other

    def __rmul__(self, c: int) -> "Divisor":
        return Divisor((P, c * n) for P, n in self._m.items())

    def __len__(self):
        return len(self._m)

    def __bool__(self):
        return bool(self._m)

    def degree(self) -> int:
        return sum(self._m.values())

    def __repr__(self):
        if not self._m:
            return "Divisor(0)"
        return " + ".join(f"{n}*({P})" for P, n in sorted(
            self._m.items(), key=lambda t: repr(t[0])))


def convolve(C: Curve, D1: Divisor, D2: Divisor) -> Divisor:
    """Group-algebra product: (a) * (b) = (a+b), extended bilinearly."""
    out = []
    for P, n in D1.items():
        for Q, m in D2.items():
            out.append((C.add(P, Q), n * m))
    return Divisor(out)


def involute(C: Curve, D: Divisor) -> Divisor:
    """Transport coefficients along P -> -P."""
    return Divisor((C.neg(P), n) for P, n in D.items())


class MWCoordinates:
    """Generators G_1..G_r plus an exact decomposition of each mapped point.

    The decomposition of every point is verified against the group law at
    construction time; the class never computes a Mordell-Weil basis.
    """

    def __init__(self, C: Curve, generators: Iterable[PointLike],
                 decomposition: Dict[PointLike, Tuple[int, ...]]):
        self.curve = C
        self.generators = list(generators)
        r = len(self.generators)
        self.rank = r
        self._coords: Dict[PointLike, Tuple[int, ...]] = {}
        for P, vec in decomposition.items():
            vec = tuple(vec)
            if len(vec) != r:
                raise ValueError("decomposition vector has wrong length")
            Q: PointLike = INFINITY
            for g, k in zip(self.generators, vec):
                Q = C.add(Q, C.scalar_mul(k, g))
            if Q != P and not (Q is INFINITY and P is INFINITY):
                raise ValueError(f"decomposition of {P} does not verify: {Q}")
            self._coords[P] = vec
        self._coords[INFINITY] = (0,) * r

    @classmethod
    def rank_one(cls, C: Curve, G: PointLike, multiples: Iterable[int]
                 ) -> "MWCoordinates":
        dec = {C.scalar_mul(k, G): (k,) for k in multiples}
        return cls(C, [G], dec)

    def vector(self, P: PointLike) -> Tuple[int, ...]:
        if P not in self._coords:
            raise KeyError(f"point {P} has no Mordell-Weil decomposition")
        return self._coords[P]

    def knows(self, P: PointLike) -> bool:
        return P in self._coords


class MomentVector:
    """Symmetric moments sum n_j v_j^{(x)i} of a divisor, i = 0..3.

    m2 and m3 are stored as maps from sorted index tuples to integers.
    """

    def __init__(self, m0: int, m1, m2, m3):
        self.m0 = m0
        self.m1 = tuple(m1)
        self.m2 = dict(m2)
        self.m3 = dict(m3)

    def in_ideal_power(self) -> int:
        """Largest i <= 4 with the divisor in I^i (0 if m0 != 0)."""
        if self.m0 != 0:
            return 0
        if any(self.m1):
            return 1
        if any(self.m2.values()):
            return 2
        if any(self.m3.values()):
            return 3
        return 4

    def __eq__(self, other):
        return (self.m0, self.m1, self.m2, self.m3) == \
            (other.m0, other.m1, other.m2, other.m3)

    def __repr__(self):
        return (f"MomentVector(m0={self.m0}, m1={self.m1}, "
                f"m2={self.m2}, m3={self.m3})")


def moment_vector(D: Divisor, coords: MWCoordinates) -> MomentVector:
    r = coords.rank
    m0 = 0
    m1 = [0] * r
    m2 = {idx: 0 for idx in combinations_with_replacement(range(r), 2)}
    m3 = {idx: 0 for idx in combinations_with_replacement(range(r), 3)}
    for P, n in D.items():
        v = coords.vector(P)
        m0 += n
        for i in range(r):
            m1[i] += n * v[i]
        for idx in m2:
            m2[idx] += n * v[idx[0]] * v[idx[1]]
        for idx in m3:
            m3[idx] += n * v[idx[0]] * v[idx[1]] * v[idx[2]]
    return MomentVector(m0, m1, m2, m3)


def condition_a(D: Divisor, coords: MWCoordinates) -> bool:
    """Vanishing of the full symmetric cube moment (free part only)."""
    return all(v == 0 for v in moment_vector(D, coords).m3.values())


def build_Pk(k: int, P: PointLike, C: Curve) -> Divisor:
    """(kP) - k(P) - (k^3-k)/6 * ((2P) - 2(P))."""
    c = (k ** 3 - k) // 6
    assert 6 * c == k ** 3 - k
    return Divisor([
        (C.scalar_mul(k, P), 1),
        (P, -k),
        (C.scalar_mul(2, P), -c),
        (P, 2 * c),
    ])
