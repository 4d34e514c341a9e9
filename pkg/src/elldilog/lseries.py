"""Dirichlet coefficients a_n and the value L(E,2).

Two independent evaluation modes:
  * naive(B): the partial sum of a_n/n^2 up to B, using a full
    coefficient table built with a smallest-prime-factor sieve and the
    Hecke recursion; point counts for large primes use a baby-step
    giant-step group-order search compiled with numba.
  * afe: exponentially convergent series from the integral
    representation of Lambda(s) = N^(s/2) (2pi)^(-s) Gamma(s) L(s)
    split at y = 1.  With A = 2 pi / sqrt(N) and h(y) = sum a_n e^(-Any),
    the involution h(1/y) = eps y^2 h(y) (eps the sign of the
    functional equation Lambda(s) = eps Lambda(2-s)) gives

        L(E,2) = sum_n a_n (An+1) e^(-An) / n^2
                 + eps * (4 pi^2 / N) * sum_n a_n E1(An),

    where E1 is the exponential integral.  The sign eps is not assumed:
    both candidates are computed and the one consistent with the naive
    partial sum is selected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import exp1

from .curves import Curve, INFINITY, _is_prime, _val_p

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*a, **k):
        def wrap(f):
            return f
        return wrap if not (len(a) == 1 and callable(a[0])) else a[0]


# -- compiled group-order point counting -----------------------------------

@njit(cache=True)
def _modpow(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@njit(cache=True)
def _modinv(a, p):
    # extended gcd; a invertible mod p
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _sqrt_mod(a, p):
    """Tonelli-Shanks; assumes a is a quadratic residue mod odd prime p."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return _modpow(a, (p + 1) // 4, p)
    # factor p-1 = q * 2^s
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    # find a non-residue
    zz = 2
    while _modpow(zz, (p - 1) // 2, p) != p - 1:
        zz += 1
    m = s
    c = _modpow(zz, q, p)
    t = _modpow(a, q, p)
    r = _modpow(a, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = _modpow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


@njit(cache=True)
def _pt_add(x1, y1, x2, y2, A, p):
    """Affine addition on y^2 = x^3 + A x + B; (-1,-1) encodes identity.
    Returns (x3, y3)."""
    if x1 == -1:
        return x2, y2
    if x2 == -1:
        return x1, y1
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return -1, -1
        lam = (3 * x1 % p * x1 + A) % p * _modinv(2 * y1 % p, p) % p
    else:
        lam = (y2 - y1) % p * _modinv((x2 - x1) % p, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return x3, y3


@njit(cache=True)
def _pt_mul(k, x, y, A, p):
    rx, ry = -1, -1
    qx, qy = x, y
    while k > 0:
        if k & 1:
            rx, ry = _pt_add(rx, ry, qx, qy, A, p)
        k >>= 1
        if k > 0:
            qx, qy = _pt_add(qx, qy, qx, qy, A, p)
    return rx, ry


@njit(cache=True)
def _point_order_from_multiple(n, x, y, A, p):
    """Order of (x, y) given n with n * (x, y) = identity: strip prime
    factors of n while the quotient still annihilates the point."""
    order = n
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            while order % d == 0:
                rx, _ = _pt_mul(order // d, x, y, A, p)
                if rx == -1:
                    order //= d
                else:
                    break
        d += 1
    if m > 1:
        while order % m == 0:
            rx, _ = _pt_mul(order // m, x, y, A, p)
            if rx == -1:
                order //= m
            else:
                break
    return order


@njit(cache=True)
def _annihilator_in_interval(x, y, A, p, lo, hi):
    """Smallest n in [lo, hi] with n*(x,y) = identity, via BSGS; the
    interval has length > 4 sqrt(p) >= exponent bound, so one exists."""
    m = int(math.sqrt(hi - lo + 1.0)) + 1
    # baby steps: j*(x,y), j = 0..m-1
    bx = np.empty(m, dtype=np.int64)
    by = np.empty(m, dtype=np.int64)
    cx, cy = -1, -1
    for j in range(m):
        bx[j] = cx
        by[j] = cy
        cx, cy = _pt_add(cx, cy, x, y, A, p)
    idx = np.argsort(bx)
    sbx = bx[idx]
    # giant steps: target = -(lo + i*m)*(x,y); n = lo + i*m + j
    gx, gy = _pt_mul(lo, x, y, A, p)
    sx, sy = _pt_mul(m, x, y, A, p)
    i = 0
    while lo + i * m <= hi + m:
        # want j with j*(x,y) = -(gx, gy)
        tx = gx
        ty = (p - gy) % p if gy != -1 else -1
        lo_i = np.searchsorted(sbx, tx)
        k = lo_i
        while k < m and sbx[k] == tx:
            j = idx[k]
            if (bx[j] == -1 and tx == -1) or (bx[j] == tx and by[j] == ty):
                n = lo + i * m + j
                if lo <= n <= hi:
                    rx, _ = _pt_mul(n, x, y, A, p)
                    if rx == -1:
                        return n
            k += 1
        # identity match (encoded -1): searchsorted handles it since -1
        # sorts first
        gx, gy = _pt_add(gx, gy, sx, sy, A, p)
        i += 1
    return -1


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _ap_one_prime(p, A, B, seed):
    """a_p for y^2 = x^3 + Ax + B over F_p (good reduction, p >= 5)."""
    if p < 600:
        # direct character sum
        total = 0
        for xv in range(p):
            rhs = (xv * xv % p * xv + A * xv + B) % p
            if rhs == 0:
                continue
            ls = _modpow(rhs, (p - 1) // 2, p)
            total += 1 if ls == 1 else -1
        return -total
    sq = math.sqrt(float(p))
    lo = int(p + 1 - 2 * sq)
    hi = int(p + 1 + 2 * sq) + 1
    state = np.int64(seed * 2654435761 + p)
    lcm = np.int64(1)
    ncand = np.int64(-1)
    for _trial in range(40):
        # pseudo-random x with rhs a nonzero square
        state = (state * np.int64(6364136223846793005)
                 + np.int64(1442695040888963407))
        xv = np.int64((state >> 16) % p)
        if xv < 0:
            xv += p
        rhs = (xv * xv % p * xv + A * xv + B) % p
        if rhs == 0:
            continue
        if _modpow(rhs, (p - 1) // 2, p) != 1:
            continue
        yv = _sqrt_mod(rhs, p)
        n = _annihilator_in_interval(xv, yv, A, p, lo, hi)
        if n < 0:
            continue
        ordq = _point_order_from_multiple(n, xv, yv, A, p)
        lcm = lcm // _gcd(lcm, ordq) * ordq
        if lcm > hi - lo:
            # unique multiple of lcm in [lo, hi]
            k = (lo + lcm - 1) // lcm
            ncand = k * lcm
            break
    if ncand < 0:
        # group exponent too small for BSGS disambiguation: enumerate
        total = 0
        for xv in range(p):
            rhs = (xv * xv % p * xv + A * xv + B) % p
            if rhs == 0:
                continue
            ls = _modpow(rhs, (p - 1) // 2, p)
            total += 1 if ls == 1 else -1
        return -total
    return p + 1 - ncand


@njit(cache=True)
def _ap_batch(primes, A_arr, B_arr, out):
    for i in range(primes.shape[0]):
        p = primes[i]
        out[i] = _ap_one_prime(p, A_arr[i], B_arr[i], i)


# -- coefficient table -----------------------------------------------------

@dataclass
class ANTable:
    curve: Curve
    bound: int
    an: np.ndarray  # int64, index n in [0, bound], an[0] unused, an[1] = 1
    ap: Dict[int, int]  # prime -> a_p for primes <= bound

    def __getitem__(self, n: int) -> int:
        return int(self.an[n])


def _sieve_primes(B: int) -> np.ndarray:
    sieve = np.ones(B + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(B ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.nonzero(sieve)[0]


def an_table(C: Curve, B: int) -> ANTable:
    """Coefficients a_n for 1 <= n <= B (Hecke recursion over a
    smallest-prime-factor sieve; compiled order counting for large p)."""
    if B < 1:
        raise ValueError("bound must be positive")
    primes = _sieve_primes(B)
    bad = {int(p) for p in primes if _val_p(C.disc, int(p)) > 0}
    ap: Dict[int, int] = {}
    small_or_bad = []
    big = []
    for p in primes:
        p = int(p)
        if p in bad or p < 5:
            small_or_bad.append(p)
        else:
            big.append(p)
    for p in small_or_bad:
        ap[p] = C.count_ap(p)
    if big:
        A = int(-27 * C.c4)
        Bc = int(-54 * C.c6)
        parr = np.array(big, dtype=np.int64)
        Aarr = np.array([A % p for p in big], dtype=np.int64)
        Barr = np.array([Bc % p for p in big], dtype=np.int64)
        out = np.empty(len(big), dtype=np.int64)
        _ap_batch(parr, Aarr, Barr, out)
        for p, a in zip(big, out):
            ap[p] = int(a)
    # smallest prime factor sieve
    spf = np.zeros(B + 1, dtype=np.int64)
    for p in primes[::-1]:
        spf[p:: p] = p
    ap_arr = np.zeros(B + 1, dtype=np.int64)
    chi_arr = np.zeros(B + 1, dtype=np.int64)
    for p, a in ap.items():
        ap_arr[p] = a
        chi_arr[p] = 0 if p in bad else p
    an = np.zeros(B + 1, dtype=np.int64)
    _fill_an(spf, ap_arr, chi_arr, an)
    return ANTable(C, B, an, ap)


@njit(cache=True)
def _fill_an(spf, ap_arr, chi_arr, an):
    B = an.shape[0] - 1
    an[1] = 1
    for n in range(2, B + 1):
        p = spf[n]
        m = n // p
        if m % p != 0:
            an[n] = ap_arr[p] * an[m]
        else:
            an[n] = ap_arr[p] * an[m] - chi_arr[p] * an[m // p]


# -- L(E, 2) ---------------------------------------------------------------

@dataclass
class LValue:
    value: float
    mode: str
    terms: int
    epsilon: int | None  # functional-equation sign (afe mode)


def conductor(C: Curve) -> int:
    """Conductor for curves with only good/multiplicative reduction
    (product of the multiplicative primes to the first power)."""
    from .heights import _prime_factors
    N = 1
    for p in _prime_factors(abs(C.disc.numerator)):
        info = C.reduction_type(p)
        if info.kind == "additive":
            raise NotImplementedError(
                "conductor exponents at additive primes not implemented")
        if info.kind != "good":
            N *= p
    return N


def l_value_naive(C: Curve, B: int = 10 ** 7,
                  table: ANTable = None) -> LValue:
    """Partial sum of a_n / n^2 up to B."""
    t = table if table is not None and table.bound >= B else an_table(C, B)
    n = np.arange(1, B + 1, dtype=np.float64)
    val = float(np.sum(t.an[1: B + 1] / (n * n)))
    return LValue(val, "naive", B, None)


def _afe_sum(C: Curve, terms: int, eps: int, table: ANTable) -> float:
    N = conductor(C)
    A = 2 * math.pi / math.sqrt(N)
    n = np.arange(1, terms + 1, dtype=np.float64)
    an = table.an[1: terms + 1].astype(np.float64)
    main = np.sum(an * (A * n + 1) * np.exp(-A * n) / (n * n))
    tail = np.sum(an * exp1(A * n))
    return float(main + eps * (4 * math.pi ** 2 / N) * tail)


def l_value_afe(C: Curve, terms: int = 80, naive_hint: float = None,
                table: ANTable = None) -> LValue:
    """Exponentially convergent evaluation; the functional-equation sign
    is chosen by agreement with a naive partial sum (computed here with
    a modest bound when not supplied)."""
    t = table if table is not None and table.bound >= 2 * terms \
        else an_table(C, max(2 * terms, 256))
    if naive_hint is None:
        naive_hint = l_value_naive(C, min(t.bound, 200000), table=t).value
    cands = {eps: _afe_sum(C, terms, eps, t) for eps in (1, -1)}
    eps = min(cands, key=lambda e: abs(cands[e] - naive_hint))
    return LValue(cands[eps], "afe", terms, eps)


def l_value(C: Curve, mode: str = "afe", B: int = 10 ** 7,
            terms: int = 80, table: ANTable = None) -> LValue:
    if mode == "naive":
        return l_value_naive(C, B, table=table)
    if mode == "afe":
        return l_value_afe(C, terms, table=table)
    raise ValueError(f"unknown mode {mode!r}")


# -- ratio table -----------------------------------------------------------

@dataclass
class RatioRow:
    label: str
    dilog: float
    ratio: float


def ratio_report(divisors: Sequence[Tuple[str, "Divisor"]], C: Curve,
                 L, lvalue: float = None) -> List[RatioRow]:
    """Rows (label, L2q value, 8 pi L2q / (N_cond * L(E,2)))."""
    from .analytic import elliptic_dilog
    if lvalue is None:
        lvalue = l_value_afe(C).value
    N = conductor(C)
    rows = []
    for label, D in divisors:
        v = elliptic_dilog(D, L, C)
        rows.append(RatioRow(label, v, 8 * math.pi * v / (N * lvalue)))
    return rows
