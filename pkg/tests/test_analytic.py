"""Complex-analytic layer: dilogarithms, lattice data, theta functions,
the lattice Eisenstein sum and the regulator pairing."""

import cmath
import math
import random

import mpmath
import pytest

from elldilog.analytic import (bloch_wigner, delta3_explicit,
                               delta3_theta_scalar, elliptic_dilog,
                               elliptic_dilog_z, elliptic_log, identity_battery,
                               jq, kronecker_k21, li2, line_relation,
                               normalize_xi, pairing_product_residual,
                               pairing_value, periods, regulator_pairing,
                               theta, theta_prime_zero, theta_sq_mult)
from elldilog.curves import Curve
from elldilog.divisors import Divisor, build_Pk, involute

TWO_PI_I = 2j * math.pi


# -- dilogarithms ----------------------------------------------------------

def test_li2_against_mpmath():
    rng = random.Random(1)
    mpmath.mp.dps = 30
    worst = 0.0
    pts = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(40)]
    pts += [0.5 + 0j, -1.0 + 0j, 0.999 + 1e-3j, 2.0 + 1e-9j, 1e-8 + 0j]
    for z in pts:
        ref = complex(mpmath.polylog(2, mpmath.mpc(z.real, z.imag)))
        worst = max(worst, abs(li2(z) - ref) / max(1.0, abs(ref)))
    assert worst < 5e-14


def test_li2_special_values():
    assert abs(li2(1 + 0j) - math.pi ** 2 / 6) < 1e-15
    assert abs(li2(-1 + 0j) + math.pi ** 2 / 12) < 1e-15
    assert li2(0j) == 0


def test_bloch_wigner_properties():
    rng = random.Random(2)
    for _ in range(30):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.01, 2))
        D = bloch_wigner(z)
        assert abs(bloch_wigner(z.conjugate()) + D) < 1e-13
        assert abs(bloch_wigner(1 / z) + D) < 1e-13
        assert abs(bloch_wigner(1 - 1 / z) - D) < 1e-12
    # vanishes on the real axis
    for x in (-2.0, -0.3, 0.5, 0.9, 2.7):
        assert bloch_wigner(complex(x, 0.0)) == 0.0


# -- lattice data ----------------------------------------------------------

def test_periods_frozen_values(L37):
    assert abs(L37.omega1 - 2.9934586462319595) < 1e-12
    assert abs(L37.omega2 - 2.4513893819867896j) < 1e-12
    assert abs(L37.q - 0.005826159733387286) < 1e-14
    assert abs(L37.tau - 0.8189153991061463j) < 1e-13


def test_periods_tie_lattice_to_model(C37, L37):
    # omega1^(-12) Delta(tau) must equal the algebraic discriminant
    assert abs(L37.delta_tau / L37.omega1 ** 12 - float(C37.disc)) < 1e-9


def test_negative_discriminant_unsupported():
    C = Curve(0, 0, 0, -1, 1)  # disc = -2^4 * 23 < 0
    with pytest.raises(NotImplementedError):
        periods(C)


def test_elliptic_log_frozen_and_consistent(C37, G37, L37):
    from elldilog.analytic import _wp_tau
    cp = elliptic_log(C37, G37, L37)
    assert abs(cp.xi - (-0.3105413587241393 + 0.40945769955307326j)) < 1e-10
    # wp(xi) = omega1^2 * X(P) with X(P) = x + b2/12 = 0
    assert abs(_wp_tau(cp.xi, L37)) < 1e-9


def test_normalize_xi_fundamental_domain(L37):
    rng = random.Random(3)
    for _ in range(25):
        xi = complex(rng.uniform(-7, 7), 0) + rng.uniform(-5, 5) * L37.tau
        cp = normalize_xi(xi, L37)
        b = cp.xi.imag / L37.tau.imag
        assert -1e-12 <= b < 1 + 1e-12
        a = cp.xi.real - b * L37.tau.real
        assert -0.5 - 1e-12 <= a < 0.5 + 1e-12
        # same point of C*/q^Z
        r = cmath.exp(TWO_PI_I * xi) / cp.z
        k = round(math.log(abs(r)) / math.log(abs(L37.q))) if abs(r) != 1 else 0
        assert abs(r / L37.q ** k - 1) < 1e-9


# -- frozen dilogarithm values ---------------------------------------------

FROZEN_DILOG = {
    3: -4.493991316638095,
    4: -14.60547177907365,
    6: -50.55740231217806,
}


@pytest.mark.parametrize("k", sorted(FROZEN_DILOG))
def test_dilog_frozen_values(C37, G37, L37, k):
    D = build_Pk(k, G37, C37)
    assert abs(elliptic_dilog(D, L37, C37) - FROZEN_DILOG[k]) < 1e-9


def test_dilog_combination_frozen(C37, G37, L37):
    D = build_Pk(10, G37, C37) + (-4) * build_Pk(5, G37, C37)
    assert abs(elliptic_dilog(D, L37, C37) + 139.31373081577954) < 1e-8


def test_dilog_input_forms(C37, G37, L37):
    cp = elliptic_log(C37, G37, L37)
    v1 = elliptic_dilog(cp, L37)
    v2 = elliptic_dilog(cp.z, L37)
    v3 = elliptic_dilog([(1, cp.xi)], L37)
    v4 = elliptic_dilog(Divisor.of((G37, 1)), L37, C37)
    assert abs(v1 - v2) < 1e-14
    assert abs(v1 - v3) < 1e-12
    assert abs(v1 - v4) < 1e-14
    with pytest.raises(ValueError):
        elliptic_dilog(Divisor.of((G37, 1)), L37)  # curve required


# -- theta functions -------------------------------------------------------

def test_theta_square_equals_multiplicative_form(L37):
    rng = random.Random(4)
    for _ in range(20):
        xi = complex(rng.uniform(-0.5, 0.5), 0) \
            + rng.uniform(0.05, 0.95) * L37.tau
        z = cmath.exp(TWO_PI_I * xi)
        t = theta(xi, L37)
        m = theta_sq_mult(z, L37.q)
        assert abs(t * t - m) / max(1.0, abs(m)) < 1e-12


def test_theta_vanishes_on_lattice(L37):
    assert theta(0j, L37) == 0
    assert abs(theta(1 + 0j, L37)) < 1e-14
    assert abs(theta(L37.tau, L37)) < 1e-12


def test_theta_prime_zero_frozen(L37):
    assert abs(theta_prime_zero(L37) - 4.044424568128695j) < 1e-10


def test_pairing_value_matches_theta(C37, G37, L37):
    cp = elliptic_log(C37, G37, L37)
    t = theta(cp.xi, L37)
    assert abs(pairing_value(cp, L37) + 1.0 / (t * t)) < 1e-12
    with pytest.raises(ValueError):
        pairing_value(normalize_xi(0j, L37), L37)


def test_pairing_product_identity(C37, G37, L37):
    A = C37.scalar_mul(2, G37)
    B = C37.scalar_mul(5, G37)
    assert pairing_product_residual(C37, L37, A, B) < 1e-10


# -- lattice sum and regulator ---------------------------------------------

def test_k21_matches_dilog_and_companion(C37, G37, L37):
    xi = elliptic_log(C37, G37, L37).xi
    z = cmath.exp(TWO_PI_I * xi)
    K = kronecker_k21(xi, L37)
    assert abs(K.real - elliptic_dilog_z(z, L37.q)) < 1e-10
    assert abs(K.imag + jq(z, L37)) < 1e-10
    assert abs(kronecker_k21(-xi, L37) + K) < 1e-12


def test_regulator_pairing_properties(C37, G37, L37):
    P2 = C37.scalar_mul(2, G37)
    P3 = C37.scalar_mul(3, G37)
    from elldilog.curves import INFINITY
    # principal divisors: (a) + (b) + (-a-b) - 3(0) is principal
    f = Divisor.of((G37, 1), (P2, 1), (C37.neg(P3), 1), (INFINITY, -3))
    g = Divisor.of((P2, 1), (C37.neg(P2), 1), (INFINITY, -2))
    v = regulator_pairing(f, g, C37, L37)
    w = regulator_pairing(g, f, C37, L37)
    assert abs(v + w) < 1e-12  # antisymmetry
    from elldilog.divisors import convolve
    conv = convolve(C37, f, involute(C37, g))
    assert abs(v.real - elliptic_dilog(conv, L37, C37) / math.pi) < 1e-9


def test_regulator_pairing_rejects_non_principal(C37, G37, L37):
    from elldilog.curves import INFINITY
    bad = Divisor.of((G37, 1), (INFINITY, -1))  # degree 0 but not principal
    good = Divisor.of((G37, 1), (C37.neg(G37), 1), (INFINITY, -2))
    with pytest.raises(ValueError):
        regulator_pairing(bad, good, C37, L37)
    deg1 = Divisor.of((G37, 1))
    with pytest.raises(ValueError):
        regulator_pairing(deg1, good, C37, L37)


def test_line_relation_dilog_vanishes(C37, L37):
    terms = line_relation(C37, L37, (0.3, 0.7), (0.5, -1.2, 2.0))
    assert len(terms) == 27
    assert abs(elliptic_dilog(terms, L37)) < 1e-8


# -- explicit delta_3 ------------------------------------------------------

def test_delta3_scalars_match_theta_form(C37, G37, L37):
    pts = [C37.scalar_mul(k, G37) for k in (1, 2, 4, 9)]
    xis = [elliptic_log(C37, Q, L37).xi for Q in pts]
    for shift, (s, base) in enumerate(delta3_explicit(pts, C37)):
        th = delta3_theta_scalar(xis, shift, L37)
        assert abs(complex(s) / th - 1.0) < 1e-10
        assert base == pts[shift]


def test_delta3_degenerate_raises(C37, G37):
    pts = [C37.scalar_mul(k, G37) for k in (3, 2, 1, 5)]
    with pytest.raises(ValueError):
        delta3_explicit(pts, C37)
    with pytest.raises(ValueError):
        delta3_explicit(pts[:3], C37)  # wrong arity


# -- battery ----------------------------------------------------------------

def test_identity_battery_quick(C37, G37, L37):
    results = identity_battery(C37, L37, G37, seed=12345, samples=5)
    assert len(results) >= 14
    failing = [r for r in results if not r.passed]
    assert not failing, failing
