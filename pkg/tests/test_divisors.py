"""Divisor algebra, moment tensors and the cube-moment condition."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elldilog.curves import INFINITY, curve_37a
from elldilog.divisors import (Divisor, MWCoordinates, build_Pk, condition_a,
                               convolve, involute, moment_vector)


def test_divisor_basic_algebra(C37, G37):
    P2 = C37.scalar_mul(2, G37)
    D = Divisor.of((G37, 2), (P2, -1))
    E = Divisor.of((G37, -2), (P2, 1))
    assert (D + E) == Divisor()
    assert not (D + E)
    assert D - D == Divisor()
    assert (3 * D)[G37] == 6
    assert D.degree() == 1
    assert len(D) == 2


def test_zero_coefficients_dropped(G37):
    D = Divisor.of((G37, 1), (G37, -1))
    assert len(D) == 0
    assert D[G37] == 0


def test_convolution_identity_and_degree(C37, G37):
    one = Divisor.of((INFINITY, 1))
    D = Divisor.of((G37, 3), (C37.scalar_mul(2, G37), -1))
    assert convolve(C37, one, D) == D
    E = Divisor.of((C37.scalar_mul(3, G37), 2))
    assert convolve(C37, D, E).degree() == D.degree() * E.degree()


def test_convolution_translates_points(C37, G37):
    D = Divisor.of((G37, 1))
    E = Divisor.of((C37.scalar_mul(2, G37), 1))
    assert convolve(C37, D, E) == Divisor.of((C37.scalar_mul(3, G37), 1))


def test_involution_is_an_involution(C37, G37):
    D = Divisor.of((G37, 2), (C37.scalar_mul(4, G37), -3), (INFINITY, 1))
    assert involute(C37, involute(C37, D)) == D
    assert involute(C37, D)[C37.neg(G37)] == 2


def test_mw_coordinates_verify_decomposition(C37, G37):
    with pytest.raises(ValueError):
        MWCoordinates(C37, [G37], {C37.scalar_mul(3, G37): (2,)})
    coords = MWCoordinates.rank_one(C37, G37, range(-5, 6))
    assert coords.vector(C37.scalar_mul(4, G37)) == (4,)
    assert coords.vector(INFINITY) == (0,)
    assert not coords.knows(C37.scalar_mul(9, G37))
    with pytest.raises(KeyError):
        coords.vector(C37.scalar_mul(9, G37))


@settings(max_examples=50, deadline=None)
@given(ns=st.lists(st.tuples(st.integers(-6, 6), st.integers(-4, 4)),
                   min_size=1, max_size=6))
def test_moment_vector_matches_direct_sums(ns):
    C = curve_37a()
    G = C.point(0, 0)
    coords = MWCoordinates.rank_one(C, G, range(-6, 7))
    D = Divisor((C.scalar_mul(k, G), n) for k, n in ns)
    mv = moment_vector(D, coords)
    kept = {}
    for k, n in ns:
        kept[k] = kept.get(k, 0) + n
    kept = {k: n for k, n in kept.items() if n != 0}
    assert mv.m0 == sum(kept.values())
    assert mv.m1[0] == sum(n * k for k, n in kept.items())
    assert mv.m2[(0, 0)] == sum(n * k * k for k, n in kept.items())
    assert mv.m3[(0, 0, 0)] == sum(n * k ** 3 for k, n in kept.items())


@pytest.mark.parametrize("k", range(2, 13))
def test_Pk_kills_first_and_third_moments(C37, G37, coords37, k):
    D = build_Pk(k, G37, C37)
    mv = moment_vector(D, coords37)
    assert all(v == 0 for v in mv.m1)
    assert all(v == 0 for v in mv.m3.values())
    assert condition_a(D, coords37)


def test_Pk_not_deeper_than_cube_moment(C37, G37, coords37):
    mv = moment_vector(build_Pk(3, G37, C37), coords37)
    assert mv.m0 == 2  # degree does not vanish
    assert mv.m2[(0, 0)] == -2  # nor the square moment
    assert mv.in_ideal_power() == 0


def test_condition_a_fails_without_correction(C37, G37, coords37):
    D = Divisor.of((C37.scalar_mul(3, G37), 1), (G37, -3))
    assert not condition_a(D, coords37)
    assert moment_vector(D, coords37).m3[(0, 0, 0)] == 24


def test_Pk_explicit_coefficients(C37, G37):
    D = build_Pk(3, G37, C37)
    assert D[C37.scalar_mul(3, G37)] == 1
    assert D[G37] == 5  # -3 + 2*(k^3-k)/6 = -3 + 8
    assert D[C37.scalar_mul(2, G37)] == -4
