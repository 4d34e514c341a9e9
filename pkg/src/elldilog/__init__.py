"""Elliptic dilogarithms, local heights and L(E,2).

Exact arithmetic on elliptic curves over Q, formal divisors and their
moment tensors, canonical local heights at all places, Tate-curve
component indices and Bernoulli integrality sums, the elliptic
dilogarithm and its companion lattice series, and two independent
evaluations of L(E,2).  The `verify` command line tool glues these
together into a divisor-condition checker.
"""

from .curves import Curve, Point, INFINITY
from .divisors import Divisor, MWCoordinates

__all__ = ["Curve", "Point", "INFINITY", "Divisor", "MWCoordinates"]

__version__ = "0.1.0"
