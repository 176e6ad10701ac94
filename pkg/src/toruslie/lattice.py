"""Complex lattices Z + Z*tau: torsion points, integer sublattice bases,
and reduction of tau into the SL2(Z) fundamental domain.

Conventions.  A lattice is stored through its modular parameter tau with
Im(tau) > 0; the implicit basis is (1, tau).  Torsion points are kept as
exact integer triples (a, b, n) meaning (a + b*tau)/n, so that all group
arithmetic downstream is rational.  The fundamental domain uses the
half-open convention Re(tau) in [-1/2, 1/2) away from the unit circle,
and the Re >= 0 side on the circle itself, so every class has a unique
representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "DegenerateLatticeError",
    "HEX_TAU",
    "Lattice",
    "ModularClass",
    "SQUARE_TAU",
    "ScaledLattice",
    "TorsionPoint",
    "is_hexagonal_class",
    "is_square_class",
    "moebius",
    "reduce_modular",
    "shortest_period",
    "sublattice_basis",
    "sublattice_vectors",
    "torsion_order",
    "torus_reduce",
    "torus_reduce_centered",
    "transport_torsion",
]

SQUARE_TAU = 1j
HEX_TAU = complex(0.5, math.sqrt(3.0) / 2.0)

_MAX_REDUCTION_STEPS = 10_000
_CLASS_ATOL = 1e-9


class DegenerateLatticeError(ValueError):
    """Generators span a subgroup of rank below two."""


@dataclass(frozen=True)
class Lattice:
    """The lattice Z + Z*tau, Im(tau) > 0."""

    tau: complex

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise ValueError(f"lattice parameter needs Im(tau) > 0, got {tau!r}")
        object.__setattr__(self, "tau", tau)


@dataclass(frozen=True)
class ScaledLattice:
    """The lattice scale * (Z + Z*tau); scale may be any nonzero complex."""

    tau: complex
    scale: complex = 1.0 + 0.0j

    def __post_init__(self):
        tau = complex(self.tau)
        scale = complex(self.scale)
        if not tau.imag > 0:
            raise ValueError(f"lattice parameter needs Im(tau) > 0, got {tau!r}")
        if scale == 0:
            raise ValueError("lattice scale must be nonzero")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "scale", scale)

    @classmethod
    def from_lattice(cls, lattice: Lattice) -> "ScaledLattice":
        return cls(lattice.tau, 1.0 + 0.0j)


@dataclass(frozen=True)
class TorsionPoint:
    """The point (a + b*tau)/n modulo the lattice, stored gcd-reduced.

    After normalisation 0 <= a, b < n and gcd(a, b, n) == 1, so the point
    has exact additive order n.
    """

    a: int
    b: int
    n: int

    def __post_init__(self):
        a, b, n = int(self.a), int(self.b), int(self.n)
        if n < 1:
            raise ValueError("torsion denominator must be >= 1")
        a %= n
        b %= n
        g = gcd(gcd(a, b), n)
        a, b, n = a // g, b // g, n // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "n", n)

    @classmethod
    def zero(cls) -> "TorsionPoint":
        return cls(0, 0, 1)

    @classmethod
    def from_fractions(cls, x: Fraction, y: Fraction) -> "TorsionPoint":
        n = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
        return cls(int(x * n), int(y * n), n)

    @property
    def fractions(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.a, self.n), Fraction(self.b, self.n)

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        x1, y1 = self.fractions
        x2, y2 = other.fractions
        return TorsionPoint.from_fractions(x1 + x2, y1 + y2)

    def __neg__(self) -> "TorsionPoint":
        return TorsionPoint(-self.a, -self.b, self.n)

    def scalar_mul(self, k: int) -> "TorsionPoint":
        return TorsionPoint(k * self.a, k * self.b, self.n)

    def matrix_apply(self, m: tuple[tuple[int, int], tuple[int, int]]) -> "TorsionPoint":
        """Apply an integer matrix to the (a, b) coordinates."""
        (p, q), (r, s) = m
        return TorsionPoint(p * self.a + q * self.b, r * self.a + s * self.b, self.n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_complex(self, tau: complex, scale: complex = 1.0) -> complex:
        return scale * (self.a + self.b * tau) / self.n


def torsion_order(p: TorsionPoint) -> int:
    """Smallest m >= 1 with m*p = 0 on the torus."""
    return p.n


@dataclass(frozen=True)
class ModularClass:
    """A reduced modular parameter together with the SL2(Z) matrix realising it.

    ``moebius(transform, tau_original) == tau_reduced`` up to rounding.
    """

    tau_reduced: complex
    transform: tuple[tuple[int, int], tuple[int, int]]


def moebius(m: tuple[tuple[int, int], tuple[int, int]], tau: complex) -> complex:
    (a, b), (c, d) = m
    return (a * tau + b) / (c * tau + d)


def reduce_modular(tau: complex, eps: float = 1e-12) -> ModularClass:
    """Reduce tau into the SL2(Z) fundamental domain.

    Gauss reduction: translate Re(tau) into [-1/2, 1/2], invert while
    |tau| < 1.  Boundary ties are resolved half-open (Re = +1/2 maps to
    -1/2 off the unit circle) and towards Re >= 0 on the circle, so the
    hexagonal corner is represented by exp(i*pi/3).
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise ValueError(f"reduce_modular needs Im(tau) > 0, got {tau!r}")
    a, b, c, d = 1, 0, 0, 1
    for _ in range(_MAX_REDUCTION_STEPS):
        if abs(tau.real) > 0.5 + eps:
            n = round(tau.real)
            tau -= n
            a, b = a - n * c, b - n * d
        if abs(tau) < 1.0 - eps:
            tau = -1.0 / tau
            a, b, c, d = -c, -d, a, b
            continue
        if abs(tau.real) <= 0.5 + eps:
            break
    else:  # pragma: no cover
        raise RuntimeError("modular reduction did not terminate")

    on_arc = abs(abs(tau) - 1.0) <= _CLASS_ATOL
    if on_arc:
        if tau.real < -_CLASS_ATOL:
            tau = -1.0 / tau
            a, b, c, d = -c, -d, a, b
    elif tau.real >= 0.5 - eps:
        tau -= 1
        a, b = a - c, b - d
    return ModularClass(tau, ((a, b), (c, d)))


def is_square_class(tau: complex) -> bool:
    """True when Z + Z*tau is homothetic to the square lattice Z + Z*i."""
    return abs(reduce_modular(tau).tau_reduced - SQUARE_TAU) < _CLASS_ATOL


def is_hexagonal_class(tau: complex) -> bool:
    """True when Z + Z*tau is homothetic to the hexagonal lattice."""
    return abs(reduce_modular(tau).tau_reduced - HEX_TAU) < _CLASS_ATOL


def shortest_period(tau: complex) -> float:
    """Length of a shortest nonzero vector of Z + Z*tau."""
    mc = reduce_modular(tau)
    (_, _), (c, d) = mc.transform
    # Z + Z*tau = (c*tau + d) * (Z + Z*tau_reduced), and the reduced
    # lattice has shortest vector 1.
    return abs(c * tau + d)


def torus_reduce(z: complex, lattice: Lattice) -> complex:
    """Representative of z in the fundamental cell {s + t*tau : s, t in [0, 1)}."""
    tau = lattice.tau
    t = z.imag / tau.imag
    s = z.real - t * tau.real
    s -= math.floor(s)
    t -= math.floor(t)
    return complex(s + t * tau.real, t * tau.imag)


def torus_reduce_centered(z: complex, tau: complex) -> complex:
    """Representative with coordinates s, t in [-1/2, 1/2)."""
    t = z.imag / tau.imag
    s = z.real - t * tau.real
    s -= math.floor(s + 0.5)
    t -= math.floor(t + 0.5)
    return complex(s + t * tau.real, t * tau.imag)


def _hnf_2col(rows: list[tuple[int, int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Row Hermite normal form of an integer k x 2 matrix of rank 2.

    Returns ((g, y), (0, d)) with g, d > 0 and 0 <= y < d.
    """
    work = [(int(x), int(y)) for x, y in rows if (x, y) != (0, 0)]
    if not work:
        raise DegenerateLatticeError("all generators vanish")

    # Clear the first column down to a single pivot by extended gcd steps.
    pivot = None
    rest: list[tuple[int, int]] = []
    for row in work:
        if pivot is None:
            pivot = row
            continue
        x1, y1 = pivot
        x2, y2 = row
        while x2:
            q = x1 // x2
            x1, y1, x2, y2 = x2, y2, x1 - q * x2, y1 - q * y2
        pivot = (x1, y1)
        rest.append((0, y2))
    assert pivot is not None
    if pivot[0] == 0:
        rest.append((0, pivot[1]))
        pivot = None

    d = 0
    for _, y in rest:
        d = gcd(d, y)
    if pivot is None:
        raise DegenerateLatticeError("generators span rank < 2")
    if pivot[0] < 0:
        pivot = (-pivot[0], -pivot[1])
    if d == 0:
        raise DegenerateLatticeError("generators span rank < 2")
    g, y = pivot
    y %= d
    return (g, y), (0, d)


def sublattice_vectors(
    generators, n: int, tau: complex
) -> tuple[complex, complex]:
    """Z-basis (w1, w2) of the subgroup spanned by integer coordinate pairs
    over the basis (1/n, tau/n); Im(w2/w1) > 0."""
    basis = _hnf_2col([tuple(g) for g in generators])
    (g, y), (_, d) = basis
    w1 = (g + y * tau) / n
    w2 = (d * tau) / n
    # det ((g, y), (0, d)) > 0 together with Im(tau) > 0 gives Im(w2/w1) > 0.
    return w1, w2


def sublattice_basis(generators, n: int, tau: complex) -> Lattice:
    """Homothety class of the lattice spanned by the generators.

    Each generator is an integer coordinate pair over (1/n, tau/n).
    """
    w1, w2 = sublattice_vectors(generators, n, tau)
    return Lattice(w2 / w1)


def sublattice_scaled(generators, n: int, tau: complex) -> ScaledLattice:
    """Like :func:`sublattice_basis` but keeping the true scale."""
    w1, w2 = sublattice_vectors(generators, n, tau)
    return ScaledLattice(w2 / w1, w1)


def transport_torsion(
    p: TorsionPoint, transform: tuple[tuple[int, int], tuple[int, int]]
) -> TorsionPoint:
    """Coordinates of p after the basis change tau -> moebius(transform, tau).

    The homothety identifying Z + Z*tau with Z + Z*tau' maps the point with
    (1, tau)-coordinates (x, y) to the point with (1, tau')-coordinates
    (a x - b y, -c x + d y).
    """
    (a, b), (c, d) = transform
    return p.matrix_apply(((a, -b), (-c, d)))
