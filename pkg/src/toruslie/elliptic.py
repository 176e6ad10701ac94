"""Numerical Weierstrass elliptic functions on Z + Z*tau.

The evaluation backend reduces tau into the SL2(Z) fundamental domain and
z into the centred cell, then sums an exponential (Fourier/q) series whose
terms decay like |q|^(k/2) with q = exp(2*pi*i*tau_reduced); after
reduction |q| <= exp(-pi*sqrt(3)), so a couple of dozen terms reach
double-precision roundoff.  The defining lattice sum, which converges far
too slowly for tight tolerances, is kept in the test suite as an
independent oracle.

Values very close to a lattice point are delegated to the Laurent
expansion 1/z^2 + (g2/20) z^2 + (g3/28) z^4 + ...; on a lattice point the
functions return complex infinity rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import Lattice, ScaledLattice, reduce_modular

__all__ = [
    "EllipticInvariants",
    "invariants",
    "invariants_scaled",
    "j_invariant",
    "scale_check",
    "wp",
    "wp_both",
    "wp_both_scaled",
    "wp_prime",
    "wp_prime_scaled",
    "wp_scaled",
]

_PI = math.pi
_TWO_PI_I = 2j * math.pi

#: |z| below this (in units of the reduced cell) counts as a pole.
POLE_EPS = 1e-12
#: |z| below this switches to the Laurent expansion near the pole.
LAURENT_EPS = 1e-6


@dataclass(frozen=True)
class EllipticInvariants:
    g2: complex
    g3: complex
    e1: complex
    e2: complex
    e3: complex
    discriminant: complex
    j: complex


@dataclass(frozen=True)
class _Cell:
    """Cached per-tau evaluation data on the reduced lattice."""

    tau: complex          # original parameter
    tau_r: complex        # reduced parameter
    m: complex            # Z + Z*tau = m * (Z + Z*tau_r)
    q: complex            # exp(2 pi i tau_r)
    ks: np.ndarray        # 1..K
    denom: np.ndarray     # 1 - q^k
    s1: complex           # sum k q^k / (1 - q^k)
    g2r: complex          # invariants of the reduced lattice
    g3r: complex
    discr: complex        # discriminant via the eta product (no cancellation)


def _n_terms(qabs: float, trunc: int | None) -> int:
    if trunc is not None:
        return max(4, int(trunc))
    if qabs < 1e-300:
        return 8
    # terms decay like |q|^(k/2); target 1e-28
    k = 2.0 * math.log(1e-28) / math.log(qabs)
    return int(min(600, max(10, math.ceil(k))))


@lru_cache(maxsize=256)
def _cell(tau: complex, trunc: int | None = None) -> _Cell:
    mc = reduce_modular(tau)
    (_, _), (c, d) = mc.transform
    m = c * tau + d
    tau_r = mc.tau_reduced
    q = np.exp(_TWO_PI_I * tau_r)
    ks = np.arange(1, _n_terms(abs(q), trunc) + 1, dtype=float)
    qk = q ** ks
    denom = 1.0 - qk
    lam = ks * qk / denom  # k q^k / (1 - q^k)
    s1 = complex(np.sum(lam))
    e4 = 1.0 + 240.0 * complex(np.sum(ks ** 2 * lam))
    e6 = 1.0 - 504.0 * complex(np.sum(ks ** 4 * lam))
    g2r = (4.0 * _PI ** 4 / 3.0) * e4
    g3r = (8.0 * _PI ** 6 / 27.0) * e6
    # discriminant through the 24th power of the eta product: the direct
    # g2^3 - 27 g3^2 cancels catastrophically for elongated lattices
    discr = (2.0 * _PI) ** 12 * complex(q) * complex(np.prod(denom)) ** 24
    return _Cell(tau, tau_r, m, complex(q), ks, denom, s1, g2r, g3r, discr)


def _center(z: np.ndarray, tau: complex) -> np.ndarray:
    """Reduce to coordinates s, t in [-1/2, 1/2) over (1, tau)."""
    t = z.imag / tau.imag
    s = z.real - t * tau.real
    s -= np.floor(s + 0.5)
    t -= np.floor(t + 0.5)
    return s + t * tau.real + 1j * (t * tau.imag)


def _wp_series(zc: np.ndarray, cell: _Cell) -> tuple[np.ndarray, np.ndarray]:
    """wp and wp' on the reduced lattice at centred arguments."""
    dist = np.abs(zc)
    pole = dist < POLE_EPS
    near = dist < LAURENT_EPS
    zs = np.where(near, 0.25, zc)

    u = np.exp(_TWO_PI_I * zs)
    big = np.abs(u) > 1.0
    v = np.where(big, 1.0 / u, u)
    omv = 1.0 - v
    head_p = -4.0 * v / omv ** 2                      # = 1/sin^2(pi z) / pi^2... scaled below
    head_q = v * (1.0 + v) / omv ** 3
    head_q = np.where(big, -head_q, head_q)

    ks = cell.ks
    # |q^k u^{+-k}| <= |q|^(k/2) for t in [-1/2, 1/2): no overflow.
    ea = np.exp(_TWO_PI_I * np.multiply.outer(ks, cell.tau_r - zs))
    eb = np.exp(_TWO_PI_I * np.multiply.outer(ks, cell.tau_r + zs))
    w = (ks / cell.denom)[:, None]
    sum_p = np.sum(w * (ea + eb), axis=0)
    sum_q = np.sum((ks[:, None] * w) * (eb - ea), axis=0)

    wpv = _PI ** 2 * (head_p - 1.0 / 3.0 + 8.0 * cell.s1 - 4.0 * sum_p)
    wppv = -8j * _PI ** 3 * (head_q + sum_q)

    if np.any(near):
        zl = np.where(pole, 1.0, zc)
        g2, g3 = cell.g2r, cell.g3r
        wp_l = 1.0 / zl ** 2 + (g2 / 20.0) * zl ** 2 + (g3 / 28.0) * zl ** 4
        wpp_l = -2.0 / zl ** 3 + (g2 / 10.0) * zl + (g3 / 7.0) * zl ** 3
        wpv = np.where(near, wp_l, wpv)
        wppv = np.where(near, wpp_l, wppv)
        inf = complex(np.inf, 0.0)
        wpv = np.where(pole, inf, wpv)
        wppv = np.where(pole, inf, wppv)
    return wpv, wppv


def wp_both(z, lattice: Lattice, trunc: int | None = None):
    """Evaluate (wp(z), wp'(z)) for the lattice Z + Z*tau.

    Accepts scalars or arrays.  On lattice points both values are complex
    infinity.
    """
    cell = _cell(lattice.tau, trunc)
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zc = _center(np.atleast_1d(zz) / cell.m, cell.tau_r)
    wpv, wppv = _wp_series(zc, cell)
    with np.errstate(invalid="ignore"):
        wpv = wpv / cell.m ** 2
        wppv = wppv / cell.m ** 3
    inf = complex(np.inf, 0.0)
    wpv = np.where(np.isfinite(wpv), wpv, inf)
    wppv = np.where(np.isfinite(wppv), wppv, inf)
    if scalar:
        return complex(wpv[0]), complex(wppv[0])
    return wpv.reshape(zz.shape), wppv.reshape(zz.shape)


def wp(z, lattice: Lattice, trunc: int | None = None):
    return wp_both(z, lattice, trunc)[0]


def wp_prime(z, lattice: Lattice, trunc: int | None = None):
    return wp_both(z, lattice, trunc)[1]


def wp_both_scaled(z, slat: ScaledLattice, trunc: int | None = None):
    """(wp, wp') for the scaled lattice scale*(Z + Z*tau)."""
    s = slat.scale
    a, b = wp_both(np.asarray(z, dtype=complex) / s, Lattice(slat.tau), trunc)
    return a / s ** 2, b / s ** 3


def wp_scaled(z, slat: ScaledLattice, trunc: int | None = None):
    return wp_both_scaled(z, slat, trunc)[0]


def wp_prime_scaled(z, slat: ScaledLattice, trunc: int | None = None):
    return wp_both_scaled(z, slat, trunc)[1]


@lru_cache(maxsize=256)
def invariants(lattice: Lattice, trunc: int | None = None) -> EllipticInvariants:
    """g2, g3, half-period values, discriminant and j for Z + Z*tau.

    g2 and g3 come from the Eisenstein q-expansions on the reduced lattice
    and are pulled back through the homothety; e1, e2, e3 are wp at the
    half periods 1/2, tau/2, (1+tau)/2 of the original basis.
    """
    cell = _cell(lattice.tau, trunc)
    g2 = cell.g2r / cell.m ** 4
    g3 = cell.g3r / cell.m ** 6
    tau = lattice.tau
    half = np.array([0.5, tau / 2.0, (1.0 + tau) / 2.0])
    e1, e2, e3 = (complex(v) for v in wp(half, lattice, trunc))
    disc = cell.discr / cell.m ** 12
    return EllipticInvariants(g2, g3, e1, e2, e3, disc, 1728.0 * g2 ** 3 / disc)


def invariants_scaled(slat: ScaledLattice, trunc: int | None = None) -> EllipticInvariants:
    base = invariants(Lattice(slat.tau), trunc)
    s = slat.scale
    g2 = base.g2 / s ** 4
    g3 = base.g3 / s ** 6
    disc = g2 ** 3 - 27.0 * g3 ** 2
    return EllipticInvariants(
        g2, g3, base.e1 / s ** 2, base.e2 / s ** 2, base.e3 / s ** 2, disc, base.j
    )


def j_invariant(tau: complex) -> complex:
    return invariants(Lattice(tau)).j


def scale_check(alpha: complex, z: complex, lattice: Lattice) -> float:
    """Residual of wp_{alpha L}(z) = alpha^-2 wp_L(z / alpha).

    The left side is evaluated through the flipped basis (alpha*tau, -alpha)
    of the same lattice, so the two routes exercise independent reductions.
    """
    if alpha == 0:
        raise ValueError("scale factor must be nonzero")
    tau = lattice.tau
    w1 = alpha * tau
    left = wp(z / w1, Lattice(-1.0 / tau)) / w1 ** 2
    right = wp(z / alpha, lattice) / alpha ** 2
    return abs(left - right)
