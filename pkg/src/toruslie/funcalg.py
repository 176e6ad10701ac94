"""The function algebra of a punctured torus and its equivariant elements.

Meromorphic functions on the torus holomorphic away from the origin form
the ring C[wp, wp'] modulo (wp')^2 = 4 wp^3 - g2 wp - g3.  WPoly stores a
canonical representative a(x) + b(x) y of that quotient; TorusFunction is
the numeric side: an evaluator together with a declared pole divisor
bound, which every sampling routine respects.

The construction kernels live here as well: the character projections of
wp'/(wp - wp(alpha)) attached to a cyclic translation group (simple poles
on the orbit of the origin, residue -2 + 2 cos(2 pi j / N) at the origin),
the linear relation P_2j P_-j^2 - P_-2j P_j^2 = lam * P_-k P_k + mu fitted
numerically, the quartet of odd half-period functions built from 1/wp',
and the half-period constants entering the 3x3 intertwiner.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .elliptic import invariants_scaled, wp_both_scaled
from .lattice import (
    Lattice,
    ScaledLattice,
    TorsionPoint,
    shortest_period,
    torus_reduce_centered,
)
from .torusgroup import GroupEmbedding, inverse
from .sl2rep import c2c2_labels, cyclic_labels

__all__ = [
    "C2C2Constants",
    "FitError",
    "InvariantRing",
    "NotInRingError",
    "PSystem",
    "TorusFunction",
    "WPoly",
    "c2c2_constants",
    "c2c2_constants_for",
    "character_project",
    "fit_in_ring",
    "fit_lambda_mu",
    "fit_wpoly",
    "p_big",
    "p_small",
    "residue_at",
    "sample_points",
    "torus_distance",
]

DEFAULT_MARGIN = 0.05


class FitError(RuntimeError):
    """A linear fit could not be stabilised within the retry budget."""


class NotInRingError(ValueError):
    """Held-out residual of a ring fit exceeded the threshold."""


# ---------------------------------------------------------------------------
# the quotient ring


def _poly_add(p, q):
    n = max(len(p), len(q))
    out = [0j] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return tuple(out)


def _poly_mul(p, q):
    if not p or not q:
        return ()
    out = [0j] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for k, b in enumerate(q):
            out[i + k] += a * b
    return tuple(out)


def _poly_scale(p, c):
    return tuple(c * a for a in p)


def _poly_trim(p, tol=0.0):
    lim = max([abs(c) for c in p], default=0.0) * tol
    out = list(p)
    while out and abs(out[-1]) <= lim:
        out.pop()
    return tuple(out)


def _poly_eval(p, x):
    acc = np.zeros_like(np.asarray(x, dtype=complex))
    for c in reversed(p):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class WPoly:
    """Canonical element a(x) + b(x) y of C[x, y]/(y^2 - 4x^3 + g2 x + g3).

    Coefficients ascend in degree.  The attached g2, g3 are the invariants
    of the lattice whose wp, wp' realise x and y; ring operations demand
    they match.
    """

    a: tuple = ()
    b: tuple = ()
    g2: complex = 0j
    g3: complex = 0j

    @classmethod
    def constant(cls, c, g2, g3):
        return cls((complex(c),), (), complex(g2), complex(g3))

    @classmethod
    def x(cls, g2, g3):
        return cls((0j, 1 + 0j), (), complex(g2), complex(g3))

    @classmethod
    def y(cls, g2, g3):
        return cls((), (1 + 0j,), complex(g2), complex(g3))

    def _check(self, other: "WPoly"):
        if abs(self.g2 - other.g2) > 1e-9 * (1 + abs(self.g2)) or abs(
            self.g3 - other.g3
        ) > 1e-9 * (1 + abs(self.g3)):
            raise ValueError("ring invariants g2, g3 do not match")

    def __add__(self, other):
        if not isinstance(other, WPoly):
            other = WPoly.constant(other, self.g2, self.g3)
        self._check(other)
        return WPoly(
            _poly_trim(_poly_add(self.a, other.a)),
            _poly_trim(_poly_add(self.b, other.b)),
            self.g2,
            self.g3,
        )

    def __sub__(self, other):
        if not isinstance(other, WPoly):
            other = WPoly.constant(other, self.g2, self.g3)
        return self + (other * (-1))

    def __mul__(self, other):
        if not isinstance(other, WPoly):
            return WPoly(_poly_scale(self.a, other), _poly_scale(self.b, other), self.g2, self.g3)
        self._check(other)
        aa = _poly_mul(self.a, other.a)
        bb = _poly_mul(self.b, other.b)
        ab = _poly_add(_poly_mul(self.a, other.b), _poly_mul(self.b, other.a))
        # y^2 -> 4x^3 - g2 x - g3
        cubic = (-self.g3, -self.g2, 0j, 4 + 0j)
        return WPoly(
            _poly_trim(_poly_add(aa, _poly_mul(bb, cubic))),
            _poly_trim(ab),
            self.g2,
            self.g3,
        )

    __rmul__ = __mul__

    def chop(self, tol=1e-9):
        # noise threshold shared between the two parts, so a pure-noise
        # y-part does not survive on its own scale
        lim = tol * max(
            [abs(c) for c in self.a] + [abs(c) for c in self.b], default=0.0
        )
        a = tuple(0j if abs(c) <= lim else c for c in self.a)
        b = tuple(0j if abs(c) <= lim else c for c in self.b)
        return WPoly(_poly_trim(a), _poly_trim(b), self.g2, self.g3)

    def eval_xy(self, x, y=None):
        out = _poly_eval(self.a, x)
        if self.b:
            if y is None:
                raise ValueError("y values required for a polynomial with a y part")
            out = out + _poly_eval(self.b, x) * y
        return out

    def degree(self) -> tuple[int, int]:
        return len(_poly_trim(self.a, 1e-12)) - 1, len(_poly_trim(self.b, 1e-12)) - 1

    def is_constant(self, tol=1e-9) -> bool:
        a = _poly_trim(self.a, tol)
        b = _poly_trim(self.b, tol)
        return len(a) <= 1 and len(b) == 0


# ---------------------------------------------------------------------------
# numeric functions on the torus


def torus_distance(z, p, slat: ScaledLattice) -> np.ndarray:
    """Distance from z to p modulo the scaled lattice."""
    zz = (np.asarray(z, dtype=complex) - p) / slat.scale
    t = zz.imag / slat.tau.imag
    s = zz.real - t * slat.tau.real
    s -= np.floor(s + 0.5)
    t -= np.floor(t + 0.5)
    return np.abs(slat.scale) * np.abs(s + t * slat.tau.real + 1j * t * slat.tau.imag)


@dataclass
class TorusFunction:
    """Evaluator plus declared pole data for a meromorphic function.

    ``poles`` are representatives modulo the carrying lattice; pole_order
    bounds the worst order.  The bound is metadata supplied by the
    construction, never inferred.
    """

    fn: object
    lattice: ScaledLattice
    poles: tuple = ()
    pole_order: int = 1
    label: str = ""

    def __call__(self, z):
        zz = np.asarray(z, dtype=complex)
        out = self.fn(np.atleast_1d(zz))
        return complex(out[0]) if zz.ndim == 0 else out.reshape(zz.shape)

    def __mul__(self, other):
        if isinstance(other, TorusFunction):
            if other.lattice != self.lattice:
                raise ValueError("carrying lattices differ")
            return TorusFunction(
                lambda z: self.fn(z) * other.fn(z),
                self.lattice,
                tuple(dict.fromkeys(self.poles + other.poles)),
                self.pole_order + other.pole_order,
            )
        return TorusFunction(
            lambda z: self.fn(z) * other, self.lattice, self.poles, self.pole_order
        )

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, TorusFunction):
            if other.lattice != self.lattice:
                raise ValueError("carrying lattices differ")
            return TorusFunction(
                lambda z: self.fn(z) + other.fn(z),
                self.lattice,
                tuple(dict.fromkeys(self.poles + other.poles)),
                max(self.pole_order, other.pole_order),
            )
        return TorusFunction(
            lambda z: self.fn(z) + other, self.lattice, self.poles, self.pole_order
        )

    def __sub__(self, other):
        return self + (other * (-1) if isinstance(other, TorusFunction) else -other)


def sample_points(
    slat: ScaledLattice,
    n: int,
    rng: np.random.Generator,
    avoid=(),
    margin: float = DEFAULT_MARGIN,
) -> np.ndarray:
    """Seeded points of the fundamental cell, rejection-sampled to keep a
    margin (as a fraction of the shortest period) from every avoided point."""
    short = shortest_period(slat.tau) * abs(slat.scale)
    avoid = np.asarray(list(avoid), dtype=complex)
    out: list[complex] = []
    for _ in range(200):
        m = max(2 * (n - len(out)), 16)
        s = rng.random(m)
        t = rng.random(m)
        z = slat.scale * (s + t * slat.tau)
        if avoid.size:
            d = np.min(
                np.stack([torus_distance(z, p, slat) for p in avoid]), axis=0
            )
            z = z[d >= margin * short]
        out.extend(z.tolist())
        if len(out) >= n:
            return np.asarray(out[:n], dtype=complex)
    raise FitError("rejection sampling starved; margin too large for the pole set")


# ---------------------------------------------------------------------------
# character projections and the P_j system


def _char_values(emb: GroupEmbedding, chi):
    if emb.kind in ("CN_translation", "Cl_rotation"):
        labels = cyclic_labels(emb)
        w = cmath.exp(2j * math.pi / emb.order)
        return {g: w ** (int(chi) * k) for g, k in labels.items()}
    if emb.kind == "C2xC2_translation":
        ci, cj = chi
        return {g: (-1.0) ** (ci * b1 + cj * b2) for g, (b1, b2) in c2c2_labels(emb).items()}
    raise ValueError("character projection needs an abelian embedding")


def character_project(f: TorusFunction, emb: GroupEmbedding, chi) -> TorusFunction:
    """Averaging projection of f onto the chi-isotypical component.

    Evaluates z -> (1/|G|) sum conj(chi(g)) f(sigma(g)^-1 z).
    """
    char = _char_values(emb, chi)
    pairs = [(np.conj(char[g]), inverse(g)) for g in emb.elements]
    norm = 1.0 / emb.order

    def fn(z):
        acc = np.zeros_like(z, dtype=complex)
        for w, ginv in pairs:
            acc += w * f.fn(ginv.apply(z))
        return norm * acc

    poles = []
    for g in emb.elements:
        for p in f.poles:
            poles.append(complex(g.apply(p)))
    poles = tuple(dict.fromkeys(np.round(np.asarray(poles), 12).tolist()))
    return TorusFunction(fn, f.lattice, poles, f.pole_order, label=f"proj[{chi}]")


class PSystem:
    """The family P_j attached to a cyclic translation by an n-torsion point.

    P_j = sum_k w^(-kj) v(z - k alpha) with v = wp'/(wp - wp(alpha)); the
    lattice may be scaled (used for the even-order double covers).
    """

    def __init__(self, slat: ScaledLattice, shift: tuple[Fraction, Fraction], n: int):
        if n < 2:
            raise ValueError("P functions need a translation of order >= 2")
        self.slat = slat
        self.n = n
        self.alpha = complex(slat.scale * (shift[0] + shift[1] * slat.tau))
        self.w = cmath.exp(2j * math.pi / n)
        self.wp_alpha = complex(wp_both_scaled(self.alpha, slat)[0])
        self.orbit = tuple(
            complex(slat.scale * torus_reduce_centered(k * self.alpha / slat.scale, slat.tau))
            for k in range(n)
        )

    def _v_stack(self, z: np.ndarray) -> np.ndarray:
        rows = []
        for k in range(self.n):
            wpv, wppv = wp_both_scaled(z - k * self.alpha, self.slat)
            rows.append(wppv / (wpv - self.wp_alpha))
        return np.stack(rows)

    def values(self, z, js) -> dict:
        """P_j(z) for each j in js, sharing the shifted evaluations."""
        zz = np.atleast_1d(np.asarray(z, dtype=complex))
        stack = self._v_stack(zz)
        ks = np.arange(self.n)
        out = {}
        for j in js:
            phases = self.w ** (-(ks * (j % self.n)))
            out[j] = np.tensordot(phases, stack, axes=(0, 0))
        return out

    def pj(self, j: int) -> TorusFunction:
        jj = j % self.n
        if jj == 0:
            return TorusFunction(
                lambda z: np.zeros_like(z, dtype=complex), self.slat, (), 0, label="P0"
            )
        return TorusFunction(
            lambda z, _j=j: self.values(z, (_j,))[_j],
            self.slat,
            self.orbit,
            1,
            label=f"P{j}",
        )


def _shift_fractions(emb: GroupEmbedding) -> tuple[Fraction, Fraction]:
    r = emb.generators[-1] if emb.kind == "DN" else emb.generators[0]
    return r.shift.fractions


def p_system(emb: GroupEmbedding) -> PSystem:
    if emb.kind not in ("CN_translation", "DN"):
        raise ValueError("P functions are attached to cyclic translations")
    n = emb.order_param
    return PSystem(ScaledLattice(emb.tau), _shift_fractions(emb), n)


def p_big(emb: GroupEmbedding, j: int) -> TorusFunction:
    """The function P_j of a C_N translation embedding."""
    return p_system(emb).pj(j)


def fit_lambda_mu(
    emb: GroupEmbedding,
    j: int,
    k: int | None = None,
    *,
    seed: int = 0,
    tol: float = 1e-7,
    retries: int = 8,
    n_holdout: int = 20,
):
    """Constants (lam, mu) with P_2j P_-j^2 - P_-2j P_j^2 = lam P_-k P_k + mu.

    Two-point linear solve plus held-out validation; ill-conditioned draws
    are resampled up to the retry budget.  When N >= 3, k = +-j and
    2j != 0 mod N the constant mu is asserted nonzero.
    """
    ps = p_system(emb)
    return _fit_lambda_mu_ps(ps, j, k, seed=seed, tol=tol, retries=retries, n_holdout=n_holdout)


def _fit_lambda_mu_ps(ps: PSystem, j, k=None, *, seed=0, tol=1e-7, retries=8, n_holdout=20):
    n = ps.n
    if k is None:
        k = j
    if k % n == 0:
        raise ValueError("k must not vanish mod the group order")
    rng = np.random.default_rng(seed)
    js = sorted({j % n, (-j) % n, (2 * j) % n, (-2 * j) % n, k % n, (-k) % n})

    def lhs_rhs(z):
        vals = ps.values(z, js)
        lhs = (
            vals[(2 * j) % n] * vals[(-j) % n] ** 2
            - vals[(-2 * j) % n] * vals[j % n] ** 2
        )
        basis = vals[(-k) % n] * vals[k % n]
        return lhs, basis

    last_res = np.inf
    for _ in range(retries):
        z = sample_points(ps.slat, 2 + n_holdout, rng, avoid=ps.orbit, margin=0.08)
        lhs, basis = lhs_rhs(z)
        det = basis[0] - basis[1]
        scale = max(1.0, float(np.max(np.abs(basis[:2]))))
        if abs(det) < 1e-8 * scale:
            continue
        lam = (lhs[0] - lhs[1]) / det
        mu = lhs[0] - lam * basis[0]
        res = np.max(np.abs(lhs[2:] - (lam * basis[2:] + mu)))
        res /= max(1.0, float(np.max(np.abs(lhs[2:]))))
        if res < tol:
            if n >= 3 and (k - j) % n in (0, (-2 * j) % n) and (2 * j) % n != 0:
                if abs(mu) <= 1e-9:
                    raise FitError(f"mu unexpectedly vanishes (N={n}, j={j}, k={k})")
            return complex(lam), complex(mu)
        last_res = res
    raise FitError(f"lambda/mu fit failed; final residual {last_res:.3g}")


# ---------------------------------------------------------------------------
# contour residues


def residue_at(f: TorusFunction, p: complex, n_nodes: int = 128, radius: float | None = None) -> complex:
    """(1/2*pi*i) * contour integral of f on a circle around p.

    Trapezoidal quadrature on the circle is spectrally accurate for the
    meromorphic integrand; the radius defaults to just under half the
    distance to the nearest other declared pole, capped well inside the
    fundamental cell.
    """
    p = complex(p)
    short = shortest_period(f.lattice.tau) * abs(f.lattice.scale)
    iso = short
    for q in f.poles:
        d = float(torus_distance(p, q, f.lattice))
        if d > 1e-9 * short:
            iso = min(iso, d)
    if radius is None:
        radius = 0.45 * min(iso, short)
    if radius >= 0.5 * short:
        raise ValueError("contour circle leaves the isolation cell of the pole")
    for q in f.poles:
        d = float(torus_distance(p, q, f.lattice))
        if d > 1e-9 * short and d < radius + 1e-9 * short:
            raise ValueError("contour circle intersects another declared pole")
    theta = 2.0 * math.pi * np.arange(n_nodes) / n_nodes
    ring = radius * np.exp(1j * theta)
    vals = f(p + ring)
    return complex(np.mean(vals * ring))


# ---------------------------------------------------------------------------
# the C2 x C2 quartet and its constants


def p_small(emb: GroupEmbedding) -> tuple[TorusFunction, TorusFunction, TorusFunction]:
    """(p0, p1, p2): signed half-period averages of 1/wp'.

    p2 is even under the first generator and odd under the second, p1 the
    reverse, p0 odd under both; all three are odd in z with simple poles on
    the four half-period points.
    """
    if emb.kind != "C2xC2_translation":
        raise ValueError("the half-period quartet needs a C2 x C2 translation embedding")
    slat = ScaledLattice(emb.tau)
    r1, r2 = emb.generators[:2]
    s1 = complex(r1.shift.to_complex(emb.tau))
    s2 = complex(r2.shift.to_complex(emb.tau))
    shifts = (0.0, s1, s2, s1 + s2)
    signs = {
        "p2": (1.0, 1.0, -1.0, -1.0),
        "p1": (1.0, -1.0, 1.0, -1.0),
        "p0": (1.0, -1.0, -1.0, 1.0),
    }
    poles = tuple(
        complex(torus_reduce_centered(s, emb.tau)) for s in shifts
    )

    def make(sgn):
        def fn(z):
            acc = np.zeros_like(z, dtype=complex)
            for c, s in zip(sgn, shifts):
                wpv, wppv = wp_both_scaled(z - s, slat)
                acc += c / wppv
            return acc

        return fn

    out = tuple(
        TorusFunction(make(signs[name]), slat, poles, 1, label=name)
        for name in ("p0", "p1", "p2")
    )
    return out


@dataclass(frozen=True)
class C2C2Constants:
    """Half-period constants of the quartet relations.

    p1^2 = alpha1 p2^2 + alpha2 and p0^2 = beta1 p2^2 + beta2; A1, B1 are
    3/2-power branches of the e-difference ratios, and sqrt_a2b2 the
    branch-consistent square root of alpha2*beta2 obtained in closed form
    as A1 B1 (alpha2/alpha1 - beta2/beta1).
    """

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex
    A1: complex
    B1: complex
    sqrt_a2b2: complex


def _constants_from_e(e1, e2, e3, hexagonal: bool) -> C2C2Constants:
    a = (e1 - e3) / (e2 - e3)
    b = (e1 - e2) / (e2 - e3)
    alpha1 = a ** 2
    beta1 = b ** 2
    alpha2 = 4.0 / ((e1 - e2) * (e2 - e3) ** 2)
    beta2 = 4.0 / ((e1 - e3) * (e2 - e3) ** 2)
    A1 = a ** 1.5
    B1 = b ** 1.5
    if hexagonal and abs(A1 - 1j) < 1e-6 and abs(B1 + 1.0) < 1e-6:
        # simultaneous sign flip: keeps A1*B1, makes the order-3 element of
        # A4 fix the Cartan generator
        A1, B1 = -A1, -B1
    sqrt_a2b2 = A1 * B1 * (alpha2 / alpha1 - beta2 / beta1)
    return C2C2Constants(alpha1, alpha2, beta1, beta2, A1, B1, sqrt_a2b2)


def c2c2_constants(lattice: Lattice) -> C2C2Constants:
    """Constants for the standard Klein generators (shifts 1/2 and tau/2)."""
    from .elliptic import invariants
    from .lattice import is_hexagonal_class

    inv = invariants(lattice)
    return _constants_from_e(inv.e1, inv.e2, inv.e3, is_hexagonal_class(lattice.tau))


def c2c2_constants_for(emb: GroupEmbedding) -> C2C2Constants:
    """Constants matched to the embedding's own generator shifts.

    The quartet relations pair each squared projection with the value of
    wp at one specific half period: wp(s1) plays e1, wp(s2) plays e2 and
    wp(s1 + s2) plays e3.  Adapted generator choices (an A4 on a
    hexagonal basis with permuted half-period labels) permute the values
    accordingly; for the standard generators this is c2c2_constants.
    """
    from .lattice import is_hexagonal_class

    if emb.kind != "C2xC2_translation":
        raise ValueError("half-period constants need a C2 x C2 translation embedding")
    slat = ScaledLattice(emb.tau)
    r1, r2 = emb.generators[:2]
    s1 = complex(r1.shift.to_complex(emb.tau))
    s2 = complex(r2.shift.to_complex(emb.tau))
    e1 = complex(wp_both_scaled(s1, slat)[0])
    e2 = complex(wp_both_scaled(s2, slat)[0])
    e3 = complex(wp_both_scaled(s1 + s2, slat)[0])
    return _constants_from_e(e1, e2, e3, is_hexagonal_class(emb.tau))


# ---------------------------------------------------------------------------
# fitting numeric functions into the ring


@dataclass(frozen=True)
class InvariantRing:
    """Descriptor of the invariant function ring of one symmetry case.

    variable: "full" means C[x, y] with x = wp, y = wp' of slat; the other
    flavours are the single-generator rings C[wp], C[wp^2], C[wp^3],
    C[wp'].
    """

    slat: ScaledLattice
    variable: str = "full"

    def var_order(self) -> int:
        return {"full": 2, "wp": 2, "wp2": 4, "wp3": 6, "wp_prime": 3}[self.variable]

    def values(self, z):
        wpv, wppv = wp_both_scaled(z, self.slat)
        if self.variable == "full":
            return wpv, wppv
        if self.variable == "wp":
            return wpv, None
        if self.variable == "wp2":
            return wpv ** 2, None
        if self.variable == "wp3":
            return wpv ** 3, None
        if self.variable == "wp_prime":
            return wppv, None
        raise ValueError(self.variable)

    def invariants(self):
        return invariants_scaled(self.slat)


def fit_in_ring(
    f: TorusFunction,
    ring: InvariantRing,
    pole_bound: int,
    *,
    seed: int = 0,
    tol: float = 1e-6,
    margin: float = 0.12,
) -> WPoly:
    """Least-squares expansion of f in the ring, with held-out validation.

    pole_bound is the declared order of f at the ring's lattice points; it
    fixes which monomials may appear.  Rows are weighted by 1/max(1, |f|)
    so the fit controls relative error where the values are large; the
    held-out residual is per-point relative on the same scale.  A residual
    above tol means f does not live in the ring (or the bound is wrong)
    -> NotInRingError.
    """
    inv = ring.invariants()
    da = pole_bound // ring.var_order()
    db = (pole_bound - 3) // 2 if ring.variable == "full" else -1
    n_cols = (da + 1) + (db + 1)
    rng = np.random.default_rng(seed)
    avoid = tuple(f.poles) + (0.0 + 0.0j,)
    n_fit = 3 * n_cols + 8
    n_hold = max(12, n_cols + 4)
    z = sample_points(ring.slat, n_fit + n_hold, rng, avoid=avoid, margin=margin)
    x, y = ring.values(z)
    # precondition: work in x/c with c the typical magnitude, so the
    # Vandermonde columns stay O(1) even on small-covolume lattices
    c = float(np.median(np.abs(x))) or 1.0
    xs = x / c
    cols = [xs ** i for i in range(da + 1)]
    if db >= 0:
        ys = y / c ** 1.5
        cols += [ys * xs ** i for i in range(db + 1)]
    design = np.stack(cols, axis=1)
    rhs = f(z)
    w = 1.0 / np.maximum(1.0, np.abs(rhs))
    a_mat = design[:n_fit] * w[:n_fit, None]
    b_vec = rhs[:n_fit] * w[:n_fit]

    def solve(mat, vec):
        sol, *_ = np.linalg.lstsq(mat, vec, rcond=None)
        # one step of iterative refinement squeezes out the last digits
        sol += np.linalg.lstsq(mat, vec - mat @ sol, rcond=None)[0]
        return sol

    coeff = solve(a_mat, b_vec)
    # drop columns whose coefficient is at the noise floor, then refit the
    # reduced model: the surviving coefficients re-optimise, so no
    # accuracy is lost to the deletion (never zero a coefficient in place;
    # least-squares errors are correlated and cancel at evaluation time)
    keep = np.abs(coeff) > 1e-10 * max(1e-300, float(np.max(np.abs(coeff))))
    if not np.all(keep) and np.any(keep):
        reduced = solve(a_mat[:, keep], b_vec)
        coeff = np.zeros_like(coeff)
        coeff[keep] = reduced
    resid = np.abs(design[n_fit:] @ coeff - rhs[n_fit:]) * w[n_fit:]
    rel = float(np.max(resid))
    if rel > tol:
        raise NotInRingError(
            f"held-out residual {rel:.3g} exceeds {tol:.3g} for variable {ring.variable!r}"
        )
    a = tuple(coeff[i] / c ** i for i in range(da + 1))
    b = tuple(coeff[da + 1 + i] / c ** (1.5 + i) for i in range(db + 1)) if db >= 0 else ()
    return WPoly(_poly_trim(a), _poly_trim(b), inv.g2, inv.g3)


def fit_wpoly(
    f: TorusFunction,
    lattice_of_ring,
    degree_bound: int,
    *,
    seed: int = 0,
    tol: float = 1e-6,
) -> WPoly:
    """Fit f as a(x) + b(x) y over wp, wp' of the given (possibly scaled) lattice."""
    if isinstance(lattice_of_ring, Lattice):
        slat = ScaledLattice.from_lattice(lattice_of_ring)
    else:
        slat = lattice_of_ring
    return fit_in_ring(f, InvariantRing(slat, "full"), degree_bound, seed=seed, tol=tol)
