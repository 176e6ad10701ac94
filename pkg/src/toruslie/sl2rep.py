"""sl2 arithmetic and the finite group actions on it.

The global basis is B = (h, e, f) with [h, e] = 2e, [h, f] = -2f,
[e, f] = h.  Automorphisms of sl2 are conjugations X -> m X m^-1 by
invertible 2x2 matrices taken modulo scalars (PGL2 = PSL2 over C), stored
as 3x3 matrices over B.

Convention for the cyclic actions: the generator scales e by a primitive
root of unity,

    rho(r): (a, b; c, -a) -> (a, w^j b; w^-j c, -a),   w = exp(2*pi*i/N).

For odd N this is Ad of diag(w^j, w^-j) relabelled (j -> 2j is invertible
mod N); for even N it is Ad of the diag(w_2N^j, w_2N^-j) lift, the only
way the action of C_N is faithful.  The dihedral reflection acts by
conjugation with the antidiagonal flip (determinant -1, legitimate in
PGL2), sending (h, e, f) -> (-h, f, e).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .torusgroup import AffineAutomorphism, GroupEmbedding, compose

__all__ = [
    "B_H",
    "B_E",
    "B_F",
    "GroupRepresentation",
    "ad",
    "bracket",
    "coeffs",
    "from_coeffs",
    "isotypical_projection",
    "standard_rep",
    "cyclic_labels",
    "c2c2_labels",
]

B_H = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
B_E = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
B_F = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
_BASIS = (B_H, B_E, B_F)


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def coeffs(x: np.ndarray) -> np.ndarray:
    """Coordinates of a traceless 2x2 matrix over (h, e, f)."""
    return np.stack([x[..., 0, 0], x[..., 0, 1], x[..., 1, 0]], axis=-1)


def from_coeffs(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    h, e, f = v[..., 0], v[..., 1], v[..., 2]
    out = np.empty(v.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = h
    out[..., 0, 1] = e
    out[..., 1, 0] = f
    out[..., 1, 1] = -h
    return out


def ad(m: np.ndarray) -> np.ndarray:
    """3x3 matrix of X -> m X m^-1 over the basis (h, e, f)."""
    m = np.asarray(m, dtype=complex)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-14:
        raise ValueError("conjugating matrix is singular")
    minv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex) / det
    cols = [coeffs(m @ b @ minv) for b in _BASIS]
    return np.stack(cols, axis=1)


def _diag_action(w: complex) -> np.ndarray:
    """(h, e, f) -> (h, w e, w^-1 f)."""
    return np.diag([1.0, w, 1.0 / w]).astype(complex)


_FLIP = np.array([[-1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)  # Ad of antidiag(1, 1)
_R1_3 = np.diag([1.0, -1.0, -1.0]).astype(complex)                   # Ad of diag(i, -i)
_R2_3 = np.array([[-1, 0, 0], [0, 0, -1], [0, -1, 0]], dtype=complex)  # Ad of (0,1;-1,0)
_A4_S = 0.5 * np.array(
    [[0, -1j, 1j], [2, 1j, 1j], [2, -1j, -1j]], dtype=complex
)  # Ad of (1/2)(1+i, -1+i; 1+i, 1-i)


@dataclass(frozen=True)
class GroupRepresentation:
    """Assignment of 3x3 sl2-automorphisms to the elements of an embedding."""

    emb: GroupEmbedding
    mats: dict

    def __getitem__(self, g: AffineAutomorphism) -> np.ndarray:
        return self.mats[g]

    def is_faithful(self, tol: float = 1e-10) -> bool:
        eye = np.eye(3)
        return all(
            g.is_identity or np.max(np.abs(self.mats[g] - eye)) > tol
            for g in self.emb.elements
        )


def _cyclic_eigen(n: int, j: int) -> np.ndarray:
    """Generator image for C_N with faithful e-eigenvalue convention."""
    if n % 2 == 1:
        # Ad(diag(w^j, w^-j)): e picks up w^(2j)
        w = cmath.exp(2j * math.pi * (2 * j) / n)
    else:
        w = cmath.exp(2j * math.pi * j / n)
    return _diag_action(w)


def _extend(emb: GroupEmbedding, gen_images: dict) -> dict:
    """BFS extension of generator images to the whole group, with a
    well-definedness check that makes the assignment a homomorphism."""
    mats = {g: m for g, m in gen_images.items()}
    ident = next(g for g in emb.elements if g.is_identity)
    mats[ident] = np.eye(3, dtype=complex)
    frontier = list(mats)
    while frontier:
        nxt = []
        for g in frontier:
            for s, ms in gen_images.items():
                h = compose(s, g)
                m = ms @ mats[g]
                if h in mats:
                    if np.max(np.abs(mats[h] - m)) > 1e-10:
                        raise ValueError("generator images violate the group relations")
                else:
                    mats[h] = m
                    nxt.append(h)
        frontier = nxt
    assert len(mats) == emb.order
    return mats


def standard_rep(emb: GroupEmbedding, j: int = 1) -> GroupRepresentation:
    """The concrete sl2-action used for the normal forms.

    C_N (translations and rotations): generator -> e-eigenvalue
    exp(2*pi*i*j'/N) as in the module docstring; D_N adds the antidiagonal
    flip; C2 x C2 is the quaternion double-cover action; A4 extends it by
    the order-3 element.
    """
    kind = emb.kind
    if kind == "CN_translation":
        n = emb.order_param
        if n == 1:
            return GroupRepresentation(emb, {emb.elements[0]: np.eye(3, dtype=complex)})
        if math.gcd(j, n) != 1:
            raise ValueError(f"character index {j} is not coprime to {n}")
        r = next(g for g in emb.generators)
        return GroupRepresentation(emb, _extend(emb, {r: _cyclic_eigen(n, j)}))
    if kind == "Cl_rotation":
        ell = emb.order_param
        if math.gcd(j, ell) != 1:
            raise ValueError(f"character index {j} is not coprime to {ell}")
        s = emb.generators[0]
        w = cmath.exp(2j * math.pi * j / ell)
        return GroupRepresentation(emb, _extend(emb, {s: _diag_action(w)}))
    if kind == "DN":
        n = emb.order_param
        s, r = emb.generators
        images = {s: _FLIP.copy()}
        if n > 1:
            if math.gcd(j, n) != 1:
                raise ValueError(f"character index {j} is not coprime to {n}")
            images[r] = _cyclic_eigen(n, j)
        return GroupRepresentation(emb, _extend(emb, images))
    if kind == "C2xC2_translation":
        r1, r2 = emb.generators
        return GroupRepresentation(emb, _extend(emb, {r1: _R1_3, r2: _R2_3}))
    if kind == "A4":
        s, r1, r2 = emb.generators
        return GroupRepresentation(emb, _extend(emb, {s: _A4_S, r1: _R1_3, r2: _R2_3}))
    raise ValueError(f"unknown embedding kind {kind!r}")


def cyclic_labels(emb: GroupEmbedding) -> dict:
    """element -> exponent k for a cyclic embedding generated by emb.generators[0]."""
    gen = emb.generators[-1] if emb.kind == "DN" else emb.generators[0]
    labels = {}
    g = next(e for e in emb.elements if e.is_identity)
    for k in range(emb.order):
        labels[g] = k
        g = compose(gen, g)
    return labels


def c2c2_labels(emb: GroupEmbedding) -> dict:
    """element -> (i, j) bits over the two generators of C2 x C2."""
    r1, r2 = emb.generators[:2]
    out = {}
    for i in (0, 1):
        for jj in (0, 1):
            g = next(e for e in emb.elements if e.is_identity)
            if i:
                g = compose(r1, g)
            if jj:
                g = compose(r2, g)
            out[g] = (i, jj)
    assert len(out) == 4
    return out


def isotypical_projection(rep: GroupRepresentation, chi) -> list[np.ndarray]:
    """Basis of the chi-isotypical component of sl2 under an abelian action.

    chi is either an integer character index for a cyclic embedding
    (chi_j(r^k) = w^(jk)) or a pair (i, j) for C2 x C2.  Returns a list of
    coordinate vectors over (h, e, f); the image of the averaging
    projector (1/|G|) sum conj(chi(g)) rho(g).
    """
    emb = rep.emb
    if emb.kind in ("CN_translation", "Cl_rotation"):
        labels = cyclic_labels(emb)
        n = emb.order
        w = cmath.exp(2j * math.pi / n)
        char = {g: w ** (int(chi) * k) for g, k in labels.items()}
    elif emb.kind == "C2xC2_translation":
        bits = c2c2_labels(emb)
        ci, cj = chi
        char = {g: (-1.0) ** (ci * b1 + cj * b2) for g, (b1, b2) in bits.items()}
    else:
        raise ValueError("isotypical projection needs an abelian embedding")
    proj = sum(np.conj(char[g]) * rep.mats[g] for g in emb.elements) / emb.order
    u, s, _ = np.linalg.svd(proj)
    rank = int(np.sum(s > 1e-10))
    return [u[:, k] for k in range(rank)]
