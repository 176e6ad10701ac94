import numpy as np
import pytest

from toruslie.elliptic import invariants, wp_both, wp_both_scaled
from toruslie.funcalg import (
    FitError,
    InvariantRing,
    NotInRingError,
    TorusFunction,
    WPoly,
    c2c2_constants,
    character_project,
    fit_in_ring,
    fit_lambda_mu,
    fit_wpoly,
    p_big,
    p_small,
    p_system,
    residue_at,
    sample_points,
)
from toruslie.lattice import HEX_TAU, Lattice, ScaledLattice
from toruslie.torusgroup import c2c2_translation, cl_rotation, cn_translation, quotient_scaled

GENERIC = complex(0.31, 1.07)
L_GEN = Lattice(GENERIC)
L_SQ = Lattice(1j)
L_HEX = Lattice(HEX_TAU)
W3 = np.exp(2j * np.pi / 3)


def wp_function(lat: Lattice) -> TorusFunction:
    slat = ScaledLattice(lat.tau)
    return TorusFunction(lambda z: wp_both_scaled(z, slat)[0], slat, (0j,), 2, "wp")


def wpp_function(lat: Lattice) -> TorusFunction:
    slat = ScaledLattice(lat.tau)
    return TorusFunction(lambda z: wp_both_scaled(z, slat)[1], slat, (0j,), 3, "wp'")


class TestWPoly:
    def setup_method(self):
        inv = invariants(L_GEN)
        self.g2, self.g3 = inv.g2, inv.g3
        self.x = WPoly.x(self.g2, self.g3)
        self.y = WPoly.y(self.g2, self.g3)
        self.one = WPoly.constant(1, self.g2, self.g3)

    def test_y_squared_reduces(self):
        w = self.y * self.y
        assert w.b == ()
        assert np.allclose(w.a, (-self.g3, -self.g2, 0, 4))

    def test_multiplicative_identity(self):
        f = self.x * self.x + 3 * self.y + self.one
        g = f * self.one
        assert np.allclose(g.a, f.a) and np.allclose(g.b, f.b)

    def test_difference_of_squares(self):
        # (x + y)(x - y) = x^2 - y^2 = x^2 - 4x^3 + g2 x + g3
        w = (self.x + self.y) * (self.x - self.y)
        assert w.b == ()
        assert np.allclose(w.a, (self.g3, self.g2, 1, -4))

    def test_eval_matches_ring_arithmetic(self):
        rng = np.random.default_rng(0)
        slat = ScaledLattice(GENERIC)
        z = sample_points(slat, 20, rng, avoid=(0j,), margin=0.15)
        xv, yv = wp_both_scaled(z, slat)
        for _ in range(5):
            ca = rng.normal(size=3) + 1j * rng.normal(size=3)
            cb = rng.normal(size=2) + 1j * rng.normal(size=2)
            f = WPoly(tuple(ca), tuple(cb), self.g2, self.g3)
            g = WPoly(tuple(cb), tuple(ca[:2]), self.g2, self.g3)
            lhs = (f * g).eval_xy(xv, yv)
            rhs = f.eval_xy(xv, yv) * g.eval_xy(xv, yv)
            assert np.max(np.abs(lhs - rhs) / (1 + np.abs(rhs))) < 1e-8

    def test_mismatched_invariants_rejected(self):
        other = WPoly.x(self.g2 + 1, self.g3)
        with pytest.raises(ValueError):
            _ = self.x * other


class TestCharacterProject:
    def test_even_function_survives_trivial_character(self):
        emb = cl_rotation(L_GEN, 2)
        f = wp_function(L_GEN)
        proj = character_project(f, emb, 0)
        rng = np.random.default_rng(1)
        z = sample_points(f.lattice, 30, rng, avoid=proj.poles, margin=0.1)
        assert np.max(np.abs(proj(z) - f(z))) < 1e-9

    def test_odd_function_killed_by_trivial_character(self):
        emb = cl_rotation(L_GEN, 2)
        f = wpp_function(L_GEN)
        proj = character_project(f, emb, 0)
        rng = np.random.default_rng(2)
        z = sample_points(f.lattice, 30, rng, avoid=proj.poles, margin=0.1)
        assert np.max(np.abs(proj(z))) < 1e-9

    def test_wp_lives_in_chi2_of_c3(self):
        emb = cl_rotation(L_HEX, 3)
        f = wp_function(L_HEX)
        proj = character_project(f, emb, 2)
        rng = np.random.default_rng(3)
        z = sample_points(f.lattice, 30, rng, avoid=proj.poles, margin=0.1)
        assert np.max(np.abs(proj(z) - f(z))) < 1e-9

    def test_projections_idempotent_and_sum_to_identity(self):
        emb = cn_translation(L_GEN, 3)
        f = wp_function(L_GEN)
        rng = np.random.default_rng(4)
        projs = [character_project(f, emb, j) for j in range(3)]
        avoid = tuple({p for pr in projs for p in pr.poles})
        z = sample_points(f.lattice, 20, rng, avoid=avoid, margin=0.1)
        total = sum(p(z) for p in projs)
        assert np.max(np.abs(total - f(z))) < 1e-9
        twice = character_project(projs[1], emb, 1)
        assert np.max(np.abs(twice(z) - projs[1](z))) < 1e-9

    def test_transforms_by_character(self):
        emb = cn_translation(L_GEN, 4)
        f = wpp_function(L_GEN)
        proj = character_project(f, emb, 1)
        alpha = 0.25
        rng = np.random.default_rng(5)
        z = sample_points(f.lattice, 20, rng, avoid=proj.poles, margin=0.1)
        # r . g = chi_1(r) g means g(z - alpha) = i g(z)
        assert np.max(np.abs(proj(z - alpha) - 1j * proj(z))) < 1e-9

    def test_nonabelian_rejected(self):
        from toruslie.torusgroup import dn_group

        with pytest.raises(ValueError):
            character_project(wp_function(L_GEN), dn_group(L_GEN, 3), 0)


class TestPBig:
    def test_p0_vanishes(self):
        emb = cn_translation(L_GEN, 4)
        p0 = p_big(emb, 0)
        rng = np.random.default_rng(6)
        z = sample_points(p0.lattice, 50, rng, margin=0.0)
        assert np.max(np.abs(p0(z))) < 1e-9

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_residues_at_origin(self, n):
        emb = cn_translation(L_GEN, n)
        for j in range(1, n):
            pj = p_big(emb, j)
            res = residue_at(pj, 0.0)
            expect = -2.0 + 2.0 * np.cos(2 * np.pi * j / n)
            assert abs(res - expect) < 1e-6

    def test_parity_exchange(self):
        emb = cn_translation(L_GEN, 5)
        ps = p_system(emb)
        rng = np.random.default_rng(7)
        z = sample_points(ps.slat, 50, rng, avoid=ps.orbit, margin=0.05)
        vals = ps.values(z, (1, 2, 3, 4))
        negs = ps.values(-z, (1, 2, 3, 4))
        for j in (1, 2, 3, 4):
            assert np.max(np.abs(negs[j] + vals[(-j) % 5])) < 1e-8

    def test_character_twist(self):
        n = 3
        emb = cn_translation(L_GEN, n)
        p1 = p_big(emb, 1)
        alpha = 1.0 / 3.0
        rng = np.random.default_rng(8)
        z = sample_points(p1.lattice, 30, rng, avoid=p1.poles, margin=0.08)
        w = np.exp(2j * np.pi / 3)
        assert np.max(np.abs(p1(z - alpha) - w * p1(z))) < 1e-8

    def test_poles_are_simple(self):
        emb = cn_translation(L_GEN, 3)
        p1 = p_big(emb, 1)
        for r in (1e-3, 1e-4):
            z = np.array([r, r * 1j, -r])
            assert np.max(np.abs(z * p1(z))) < 10.0

    def test_residue_transforms_along_orbit(self):
        # the twist moves residues by the character; poles sit on the
        # whole orbit with equal magnitude
        emb = cn_translation(L_GEN, 4)
        p1 = p_big(emb, 1)
        r0 = residue_at(p1, 0.0)
        r1 = residue_at(p1, 0.25)
        assert abs(r1 - (-1j) * r0) < 1e-6
        assert abs(abs(r1) - abs(r0)) < 1e-6

    def test_value_pairs_separate_points(self):
        # ring-generator spot check for N = 3: the pair (P1, P2) separates
        # the sampled points of the punctured torus
        emb = cn_translation(L_GEN, 3)
        ps = p_system(emb)
        rng = np.random.default_rng(21)
        z = sample_points(ps.slat, 40, rng, avoid=ps.orbit, margin=0.05)
        vals = ps.values(z, (1, 2))
        pairs = np.stack([vals[1], vals[2]], axis=1)
        for i in range(len(z)):
            for k in range(i + 1, len(z)):
                assert np.max(np.abs(pairs[i] - pairs[k])) > 1e-8


class TestLambdaMu:
    def test_identity_holds_on_holdout(self):
        emb = cn_translation(L_GEN, 5)
        lam, mu = fit_lambda_mu(emb, 1, 1)
        ps = p_system(emb)
        rng = np.random.default_rng(9)
        z = sample_points(ps.slat, 20, rng, avoid=ps.orbit, margin=0.1)
        vals = ps.values(z, (1, 2, 3, 4))
        lhs = vals[2] * vals[4] ** 2 - vals[3] * vals[1] ** 2
        rhs = lam * vals[4] * vals[1] + mu
        assert np.max(np.abs(lhs - rhs) / (1 + np.abs(lhs))) < 1e-7

    def test_mu_nonzero(self):
        for n, j in ((5, 2), (3, 1), (4, 1), (6, 1)):
            emb = cn_translation(L_GEN, n)
            _, mu = fit_lambda_mu(emb, j, j)
            assert abs(mu) > 1e-9

    def test_n4_j1(self):
        emb = cn_translation(L_GEN, 4)
        lam, mu = fit_lambda_mu(emb, 1, 1)
        ps = p_system(emb)
        rng = np.random.default_rng(10)
        z = sample_points(ps.slat, 20, rng, avoid=ps.orbit, margin=0.1)
        vals = ps.values(z, (1, 2, 3))
        lhs = vals[2] * vals[3] ** 2 - vals[2] * 0 - (vals[(-2) % 4] * 0)
        lhs = vals[2] * vals[3] ** 2 - vals[(-2) % 4] * vals[1] ** 2
        rhs = lam * vals[3] * vals[1] + mu
        assert np.max(np.abs(lhs - rhs) / (1 + np.abs(lhs))) < 1e-7

    def test_k_zero_rejected(self):
        emb = cn_translation(L_GEN, 4)
        with pytest.raises(ValueError):
            fit_lambda_mu(emb, 1, 4)


class TestResidues:
    def test_wp_residue_zero(self):
        f = wp_function(L_GEN)
        assert abs(residue_at(f, 0.0)) < 1e-9

    def test_v_residue_minus_two(self):
        # wp'/(wp - wp(alpha)) has residue -2 at the origin
        alpha = 0.25
        slat = ScaledLattice(GENERIC)
        wpa = wp_both_scaled(alpha, slat)[0]

        def fn(z):
            w, wq = wp_both_scaled(z, slat)
            return wq / (w - wpa)

        f = TorusFunction(fn, slat, (0j, 0.25, -0.25), 1)
        assert abs(residue_at(f, 0.0) + 2.0) < 1e-6

    def test_circle_collision_rejected(self):
        f = wp_function(L_GEN)
        with pytest.raises(ValueError):
            residue_at(f, 0.0, radius=2.0)


class TestPSmall:
    def test_trivial_character_projection_vanishes(self):
        emb = c2c2_translation(L_GEN)
        f = TorusFunction(
            lambda z: 1.0 / wp_both_scaled(z, ScaledLattice(GENERIC))[1],
            ScaledLattice(GENERIC),
            (0.5 + 0j, GENERIC / 2, (1 + GENERIC) / 2),
            1,
        )
        proj = character_project(f, emb, (0, 0))
        rng = np.random.default_rng(11)
        z = sample_points(f.lattice, 30, rng, avoid=proj.poles, margin=0.1)
        assert np.max(np.abs(proj(z))) < 1e-9

    def test_characters_and_oddness(self):
        emb = c2c2_translation(L_GEN)
        p0, p1, p2 = p_small(emb)
        rng = np.random.default_rng(12)
        z = sample_points(p0.lattice, 30, rng, avoid=p0.poles, margin=0.08)
        s1, s2 = 0.5, GENERIC / 2
        # r1 . p1 = -p1, r2 . p1 = p1
        assert np.max(np.abs(p1(z + s1) + p1(z))) < 1e-9
        assert np.max(np.abs(p1(z + s2) - p1(z))) < 1e-9
        assert np.max(np.abs(p2(z + s1) - p2(z))) < 1e-9
        assert np.max(np.abs(p2(z + s2) + p2(z))) < 1e-9
        assert np.max(np.abs(p0(z + s1) + p0(z))) < 1e-9
        for p in (p0, p1, p2):
            assert np.max(np.abs(p(z) + p(-z))) < 1e-9

    def test_square_relations(self):
        for lat in (L_SQ, L_HEX, L_GEN):
            emb = c2c2_translation(lat)
            p0, p1, p2 = p_small(emb)
            cc = c2c2_constants(lat)
            rng = np.random.default_rng(13)
            z = sample_points(p0.lattice, 30, rng, avoid=p0.poles, margin=0.08)
            assert np.max(np.abs(p1(z) ** 2 - cc.alpha1 * p2(z) ** 2 - cc.alpha2)) < 1e-7
            assert np.max(np.abs(p0(z) ** 2 - cc.beta1 * p2(z) ** 2 - cc.beta2)) < 1e-7

    def test_sum_of_squares_constant_iff_g2_zero(self):
        for lat, const in ((L_HEX, True), (L_GEN, False), (L_SQ, False)):
            emb = c2c2_translation(lat)
            p0, p1, p2 = p_small(emb)
            rng = np.random.default_rng(14)
            z = sample_points(p0.lattice, 40, rng, avoid=p0.poles, margin=0.1)
            s = p0(z) ** 2 + p1(z) ** 2 + p2(z) ** 2
            spread = np.max(np.abs(s - s[0]))
            assert (spread < 1e-7) == const

    def test_wrong_kind_rejected(self):
        with pytest.raises(ValueError):
            p_small(cn_translation(L_GEN, 2))


class TestC2C2Constants:
    def test_square_lattice_values(self):
        cc = c2c2_constants(L_SQ)
        assert abs(cc.alpha1 - 1.0) < 1e-9
        assert abs(cc.beta1 - 4.0) < 1e-9

    def test_hexagonal_values(self):
        cc = c2c2_constants(L_HEX)
        assert abs(cc.alpha1 - W3) < 1e-9
        assert abs(cc.beta1 - W3 ** 2) < 1e-9
        assert abs(cc.alpha1 * cc.beta1 - 1.0) < 1e-9
        assert abs(cc.A1 + 1j) < 1e-9
        assert abs(cc.B1 - 1.0) < 1e-9

    def test_a1_squared_is_ratio_cubed(self):
        for lat in (L_SQ, L_HEX, L_GEN):
            inv = invariants(lat)
            cc = c2c2_constants(lat)
            assert abs(cc.A1 ** 2 - ((inv.e1 - inv.e3) / (inv.e2 - inv.e3)) ** 3) < 1e-9
            assert abs(cc.sqrt_a2b2 ** 2 - cc.alpha2 * cc.beta2) < 1e-12

    def test_mixed_identity(self):
        # (A1/a1 p1 + B1/b1 p0)(A1/a1 p1 - B1/b1 p0) = p2^2
        for lat in (L_SQ, L_HEX, L_GEN):
            emb = c2c2_translation(lat)
            p0, p1, p2 = p_small(emb)
            cc = c2c2_constants(lat)
            rng = np.random.default_rng(15)
            z = sample_points(p0.lattice, 30, rng, avoid=p0.poles, margin=0.08)
            u = cc.A1 / cc.alpha1 * p1(z)
            v = cc.B1 / cc.beta1 * p0(z)
            assert np.max(np.abs((u + v) * (u - v) - p2(z) ** 2)) < 1e-7
            lhs = (u - v) * (cc.A1 * p0(z) + cc.B1 * p1(z))
            assert np.max(np.abs(lhs - (p0(z) * p1(z) + cc.sqrt_a2b2))) < 1e-7


class TestFitWPoly:
    def test_wp_squared(self):
        f = wp_function(L_GEN)
        g = f * f
        w = fit_wpoly(g, L_GEN, 4)
        assert len(w.b) == 0
        assert np.allclose(w.a, (0, 0, 1), atol=1e-8)

    def test_hauptmodul_product_is_linear(self):
        # P_-1 P_1 for N = 3 is degree one in wp of the index lattice
        emb = cn_translation(L_GEN, 3)
        ps = p_system(emb)
        prod = TorusFunction(
            lambda z: ps.values(z, (1, 2))[1] * ps.values(z, (1, 2))[2],
            ps.slat,
            ps.orbit,
            2,
        )
        ring = quotient_scaled(emb)
        w = fit_wpoly(prod, ring, 2)
        assert len(w.b) == 0
        assert len(w.a) == 2 and abs(w.a[1]) > 1e-6

    def test_p0_squared_coefficients(self):
        # p0^2 = (wp_half - 4 e3) / ((e1-e3)^2 (e2-e3)^2)
        for lat in (L_GEN, L_SQ, L_HEX):
            emb = c2c2_translation(lat)
            p0, _, _ = p_small(emb)
            inv = invariants(lat)
            half = ScaledLattice(lat.tau, 0.5)
            w = fit_wpoly(p0 * p0, half, 2)
            c0 = 1.0 / ((inv.e1 - inv.e3) ** 2 * (inv.e2 - inv.e3) ** 2)
            assert len(w.a) == 2
            assert abs(w.a[1] - c0) < 1e-7 * max(1, abs(c0))
            assert abs(w.a[0] + 4 * inv.e3 * c0) < 1e-7 * max(1, abs(4 * inv.e3 * c0))

    def test_not_in_ring_rejected(self):
        # wp' is odd: it cannot be a polynomial in wp alone
        f = wpp_function(L_GEN)
        ring = InvariantRing(ScaledLattice(GENERIC), "wp")
        with pytest.raises(NotInRingError):
            fit_in_ring(f, ring, 4)
