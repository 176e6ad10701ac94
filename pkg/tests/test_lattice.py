import numpy as np
import pytest

from toruslie.lattice import (
    DegenerateLatticeError,
    HEX_TAU,
    Lattice,
    TorsionPoint,
    moebius,
    reduce_modular,
    shortest_period,
    sublattice_basis,
    sublattice_vectors,
    torsion_order,
    torus_reduce,
    transport_torsion,
)

GENERIC = complex(0.31, 1.07)


class TestReduceModular:
    def test_already_reduced(self):
        mc = reduce_modular(1j)
        assert mc.tau_reduced == 1j
        assert mc.transform == ((1, 0), (0, 1))

    def test_unit_translation(self):
        mc = reduce_modular(1 + 1j)
        assert abs(mc.tau_reduced - 1j) < 1e-14

    def test_interior_point_needs_inversion(self):
        # (1+i)/2: translate nothing, invert to -1+i, translate to i
        mc = reduce_modular(0.5 + 0.5j)
        assert abs(mc.tau_reduced - 1j) < 1e-14
        assert mc.transform == ((1, -1), (1, 0))

    def test_hexagonal_corner_convention(self):
        # the arc representative sits on the Re >= 0 side
        mc = reduce_modular(np.exp(2j * np.pi / 3))
        assert abs(mc.tau_reduced - HEX_TAU) < 1e-12

    def test_right_edge_maps_to_left(self):
        mc = reduce_modular(0.5 + 2j)
        assert abs(mc.tau_reduced - (-0.5 + 2j)) < 1e-12

    def test_domain_error(self):
        with pytest.raises(ValueError):
            reduce_modular(1.0 - 2j)

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            tau = complex(rng.uniform(-4, 4), rng.uniform(0.05, 4))
            red = reduce_modular(tau).tau_reduced
            again = reduce_modular(red).tau_reduced
            assert abs(red - again) < 1e-12

    def test_moebius_consistency(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            tau = complex(rng.uniform(-5, 5), rng.uniform(0.02, 5))
            mc = reduce_modular(tau)
            assert abs(moebius(mc.transform, tau) - mc.tau_reduced) < 1e-12
            (a, b), (c, d) = mc.transform
            assert a * d - b * c == 1
            assert abs(mc.tau_reduced.real) <= 0.5 + 1e-9
            assert abs(mc.tau_reduced) >= 1 - 1e-9

    def test_equivalent_parameters_reduce_equal(self):
        rng = np.random.default_rng(2)
        tau = GENERIC
        for _ in range(30):
            # random SL2(Z) word
            m = np.eye(2, dtype=int)
            for _ in range(6):
                n = rng.integers(-3, 4)
                m = m @ np.array([[1, n], [0, 1]])
                if rng.random() < 0.5:
                    m = m @ np.array([[0, -1], [1, 0]])
            tau2 = moebius(((m[0, 0], m[0, 1]), (m[1, 0], m[1, 1])), tau)
            r1 = reduce_modular(tau).tau_reduced
            r2 = reduce_modular(tau2).tau_reduced
            assert abs(r1 - r2) < 1e-9


class TestSublattice:
    def test_half_integer_generator(self):
        # {1, tau, 1/2} with tau = i: basis (1/2, i), class 2i
        lat = sublattice_basis([(2, 0), (0, 2), (1, 0)], 2, 1j)
        assert abs(lat.tau - 2j) < 1e-14

    def test_index_two_superlattice(self):
        w1, w2 = sublattice_vectors([(2, 0), (0, 2), (1, 1)], 2, GENERIC)
        # contains 1, tau and (1+tau)/2
        for target in (1.0, GENERIC, (1 + GENERIC) / 2):
            # solve target = a w1 + b w2 over the integers
            mat = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])
            ab = np.linalg.solve(mat, [target.real, target.imag])
            assert np.allclose(ab, np.round(ab), atol=1e-9)

    def test_membership_brute_force(self):
        # HNF basis of {1, tau, (1+2tau)/3}: every generator must be an
        # integer combination of the output basis (bounded coefficient box)
        tau = 1j
        gens = [(3, 0), (0, 3), (1, 2)]
        w1, w2 = sublattice_vectors(gens, 3, tau)
        for gx, gy in gens:
            target = (gx + gy * tau) / 3
            found = any(
                abs(a * w1 + b * w2 - target) < 1e-9
                for a in range(-6, 7)
                for b in range(-6, 7)
            )
            assert found

    def test_order_independent(self):
        tau = GENERIC
        gens = [(4, 0), (0, 4), (1, 2), (2, 3)]
        base = reduce_modular(sublattice_basis(gens, 4, tau).tau).tau_reduced
        rng = np.random.default_rng(3)
        for _ in range(10):
            perm = list(rng.permutation(len(gens)))
            other = sublattice_basis([gens[i] for i in perm], 4, tau)
            assert abs(reduce_modular(other.tau).tau_reduced - base) < 1e-9

    def test_rank_deficient(self):
        with pytest.raises(DegenerateLatticeError):
            sublattice_basis([(1, 0), (2, 0)], 1, 1j)


class TestTorusReduce:
    def test_zero(self):
        assert torus_reduce(0.0, Lattice(GENERIC)) == 0.0

    def test_lattice_point(self):
        lat = Lattice(GENERIC)
        assert abs(torus_reduce(1 + GENERIC, lat)) < 1e-12

    def test_fractional_parts(self):
        tau = GENERIC
        z = 2.3 + 1.7 * tau
        expect = 0.3 + 0.7 * tau
        assert abs(torus_reduce(z, Lattice(tau)) - expect) < 1e-12

    def test_periodicity(self):
        rng = np.random.default_rng(4)
        lat = Lattice(GENERIC)
        for _ in range(100):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            lam = rng.integers(-4, 5) + rng.integers(-4, 5) * GENERIC
            a = torus_reduce(z, lat)
            b = torus_reduce(z + lam, lat)
            assert abs(a - b) < 1e-10


class TestTorsionPoint:
    def test_orders(self):
        assert torsion_order(TorsionPoint(0, 0, 1)) == 1
        assert torsion_order(TorsionPoint(1, 0, 2)) == 2
        assert torsion_order(TorsionPoint(2, 0, 4)) == 2  # reduces to (1,0,2)

    def test_normalisation(self):
        p = TorsionPoint(2, 0, 4)
        assert (p.a, p.b, p.n) == (1, 0, 2)
        q = TorsionPoint(-1, 5, 3)
        assert 0 <= q.a < q.n and 0 <= q.b < q.n

    def test_group_law(self):
        p = TorsionPoint(1, 0, 3)
        z = p + p + p
        assert z.is_zero()
        assert (-p) + p == TorsionPoint.zero()

    def test_transport_round_trip(self):
        m = ((2, -11), (1, -5))
        (a, b), (c, d) = m
        inv = ((d, -b), (-c, a))  # inverse in SL2(Z), transport composes contravariantly
        p = TorsionPoint(1, 2, 5)
        q = transport_torsion(transport_torsion(p, m), inv)
        assert q == p


def test_shortest_period():
    assert abs(shortest_period(1j) - 1.0) < 1e-12
    assert abs(shortest_period(2j) - 1.0) < 1e-12
    # tall thin lattice reached by tau -> tau/|tau|^2 style transforms
    assert abs(shortest_period(0.5 + 0.5j) - abs(0.5 + 0.5j)) < 1e-12
