import numpy as np
import pytest

from toruslie.classify import KIND_BY_BRANCH_COUNT, classify, cross_validate
from toruslie.lattice import HEX_TAU, Lattice, TorsionPoint, moebius, reduce_modular, transport_torsion
from toruslie.torusgroup import (
    a4_group,
    branch_points,
    c2c2_translation,
    catalog,
    cl_rotation,
    cn_translation,
    dn_group,
)

GENERIC = complex(0.31, 1.07)
L_GEN = Lattice(GENERIC)
L_SQ = Lattice(1j)
L_HEX = Lattice(HEX_TAU)


class TestClassify:
    def test_c2_rotation_is_twisted_family(self):
        cls = classify(cl_rotation(L_GEN, 2))
        assert cls.kind == "SFamily"
        assert abs(cls.tau_class.tau_reduced - reduce_modular(GENERIC).tau_reduced) < 1e-9
        assert cls.caveat  # completeness of the invariant is open

    def test_a4_is_onsager(self):
        cls = classify(a4_group(L_HEX))
        assert cls.kind == "Onsager"
        assert cls.branch_count == 2
        assert cls.tau_class is None and cls.j_invariant is None

    def test_c2_translation_on_square(self):
        cls = classify(cn_translation(L_SQ, 2, TorsionPoint(1, 0, 2)))
        assert cls.kind == "CurrentAlgebra"
        assert abs(cls.tau_class.tau_reduced - 2j) < 1e-9
        assert abs(cls.j_invariant - 287496.0) < 1e-3

    def test_klein_translations_keep_the_class(self):
        cls = classify(c2c2_translation(L_GEN))
        assert cls.kind == "CurrentAlgebra"
        assert abs(cls.tau_class.tau_reduced - reduce_modular(GENERIC).tau_reduced) < 1e-9

    def test_d2_and_klein_disagree(self):
        a = classify(dn_group(L_GEN, 2))
        b = classify(c2c2_translation(L_GEN))
        assert a.kind == "SFamily" and b.kind == "CurrentAlgebra"

    def test_c4_c6_rotations_both_onsager(self):
        assert classify(cl_rotation(L_SQ, 4)).kind == "Onsager"
        assert classify(cl_rotation(L_HEX, 6)).kind == "Onsager"

    def test_branch_counts_always_in_table(self):
        rng = np.random.default_rng(0)
        taus = [1j, HEX_TAU] + [
            complex(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.7)) for _ in range(5)
        ]
        for tau in taus:
            for emb in catalog(Lattice(tau)):
                assert branch_points(emb)[0] in KIND_BY_BRANCH_COUNT


TABLE_ROWS = [
    # (builder, lattice, expected kind, expected branch count)
    (lambda lat: cl_rotation(lat, 2), L_GEN, "SFamily", 3),
    (lambda lat: cl_rotation(lat, 3), L_HEX, "Onsager", 2),
    (lambda lat: cl_rotation(lat, 4), L_SQ, "Onsager", 2),
    (lambda lat: cl_rotation(lat, 6), L_HEX, "Onsager", 2),
    (lambda lat: cn_translation(lat, 2), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: cn_translation(lat, 3), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: cn_translation(lat, 4), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: cn_translation(lat, 6), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: cn_translation(lat, 5), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: cn_translation(lat, 7), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: c2c2_translation(lat), L_GEN, "CurrentAlgebra", 0),
    (lambda lat: dn_group(lat, 2), L_GEN, "SFamily", 3),
    (lambda lat: dn_group(lat, 3), L_GEN, "SFamily", 3),
    (lambda lat: dn_group(lat, 4), L_GEN, "SFamily", 3),
    (lambda lat: dn_group(lat, 5), L_GEN, "SFamily", 3),
    (lambda lat: a4_group(lat), L_HEX, "Onsager", 2),
]


class TestSummaryTable:
    def test_kind_per_group_kind(self):
        for build, lat, kind, count in TABLE_ROWS:
            cls = classify(build(lat))
            assert cls.kind == kind
            assert cls.branch_count == count


class TestHomothety:
    def test_classify_invariant_under_basis_change(self):
        rng = np.random.default_rng(1)
        tau = GENERIC
        for _ in range(5):
            m = np.eye(2, dtype=int)
            for _ in range(5):
                n = int(rng.integers(-2, 3))
                m = m @ np.array([[1, n], [0, 1]])
                if rng.random() < 0.6:
                    m = m @ np.array([[0, -1], [1, 0]])
            mt = ((int(m[0, 0]), int(m[0, 1])), (int(m[1, 0]), int(m[1, 1])))
            tau2 = moebius(mt, tau)

            shift1 = TorsionPoint(1, 0, 3)
            shift2 = transport_torsion(shift1, mt)
            a = classify(cn_translation(Lattice(tau), 3, shift1))
            b = classify(cn_translation(Lattice(tau2), 3, shift2))
            assert a.kind == b.kind
            assert abs(a.j_invariant - b.j_invariant) <= 1e-7 * max(1, abs(a.j_invariant))

            shift1 = TorsionPoint(1, 1, 2)
            shift2 = transport_torsion(shift1, mt)
            a = classify(dn_group(Lattice(tau), 2, shift1))
            b = classify(dn_group(Lattice(tau2), 2, shift2))
            assert a.kind == b.kind
            assert abs(a.j_invariant - b.j_invariant) <= 1e-7 * max(1, abs(a.j_invariant))

            a = classify(c2c2_translation(Lattice(tau)))
            b = classify(c2c2_translation(Lattice(tau2)))
            assert a.kind == b.kind
            assert abs(a.j_invariant - b.j_invariant) <= 1e-7 * max(1, abs(a.j_invariant))


class TestCrossValidate:
    @pytest.mark.parametrize("lat", [L_SQ, L_HEX, L_GEN], ids=["square", "hex", "generic"])
    def test_full_catalog_passes(self, lat):
        for emb in catalog(lat):
            cv = cross_validate(emb)
            assert cv.passed, (emb.kind, emb.order_param, cv.checks)

    def test_abel_dim_equals_branch_count(self):
        for emb in catalog(L_GEN):
            cv = cross_validate(emb)
            assert cv.abel_dim == cv.classification.branch_count

    def test_tall_quotient_degrades_gracefully(self):
        cv = cross_validate(dn_group(Lattice(0.2 + 1.3j), 5))
        assert cv.classification.kind == "SFamily"
        assert cv.passed
        assert cv.notes  # resolution-limit notes recorded

    def test_sfamily_j_consistency_runs_for_small_quotients(self):
        cv = cross_validate(dn_group(L_GEN, 2))
        assert "j_poly_consistent" in cv.checks
        assert cv.checks["j_poly_consistent"]
