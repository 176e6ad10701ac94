"""End-to-end classification.

Every admissible symmetry lands in one of three isomorphism families,
read off the branch count of the quotient map: the current algebra of an
elliptic curve (0), the Onsager algebra (2), or the twisted cubic family
(3).  The first and third carry the modular class of the quotient torus
as a parameter.
"""

from toruslie import Lattice, catalog, classify, cross_validate
from toruslie.lattice import HEX_TAU

for name, tau in (("square", 1j), ("hexagonal", HEX_TAU), ("generic", 0.31 + 1.07j)):
    lat = Lattice(tau)
    print(f"\n=== {name} (tau = {tau:.4f}) ===")
    print(f"{'case':22s} {'family':>15s} {'branch':>7s} {'tau class / j':>32s} {'checks':>7s}")
    for emb in catalog(lat):
        cv = cross_validate(emb)
        cls = cv.classification
        if cls.tau_class is None:
            where = "-"
        else:
            where = f"[{cls.tau_class.tau_reduced:.3f}]  j={cls.j_invariant:.4g}"
        label = f"{emb.kind}[{emb.order_param}]"
        print(f"{label:22s} {cls.kind:>15s} {cls.branch_count:7d} {where:>32s}"
              f" {'ok' if cv.passed else 'FAIL':>7s}")

print("\nthe same symmetry through an equivalent basis gives the same class:")
from toruslie.lattice import TorsionPoint, moebius, transport_torsion
from toruslie.torusgroup import dn_group

m = ((1, -1), (1, 0))
tau2 = moebius(m, 0.31 + 1.07j)
a = classify(dn_group(Lattice(0.31 + 1.07j), 2, TorsionPoint(1, 1, 2)))
b = classify(dn_group(Lattice(tau2), 2, transport_torsion(TorsionPoint(1, 1, 2), m)))
print(f"  kinds {a.kind} / {b.kind},  j difference {abs(a.j_invariant - b.j_invariant):.2e}")
