"""Finite symmetry groups of a complex torus.

Lists the admissible group embeddings for square, hexagonal and generic
lattices, and tabulates fixed points and branch-point counts of the
quotient maps; the count is 0 for pure translation groups, 2 for the
order-3/4/6 rotations and the tetrahedral group, and 3 for the dihedral
family.
"""

from toruslie import Lattice, branch_points, catalog, fixed_points
from toruslie.lattice import HEX_TAU

for name, tau in (("square", 1j), ("hexagonal", HEX_TAU), ("generic", 0.37 + 1.2j)):
    lat = Lattice(tau)
    print(f"\n=== {name} (tau = {tau:.4f}) ===")
    print(f"{'group':24s} {'order':>5s} {'branch points':>14s}")
    for emb in catalog(lat):
        n, orbits = branch_points(emb)
        label = f"{emb.kind}[{emb.order_param}]"
        print(f"{label:24s} {emb.order:5d} {n:14d}")

print("\nfixed points of selected automorphisms on the hexagonal torus:")
lat = Lattice(HEX_TAU)
for emb in catalog(lat):
    for g in emb.elements:
        if g.is_identity or g.is_translation:
            continue
        pts = fixed_points(g)
        print(f"  rotation by exp(2 pi i {g.rot_num}/{g.rot_den}) + shift "
              f"({g.shift.a}+{g.shift.b}tau)/{g.shift.n}: {len(pts)} fixed points")
    break  # one embedding is enough for the illustration
