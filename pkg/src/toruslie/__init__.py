"""Equivariant sl2-valued elliptic function algebras on complex tori.

Construction, numerical verification and classification of the algebras
of meromorphic sl2-valued maps on a punctured torus that are equivariant
under a finite symmetry group acting on both the torus and on sl2.
"""

from .lattice import (
    HEX_TAU,
    Lattice,
    ModularClass,
    SQUARE_TAU,
    ScaledLattice,
    TorsionPoint,
    reduce_modular,
    sublattice_basis,
    torsion_order,
    torus_reduce,
)
from .elliptic import (
    EllipticInvariants,
    invariants,
    j_invariant,
    scale_check,
    wp,
    wp_both,
    wp_prime,
)
from .torusgroup import (
    AffineAutomorphism,
    GroupEmbedding,
    UnsupportedEmbeddingError,
    a4_group,
    branch_points,
    c2c2_translation,
    catalog,
    cl_rotation,
    cn_translation,
    compose,
    dn_group,
    fixed_points,
    inverse,
    make_embedding,
    translation_subgroup,
)
from .sl2rep import GroupRepresentation, ad, isotypical_projection, standard_rep
from .funcalg import (
    C2C2Constants,
    TorusFunction,
    WPoly,
    c2c2_constants,
    character_project,
    fit_lambda_mu,
    fit_wpoly,
    p_big,
    p_small,
    residue_at,
)
from .intertwine import MatrixFunction, check_intertwining, phi, psi
from .normalform import (
    GeneratorTriple,
    abelianization_dim,
    normal_form,
    structure_polynomial,
    verify_brackets,
)
from .classify import Classification, CrossValidation, classify, cross_validate

__version__ = "0.1.0"
