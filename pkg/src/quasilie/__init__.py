"""Exact-arithmetic workbench for finite-dimensional quasi-Lie bialgebras.

Builds, from structure constants, the exterior-algebra machinery (wedge,
duality pairing, contractions), the bracket/cobracket operator calculus
(Schouten bracket, Chevalley-Eilenberg differentials, Laplacian), the double
with its invariant pairing, the canonical action of the double on the
exterior algebra, and the module isomorphism onto its endomorphism algebra —
and verifies every defining identity exactly over the rationals.
"""

from .exterior import (
    Multivector,
    Space,
    SpaceMismatchError,
    alt,
    contract_by_dual,
    contract_by_primal,
    contract_double,
    double,
    dual,
    eps,
    pair,
    pair_double,
    primal,
    reverse_hat,
    split_double,
    wedge,
)
from .brackets import (
    BracketTable,
    Cochain,
    ad_action,
    adjoint_coefficients,
    boundary_operator,
    ce_differential,
    coad_action,
    coadjoint_coefficients,
    cohomology_dims,
    d_operator,
    jacobi_defect,
    schouten,
    trivial_coefficients,
)
from .quasi import (
    BvStructure,
    Characters,
    QuasiLieBialgebra,
    bv_prerequisite,
    characters,
    from_quasitriangular,
    from_r_matrix,
    laplacian,
    laplacian_report,
    relations_suite,
    validate,
)
from .double import (
    DoubleAlgebra,
    ManinPairWitness,
    build_double,
    canonical_r,
    double_qlb,
    from_manin_pair,
    verify_invariance,
    verify_manin_pair,
)
from .representation import (
    DoubleElement,
    exp_r,
    gamma_action,
    q_map,
    rep_action,
    rep_matrix,
    verify_q_isomorphism,
    verify_representation,
)
from .checks import CheckResult, ValidationReport
from .documents import (
    DocumentError,
    InputDocument,
    build_structure,
    example_catalog,
    parse,
    run_check,
    run_double,
    run_rep_verify,
    serialize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
