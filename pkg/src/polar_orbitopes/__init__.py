"""Spectrahedral representations and membership oracles for polar orbitopes
of the classical matrix families, with momentum polytopes, face-orbit
classification and independent Monte-Carlo verifiers."""

from . import errors
from .algebra import (
    AlgebraFamily,
    ChamberPoint,
    PointP,
    WeylElement,
    basis_of_k,
    basis_of_p,
    cartan_decompose,
    chamber,
    embed_point,
    family_from_json,
    family_from_label,
    family_to_json,
    fundamental_weight_values,
    kostant_project,
    normalize_to_chamber,
    point_from_block,
    point_from_json,
    point_to_json,
    simple_root_vectors,
    weyl_elements,
    weyl_orbit,
    weyl_witness,
    sl_h,
    sl_r,
    so_mn,
)
from .reps import (
    FundamentalRep,
    complexify,
    compound_matrix,
    fundamental_reps,
    gamma_matrices,
    max_eigenvalue,
    natural_matrix,
    rep_by_tag,
    rep_matrix,
    solve_invariant_gram,
    spin_matrix,
    unitarize,
)
from .orbitope import (
    LinearPencil,
    MemberResult,
    MomentumPolytope,
    RealPencil,
    build_pencils,
    member,
    momentum_member,
    momentum_polytope,
    parse_sdpa,
    pencils_from_json,
    pencils_to_json,
    realify,
    realify_matrix,
    restrict_to_a,
    schur_horn_member,
    write_sdpa,
)
from .faces import (
    Face,
    LiftedFace,
    exposed_face,
    face_lattice,
    face_orbit_representatives,
    face_orbit_summary,
    lift_face,
    verify_correspondence,
)
from .harness import (
    SampleConfig,
    adjoint_orbit_point,
    cone_member_lp,
    hull_member_lp,
    lp_equality_feasible,
    random_point,
    sample_K,
    verify_kostant,
    verify_theorem1,
)

__version__ = "0.1.0"
