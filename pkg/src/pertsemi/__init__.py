"""Perturbation semigroups of finite-dimensional matrix *-algebras.

Elements of ``Pert(A)`` are normalized, self-adjoint tensors in
``A (x) A^o``. The package realizes them as ``d^2 x d^2`` matrices, brings
them to canonical block form, embeds unitary groups, and applies them as
inner fluctuations of Dirac operators.
"""
from .algebra import Algebra, Block
from .canonical import (
    CanonicalForm,
    CanonicalStructureError,
    build_basis,
    canonicalize,
    canonicalize_parts,
    closed_form_dimensions,
    decomposition_report,
    is_invertible,
    sample_member,
    semidirect_law_residuals,
)
from .fluctuation import DiracOperator, action_composition_check, fluctuate, random_dirac
from .matalg import Quaternion, embed_quaternion, hermitian_eigenvalues
from .pert import (
    MembershipError,
    PertMatrix,
    TensorElement,
    identity_element,
    is_member,
    is_normalized,
    is_self_adjoint,
    merge_direct_sum,
    multiply,
    pert_cn_coordinates,
    pert_cn_from_coordinates,
    random_tensor,
    realize,
    split_direct_sum,
    star_image,
    to_tensor,
)
from .unitary import UnitaryElement, embed_unitary, random_unitary, verify_rep_decomposition

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "Block",
    "CanonicalForm",
    "CanonicalStructureError",
    "DiracOperator",
    "MembershipError",
    "PertMatrix",
    "Quaternion",
    "TensorElement",
    "UnitaryElement",
    "action_composition_check",
    "build_basis",
    "canonicalize",
    "canonicalize_parts",
    "closed_form_dimensions",
    "decomposition_report",
    "embed_quaternion",
    "embed_unitary",
    "fluctuate",
    "hermitian_eigenvalues",
    "identity_element",
    "is_invertible",
    "is_member",
    "is_normalized",
    "is_self_adjoint",
    "merge_direct_sum",
    "multiply",
    "pert_cn_coordinates",
    "pert_cn_from_coordinates",
    "random_dirac",
    "random_tensor",
    "random_unitary",
    "realize",
    "sample_member",
    "semidirect_law_residuals",
    "split_direct_sum",
    "star_image",
    "to_tensor",
    "verify_rep_decomposition",
]
