"""Exact matrices over pluggable rings with structural (preorder-shaped) subrings."""

from .errors import (
    NoMethodApplicable,
    NotAPreorder,
    NotAUnit,
    NotInvertible,
    OneSidedInverse,
    StructRingError,
)
from .inverse import (
    InverseCertificate,
    inv_adjugate,
    inv_by_power_order,
    inv_nil_geometric,
    inverse_from_monic_annihilator,
    invert,
    lift_inverse_nil_binomial,
)
from .preorder import Preorder, Relation, closure, compose_kron, validate
from .rings import (
    Grassmann,
    Integers,
    Jacobson,
    MatrixRing,
    Modular,
    Rationals,
    RingElement,
    arith,
    nil_decompose,
    ring_from_json,
    try_invert_base,
)
from .structmat import (
    MonicPolynomial,
    StructMatrix,
    adjoint_classical,
    char_poly,
    check_structural,
    determinant,
    flatten_blocks,
    matmul,
    preadjoint,
    scalar_embed,
)

__version__ = "0.1.0"
