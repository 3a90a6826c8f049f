"""Exact fields and dense linear algebra."""

from .fields import (
    GAUSSIAN,
    QQ,
    ExtensionField,
    Field,
    FieldError,
    GaussianRational,
    GaussianRationalField,
    ParseError,
    PrimeField,
    RationalField,
    Scalar,
    embed_element,
    field_from_descriptor,
    find_irreducible,
    parse_field,
)
from .linalg import (
    ExtensionRequired,
    HomogPoly2,
    charpoly,
    column_basis,
    contains,
    det,
    det_pencil,
    det_pencil_cofactor,
    dim,
    intersection,
    inverse,
    is_invertible,
    nullspace,
    preimage,
    rank,
    rref,
    span,
)
from .matrix import Matrix, ShapeError
from .poly import Poly

__all__ = [
    "GAUSSIAN", "QQ", "ExtensionField", "Field", "FieldError", "GaussianRational",
    "GaussianRationalField", "ParseError", "PrimeField", "RationalField", "Scalar",
    "embed_element", "field_from_descriptor", "find_irreducible", "parse_field",
    "ExtensionRequired", "HomogPoly2", "charpoly", "column_basis", "contains", "det",
    "det_pencil", "det_pencil_cofactor", "dim", "intersection", "inverse", "is_invertible",
    "nullspace", "preimage", "rank", "rref", "span", "Matrix", "ShapeError", "Poly",
]
