"""Exact p-adic arithmetic and subgroup machinery for SL_2(Q_p)."""
from .classify import (
    ANISOTROPIC,
    CENTRAL,
    SPLIT,
    UNIPOTENT,
    ElementClass,
    cartan_of,
    classify,
    diagonalize_split,
    eigenvalues_split,
)
from .errors import (
    DomainError,
    InternalInconsistency,
    InvalidParams,
    InvalidRational,
    InvariantViolation,
    NoCoverIndex,
    NotASquare,
    PadicError,
    PrecisionExhausted,
    TooLarge,
    UnsupportedCase,
    WrongClass,
    WrongSubgroup,
)
from .generosity import (
    CoverWitness,
    EscapeWitness,
    cover_membership,
    default_cover,
    escape_Wprime,
    in_W,
    in_Wprime,
    standard_cover,
)
from .interpretation import GroupFieldElement, decode, encode, gf_add, gf_mul
from .padic import (
    DEFAULT_PRECISION,
    INF,
    PadicScalar,
    SquareClass,
    angular_component,
    from_rational,
    hensel_sqrt,
    least_nonresidue,
    square_class,
    square_class_representatives,
    valuation,
)
from .sl2 import (
    BruhatForm,
    Mat2,
    bruhat_decompose,
    conjugate,
    mat_inv,
    mat_mul,
    matrix_valuation,
    relation_R1,
    relation_R2,
)
from .subgroups import (
    SubgroupDescriptor,
    filtration_level,
    is_bounded,
    member,
    z_quotient_map,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
