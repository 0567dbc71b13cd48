"""Function calculus over the commutative ring of complex circulant matrices."""

from .core import (
    Circulant,
    add,
    elementary,
    frobenius_norm,
    from_row,
    get_fft_threshold,
    identity,
    mul,
    mul_fft,
    mul_naive,
    neg,
    ones,
    power,
    scale,
    set_fft_threshold,
    to_dense,
    zero,
)
from .characterize import (
    DegreeReport,
    DivisorReport,
    PathSpec,
    ZeroBoundReport,
    detect_poly_degree,
    entire_zero_bound,
    estimate_divisor,
    logderiv_diag,
)
from .errors import (
    ChannelSingularityError,
    CircfunError,
    DegeneratePolynomialError,
    DimensionError,
    InvalidIncrementError,
    RecombinationLimitError,
    SolverError,
)
from .functions import (
    CircFunction,
    CircPoly,
    Classification,
    ExpPolyFunction,
    IncrementSpec,
    PolyFunction,
    RationalFunction,
    ScalarPoly,
    channel_polys,
    classify,
    derivative,
    func_eval,
    numeric_derivative,
    poly_eval,
)
from .solver import (
    ScalarRoots,
    SolutionSet,
    SolutionStatus,
    residual,
    solve_circ_poly,
    solve_scalar_poly,
)
from .spectral import (
    fourier_matrix,
    from_spectrum,
    is_invertible,
    pseudoinverse,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "Circulant",
    "CircFunction",
    "CircPoly",
    "ChannelSingularityError",
    "CircfunError",
    "Classification",
    "DegeneratePolynomialError",
    "DegreeReport",
    "DimensionError",
    "DivisorReport",
    "ExpPolyFunction",
    "IncrementSpec",
    "InvalidIncrementError",
    "PathSpec",
    "PolyFunction",
    "RationalFunction",
    "RecombinationLimitError",
    "ScalarPoly",
    "ScalarRoots",
    "SolutionSet",
    "SolutionStatus",
    "SolverError",
    "ZeroBoundReport",
    "add",
    "channel_polys",
    "classify",
    "derivative",
    "detect_poly_degree",
    "elementary",
    "entire_zero_bound",
    "estimate_divisor",
    "frobenius_norm",
    "from_row",
    "from_spectrum",
    "fourier_matrix",
    "func_eval",
    "get_fft_threshold",
    "identity",
    "is_invertible",
    "logderiv_diag",
    "mul",
    "mul_fft",
    "mul_naive",
    "neg",
    "numeric_derivative",
    "ones",
    "poly_eval",
    "power",
    "pseudoinverse",
    "residual",
    "scale",
    "set_fft_threshold",
    "solve_circ_poly",
    "solve_scalar_poly",
    "spectrum",
    "to_dense",
    "zero",
]
