"""Finite sections discretization of Cuntz algebras.

Exact symbolic words in the generators ``S_0, ..., S_{N-1}``, their
truncated matrices, block Toeplitz symbols, the reflection-limit lifting,
and spectral diagnostics (stability, pseudospectra, Fredholm splits).
"""

from .symbolic import (
    Element,
    MultiIndex,
    Word,
    dual_index,
    element_adjoint,
    element_multiply,
    fourier_coefficient,
    multi_index_value,
    sharp_map,
    word_multiply,
)
from .sections import (
    SizeSchedule,
    element_matrix,
    generator_matrix,
    initial_projection_size,
    projection_matrix,
    reflected_section,
    reflection_limit_window,
    reflection_matrix,
)
from .symbol import (
    SymbolTruncation,
    block_projection_matrix,
    lifting_entry_estimate,
    lifting_vs_symbol_check,
    symbol_truncation,
)
from .spectral import (
    SpectralReport,
    hausdorff_distance,
    hermitian_eigenvalues,
    pseudospectrum_grid,
    singular_values,
    spectral_convergence_report,
    stability_verdict,
)
from .extended import (
    CompactBlock,
    ExtendedSequenceSpec,
    extended_section_matrix,
    fredholm_analysis,
    two_symbol_stability_verdict,
)
from .parser import ParseError, parse_element

__version__ = "0.1.0"

__all__ = [
    "Element",
    "MultiIndex",
    "Word",
    "dual_index",
    "element_adjoint",
    "element_multiply",
    "fourier_coefficient",
    "multi_index_value",
    "sharp_map",
    "word_multiply",
    "SizeSchedule",
    "element_matrix",
    "generator_matrix",
    "initial_projection_size",
    "projection_matrix",
    "reflected_section",
    "reflection_limit_window",
    "reflection_matrix",
    "SymbolTruncation",
    "block_projection_matrix",
    "lifting_entry_estimate",
    "lifting_vs_symbol_check",
    "symbol_truncation",
    "SpectralReport",
    "hausdorff_distance",
    "hermitian_eigenvalues",
    "pseudospectrum_grid",
    "singular_values",
    "spectral_convergence_report",
    "stability_verdict",
    "CompactBlock",
    "ExtendedSequenceSpec",
    "extended_section_matrix",
    "fredholm_analysis",
    "two_symbol_stability_verdict",
    "ParseError",
    "parse_element",
]
