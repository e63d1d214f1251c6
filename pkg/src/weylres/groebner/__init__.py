"""Module Gröbner bases, syzygies, resolutions and Hilbert functions."""
from .engine import ResourceCap, set_step_budget
from .modules import (
    BettiTable,
    FreeModuleElement,
    FreeResolution,
    GradedModulePresentation,
    GroebnerBasis,
    UncertifiedResolution,
    betti_table,
    buchberger_module,
    kernel_of_map,
    minimal_free_resolution,
    minimal_generator_indices,
    minimalize,
    syzygies,
)
from .hilbert import hilbert_function, hilbert_from_betti, monomials_of_degree

__all__ = [
    "BettiTable", "FreeModuleElement", "FreeResolution", "GradedModulePresentation",
    "GroebnerBasis", "UncertifiedResolution", "ResourceCap", "set_step_budget", "betti_table", "buchberger_module", "hilbert_from_betti",
    "hilbert_function", "kernel_of_map", "minimal_free_resolution", "minimal_generator_indices",
    "minimalize", "monomials_of_degree", "syzygies",
]
