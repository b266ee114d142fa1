"""Truncated strict ω-categories, polygraphs and the polygraphic resolution.

Submodules: ``globset``, ``strictcat``, ``freecat``, ``polygraph``,
``adjunction`` (W, its unit and counit, φ and lifting), ``monadicity``
(split forks, transport of structure, iso reflection), ``documents`` and
``cli``.  ``fixtures`` holds the small categories and polygraphs used
throughout.
"""

from .adjunction import chi, counit, lift, phi, resolve, resolve_functor, unit, verify_phi
from .freecat import eq_cells, free_cat, normalize
from .globset import GlobularMap, GlobularSet, validate_globular
from .monadicity import (canonical_split_pair, check_iso_reflection, degenerate_fork, fork_of_functors,
                         resplit_in_pol, transport_structure, validate_split_fork,
                         verify_coequalizer_universal)
from .polygraph import Polygraph, PolyMorphism, poly_core, validate_polygraph
from .report import Report, Violation
from .strictcat import OmegaFunctor, TableCategory, is_iso, validate_category, validate_functor

__version__ = "0.1.0"

__all__ = [
    "GlobularSet", "GlobularMap", "validate_globular", "TableCategory", "OmegaFunctor", "validate_category",
    "validate_functor", "is_iso", "free_cat", "normalize", "eq_cells", "Polygraph", "PolyMorphism",
    "validate_polygraph", "poly_core", "resolve", "counit", "unit", "phi", "chi", "verify_phi", "lift",
    "resolve_functor", "degenerate_fork", "canonical_split_pair", "fork_of_functors", "validate_split_fork",
    "transport_structure", "resplit_in_pol", "check_iso_reflection", "verify_coequalizer_universal",
    "Report", "Violation",
]
