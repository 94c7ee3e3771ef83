"""Exact tools for the (n,2,2) Bell scenario: Bell-Hardy facets and non-signaling boxes."""

__version__ = "0.1.0"

from .bellpoly import (
    Certificate,
    DeterministicStrategy,
    deterministic_box,
    enumerate_vertices,
    is_local,
    is_tight,
    saturating_vertices,
    span_dimension,
)
from .boxspace import (
    BinaryVector,
    Box,
    CorrelationTable,
    box_from_correlations,
    correlations_of_box,
    dot_parity,
    marginal,
    mix,
    uniform_box,
    wedge,
)
from .duality import (
    Relabeling,
    apply_relabeling,
    box_from_functional,
    corrfunctional_from_nsbox,
    functional_from_box,
    hardy_box,
    nscorr_from_functional,
    pr_box,
)
from .errors import BellError
from .functional import (
    BellFunctional,
    CorrelationFunctional,
    correlation_coeffs,
    evaluate,
    hardy_functional,
    hardy_test,
    standardize,
    theta_value,
)
from .nsbox import is_extremal, is_nonsignaling, zeros
