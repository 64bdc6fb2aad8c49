"""Casimir pressure of a massive scalar field between two Dirichlet plates in D+1 dimensions.

Four independent routes are provided: the Bessel series (:mod:`.core`),
numerical quadrature and the regulated mode sum (:mod:`.quadrature_oracle`),
and the Green-function / fluctuation-dissipation assembly (:mod:`.green_fdt`).
"""

from .core import (
    DimensionlessPoint,
    ForceValue,
    SeriesDiagnostics,
    force_massless,
    force_series_1d,
    force_series_3d,
    force_series_general,
    truncation_bound,
)
from .errors import (
    DomainError,
    ExtrapolationWarning,
    ResonanceError,
    SpecialFunctionOverflow,
    ToleranceNotMet,
)
from .specfun import SpecFunResult, bessel_k, bessel_k_scaled, gamma_fn, zeta_fn

__version__ = "0.1.0"

__all__ = [
    "DimensionlessPoint",
    "ForceValue",
    "SeriesDiagnostics",
    "force_massless",
    "force_series_1d",
    "force_series_3d",
    "force_series_general",
    "truncation_bound",
    "DomainError",
    "ExtrapolationWarning",
    "ResonanceError",
    "SpecialFunctionOverflow",
    "ToleranceNotMet",
    "SpecFunResult",
    "bessel_k",
    "bessel_k_scaled",
    "gamma_fn",
    "zeta_fn",
]
