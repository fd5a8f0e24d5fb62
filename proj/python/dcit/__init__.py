"""Digital Competitiveness Index for Trade (DCIT) toolkit.

Python face of the C++ core: composite-index construction, k-means and Ward
clustering, rank-stability and regression statistics, and scenario forecasts.
"""

from ._core import (
    DIMENSIONS,
    calibrate_growth,
    index_scores,
    kmeans,
    minmax_normalize,
    ols_fit,
    run,
    scenario_project,
    ses_fit,
    silhouette,
    spearman_rho,
    ward,
)

__all__ = [
    "DIMENSIONS",
    "calibrate_growth",
    "index_scores",
    "kmeans",
    "minmax_normalize",
    "ols_fit",
    "run",
    "scenario_project",
    "ses_fit",
    "silhouette",
    "spearman_rho",
    "ward",
]

try:
    from ._core import __version__
except ImportError:  # pragma: no cover
    __version__ = "0.0.0"
