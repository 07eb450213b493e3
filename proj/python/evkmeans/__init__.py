"""Extreme-value k-means clustering toolkit.

Thin wrapper over the compiled core. The clustering entry point is
:func:`cluster`, which dispatches on ``"kmeans"``, ``"gev"``, or ``"gpd"``.
"""

from ._core import (
    acc,
    add_uninformative,
    ari,
    cluster,
    fit_gev,
    fit_gpd,
    gev_cdf,
    gev_quantile,
    gpd_cdf,
    gpd_quantile,
    nmi,
    silhouette,
    standardize,
    synth,
)

__all__ = [
    "acc",
    "add_uninformative",
    "ari",
    "cluster",
    "fit_gev",
    "fit_gpd",
    "gev_cdf",
    "gev_quantile",
    "gpd_cdf",
    "gpd_quantile",
    "nmi",
    "silhouette",
    "standardize",
    "synth",
]

__version__ = "0.1.0"
