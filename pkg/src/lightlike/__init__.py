"""Numerical analysis of lightlike hypersurfaces in Lorentzian manifolds."""

__version__ = "0.1.0"

from .catalog import (  # noqa: E402
    anti_de_sitter,
    conformally_flat,
    de_sitter,
    eddington_finkelstein,
    ellipsoid_null_congruence,
    light_cone,
    minkowski,
    null_hyperplane,
    schwarzschild_horizon,
)
from .surface import LightlikeSurface  # noqa: E402

__all__ = [
    "LightlikeSurface",
    "anti_de_sitter",
    "conformally_flat",
    "de_sitter",
    "eddington_finkelstein",
    "ellipsoid_null_congruence",
    "light_cone",
    "minkowski",
    "null_hyperplane",
    "schwarzschild_horizon",
]
