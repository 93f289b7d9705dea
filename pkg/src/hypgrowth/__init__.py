"""Uniform exponential growth for groups acting on hyperbolic spaces.

Exact and certified computations on two concrete models: regular trees
(free groups) and the upper half-plane (Fuchsian groups such as PSL(2,Z)).
"""

from .geometry import H2Point, SpaceModel, TreePoint, distance, geodesic, line, project, ray
from .isometry import GroupElement, classify, element
from .presets import get_preset

__version__ = "0.1.0"

__all__ = [
    "H2Point",
    "SpaceModel",
    "TreePoint",
    "distance",
    "geodesic",
    "line",
    "project",
    "ray",
    "GroupElement",
    "classify",
    "element",
    "get_preset",
    "__version__",
]
