"""Dirichlet domains of Fuchsian groups and the Morse codes of geodesics."""

from .coder import CuttingSequence, TraceConfig, locate, sample_generic, trace
from .dirichlet import (
    DirichletDomain,
    build_dirichlet,
    build_stable_dirichlet,
    domain_metrics,
    proximity_epsilon,
)
from .geometry import BoundaryPoint, DirectedGeodesic, Isometry, Point, Segment, Side
from .group import GeneratorAlphabet, GroupElement, get_preset, load_group_file, orbit
from .tolerances import Tolerances, use_tolerances

__version__ = "0.1.0"
