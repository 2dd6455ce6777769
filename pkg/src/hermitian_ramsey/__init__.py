"""Hermitian unitals, their secant graphs, and K4-free Ramsey witnesses.

The build goes field -> plane -> unital -> secant graph -> randomized
K4-free subgraph -> sampled witness with a re-verifiable certificate.
"""
from .field import FieldSpec, field_for_q, make_field
from .graphs import Graph
from .k4free import K4FreeGraph, randomize, verify_k4_free
from .plane import ProjectivePlane, build_plane
from .secant_graph import SecantGraph, build_secant_graph, verify_base_properties
from .unital import Unital, build_unital

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "Graph", "K4FreeGraph", "ProjectivePlane", "SecantGraph", "Unital",
    "build_plane", "build_secant_graph", "build_unital", "field_for_q", "make_field",
    "randomize", "verify_base_properties", "verify_k4_free", "__version__",
]
