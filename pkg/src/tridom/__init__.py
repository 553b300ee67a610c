"""Certified independent dominating sets of size at most n/3 in planar
triangulations, with generators, exact oracles and codecs."""

from .coloring import four_color, partial_coloring
from .generators import GenSpec, flipmix, gadget_family, generate, named, stacked
from .graphio import (
    read_certificate,
    read_planar_code,
    read_rotation_text,
    write_certificate,
    write_planar_code,
    write_rotation_text,
)
from .oracle import alpha_exact, check_obs1, gamma_exact, iota_exact
from .pipeline import IdomCertificate, reduce_to_core, solve, verify
from .planar import PlaneGraph, Triangulation, build_from_rotation, find_forbidden_face

__all__ = [
    "GenSpec", "IdomCertificate", "PlaneGraph", "Triangulation",
    "alpha_exact", "build_from_rotation", "check_obs1", "find_forbidden_face",
    "flipmix", "four_color", "gadget_family", "gamma_exact", "generate",
    "iota_exact", "named", "partial_coloring", "read_certificate",
    "read_planar_code", "read_rotation_text", "reduce_to_core", "solve", "stacked", "verify",
    "write_certificate", "write_planar_code", "write_rotation_text",
]
