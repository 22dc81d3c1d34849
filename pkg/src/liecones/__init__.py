"""Exact computations with admissible Lie algebras, their 3-gradings and invariant cones."""

from .lie import Element, LieAlgebra
from .linalg import Mat, PSDStatus, psd_status
from .spindler import SpindlerData, SymplecticForm, build, build_generalized_jacobi, build_jacobi
from .derivations import Derivation, Grading3, derivation_algebra, detect_3grading
from .cones import ConeQuery, in_cone, certify_span
from . import catalog

__all__ = [
    "Element",
    "LieAlgebra",
    "Mat",
    "PSDStatus",
    "psd_status",
    "SpindlerData",
    "SymplecticForm",
    "build",
    "build_jacobi",
    "build_generalized_jacobi",
    "Derivation",
    "Grading3",
    "derivation_algebra",
    "detect_3grading",
    "ConeQuery",
    "in_cone",
    "certify_span",
    "catalog",
]
