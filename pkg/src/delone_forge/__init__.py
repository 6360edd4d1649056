"""Exact construction and certification of lattice Delone simplices of large relative volume."""

from .delone import DeloneCertificate, Sphere, Verdict, certify_delone, circumsphere, enumerate_in_ellipsoid
from .hadamard import DeloneInstance, hadamard_simplex_instance, sylvester, unit_interval_instance
from .lattice import (EmbeddedLattice, LatticeSimplex, QuadraticForm, ambient_to_lattice_coords,
                      direct_sum, gram_of_basis, relative_volume)
from .product import ProductResult, staircase_triangulation, theorem1_product

__version__ = "0.1.0"

__all__ = [
    "DeloneCertificate",
    "DeloneInstance",
    "EmbeddedLattice",
    "LatticeSimplex",
    "ProductResult",
    "QuadraticForm",
    "Sphere",
    "Verdict",
    "ambient_to_lattice_coords",
    "certify_delone",
    "circumsphere",
    "direct_sum",
    "enumerate_in_ellipsoid",
    "gram_of_basis",
    "hadamard_simplex_instance",
    "relative_volume",
    "staircase_triangulation",
    "sylvester",
    "theorem1_product",
    "unit_interval_instance",
]
