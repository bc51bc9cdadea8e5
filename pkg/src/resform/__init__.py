"""Residues of meromorphic top forms along quasihomogeneous hypersurface singularities."""

__version__ = "0.1.0"

from .formlang import parse_form, parse_poly, render
from .forms import DiffForm, PolyVectorField, RationalFunction, exterior_derivative, interior_product, wedge
from .grading import WeightSystem, infer_weights, is_quasihomogeneous, weight_decompose
from .poly import GaussianRational, Poly

__all__ = [
    "DiffForm",
    "GaussianRational",
    "Poly",
    "PolyVectorField",
    "RationalFunction",
    "WeightSystem",
    "exterior_derivative",
    "infer_weights",
    "interior_product",
    "is_quasihomogeneous",
    "parse_form",
    "parse_poly",
    "render",
    "wedge",
    "weight_decompose",
]
