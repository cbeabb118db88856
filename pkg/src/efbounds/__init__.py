"""Bounds for the multilevel (Echelon-Ferrers) construction of subspace codes."""
from .qpoly import QPolynomial, parse as parse_poly, render as render_poly
from .diagrams import PivotVector, FerrersDiagram

__version__ = "0.1.0"
