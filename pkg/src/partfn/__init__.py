"""Exact partition functions of regular graphs, with occupancy LPs for extremal verification."""
from .exact import RatPoly, poly_eval, poly_nonneg_on_nonneg_axis, log_deriv_compare
from .graph import Graph, make_named
from .polys import CoefVector, coeffs, match_coeffs, ind_coeffs, potts_coeffs
from .enumerate import CapacityError, enumerate_regular

__version__ = "0.1.0"

__all__ = ["RatPoly", "poly_eval", "poly_nonneg_on_nonneg_axis", "log_deriv_compare",
           "Graph", "make_named", "CoefVector", "coeffs", "match_coeffs", "ind_coeffs",
           "potts_coeffs", "CapacityError", "enumerate_regular", "__version__"]
