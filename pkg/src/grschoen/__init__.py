"""Exact verification of initial degenerations of the open Grassmannian Gr_0(3, n)."""
from .matroid import Matroid, classify_template, qsp, uniform
from .rings import build_presentation, dim_thin_schubert, reduce_ideal
from .subdivision import Weight, regular_subdivision
from .tightspan import TightSpan
from .verify import Certificate, classify, detect_csp, dimension_audit, verify

__all__ = [
    "Certificate",
    "Matroid",
    "TightSpan",
    "Weight",
    "build_presentation",
    "classify",
    "classify_template",
    "detect_csp",
    "dim_thin_schubert",
    "dimension_audit",
    "qsp",
    "reduce_ideal",
    "regular_subdivision",
    "uniform",
    "verify",
]
