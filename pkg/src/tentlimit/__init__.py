"""Exact computations for tent-map inverse limits: p-points, folding patterns,
natural chains and folding-point tests."""

from .tentmap import Slope, critical_orbit, tent
from .symbolic import SymbolWord, kneading_sequence, slope_from_kneading
from .inverse_limit import Arc, FundamentalArc, ILPoint, metric_dist, shift
from .ppoints import enumerate_ppoints, folding_pattern, p_level, salient_point
from .chains import NaturalChain, build_chain, link_sequence, maximal_link_symmetric
from .folding import FoldingVerdict, build_isotopy, folding_test_omega, folding_test_ppoints

__version__ = "0.1.0"

__all__ = [
    "Slope",
    "critical_orbit",
    "tent",
    "SymbolWord",
    "kneading_sequence",
    "slope_from_kneading",
    "Arc",
    "FundamentalArc",
    "ILPoint",
    "metric_dist",
    "shift",
    "enumerate_ppoints",
    "folding_pattern",
    "p_level",
    "salient_point",
    "NaturalChain",
    "build_chain",
    "link_sequence",
    "maximal_link_symmetric",
    "FoldingVerdict",
    "build_isotopy",
    "folding_test_omega",
    "folding_test_ppoints",
]
