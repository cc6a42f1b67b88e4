"""Lower bounds, certificates and witnesses for Gallai-Ramsey functions and numbers."""

from .bounds import (BoundError, BoundReport, bound_gr_fixed, bound_gr_flexible, bound_gr_lll,
                     bound_grnum_fixed, bound_grnum_lll, elementary_symmetric)
from .core import ColorDistribution, EdgeColoring, SmallGraph, format_coloring, parse_coloring, parse_graph
from .exact import exact_gr
from .gallai import find_gallai_partition, reduced_coloring, validate_gallai_partition
from .lll import check_lll_xform, check_lll_yform, check_two_class, maximize_n_two_class
from .probability import best_n_by_union_bound, dependency_counts, union_bound_decision
from .search import moser_tardos, restart_sample
from .verify import verify_claim, verify_clique_claim, verify_pattern_claim

__version__ = "0.1.0"
