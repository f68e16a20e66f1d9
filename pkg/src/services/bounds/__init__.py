"""FDR bounds module"""
from .fdr_bounds import (
    BoundResult,
    CliqueCover,
    by_level,
    bygraph,
    bygraph_level,
    bygraph_level_numeric,
    fdr_lower_bound,
    fdr_upper_bound,
    greedy_clique_cover,
    summarize_bounds,
)
