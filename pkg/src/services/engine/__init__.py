"""Fast IndBH engine module"""
from .reduction import ReducedProblem, reduce_to_bh, rejection_levels
from .table import IndNumTable, precompute_table, update_table
from .checks import CheckBounds, Verdict, beta_exact, cheap_checks
from .pipeline import EngineRun, EngineStats, clique_shortcut, indbh_fast, indbh_k_fast, run_indbh_k
