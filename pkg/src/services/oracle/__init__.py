"""Brute-force oracles and property checkers module"""
from .brute_force import brute_force_indbh, brute_force_indbh_k, interval_procedure
from .properties import (
    ProblemInstance,
    PropertyReport,
    Violation,
    check_monotonicity,
    check_neighbor_blindness,
    check_self_consistency,
    procedure_name,
    random_instances,
)
from .monte_carlo import FdrEstimate, mc_fdr
from .suite import OracleSuiteReport, SuiteFailure, run_oracle_suite
