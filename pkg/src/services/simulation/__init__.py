"""Synthetic p-value generation module"""
from .scenario import MetricSet, SimScenario, load_scenario
from .placement import discrete_gaussian_offsets, export_cluster_rug, place_clustered_nonnulls, place_uniform_nonnulls
from .generators import (
    SimDraw,
    adversarial_masses,
    banded_covariance,
    banded_factor,
    cover_graph,
    gen_banded_gaussian,
    gen_block_adversarial,
    gen_block_gaussian,
    gen_negative_gaussian,
    generate,
)
from .tuning import bh_power, tune_mu_star
from .metrics import RepRecord, compute_metrics, write_metrics_csv
from .runner import run_simulation, simulate_metrics
