"""Dependency graph module"""
from .dependency_graph import (
    BandedGraph,
    BlockGraph,
    ComponentIndex,
    DependencyGraph,
    build_graph,
    complete_graph,
    connected_components,
    empty_graph,
    induced_subgraph,
)
from .independent_sets import (
    component_mis0,
    independence_number,
    largest_ind_containing,
    maximal_independent_sets,
)
