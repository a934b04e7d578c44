"""Certify and refute inequalities among walk counts of simple graphs."""

from .graph import (
    Graph,
    WalkTable,
    disjoint_union,
    generate_labeled_graphs,
    load_graph,
    make_named_graph,
    walk_counts,
)
from .inequalities import WalkInequality, builtin_inequality, compile_polynomial, search_counterexamples
from .polynomials import Polynomial, symmetrize

__version__ = "0.1.0"
