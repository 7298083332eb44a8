"""Orthogonal symmetric realizations of joins of clique unions."""

from .combinatorics import (
    compatible_pair_exists,
    compose_bounded,
    enumerate_multiplicity_matrices,
    fill_two_row_table,
    is_compatible,
    is_multiplicity_matrix_for,
)
from .decision import (
    NotRealizable,
    construct_witness,
    decide_q,
    iplus_range,
    mu,
    witness_connected_vs_cliques,
    witness_same_size_components,
)
from .model import (
    DecisionReport,
    DenseSymMatrix,
    EigenvalueList,
    MultiplicityMatrix,
    SizeTuple,
    middle,
)
from .oracle import brute_force_mu, brute_force_q, cross_check

__version__ = "0.1.0"
