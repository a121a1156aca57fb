"""Decide whether a finite set of row-stochastic matrices is a consensus set."""

from .decider import (
    Algorithm,
    ConsensusVerdict,
    Decision,
    NonConsensusWitness,
    decide,
    decide_literal_enumeration,
    decide_pair_automaton,
    decide_symmetric,
    decide_theorem_check,
    scrambling_index,
    verify_witness,
)
from .patterns import Pattern, Support, is_scrambling, pattern_mul
from .stochastic import StochasticMatrix, delta, from_graph, mat_mul, pattern_of, validate

__all__ = [
    "Algorithm",
    "ConsensusVerdict",
    "Decision",
    "NonConsensusWitness",
    "Pattern",
    "StochasticMatrix",
    "Support",
    "decide",
    "decide_literal_enumeration",
    "decide_pair_automaton",
    "decide_symmetric",
    "decide_theorem_check",
    "delta",
    "from_graph",
    "is_scrambling",
    "mat_mul",
    "pattern_mul",
    "pattern_of",
    "scrambling_index",
    "validate",
    "verify_witness",
]

__version__ = "0.1.0"
