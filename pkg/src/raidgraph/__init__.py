"""Graph derangements and strict Nash equilibria of the Territorial Raider game."""

from .derangement import (
    Cycle,
    Derangement,
    HallWitness,
    Pair,
    QFactor,
    count_derangements,
    derangement_upper_bound,
    find_derangement,
    hall_witness,
    q_factor,
)
from .exp3 import LearningResult, LearningRun, exp3_init, exp3_round, exp3_run
from .game import (
    Deviation,
    GameParams,
    Profile,
    derangement_to_profile,
    deviations,
    enumerate_strict_nash,
    is_strict_nash,
    lemma_conditions,
    payoff,
    payoff_vector,
    profile_to_derangement,
    verify_equivalence,
)
from .graph import (
    Graph,
    generate,
    is_connected,
    neighborhood,
    parse_edge_list,
    random_connected,
    serialize_edge_list,
)

__version__ = "0.1.0"
