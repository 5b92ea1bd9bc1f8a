"""Cost-aware distribution of CZ+unary circuits over heterogeneous networks."""

from .assignment import TabuParams, assignment_cost, neighbors, tabu_search
from .circuit import (
    BINARY,
    UNARY,
    Circuit,
    Gate,
    build_circuit,
    cz,
    induced_pair_circuit,
    load_circuit,
    save_circuit,
    segment,
    u,
)
from .coverage import (
    CandidateSet,
    CoverageState,
    Migration,
    ag_select,
    cover_alpha,
    enumerate_candidates,
    gate_covered,
    greedy_cover,
    iterative_cover,
    nonlocal_gates,
)
from .errors import QcutError
from .generators import CircuitGenParams, NetworkGenParams, gen_circuit, gen_network
from .interaction import interaction_matrix, ms_hc_count
from .network import (
    Network,
    all_pairs_distance,
    check_capacity,
    diameter,
    load_network,
    make_network,
    save_network,
)
from .oracle import OracleLimits, oracle_cover, oracle_dqc, oracle_dqcm, oracle_pair_cover
from .planner import (
    Plan,
    Teleportation,
    dqcm_greedy_plan,
    dqcm_plan,
    load_plan,
    merge_adjacent_migrations,
    overall_plan,
    save_plan,
    sequence_plan,
    solve_segment,
    split_plan,
    teleports_between,
    validate_plan,
)
from .feasibility import ViolationReport, check_feasible, repair

__version__ = "0.1.0"
