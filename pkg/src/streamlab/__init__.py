"""streamlab: streaming erasure codes over feedback-limited erasure channels.

Analytic trade-off evaluation and packet-level Monte Carlo simulation of
point-to-point block coding schemes and two-user coded multicast, built to
cross-validate closed-form throughput / in-order-delivery results against
exact receivers.
"""

__version__ = "0.1.0"

from .analytic import (
    BlockSchemeResult,
    OptimalityReport,
    arq_tradeoff,
    binary_divergence,
    block_scheme_tradeoff,
    mixture_tradeoff,
    no_feedback_tradeoff,
    proposed_code_tradeoff,
    upper_hull,
    verify_d23_optimality,
)
from .decoder import (
    FIELD_PRIME,
    DependentComboError,
    ReceiverState,
    generic_rank,
    mark_seen,
    prefix_decodable_count,
    prefix_rank,
    receiver_ingest,
)
from .model import (
    CodedCombo,
    ErasureTrace,
    SchemeVector,
    TradeoffPoint,
    TwoUserParams,
    canonicalize_scheme,
    enumerate_schemes,
    proposed_scheme,
    sample_trace,
)
from .multicast import (
    ChainSolution,
    ModelViolationError,
    StabilityError,
    Transmission,
    TwoUserState,
    choose_transmission,
    fixed_priority_absorbing_matrix,
    fixed_priority_stationary,
    fixed_priority_tradeoff,
    priority_absorbing_matrix,
    priority_q_roots,
    priority_q_solution,
    simulate_two_user,
    truncated_stationary,
)
from .sim import (
    Arq,
    Block,
    FullRank,
    Mixture,
    SimConfig,
    SimMetrics,
    estimate_exponent,
    renewal_discrepancy_probe,
    run_p2p,
    smoothness_vs_interdelivery,
)
