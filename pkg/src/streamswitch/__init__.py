"""Memory-bounded streaming distinguishers: sampling with vs. without replacement.

Exact enumeration, information-theoretic bounds and Monte Carlo estimates for
streaming algorithms that must tell a uniform i.i.d. stream over ``[N]`` from
the prefix of a uniform random permutation.
"""
from .bounds import (
    BoundReport,
    bound_report,
    collision_exact_kl,
    corollary1_leading,
    lemma2_bound,
    lemma2_chain_bound,
    theorem1_leading,
    theorem2_lower,
)
from .collision import (
    CapacityVector,
    CollisionAlgorithm,
    analytic_accept_probability,
    build_collision_algorithm,
    derive_capacities,
)
from .entropy import (
    AbsoluteContinuityError,
    DomainError,
    FiniteDistribution,
    JointDistribution,
    binary_entropy,
    binary_entropy_inverse,
    entropy,
    f_func,
    kl_divergence,
    log_binomial,
    mutual_information,
    phi_func,
)
from .montecarlo import Estimate, estimate_accept, estimate_tv_advantage
from .oracle import OracleResult, Verdict, enumerate_distributions, verify_lemma1, verify_lemma2
from .streaming import (
    CapExceededError,
    ConstantAlgorithm,
    FunctionAlgorithm,
    MemoryProfile,
    NormalizedSimulation,
    StateWidthError,
    StreamAlgorithm,
    StreamState,
    TableAlgorithm,
    normalize_profile,
    parse_profile,
    random_algorithm,
    run_batch,
    run_stream,
    sample_with_replacement,
    sample_without_replacement,
)

__version__ = "0.1.0"
