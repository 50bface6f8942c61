"""Steiner bundles over prime fields: jumping pairs, transforms and classification."""

from .bundle import (
    ReducedBundle,
    SteinerPresentation,
    fiber_dual,
    is_steiner,
    random_steiner,
    reduced_summand,
    sample_steiner,
)
from .errors import (
    BudgetExceeded,
    InjectivityError,
    InvariantViolation,
    NotSteinerError,
    SamplerExhausted,
    ValidationError,
)
from .exactalg import FieldCtx, Subspace, kernel, rank, rref
from .jumping import (
    JumpingLocusReport,
    JumpingPair,
    enumerate_jumping_pairs,
    is_jumping_pair_ab,
    span_report,
    tangent_dim,
)
from .oracle import brute_rank_one_scan, tecnico_bound_property
from .schwarz import (
    TripletSpec,
    parse_triplet,
    schwarz_from_tensor,
    schwarz_p1,
    schwarz_scroll,
    schwarz_veronese,
)
from .transform import classify_max, transform_at, verify_transform_laws

__version__ = "0.1.0"
