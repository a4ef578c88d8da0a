"""Stable roommates with incomplete lists: reduction to the canonical
subgraph H, bipartite reducibility, fractional polytopes, and weighted
stable matching (exact on the reducible class, factor 2 on cycle form)."""

from .approx import (
    CycleStructure,
    OrientationProblem,
    TildeWeights,
    approximate_min_weight,
    approximate_report,
    check_cycle_form,
    orientation_constraints,
    tilde_weights,
)
from .errors import (
    NO_STABLE_MATCHING,
    UNSATISFIABLE,
    BadPartition,
    CyclicPrecedence,
    DomainMismatch,
    EdgeInEM,
    InstanceTooLarge,
    InvalidInstance,
    InvalidMatching,
    NoStableMatching,
    NoStableMatchingError,
    NotBipartite,
    NotPerfectCore,
    NotReducible,
    NotSemiStable,
    ParseError,
    PreconditionViolated,
    RoommatesError,
    UnknownEdge,
    Unsatisfiable,
)
from .irving import find_stable_matching, partition_matched, perfect_core, phase_one
from .model import EdgeWeights, Matching, PreferenceSystem, edge, is_blocking, is_stable, phi
from .optcore import ClosureInstance, FlowNetwork, TwoLitSystem, max_flow_min_cut, min_weight_closure, two_sat
from .oracle import brute_optimum, enumerate_stable_matchings
from .polytope import (
    FractionalPoint,
    PolytopeVariant,
    SemiStablePartition,
    build_hc,
    decompose_fractional,
    enumerate_semistable,
    halfintegral_points,
    membership,
    semistable_feasible,
)
from .reduction import (
    compute_em,
    is_bipartite_reducible,
    reduce_to_h,
    removal_preserves,
)
from .solver import RotationSystem, optimize_exact, proposer_optimal, rotation_system


__all__ = [
    "BadPartition",
    "ClosureInstance",
    "CycleStructure",
    "CyclicPrecedence",
    "DomainMismatch",
    "EdgeInEM",
    "EdgeWeights",
    "FlowNetwork",
    "FractionalPoint",
    "InstanceTooLarge",
    "InvalidInstance",
    "InvalidMatching",
    "Matching",
    "NO_STABLE_MATCHING",
    "NoStableMatching",
    "NoStableMatchingError",
    "NotBipartite",
    "NotPerfectCore",
    "NotReducible",
    "NotSemiStable",
    "OrientationProblem",
    "ParseError",
    "PolytopeVariant",
    "PreconditionViolated",
    "PreferenceSystem",
    "RoommatesError",
    "RotationSystem",
    "SemiStablePartition",
    "TildeWeights",
    "TwoLitSystem",
    "UNSATISFIABLE",
    "UnknownEdge",
    "Unsatisfiable",
    "approximate_min_weight",
    "approximate_report",
    "brute_optimum",
    "build_hc",
    "check_cycle_form",
    "compute_em",
    "decompose_fractional",
    "edge",
    "enumerate_semistable",
    "enumerate_stable_matchings",
    "find_stable_matching",
    "halfintegral_points",
    "is_bipartite_reducible",
    "is_blocking",
    "is_stable",
    "max_flow_min_cut",
    "membership",
    "min_weight_closure",
    "optimize_exact",
    "orientation_constraints",
    "partition_matched",
    "perfect_core",
    "phase_one",
    "phi",
    "proposer_optimal",
    "reduce_to_h",
    "removal_preserves",
    "rotation_system",
    "semistable_feasible",
    "tilde_weights",
    "two_sat",
]
