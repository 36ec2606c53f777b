"""Crisp priority weights from fuzzy pairwise comparisons, composed over a criteria tree."""
from .fuzzy_core import (
    LinguisticScale,
    NonPositive,
    OrderViolation,
    TriangularFuzzyNumber,
    make_tfn,
    membership_degree,
    reciprocal,
)
from .hierarchy import CriterionNode, GlobalRanking, global_weights, rank, solve_hierarchy
from .judgments import (
    FuzzyComparisonMatrix,
    SpreadPolicy,
    aggregate_experts,
    build_matrix,
    import_crisp,
    validate,
)
from .report import Report, render, replay, run_solve
from .solver import PrioritizationResult, SolverConfig, feasible_at, oracle_lambda, solve
from .study import StudyFile, dump_study, load_dataset, parse_localweights, parse_study

__version__ = "0.1.0"
