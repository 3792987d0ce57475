"""Checkers, searches and verdicts for (non-)representability claims."""

from .checkers import (
    almost_uniform_params,
    classification_report,
    counting_contradiction,
    find_spread,
    nonpappus_distribution,
    nonpappus_exclusion,
    rank1_exclusion,
    rank2_census,
    spread_argument,
    uniform_obstruction,
    validate_certificate,
)
from .forced import forced_distribution, forced_parameters, required_dims
from .search import divisible_code_search
from .verdict import Verdict

__all__ = [
    "Verdict",
    "almost_uniform_params",
    "classification_report",
    "counting_contradiction",
    "divisible_code_search",
    "find_spread",
    "forced_distribution",
    "forced_parameters",
    "nonpappus_distribution",
    "nonpappus_exclusion",
    "rank1_exclusion",
    "rank2_census",
    "required_dims",
    "spread_argument",
    "uniform_obstruction",
    "validate_certificate",
]
