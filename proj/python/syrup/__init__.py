"""Sycophancy-aware uncertainty estimation for language models.

Thin wrapper over the C++ core: Platt/SyRoUP calibrators, Brier metrics,
answer parsing and derivative extraction.
"""

from ._syrup import (
    ParseFailure,
    DegenerateLabels,
    aggregate_splits,
    brier_score,
    brier_skill_score,
    compute_itp,
    dnc_to_derivative,
    encode_behavior,
    expected_acc_bias,
    fit_platt,
    fit_syrup,
    parse_answer,
    predict,
    render_suggestion,
)

__all__ = [
    "ParseFailure",
    "DegenerateLabels",
    "aggregate_splits",
    "brier_score",
    "brier_skill_score",
    "compute_itp",
    "dnc_to_derivative",
    "encode_behavior",
    "expected_acc_bias",
    "fit_platt",
    "fit_syrup",
    "parse_answer",
    "predict",
    "render_suggestion",
]

__version__ = "0.1.0"
