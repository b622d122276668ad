"""Resampling methods, boosting ensembles and a benchmark harness for
imbalanced binary classification. Label 0 is the majority class, 1 the
minority class."""

from ._imbal import (
    BoostedModel,
    ConvergenceError,
    FitError,
    LinearModel,
    MetaEnsemble,
    ParameterError,
    balance_cascade,
    benchmark_methods,
    easy_ensemble,
    fit_adaboost,
    fit_logistic,
    generate,
    metrics,
    model_from_text,
    pca_project,
    render_plot,
    resample,
    resample_methods,
    run_benchmark,
    set_notices_enabled,
)

__all__ = [
    "BoostedModel",
    "ConvergenceError",
    "FitError",
    "LinearModel",
    "MetaEnsemble",
    "ParameterError",
    "balance_cascade",
    "benchmark_methods",
    "easy_ensemble",
    "fit_adaboost",
    "fit_logistic",
    "generate",
    "metrics",
    "model_from_text",
    "pca_project",
    "render_plot",
    "resample",
    "resample_methods",
    "run_benchmark",
    "set_notices_enabled",
]
