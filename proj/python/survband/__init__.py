"""Parametric survival analysis under non-proportional hazards.

Censored maximum likelihood for Weibull / exponential / log-logistic /
log-normal event models, pointwise confidence bands for the survival
difference and log hazard ratio (delta method and parametric bootstrap),
non-inferiority and equivalence tests, Kaplan-Meier baselines, and a
Monte-Carlo study harness.
"""

from ._core import (  # noqa: F401
    BandMethod,
    BandTarget,
    ConfidenceBand,
    CurveValues,
    Family,
    FitResult,
    KMEstimate,
    LogrankResult,
    NumericError,
    Rng,
    ScenarioConfig,
    SurvivalSample,
    TestDecision,
    TestKind,
    __version__,
    bootstrap_variance,
    calibrate_uniform_censoring,
    censoring_log_likelihood,
    coverage_study,
    delta_variance,
    equivalence_test,
    eval,
    fit_censoring,
    fit_joint,
    fit_mle,
    generate_pair,
    grad_log_hazard,
    grad_survival,
    interval_test,
    kaplan_meier,
    km_difference_band,
    log_hazard_ratio,
    log_likelihood,
    logrank_test,
    noninferiority_test,
    parse_dataset,
    pointwise_band,
    quantile,
    rejection_study,
    sample,
    scenario,
    scenario_names,
    select_model,
    standard_normal_quantile,
    survival_difference,
)
