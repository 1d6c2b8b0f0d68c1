"""Bayesian variable selection for linear regression via per-coefficient
prior stabilizers, with a Metropolis-within-Gibbs sampler, a deterministic
quadrature oracle for orthogonal designs, and an indicator/PIP baseline.
"""

from importlib.resources import files as _files

from .dataset import (
    Dataset,
    Hyperparameters,
    ModelState,
    OlsFit,
    load_csv,
    ols_fit,
    save_csv,
    standardize,
    validate,
)
from .errors import (
    DomainError,
    EmptyTraceError,
    InvalidConfigError,
    KappaGError,
    NonFiniteError,
    ParseError,
    RankDeficientError,
    ShapeMismatchError,
    SingularSystemError,
)
from .estimator import KappaGSelector, SSVSSelector
from .oracle import GridOracleResult, grid_posterior_gj, marginal_check_p1
from .pip_baseline import enumerate_pip, log_marginal_gamma, ssvs_pip
from .posteriors import (
    GaussianParams,
    InverseGammaParams,
    beta_conditional,
    kappa_conditional,
    log_post_G,
    log_post_gj_orthogonal,
    sigma2_conditional,
)
from .sampler import (
    ChainTrace,
    SamplerConfig,
    acceptance_rate,
    default_init,
    export_trace,
    metropolis_accept_ratio,
    run_chain,
)
from .selection import (
    PosteriorSummary,
    compare_report,
    pooled_summary,
    shrinkage_estimate,
    summarize,
    summary_report,
)
from .simgen import csv_roundtrip, gen_design, gen_sim_p2, gen_sim_p10

__version__ = "0.1.0"


def report_schema_path():
    """Path of the JSON schema that all CLI reports validate against."""
    return _files("kappag") / "schemas" / "report.schema.json"


__all__ = [
    "ChainTrace",
    "Dataset",
    "DomainError",
    "EmptyTraceError",
    "GaussianParams",
    "GridOracleResult",
    "Hyperparameters",
    "InvalidConfigError",
    "InverseGammaParams",
    "KappaGError",
    "KappaGSelector",
    "ModelState",
    "NonFiniteError",
    "OlsFit",
    "ParseError",
    "PosteriorSummary",
    "RankDeficientError",
    "SSVSSelector",
    "SamplerConfig",
    "ShapeMismatchError",
    "SingularSystemError",
    "acceptance_rate",
    "beta_conditional",
    "compare_report",
    "csv_roundtrip",
    "default_init",
    "enumerate_pip",
    "export_trace",
    "gen_design",
    "gen_sim_p2",
    "gen_sim_p10",
    "grid_posterior_gj",
    "kappa_conditional",
    "load_csv",
    "log_marginal_gamma",
    "log_post_G",
    "log_post_gj_orthogonal",
    "marginal_check_p1",
    "metropolis_accept_ratio",
    "ols_fit",
    "pooled_summary",
    "report_schema_path",
    "run_chain",
    "save_csv",
    "shrinkage_estimate",
    "sigma2_conditional",
    "ssvs_pip",
    "standardize",
    "summarize",
    "summary_report",
    "validate",
]
