"""Posterior summaries of a chain trace and the selection decision rule.

A variable is selected when the posterior mean of its stabilizer falls
below the threshold (default 0.5, a convention mirroring the familiar
median-probability cutoff; small stabilizers mark relevant predictors).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyTraceError
from .sampler import ChainTrace

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True, eq=False)
class PosteriorSummary:
    """Per-variable posterior summaries and selection decisions."""

    g_mean: np.ndarray
    g_median: np.ndarray
    inclusion_score: np.ndarray  # 1 - g_mean
    beta_mean: np.ndarray
    selected: np.ndarray
    threshold: float

    @property
    def p(self) -> int:
        return self.g_mean.shape[0]


def _post_burn_in(trace: ChainTrace) -> ChainTrace:
    if len(trace) == 0:
        raise EmptyTraceError("trace is empty")
    return trace.post_burn_in()


def summarize(trace: ChainTrace, threshold: float = DEFAULT_THRESHOLD) -> PosteriorSummary:
    """Means and medians over the post burn-in rows, plus the decision."""
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    kept = _post_burn_in(trace)
    g_mean = kept.g.mean(axis=0)
    return PosteriorSummary(
        g_mean=g_mean,
        g_median=np.median(kept.g, axis=0),
        inclusion_score=1.0 - g_mean,
        beta_mean=kept.beta.mean(axis=0),
        selected=g_mean < threshold,
        threshold=float(threshold),
    )


def pooled_summary(
    traces: list[ChainTrace], threshold: float = DEFAULT_THRESHOLD
) -> PosteriorSummary:
    """Summary over the concatenated post burn-in rows of several chains."""
    if not traces:
        raise EmptyTraceError("no traces to pool")
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    kepts = [_post_burn_in(t) for t in traces]
    g = np.vstack([t.g for t in kepts])
    beta = np.vstack([t.beta for t in kepts])
    g_mean = g.mean(axis=0)
    return PosteriorSummary(
        g_mean=g_mean,
        g_median=np.median(g, axis=0),
        inclusion_score=1.0 - g_mean,
        beta_mean=beta.mean(axis=0),
        selected=g_mean < threshold,
        threshold=float(threshold),
    )


def shrinkage_estimate(trace: ChainTrace) -> np.ndarray:
    """Posterior mean of the coefficients over the post burn-in rows."""
    return _post_burn_in(trace).beta.mean(axis=0)


def summary_report(summary: PosteriorSummary, names, beta_ols) -> list[dict]:
    """JSON-ready per-variable rows for the fit report."""
    beta_ols = np.asarray(beta_ols, dtype=float).ravel()
    rows = []
    for j, name in enumerate(names):
        rows.append(
            {
                "name": str(name),
                "g_mean": float(summary.g_mean[j]),
                "g_median": float(summary.g_median[j]),
                "inclusion_score": float(summary.inclusion_score[j]),
                "beta_mean": float(summary.beta_mean[j]),
                "beta_ols": float(beta_ols[j]),
                "selected": bool(summary.selected[j]),
            }
        )
    return rows


def compare_report(summary: PosteriorSummary, pip, names) -> list[dict]:
    """JSON-ready per-variable rows comparing the stabilizer summaries
    with the indicator baseline's posterior inclusion probabilities."""
    pip = np.asarray(pip, dtype=float).ravel()
    rows = []
    for j, name in enumerate(names):
        rows.append(
            {
                "name": str(name),
                "g_mean": float(summary.g_mean[j]),
                "one_minus_g_mean": float(1.0 - summary.g_mean[j]),
                "g_median": float(summary.g_median[j]),
                "one_minus_g_median": float(1.0 - summary.g_median[j]),
                "pip": float(pip[j]),
                "selected_stabilizer": bool(summary.selected[j]),
                "selected_pip": bool(pip[j] > 0.5),
            }
        )
    return rows
