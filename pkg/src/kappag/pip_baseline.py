"""Indicator-based stochastic-search baseline with a Zellner g-prior.

Each model is a boolean inclusion vector gamma; its marginal likelihood
under the g-prior N(0, g sigma2 (X_g'X_g)^-1) with the scale-invariant
1/sigma2 prior has the standard closed form (up to one constant shared by
all gamma on the same data)::

    log p(y | gamma) = -(k/2) log(1 + g) - (n/2) log(y'y - g/(1+g) y'P y)

where k is the model size and P the projection onto the selected columns.
A Gibbs scan over the coordinates of gamma yields posterior inclusion
probabilities (PIP); exhaustive enumeration over all 2^p models serves as
the exact reference for small p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from .dataset import Dataset, validate
from .errors import InvalidConfigError, RankDeficientError

MAX_GIBBS_P = 25
MAX_ENUM_P = 15


@dataclass(frozen=True, eq=False)
class IndicatorState:
    """One visited model: inclusion vector and cached log marginal."""

    gamma: np.ndarray
    log_marginal: float


def log_marginal_gamma(dataset: Dataset, gamma, g_scale: float) -> float:
    """Log marginal likelihood of the model selecting columns ``gamma``,
    up to an additive constant shared across models on the same data.

    The empty model is the intercept-free null with marginal proportional
    to (y'y)^(-n/2).
    """
    if g_scale <= 0.0:
        raise InvalidConfigError(f"g_scale must be positive, got {g_scale}")
    gamma = np.asarray(gamma, dtype=bool).ravel()
    if gamma.shape[0] != dataset.p:
        raise InvalidConfigError(
            f"gamma has length {gamma.shape[0]}, expected p={dataset.p}"
        )
    n = dataset.n
    yty = float(dataset.y @ dataset.y)
    k = int(gamma.sum())
    if k == 0:
        return float(-(n / 2.0) * np.log(yty))
    sub = dataset.xtx[np.ix_(gamma, gamma)]
    try:
        L = np.linalg.cholesky(sub)
    except np.linalg.LinAlgError as exc:
        raise RankDeficientError("selected submatrix is rank deficient") from exc
    w = solve_triangular(L, dataset.xty[gamma], lower=True)
    fit = float(w @ w)
    shrink = g_scale / (1.0 + g_scale)
    resid = max(yty - shrink * fit, np.finfo(float).tiny)
    return float(-(k / 2.0) * np.log1p(g_scale) - (n / 2.0) * np.log(resid))


def _log_prior(k: int, p: int, prior_inclusion: float) -> float:
    return k * np.log(prior_inclusion) + (p - k) * np.log1p(-prior_inclusion)


def enumerate_pip(
    dataset: Dataset, g_scale: float, prior_inclusion: float = 0.5
) -> np.ndarray:
    """Exact PIP by summing over all 2^p models (p <= 15)."""
    validate(dataset)
    p = dataset.p
    if p > MAX_ENUM_P:
        raise InvalidConfigError(f"enumeration limited to p <= {MAX_ENUM_P}, got {p}")
    if not 0.0 < prior_inclusion < 1.0:
        raise InvalidConfigError("prior_inclusion must lie in (0, 1)")
    gammas = np.array(list(itertools.product([False, True], repeat=p)))
    log_post = np.array(
        [
            log_marginal_gamma(dataset, gm, g_scale)
            + _log_prior(int(gm.sum()), p, prior_inclusion)
            for gm in gammas
        ]
    )
    weights = np.exp(log_post - logsumexp(log_post))
    return weights @ gammas.astype(float)


def ssvs_pip(
    dataset: Dataset,
    g_scale: float,
    prior_inclusion: float = 0.5,
    T: int = 20000,
    seed: int = 0,
    burn_in: int | None = None,
) -> np.ndarray:
    """PIP estimated by Gibbs sampling over the inclusion indicators.

    Each sweep resamples every coordinate from its exact conditional odds
    (ratio of model marginals times prior odds); the PIP is the mean of
    the indicator over the post burn-in sweeps.  Deterministic in the
    seed (single Philox stream).
    """
    validate(dataset)
    p = dataset.p
    if p > MAX_GIBBS_P:
        raise InvalidConfigError(f"Gibbs scan limited to p <= {MAX_GIBBS_P}, got {p}")
    if T < 1:
        raise InvalidConfigError(f"T must be >= 1, got {T}")
    if not 0.0 < prior_inclusion < 1.0:
        raise InvalidConfigError("prior_inclusion must lie in (0, 1)")
    burn = T // 10 if burn_in is None else burn_in
    if not 0 <= burn < T:
        raise InvalidConfigError(f"burn_in must satisfy 0 <= burn_in < T, got {burn}")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    prior_logodds = float(np.log(prior_inclusion) - np.log1p(-prior_inclusion))
    gamma = np.zeros(p, dtype=bool)
    lm_cur = log_marginal_gamma(dataset, gamma, g_scale)
    counts = np.zeros(p)
    kept = 0
    for t in range(T):
        for j in range(p):
            with_j = gamma.copy()
            with_j[j] = True
            without_j = gamma.copy()
            without_j[j] = False
            lm1 = lm_cur if gamma[j] else log_marginal_gamma(dataset, with_j, g_scale)
            lm0 = lm_cur if not gamma[j] else log_marginal_gamma(
                dataset, without_j, g_scale
            )
            logodds = lm1 - lm0 + prior_logodds
            prob1 = 1.0 / (1.0 + np.exp(-logodds))
            include = rng.random() < prob1
            gamma[j] = include
            lm_cur = lm1 if include else lm0
        if t >= burn:
            counts += gamma
            kept += 1
    return counts / kept
