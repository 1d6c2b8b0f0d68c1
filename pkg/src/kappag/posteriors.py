"""Closed-form conditional posteriors of the stabilized g-prior model.

The model places a Gaussian prior ``beta ~ N(0, kappa sigma2 (G X'X G)^-1)``
on the regression coefficients, where ``G = diag(g_1..g_p)`` with every
``g_j`` in (0, 1), a Beta(a, b) prior on each g_j, an inverse-gamma prior
IG(alpha, theta) on kappa, and the scale-invariant prior 1/sigma2 on the
noise variance.  This module evaluates the resulting conditional-posterior
parameters and log densities; everything is computed in log space because
the exponent of the stabilizer posterior reaches hundreds for moderate
``||y||``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .dataset import Dataset, Hyperparameters, ModelState, OlsFit
from .errors import DomainError, SingularSystemError

# Stabilizer values are clamped this far inside (0, 1) before taking logs;
# Beta proposal draws can round to the boundary in finite precision.
G_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Mean and covariance of a multivariate normal conditional."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        cov = np.asarray(self.covariance, dtype=float)
        if not np.allclose(cov, cov.T, atol=1e-10):
            raise SingularSystemError("covariance is not symmetric")
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=float).ravel())
        object.__setattr__(self, "covariance", cov)

    def cholesky(self) -> np.ndarray:
        try:
            return np.linalg.cholesky(self.covariance)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError("covariance is not positive definite") from exc


@dataclass(frozen=True)
class InverseGammaParams:
    """Shape/scale of an inverse-gamma conditional."""

    shape: float
    scale: float

    def __post_init__(self):
        for name in ("shape", "scale"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be strictly positive, got {value!r}")
            object.__setattr__(self, name, value)

    def mean(self) -> float:
        if self.shape <= 1.0:
            return np.inf
        return self.scale / (self.shape - 1.0)


def _check_g(g, p: int | None = None) -> np.ndarray:
    g = np.asarray(g, dtype=float).ravel()
    if p is not None and g.shape[0] != p:
        raise DomainError(f"g has length {g.shape[0]}, expected {p}")
    if not np.all(np.isfinite(g)) or np.any(g <= 0.0) or np.any(g >= 1.0):
        raise DomainError("every g_j must lie strictly inside (0, 1)")
    return np.clip(g, G_EPS, 1.0 - G_EPS)


def _check_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if not np.isfinite(value) or value <= 0.0:
            raise DomainError(f"{name} must be strictly positive, got {value!r}")


def _precision_matrix(xtx: np.ndarray, g: np.ndarray, kappa: float) -> np.ndarray:
    # G X'X G scales entry (i, j) of X'X by g_i g_j.
    return xtx + np.outer(g, g) * xtx / kappa


def _chol(a: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("precision matrix failed to factorize") from exc


def beta_conditional(
    dataset: Dataset, g, kappa: float, sigma2: float
) -> GaussianParams:
    """Gaussian conditional of the coefficients given (g, kappa, sigma2).

    With ``A = X'X + (1/kappa) G X'X G`` the mean is ``A^-1 X'y`` and the
    covariance ``sigma2 A^-1``.
    """
    g = _check_g(g, dataset.p)
    _check_positive(kappa=kappa, sigma2=sigma2)
    L = _chol(_precision_matrix(dataset.xtx, g, kappa))
    half = solve_triangular(L, np.eye(dataset.p), lower=True)
    a_inv = half.T @ half
    mean = a_inv @ dataset.xty
    cov = sigma2 * a_inv
    return GaussianParams(mean=mean, covariance=(cov + cov.T) / 2.0)


def log_post_G(
    dataset: Dataset, g, kappa: float, sigma2: float, a: float, b: float
) -> float:
    """Unnormalized log posterior of the stabilizer vector given
    (y, kappa, sigma2), with the coefficients integrated out.

    Up to one additive constant per (dataset, kappa, sigma2) this equals::

        a sum(log g_j) + (b - 1) sum(log(1 - g_j))
        - 1/2 logdet(A) + y'X A^-1 X'y / (2 sigma2),
        A = X'X + (1/kappa) G X'X G

    The exponent ``a`` (not ``a - 1``) on g_j is correct: one power of g_j
    comes from the normalizing constant of the coefficient prior.
    """
    g = _check_g(g, dataset.p)
    _check_positive(kappa=kappa, sigma2=sigma2, a=a, b=b)
    L = _chol(_precision_matrix(dataset.xtx, g, kappa))
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    w = solve_triangular(L, dataset.xty, lower=True)
    quad = float(w @ w)
    return float(
        a * np.sum(np.log(g))
        + (b - 1.0) * np.sum(np.log1p(-g))
        - 0.5 * logdet
        + quad / (2.0 * sigma2)
    )


def log_post_gj_orthogonal(
    xjty: float,
    xjtxj: float,
    gj: float,
    kappa: float,
    sigma2: float,
    a: float,
    b: float,
) -> float:
    """Log marginal posterior of a single stabilizer under an orthogonal
    design (X'X diagonal), up to an additive constant::

        a log g + (b - 1) log(1 - g) - 1/2 log(kappa + g^2)
        + kappa (x_j'y)^2 / (2 sigma2 x_j'x_j (kappa + g^2))
    """
    if not np.isfinite(gj) or gj <= 0.0 or gj >= 1.0:
        raise DomainError(f"g_j must lie strictly inside (0, 1), got {gj!r}")
    _check_positive(xjtxj=xjtxj, kappa=kappa, sigma2=sigma2, a=a, b=b)
    gj = min(max(gj, G_EPS), 1.0 - G_EPS)
    denom = kappa + gj * gj
    return float(
        a * np.log(gj)
        + (b - 1.0) * np.log1p(-gj)
        - 0.5 * np.log(denom)
        + kappa * xjty * xjty / (2.0 * sigma2 * xjtxj * denom)
    )


def kappa_conditional(
    state: ModelState, dataset: Dataset, hyper: Hyperparameters
) -> InverseGammaParams:
    """Inverse-gamma conditional of the global scale kappa.

    shape = p/2 + alpha;
    scale = (beta - beta0)' G X'X G (beta - beta0) / (2 sigma2) + theta.
    """
    return _kappa_params(
        state.beta, state.g, state.sigma2, dataset.xtx, hyper, dataset.p
    )


def _kappa_params(beta, g, sigma2, xtx, hyper: Hyperparameters, p: int):
    dev = g * (beta - hyper.beta0_for(p))
    quad = float(dev @ xtx @ dev)
    return InverseGammaParams(
        shape=p / 2.0 + hyper.alpha,
        scale=quad / (2.0 * sigma2) + hyper.theta,
    )


def sigma2_conditional(
    state: ModelState, dataset: Dataset, hyper: Hyperparameters, ols: OlsFit
) -> InverseGammaParams:
    """Inverse-gamma conditional of the noise variance.

    shape = (n + p)/2;
    scale = s2/2 + (beta - beta_hat)' X'X (beta - beta_hat) / 2
            + (beta - beta0)' G X'X G (beta - beta0) / (2 kappa).
    """
    return _sigma2_params(
        state.beta, state.g, state.kappa, dataset.n, dataset.p, dataset.xtx, hyper, ols
    )


def _sigma2_params(beta, g, kappa, n, p, xtx, hyper: Hyperparameters, ols: OlsFit):
    d = beta - ols.beta_hat
    dev = g * (beta - hyper.beta0_for(p))
    return InverseGammaParams(
        shape=(n + p) / 2.0,
        scale=ols.s2 / 2.0
        + float(d @ xtx @ d) / 2.0
        + float(dev @ xtx @ dev) / (2.0 * kappa),
    )
