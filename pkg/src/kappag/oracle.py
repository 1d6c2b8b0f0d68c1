"""Deterministic quadrature oracle for the orthogonal-design case.

Under an orthogonal design the stabilizers are a posteriori independent
and each marginal density is known up to a constant, so a dense grid plus
trapezoid normalization gives ground truth to validate the Metropolis
sampler against.  When ``b < 1`` the density diverges at g = 1; the grid
is therefore open (endpoints excluded) and all quantities refer to the
density truncated to the grid range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .dataset import Dataset
from .errors import DomainError
from .posteriors import log_post_G, log_post_gj_orthogonal

DEFAULT_GRID_SIZE = 2000


@dataclass(frozen=True, eq=False)
class GridOracleResult:
    """Normalized density of one stabilizer on an open uniform grid."""

    grid: np.ndarray
    density: np.ndarray
    mean: float
    median: float
    argmax: float

    def cdf(self) -> np.ndarray:
        """Cumulative trapezoid integral of the density along the grid."""
        inc = np.diff(self.grid) * (self.density[1:] + self.density[:-1]) / 2.0
        return np.concatenate([[0.0], np.cumsum(inc)])

    def bin_masses(self, edges) -> np.ndarray:
        """Probability mass between consecutive ``edges`` (renormalized
        so the masses sum to one over the grid range)."""
        edges = np.asarray(edges, dtype=float)
        cdf = self.cdf()
        at_edges = np.interp(edges, self.grid, cdf, left=0.0, right=cdf[-1])
        masses = np.diff(at_edges)
        return masses / masses.sum()


def open_grid(m: int) -> np.ndarray:
    """The open uniform grid {k/(m+1) : k = 1..m} inside (0, 1)."""
    return np.arange(1, m + 1, dtype=float) / (m + 1)


def _normalize_on_grid(grid: np.ndarray, log_density: np.ndarray):
    shifted = np.exp(log_density - np.max(log_density))
    total = np.trapezoid(shifted, grid)
    return shifted / total


def grid_posterior_gj(
    xjty: float,
    xjtxj: float,
    kappa: float,
    sigma2: float,
    a: float,
    b: float,
    m: int = DEFAULT_GRID_SIZE,
) -> GridOracleResult:
    """Evaluate one stabilizer's marginal posterior on an m-point open grid.

    Returns the trapezoid-normalized density together with its mean,
    median (by linear CDF interpolation), and the grid argmax.
    """
    if m < 100:
        raise DomainError(f"grid size m must be >= 100, got {m}")
    grid = open_grid(m)
    log_density = np.array(
        [log_post_gj_orthogonal(xjty, xjtxj, g, kappa, sigma2, a, b) for g in grid]
    )
    density = _normalize_on_grid(grid, log_density)
    inc = np.diff(grid) * (density[1:] + density[:-1]) / 2.0
    cdf = np.concatenate([[0.0], np.cumsum(inc)])
    mean = float(np.trapezoid(grid * density, grid))
    median = float(np.interp(0.5, cdf, grid))
    argmax = float(grid[int(np.argmax(density))])
    return GridOracleResult(
        grid=grid, density=density, mean=mean, median=median, argmax=argmax
    )


def marginal_check_p1(
    dataset: Dataset,
    kappa: float,
    sigma2: float,
    a: float,
    b: float,
    m: int = 400,
    beta_points: int = 2001,
    span: float = 10.0,
) -> float:
    """Cross-check the analytic stabilizer posterior against brute-force
    integration of the joint density over the coefficient, for p = 1.

    For each grid value of g the joint density of (y, beta | g) is
    integrated over a beta grid spanning ``span`` posterior standard
    deviations, the resulting marginal is normalized over g, and the
    maximum pointwise discrepancy against the normalized analytic density
    is returned.
    """
    if dataset.p != 1:
        raise DomainError(f"marginal_check_p1 requires p = 1, got p={dataset.p}")
    if kappa <= 0 or sigma2 <= 0 or a <= 0 or b <= 0:
        raise DomainError("kappa, sigma2, a, b must all be strictly positive")
    x = dataset.X[:, 0]
    d = float(x @ x)
    xy = float(x @ dataset.y)
    yty = float(dataset.y @ dataset.y)
    grid = open_grid(m)

    # Conditional posterior of beta given g: precision d (kappa + g^2) /
    # (kappa sigma2), mean kappa xy / (d (kappa + g^2)).
    denom = kappa + grid**2
    post_mean = kappa * xy / (d * denom)
    post_sd = np.sqrt(kappa * sigma2 / (d * denom))
    offsets = np.linspace(-span, span, beta_points)
    betas = post_mean[:, None] + post_sd[:, None] * offsets[None, :]

    log_lik = -(yty - 2.0 * betas * xy + betas**2 * d) / (2.0 * sigma2)
    log_prior_beta = 0.5 * np.log(
        grid[:, None] ** 2 * d / (2.0 * np.pi * kappa * sigma2)
    ) - grid[:, None] ** 2 * d * betas**2 / (2.0 * kappa * sigma2)
    log_prior_g = (a - 1.0) * np.log(grid) + (b - 1.0) * np.log1p(-grid)
    step = post_sd * (2.0 * span / (beta_points - 1))
    log_marginal = (
        logsumexp(log_lik + log_prior_beta, axis=1) + np.log(step) + log_prior_g
    )
    brute = _normalize_on_grid(grid, log_marginal)

    analytic_log = np.array(
        [log_post_G(dataset, np.array([g]), kappa, sigma2, a, b) for g in grid]
    )
    analytic = _normalize_on_grid(grid, analytic_log)
    return float(np.max(np.abs(brute - analytic)))


def pair_grid_log_density(
    dataset: Dataset,
    kappa: float,
    sigma2: float,
    a: float,
    b: float,
    j: int = 0,
    k: int = 1,
    m: int = 101,
    fill: float = 0.5,
) -> tuple[np.ndarray, np.ndarray]:
    """Log posterior of two stabilizers on an m x m open grid, with all
    other coordinates held at ``fill``.  Returns (grid, Z) where
    ``Z[r, c]`` is the log density at g_j = grid[r], g_k = grid[c]."""
    if m < 2:
        raise DomainError(f"grid size m must be >= 2, got {m}")
    if j == k or not (0 <= j < dataset.p) or not (0 <= k < dataset.p):
        raise DomainError(f"invalid coordinate pair ({j}, {k}) for p={dataset.p}")
    grid = open_grid(m)
    z = np.empty((m, m))
    g = np.full(dataset.p, fill)
    for r, gj in enumerate(grid):
        for c, gk in enumerate(grid):
            g[j] = gj
            g[k] = gk
            z[r, c] = log_post_G(dataset, g, kappa, sigma2, a, b)
    return grid, z
