"""Metropolis-within-Gibbs sampler for the stabilized g-prior model.

Each sweep updates, in this fixed order: the coefficients (multivariate
normal conditional), the global scale kappa (inverse gamma), the noise
variance sigma2 (inverse gamma), and finally the stabilizer vector g via
a Metropolis step with an independence Beta proposal, targeting the
coefficient-marginalized posterior of g given (y, kappa, sigma2).

RNG discipline: one Philox counter-based stream per chain, split into one
sub-stream per parameter block (beta, kappa, sigma2, proposal, accept),
so disabling one block never shifts another block's draws.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import betaln

from .dataset import Dataset, Hyperparameters, ModelState, ols_fit, validate
from .errors import EmptyTraceError, InvalidConfigError
from .posteriors import (
    G_EPS,
    _chol,
    _kappa_params,
    _precision_matrix,
    _sigma2_params,
    log_post_G,
)

# Largest acceptance ratio reported before clipping; exp of anything
# bigger would overflow a double.
RATIO_CLIP = 1e300

# Joint proposals of all p stabilizers mix poorly beyond very small p
# (acceptance collapses roughly like a product over coordinates), so the
# automatic mode proposes coordinates one at a time above this.
JOINT_AUTO_MAX_P = 2


@dataclass(frozen=True)
class SamplerConfig:
    """Chain length, burn-in, seed, thinning, and g-update mode.

    ``burn_in=None`` defaults to ``iterations // 10``.  ``g_update`` is
    one of ``"auto"``, ``"joint"`` (propose the whole vector at once), or
    ``"percoord"`` (one Metropolis step per coordinate each sweep).
    """

    iterations: int
    seed: int = 0
    burn_in: int | None = None
    thin: int = 1
    g_update: str = "auto"

    def __post_init__(self):
        if self.iterations < 1:
            raise InvalidConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.thin < 1:
            raise InvalidConfigError(f"thin must be >= 1, got {self.thin}")
        if self.burn_in is not None and not 0 <= self.burn_in < self.iterations:
            raise InvalidConfigError(
                f"burn_in must satisfy 0 <= burn_in < iterations, got {self.burn_in}"
            )
        if self.g_update not in ("auto", "joint", "percoord"):
            raise InvalidConfigError(f"unknown g_update mode {self.g_update!r}")

    @property
    def burn_in_resolved(self) -> int:
        return self.iterations // 10 if self.burn_in is None else self.burn_in

    def g_update_for(self, p: int) -> str:
        if self.g_update != "auto":
            return self.g_update
        return "joint" if p <= JOINT_AUTO_MAX_P else "percoord"


@dataclass(frozen=True, eq=False)
class ChainTrace:
    """Stored sweeps of one chain.

    ``accepted[t]`` records whether sweep t's Metropolis step changed g
    (with per-coordinate updates: whether any coordinate moved), so
    ``accepted[t] == False`` implies g row t equals row t-1 exactly when
    ``thin == 1``.  ``burn_in`` counts leading stored rows to discard.
    """

    beta: np.ndarray
    g: np.ndarray
    kappa: np.ndarray
    sigma2: np.ndarray
    accepted: np.ndarray
    seed: int
    burn_in: int
    thin: int = 1

    def __len__(self) -> int:
        return self.g.shape[0]

    @property
    def p(self) -> int:
        return self.g.shape[1]

    def post_burn_in(self) -> "ChainTrace":
        """View of the trace with the burn-in rows dropped."""
        if len(self) <= self.burn_in:
            raise EmptyTraceError(
                f"trace has {len(self)} rows, burn_in={self.burn_in}"
            )
        s = slice(self.burn_in, None)
        return ChainTrace(
            beta=self.beta[s],
            g=self.g[s],
            kappa=self.kappa[s],
            sigma2=self.sigma2[s],
            accepted=self.accepted[s],
            seed=self.seed,
            burn_in=0,
            thin=self.thin,
        )


def default_init(dataset: Dataset, hyper: Hyperparameters | None = None) -> ModelState:
    """Default chain start: OLS coefficients, g_j = 1/2, kappa = 1,
    sigma2 = s2 / (n - p)."""
    ols = ols_fit(dataset)
    if dataset.n <= dataset.p:
        raise InvalidConfigError(
            f"default initialization needs n > p, got n={dataset.n}, p={dataset.p}"
        )
    sigma2 = ols.s2 / (dataset.n - dataset.p)
    if sigma2 <= 0.0:
        raise InvalidConfigError(
            "response is exactly interpolated (s2 = 0); supply an explicit init"
        )
    return ModelState(
        beta=ols.beta_hat,
        g=np.full(dataset.p, 0.5),
        kappa=1.0,
        sigma2=sigma2,
    )


def _beta_proposal_logpdf(g: np.ndarray, pa: float, pb: float) -> float:
    if pa == 1.0 and pb == 1.0:
        return 0.0
    return float(
        np.sum((pa - 1.0) * np.log(g) + (pb - 1.0) * np.log1p(-g))
        - g.shape[0] * betaln(pa, pb)
    )


def metropolis_accept_ratio(
    g_proposed,
    g_current,
    dataset: Dataset,
    kappa: float,
    sigma2: float,
    hyper: Hyperparameters,
) -> float:
    """Acceptance ratio r for an independence Beta proposal of g:

        r = [p(g*|y,kappa,sigma2) / J(g*)] / [p(g|y,kappa,sigma2) / J(g)]

    evaluated in log space and exponentiated with clipping at 1e300.
    With the default Beta(1, 1) proposal the J terms cancel exactly.
    """
    g_proposed = np.asarray(g_proposed, dtype=float).ravel()
    g_current = np.asarray(g_current, dtype=float).ravel()
    lp_new = log_post_G(dataset, g_proposed, kappa, sigma2, hyper.a, hyper.b)
    lp_old = log_post_G(dataset, g_current, kappa, sigma2, hyper.a, hyper.b)
    log_r = (
        lp_new
        - _beta_proposal_logpdf(g_proposed, hyper.proposal_a, hyper.proposal_b)
        - lp_old
        + _beta_proposal_logpdf(g_current, hyper.proposal_a, hyper.proposal_b)
    )
    with np.errstate(over="ignore"):
        ratio = float(np.exp(log_r))
    return min(ratio, RATIO_CLIP)


def _accept(rng: np.random.Generator, log_r: float) -> bool:
    # u < min(1, r) with r evaluated safely in log space.
    return rng.random() < np.exp(min(log_r, 0.0))


def run_chain(
    dataset: Dataset,
    hyper: Hyperparameters,
    config: SamplerConfig,
    init: ModelState | None = None,
    *,
    update_beta: bool = True,
    update_kappa: bool = True,
    update_sigma2: bool = True,
    update_g: bool = True,
) -> ChainTrace:
    """Run one chain and return its stored trace.

    Identical (dataset, hyper, config, init) reproduce the trace
    bit-exactly.  The ``update_*`` switches freeze individual blocks at
    their current values (for conjugacy checks and oracle comparisons);
    thanks to the per-block sub-streams they do not perturb the draws of
    the remaining blocks.
    """
    validate(dataset)
    p = dataset.p
    ols = ols_fit(dataset)
    if init is None:
        init = default_init(dataset, hyper)
    if init.p != p:
        raise InvalidConfigError(f"init has p={init.p}, dataset has p={p}")
    hyper.beta0_for(p)  # fail fast on a mis-sized prior mean

    keys = np.random.SeedSequence(config.seed).spawn(5)
    rng_beta, rng_kappa, rng_sigma2, rng_prop, rng_accept = (
        np.random.Generator(np.random.Philox(k)) for k in keys
    )

    T = config.iterations
    thin = config.thin
    burn = config.burn_in_resolved
    mode = config.g_update_for(p)
    pa, pb = hyper.proposal_a, hyper.proposal_b

    n_stored = (T + thin - 1) // thin
    out_beta = np.empty((n_stored, p))
    out_g = np.empty((n_stored, p))
    out_kappa = np.empty(n_stored)
    out_sigma2 = np.empty(n_stored)
    out_accepted = np.zeros(n_stored, dtype=bool)

    xtx = dataset.xtx
    xty = dataset.xty
    beta = init.beta.copy()
    g = init.g.copy()
    kappa = init.kappa
    sigma2 = init.sigma2

    for t in range(T):
        if update_beta:
            L = _chol(_precision_matrix(xtx, g, kappa))
            mean = solve_triangular(
                L.T, solve_triangular(L, xty, lower=True), lower=False
            )
            z = rng_beta.standard_normal(p)
            beta = mean + np.sqrt(sigma2) * solve_triangular(L.T, z, lower=False)

        if update_kappa:
            ig = _kappa_params(beta, g, sigma2, xtx, hyper, p)
            kappa = ig.scale / rng_kappa.standard_gamma(ig.shape)

        if update_sigma2:
            ig = _sigma2_params(beta, g, kappa, dataset.n, p, xtx, hyper, ols)
            sigma2 = ig.scale / rng_sigma2.standard_gamma(ig.shape)

        accepted = False
        if update_g:
            lp_cur = log_post_G(dataset, g, kappa, sigma2, hyper.a, hyper.b)
            if mode == "joint":
                g_star = np.clip(rng_prop.beta(pa, pb, size=p), G_EPS, 1.0 - G_EPS)
                lp_star = log_post_G(dataset, g_star, kappa, sigma2, hyper.a, hyper.b)
                log_r = (
                    lp_star
                    - _beta_proposal_logpdf(g_star, pa, pb)
                    - lp_cur
                    + _beta_proposal_logpdf(g, pa, pb)
                )
                if _accept(rng_accept, log_r):
                    g = g_star
                    accepted = True
            else:
                for j in range(p):
                    gj_star = float(np.clip(rng_prop.beta(pa, pb), G_EPS, 1.0 - G_EPS))
                    g_star = g.copy()
                    g_star[j] = gj_star
                    lp_star = log_post_G(
                        dataset, g_star, kappa, sigma2, hyper.a, hyper.b
                    )
                    log_r = (
                        lp_star
                        - _scalar_beta_logpdf(gj_star, pa, pb)
                        - lp_cur
                        + _scalar_beta_logpdf(g[j], pa, pb)
                    )
                    if _accept(rng_accept, log_r):
                        g = g_star
                        lp_cur = lp_star
                        accepted = True

        if t % thin == 0:
            s = t // thin
            out_beta[s] = beta
            out_g[s] = g
            out_kappa[s] = kappa
            out_sigma2[s] = sigma2
            out_accepted[s] = accepted

    stored_burn = len(range(0, min(burn, T), thin))
    return ChainTrace(
        beta=out_beta,
        g=out_g,
        kappa=out_kappa,
        sigma2=out_sigma2,
        accepted=out_accepted,
        seed=config.seed,
        burn_in=stored_burn,
        thin=thin,
    )


def _scalar_beta_logpdf(x: float, pa: float, pb: float) -> float:
    if pa == 1.0 and pb == 1.0:
        return 0.0
    return float((pa - 1.0) * np.log(x) + (pb - 1.0) * np.log1p(-x) - betaln(pa, pb))


def acceptance_rate(trace: ChainTrace) -> float:
    """Mean of the Metropolis accept flags over the post burn-in rows."""
    if len(trace) == 0:
        raise EmptyTraceError("trace is empty")
    flags = trace.accepted[trace.burn_in :]
    if flags.size == 0:
        raise EmptyTraceError("no rows after burn-in")
    return float(flags.mean())


def trace_meta(trace: ChainTrace, hyper: Hyperparameters, config: SamplerConfig) -> dict:
    """JSON-ready summary header for an exported trace."""
    return {
        "seed": int(trace.seed),
        "iterations": int(config.iterations),
        "burn_in": int(config.burn_in_resolved),
        "thin": int(trace.thin),
        "stored_rows": len(trace),
        "hyperparameters": {
            "a": hyper.a,
            "b": hyper.b,
            "alpha": hyper.alpha,
            "theta": hyper.theta,
            "beta0": None if hyper.beta0 is None else [float(v) for v in hyper.beta0],
            "proposal_a": hyper.proposal_a,
            "proposal_b": hyper.proposal_b,
        },
    }


def export_trace(
    trace: ChainTrace,
    csv_path,
    hyper: Hyperparameters | None = None,
    config: SamplerConfig | None = None,
    meta_path=None,
) -> None:
    """Write the trace as CSV (columns iter, beta_1..p, g_1..p, kappa,
    sigma2, accepted); when hyper and config are given, also write the
    JSON summary header next to it (default: ``<csv_path>.meta.json``)."""
    csv_path = Path(csv_path)
    p = trace.p
    header = (
        ["iter"]
        + [f"beta_{j + 1}" for j in range(p)]
        + [f"g_{j + 1}" for j in range(p)]
        + ["kappa", "sigma2", "accepted"]
    )
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for s in range(len(trace)):
            row = (
                [str(s * trace.thin)]
                + [repr(float(v)) for v in trace.beta[s]]
                + [repr(float(v)) for v in trace.g[s]]
                + [repr(float(trace.kappa[s])), repr(float(trace.sigma2[s]))]
                + [str(int(trace.accepted[s]))]
            )
            writer.writerow(row)
    if hyper is not None and config is not None:
        if meta_path is None:
            meta_path = csv_path.with_name(csv_path.name + ".meta.json")
        Path(meta_path).write_text(
            json.dumps(trace_meta(trace, hyper, config), indent=2) + "\n"
        )
