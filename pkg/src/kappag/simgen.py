"""Seeded generators for the two benchmark simulation designs.

Both designs draw i.i.d. standard-normal predictors and add unit-variance
Gaussian noise; the first has p = 2 with one active variable, the second
p = 10 with three.  Draw order is fixed (common factor if any, predictor
columns left to right, then noise) so datasets are pure functions of
(seed, n).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dataset import Dataset, load_csv, save_csv
from .errors import InvalidConfigError


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def gen_design(
    seed: int,
    n: int,
    true_beta,
    rho: float = 0.0,
    names=None,
) -> tuple[Dataset, np.ndarray]:
    """General synthetic design: N(0,1) predictors with optional
    equicorrelation ``rho``, response ``X @ true_beta + N(0,1)`` noise."""
    true_beta = np.asarray(true_beta, dtype=float).ravel()
    p = true_beta.shape[0]
    if n <= p:
        raise InvalidConfigError(f"need n > p, got n={n}, p={p}")
    if not 0.0 <= rho < 1.0:
        raise InvalidConfigError(f"rho must lie in [0, 1), got {rho}")
    rng = _rng(seed)
    X = np.empty((n, p))
    if rho > 0.0:
        common = rng.standard_normal(n)
        for j in range(p):
            X[:, j] = np.sqrt(rho) * common + np.sqrt(1.0 - rho) * rng.standard_normal(n)
    else:
        for j in range(p):
            X[:, j] = rng.standard_normal(n)
    noise = rng.standard_normal(n)
    y = X @ true_beta + noise
    return Dataset(X, y, names), true_beta


def gen_sim_p2(seed: int, n: int = 30) -> tuple[Dataset, np.ndarray]:
    """Two predictors, true model y = 2 x1 + noise."""
    if n < 3:
        raise InvalidConfigError(f"need n >= 3 for the p=2 design, got n={n}")
    return gen_design(seed, n, [2.0, 0.0])


def gen_sim_p10(seed: int, n: int = 30) -> tuple[Dataset, np.ndarray]:
    """Ten predictors, true model y = 2 (x1 + x2 + x8) + noise."""
    if n <= 10:
        raise InvalidConfigError(f"need n > 10 for the p=10 design, got n={n}")
    true_beta = np.zeros(10)
    true_beta[[0, 1, 7]] = 2.0
    return gen_design(seed, n, true_beta)


DESIGNS = {"p2": gen_sim_p2, "p10": gen_sim_p10}


def write_manifest(path, design: str, seed: int, dataset: Dataset, true_beta) -> None:
    """Write the JSON manifest that accompanies a generated data.csv."""
    manifest = {
        "design": design,
        "seed": int(seed),
        "n": dataset.n,
        "p": dataset.p,
        "true_beta": [float(v) for v in np.asarray(true_beta).ravel()],
        "response": "y",
        "columns": list(dataset.column_names()),
    }
    Path(path).write_text(json.dumps(manifest, indent=2) + "\n")


def csv_roundtrip(dataset: Dataset, path) -> Dataset:
    """Write ``dataset`` to ``path`` and read it back."""
    save_csv(dataset, path)
    return load_csv(path, response="y")
