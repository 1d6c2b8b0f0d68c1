"""Core data types, validation, and the reference least-squares fit.

Everything downstream (conditional posteriors, the Gibbs sampler, the
quadrature oracle, the indicator baseline) consumes the immutable
:class:`Dataset` defined here.  Validation is explicit: construction only
coerces dtypes, while :func:`validate` enforces the numerical invariants.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    DomainError,
    NonFiniteError,
    ParseError,
    RankDeficientError,
    ShapeMismatchError,
)

# Reject X'X whose reciprocal condition number falls below this.
RCOND_MIN = 1e-12


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Dataset:
    """A fixed design matrix ``X`` (n x p) and response vector ``y`` (n,).

    ``names`` optionally labels the p predictor columns.  Instances are
    immutable; the arrays are copied and marked read-only so they can be
    shared freely between threads.
    """

    X: np.ndarray
    y: np.ndarray
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "X", np.atleast_2d(_readonly(self.X)))
        object.__setattr__(self, "y", _readonly(self.y).ravel())
        if self.names is not None:
            object.__setattr__(self, "names", tuple(str(s) for s in self.names))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @cached_property
    def xtx(self) -> np.ndarray:
        return _readonly(self.X.T @ self.X)

    @cached_property
    def xty(self) -> np.ndarray:
        return _readonly(self.X.T @ self.y)

    def column_names(self) -> tuple[str, ...]:
        if self.names is not None:
            return self.names
        return tuple(f"x{j + 1}" for j in range(self.p))


@dataclass(frozen=True, eq=False)
class Hyperparameters:
    """Prior and proposal settings for the hierarchical model.

    ``a``, ``b`` are the Beta shape parameters shared by every stabilizer
    g_j; ``alpha``, ``theta`` the inverse-gamma shape/scale of the global
    scale kappa; ``beta0`` the prior mean of the coefficients (None means
    all-zero); ``proposal_a``/``proposal_b`` the Beta shapes of the
    independence proposal used in the Metropolis step.
    """

    a: float = 0.5
    b: float = 0.5
    alpha: float = 1.0
    theta: float = 1.0
    beta0: np.ndarray | None = None
    proposal_a: float = 1.0
    proposal_b: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "alpha", "theta", "proposal_a", "proposal_b"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be strictly positive, got {value!r}")
            object.__setattr__(self, name, value)
        if self.beta0 is not None:
            beta0 = _readonly(self.beta0).ravel()
            if not np.all(np.isfinite(beta0)):
                raise NonFiniteError("beta0 must be finite")
            object.__setattr__(self, "beta0", beta0)

    def beta0_for(self, p: int) -> np.ndarray:
        """Prior coefficient mean resolved to length ``p``."""
        if self.beta0 is None:
            return np.zeros(p)
        if self.beta0.shape[0] != p:
            raise ShapeMismatchError(
                f"beta0 has length {self.beta0.shape[0]}, expected {p}"
            )
        return self.beta0


@dataclass(frozen=True, eq=False)
class ModelState:
    """One point (beta, g, kappa, sigma2) in the parameter space."""

    beta: np.ndarray
    g: np.ndarray
    kappa: float
    sigma2: float

    def __post_init__(self):
        beta = _readonly(self.beta).ravel()
        g = _readonly(self.g).ravel()
        if beta.shape != g.shape:
            raise ShapeMismatchError("beta and g must have equal length")
        if not np.all(np.isfinite(beta)):
            raise NonFiniteError("beta must be finite")
        if np.any(g <= 0.0) or np.any(g >= 1.0):
            raise DomainError("every g_j must lie strictly inside (0, 1)")
        for name in ("kappa", "sigma2"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be strictly positive, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "g", g)

    @property
    def p(self) -> int:
        return self.beta.shape[0]


@dataclass(frozen=True, eq=False)
class OlsFit:
    """Least-squares reference fit: coefficients, residual sum of squares,
    and the cached Gram matrix."""

    beta_hat: np.ndarray
    s2: float
    xtx: np.ndarray = field(repr=False)


def validate(dataset: Dataset) -> Dataset:
    """Check all Dataset invariants, returning the dataset unchanged.

    Raises
    ------
    ShapeMismatchError
        Empty design, or ``len(y) != n``, or ``len(names) != p``.
    NonFiniteError
        Any NaN/Inf entry in X or y.
    RankDeficientError
        X'X not numerically invertible (reciprocal condition number
        below ``RCOND_MIN``), including the p > n case.
    """
    if dataset.X.ndim != 2:
        raise ShapeMismatchError(f"X must be 2-d, got ndim={dataset.X.ndim}")
    n, p = dataset.X.shape
    if n < 1 or p < 1:
        raise ShapeMismatchError(f"need n >= 1 and p >= 1, got shape {(n, p)}")
    if dataset.y.shape != (n,):
        raise ShapeMismatchError(
            f"y has length {dataset.y.shape[0]}, expected n={n}"
        )
    if dataset.names is not None and len(dataset.names) != p:
        raise ShapeMismatchError(
            f"names has length {len(dataset.names)}, expected p={p}"
        )
    if not np.all(np.isfinite(dataset.X)):
        raise NonFiniteError("X contains non-finite entries")
    if not np.all(np.isfinite(dataset.y)):
        raise NonFiniteError("y contains non-finite entries")
    if n < p:
        raise RankDeficientError(f"X'X is singular: more predictors than rows ({p} > {n})")
    eigvals = np.linalg.eigvalsh(dataset.xtx)
    if eigvals[-1] <= 0.0 or eigvals[0] / eigvals[-1] < RCOND_MIN:
        raise RankDeficientError(
            "X'X is numerically singular "
            f"(rcond={max(eigvals[0], 0.0) / eigvals[-1]:.3e} < {RCOND_MIN:g})"
        )
    return dataset


def ols_fit(dataset: Dataset) -> OlsFit:
    """Least-squares fit via a stable factorization of X itself.

    ``beta_hat`` minimizes ``||y - X beta||^2`` and ``s2`` is the residual
    sum of squares at the minimizer.
    """
    validate(dataset)
    beta_hat, _, _, _ = np.linalg.lstsq(dataset.X, dataset.y, rcond=None)
    resid = dataset.y - dataset.X @ beta_hat
    return OlsFit(beta_hat=beta_hat, s2=float(resid @ resid), xtx=dataset.xtx)


def standardize(dataset: Dataset) -> Dataset:
    """Center each predictor column and scale it to unit standard deviation.

    The response is left untouched.  Off by default everywhere; callers
    opt in explicitly.
    """
    mu = dataset.X.mean(axis=0)
    sd = dataset.X.std(axis=0)
    if np.any(sd == 0.0):
        j = int(np.argmax(sd == 0.0))
        raise RankDeficientError(f"column {j + 1} is constant and cannot be scaled")
    return Dataset((dataset.X - mu) / sd, dataset.y, dataset.names)


def _parse_cell(text: str, row: int, column: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(
            f"non-numeric value {text!r} at row {row}, column {column}",
            row=row,
            column=column,
        ) from None


def load_csv(path, response="y", standardize_columns: bool = False) -> Dataset:
    """Read a Dataset from a headed CSV file.

    The first row must be a header.  ``response`` selects the response
    column either by header name or by 0-based file column index; the
    remaining numeric columns form X in file order.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file (no header row)") from None
        header = [h.strip() for h in header]
        if isinstance(response, int):
            if not 0 <= response < len(header):
                raise ParseError(
                    f"{path}: response index {response} out of range for "
                    f"{len(header)} columns"
                )
            y_col = response
        else:
            try:
                y_col = header.index(str(response))
            except ValueError:
                raise ParseError(
                    f"{path}: no column named {response!r} in header {header}"
                ) from None
        rows = []
        for line_no, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise ParseError(
                    f"{path}: row {line_no} has {len(record)} fields, "
                    f"expected {len(header)}",
                    row=line_no,
                )
            rows.append(
                [_parse_cell(cell, line_no, c + 1) for c, cell in enumerate(record)]
            )
    if not rows:
        raise ParseError(f"{path}: no data rows")
    table = np.asarray(rows, dtype=float)
    x_cols = [c for c in range(len(header)) if c != y_col]
    names = tuple(header[c] for c in x_cols)
    dataset = Dataset(table[:, x_cols], table[:, y_col], names)
    if standardize_columns:
        dataset = standardize(dataset)
    return dataset


def save_csv(dataset: Dataset, path, response_name: str = "y") -> None:
    """Write the dataset as a headed CSV: predictor columns, then the
    response as the final column.  Floats are written with shortest
    round-trip precision so a read back is bit-exact."""
    path = Path(path)
    names = dataset.column_names()
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + [response_name])
        for i in range(dataset.n):
            writer.writerow(
                [repr(float(v)) for v in dataset.X[i]] + [repr(float(dataset.y[i]))]
            )
