"""Regression and correlation analyses over the assembled language set.

Logistic regression predicting Invisible-Giant status is fitted by
iteratively reweighted least squares with a tiny ridge penalty (1e-6,
intercept unpenalized) and step-halving, which keeps even perfectly
separable covariates finite. Rank correlation uses average ranks for
ties and exact integer arithmetic, so monotone inputs give exactly 1.0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .ingest import LanguageSet
from .model import InputError, LangscapeError, OfficialStatus, Region

__all__ = [
    "MissingLabel",
    "SingularInformation",
    "LengthMismatch",
    "DegenerateInput",
    "AllZero",
    "KNOWN_CORPORA",
    "DesignMatrix",
    "LogisticFit",
    "TokenShareTable",
    "build_design",
    "penalized_loglik",
    "loglik_gradient",
    "fit_logistic",
    "predict_probability",
    "spearman",
    "token_share",
]


class MissingLabel(InputError):
    pass


class SingularInformation(LangscapeError):
    pass


class LengthMismatch(InputError):
    pass


class DegenerateInput(InputError):
    pass


class AllZero(InputError):
    pass


#: Training corpora whose token counts the analyze step expects.
KNOWN_CORPORA = ("Pile", "mC4", "ROOTS", "OSCAR")

RIDGE_LAMBDA = 1e-6
IRLS_MAX_ITER = 100
GRAD_TOL = 1e-8
LARGE_COEF = 15.0

_REGION_LEVELS = tuple(r for r in Region if r is not Region.AFRICA)
_OFFICIAL_LEVELS = (OfficialStatus.NATIONAL, OfficialStatus.REGIONAL)


@dataclass(frozen=True)
class DesignMatrix:
    """Encoded predictors with intercept first and reference levels dropped."""

    matrix: np.ndarray
    columns: tuple[str, ...]
    encoding: Mapping[str, Mapping[str, object]]
    row_ids: tuple[str, ...]


def build_design(languages: LanguageSet, labels: Mapping[str, bool]) -> tuple[DesignMatrix, np.ndarray]:
    """Design matrix plus 0/1 response from per-language boolean labels.

    Predictors: colonized, colonial duration (centuries), official-status
    one-hot (reference: none), unicode support. Controls: log10(1+speakers)
    and region one-hot (reference: Africa).
    """
    missing = [r.id for r in languages if r.id not in labels]
    if missing:
        raise MissingLabel(f"no label for: {', '.join(missing[:10])}")

    columns = (
        ("intercept",)
        + ("colonized", "colonial_duration_centuries")
        + tuple(f"official_{lvl.value}" for lvl in _OFFICIAL_LEVELS)
        + ("unicode_support", "log10_speakers")
        + tuple(f"region_{reg.value}" for reg in _REGION_LEVELS)
    )
    rows = []
    response = []
    row_ids = []
    for record in languages:
        cov = record.covariates
        row = [1.0, 1.0 if cov.colonized else 0.0, cov.colonial_duration_years / 100.0]
        row.extend(1.0 if cov.official_status is lvl else 0.0 for lvl in _OFFICIAL_LEVELS)
        row.append(1.0 if cov.unicode_support else 0.0)
        row.append(math.log10(1.0 + record.vitality.speakers_l1))
        row.extend(1.0 if cov.region is reg else 0.0 for reg in _REGION_LEVELS)
        rows.append(row)
        response.append(1.0 if labels[record.id] else 0.0)
        row_ids.append(record.id)

    design = DesignMatrix(
        matrix=np.asarray(rows, dtype=np.float64),
        columns=columns,
        encoding={
            "official_status": {"reference": OfficialStatus.NONE.value, "levels": [l.value for l in _OFFICIAL_LEVELS]},
            "region": {"reference": Region.AFRICA.value, "levels": [r.value for r in _REGION_LEVELS]},
        },
        row_ids=tuple(row_ids),
    )
    return design, np.asarray(response, dtype=np.float64)


@dataclass(frozen=True)
class LogisticFit:
    coefficients: np.ndarray
    standard_errors: np.ndarray
    iterations: int
    converged: bool
    ridge_lambda: float
    loglik_trace: tuple[float, ...]
    columns: tuple[str, ...]
    large_coefficients: bool


def _as_matrix(X: Union[DesignMatrix, np.ndarray]) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(X, DesignMatrix):
        return X.matrix, X.columns
    arr = np.asarray(X, dtype=np.float64)
    return arr, tuple(f"x{j}" for j in range(arr.shape[1]))


def _penalty_mask(p: int) -> np.ndarray:
    mask = np.ones(p)
    mask[0] = 0.0  # intercept unpenalized
    return mask


def penalized_loglik(X: np.ndarray, y: np.ndarray, beta: np.ndarray, ridge: float = RIDGE_LAMBDA) -> float:
    """Bernoulli log-likelihood minus the ridge penalty (intercept free)."""
    eta = X @ beta
    ll = float(np.sum(y * eta - np.logaddexp(0.0, eta)))
    mask = _penalty_mask(len(beta))
    return ll - 0.5 * ridge * float(np.sum(mask * beta * beta))


def loglik_gradient(X: np.ndarray, y: np.ndarray, beta: np.ndarray, ridge: float = RIDGE_LAMBDA) -> np.ndarray:
    """Analytic gradient of the penalized log-likelihood."""
    p = _sigmoid(X @ beta)
    return X.T @ (y - p) - ridge * _penalty_mask(len(beta)) * beta


def _sigmoid(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    ex = np.exp(eta[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def fit_logistic(
    X: Union[DesignMatrix, np.ndarray],
    y: Sequence[float],
    ridge: float = RIDGE_LAMBDA,
) -> LogisticFit:
    """Ridge-penalized logistic regression by IRLS with step-halving.

    Standard errors come from the inverse observed information of the
    penalized objective at the optimum. A fit that hits the iteration cap
    is returned flagged unconverged rather than raised.
    """
    matrix, columns = _as_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    n, p = matrix.shape
    if y.shape != (n,):
        raise InputError(f"response length {y.shape} does not match {n} rows")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise InputError("responses must be 0 or 1")
    if n <= p:
        raise InputError(f"need more observations ({n}) than parameters ({p})")

    mask = _penalty_mask(p)
    beta = np.zeros(p)
    trace = [penalized_loglik(matrix, y, beta, ridge)]
    converged = False
    iterations = 0
    for _ in range(IRLS_MAX_ITER):
        grad = loglik_gradient(matrix, y, beta, ridge)
        if float(np.max(np.abs(grad))) < GRAD_TOL:
            converged = True
            break
        iterations += 1
        prob = _sigmoid(matrix @ beta)
        w = prob * (1.0 - prob)
        hess = matrix.T @ (matrix * w[:, None]) + ridge * np.diag(mask)
        try:
            delta = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError as exc:
            raise SingularInformation(f"information matrix is singular: {exc}") from exc

        # step-halving keeps the penalized objective non-decreasing
        current = trace[-1]
        step = 1.0
        for _halving in range(40):
            candidate = beta + step * delta
            value = penalized_loglik(matrix, y, candidate, ridge)
            if value >= current:
                break
            step *= 0.5
        else:
            candidate = beta
            value = current
        beta = candidate
        trace.append(value)

    prob = _sigmoid(matrix @ beta)
    w = prob * (1.0 - prob)
    info = matrix.T @ (matrix * w[:, None]) + ridge * np.diag(mask)
    try:
        covariance = np.linalg.inv(info)
    except np.linalg.LinAlgError as exc:
        raise SingularInformation(f"observed information not invertible: {exc}") from exc
    standard_errors = np.sqrt(np.maximum(np.diag(covariance), 0.0))

    beta.setflags(write=False)
    standard_errors.setflags(write=False)
    return LogisticFit(
        coefficients=beta,
        standard_errors=standard_errors,
        iterations=iterations,
        converged=converged,
        ridge_lambda=ridge,
        loglik_trace=tuple(trace),
        columns=columns,
        large_coefficients=bool(np.any(np.abs(beta) > LARGE_COEF)),
    )


def predict_probability(fit: LogisticFit, row: Sequence[float]) -> float:
    row = np.asarray(row, dtype=np.float64)
    if row.shape != fit.coefficients.shape:
        raise InputError(f"row has {row.shape} values, model has {fit.coefficients.shape}")
    eta = float(row @ fit.coefficients)
    if eta >= 0:
        return 1.0 / (1.0 + math.exp(-eta))
    ex = math.exp(eta)
    return ex / (1.0 + ex)


def _doubled_average_ranks(values: Sequence[float]) -> list[int]:
    # average ranks can be half-integers; doubling keeps them exact ints
    order = sorted(range(len(values)), key=lambda i: values[i])
    doubled = [0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for idx in order[i : j + 1]:
            doubled[idx] = i + j + 2  # 2 * mean of positions i+1 .. j+1
        i = j + 1
    return doubled


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Rank correlation with mean ranks for ties.

    Computed in exact integer arithmetic so that perfectly monotone
    (antitone) inputs return exactly 1.0 (-1.0).
    """
    if len(x) != len(y):
        raise LengthMismatch(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise InputError(f"need at least 2 observations, got {n}")
    rx = _doubled_average_ranks(x)
    ry = _doubled_average_ranks(y)
    sx = sum(rx)
    sy = sum(ry)
    sxx = sum(r * r for r in rx)
    syy = sum(r * r for r in ry)
    sxy = sum(a * b for a, b in zip(rx, ry))
    dx = n * sxx - sx * sx
    dy = n * syy - sy * sy
    if dx == 0 or dy == 0:
        raise DegenerateInput("zero rank variance")
    num = n * sxy - sx * sy
    product = dx * dy
    root = math.isqrt(product)
    if root * root == product:
        return num / root
    return num / math.sqrt(dx) / math.sqrt(dy)


@dataclass(frozen=True)
class TokenShareTable:
    """Token counts and their shares for one training corpus."""

    dataset: str
    counts: Mapping[str, int]
    shares: Mapping[str, float]


def token_share(dataset: str, counts: Mapping[str, int]) -> TokenShareTable:
    """Shares = count / total over the listed languages."""
    for code, count in counts.items():
        if not isinstance(count, int) or isinstance(count, bool) or count < 0:
            raise InputError(f"token count for {code!r} must be a non-negative integer, got {count!r}")
    total = sum(counts.values())
    if total == 0:
        raise AllZero(f"all token counts are zero for {dataset!r}")
    shares = {code: count / total for code, count in sorted(counts.items())}
    return TokenShareTable(dataset=dataset, counts=dict(sorted(counts.items())), shares=shares)
