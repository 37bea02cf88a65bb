"""Feature normalization, mixture-based composites, and the representation score.

Count features are mapped x -> log10(1+x) and min-max scaled over the
dataset; the EGIDS level is inverted onto [0, 1]. Each dimension then
gets a 3-component diagonal-covariance Gaussian mixture fitted by EM
with a deterministic quantile initialization (no RNG anywhere), and a
language's composite is the posterior-weighted component rank. The
representation score is the difference digitality minus vitality; a
negative value flags a language whose real-world vitality exceeds its
digital presence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ingest import LanguageSet
from .model import InputError, LangscapeError, LanguageRecord, ScoreVector

__all__ = [
    "EmptySet",
    "TooFewSamples",
    "NonFiniteInput",
    "DimensionMismatch",
    "OutOfRangeInput",
    "COMPOSITE_MODES",
    "VITALITY_FEATURES",
    "DIGITALITY_FEATURES",
    "FeatureScale",
    "NormalizationSpec",
    "GmmModel",
    "CompositeScore",
    "fit_normalization",
    "fit_gmm",
    "composite_score",
    "representation_score",
    "ScoringResult",
    "score_dataset",
    "score_all",
    "scores_to_csv",
]


class EmptySet(InputError):
    pass


class TooFewSamples(InputError):
    pass


class NonFiniteInput(InputError):
    pass


class DimensionMismatch(LangscapeError):
    pass


class OutOfRangeInput(InputError):
    pass


COMPOSITE_MODES = ("gmm_rank", "feature_mean")

VITALITY_FEATURES = ("speakers_l1", "egids")
DIGITALITY_FEATURES = ("web_pages", "wiki_articles", "ml_assets", "archive_entries")

EGIDS_MAX = 10.0


def _raw_features(record: LanguageRecord, dimension: str) -> tuple[float, ...]:
    if dimension == "vitality":
        return (float(record.vitality.speakers_l1), float(record.vitality.egids))
    if dimension == "digitality":
        d = record.digitality
        return (
            float(d.web_pages),
            float(d.wiki_articles),
            float(d.ml_assets),
            float(d.archive_entries),
        )
    raise InputError(f"unknown dimension {dimension!r}")


@dataclass(frozen=True)
class FeatureScale:
    """Fitted transform for one raw feature."""

    name: str
    transform: str  # "log_count" | "egids_invert"
    lo: float = 0.0
    hi: float = 0.0

    def apply(self, raw: float) -> float:
        if self.transform == "egids_invert":
            return (EGIDS_MAX - raw) / EGIDS_MAX
        value = math.log10(1.0 + raw)
        if self.lo == self.hi:
            # degenerate feature: every language saw the same value
            return 0.5
        return (value - self.lo) / (self.hi - self.lo)


@dataclass(frozen=True)
class NormalizationSpec:
    dimension: str
    scales: tuple[FeatureScale, ...]

    def apply_record(self, record: LanguageRecord) -> tuple[float, ...]:
        raw = _raw_features(record, self.dimension)
        return tuple(scale.apply(value) for scale, value in zip(self.scales, raw))

    def apply_set(self, languages: LanguageSet) -> np.ndarray:
        return np.array([self.apply_record(r) for r in languages], dtype=np.float64)


def fit_normalization(languages: LanguageSet, dimension: str) -> NormalizationSpec:
    """Fit per-feature extremes over the dataset for one dimension."""
    if len(languages) == 0:
        raise EmptySet(f"cannot fit {dimension} normalization on an empty set")
    names = VITALITY_FEATURES if dimension == "vitality" else DIGITALITY_FEATURES
    raw = np.array([_raw_features(r, dimension) for r in languages], dtype=np.float64)
    scales = []
    for col, name in enumerate(names):
        if name == "egids":
            scales.append(FeatureScale(name=name, transform="egids_invert"))
        else:
            logs = np.log10(1.0 + raw[:, col])
            scales.append(
                FeatureScale(name=name, transform="log_count", lo=float(logs.min()), hi=float(logs.max()))
            )
    return NormalizationSpec(dimension=dimension, scales=tuple(scales))


@dataclass(frozen=True)
class GmmModel:
    """Diagonal-covariance mixture with a deterministic component ranking.

    component_rank[k] is component k's position (0..K-1) when components
    are ordered by ascending mean-of-means, which cancels label switching.
    """

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    component_rank: tuple[int, ...]
    log_likelihood_trace: tuple[float, ...]
    converged: bool
    iterations: int

    @property
    def k(self) -> int:
        return len(self.component_rank)

    @property
    def dim(self) -> int:
        return self.means.shape[1]


VARIANCE_FLOOR = 1e-6
EM_TOL_PER_SAMPLE = 1e-8
EM_MAX_ITER = 200


def _log_gaussian_matrix(data: np.ndarray, means: np.ndarray, variances: np.ndarray) -> np.ndarray:
    """(n, K) log densities of diagonal Gaussians."""
    n, d = data.shape
    k = means.shape[0]
    out = np.empty((n, k), dtype=np.float64)
    for j in range(k):
        diff = data - means[j]
        out[:, j] = -0.5 * (np.sum(np.log(2.0 * np.pi * variances[j])) + np.sum(diff * diff / variances[j], axis=1))
    return out


def _log_joint(data, weights, means, variances) -> np.ndarray:
    with np.errstate(divide="ignore"):  # a dead component (weight 0) is -inf
        log_weights = np.log(weights)
    return log_weights[None, :] + _log_gaussian_matrix(data, means, variances)


def _logsumexp_rows(log_joint: np.ndarray) -> np.ndarray:
    peak = np.max(log_joint, axis=1, keepdims=True)
    return (peak + np.log(np.sum(np.exp(log_joint - peak), axis=1, keepdims=True)))[:, 0]


def _init_quantile_means(data: np.ndarray, k: int) -> np.ndarray:
    """Rows at evenly spaced quantiles of the first feature (0.1..0.9)."""
    n = data.shape[0]
    order = np.argsort(data[:, 0], kind="stable")
    if k == 1:
        quantiles = [0.5]
    else:
        quantiles = [0.1 + 0.8 * j / (k - 1) for j in range(k)]
    picks = [order[int(round(q * (n - 1)))] for q in quantiles]
    return data[picks].astype(np.float64).copy()


def fit_gmm(data: np.ndarray, k: int = 3) -> GmmModel:
    """Fit a K-component diagonal-covariance mixture by EM, seed-free.

    Initialization is deterministic (quantile rows along the first
    feature, uniform weights, pooled per-feature variance), convergence
    is per-sample log-likelihood improvement below 1e-8 or 200
    iterations, and every M-step floors variances at 1e-6.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, None]
    if not np.all(np.isfinite(data)):
        raise NonFiniteInput("data contains NaN or infinity")
    n, d = data.shape
    if n < k:
        raise TooFewSamples(f"need at least {k} samples for {k} components, got {n}")
    if k < 1:
        raise InputError(f"component count must be positive, got {k}")

    means = _init_quantile_means(data, k)
    pooled = np.maximum(data.var(axis=0), VARIANCE_FLOOR)
    variances = np.tile(pooled, (k, 1))
    weights = np.full(k, 1.0 / k)

    trace: list[float] = []
    converged = False
    iterations = 0
    for _ in range(EM_MAX_ITER):
        log_joint = _log_joint(data, weights, means, variances)
        per_sample = _logsumexp_rows(log_joint)
        ll = float(np.sum(per_sample))
        if trace and ll < trace[-1]:
            # rounding or the variance floor nudged the objective down a
            # hair; keep the previous parameters and stop
            means, variances, weights = prev_params
            converged = True
            break
        improved = not trace or (ll - trace[-1]) / n >= EM_TOL_PER_SAMPLE
        trace.append(ll)
        if not improved:
            converged = True
            break

        iterations += 1
        prev_params = (means.copy(), variances.copy(), weights.copy())
        resp = np.exp(log_joint - per_sample[:, None])
        bulk = resp.sum(axis=0)
        safe_bulk = np.maximum(bulk, 1e-300)
        weights = bulk / n
        means = (resp.T @ data) / safe_bulk[:, None]
        new_vars = np.empty_like(variances)
        for j in range(k):
            diff = data - means[j]
            new_vars[j] = (resp[:, j] @ (diff * diff)) / safe_bulk[j]
        variances = np.maximum(new_vars, VARIANCE_FLOOR)
    else:
        log_joint = _log_joint(data, weights, means, variances)
        ll = float(np.sum(_logsumexp_rows(log_joint)))
        if ll >= trace[-1]:
            trace.append(ll)
        else:
            means, variances, weights = prev_params

    mean_of_means = means.mean(axis=1)
    order = np.argsort(mean_of_means, kind="stable")
    rank = np.empty(k, dtype=int)
    rank[order] = np.arange(k)

    for arr in (weights, means, variances):
        arr.setflags(write=False)
    return GmmModel(
        weights=weights,
        means=means,
        variances=variances,
        component_rank=tuple(int(r) for r in rank),
        log_likelihood_trace=tuple(trace),
        converged=converged,
        iterations=iterations,
    )


@dataclass(frozen=True)
class CompositeScore:
    """Posterior-weighted component rank, a calibrated [0, 1] scalar."""

    value: float
    posteriors: tuple[float, ...]


def gmm_posteriors(model: GmmModel, x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise DimensionMismatch(f"expected a vector of dimension {model.dim}, got shape {x.shape}")
    log_joint = _log_joint(x[None, :], model.weights, model.means, model.variances)[0]
    peak = log_joint.max()
    unnorm = np.exp(log_joint - peak)
    return unnorm / unnorm.sum()


def composite_score(model: GmmModel, x: Sequence[float]) -> CompositeScore:
    """Bayes posteriors over components, collapsed onto the rank scale."""
    posteriors = gmm_posteriors(model, x)
    k = model.k
    if k == 1:
        value = 0.5
    else:
        value = float(sum(posteriors[j] * (model.component_rank[j] / (k - 1)) for j in range(k)))
    return CompositeScore(value=value, posteriors=tuple(float(p) for p in posteriors))


def representation_score(vitality_norm: float, digitality_norm: float) -> float:
    """Digitality minus vitality; negative means underrepresented online."""
    for name, value in (("vitality_norm", vitality_norm), ("digitality_norm", digitality_norm)):
        if not (0.0 <= value <= 1.0):
            raise OutOfRangeInput(f"{name} must be within [0, 1], got {value!r}")
    return digitality_norm - vitality_norm


@dataclass(frozen=True)
class ScoringResult:
    """Everything one scoring pass produced, for all composite modes."""

    ids: tuple[str, ...]
    vitality_spec: NormalizationSpec
    digitality_spec: NormalizationSpec
    vitality_gmm: GmmModel
    digitality_gmm: GmmModel
    vitality_norm_matrix: np.ndarray
    digitality_norm_matrix: np.ndarray

    def composites(self, dimension: str, mode: str) -> list[float]:
        if mode not in COMPOSITE_MODES:
            raise InputError(f"unknown composite mode {mode!r}; expected one of {COMPOSITE_MODES}")
        matrix = self.vitality_norm_matrix if dimension == "vitality" else self.digitality_norm_matrix
        model = self.vitality_gmm if dimension == "vitality" else self.digitality_gmm
        if mode == "feature_mean":
            return [float(np.mean(row)) for row in matrix]
        return [composite_score(model, row).value for row in matrix]

    def vectors(self, mode: str = "gmm_rank") -> list[ScoreVector]:
        vit = self.composites("vitality", mode)
        dig = self.composites("digitality", mode)
        out = []
        for code, v, d in zip(self.ids, vit, dig):
            v = min(max(v, 0.0), 1.0)
            d = min(max(d, 0.0), 1.0)
            out.append(
                ScoreVector(
                    id=code,
                    vitality_norm=v,
                    digitality_norm=d,
                    representation=representation_score(v, d),
                )
            )
        return out


def score_dataset(languages: LanguageSet, k: int = 3) -> ScoringResult:
    """Normalize, fit one mixture per dimension, and prepare composites."""
    if len(languages) == 0:
        raise EmptySet("nothing to score")
    if len(languages) < k:
        raise TooFewSamples(f"need at least {k} languages, got {len(languages)}")
    vit_spec = fit_normalization(languages, "vitality")
    dig_spec = fit_normalization(languages, "digitality")
    vit_matrix = vit_spec.apply_set(languages)
    dig_matrix = dig_spec.apply_set(languages)
    return ScoringResult(
        ids=languages.ids(),
        vitality_spec=vit_spec,
        digitality_spec=dig_spec,
        vitality_gmm=fit_gmm(vit_matrix, k),
        digitality_gmm=fit_gmm(dig_matrix, k),
        vitality_norm_matrix=vit_matrix,
        digitality_norm_matrix=dig_matrix,
    )


def score_all(languages: LanguageSet, composite: str = "gmm_rank") -> list[ScoreVector]:
    """Score every language; output order follows ascending language id."""
    return score_dataset(languages).vectors(composite)


def scores_to_csv(vectors: Iterable[ScoreVector]) -> str:
    """Scores as CSV text, six decimals, sorted by id."""
    lines = ["iso639_3,vitality_norm,digitality_norm,representation"]
    for v in sorted(vectors, key=lambda s: s.id):
        lines.append(f"{v.id},{v.vitality_norm:.6f},{v.digitality_norm:.6f},{v.representation:.6f}")
    return "\n".join(lines) + "\n"
