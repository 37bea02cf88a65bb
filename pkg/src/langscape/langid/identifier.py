"""Character n-gram language identification with trainable profiles.

Texts are case-folded and whitespace-normalized, then each word is padded
with a boundary marker and sliced into 1..4-grams. A language's profile
holds add-one-smoothed log probabilities per n-gram order (observed
vocabulary plus a single unseen slot, so each order's distribution sums
to one). A text is scored per language by the mean log probability per
order, averaged over orders with equal weight; confidence is the softmax
over candidate scores.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from ..model import CountSource, CountTable, InputError, UND_CODE, is_valid_code
from ..wet import WetRecord, extract_text
from . import kernels

__all__ = [
    "ORDERS",
    "BOUNDARY",
    "MIN_TRAINING_CHARS",
    "InsufficientText",
    "DuplicateLanguageLabel",
    "EmptyText",
    "UnknownLabel",
    "EmptyHoldout",
    "LangProfile",
    "Classification",
    "NgramModel",
    "AccuracyReport",
    "clean_text",
    "iter_ngrams",
    "train_profiles",
    "classify",
    "score_text",
    "validate",
    "count_by_language",
    "model_to_json",
    "model_from_json",
    "save_model",
    "load_model",
]

ORDERS = (1, 2, 3, 4)
BOUNDARY = " "
MIN_TRAINING_CHARS = 20

_ORDER_INDEX = {n: i for i, n in enumerate(ORDERS)}


class InsufficientText(InputError):
    pass


class DuplicateLanguageLabel(InputError):
    pass


class EmptyText(InputError):
    pass


class UnknownLabel(InputError):
    pass


class EmptyHoldout(InputError):
    pass


def clean_text(text: str) -> str:
    """Case-fold and collapse all whitespace runs to single spaces."""
    return " ".join(text.casefold().split())


def iter_ngrams(cleaned: str, orders: Sequence[int] = ORDERS) -> Iterator[str]:
    """Yield boundary-padded character n-grams of a cleaned text.

    Gram order equals gram length, which the profile encoding relies on.
    """
    for word in cleaned.split(" "):
        padded = BOUNDARY + word + BOUNDARY
        size = len(padded)
        for n in orders:
            for i in range(size - n + 1):
                yield padded[i : i + n]


@dataclass(frozen=True)
class LangProfile:
    """Smoothed n-gram log probabilities for one language."""

    language: str
    ngram_logprobs: Mapping[str, float]
    unseen_logprobs: tuple[float, ...]
    vocab_size: int
    total_ngrams: int


@dataclass(frozen=True)
class Classification:
    language: str
    confidence: float
    runner_up_margin: float


def _profile_from_counts(language: str, counts: Mapping[str, int]) -> LangProfile:
    logprobs: dict[str, float] = {}
    unseen: list[float] = []
    for n in ORDERS:
        grams = {g: c for g, c in counts.items() if len(g) == n}
        total = sum(grams.values())
        denom = total + len(grams) + 1
        for g, c in grams.items():
            logprobs[g] = math.log((c + 1) / denom)
        unseen.append(math.log(1.0 / denom))
    return LangProfile(
        language=language,
        ngram_logprobs=logprobs,
        unseen_logprobs=tuple(unseen),
        vocab_size=len(counts),
        total_ngrams=sum(counts.values()),
    )


class NgramModel:
    """Trained, immutable profile set with dense scoring arrays.

    Languages are kept in ascending code order; that order is the
    deterministic tie-break for classification.
    """

    def __init__(self, counts_by_language: Mapping[str, Mapping[str, int]]):
        if not counts_by_language:
            raise InsufficientText("no training languages")
        self.languages: tuple[str, ...] = tuple(sorted(counts_by_language))
        self.counts_by_language: dict[str, dict[str, int]] = {
            lang: dict(counts_by_language[lang]) for lang in self.languages
        }
        self.profiles: tuple[LangProfile, ...] = tuple(
            _profile_from_counts(lang, self.counts_by_language[lang]) for lang in self.languages
        )

        vocab = sorted(set().union(*(p.ngram_logprobs.keys() for p in self.profiles)))
        self._vocab: dict[str, int] = {g: i for i, g in enumerate(vocab)}
        n_lang = len(self.languages)
        self._logprob = np.empty((n_lang, len(vocab)), dtype=np.float64)
        self._unseen = np.empty((n_lang, len(ORDERS)), dtype=np.float64)
        for row, profile in enumerate(self.profiles):
            self._unseen[row] = profile.unseen_logprobs
            for col, gram in enumerate(vocab):
                hit = profile.ngram_logprobs.get(gram)
                if hit is None:
                    hit = profile.unseen_logprobs[_ORDER_INDEX[len(gram)]]
                self._logprob[row, col] = hit

    def __len__(self) -> int:
        return len(self.languages)

    def encode(self, cleaned: str) -> tuple[np.ndarray, np.ndarray]:
        """Map a cleaned text to vocabulary ids and order indexes."""
        ids: list[int] = []
        orders: list[int] = []
        lookup = self._vocab.get
        for gram in iter_ngrams(cleaned):
            ids.append(lookup(gram, -1))
            orders.append(_ORDER_INDEX[len(gram)])
        return (
            np.asarray(ids, dtype=np.int32),
            np.asarray(orders, dtype=np.int8),
        )


def train_profiles(corpus: Iterable[tuple[str, str]]) -> NgramModel:
    """Train one profile per labeled text.

    Requires exactly one text per language and at least 20 characters per
    text after cleaning. The 'und' code is reserved for undetermined
    documents and cannot be trained.
    """
    counts: dict[str, dict[str, int]] = {}
    for language, text in corpus:
        if not is_valid_code(language):
            raise InputError(f"invalid language label: {language!r}")
        if language == UND_CODE:
            raise InputError(f"{UND_CODE!r} is reserved for undetermined documents")
        if language in counts:
            raise DuplicateLanguageLabel(f"language {language!r} labeled more than once")
        cleaned = clean_text(text)
        if len(cleaned) < MIN_TRAINING_CHARS:
            raise InsufficientText(
                f"training text for {language!r} has {len(cleaned)} characters after cleaning, "
                f"need at least {MIN_TRAINING_CHARS}"
            )
        counts[language] = dict(Counter(iter_ngrams(cleaned)))
    if not counts:
        raise InsufficientText("empty corpus")
    return NgramModel(counts)


def _scores_for_cleaned(model: NgramModel, cleaned: str) -> list[float]:
    ids, orders = model.encode(cleaned)
    sums, counts = kernels.accumulate(ids, orders, model._logprob, model._unseen)
    scores: list[float] = []
    for row in range(len(model.languages)):
        total = 0.0
        active = 0
        for o in range(len(ORDERS)):
            if counts[o] > 0:
                total += sums[row, o] / counts[o]
                active += 1
        scores.append(float(total / active))
    return scores


def score_text(model: NgramModel, text: str) -> dict[str, float]:
    """Mean log-likelihood per candidate language (diagnostic surface)."""
    cleaned = clean_text(text)
    if not cleaned:
        raise EmptyText("no content after cleaning")
    scores = _scores_for_cleaned(model, cleaned)
    return dict(zip(model.languages, scores))


def _classify_scores(model: NgramModel, scores: Sequence[float]) -> Classification:
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    peak = max(scores)
    exps = [math.exp(s - peak) for s in scores]
    confidence = exps[best] / sum(exps)
    if len(scores) > 1:
        runner_up = max(s for i, s in enumerate(scores) if i != best)
        margin = scores[best] - runner_up
    else:
        margin = math.inf
    return Classification(language=model.languages[best], confidence=confidence, runner_up_margin=margin)


def classify(model: NgramModel, text: str) -> Classification:
    """Pick the best-scoring language; ties go to the lowest code."""
    cleaned = clean_text(text)
    if not cleaned:
        raise EmptyText("no content after cleaning")
    return _classify_scores(model, _scores_for_cleaned(model, cleaned))


@dataclass(frozen=True)
class LanguageMetrics:
    precision: float
    recall: float
    support: int


@dataclass(frozen=True)
class AccuracyReport:
    accuracy: float
    total: int
    per_language: Mapping[str, LanguageMetrics]
    confusion: Mapping[tuple[str, str], int]


def validate(model: NgramModel, holdout: Sequence[tuple[str, str]]) -> AccuracyReport:
    """Evaluate on labeled holdout texts whose labels the model knows."""
    if not holdout:
        raise EmptyHoldout("holdout is empty")
    known = set(model.languages)
    unknown = sorted({lang for lang, _ in holdout} - known)
    if unknown:
        raise UnknownLabel(f"holdout labels not in model: {', '.join(unknown)}")

    confusion: Counter[tuple[str, str]] = Counter()
    for lang, text in holdout:
        predicted = classify(model, text).language
        confusion[(lang, predicted)] += 1

    total = len(holdout)
    correct = sum(c for (t, p), c in confusion.items() if t == p)
    labels = sorted({lang for lang, _ in holdout})
    per_language: dict[str, LanguageMetrics] = {}
    for lang in labels:
        support = sum(c for (t, _), c in confusion.items() if t == lang)
        predicted_as = sum(c for (_, p), c in confusion.items() if p == lang)
        hits = confusion.get((lang, lang), 0)
        per_language[lang] = LanguageMetrics(
            precision=hits / predicted_as if predicted_as else 0.0,
            recall=hits / support if support else 0.0,
            support=support,
        )
    return AccuracyReport(
        accuracy=correct / total,
        total=total,
        per_language=per_language,
        confusion=dict(confusion),
    )


def count_by_language(
    model: NgramModel,
    records: Iterable[WetRecord],
    min_confidence: float = 0.5,
) -> CountTable:
    """Count conversion records per identified language.

    Records below the confidence threshold, or with no text after
    cleaning, land in the reserved 'und' bucket. A threshold above 1 is
    permitted and sends every record there. Non-conversion records
    (e.g. warcinfo) are skipped.
    """
    if min_confidence < 0:
        raise InputError(f"min_confidence must be non-negative, got {min_confidence}")
    counts: Counter[str] = Counter()
    undetermined = 0
    for record in records:
        if not record.is_conversion:
            continue
        cleaned = clean_text(extract_text(record))
        if not cleaned:
            undetermined += 1
            continue
        result = _classify_scores(model, _scores_for_cleaned(model, cleaned))
        if result.confidence < min_confidence:
            undetermined += 1
        else:
            counts[result.language] += 1
    table = dict(sorted(counts.items()))
    if undetermined:
        table[UND_CODE] = undetermined
    return CountTable(
        source=CountSource.WEB,
        counts=table,
        generated_at=datetime.now(timezone.utc).isoformat(),
    )


_FORMAT = "langscape-ngram-model"


def model_to_json(model: NgramModel) -> dict:
    """Persistable form: raw counts per (language, order, gram)."""
    profiles: dict[str, dict[str, dict[str, int]]] = {}
    for lang in model.languages:
        by_order: dict[str, dict[str, int]] = {str(n): {} for n in ORDERS}
        for gram, count in model.counts_by_language[lang].items():
            by_order[str(len(gram))][gram] = count
        profiles[lang] = by_order
    return {
        "format": _FORMAT,
        "version": 1,
        "orders": list(ORDERS),
        "smoothing": "add_one",
        "boundary": BOUNDARY,
        "profiles": profiles,
    }


def model_from_json(doc: Mapping) -> NgramModel:
    """Rebuild a model; identical counts reproduce identical classifications."""
    if not isinstance(doc, Mapping) or doc.get("format") != _FORMAT:
        raise InputError("not a langscape n-gram model document")
    if tuple(doc.get("orders", ())) != ORDERS:
        raise InputError(f"unsupported n-gram orders: {doc.get('orders')!r}")
    profiles = doc.get("profiles")
    if not isinstance(profiles, Mapping):
        raise InputError("model document has no profiles object")
    counts: dict[str, dict[str, int]] = {}
    for lang, by_order in profiles.items():
        merged: dict[str, int] = {}
        for order_key, grams in by_order.items():
            n = int(order_key)
            for gram, count in grams.items():
                if len(gram) != n:
                    raise InputError(f"gram {gram!r} filed under order {n}")
                if not isinstance(count, int) or isinstance(count, bool) or count < 1:
                    raise InputError(f"bad count for gram {gram!r}: {count!r}")
                merged[gram] = count
        counts[lang] = merged
    return NgramModel(counts)


def save_model(model: NgramModel, path: Union[str, Path]) -> None:
    payload = json.dumps(model_to_json(model), ensure_ascii=True, sort_keys=True, indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def load_model(path: Union[str, Path]) -> NgramModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_json(doc)
