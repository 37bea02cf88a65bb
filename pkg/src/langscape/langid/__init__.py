from .identifier import (
    AccuracyReport,
    BOUNDARY,
    Classification,
    DuplicateLanguageLabel,
    EmptyHoldout,
    EmptyText,
    InsufficientText,
    LangProfile,
    MIN_TRAINING_CHARS,
    NgramModel,
    ORDERS,
    UnknownLabel,
    classify,
    clean_text,
    count_by_language,
    iter_ngrams,
    load_model,
    model_from_json,
    model_to_json,
    save_model,
    score_text,
    train_profiles,
    validate,
)
from .kernels import BACKEND

__all__ = [
    "AccuracyReport",
    "BACKEND",
    "BOUNDARY",
    "Classification",
    "DuplicateLanguageLabel",
    "EmptyHoldout",
    "EmptyText",
    "InsufficientText",
    "LangProfile",
    "MIN_TRAINING_CHARS",
    "NgramModel",
    "ORDERS",
    "UnknownLabel",
    "classify",
    "clean_text",
    "count_by_language",
    "iter_ngrams",
    "load_model",
    "model_from_json",
    "model_to_json",
    "save_model",
    "score_text",
    "train_profiles",
    "validate",
]
