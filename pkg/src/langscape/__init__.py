"""langscape: measure language vitality vs. digital presence.

The pipeline ingests speaker/vitality data and four digital-footprint
count sources, normalizes and scores every language, classifies the
population into four representation quadrants, runs the downstream
regression and correlation analyses, and emits figure and table reports.
"""

from .model import (
    CountSource,
    CountTable,
    DigitalityFeatures,
    GeoColonialCovariates,
    InputError,
    LangscapeError,
    LanguageRecord,
    OfficialStatus,
    QuadrantCategory,
    QuadrantLabel,
    Region,
    ScoreVector,
    VitalityFeatures,
    validate_record,
)

__version__ = "0.1.0"

__all__ = [
    "CountSource",
    "CountTable",
    "DigitalityFeatures",
    "GeoColonialCovariates",
    "InputError",
    "LangscapeError",
    "LanguageRecord",
    "OfficialStatus",
    "QuadrantCategory",
    "QuadrantLabel",
    "Region",
    "ScoreVector",
    "VitalityFeatures",
    "validate_record",
    "__version__",
]
