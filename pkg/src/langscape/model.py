"""Shared domain types for the language vitality/digitality pipeline.

Every other module depends on this one and on nothing else inside the
package. All types are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

__all__ = [
    "LangscapeError",
    "InputError",
    "RecordValidationError",
    "Region",
    "OfficialStatus",
    "CountSource",
    "QuadrantLabel",
    "VitalityFeatures",
    "DigitalityFeatures",
    "GeoColonialCovariates",
    "LanguageRecord",
    "ScoreVector",
    "QuadrantCategory",
    "CountTable",
    "Issue",
    "UND_CODE",
    "CSV_COLUMNS",
    "EGIDS_SUBLEVELS",
    "is_valid_code",
    "parse_egids",
    "record_issues",
    "validate_record",
    "record_to_csv_row",
    "record_from_csv_row",
]


class LangscapeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LangscapeError):
    """Bad input data or schema; maps to CLI exit code 2."""


_CODE_RE = re.compile(r"^[a-z]{3}$")

#: Reserved bucket for documents no language could be assigned to.
UND_CODE = "und"


def is_valid_code(code: str) -> bool:
    """True iff ``code`` is a three-letter lowercase ISO 639-3 style tag."""
    return isinstance(code, str) and bool(_CODE_RE.match(code))


class Region(enum.Enum):
    AFRICA = "Africa"
    ASIA = "Asia"
    EUROPE = "Europe"
    AMERICAS = "Americas"
    PACIFIC = "Pacific"


class OfficialStatus(enum.Enum):
    NATIONAL = "national"
    REGIONAL = "regional"
    NONE = "none"


class CountSource(enum.Enum):
    WEB = "web"
    WIKI = "wiki"
    ML_ASSETS = "ml_assets"
    ARCHIVES = "archives"


class QuadrantLabel(enum.Enum):
    STRONGHOLD = "Stronghold"
    DIGITAL_ECHO = "DigitalEcho"
    FADING_VOICE = "FadingVoice"
    INVISIBLE_GIANT = "InvisibleGiant"


#: EGIDS sublevels collapse onto the numeric scale preserving order.
EGIDS_SUBLEVELS = {"6a": 6.0, "6b": 6.5, "8a": 8.0, "8b": 8.5}


def parse_egids(value: str) -> float:
    """Parse an EGIDS level, accepting numeric strings and 6a/6b/8a/8b."""
    token = value.strip().lower()
    if token in EGIDS_SUBLEVELS:
        return EGIDS_SUBLEVELS[token]
    try:
        return float(token)
    except ValueError:
        raise InputError(f"unparseable EGIDS level: {value!r}") from None


@dataclass(frozen=True)
class VitalityFeatures:
    """Real-world demographic strength of a language."""

    speakers_l1: int
    egids: float


@dataclass(frozen=True)
class DigitalityFeatures:
    """Online footprint counts, one per digitality source."""

    web_pages: int = 0
    wiki_articles: int = 0
    ml_assets: int = 0
    archive_entries: int = 0


@dataclass(frozen=True)
class GeoColonialCovariates:
    region: Region
    colonized: bool
    colonizer: Optional[str]
    colonial_duration_years: int
    official_status: OfficialStatus
    unicode_support: bool
    latitude: float
    longitude: float


@dataclass(frozen=True)
class LanguageRecord:
    """One language: identity, vitality, digitality and covariates."""

    id: str
    name: str
    vitality: VitalityFeatures
    digitality: DigitalityFeatures
    covariates: GeoColonialCovariates

    def with_digitality(self, digitality: DigitalityFeatures) -> "LanguageRecord":
        return replace(self, digitality=digitality)


@dataclass(frozen=True)
class ScoreVector:
    """Normalized composite scores and their gap for one language."""

    id: str
    vitality_norm: float
    digitality_norm: float
    representation: float


@dataclass(frozen=True)
class QuadrantCategory:
    """A quadrant label together with the thresholds that produced it."""

    label: QuadrantLabel
    vitality_median: float
    digitality_median: float


@dataclass(frozen=True)
class Issue:
    """One violated invariant, addressable by a stable code."""

    code: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}({self.field}): {self.message}"


class RecordValidationError(InputError):
    """Raised with the complete list of violated invariants."""

    def __init__(self, record_id: str, issues: Iterable[Issue]):
        self.record_id = record_id
        self.issues = tuple(issues)
        details = "; ".join(str(i) for i in self.issues)
        super().__init__(f"invalid record {record_id!r}: {details}")


def _is_count(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def record_issues(record: LanguageRecord) -> list[Issue]:
    """Collect every violated invariant of ``record`` (never fail-fast)."""
    issues: list[Issue] = []
    if not is_valid_code(record.id):
        issues.append(Issue("InvalidCode", "id", f"not a 3-letter lowercase tag: {record.id!r}"))

    vit = record.vitality
    if not _is_count(vit.speakers_l1) or vit.speakers_l1 < 0:
        issues.append(Issue("NegativeCount", "speakers_l1", f"must be a non-negative integer, got {vit.speakers_l1!r}"))
    if not (0.0 <= vit.egids <= 10.0):
        issues.append(Issue("EgidsOutOfRange", "egids", f"must be within [0, 10], got {vit.egids!r}"))
    elif vit.egids == 10.0 and _is_count(vit.speakers_l1) and vit.speakers_l1 > 0:
        issues.append(
            Issue("VitalityInconsistency", "speakers_l1", "extinct language (EGIDS 10) cannot have first-language speakers")
        )

    dig = record.digitality
    for name in ("web_pages", "wiki_articles", "ml_assets", "archive_entries"):
        value = getattr(dig, name)
        if not _is_count(value) or value < 0:
            issues.append(Issue("NegativeCount", name, f"must be a non-negative integer, got {value!r}"))

    cov = record.covariates
    if not cov.colonized:
        if cov.colonizer is not None:
            issues.append(Issue("CovariateInconsistency", "colonizer", "colonizer given for a non-colonized language"))
        if cov.colonial_duration_years != 0:
            issues.append(
                Issue("CovariateInconsistency", "colonial_duration_years", "non-zero duration for a non-colonized language")
            )
    if not _is_count(cov.colonial_duration_years) or cov.colonial_duration_years < 0:
        issues.append(Issue("NegativeCount", "colonial_duration_years", f"must be a non-negative integer, got {cov.colonial_duration_years!r}"))
    if not (-90.0 <= cov.latitude <= 90.0):
        issues.append(Issue("CoordinateOutOfBounds", "latitude", f"must be within [-90, 90], got {cov.latitude!r}"))
    if not (-180.0 <= cov.longitude <= 180.0):
        issues.append(Issue("CoordinateOutOfBounds", "longitude", f"must be within [-180, 180], got {cov.longitude!r}"))
    return issues


def validate_record(record: LanguageRecord) -> LanguageRecord:
    """Return ``record`` unchanged if valid, else raise with all violations.

    Idempotent: a record that passed once passes again, identically.
    """
    issues = record_issues(record)
    if issues:
        raise RecordValidationError(record.id, issues)
    return record


@dataclass(frozen=True)
class CountTable:
    """Mergeable per-language document/token counts from one source."""

    source: CountSource
    counts: Mapping[str, int]
    generated_at: Optional[str] = field(default=None, compare=False)
    digest: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        for code, count in self.counts.items():
            if code == UND_CODE:
                if self.source is not CountSource.WEB:
                    raise InputError(f"'{UND_CODE}' bucket only permitted for web counts, not {self.source.value}")
            elif not is_valid_code(code):
                raise InputError(f"InvalidCode: {code!r} in {self.source.value} counts")
            if not _is_count(count) or count < 0:
                raise InputError(f"NegativeCount: {self.source.value} count for {code!r} is {count!r}")

    def total(self) -> int:
        return sum(self.counts.values())


# Canonical language CSV schema (RFC 4180, UTF-8, header row).
CSV_COLUMNS = (
    "iso639_3",
    "name",
    "speakers_l1",
    "egids",
    "region",
    "colonized",
    "colonizer",
    "colonial_duration_years",
    "official_status",
    "unicode_support",
    "latitude",
    "longitude",
)

_BOOL_VALUES = {"true": True, "false": False}


def _format_float(x: float) -> str:
    # repr round-trips exactly, which the serialize/deserialize invariant needs
    return repr(float(x))


def record_to_csv_row(record: LanguageRecord) -> list[str]:
    cov = record.covariates
    return [
        record.id,
        record.name,
        str(record.vitality.speakers_l1),
        _format_float(record.vitality.egids),
        cov.region.value,
        "true" if cov.colonized else "false",
        cov.colonizer or "",
        str(cov.colonial_duration_years),
        cov.official_status.value,
        "true" if cov.unicode_support else "false",
        _format_float(cov.latitude),
        _format_float(cov.longitude),
    ]


def record_from_csv_row(row: Mapping[str, str]) -> LanguageRecord:
    """Build a record from one CSV row (digitality starts at zero).

    Raises InputError on unparseable cells; invariant checking is the
    caller's job via validate_record.
    """

    def _bool(name: str) -> bool:
        raw = row[name].strip()
        if raw not in _BOOL_VALUES:
            raise InputError(f"column {name!r} must be 'true' or 'false', got {raw!r}")
        return _BOOL_VALUES[raw]

    def _int(name: str) -> int:
        try:
            return int(row[name].strip())
        except ValueError:
            raise InputError(f"column {name!r} must be an integer, got {row[name]!r}") from None

    def _float(name: str) -> float:
        try:
            return float(row[name].strip())
        except ValueError:
            raise InputError(f"column {name!r} must be a number, got {row[name]!r}") from None

    def _enum(name: str, cls):
        raw = row[name].strip()
        try:
            return cls(raw)
        except ValueError:
            allowed = ", ".join(m.value for m in cls)
            raise InputError(f"column {name!r} must be one of {allowed}, got {raw!r}") from None

    colonizer = row["colonizer"].strip()
    return LanguageRecord(
        id=row["iso639_3"].strip(),
        name=row["name"],
        vitality=VitalityFeatures(speakers_l1=_int("speakers_l1"), egids=parse_egids(row["egids"])),
        digitality=DigitalityFeatures(),
        covariates=GeoColonialCovariates(
            region=_enum("region", Region),
            colonized=_bool("colonized"),
            colonizer=colonizer or None,
            colonial_duration_years=_int("colonial_duration_years"),
            official_status=_enum("official_status", OfficialStatus),
            unicode_support=_bool("unicode_support"),
            latitude=_float("latitude"),
            longitude=_float("longitude"),
        ),
    )
