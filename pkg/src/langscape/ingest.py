"""Loads vitality and digitality inputs and assembles the unified record set.

Loading is collect-don't-fail: every bad row is reported with its row
number while clean rows still land in the partial result. Languages
missing from a count source get a zero count; count codes missing from
the vitality set are reported as orphans, never silently dropped.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .model import (
    CSV_COLUMNS,
    CountSource,
    CountTable,
    DigitalityFeatures,
    InputError,
    LanguageRecord,
    record_from_csv_row,
    record_issues,
)

__all__ = [
    "SchemaMismatch",
    "MixedSources",
    "MissingSource",
    "RowIssue",
    "LanguageSet",
    "VitalityLoadResult",
    "OrphanCount",
    "AssembleResult",
    "file_digest",
    "load_vitality_csv",
    "load_count_json",
    "merge_counts",
    "assemble",
]


class SchemaMismatch(InputError):
    pass


class MixedSources(InputError):
    pass


class MissingSource(InputError):
    pass


@dataclass(frozen=True)
class RowIssue:
    """One problem found while loading, tied to a physical CSV row."""

    row: int  # 1-based, header row is 1
    code: str
    message: str

    def __str__(self) -> str:
        return f"row {self.row}: {self.code}: {self.message}"


@dataclass(frozen=True)
class LanguageSet:
    """Validated records keyed by id, iterated in ascending id order."""

    records: Mapping[str, LanguageRecord]
    provenance: tuple[str, ...] = ()

    @classmethod
    def build(cls, records: Iterable[LanguageRecord], provenance: Sequence[str] = ()) -> "LanguageSet":
        by_id: dict[str, LanguageRecord] = {}
        for record in records:
            if record.id in by_id:
                raise InputError(f"DuplicateId: {record.id!r}")
            issues = record_issues(record)
            if issues:
                raise InputError(f"invalid record {record.id!r}: " + "; ".join(map(str, issues)))
            by_id[record.id] = record
        ordered = {code: by_id[code] for code in sorted(by_id)}
        return cls(records=ordered, provenance=tuple(provenance))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records.values())

    def ids(self) -> tuple[str, ...]:
        return tuple(self.records.keys())

    def get(self, code: str) -> Optional[LanguageRecord]:
        return self.records.get(code)


@dataclass(frozen=True)
class VitalityLoadResult:
    languages: LanguageSet
    issues: tuple[RowIssue, ...]


def file_digest(path: Union[str, Path]) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_vitality_csv(path: Union[str, Path]) -> VitalityLoadResult:
    """Load the canonical language CSV (vitality + covariates only).

    Digitality features start at zero and are filled in by assemble().
    """
    path = Path(path)
    raw = path.read_bytes()
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()

    try:
        lines = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaMismatch(f"{path} is not UTF-8: {exc}") from exc
    reader = csv.DictReader(lines.splitlines())
    if reader.fieldnames is None:
        raise SchemaMismatch(f"{path} is empty; expected header {','.join(CSV_COLUMNS)}")
    if tuple(reader.fieldnames) != CSV_COLUMNS:
        raise SchemaMismatch(
            f"{path} header mismatch: expected {','.join(CSV_COLUMNS)}, got {','.join(reader.fieldnames)}"
        )

    issues: list[RowIssue] = []
    records: dict[str, LanguageRecord] = {}
    first_row: dict[str, int] = {}
    for row_number, row in enumerate(reader, start=2):
        if None in row or any(value is None for value in row.values()):
            issues.append(RowIssue(row_number, "SchemaMismatch", "wrong number of fields"))
            continue
        try:
            record = record_from_csv_row(row)
        except InputError as exc:
            issues.append(RowIssue(row_number, "ParseError", str(exc)))
            continue
        row_problems = record_issues(record)
        if row_problems:
            issues.extend(RowIssue(row_number, p.code, p.message) for p in row_problems)
            continue
        if record.id in records:
            issues.append(
                RowIssue(
                    row_number,
                    "DuplicateId",
                    f"duplicate iso639_3 {record.id!r} on rows {first_row[record.id]} and {row_number}",
                )
            )
            continue
        first_row[record.id] = row_number
        records[record.id] = record

    ordered = {code: records[code] for code in sorted(records)}
    return VitalityLoadResult(
        languages=LanguageSet(records=ordered, provenance=(digest,)),
        issues=tuple(issues),
    )


def load_count_json(path: Union[str, Path], source: CountSource) -> CountTable:
    """Load a flat ``{"<iso639_3>": <integer>, ...}`` count file."""
    path = Path(path)
    raw = path.read_bytes()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaMismatch(f"{path} must be a JSON object mapping codes to integers")
    for code, count in doc.items():
        if not isinstance(count, int) or isinstance(count, bool):
            raise SchemaMismatch(f"{path}: count for {code!r} is not an integer: {count!r}")
    return CountTable(
        source=source,
        counts=dict(doc),
        generated_at=datetime.now(timezone.utc).isoformat(),
        digest="sha256:" + hashlib.sha256(raw).hexdigest(),
    )


def merge_counts(tables: Sequence[CountTable]) -> CountTable:
    """Pointwise-sum shard tables of one source (commutative monoid)."""
    if not tables:
        raise InputError("nothing to merge")
    source = tables[0].source
    mixed = {t.source for t in tables}
    if mixed != {source}:
        raise MixedSources(f"cannot merge sources: {', '.join(sorted(s.value for s in mixed))}")
    totals: dict[str, int] = {}
    for table in tables:
        for code, count in table.counts.items():
            totals[code] = totals.get(code, 0) + count
    return CountTable(
        source=source,
        counts=dict(sorted(totals.items())),
        generated_at=datetime.now(timezone.utc).isoformat(),
    )


@dataclass(frozen=True)
class OrphanCount:
    """A counted code with no vitality record to attach it to."""

    code: str
    source: str
    count: int


@dataclass(frozen=True)
class AssembleResult:
    languages: LanguageSet
    orphans: tuple[OrphanCount, ...]


_SOURCE_FEATURE = {
    CountSource.WEB: "web_pages",
    CountSource.WIKI: "wiki_articles",
    CountSource.ML_ASSETS: "ml_assets",
    CountSource.ARCHIVES: "archive_entries",
}


def assemble(vitality: LanguageSet, tables: Sequence[CountTable]) -> AssembleResult:
    """Join the four digitality sources onto the vitality set.

    Total on validated inputs: the output has exactly one record per
    vitality record, with absent counts as zero.
    """
    by_source: dict[CountSource, CountTable] = {}
    for table in tables:
        if table.source in by_source:
            raise MixedSources(f"source {table.source.value} supplied more than once")
        by_source[table.source] = table
    missing = [s.value for s in CountSource if s not in by_source]
    if missing:
        raise MissingSource(f"missing count tables for: {', '.join(missing)}")

    records = []
    for record in vitality:
        features = DigitalityFeatures(
            web_pages=by_source[CountSource.WEB].counts.get(record.id, 0),
            wiki_articles=by_source[CountSource.WIKI].counts.get(record.id, 0),
            ml_assets=by_source[CountSource.ML_ASSETS].counts.get(record.id, 0),
            archive_entries=by_source[CountSource.ARCHIVES].counts.get(record.id, 0),
        )
        records.append(record.with_digitality(features))

    orphans: list[OrphanCount] = []
    for source in CountSource:
        table = by_source[source]
        for code in sorted(table.counts):
            if code not in vitality.records:
                orphans.append(OrphanCount(code=code, source=source.value, count=table.counts[code]))

    provenance = list(vitality.provenance)
    for source in CountSource:
        digest = by_source[source].digest
        if digest:
            provenance.append(digest)

    return AssembleResult(
        languages=LanguageSet.build(records, provenance=provenance),
        orphans=tuple(orphans),
    )
