"""Command-line pipeline: count, score, analyze, report, or all of them.

Exit codes are a stable contract: 0 success, 1 runtime failure, 2 input
or schema error. Every run is deterministic: rerunning a subcommand on
the same inputs produces byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from . import ingest, quadrants, scoring, stats
from .config import PipelineConfig, load_config
from .langid import count_by_language, load_model
from .model import CountSource, InputError, LangscapeError, QuadrantLabel, ScoreVector
from .report import MissingCoordinates, geojson_map, scatter_svg
from .wet import open_wet_path

__all__ = ["main"]


def _write_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_text(text: str, path: Path) -> None:
    path.write_text(text, encoding="utf-8")


def _load_vitality_or_die(config: PipelineConfig) -> ingest.LanguageSet:
    config.require("vitality_csv")
    result = ingest.load_vitality_csv(config.vitality_csv)
    if result.issues:
        for issue in result.issues:
            print(f"{config.vitality_csv}: {issue}", file=sys.stderr)
        raise InputError(f"{len(result.issues)} bad rows in {config.vitality_csv}")
    return result.languages


def _count_tables(config: PipelineConfig) -> list[ingest.CountTable]:
    pairs = (
        ("counts_web", CountSource.WEB),
        ("counts_wiki", CountSource.WIKI),
        ("counts_ml_assets", CountSource.ML_ASSETS),
        ("counts_archives", CountSource.ARCHIVES),
    )
    missing = [key for key, _ in pairs if getattr(config, key) is None]
    if missing:
        raise ingest.MissingSource(f"config is missing count files: {', '.join(missing)}")
    return [ingest.load_count_json(getattr(config, key), source) for key, source in pairs]


def _provenance(config: PipelineConfig) -> dict:
    inputs = {}
    for key in ("vitality_csv", "counts_web", "counts_wiki", "counts_ml_assets", "counts_archives", "langid_model"):
        path = getattr(config, key)
        if path is not None and Path(path).exists():
            inputs[str(path)] = ingest.file_digest(path)
    for corpus, path in sorted(config.token_counts.items()):
        if Path(path).exists():
            inputs[str(path)] = ingest.file_digest(path)
    return {"inputs": inputs}


def cmd_count(config: PipelineConfig) -> int:
    """Classify WET shards and write the merged web count file."""
    config.require("wet_dir", "langid_model")
    wet_dir = Path(config.wet_dir)
    if not wet_dir.is_dir():
        raise InputError(f"wet_dir is not a directory: {wet_dir}")
    shards = sorted(p for p in wet_dir.iterdir() if p.name.endswith((".wet", ".wet.gz")))
    model = load_model(config.langid_model)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()

    def _one(path: Path):
        try:
            return count_by_language(model, open_wet_path(path), config.min_confidence)
        except LangscapeError as exc:
            raise type(exc)(f"{path}: {exc}") from exc

    if not shards:
        print(f"warning: no .wet or .wet.gz files in {wet_dir}", file=sys.stderr)
        merged = ingest.CountTable(source=CountSource.WEB, counts={})
    else:
        workers = config.threads or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(_one, shards))
        merged = ingest.merge_counts(tables)

    elapsed = time.perf_counter() - started
    documents = merged.total()
    _write_json(dict(sorted(merged.counts.items())), out_dir / "web.json")
    rate = documents / elapsed if elapsed > 0 else 0.0
    print(f"counted {documents} documents from {len(shards)} shards in {elapsed:.2f}s ({rate:.0f} docs/s)")
    return 0


def _score_pipeline(config: PipelineConfig):
    languages = _load_vitality_or_die(config)
    tables = _count_tables(config)
    assembled = ingest.assemble(languages, tables)
    result = scoring.score_dataset(assembled.languages)
    return assembled, result


def cmd_score(config: PipelineConfig) -> int:
    """Assemble, score, classify, and write the tabular outputs."""
    if config.composite not in scoring.COMPOSITE_MODES:
        raise InputError(f"composite must be one of {scoring.COMPOSITE_MODES}, got {config.composite!r}")
    assembled, result = _score_pipeline(config)
    vectors = result.vectors(config.composite)
    census = quadrants.census(vectors)

    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_text(scoring.scores_to_csv(vectors), out_dir / "scores.csv")
    _write_json(census.to_json_dict(), out_dir / "census.json")
    _write_json(
        [{"code": o.code, "source": o.source, "count": o.count} for o in assembled.orphans],
        out_dir / "orphans.json",
    )

    by_mode = {mode: result.vectors(mode) for mode in scoring.COMPOSITE_MODES}
    sensitivity = {
        "primary_mode": config.composite,
        "representation_by_mode": {
            mode: {v.id: round(v.representation, 6) for v in vecs} for mode, vecs in by_mode.items()
        },
        "rank_agreement_spearman": stats.spearman(
            [v.representation for v in by_mode["gmm_rank"]],
            [v.representation for v in by_mode["feature_mean"]],
        ),
    }
    _write_json(sensitivity, out_dir / "sensitivity.json")
    _write_json(_provenance(config), out_dir / "provenance.json")
    print(f"scored {len(vectors)} languages -> {out_dir}/scores.csv")
    counts = census.counts
    print(
        "census: "
        + ", ".join(f"{label.value}={counts[label]}" for label in QuadrantLabel)
        + f" (medians v={census.vitality_median:.6f}, d={census.digitality_median:.6f})"
    )
    return 0


def _read_scores(out_dir: Path) -> list[ScoreVector]:
    path = out_dir / "scores.csv"
    if not path.exists():
        raise InputError(f"{path} not found; run the score step first")
    vectors = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            vectors.append(
                ScoreVector(
                    id=row["iso639_3"],
                    vitality_norm=float(row["vitality_norm"]),
                    digitality_norm=float(row["digitality_norm"]),
                    representation=float(row["representation"]),
                )
            )
    return vectors


def _read_medians(out_dir: Path, vectors: list[ScoreVector]) -> tuple[float, float]:
    """Medians over the (rounded) stored scores, cross-checked against census.json.

    Recomputing keeps the tie rule consistent with the file being
    classified; the census check catches a stale or foreign census.
    """
    path = out_dir / "census.json"
    if not path.exists():
        raise InputError(f"{path} not found; run the score step first")
    doc = json.loads(path.read_text(encoding="utf-8"))
    stored = (doc["medians"]["vitality"], doc["medians"]["digitality"])
    medians = quadrants.compute_medians(vectors)
    if abs(stored[0] - medians[0]) > 1e-5 or abs(stored[1] - medians[1]) > 1e-5:
        raise InputError(f"{path} does not match scores.csv (medians differ); rerun the score step")
    return medians


def cmd_analyze(config: PipelineConfig) -> int:
    """Regression on Invisible-Giant status plus token-share correlations."""
    out_dir = Path(config.out)
    vectors = _read_scores(out_dir)
    medians = _read_medians(out_dir, vectors)
    labels = {
        v.id: quadrants.classify_language(v, medians).label is QuadrantLabel.INVISIBLE_GIANT for v in vectors
    }
    languages = _load_vitality_or_die(config)

    design, response = stats.build_design(languages, labels)
    fit = stats.fit_logistic(design, response)
    coefficient_table = []
    for j, name in enumerate(design.columns):
        estimate = float(fit.coefficients[j])
        se = float(fit.standard_errors[j])
        coefficient_table.append(
            {
                "name": name,
                "estimate": round(estimate, 10),
                "standard_error": round(se, 10),
                "z_value": round(estimate / se, 10) if se > 0 else None,
            }
        )
    _write_json(
        {
            "model": "invisible_giant ~ colonial covariates + controls",
            "n": len(design.row_ids),
            "converged": fit.converged,
            "iterations": fit.iterations,
            "ridge_lambda": fit.ridge_lambda,
            "large_coefficients": fit.large_coefficients,
            "coefficients": coefficient_table,
            "encoding": {k: dict(v) for k, v in design.encoding.items()},
        },
        out_dir / "regression.json",
    )

    vitality_by_id = {v.id: v.vitality_norm for v in vectors}
    ordered_ids = sorted(vitality_by_id)
    vitality_series = [vitality_by_id[i] for i in ordered_ids]
    correlations = {}
    for corpus, path in sorted(config.token_counts.items()):
        table = stats.token_share(corpus, ingest.load_count_json(path, CountSource.WEB).counts)
        shares = [table.shares.get(i, 0.0) for i in ordered_ids]
        unmatched = sorted(set(table.counts) - set(ordered_ids))
        entry: dict = {"languages": len(ordered_ids), "unmatched_codes": unmatched}
        try:
            entry["spearman_vs_vitality"] = stats.spearman(shares, vitality_series)
        except stats.DegenerateInput as exc:
            entry["spearman_vs_vitality"] = None
            entry["note"] = str(exc)
        entry["pearson_vs_vitality"] = float(np.corrcoef(shares, vitality_series)[0, 1])
        correlations[corpus] = entry
    _write_json(correlations, out_dir / "correlations.json")

    print(f"analyzed {len(vectors)} languages -> {out_dir}/regression.json, {out_dir}/correlations.json")
    return 0


def cmd_report(config: PipelineConfig) -> int:
    """Emit the scatter figure and, when coordinates exist, the point map."""
    out_dir = Path(config.out)
    vectors = _read_scores(out_dir)
    medians = _read_medians(out_dir, vectors)
    _write_text(scatter_svg(vectors, medians), out_dir / "scatter.svg")
    print(f"wrote {out_dir}/scatter.svg")

    languages = None
    if config.vitality_csv is not None and Path(config.vitality_csv).exists():
        languages = ingest.load_vitality_csv(config.vitality_csv).languages
    labels = {v.id: quadrants.classify_language(v, medians).label for v in vectors}
    try:
        collection = geojson_map(vectors, languages, labels)
    except MissingCoordinates as exc:
        print(f"error: map skipped: {exc}", file=sys.stderr)
        return 1
    _write_json(collection, out_dir / "map.geojson")
    print(f"wrote {out_dir}/map.geojson ({len(collection['features'])} features)")
    return 0


def cmd_pipeline(config: PipelineConfig) -> int:
    """Run every stage; the count stage only when WET inputs are configured."""
    if config.wet_dir is not None:
        code = cmd_count(config)
        if code != 0:
            return code
        config.counts_web = Path(config.out) / "web.json"
    for step in (cmd_score, cmd_analyze, cmd_report):
        code = step(config)
        if code != 0:
            return code
    return 0


_COMMANDS = {
    "count": cmd_count,
    "score": cmd_score,
    "analyze": cmd_analyze,
    "report": cmd_report,
    "pipeline": cmd_pipeline,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="langscape",
        description="Measure language vitality vs. digital presence and report the gaps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in _COMMANDS.items():
        p = sub.add_parser(name, help=func.__doc__)
        p.add_argument("--config", required=True, help="pipeline config file (key = value lines)")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--threads", type=int, help="worker threads for the count stage")
        p.add_argument("--min-confidence", type=float, dest="min_confidence", help="langid rejection threshold")
        p.add_argument(
            "--composite",
            choices=scoring.COMPOSITE_MODES,
            help="composite mode for the primary scores",
        )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.out is not None:
            config.out = Path(args.out).resolve()
        if args.threads is not None:
            config.threads = args.threads
        if args.min_confidence is not None:
            config.min_confidence = args.min_confidence
        if args.composite is not None:
            config.composite = args.composite
        return _COMMANDS[args.command](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LangscapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
