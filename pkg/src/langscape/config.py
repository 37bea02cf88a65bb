"""Key-value pipeline configuration with flag overrides.

Format: one ``key = value`` per line, ``#`` starts a comment line, blank
lines ignored. Paths are resolved relative to the config file so a
bundled fixture directory works from anywhere. Command-line flags win
over file values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .model import InputError

__all__ = ["PipelineConfig", "load_config"]

_PATH_KEYS = {
    "vitality_csv",
    "counts_web",
    "counts_wiki",
    "counts_ml_assets",
    "counts_archives",
    "wet_dir",
    "langid_model",
    "out",
}


@dataclass
class PipelineConfig:
    vitality_csv: Optional[Path] = None
    counts_web: Optional[Path] = None
    counts_wiki: Optional[Path] = None
    counts_ml_assets: Optional[Path] = None
    counts_archives: Optional[Path] = None
    wet_dir: Optional[Path] = None
    langid_model: Optional[Path] = None
    out: Path = Path("out")
    min_confidence: float = 0.5
    composite: str = "gmm_rank"
    threads: Optional[int] = None
    token_counts: dict[str, Path] = field(default_factory=dict)

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise InputError(f"config is missing required keys: {', '.join(missing)}")


def load_config(path: Union[str, Path]) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise InputError(f"config file not found: {path}")
    base = path.parent
    config = PipelineConfig()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _PATH_KEYS:
            setattr(config, key, (base / value).resolve())
        elif key == "min_confidence":
            try:
                config.min_confidence = float(value)
            except ValueError:
                raise InputError(f"{path}:{lineno}: min_confidence must be a number") from None
        elif key == "threads":
            try:
                config.threads = int(value)
            except ValueError:
                raise InputError(f"{path}:{lineno}: threads must be an integer") from None
        elif key == "composite":
            config.composite = value
        elif key.startswith("tokens_"):
            corpus = key[len("tokens_") :]
            if not corpus:
                raise InputError(f"{path}:{lineno}: token corpus name missing")
            config.token_counts[corpus] = (base / value).resolve()
        else:
            raise InputError(f"{path}:{lineno}: unknown config key {key!r}")
    return config
