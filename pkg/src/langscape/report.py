"""Static figure emitters: the vitality/digitality scatter and the point map.

The representation score is painted on a diverging scale pinned to pure
red at -1 (vitality exceeds digitality), white at 0, and pure blue at +1,
interpolated linearly per channel. Both emitters are deterministic text
generators so pipeline outputs can be compared byte for byte.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .ingest import LanguageSet
from .model import LangscapeError, QuadrantLabel, ScoreVector

__all__ = [
    "MissingCoordinates",
    "diverging_color",
    "scatter_svg",
    "geojson_map",
]


class MissingCoordinates(LangscapeError):
    pass


def diverging_color(representation: float) -> str:
    """Hex fill for a representation value in [-1, 1]."""
    r = min(max(representation, -1.0), 1.0)
    if r <= 0.0:
        toward_white = round(255 * (1.0 + r))
        return f"#FF{toward_white:02X}{toward_white:02X}"
    toward_white = round(255 * (1.0 - r))
    return f"#{toward_white:02X}{toward_white:02X}FF"


_SIZE = 640
_MARGIN = 56


def _sx(v: float) -> float:
    return _MARGIN + v * (_SIZE - 2 * _MARGIN)


def _sy(v: float) -> float:
    return _SIZE - _MARGIN - v * (_SIZE - 2 * _MARGIN)


def scatter_svg(scores: Sequence[ScoreVector], medians: tuple[float, float]) -> str:
    """Scatter of digitality against vitality with median reference lines."""
    vitality_median, digitality_median = medians
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect x="0" y="0" width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_SIZE - 2 * _MARGIN}" '
        f'height="{_SIZE - 2 * _MARGIN}" fill="none" stroke="#444444" stroke-width="1"/>',
    ]
    for tick in (0.0, 0.5, 1.0):
        parts.append(
            f'<text x="{_sx(tick):.2f}" y="{_SIZE - _MARGIN + 20:.2f}" font-size="12" '
            f'text-anchor="middle" fill="#444444">{tick:.1f}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN - 10:.2f}" y="{_sy(tick) + 4:.2f}" font-size="12" '
            f'text-anchor="end" fill="#444444">{tick:.1f}</text>'
        )
    parts.append(
        f'<text x="{_SIZE / 2:.2f}" y="{_SIZE - 12:.2f}" font-size="14" text-anchor="middle" '
        f'fill="#222222">vitality (normalized)</text>'
    )
    parts.append(
        f'<text x="16" y="{_SIZE / 2:.2f}" font-size="14" text-anchor="middle" fill="#222222" '
        f'transform="rotate(-90 16 {_SIZE / 2:.2f})">digitality (normalized)</text>'
    )
    parts.append(
        f'<line x1="{_sx(vitality_median):.2f}" y1="{_sy(0.0):.2f}" x2="{_sx(vitality_median):.2f}" '
        f'y2="{_sy(1.0):.2f}" stroke="#888888" stroke-width="1" stroke-dasharray="4 3"/>'
    )
    parts.append(
        f'<line x1="{_sx(0.0):.2f}" y1="{_sy(digitality_median):.2f}" x2="{_sx(1.0):.2f}" '
        f'y2="{_sy(digitality_median):.2f}" stroke="#888888" stroke-width="1" stroke-dasharray="4 3"/>'
    )
    for score in sorted(scores, key=lambda s: s.id):
        parts.append(
            f'<circle cx="{_sx(score.vitality_norm):.2f}" cy="{_sy(score.digitality_norm):.2f}" r="4" '
            f'fill="{diverging_color(score.representation)}" stroke="#333333" stroke-width="0.5">'
            f"<title>{score.id}</title></circle>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def geojson_map(
    scores: Sequence[ScoreVector],
    languages: Optional[LanguageSet],
    labels: Mapping[str, QuadrantLabel],
) -> dict:
    """FeatureCollection of one point per scored language with coordinates.

    Raises MissingCoordinates when no coordinate source is available at
    all; individual languages without a record are skipped.
    """
    if languages is None or len(languages) == 0:
        raise MissingCoordinates("no coordinate source available for the map")
    features = []
    for score in sorted(scores, key=lambda s: s.id):
        record = languages.get(score.id)
        if record is None:
            continue
        cov = record.covariates
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [cov.longitude, cov.latitude]},
                "properties": {
                    "iso639_3": score.id,
                    "name": record.name,
                    "category": labels[score.id].value,
                    "representation": round(score.representation, 6),
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}
