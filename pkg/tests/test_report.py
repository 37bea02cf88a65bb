import pytest

from langscape.ingest import LanguageSet
from langscape.model import (
    DigitalityFeatures,
    GeoColonialCovariates,
    LanguageRecord,
    OfficialStatus,
    QuadrantLabel,
    Region,
    ScoreVector,
    VitalityFeatures,
)
from langscape.report import MissingCoordinates, diverging_color, geojson_map, scatter_svg


def vec(code, v, d):
    return ScoreVector(id=code, vitality_norm=v, digitality_norm=d, representation=d - v)


@pytest.mark.parametrize(
    "value, expected",
    [
        (0.0, "#FFFFFF"),
        (-1.0, "#FF0000"),
        (1.0, "#0000FF"),
        (-0.5, "#FF8080"),
        (0.5, "#8080FF"),
        (-2.0, "#FF0000"),  # clamped
        (2.0, "#0000FF"),
    ],
)
def test_diverging_endpoints_and_midpoint(value, expected):
    assert diverging_color(value) == expected


def test_diverging_monotone_channels():
    reds = [int(diverging_color(r)[1:3], 16) for r in [x / 20 for x in range(-20, 21)]]
    blues = [int(diverging_color(r)[5:7], 16) for r in [x / 20 for x in range(-20, 21)]]
    assert reds == sorted(reds, reverse=True)
    assert blues == sorted(blues)


def test_scatter_contains_one_circle_per_language_and_median_lines():
    scores = [vec("aaa", 0.2, 0.8), vec("bbb", 0.6, 0.4), vec("ccc", 0.9, 0.9)]
    svg = scatter_svg(scores, (0.5, 0.5))
    assert svg.count("<circle") == 3
    assert svg.count("stroke-dasharray") == 2
    assert "vitality (normalized)" in svg and "digitality (normalized)" in svg
    assert svg == scatter_svg(scores, (0.5, 0.5))  # deterministic


def record(code, lat, lon):
    return LanguageRecord(
        id=code,
        name=f"Lang {code}",
        vitality=VitalityFeatures(speakers_l1=10, egids=5.0),
        digitality=DigitalityFeatures(),
        covariates=GeoColonialCovariates(
            region=Region.AFRICA,
            colonized=False,
            colonizer=None,
            colonial_duration_years=0,
            official_status=OfficialStatus.NONE,
            unicode_support=True,
            latitude=lat,
            longitude=lon,
        ),
    )


def test_geojson_features_sorted_with_properties():
    languages = LanguageSet.build([record("bbb", 10.0, 20.0), record("aaa", -5.0, 30.0)])
    scores = [vec("bbb", 0.6, 0.4), vec("aaa", 0.2, 0.8)]
    labels = {"aaa": QuadrantLabel.DIGITAL_ECHO, "bbb": QuadrantLabel.INVISIBLE_GIANT}
    doc = geojson_map(scores, languages, labels)
    assert doc["type"] == "FeatureCollection"
    assert [f["properties"]["iso639_3"] for f in doc["features"]] == ["aaa", "bbb"]
    first = doc["features"][0]
    assert first["geometry"] == {"type": "Point", "coordinates": [30.0, -5.0]}
    assert first["properties"]["category"] == "DigitalEcho"
    assert first["properties"]["representation"] == pytest.approx(0.6, abs=1e-9)
    assert first["properties"]["name"] == "Lang aaa"


def test_geojson_skips_unknown_language_but_requires_a_source():
    languages = LanguageSet.build([record("aaa", 0.0, 0.0)])
    scores = [vec("aaa", 0.1, 0.2), vec("zzz", 0.3, 0.4)]
    labels = {"aaa": QuadrantLabel.FADING_VOICE, "zzz": QuadrantLabel.FADING_VOICE}
    doc = geojson_map(scores, languages, labels)
    assert len(doc["features"]) == 1
    with pytest.raises(MissingCoordinates):
        geojson_map(scores, None, labels)
    with pytest.raises(MissingCoordinates):
        geojson_map(scores, LanguageSet(records={}), labels)
