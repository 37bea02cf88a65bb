import random

import numpy as np
import pytest

from langscape.model import QuadrantLabel, ScoreVector
from langscape.quadrants import EmptyInput, TooFewLanguages, census, classify_language, compute_medians


def vec(code, v, d):
    return ScoreVector(id=code, vitality_norm=v, digitality_norm=d, representation=d - v)


def test_median_odd_even_and_constant():
    assert compute_medians([vec("aaa", 0.1, 0.3), vec("bbb", 0.2, 0.2), vec("ccc", 0.3, 0.1)]) == (0.2, 0.2)
    evens = [vec(c, x, x) for c, x in zip("abcd", [0.1, 0.2, 0.3, 0.4])]
    assert compute_medians(evens) == (0.2, 0.2)  # lower-middle, an attained value
    same = [vec(c, 0.7, 0.7) for c in "abcde"]
    assert compute_medians(same) == (0.7, 0.7)
    with pytest.raises(EmptyInput):
        compute_medians([])


@pytest.mark.parametrize(
    "v, d, expected",
    [
        (0.9, 0.9, QuadrantLabel.STRONGHOLD),
        (0.1, 0.9, QuadrantLabel.DIGITAL_ECHO),
        (0.1, 0.1, QuadrantLabel.FADING_VOICE),
        (0.9, 0.1, QuadrantLabel.INVISIBLE_GIANT),
    ],
)
def test_quadrant_mapping(v, d, expected):
    category = classify_language(vec("xxx", v, d), (0.5, 0.5))
    assert category.label is expected
    assert category.vitality_median == 0.5
    assert category.digitality_median == 0.5


def test_exactly_at_median_counts_below():
    assert classify_language(vec("xxx", 0.5, 0.9), (0.5, 0.5)).label is QuadrantLabel.DIGITAL_ECHO
    assert classify_language(vec("xxx", 0.5, 0.5), (0.5, 0.5)).label is QuadrantLabel.FADING_VOICE
    assert classify_language(vec("xxx", 0.9, 0.5), (0.5, 0.5)).label is QuadrantLabel.INVISIBLE_GIANT


def _constructed_population():
    # 60 languages engineered around known medians: 30 vitality values on
    # each side, digitality split 28 above / 32 at-or-below via a 3-way tie
    codes = [f"a{chr(97 + i // 26)}{chr(97 + i % 26)}" for i in range(60)]
    vit = [0.1 + 0.2 * i / 29 for i in range(30)] + [0.6 + 0.3 * i / 29 for i in range(30)]
    dig = (
        [0.05 + 0.3 * i / 28 for i in range(29)]
        + [0.5, 0.5, 0.5]
        + [0.7 + 0.25 * i / 27 for i in range(28)]
    )
    random.Random(5).shuffle(vit)
    random.Random(7).shuffle(dig)
    return [vec(c, v, d) for c, v, d in zip(codes, vit, dig)]


def brute_force_label(v, d, vm, dm):
    if v > vm and d > dm:
        return QuadrantLabel.STRONGHOLD
    if v <= vm and d > dm:
        return QuadrantLabel.DIGITAL_ECHO
    if v <= vm and d <= dm:
        return QuadrantLabel.FADING_VOICE
    return QuadrantLabel.INVISIBLE_GIANT


def test_census_counts_and_partition():
    scores = _constructed_population()
    result = census(scores)
    assert result.total == 60
    assert sum(result.counts.values()) == 60
    assert sum(result.percentages.values()) == pytest.approx(100.0, abs=1e-9)

    medians = (result.vitality_median, result.digitality_median)
    expected = {label: 0 for label in QuadrantLabel}
    for s in scores:
        expected[brute_force_label(s.vitality_norm, s.digitality_norm, *medians)] += 1
    assert dict(result.counts) == expected
    # the tie trio sits at the digitality median: exactly 28 strictly above
    above_dig = sum(1 for s in scores if s.digitality_norm > result.digitality_median)
    assert above_dig == 28


def test_identical_scores_all_fading_voice():
    scores = [vec(f"aa{chr(97 + i)}", 0.4, 0.4) for i in range(8)]
    result = census(scores)
    assert result.counts[QuadrantLabel.FADING_VOICE] == 8
    assert all(result.counts[l] == 0 for l in QuadrantLabel if l is not QuadrantLabel.FADING_VOICE)


def test_census_shuffle_invariance():
    scores = _constructed_population()
    baseline = census(scores)
    for seed in range(5):
        shuffled = list(scores)
        random.Random(seed).shuffle(shuffled)
        again = census(shuffled)
        assert again.counts == baseline.counts
        assert (again.vitality_median, again.digitality_median) == (
            baseline.vitality_median,
            baseline.digitality_median,
        )


def test_monotone_relabeling_with_fixed_medians():
    medians = (0.5, 0.5)
    moves = {
        QuadrantLabel.FADING_VOICE: QuadrantLabel.DIGITAL_ECHO,
        QuadrantLabel.INVISIBLE_GIANT: QuadrantLabel.STRONGHOLD,
    }
    rng = np.random.default_rng(9)
    for _ in range(200):
        v, d = rng.random(), rng.random()
        before = classify_language(vec("xxx", v, d), medians).label
        d_up = min(1.0, d + float(rng.random()) * (1.0 - d))
        after = classify_language(vec("xxx", v, d_up), medians).label
        assert after in (before, moves.get(before))


def test_too_few_languages():
    with pytest.raises(TooFewLanguages):
        census([vec("aaa", 0.1, 0.1), vec("bbb", 0.2, 0.2), vec("ccc", 0.3, 0.3)])


def test_census_json_shape():
    doc = census(_constructed_population()).to_json_dict()
    assert set(doc) == {"medians", "counts", "percentages", "total"}
    assert set(doc["counts"]) == {"Stronghold", "DigitalEcho", "FadingVoice", "InvisibleGiant"}
    assert set(doc["medians"]) == {"vitality", "digitality"}
