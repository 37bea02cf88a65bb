import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from langscape.ingest import LanguageSet
from langscape.model import (
    DigitalityFeatures,
    GeoColonialCovariates,
    InputError,
    LanguageRecord,
    OfficialStatus,
    Region,
    VitalityFeatures,
)
from langscape.stats import (
    AllZero,
    DegenerateInput,
    LengthMismatch,
    MissingLabel,
    build_design,
    fit_logistic,
    loglik_gradient,
    penalized_loglik,
    predict_probability,
    spearman,
    token_share,
)

# computed once with exact rational arithmetic: 72 / sqrt(72 * 80)
TIE_CASE_RHO = 0.9486832980505138


def language(code, region=Region.AFRICA, colonized=False, colonizer=None, duration=0,
             status=OfficialStatus.NONE, unicode_support=True, speakers=1000):
    return LanguageRecord(
        id=code,
        name=code,
        vitality=VitalityFeatures(speakers_l1=speakers, egids=5.0),
        digitality=DigitalityFeatures(),
        covariates=GeoColonialCovariates(
            region=region,
            colonized=colonized,
            colonizer=colonizer,
            colonial_duration_years=duration,
            official_status=status,
            unicode_support=unicode_support,
            latitude=0.0,
            longitude=0.0,
        ),
    )


class TestDesign:
    def test_column_layout_and_encoding(self):
        languages = LanguageSet.build(
            [
                language("aaa", region=Region.ASIA, colonized=True, colonizer="GBR", duration=150,
                         status=OfficialStatus.REGIONAL, speakers=10**6 - 1),
                language("bbb"),
                language("ccc", region=Region.PACIFIC, status=OfficialStatus.NATIONAL, unicode_support=False),
            ]
        )
        design, y = build_design(languages, {"aaa": True, "bbb": False, "ccc": False})
        assert design.columns == (
            "intercept",
            "colonized",
            "colonial_duration_centuries",
            "official_national",
            "official_regional",
            "unicode_support",
            "log10_speakers",
            "region_Asia",
            "region_Europe",
            "region_Americas",
            "region_Pacific",
        )
        assert design.matrix.shape == (3, 11)
        row = dict(zip(design.columns, design.matrix[0]))
        assert row["intercept"] == 1.0
        assert row["colonized"] == 1.0
        assert row["colonial_duration_centuries"] == 1.5
        assert row["official_regional"] == 1.0 and row["official_national"] == 0.0
        assert row["region_Asia"] == 1.0
        assert row["log10_speakers"] == pytest.approx(6.0)
        assert list(y) == [1.0, 0.0, 0.0]
        assert design.encoding["region"]["reference"] == "Africa"
        assert design.encoding["official_status"]["reference"] == "none"

    def test_all_africa_has_zero_region_block(self):
        languages = LanguageSet.build([language("aaa"), language("bbb")])
        design, _ = build_design(languages, {"aaa": False, "bbb": True})
        block = design.matrix[:, -4:]
        assert not block.any()

    def test_missing_label(self):
        languages = LanguageSet.build([language("aaa")])
        with pytest.raises(MissingLabel):
            build_design(languages, {})


class TestLogistic:
    def _simulate(self, n=2000, beta=(-1.0, 2.0), seed=7):
        rng = np.random.default_rng(seed)
        x = rng.normal(0.0, 1.0, n)
        X = np.column_stack([np.ones(n), x])
        eta = beta[0] + beta[1] * x
        y = (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(float)
        return X, y

    def test_recovers_known_coefficients(self):
        X, y = self._simulate()
        fit = fit_logistic(X, y)
        assert fit.converged
        assert abs(fit.coefficients[0] - (-1.0)) < 0.15
        assert abs(fit.coefficients[1] - 2.0) < 0.15
        grad = loglik_gradient(X, y, np.asarray(fit.coefficients))
        assert float(np.max(np.abs(grad))) < 1e-8
        assert fit.standard_errors.shape == (2,)
        assert np.all(fit.standard_errors > 0)

    def test_trace_non_decreasing(self):
        X, y = self._simulate(seed=13)
        fit = fit_logistic(X, y)
        trace = fit.loglik_trace
        assert all(trace[i] <= trace[i + 1] + 1e-12 for i in range(len(trace) - 1))

    def test_all_zero_response_converges_under_ridge(self):
        X, y = self._simulate(seed=5)
        fit = fit_logistic(X, np.zeros_like(y))
        assert fit.converged
        assert fit.coefficients[0] < -5.0
        assert abs(fit.coefficients[1]) < 0.1

    def test_separable_data_stays_finite_and_flagged(self):
        X = np.array([[1.0, 0.0], [1.0, 0.1], [1.0, 0.9], [1.0, 1.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        fit = fit_logistic(X, y)
        assert fit.converged
        assert np.all(np.isfinite(fit.coefficients))
        assert np.all(np.isfinite(fit.standard_errors))
        assert fit.large_coefficients

    def test_gradient_matches_central_differences(self):
        X, y = self._simulate(n=400, seed=21)
        rng = np.random.default_rng(3)
        h = 1e-5
        for _ in range(10):
            beta = rng.normal(0.0, 1.0, X.shape[1])
            analytic = loglik_gradient(X, y, beta)
            numeric = np.empty_like(beta)
            for j in range(len(beta)):
                e = np.zeros_like(beta)
                e[j] = h
                numeric[j] = (penalized_loglik(X, y, beta + e) - penalized_loglik(X, y, beta - e)) / (2 * h)
            rel = np.max(np.abs(analytic - numeric) / np.maximum(1.0, np.abs(numeric)))
            assert rel < 1e-5

    def test_input_validation(self):
        X, y = self._simulate(n=10)
        with pytest.raises(InputError):
            fit_logistic(X, y[:5])
        with pytest.raises(InputError):
            fit_logistic(X, y + 0.5)
        with pytest.raises(InputError):
            fit_logistic(X[:2], y[:2])  # n <= p

    def test_predict_probability(self):
        X, y = self._simulate(seed=2)
        fit = fit_logistic(X, y)
        assert predict_probability(fit, [0.0, 0.0]) == 0.5
        probs = [predict_probability(fit, [1.0, t]) for t in np.linspace(-5, 5, 11)]
        assert all(0.0 < p < 1.0 for p in probs)
        assert probs == sorted(probs)  # logistic monotone in the linear predictor
        for row in X[:20]:
            assert 0.0 < predict_probability(fit, row) < 1.0
        with pytest.raises(InputError):
            predict_probability(fit, [1.0, 2.0, 3.0])


class TestSpearman:
    def test_monotone_exact(self):
        assert spearman([1, 2, 3, 4], [10, 200, 3000, 40000]) == 1.0
        assert spearman([1, 2, 3, 4], [5, 1, 0, -2]) == -1.0

    def test_tie_case_frozen_value(self):
        rho = spearman([1, 2, 2, 3], [1, 2, 3, 4])
        assert rho == pytest.approx(TIE_CASE_RHO, abs=1e-12)
        assert rho == pytest.approx(0.9487, abs=1e-4)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            spearman([1, 2], [1, 2, 3])
        with pytest.raises(DegenerateInput):
            spearman([5, 5, 5], [1, 2, 3])
        with pytest.raises(InputError):
            spearman([1], [2])

    # integer inputs keep exp()/cube strictly monotone in float arithmetic
    @given(st.lists(st.integers(-(10**6), 10**6), min_size=3, max_size=40, unique=True), st.randoms())
    def test_invariant_under_strictly_monotone_transforms(self, xs, rnd):
        ys = list(xs)
        rnd.shuffle(ys)
        base = spearman(xs, ys)
        assert spearman([math.exp(x / 1e6) for x in xs], ys) == base
        assert spearman(xs, [float(y) ** 3 for y in ys]) == base

    def test_symmetric_under_exchange(self):
        assert spearman([1, 5, 3], [2, 9, 4]) == spearman([2, 9, 4], [1, 5, 3])


class TestTokenShare:
    def test_examples(self):
        table = token_share("Pile", {"eng": 75, "deu": 25})
        assert table.shares == {"deu": 0.25, "eng": 0.75}
        single = token_share("Pile", {"eng": 9})
        assert single.shares == {"eng": 1.0}

    def test_all_zero(self):
        with pytest.raises(AllZero):
            token_share("Pile", {"eng": 0, "deu": 0})
        with pytest.raises(InputError):
            token_share("Pile", {"eng": -1})

    @given(st.dictionaries(st.sampled_from(["aaa", "bbb", "ccc", "ddd", "eee"]), st.integers(0, 10**9), min_size=1))
    def test_shares_sum_to_one(self, counts):
        if sum(counts.values()) == 0:
            return
        table = token_share("mC4", counts)
        assert sum(table.shares.values()) == pytest.approx(1.0, abs=1e-9)

    def test_planted_rank_agreement_with_vitality(self):
        vitality = {"aaa": 0.1, "bbb": 0.3, "ccc": 0.5, "ddd": 0.7, "eee": 0.9}
        counts = {code: int(10 ** (2 + 4 * v)) for code, v in vitality.items()}
        table = token_share("OSCAR", counts)
        codes = sorted(vitality)
        rho = spearman([table.shares[c] for c in codes], [vitality[c] for c in codes])
        assert rho == 1.0
