import itertools
import json

import pytest
from hypothesis import given, strategies as st

from langscape.ingest import (
    AssembleResult,
    LanguageSet,
    MissingSource,
    MixedSources,
    SchemaMismatch,
    assemble,
    file_digest,
    load_count_json,
    load_vitality_csv,
    merge_counts,
)
from langscape.model import CountSource, CountTable, DigitalityFeatures, InputError

HEADER = (
    "iso639_3,name,speakers_l1,egids,region,colonized,colonizer,colonial_duration_years,"
    "official_status,unicode_support,latitude,longitude"
)


def row(code="aaa", speakers="1000", egids="5.0", colonized="false", colonizer="", duration="0"):
    return f"{code},Lang {code},{speakers},{egids},Africa,{colonized},{colonizer},{duration},none,true,1.5,2.5"


def write_csv(tmp_path, rows, name="langs.csv"):
    path = tmp_path / name
    path.write_text(HEADER + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    return path


def test_three_valid_rows(tmp_path):
    path = write_csv(tmp_path, [row("aaa"), row("bbb"), row("ccc")])
    result = load_vitality_csv(path)
    assert not result.issues
    assert result.languages.ids() == ("aaa", "bbb", "ccc")
    assert result.languages.provenance == (file_digest(path),)


def test_duplicate_id_names_both_rows(tmp_path):
    path = write_csv(tmp_path, [row("aaa"), row("bbb"), row("bbb"), row("ccc")])
    result = load_vitality_csv(path)
    assert result.languages.ids() == ("aaa", "bbb", "ccc")
    dup = [i for i in result.issues if i.code == "DuplicateId"]
    assert len(dup) == 1
    assert "rows 3 and 4" in dup[0].message


def test_bad_rows_collected_good_rows_loaded(tmp_path):
    path = write_csv(
        tmp_path,
        [row("aaa"), row("bbb", egids="11"), row("ccc", colonized="false", duration="9"), row("ddd", speakers="x")],
    )
    result = load_vitality_csv(path)
    assert result.languages.ids() == ("aaa",)
    codes = {i.code for i in result.issues}
    assert codes == {"EgidsOutOfRange", "CovariateInconsistency", "ParseError"}
    assert {i.row for i in result.issues} == {3, 4, 5}


def test_egids_sublevels_accepted_in_csv(tmp_path):
    path = write_csv(tmp_path, [row("aaa", egids="6b"), row("bbb", egids="8a")])
    result = load_vitality_csv(path)
    assert not result.issues
    assert result.languages.get("aaa").vitality.egids == 6.5
    assert result.languages.get("bbb").vitality.egids == 8.0


def test_header_mismatch(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("code,name\naaa,x\n", encoding="utf-8")
    with pytest.raises(SchemaMismatch):
        load_vitality_csv(path)


def test_load_count_json(tmp_path):
    path = tmp_path / "counts.json"
    path.write_text('{"isl": 50000}', encoding="utf-8")
    table = load_count_json(path, CountSource.WIKI)
    assert table.counts == {"isl": 50000}
    assert table.source is CountSource.WIKI
    assert table.digest == file_digest(path)

    path.write_text('{"isl": -1}', encoding="utf-8")
    with pytest.raises(InputError):
        load_count_json(path, CountSource.WIKI)

    path.write_text("{}", encoding="utf-8")
    assert load_count_json(path, CountSource.WIKI).counts == {}

    path.write_text("[1,2]", encoding="utf-8")
    with pytest.raises(SchemaMismatch):
        load_count_json(path, CountSource.WIKI)

    path.write_text('{"isl": 1.5}', encoding="utf-8")
    with pytest.raises(SchemaMismatch):
        load_count_json(path, CountSource.WIKI)


def test_merge_counts_pointwise_sum():
    a = CountTable(source=CountSource.WEB, counts={"aaa": 2})
    b = CountTable(source=CountSource.WEB, counts={"aaa": 3, "bbb": 1})
    assert merge_counts([a, b]).counts == {"aaa": 5, "bbb": 1}

    empty = CountTable(source=CountSource.WEB, counts={})
    assert merge_counts([a, empty]).counts == dict(a.counts)

    with pytest.raises(MixedSources):
        merge_counts([a, CountTable(source=CountSource.WIKI, counts={"aaa": 1})])
    with pytest.raises(InputError):
        merge_counts([])


def test_merge_order_invariant_over_all_permutations():
    shards = [
        CountTable(source=CountSource.WEB, counts={"aaa": 1, "bbb": 2}),
        CountTable(source=CountSource.WEB, counts={"bbb": 5}),
        CountTable(source=CountSource.WEB, counts={"ccc": 7, "aaa": 1}),
    ]
    results = {tuple(sorted(merge_counts(list(p)).counts.items())) for p in itertools.permutations(shards)}
    assert results == {(("aaa", 2), ("bbb", 7), ("ccc", 7))}


_tables = st.lists(
    st.dictionaries(st.sampled_from(["aaa", "bbb", "ccc", "ddd"]), st.integers(0, 100), max_size=4).map(
        lambda counts: CountTable(source=CountSource.WEB, counts=counts)
    ),
    min_size=1,
    max_size=5,
)


@given(_tables, st.randoms())
def test_merge_is_a_commutative_monoid(tables, rnd):
    merged = merge_counts(tables)
    shuffled = list(tables)
    rnd.shuffle(shuffled)
    assert merge_counts(shuffled).counts == merged.counts
    identity = CountTable(source=CountSource.WEB, counts={})
    assert merge_counts([merged, identity]).counts == merged.counts
    # associativity: fold left equals fold right
    if len(tables) >= 2:
        left = merge_counts([merge_counts(tables[:-1]), tables[-1]])
        right = merge_counts([tables[0], merge_counts(tables[1:])])
        assert left.counts == right.counts


def _vitality_set(tmp_path):
    path = write_csv(tmp_path, [row("aaa"), row("bbb"), row("ccc")])
    return load_vitality_csv(path).languages


def _tables_for(codes_counts):
    tables = []
    for source, counts in codes_counts.items():
        tables.append(CountTable(source=source, counts=counts))
    return tables


def test_assemble_full_join(tmp_path):
    vitality = _vitality_set(tmp_path)
    tables = _tables_for(
        {
            CountSource.WEB: {"aaa": 10, "bbb": 20},
            CountSource.WIKI: {"aaa": 1},
            CountSource.ML_ASSETS: {"bbb": 5, "zzz": 9},
            CountSource.ARCHIVES: {},
        }
    )
    result = assemble(vitality, tables)
    assert len(result.languages) == 3  # totality
    aaa = result.languages.get("aaa")
    assert aaa.digitality == DigitalityFeatures(web_pages=10, wiki_articles=1, ml_assets=0, archive_entries=0)
    ccc = result.languages.get("ccc")
    assert ccc.digitality == DigitalityFeatures()  # absent everywhere -> zeros
    assert [(o.code, o.source, o.count) for o in result.orphans] == [("zzz", "ml_assets", 9)]


def test_assemble_requires_all_sources(tmp_path):
    vitality = _vitality_set(tmp_path)
    tables = _tables_for({CountSource.WEB: {}, CountSource.WIKI: {}, CountSource.ARCHIVES: {}})
    with pytest.raises(MissingSource):
        assemble(vitality, tables)
    with pytest.raises(MixedSources):
        assemble(vitality, tables + [CountTable(source=CountSource.WEB, counts={}), CountTable(source=CountSource.ML_ASSETS, counts={})])


def test_loading_is_deterministic(tmp_path):
    path = write_csv(tmp_path, [row("aaa"), row("bbb")])
    first = load_vitality_csv(path)
    second = load_vitality_csv(path)
    assert first.languages == second.languages
    assert first.languages.provenance == second.languages.provenance


def test_language_set_build_rejects_duplicates_and_invalid():
    record = load_vitality_csv_record_helper()
    with pytest.raises(InputError):
        LanguageSet.build([record, record])


def load_vitality_csv_record_helper():
    from langscape.model import (
        GeoColonialCovariates,
        LanguageRecord,
        OfficialStatus,
        Region,
        VitalityFeatures,
    )

    return LanguageRecord(
        id="aaa",
        name="A",
        vitality=VitalityFeatures(speakers_l1=10, egids=5.0),
        digitality=DigitalityFeatures(),
        covariates=GeoColonialCovariates(
            region=Region.AFRICA,
            colonized=False,
            colonizer=None,
            colonial_duration_years=0,
            official_status=OfficialStatus.NONE,
            unicode_support=True,
            latitude=0.0,
            longitude=0.0,
        ),
    )
