from __future__ import annotations

import numpy as np
import pytest

from rankdiff import (Authorship, Corpus, CorpusLoadError, FieldScheme,
                      FilterConfig, ObservationWindow, Professor, Publication,
                      apply_filters, eligible_units, load_corpus, read_config,
                      write_corpus_csvs)
from helpers import random_corpus


def test_load_minimal_fixture(corpus_dir, window):
    corpus = load_corpus(corpus_dir, window)
    counts = corpus.counts()
    assert counts["universities"] == 2
    assert counts["professors"] == 4
    assert counts["publications"] == 5
    assert counts["authorships"] == 6


def test_load_roundtrip_preserves_digest(tmp_path, tiny_corpus, window):
    write_corpus_csvs(tiny_corpus, tmp_path / "x")
    reloaded = load_corpus(tmp_path / "x", window)
    assert reloaded.digest() == tiny_corpus.digest()


def test_dangling_authorship_names_row(corpus_dir, window):
    with open(corpus_dir / "authorships.csv", "a", encoding="utf-8") as f:
        f.write("w1,GHOST\n")
    with pytest.raises(CorpusLoadError) as err:
        load_corpus(corpus_dir, window)
    (v,) = err.value.violations
    assert "authorships.csv:8" in v.where
    assert v.field == "professor_id"
    assert "GHOST" in v.message


def test_authorships_exceed_author_count(window):
    pubs = {"w": Publication("w", 2008, "article", ("C",), 1, 3)}
    profs = {f"p{i}": Professor(f"p{i}", "A", "S", "r", 5.0) for i in range(4)}
    auths = [Authorship("w", f"p{i}") for i in range(4)]
    with pytest.raises(CorpusLoadError, match="n_authors_total"):
        Corpus(ObservationWindow(2008, 2012), pubs, auths, profs,
               FieldScheme({"S": "U"}), {"r": 1.0})


def test_duplicate_pub_id(corpus_dir, window):
    with open(corpus_dir / "publications.csv", "a", encoding="utf-8") as f:
        f.write("w1,2008,article,C1,4,2\n")
    with pytest.raises(CorpusLoadError, match="duplicate key"):
        load_corpus(corpus_dir, window)


def test_malformed_row_names_file_line_field(corpus_dir, window):
    with open(corpus_dir / "publications.csv", "a", encoding="utf-8") as f:
        f.write("w9,not_a_year,article,C1,4,2\n")
    with pytest.raises(CorpusLoadError) as err:
        load_corpus(corpus_dir, window)
    (v,) = err.value.violations
    assert v.where == "publications.csv:7"
    assert v.field == "year"


def test_missing_file(tmp_path, window):
    with pytest.raises(CorpusLoadError, match="file not found"):
        load_corpus(tmp_path, window)


def test_wrong_header(corpus_dir, window):
    path = corpus_dir / "salaries.csv"
    path.write_text("rank,salary\nfull,2\n", encoding="utf-8")
    with pytest.raises(CorpusLoadError, match="expected columns"):
        load_corpus(corpus_dir, window)


def test_unknown_sds_and_rank(window):
    profs = {"p": Professor("p", "A", "NOPE", "ghost_rank", 5.0)}
    with pytest.raises(CorpusLoadError) as err:
        Corpus(window, {}, [], profs, FieldScheme({"S": "U"}), {"r": 1.0})
    fields = {v.field for v in err.value.violations}
    assert fields == {"sds_code", "academic_rank"}


def test_tenure_exceeding_window(window):
    profs = {"p": Professor("p", "A", "S", "r", 6.0)}
    with pytest.raises(CorpusLoadError, match="exceeds window length"):
        Corpus(window, {}, [], profs, FieldScheme({"S": "U"}), {"r": 1.0})


# ---------------------------------------------------------------------------
# Filtering

def test_filter_short_tenure(tiny_corpus):
    filtered = apply_filters(tiny_corpus, FilterConfig())
    assert "p4" not in filtered.professors          # 2.5 years < 3
    assert filtered.filter_report.professors_removed_tenure == 1


def test_filter_excluded_doc_type(tiny_corpus):
    filtered = apply_filters(tiny_corpus, FilterConfig())
    assert "w5" not in filtered.publications        # meeting abstract
    assert "w5" not in filtered.baseline_publications
    assert filtered.filter_report.publications_removed_doctype == 1


def test_filter_baseline_keeps_doctypes_when_asked(tiny_corpus):
    cfg = FilterConfig(baseline_include_all_doctypes=True)
    filtered = apply_filters(tiny_corpus, cfg)
    assert "w5" not in filtered.publications
    assert "w5" in filtered.baseline_publications


def test_filter_threshold_zero_is_identity(tiny_corpus):
    cfg = FilterConfig(min_years_on_staff=0, excluded_doc_types=frozenset())
    filtered = apply_filters(tiny_corpus, cfg)
    assert set(filtered.professors) == set(tiny_corpus.professors)
    assert set(filtered.publications) == set(tiny_corpus.publications)


def test_filter_out_of_window_publication(tiny_corpus):
    pubs = dict(tiny_corpus.publications)
    pubs["old"] = Publication("old", 1999, "article", ("C1",), 3, 1)
    corpus = Corpus(tiny_corpus.window, pubs, tiny_corpus.authorships,
                    tiny_corpus.professors, tiny_corpus.field_scheme,
                    tiny_corpus.salary_table)
    filtered = apply_filters(corpus, FilterConfig())
    assert "old" not in filtered.publications
    assert filtered.filter_report.publications_removed_window == 1


def test_filtering_idempotent(tiny_corpus):
    cfg = FilterConfig()
    once = apply_filters(tiny_corpus, cfg)
    twice = apply_filters(once, cfg)
    assert set(twice.professors) == set(once.professors)
    assert set(twice.publications) == set(once.publications)
    assert twice.digest() == once.digest()


def test_filtered_authorships_reference_survivors():
    rng = np.random.default_rng(7)
    for _ in range(20):
        corpus = random_corpus(rng, n_universities=2, n_sds=2)
        filtered = apply_filters(corpus, FilterConfig())
        for a in filtered.authorships:
            assert a.pub_id in filtered.publications
            assert a.professor_id in filtered.professors


# ---------------------------------------------------------------------------
# Eligibility

def _headcount_corpus(window, counts: dict[str, int]) -> Corpus:
    profs = {}
    i = 0
    for univ, n in counts.items():
        for _ in range(n):
            i += 1
            profs[f"p{i}"] = Professor(f"p{i}", univ, "S", "r", 5.0)
    return Corpus(window, {}, [], profs, FieldScheme({"S": "U"}), {"r": 1.0})


def test_eligible_units_threshold(window):
    corpus = _headcount_corpus(window, {"A": 3, "B": 1, "C": 2})
    units = eligible_units(corpus, "sds", FilterConfig(min_professors_sds=2))
    assert [(u.university_id, u.professor_count) for u in units] == \
        [("A", 3), ("C", 2)]


def test_overall_threshold_excludes_29(window):
    corpus = _headcount_corpus(window, {"A": 29, "B": 30})
    units = eligible_units(corpus, "overall", FilterConfig())
    assert [(u.university_id, u.scope_code) for u in units] == [("B", None)]


def test_eligibility_monotone_in_threshold(window):
    rng = np.random.default_rng(11)
    for _ in range(20):
        corpus = random_corpus(rng, n_universities=4, n_sds=3)
        for level in ("sds", "uda", "overall"):
            previous = None
            for threshold in (0, 1, 2, 4, 8):
                cfg = FilterConfig(min_professors_sds=threshold,
                                   min_professors_uda=threshold,
                                   min_professors_overall=threshold)
                units = {(u.university_id, u.scope_code)
                         for u in eligible_units(corpus, level, cfg)}
                if previous is not None:
                    assert units <= previous
                previous = units


def test_unknown_level_rejected(tiny_corpus):
    with pytest.raises(ValueError, match="unknown level"):
        eligible_units(tiny_corpus, "faculty", FilterConfig())


def test_scope_codes_per_level(tiny_corpus):
    from rankdiff import scope_codes
    assert scope_codes(tiny_corpus, "sds") == ["S1", "S2"]
    assert scope_codes(tiny_corpus, "uda") == ["U1"]
    assert scope_codes(tiny_corpus, "overall") == [None]
    # only populated scopes count
    filtered = apply_filters(tiny_corpus, FilterConfig())   # drops p4 (S2)
    assert scope_codes(filtered, "sds") == ["S1"]


# ---------------------------------------------------------------------------
# Config file

def test_read_config_full(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# analysis window\n"
        "start_year = 2008\n"
        "end_year = 2012\n"
        "citation_snapshot_label = October 2015\n"
        "min_years_on_staff = 3\n"
        "excluded_doc_types = editorial material, meeting abstract\n"
        "min_professors_sds = 2\n"
        "min_professors_uda = 10\n"
        "min_professors_overall = 30\n"
        "min_units_to_rank = 5\n"
        "baseline_include_all_doctypes = false\n",
        encoding="utf-8")
    cfg = read_config(path)
    assert cfg.window.start_year == 2008
    assert cfg.window.end_year == 2012
    assert cfg.filters.excluded_doc_types == \
        frozenset({"editorial material", "meeting abstract"})
    assert cfg.filters.min_professors_overall == 30


def test_read_config_defaults(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("start_year=2008\nend_year=2012\n", encoding="utf-8")
    cfg = read_config(path)
    assert cfg.filters == FilterConfig()


@pytest.mark.parametrize("content,match", [
    ("start_year=2008\n", "end_year"),
    ("start_year=2008\nend_year=2012\nmystery=1\n", "unknown config keys"),
    ("start_year=2008\nend_year=2012\nbaseline_include_all_doctypes=maybe\n",
     "must be boolean"),
    ("just a line\n", "expected key=value"),
])
def test_read_config_errors(tmp_path, content, match):
    path = tmp_path / "run.cfg"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ValueError, match=match):
        read_config(path)


def test_window_rejects_reversed_years():
    with pytest.raises(ValueError):
        ObservationWindow(2012, 2008)


def test_filterconfig_rejects_negative_threshold():
    with pytest.raises(ValueError):
        FilterConfig(min_professors_sds=-1)
