from __future__ import annotations

import json

import pytest

from rankdiff import (FilterConfig, ObservationWindow, SynthConfig,
                      SynthConfigError, apply_filters,
                      compute_scaling_factors, generate,
                      measure_quantity_impact_correlation, scoreboards,
                      write_corpus_csvs)


def small_cfg(seed=7, **overrides) -> SynthConfig:
    base = dict(
        seed=seed, n_universities=6,
        sds_spec=(("SDS/01", "1"), ("SDS/02", "1"), ("SDS/03", "2")),
        professors_per_sds=(2, 5), pubs_per_professor=5.0,
        citation_dispersion=1.0, quantity_impact_corr=0.4,
        salary_levels=(("assistant", 45000.0), ("full", 80000.0)),
        window=ObservationWindow(2008, 2012, "synthetic snapshot"),
    )
    base.update(overrides)
    return SynthConfig(**base)


def test_same_seed_same_corpus():
    assert generate(small_cfg()).digest() == generate(small_cfg()).digest()


def test_same_seed_byte_identical_files(tmp_path):
    paths_a = write_corpus_csvs(generate(small_cfg()), tmp_path / "a")
    paths_b = write_corpus_csvs(generate(small_cfg()), tmp_path / "b")
    for pa, pb in zip(paths_a.all(), paths_b.all()):
        assert pa.read_bytes() == pb.read_bytes()


def test_different_seed_different_corpus():
    assert generate(small_cfg(seed=1)).digest() != \
        generate(small_cfg(seed=2)).digest()


def test_generated_corpora_validate():
    for seed in range(5):
        corpus = generate(small_cfg(seed=seed))   # Corpus() validates
        assert corpus.counts()["professors"] > 0
        assert corpus.counts()["publications"] > 0


def test_cross_university_coauthorship_and_external_authors():
    corpus = generate(small_cfg(seed=3, n_universities=10,
                                professors_per_sds=(4, 8)))
    profs = corpus.professors
    cross = any(
        len({profs[a].university_id for a in authors}) > 1
        for authors in corpus.professors_by_pub.values())
    fractional = any(
        len(corpus.professors_by_pub.get(pub_id, [])) <
        corpus.publications[pub_id].n_authors_total
        for pub_id in corpus.publications)
    assert cross
    assert fractional


def test_populated_cells_have_cited_publication():
    corpus = generate(small_cfg(seed=11, n_universities=12,
                                pubs_per_professor=8.0))
    cells: dict[tuple[int, str], list] = {}
    for pub in corpus.publications.values():
        for cat in pub.subject_categories:
            cells.setdefault((pub.year, cat), []).append(pub.citations)
    for key, citations in cells.items():
        if len(citations) >= 50:
            assert any(c > 0 for c in citations), key


def test_quantity_impact_correlation_steering():
    cfg = SynthConfig(
        seed=5, n_universities=25,
        sds_spec=tuple((f"SDS/{i:02d}", f"{i % 4 + 1}") for i in range(8)),
        professors_per_sds=(8, 12), pubs_per_professor=8.0,
        citation_dispersion=1.5, quantity_impact_corr=0.6,
        salary_levels=(("assistant", 45000.0), ("associate", 60000.0),
                       ("full", 80000.0)),
        window=ObservationWindow(2008, 2012, "synthetic snapshot"))
    corpus = generate(cfg)
    assert len(corpus.professors) >= 2000
    table = compute_scaling_factors(corpus)
    measured = measure_quantity_impact_correlation(corpus, table)
    assert measured == pytest.approx(0.6, abs=0.1)


def test_chemistry_shaped_corpus_runs_all_pipelines():
    # 61 universities, 12 fields in one discipline, ~3174 professors
    cfg = SynthConfig(
        seed=9, n_universities=61,
        sds_spec=tuple((f"CHIM/{i:02d}", "3") for i in range(1, 13)),
        professors_per_sds=(2, 7), pubs_per_professor=4.0,
        citation_dispersion=1.0, quantity_impact_corr=0.5,
        salary_levels=(("assistant", 45000.0), ("associate", 60000.0),
                       ("full", 80000.0)),
        window=ObservationWindow(2008, 2012, "synthetic snapshot"))
    corpus = generate(cfg)
    assert len(corpus.professors) == pytest.approx(3174, rel=0.15)
    filtered = apply_filters(corpus, FilterConfig())
    table = compute_scaling_factors(filtered)
    for level in ("sds", "uda", "overall"):
        board_set = scoreboards(filtered, table, level, FilterConfig())
        assert board_set.pairs, level
        for pair in board_set.pairs.values():
            assert pair.fss.unit_ids() == pair.mncs.unit_ids()


# ---------------------------------------------------------------------------
# Config validation

@pytest.mark.parametrize("overrides", [
    {"n_universities": 0},
    {"sds_spec": ()},
    {"professors_per_sds": (5, 2)},
    {"pubs_per_professor": -1.0},
    {"citation_dispersion": 0.0},
    {"quantity_impact_corr": 1.0},
    {"salary_levels": ()},
    {"salary_levels": (("assistant", 0.0),)},
])
def test_invalid_config_rejected(overrides):
    with pytest.raises(SynthConfigError):
        small_cfg(**overrides)


def test_config_from_json(tmp_path):
    payload = {
        "seed": 3,
        "n_universities": 4,
        "sds": [{"sds": "SDS/01", "uda": "1"}, {"sds": "SDS/02", "uda": "2"}],
        "professors_per_sds": [2, 4],
        "pubs_per_professor": 5.0,
        "citation_dispersion": 1.0,
        "quantity_impact_corr": 0.4,
        "salaries": {"assistant": 45000, "full": 80000},
        "window": {"start_year": 2008, "end_year": 2012, "label": "synth"},
    }
    path = tmp_path / "synth.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    cfg = SynthConfig.from_json(path)
    assert cfg.seed == 3
    assert cfg.sds_spec == (("SDS/01", "1"), ("SDS/02", "2"))
    assert cfg.window.n_years == 5


def test_config_from_json_errors(tmp_path):
    path = tmp_path / "synth.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SynthConfigError, match="invalid JSON"):
        SynthConfig.from_json(path)
    path.write_text(json.dumps({"seed": 1}), encoding="utf-8")
    with pytest.raises(SynthConfigError, match="bad synth config"):
        SynthConfig.from_json(path)
