"""Shared builders and oracles for the test suite."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from rankdiff import (Authorship, Corpus, FieldScheme, ObservationWindow,
                      Professor, Publication, ScoreBoard, compare, rank)
from rankdiff.indicators import FSS, MNCS, UnitScore

DATA_DIR = Path(__file__).parent / "data"


def load_ref(name: str) -> list[dict[str, str]]:
    with open(DATA_DIR / name, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def boards_from_columns(units: list[str], fss_scores: list[float],
                        mncs_scores: list[float],
                        label: str = "replay") -> tuple[ScoreBoard, ScoreBoard]:
    fss = ScoreBoard("replay", label, FSS,
                     [UnitScore(u, FSS, s) for u, s in zip(units, fss_scores)])
    mncs = ScoreBoard("replay", label, MNCS,
                      [UnitScore(u, MNCS, s) for u, s in zip(units, mncs_scores)])
    return fss, mncs


def replay_compare(rows: list[dict[str, str]], label: str = "replay"):
    units = [r["unit"] for r in rows]
    fss_board, mncs_board = boards_from_columns(
        units, [float(r["fss_score"]) for r in rows],
        [float(r["mncs_score"]) for r in rows], label)
    return compare(rank(fss_board), rank(mncs_board), label=label)


# ---------------------------------------------------------------------------
# Random corpus builder for property tests

WINDOW = ObservationWindow(2008, 2012, "synthetic snapshot")


def random_corpus(rng: np.random.Generator, n_universities: int = 3,
                  n_sds: int = 2, profs_per: tuple[int, int] = (1, 3),
                  pubs_mean: float = 3.0, p_uncited: float = 0.25,
                  multi_category_share: float = 0.0,
                  densify_baselines: bool = True) -> Corpus:
    """Small structurally valid corpus with citation baselines guaranteed."""
    sds_codes = [f"S{i}" for i in range(n_sds)]
    scheme = FieldScheme({c: f"U{i // 2}" for i, c in enumerate(sds_codes)})
    salaries = {"a": float(rng.uniform(1.0, 2.0)),
                "b": float(rng.uniform(2.0, 4.0))}
    professors: dict[str, Professor] = {}
    k = 0
    for u in range(n_universities):
        for code in sds_codes:
            for _ in range(int(rng.integers(profs_per[0], profs_per[1] + 1))):
                k += 1
                professors[f"P{k:04d}"] = Professor(
                    f"P{k:04d}", f"UNIV{u + 1}", code,
                    "a" if rng.random() < 0.6 else "b",
                    float(WINDOW.n_years))
    prof_ids = sorted(professors)
    publications: dict[str, Publication] = {}
    authorships: list[Authorship] = []
    years = list(range(WINDOW.start_year, WINDOW.end_year + 1))
    w = 0
    for pid in prof_ids:
        prof = professors[pid]
        for _ in range(int(rng.poisson(pubs_mean))):
            w += 1
            pub_id = f"W{w:05d}"
            cats = [f"C_{prof.sds_code}"]
            if rng.random() < multi_category_share and n_sds > 1:
                other = f"C_{sds_codes[int(rng.integers(n_sds))]}"
                if other != cats[0]:
                    cats.append(other)
            authors = [pid]
            if len(prof_ids) > 1 and rng.random() < 0.3:
                other_pid = prof_ids[int(rng.integers(len(prof_ids)))]
                if other_pid != pid:
                    authors.append(other_pid)
            externals = int(rng.poisson(2.0))
            citations = 0 if rng.random() < p_uncited else 1 + int(rng.poisson(4.0))
            publications[pub_id] = Publication(
                pub_id, int(rng.choice(years)), "article", tuple(cats),
                citations, len(authors) + externals)
            authorships += [Authorship(pub_id, a) for a in authors]
    if densify_baselines:
        _densify(publications)
    return Corpus(WINDOW, publications, authorships, professors, scheme,
                  salaries)


def _densify(publications: dict[str, Publication]) -> None:
    """Give every referenced (year, category) cell at least one cited record."""
    uncited_cells: dict[tuple[int, str], str] = {}
    cited: set[tuple[int, str]] = set()
    for pub_id in sorted(publications):
        pub = publications[pub_id]
        for cat in pub.subject_categories:
            key = (pub.year, cat)
            if pub.citations > 0:
                cited.add(key)
            else:
                uncited_cells.setdefault(key, pub_id)
    for key, pub_id in sorted(uncited_cells.items()):
        if key in cited:
            continue
        pub = publications[pub_id]
        publications[pub_id] = Publication(pub.pub_id, pub.year, pub.doc_type,
                                           pub.subject_categories, 1,
                                           pub.n_authors_total)
        cited.add(key)


def clone_university(corpus: Corpus, university_id: str) -> Corpus:
    """Double a university: twin professors authoring duplicated publications.

    Each duplicate keeps its original citation count and total co-author
    count, so per-publication ratios are preserved while the unit's staff and
    output double.
    """
    twins = {}
    professors = dict(corpus.professors)
    for pid, prof in corpus.professors.items():
        if prof.university_id == university_id:
            twin = f"{pid}_CLONE"
            twins[pid] = twin
            professors[twin] = Professor(twin, university_id, prof.sds_code,
                                         prof.academic_rank,
                                         prof.years_on_staff)
    publications = dict(corpus.publications)
    authorships = list(corpus.authorships)
    for pub_id in sorted(corpus.publications):
        members = [p for p in corpus.professors_by_pub.get(pub_id, [])
                   if p in twins]
        if not members:
            continue
        pub = corpus.publications[pub_id]
        dup = f"{pub_id}_CLONE"
        publications[dup] = Publication(dup, pub.year, pub.doc_type,
                                        pub.subject_categories, pub.citations,
                                        pub.n_authors_total)
        authorships += [Authorship(dup, twins[p]) for p in members]
    return Corpus(corpus.window, publications, authorships, professors,
                  corpus.field_scheme, corpus.salary_table)


def add_publication(corpus: Corpus, pub: Publication,
                    author_ids: list[str]) -> Corpus:
    publications = dict(corpus.publications)
    publications[pub.pub_id] = pub
    authorships = list(corpus.authorships)
    authorships += [Authorship(pub.pub_id, a) for a in author_ids]
    return Corpus(corpus.window, publications, authorships,
                  dict(corpus.professors), corpus.field_scheme,
                  corpus.salary_table)


# ---------------------------------------------------------------------------
# Brute-force enumeration oracles

def oracle_shift_stats(fss_ranks: list[int], mncs_ranks: list[int]) -> dict:
    n = len(fss_ranks)
    shifts = [abs(f - m) for f, m in zip(fss_ranks, mncs_ranks)]
    ordered = sorted(shifts)
    mid = n // 2
    median = (ordered[mid] if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2)
    return {
        "pct_shifting": 100.0 * sum(1 for s in shifts if s) / n,
        "mean": sum(shifts) / n,
        "median": float(median),
        "max": max(shifts),
    }


def oracle_quartile_stats(fss_ranks: list[int], mncs_ranks: list[int]) -> dict:
    n = len(fss_ranks)

    def q(r: int) -> int:
        return math.ceil(4 * r / n)

    deltas = [abs(q(f) - q(m)) for f, m in zip(fss_ranks, mncs_ranks)]
    q1 = [(f, m) for f, m in zip(fss_ranks, mncs_ranks) if q(f) == 1]
    leaving = sum(1 for _, m in q1 if q(m) != 1)
    return {
        "pct_shifting": 100.0 * sum(1 for d in deltas if d) / n,
        "mean": sum(deltas) / n,
        "max": max(deltas),
        "pct_leaving_q1": 100.0 * leaving / len(q1) if q1 else 0.0,
    }


def comparison_from_ranks(fss_ranks: list[int], mncs_ranks: list[int]):
    """Build a comparison table whose rankings realize the given rank pair."""
    n = len(fss_ranks)
    units = [f"T{i}" for i in range(n)]
    fss_scores = [float(n - r + 1) for r in fss_ranks]
    mncs_scores = [float(n - r + 1) for r in mncs_ranks]
    fss_board, mncs_board = boards_from_columns(units, fss_scores, mncs_scores)
    return compare(rank(fss_board), rank(mncs_board), label="oracle")
