"""Deterministic synthetic-corpus generator.

Produces corpora with the skewed count distributions typical of publication
data: per-professor output counts are gamma-mixed Poisson, citation counts
are gamma-mixed Poisson on top of per-professor propensity, and a latent
bivariate-normal copula couples a professor's expected output with their
expected citation rate so the sampled quantity-impact correlation can be
steered. Same seed, same bytes.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .baselines import ScalingFactorTable, normalized_impact
from .corpus import (Authorship, Corpus, FieldScheme, ObservationWindow,
                     Professor, Publication)
from .divergence import pearson
from .errors import MissingBaseline, SynthConfigError

log = logging.getLogger("rankdiff.synth")

DOC_TYPES = ("article", "review", "meeting abstract", "editorial material")
DOC_TYPE_WEIGHTS = (0.90, 0.04, 0.04, 0.02)
RANK_WEIGHTS = {"assistant": 0.40, "associate": 0.35, "full": 0.25}

BASE_CITATION_MEAN = 6.0
SHORT_TENURE_SHARE = 0.12
COLLAB_SHARE = 0.08
SECOND_CATEGORY_SHARE = 0.15
NATIONAL_EXTRA_SHARE = 0.40
MIN_CELL_FOR_CITED_GUARANTEE = 50
OUTPUT_MIX_SHAPE = 1.8          # gamma shape of the output-rate mixture
CITE_MIX_SHAPE = 1.0            # gamma shape of the citation-propensity mixture

# Empirical attenuation between the latent copula correlation and the
# measured count-level correlation (Poisson noise, per-publication citation
# noise, and co-authorship all dilute the coupling).
LATENT_CORR_GAIN = 1.6


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    n_universities: int
    sds_spec: tuple[tuple[str, str], ...]       # (sds_code, uda_code)
    professors_per_sds: tuple[int, int]         # inclusive range per university
    pubs_per_professor: float                   # mean count over the window
    citation_dispersion: float                  # gamma shape; smaller = heavier tail
    quantity_impact_corr: float                 # target in [0, 1)
    salary_levels: tuple[tuple[str, float], ...]
    window: ObservationWindow

    def __post_init__(self) -> None:
        if self.n_universities < 1:
            raise SynthConfigError("n_universities must be >= 1")
        if not self.sds_spec:
            raise SynthConfigError("sds_spec must name at least one SDS")
        lo, hi = self.professors_per_sds
        if lo < 0 or hi < lo:
            raise SynthConfigError(f"bad professors_per_sds range ({lo}, {hi})")
        if self.pubs_per_professor < 0:
            raise SynthConfigError("pubs_per_professor must be >= 0")
        if self.citation_dispersion <= 0:
            raise SynthConfigError("citation_dispersion must be > 0")
        if not 0 <= self.quantity_impact_corr < 1:
            raise SynthConfigError("quantity_impact_corr must be in [0, 1)")
        if not self.salary_levels:
            raise SynthConfigError("salary_levels must not be empty")
        for rank, salary in self.salary_levels:
            if salary <= 0:
                raise SynthConfigError(f"salary for rank {rank!r} must be > 0")

    @classmethod
    def from_json(cls, path: str | Path) -> "SynthConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SynthConfigError(f"{path}: invalid JSON: {exc}") from exc
        try:
            window = ObservationWindow(
                start_year=int(raw["window"]["start_year"]),
                end_year=int(raw["window"]["end_year"]),
                citation_snapshot_label=raw["window"].get("label", ""),
            )
            return cls(
                seed=int(raw["seed"]),
                n_universities=int(raw["n_universities"]),
                sds_spec=tuple((str(e["sds"]), str(e["uda"])) for e in raw["sds"]),
                professors_per_sds=(int(raw["professors_per_sds"][0]),
                                    int(raw["professors_per_sds"][1])),
                pubs_per_professor=float(raw["pubs_per_professor"]),
                citation_dispersion=float(raw["citation_dispersion"]),
                quantity_impact_corr=float(raw["quantity_impact_corr"]),
                salary_levels=tuple(sorted(
                    (str(k), float(v)) for k, v in raw["salaries"].items())),
                window=window,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SynthConfigError(f"{path}: bad synth config: {exc}") from exc


def _gamma_from_normal(z: np.ndarray, shape: float) -> np.ndarray:
    """Mean-1 gamma variates driven by standard-normal draws (copula step)."""
    u = stats.norm.cdf(z)
    # clip away exact 0/1 so ppf stays finite
    u = np.clip(u, 1e-12, 1 - 1e-12)
    return stats.gamma.ppf(u, a=shape) / shape


def generate(cfg: SynthConfig) -> Corpus:
    """Build a validated corpus from the config; deterministic per seed."""
    rng = np.random.default_rng(cfg.seed)
    window = cfg.window
    years = list(range(window.start_year, window.end_year + 1))
    n_years = len(years)

    sds_codes = [code for code, _ in cfg.sds_spec]
    scheme = FieldScheme(
        sds_to_uda={code: uda for code, uda in cfg.sds_spec},
        sds_names={code: f"Field {code}" for code, _ in cfg.sds_spec},
        uda_names={uda: f"Discipline {uda}" for _, uda in cfg.sds_spec},
    )
    salary_table = dict(cfg.salary_levels)
    ranks = sorted(salary_table)
    rank_p = np.array([RANK_WEIGHTS.get(r, 1.0) for r in ranks])
    rank_p = rank_p / rank_p.sum()

    # one primary subject category per SDS; citation behavior varies by field
    category_of = {code: f"CAT_{code.replace('/', '_')}" for code in sds_codes}
    cat_factor = {category_of[code]: float(f)
                  for code, f in zip(sds_codes,
                                     rng.lognormal(0.0, 0.4, len(sds_codes)))}
    yr_factor = {y: 1.0 - 0.45 * i / max(1, n_years - 1)
                 for i, y in enumerate(years)}

    universities = [f"UNIV_{i:03d}" for i in range(1, cfg.n_universities + 1)]

    professors: dict[str, Professor] = {}
    prof_sds: dict[str, list[str]] = {code: [] for code in sds_codes}
    lo, hi = cfg.professors_per_sds
    pid = 0
    for univ in universities:
        for code in sds_codes:
            for _ in range(int(rng.integers(lo, hi + 1))):
                pid += 1
                name = f"PROF_{pid:05d}"
                rank_name = ranks[int(rng.choice(len(ranks), p=rank_p))]
                if rng.random() < SHORT_TENURE_SHARE:
                    tenure = round(float(rng.uniform(1.0, n_years)), 1)
                else:
                    tenure = float(n_years)
                professors[name] = Professor(name, univ, code, rank_name, tenure)
                prof_sds[code].append(name)

    prof_ids = sorted(professors)
    n_prof = len(prof_ids)

    # latent copula: output propensity and citation propensity per professor
    latent_r = min(0.995, LATENT_CORR_GAIN * cfg.quantity_impact_corr)
    cov = np.array([[1.0, latent_r], [latent_r, 1.0]])
    uv = rng.multivariate_normal(np.zeros(2), cov, size=n_prof,
                                 method="cholesky")
    out_mult = _gamma_from_normal(uv[:, 0], shape=OUTPUT_MIX_SHAPE)
    cite_mult = _gamma_from_normal(uv[:, 1], shape=CITE_MIX_SHAPE)
    pub_counts = rng.poisson(cfg.pubs_per_professor * out_mult)

    publications: dict[str, Publication] = {}
    authorships: list[Authorship] = []
    pub_no = 0
    for idx, name in enumerate(prof_ids):
        prof = professors[name]
        pool = prof_sds[prof.sds_code]
        same_uda = [c for c in sds_codes
                    if scheme.uda_of(c) == scheme.uda_of(prof.sds_code)]
        for _ in range(int(pub_counts[idx])):
            pub_no += 1
            pub_id = f"PUB_{pub_no:06d}"
            year = int(rng.choice(years))
            doc_type = DOC_TYPES[int(rng.choice(len(DOC_TYPES),
                                                p=DOC_TYPE_WEIGHTS))]
            primary = category_of[prof.sds_code]
            cats = [primary]
            if len(same_uda) > 1 and rng.random() < SECOND_CATEGORY_SHARE:
                other = [category_of[c] for c in same_uda
                         if category_of[c] != primary]
                cats.append(str(rng.choice(other)))
            authors = [name]
            if len(pool) > 1 and rng.random() < COLLAB_SHARE:
                others = [p for p in pool if p != name]
                k = int(rng.integers(1, min(3, len(others)) + 1))
                picked = rng.choice(len(others), size=k, replace=False)
                authors += [others[i] for i in sorted(picked)]
            externals = int(rng.poisson(3.0))
            n_authors = len(authors) + externals
            mean_c = (BASE_CITATION_MEAN * cite_mult[idx]
                      * cat_factor[primary] * yr_factor[year])
            noise = float(rng.gamma(cfg.citation_dispersion,
                                    1.0 / cfg.citation_dispersion))
            citations = int(rng.poisson(mean_c * noise))
            publications[pub_id] = Publication(pub_id, year, doc_type,
                                               tuple(cats), citations, n_authors)
            for author in authors:
                authorships.append(Authorship(pub_id, author))

    # extra national publications with no university author: they widen the
    # baseline population the way non-academic national output would
    n_extra = int(NATIONAL_EXTRA_SHARE * len(publications))
    mean_cite_mult = float(np.mean(cite_mult)) if n_prof else 1.0
    for _ in range(n_extra):
        pub_no += 1
        pub_id = f"PUB_{pub_no:06d}"
        year = int(rng.choice(years))
        code = str(rng.choice(sds_codes))
        cat = category_of[code]
        mean_c = BASE_CITATION_MEAN * mean_cite_mult * cat_factor[cat] * yr_factor[year]
        noise = float(rng.gamma(cfg.citation_dispersion,
                                1.0 / cfg.citation_dispersion))
        citations = int(rng.poisson(mean_c * noise))
        n_authors = 1 + int(rng.poisson(3.0))
        publications[pub_id] = Publication(pub_id, year, "article", (cat,),
                                           citations, n_authors)

    _ensure_cited_cells(publications, rng)

    corpus = Corpus(window, publications, authorships, professors, scheme,
                    salary_table)
    log.info("synthesized corpus (seed %d): %s", cfg.seed, corpus.counts())
    return corpus


def _ensure_cited_cells(publications: dict[str, Publication],
                        rng: np.random.Generator) -> None:
    """Any heavily populated (year, category) cell must hold a cited record."""
    cells: dict[tuple[int, str], list[str]] = {}
    cited: set[tuple[int, str]] = set()
    for pub_id in sorted(publications):
        pub = publications[pub_id]
        for cat in pub.subject_categories:
            key = (pub.year, cat)
            cells.setdefault(key, []).append(pub_id)
            if pub.citations > 0:
                cited.add(key)
    for key in sorted(cells, key=lambda k: (k[0], k[1])):
        if len(cells[key]) >= MIN_CELL_FOR_CITED_GUARANTEE and key not in cited:
            pub_id = cells[key][int(rng.integers(len(cells[key])))]
            pub = publications[pub_id]
            publications[pub_id] = Publication(
                pub.pub_id, pub.year, pub.doc_type, pub.subject_categories,
                1 + int(rng.poisson(2.0)), pub.n_authors_total)
            log.info("cell %s had no cited publication; re-drew %s", key, pub_id)


def measure_quantity_impact_correlation(corpus: Corpus,
                                        table: ScalingFactorTable) -> float:
    """Pearson between per-professor output count and mean normalized impact,
    over professors with at least one normalizable publication."""
    counts = []
    impacts = []
    for pid in sorted(corpus.professors):
        pub_ids = corpus.pubs_by_professor.get(pid, [])
        values = []
        for pub_id in pub_ids:
            try:
                values.append(normalized_impact(corpus.publications[pub_id],
                                                table))
            except MissingBaseline:
                continue
        if values:
            counts.append(len(pub_ids))
            impacts.append(sum(values) / len(values))
    return pearson(counts, impacts)
