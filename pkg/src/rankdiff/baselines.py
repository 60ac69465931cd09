"""Citation scaling factors: the per-(year, subject category) normalization
baselines shared by both indicators.

A cell's scaling factor is the mean citation count over the *cited*
publications of that year and category in the national corpus. Uncited
publications never enter a cell mean; a cell with no cited publication
simply does not exist.
"""
from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Publication
from .errors import MissingBaseline

log = logging.getLogger("rankdiff.baselines")


@dataclass(frozen=True)
class CellStats:
    mean: float
    cited_count: int
    total_count: int


class ScalingFactorTable:
    """Immutable map (year, subject_category) -> CellStats."""

    def __init__(self, cells: dict[tuple[int, str], CellStats]):
        for key, stats in cells.items():
            if stats.cited_count < 1 or stats.mean <= 0:
                raise ValueError(f"cell {key} must contain >= 1 cited publication")
        self._cells = dict(cells)

    def cell(self, year: int, category: str) -> CellStats | None:
        return self._cells.get((year, category))

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self):
        return iter(sorted(self._cells))

    def items(self):
        return ((k, self._cells[k]) for k in sorted(self._cells))

    def digest(self) -> str:
        h = hashlib.sha256()
        for (year, cat), s in self.items():
            h.update(f"{year}|{cat}|{s.mean!r}|{s.cited_count}|{s.total_count}\n".encode())
        return h.hexdigest()

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(["year", "category", "mean", "cited_count", "total_count"])
            for (year, cat), s in self.items():
                w.writerow([year, cat, repr(s.mean), s.cited_count, s.total_count])

    @classmethod
    def from_csv(cls, path: str | Path) -> "ScalingFactorTable":
        cells: dict[tuple[int, str], CellStats] = {}
        with open(path, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                key = (int(row["year"]), row["category"])
                cells[key] = CellStats(float(row["mean"]), int(row["cited_count"]),
                                       int(row["total_count"]))
        return cls(cells)


def compute_scaling_factors(corpus: Corpus) -> ScalingFactorTable:
    """Build the baseline table from the corpus's national population.

    A publication listed under k categories contributes to all k cells.
    """
    sums: dict[tuple[int, str], float] = {}
    cited: dict[tuple[int, str], int] = {}
    total: dict[tuple[int, str], int] = {}
    for pub in corpus.baseline_publications.values():
        for cat in pub.subject_categories:
            key = (pub.year, cat)
            total[key] = total.get(key, 0) + 1
            if pub.citations > 0:
                sums[key] = sums.get(key, 0.0) + pub.citations
                cited[key] = cited.get(key, 0) + 1
    cells = {key: CellStats(mean=sums[key] / cited[key], cited_count=cited[key],
                            total_count=total[key])
             for key in cited}
    log.info("scaling factors: %d cells from %d baseline publications",
             len(cells), len(corpus.baseline_publications))
    return ScalingFactorTable(cells)


def scaling_factor(pub: Publication, table: ScalingFactorTable) -> float:
    """The publication's citation baseline; multi-category publications get
    the arithmetic mean of their per-category cell means."""
    means = []
    for cat in pub.subject_categories:
        stats = table.cell(pub.year, cat)
        if stats is None:
            raise MissingBaseline(
                f"no baseline for publication {pub.pub_id} "
                f"(year {pub.year}, category {cat!r})")
        means.append(stats.mean)
    return sum(means) / len(means)


def normalized_impact(pub: Publication, table: ScalingFactorTable) -> float:
    """Citations divided by the scaling factor; 0 for uncited publications."""
    factor = scaling_factor(pub, table)
    if pub.citations == 0:
        return 0.0
    return pub.citations / factor
