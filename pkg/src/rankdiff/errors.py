"""Exception types shared across the package."""
from __future__ import annotations

from dataclasses import dataclass


class RankdiffError(Exception):
    """Base class for all rankdiff errors."""


@dataclass
class Violation:
    """One validation failure, located as precisely as the input allows."""

    where: str      # "publications.csv:17" or a record id for in-memory data
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.where} [{self.field}]: {self.message}"


class CorpusLoadError(RankdiffError):
    """Raised when corpus files fail to parse or cross-validate."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        head = "; ".join(str(v) for v in violations[:3])
        more = f" (+{len(violations) - 3} more)" if len(violations) > 3 else ""
        super().__init__(f"{len(violations)} corpus violation(s): {head}{more}")


class MissingBaseline(RankdiffError):
    """A publication's (year, category) cell has no citation baseline."""


class MissingSalary(RankdiffError):
    """Professor's academic rank has no salary entry."""


class NonPositiveTenure(RankdiffError):
    """Professor's years on staff is zero or negative."""


class NoProductiveProfessors(RankdiffError):
    """An SDS has no professor with positive productivity nationally."""


class NoPublications(RankdiffError):
    """A unit has no normalizable publication in scope."""


class ScopeNotRankable(RankdiffError):
    """Too few eligible units in a scope to rank it."""


class EmptyBoard(RankdiffError):
    """A scoreboard with no entries cannot be ranked."""


class DegeneratePopulation(RankdiffError):
    """Percentiles are undefined for populations of fewer than two units."""


class UnitSetMismatch(RankdiffError):
    """Two rankings being compared do not cover the same unit set."""


class DegenerateVariance(RankdiffError):
    """Correlation undefined: one of the inputs has zero variance."""


class ZeroMean(RankdiffError):
    """Coefficient of variation undefined for a zero-mean score column."""


class NoRankableSds(RankdiffError):
    """A discipline has no rankable field to summarize."""


class SynthConfigError(RankdiffError):
    """Synthetic-corpus configuration is invalid."""
