"""rankdiff: FSS/MNCS research-performance indicators and ranking-divergence
analytics over publication/staff corpora."""

from .baselines import (CellStats, ScalingFactorTable, compute_scaling_factors,
                        normalized_impact, scaling_factor)
from .corpus import (Authorship, Corpus, CorpusPaths, EligibleUnit,
                     FieldScheme, FilterConfig, FilterReport, LEVEL_OVERALL,
                     LEVEL_SDS, LEVEL_UDA, LEVELS, ObservationWindow,
                     Professor, Publication, RunConfig, apply_filters,
                     eligible_units, load_corpus, read_config, scope_codes,
                     write_corpus_csvs)
from .divergence import (DispersionStats, DivergenceSummary, QuartileSummary,
                         RangeSummary, average_ranks, dispersion, pearson,
                         quartile_stats, range_summary, shift_stats, spearman)
from .errors import (CorpusLoadError, DegeneratePopulation,
                     DegenerateVariance, EmptyBoard, MissingBaseline,
                     MissingSalary, NonPositiveTenure, NoProductiveProfessors,
                     NoPublications, NoRankableSds, RankdiffError,
                     ScopeNotRankable, SynthConfigError, UnitSetMismatch,
                     Violation, ZeroMean)
from .indicators import (BOTH, FSS, MNCS, ProfessorScore, ScoreBoard,
                         ScoreboardSet, ScopePair, UnitScore, fss_professor,
                         fss_unit, impact_map, mncs_unit, professor_scores,
                         scoreboard, scoreboards, sds_average_fss,
                         sds_averages)
from .ranking import (ComparisonRow, ComparisonTable, RankEntry, RankedList,
                      compare, natural_key, percentile, quartile, rank,
                      round_half_away, shift_glyph)
from .synth import (SynthConfig, generate,
                    measure_quantity_impact_correlation)

__version__ = "0.1.0"
