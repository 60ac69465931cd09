"""Command-line entry point: validate, score, compare, synth.

Exit codes: 0 success, 1 validation failure, 2 configuration error. Every
run that writes output also writes a manifest recording command, config,
input digests, output files, and warnings. Log level comes from
RANKDIFF_LOG (error|warn|info|debug).
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import divergence, report
from .baselines import ScalingFactorTable, compute_scaling_factors
from .corpus import (Corpus, CorpusPaths, LEVELS, RunConfig, apply_filters,
                     load_corpus, read_config, write_corpus_csvs)
from .errors import (CorpusLoadError, RankdiffError, SynthConfigError,
                     UnitSetMismatch)
from .indicators import BOTH, FSS, MNCS, ScoreBoard, UnitScore, scoreboards
from .ranking import compare, rank
from .synth import SynthConfig, generate

log = logging.getLogger("rankdiff.cli")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2

LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    level = LOG_LEVELS.get(os.environ.get("RANKDIFF_LOG", "warn").lower(),
                           logging.WARNING)
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


class OutputDir:
    """Standard output layout with overwrite protection and a manifest."""

    def __init__(self, root: str | Path, force: bool):
        self.root = Path(root)
        if self.root.exists() and any(self.root.iterdir()) and not force:
            raise SystemExitWithCode(
                EXIT_CONFIG,
                f"output directory {self.root} is not empty; use --force")
        for sub in ("scoreboards", "comparisons", "summaries", "manifest"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self.outputs: list[str] = []
        self.warnings: list[str] = []

    def path(self, sub: str, name: str) -> Path:
        p = self.root / sub / name
        self.outputs.append(str(p.relative_to(self.root)))
        return p

    def write_manifest(self, command: str, argv: list[str],
                       config: dict | None, inputs: dict[str, str]) -> None:
        manifest = {
            "command": command,
            "argv": argv,
            "config": config,
            "inputs": inputs,
            "outputs": sorted(self.outputs),
            "warnings": self.warnings,
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }
        path = self.root / "manifest" / "run_manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")


class SystemExitWithCode(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _config_or_exit(path: str | None) -> RunConfig:
    if path is None:
        raise SystemExitWithCode(EXIT_CONFIG,
                                 "--config is required for corpus commands")
    try:
        return read_config(path)
    except (OSError, ValueError) as exc:
        raise SystemExitWithCode(EXIT_CONFIG, f"bad config: {exc}") from exc


def _load_filtered(data_dir: str, run_cfg: RunConfig,
                   baseline_include_all: bool) -> Corpus:
    cfg = run_cfg.filters
    if baseline_include_all and not cfg.baseline_include_all_doctypes:
        cfg = dataclasses.replace(cfg, baseline_include_all_doctypes=True)
    corpus = load_corpus(data_dir, run_cfg.window)
    return apply_filters(corpus, cfg)


def _config_snapshot(run_cfg: RunConfig) -> dict:
    return {
        "window": {"start_year": run_cfg.window.start_year,
                   "end_year": run_cfg.window.end_year,
                   "label": run_cfg.window.citation_snapshot_label},
        "filters": {
            "min_years_on_staff": run_cfg.filters.min_years_on_staff,
            "excluded_doc_types": sorted(run_cfg.filters.excluded_doc_types),
            "min_professors_sds": run_cfg.filters.min_professors_sds,
            "min_professors_uda": run_cfg.filters.min_professors_uda,
            "min_professors_overall": run_cfg.filters.min_professors_overall,
            "min_units_to_rank": run_cfg.filters.min_units_to_rank,
            "baseline_include_all_doctypes":
                run_cfg.filters.baseline_include_all_doctypes,
        },
    }


def _input_digests(data_dir: str) -> dict[str, str]:
    return {str(p): _sha256(p) for p in CorpusPaths.from_dir(data_dir).all()
            if p.exists()}


# ---------------------------------------------------------------------------
# Subcommands

def cmd_validate(args: argparse.Namespace) -> int:
    run_cfg = _config_or_exit(args.config)
    try:
        corpus = load_corpus(args.data_dir, run_cfg.window)
    except CorpusLoadError as exc:
        print(f"INVALID: {len(exc.violations)} violation(s)")
        for v in exc.violations:
            print(f"  {v}")
        return EXIT_VALIDATION
    print("VALID")
    for entity, count in corpus.counts().items():
        print(f"  {entity}: {count}")
    return EXIT_OK


def _baseline_table(args: argparse.Namespace, corpus: Corpus,
                    out: OutputDir) -> ScalingFactorTable:
    if getattr(args, "baselines", None):
        table = ScalingFactorTable.from_csv(args.baselines)
        log.info("baselines imported from %s (%d cells)", args.baselines,
                 len(table))
    else:
        table = compute_scaling_factors(corpus)
    if getattr(args, "export_baselines", False):
        table.to_csv(out.path("summaries", "baselines.csv"))
    return table


def cmd_score(args: argparse.Namespace) -> int:
    run_cfg = _config_or_exit(args.config)
    try:
        corpus = _load_filtered(args.data_dir, run_cfg,
                                args.baseline_include_all_doctypes)
    except CorpusLoadError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    out = OutputDir(args.out, args.force)
    table = _baseline_table(args, corpus, out)
    board_set = scoreboards(corpus, table, args.level, run_cfg.filters,
                            args.indicator)
    out.warnings.extend(board_set.warnings)
    if not board_set.pairs:
        out.warnings.append(f"no eligible units at {args.level} level")
    for scope, pair in board_set.pairs.items():
        boards = [b for b in (pair.fss, pair.mncs) if b is not None]
        name = f"scoreboard_{args.level}_{_slug(scope)}.csv"
        report.write_scoreboard_csv(boards, out.path("scoreboards", name))
    if board_set.not_rankable:
        out.warnings.append(
            "not rankable: " + ", ".join(str(s) for s in board_set.not_rankable))
    out.write_manifest("score", sys.argv[1:], _config_snapshot(run_cfg),
                       _input_digests(args.data_dir))
    print(f"wrote {len(board_set.pairs)} scope scoreboard(s) to {out.root}")
    return EXIT_OK


def _slug(scope: str | None) -> str:
    return "overall" if scope is None else scope.replace("/", "_")


def _compare_pair(pair_label: str, fss_board: ScoreBoard,
                  mncs_board: ScoreBoard, staff: dict[str, int] | None,
                  out: OutputDir, level: str):
    ranked_f = rank(fss_board)
    ranked_m = rank(mncs_board)
    cmp = compare(ranked_f, ranked_m, staff=staff, label=pair_label)
    report.write_comparison_csv(
        cmp, out.path("comparisons", f"comparison_{level}_{_slug(pair_label)}.csv"))
    return cmp


def cmd_compare(args: argparse.Namespace) -> int:
    if args.from_scores:
        return _compare_from_scores(args)
    if not args.data_dir:
        raise SystemExitWithCode(EXIT_CONFIG,
                                 "either DATA_DIR or --from-scores is required")
    run_cfg = _config_or_exit(args.config)
    try:
        corpus = _load_filtered(args.data_dir, run_cfg,
                                args.baseline_include_all_doctypes)
    except CorpusLoadError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    out = OutputDir(args.out, args.force)
    table = _baseline_table(args, corpus, out)
    board_set = scoreboards(corpus, table, args.level, run_cfg.filters, BOTH)
    out.warnings.extend(board_set.warnings)
    if not board_set.pairs:
        out.warnings.append(f"no eligible units at {args.level} level")

    comparisons = []
    shift_summaries = []
    quartile_summaries = []
    dispersions = []
    for scope, pair in board_set.pairs.items():
        assert pair.fss is not None and pair.mncs is not None
        if not pair.fss.entries:
            out.warnings.append(f"scope {scope}: no units with both scores")
            continue
        if len(pair.fss.entries) < 2:
            out.warnings.append(f"scope {scope}: single unit, excluded from "
                                f"percentile/quartile analytics")
            continue
        staff = {e.university_id: e.research_staff for e in pair.fss.entries}
        label = scope if scope is not None else "overall"
        cmp = _compare_pair(label, pair.fss, pair.mncs, staff, out, args.level)
        comparisons.append(cmp)
        summary = divergence.shift_stats(cmp)
        shift_summaries.append(summary)
        if summary.pearson is None:
            out.warnings.append(f"scope {scope}: correlations omitted "
                                f"(fewer than 3 units or degenerate variance)")
        quartile_summaries.append(divergence.quartile_stats(cmp))
        if len(pair.fss.entries) >= 2:
            dispersions.append(divergence.dispersion(pair.fss))
            dispersions.append(divergence.dispersion(pair.mncs))
    report.write_shift_summary_csv(
        shift_summaries, out.path("summaries", f"shift_summary_{args.level}.csv"))
    report.write_quartile_summary_csv(
        quartile_summaries,
        out.path("summaries", f"quartile_summary_{args.level}.csv"))
    report.write_dispersion_csv(
        dispersions, out.path("summaries", f"dispersion_{args.level}.csv"))

    ranges = []
    if args.level == "sds":
        by_uda: dict[str, list] = {}
        for summary in shift_summaries:
            sds_code = summary.scope_code
            uda = corpus.field_scheme.uda_of(sds_code)
            by_uda.setdefault(uda, []).append(summary)
        ranges = [divergence.range_summary(group, uda)
                  for uda, group in sorted(by_uda.items())]
        report.write_range_summary_csv(
            ranges, out.path("summaries", "range_summary_sds.csv"))

    md = report.render_report(f"FSS vs MNCS comparison ({args.level} level)",
                              comparisons, shift_summaries,
                              quartile_summaries, dispersions, ranges)
    out.path("comparisons", "report.md").write_text(md, encoding="utf-8")
    out.write_manifest("compare", sys.argv[1:], _config_snapshot(run_cfg),
                       _input_digests(args.data_dir))
    print(f"compared {len(comparisons)} scope(s); outputs in {out.root}")
    return EXIT_OK


def _read_scores_csv(path: Path) -> tuple[ScoreBoard, ScoreBoard]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        required = {"unit", "fss_score", "mncs_score"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise SystemExitWithCode(
                EXIT_CONFIG,
                f"{path}: need columns unit,fss_score,mncs_score")
        fss_entries = []
        mncs_entries = []
        seen: set[str] = set()
        for i, row in enumerate(reader, start=2):
            unit = row["unit"].strip()
            if not unit or unit in seen:
                raise SystemExitWithCode(
                    EXIT_CONFIG, f"{path}:{i}: missing or duplicate unit id")
            seen.add(unit)
            try:
                fss_entries.append(UnitScore(unit, FSS, float(row["fss_score"])))
                mncs_entries.append(UnitScore(unit, MNCS,
                                              float(row["mncs_score"])))
            except ValueError as exc:
                raise SystemExitWithCode(EXIT_CONFIG,
                                         f"{path}:{i}: {exc}") from exc
    if not fss_entries:
        raise SystemExitWithCode(EXIT_CONFIG, f"{path}: no score rows")
    provenance = {"source": str(path), "sha256": _sha256(path)}
    return (ScoreBoard("replay", None, FSS, fss_entries, provenance),
            ScoreBoard("replay", None, MNCS, mncs_entries, provenance))


def _compare_from_scores(args: argparse.Namespace) -> int:
    path = Path(args.from_scores)
    if not path.exists():
        raise SystemExitWithCode(EXIT_CONFIG, f"no such file: {path}")
    fss_board, mncs_board = _read_scores_csv(path)
    out = OutputDir(args.out, args.force)
    label = args.label
    if len(fss_board.entries) < 2:
        out.warnings.append("single unit: percentile set to 100 by convention")
    try:
        cmp = _compare_pair(label, fss_board, mncs_board, None, out, "replay")
    except UnitSetMismatch as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    summary = divergence.shift_stats(cmp)
    if summary.pearson is None:
        out.warnings.append("correlations omitted (fewer than 3 units or "
                            "degenerate variance)")
    quartiles = divergence.quartile_stats(cmp)
    dispersions = []
    if len(fss_board.entries) >= 2:
        dispersions = [divergence.dispersion(fss_board),
                       divergence.dispersion(mncs_board)]
    report.write_shift_summary_csv(
        [summary], out.path("summaries", "shift_summary_replay.csv"))
    report.write_quartile_summary_csv(
        [quartiles], out.path("summaries", "quartile_summary_replay.csv"))
    report.write_dispersion_csv(
        dispersions, out.path("summaries", "dispersion_replay.csv"))
    md = report.render_report(f"FSS vs MNCS comparison (replay: {label})",
                              [cmp], [summary], [quartiles], dispersions)
    out.path("comparisons", "report.md").write_text(md, encoding="utf-8")
    out.write_manifest("compare", sys.argv[1:], None,
                       {str(path): _sha256(path)})
    print(f"compared {cmp.n} units; outputs in {out.root}")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        cfg = SynthConfig.from_json(args.config_file)
        corpus = generate(cfg)
    except SynthConfigError as exc:
        raise SystemExitWithCode(EXIT_CONFIG, str(exc)) from exc
    out = OutputDir(args.out, args.force)
    paths = write_corpus_csvs(corpus, out.root)
    out.outputs.extend(p.name for p in paths.all())
    out.write_manifest("synth", sys.argv[1:],
                       json.loads(Path(args.config_file).read_text()),
                       {str(args.config_file): _sha256(Path(args.config_file))})
    print(f"synthesized corpus: {corpus.counts()} -> {out.root}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankdiff",
        description="FSS/MNCS research-performance indicators and "
                    "ranking-divergence analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="load and validate a corpus")
    p_val.add_argument("data_dir")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="run config (key=value lines)")
        p.add_argument("--out", required=True)
        p.add_argument("--force", action="store_true",
                       help="overwrite a non-empty output directory")
        p.add_argument("--baselines",
                       help="import a pinned scaling-factor CSV instead of "
                            "recomputing")
        p.add_argument("--export-baselines", action="store_true",
                       help="write the scaling-factor table used")
        p.add_argument("--baseline-include-all-doctypes", action="store_true",
                       help="keep doc-type-excluded publications in baselines")

    p_score = sub.add_parser("score", help="compute indicator scoreboards")
    p_score.add_argument("data_dir")
    add_common(p_score)
    p_score.add_argument("--indicator", choices=[FSS, MNCS, BOTH],
                         default=BOTH)
    p_score.add_argument("--level", choices=list(LEVELS), required=True)
    p_score.set_defaults(func=cmd_score)

    p_cmp = sub.add_parser("compare",
                           help="rank both indicators and summarize divergence")
    p_cmp.add_argument("data_dir", nargs="?")
    add_common(p_cmp)
    p_cmp.add_argument("--level", choices=list(LEVELS), default="overall")
    p_cmp.add_argument("--from-scores",
                       help="replay a unit,fss_score,mncs_score CSV instead "
                            "of scoring a corpus")
    p_cmp.add_argument("--label", default="scores",
                       help="scope label for replay outputs")
    p_cmp.set_defaults(func=cmd_compare)

    p_syn = sub.add_parser("synth", help="generate a synthetic corpus")
    p_syn.add_argument("config_file")
    p_syn.add_argument("--out", required=True)
    p_syn.add_argument("--force", action="store_true")
    p_syn.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExitWithCode as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except RankdiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
