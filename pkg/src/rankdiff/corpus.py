"""Publication/staff corpus: loading, validation, filtering, unit eligibility.

The corpus is a closed world: publications, authorships linking them to
professors, professors assigned to exactly one SDS within a university, a
field scheme grouping SDSs into UDAs, and a salary table keyed by academic
rank. Everything downstream (baselines, indicators, rankings) reads from a
validated, filtered Corpus and never mutates it.
"""
from __future__ import annotations

import csv
import hashlib
import logging
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path

from .errors import CorpusLoadError, Violation

log = logging.getLogger("rankdiff.corpus")

LEVEL_SDS = "sds"
LEVEL_UDA = "uda"
LEVEL_OVERALL = "overall"
LEVELS = (LEVEL_SDS, LEVEL_UDA, LEVEL_OVERALL)

DEFAULT_EXCLUDED_DOC_TYPES = frozenset(
    {"editorial material", "meeting abstract", "reply to letter"}
)

MAX_VIOLATIONS = 100


@dataclass(frozen=True)
class ObservationWindow:
    start_year: int
    end_year: int
    citation_snapshot_label: str = ""

    def __post_init__(self) -> None:
        if self.end_year < self.start_year:
            raise ValueError(
                f"window end {self.end_year} precedes start {self.start_year}"
            )

    @property
    def n_years(self) -> int:
        return self.end_year - self.start_year + 1

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


@dataclass(frozen=True)
class Publication:
    pub_id: str
    year: int
    doc_type: str
    subject_categories: tuple[str, ...]
    citations: int
    n_authors_total: int


@dataclass(frozen=True)
class Authorship:
    pub_id: str
    professor_id: str


@dataclass(frozen=True)
class Professor:
    professor_id: str
    university_id: str
    sds_code: str
    academic_rank: str
    years_on_staff: float


@dataclass(frozen=True)
class FieldScheme:
    """sds_code -> (name, uda_code) plus uda_code -> name."""

    sds_to_uda: dict[str, str]
    sds_names: dict[str, str] = field(default_factory=dict)
    uda_names: dict[str, str] = field(default_factory=dict)

    def __contains__(self, sds_code: str) -> bool:
        return sds_code in self.sds_to_uda

    def uda_of(self, sds_code: str) -> str:
        return self.sds_to_uda[sds_code]

    @property
    def sds_codes(self) -> list[str]:
        return sorted(self.sds_to_uda)

    @property
    def uda_codes(self) -> list[str]:
        return sorted(set(self.sds_to_uda.values()))


@dataclass(frozen=True)
class FilterConfig:
    min_years_on_staff: float = 3.0
    excluded_doc_types: frozenset[str] = DEFAULT_EXCLUDED_DOC_TYPES
    min_professors_sds: int = 2
    min_professors_uda: int = 10
    min_professors_overall: int = 30
    min_units_to_rank: int = 5          # applies at SDS level only
    baseline_include_all_doctypes: bool = False

    def __post_init__(self) -> None:
        for f in dc_fields(self):
            if f.name in ("excluded_doc_types", "baseline_include_all_doctypes"):
                continue
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be >= 0")

    def min_professors(self, level: str) -> int:
        return {
            LEVEL_SDS: self.min_professors_sds,
            LEVEL_UDA: self.min_professors_uda,
            LEVEL_OVERALL: self.min_professors_overall,
        }[level]


@dataclass(frozen=True)
class FilterReport:
    professors_removed_tenure: int = 0
    publications_removed_doctype: int = 0
    publications_removed_window: int = 0
    authorships_removed: int = 0


@dataclass(frozen=True)
class EligibleUnit:
    university_id: str
    scope_code: str | None      # None at overall level
    professor_count: int


class Corpus:
    """Validated, immutable-by-convention snapshot of the dataset.

    ``baseline_publications`` is the national population used for citation
    baselines; after filtering it may differ from ``publications`` only when
    doc-type-excluded records are deliberately kept for baselines.
    """

    def __init__(
        self,
        window: ObservationWindow,
        publications: dict[str, Publication],
        authorships: list[Authorship],
        professors: dict[str, Professor],
        field_scheme: FieldScheme,
        salary_table: dict[str, float],
        baseline_publications: dict[str, Publication] | None = None,
        filter_report: FilterReport | None = None,
        validate: bool = True,
    ):
        self.window = window
        self.publications = publications
        self.authorships = authorships
        self.professors = professors
        self.field_scheme = field_scheme
        self.salary_table = salary_table
        self.baseline_publications = (
            publications if baseline_publications is None else baseline_publications
        )
        self.filter_report = filter_report
        if validate:
            violations = self.check()
            if violations:
                raise CorpusLoadError(violations)
        self._build_indexes()

    def _build_indexes(self) -> None:
        self.pubs_by_professor: dict[str, list[str]] = {}
        self.professors_by_pub: dict[str, list[str]] = {}
        for a in self.authorships:
            self.pubs_by_professor.setdefault(a.professor_id, []).append(a.pub_id)
            self.professors_by_pub.setdefault(a.pub_id, []).append(a.professor_id)
        self.universities = sorted({p.university_id for p in self.professors.values()})

    def check(self) -> list[Violation]:
        """Cross-reference and invariant checks; returns all violations found."""
        v: list[Violation] = []

        def add(where: str, fld: str, msg: str) -> None:
            if len(v) < MAX_VIOLATIONS:
                v.append(Violation(where, fld, msg))

        for pub in self.publications.values():
            if not pub.subject_categories:
                add(pub.pub_id, "subject_categories", "must be non-empty")
            if pub.citations < 0:
                add(pub.pub_id, "citations", "must be >= 0")
            if pub.n_authors_total < 1:
                add(pub.pub_id, "n_authors_total", "must be >= 1")
        for prof in self.professors.values():
            if prof.sds_code not in self.field_scheme:
                add(prof.professor_id, "sds_code",
                    f"unknown SDS {prof.sds_code!r}")
            if prof.academic_rank not in self.salary_table:
                add(prof.professor_id, "academic_rank",
                    f"rank {prof.academic_rank!r} missing from salary table")
            if prof.years_on_staff <= 0:
                add(prof.professor_id, "years_on_staff", "must be > 0")
            elif prof.years_on_staff > self.window.n_years:
                add(prof.professor_id, "years_on_staff",
                    f"{prof.years_on_staff} exceeds window length {self.window.n_years}")
        seen: set[tuple[str, str]] = set()
        per_pub: dict[str, int] = {}
        for a in self.authorships:
            key = (a.pub_id, a.professor_id)
            if key in seen:
                add(f"{a.pub_id}/{a.professor_id}", "authorship", "duplicate pair")
            seen.add(key)
            if a.pub_id not in self.publications:
                add(a.pub_id, "pub_id", "authorship references missing publication")
            if a.professor_id not in self.professors:
                add(a.professor_id, "professor_id",
                    "authorship references missing professor")
            per_pub[a.pub_id] = per_pub.get(a.pub_id, 0) + 1
        for pub_id, count in per_pub.items():
            pub = self.publications.get(pub_id)
            if pub is not None and count > pub.n_authors_total:
                add(pub_id, "n_authors_total",
                    f"{count} authorships exceed n_authors_total={pub.n_authors_total}")
        for salary in self.salary_table.values():
            if salary <= 0:
                add("salary_table", "avg_yearly_salary", "must be > 0")
        return v

    def counts(self) -> dict[str, int]:
        return {
            "universities": len(self.universities),
            "professors": len(self.professors),
            "publications": len(self.publications),
            "authorships": len(self.authorships),
            "sds": len(self.field_scheme.sds_to_uda),
            "uda": len(set(self.field_scheme.sds_to_uda.values())),
        }

    def digest(self) -> str:
        """Stable content hash, used for provenance stamping."""
        h = hashlib.sha256()
        h.update(f"{self.window.start_year},{self.window.end_year}".encode())
        for pid in sorted(self.publications):
            p = self.publications[pid]
            h.update(
                f"P|{p.pub_id}|{p.year}|{p.doc_type}|{'|'.join(p.subject_categories)}"
                f"|{p.citations}|{p.n_authors_total}\n".encode()
            )
        for a in sorted(self.authorships, key=lambda a: (a.pub_id, a.professor_id)):
            h.update(f"A|{a.pub_id}|{a.professor_id}\n".encode())
        for pid in sorted(self.professors):
            pr = self.professors[pid]
            h.update(
                f"R|{pr.professor_id}|{pr.university_id}|{pr.sds_code}"
                f"|{pr.academic_rank}|{pr.years_on_staff!r}\n".encode()
            )
        for code in sorted(self.field_scheme.sds_to_uda):
            h.update(f"F|{code}|{self.field_scheme.sds_to_uda[code]}\n".encode())
        for rank in sorted(self.salary_table):
            h.update(f"S|{rank}|{self.salary_table[rank]!r}\n".encode())
        return h.hexdigest()

    def professors_in_scope(self, level: str, scope_code: str | None) -> list[Professor]:
        return [p for p in self.professors.values()
                if self.in_scope(p, level, scope_code)]

    def in_scope(self, prof: Professor, level: str, scope_code: str | None) -> bool:
        if level == LEVEL_OVERALL:
            return True
        if level == LEVEL_SDS:
            return prof.sds_code == scope_code
        if level == LEVEL_UDA:
            return self.field_scheme.uda_of(prof.sds_code) == scope_code
        raise ValueError(f"unknown level {level!r}")


# ---------------------------------------------------------------------------
# CSV loading

@dataclass(frozen=True)
class CorpusPaths:
    publications: Path
    authorships: Path
    professors: Path
    fields: Path
    salaries: Path

    @classmethod
    def from_dir(cls, directory: str | Path) -> "CorpusPaths":
        d = Path(directory)
        return cls(
            publications=d / "publications.csv",
            authorships=d / "authorships.csv",
            professors=d / "professors.csv",
            fields=d / "fields.csv",
            salaries=d / "salaries.csv",
        )

    def all(self) -> list[Path]:
        return [self.publications, self.authorships, self.professors,
                self.fields, self.salaries]


def _read_rows(path: Path, expected: list[str],
               violations: list[Violation]) -> list[tuple[int, dict[str, str]]]:
    if not path.exists():
        violations.append(Violation(str(path), "-", "file not found"))
        return []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [c.strip() for c in reader.fieldnames] != expected:
            violations.append(Violation(
                f"{path.name}:1", "header",
                f"expected columns {','.join(expected)}, got "
                f"{','.join(reader.fieldnames or [])}"))
            return []
        rows = []
        for i, row in enumerate(reader, start=2):
            if None in row or any(val is None for val in row.values()):
                violations.append(Violation(f"{path.name}:{i}", "-",
                                            "wrong number of fields"))
                continue
            rows.append((i, row))
        return rows


def _parse_int(raw: str, where: str, fld: str, violations: list[Violation],
               minimum: int | None = None) -> int | None:
    try:
        value = int(raw)
    except ValueError:
        violations.append(Violation(where, fld, f"not an integer: {raw!r}"))
        return None
    if minimum is not None and value < minimum:
        violations.append(Violation(where, fld, f"must be >= {minimum}, got {value}"))
        return None
    return value


def _parse_float(raw: str, where: str, fld: str,
                 violations: list[Violation]) -> float | None:
    try:
        return float(raw)
    except ValueError:
        violations.append(Violation(where, fld, f"not a number: {raw!r}"))
        return None


def load_corpus(paths: CorpusPaths | str | Path, window: ObservationWindow) -> Corpus:
    """Load and validate the five corpus CSV files.

    Raises CorpusLoadError naming file, line and field for every violation
    found (capped); nothing is silently dropped.
    """
    if not isinstance(paths, CorpusPaths):
        paths = CorpusPaths.from_dir(paths)
    violations: list[Violation] = []

    publications: dict[str, Publication] = {}
    for line, row in _read_rows(
            paths.publications,
            ["pub_id", "year", "doc_type", "subject_categories",
             "citations", "n_authors_total"], violations):
        where = f"{paths.publications.name}:{line}"
        pub_id = row["pub_id"].strip()
        if not pub_id:
            violations.append(Violation(where, "pub_id", "empty"))
            continue
        if pub_id in publications:
            violations.append(Violation(where, "pub_id", f"duplicate key {pub_id!r}"))
            continue
        year = _parse_int(row["year"], where, "year", violations)
        cats = tuple(c.strip() for c in row["subject_categories"].split("|") if c.strip())
        if not cats:
            violations.append(Violation(where, "subject_categories", "empty list"))
        citations = _parse_int(row["citations"], where, "citations", violations, minimum=0)
        n_authors = _parse_int(row["n_authors_total"], where, "n_authors_total",
                               violations, minimum=1)
        if None in (year, citations, n_authors) or not cats:
            continue
        publications[pub_id] = Publication(
            pub_id, year, row["doc_type"].strip(), cats, citations, n_authors)

    field_rows = _read_rows(
        paths.fields, ["sds_code", "sds_name", "uda_code", "uda_name"], violations)
    sds_to_uda: dict[str, str] = {}
    sds_names: dict[str, str] = {}
    uda_names: dict[str, str] = {}
    for line, row in field_rows:
        where = f"{paths.fields.name}:{line}"
        code = row["sds_code"].strip()
        uda = row["uda_code"].strip()
        if code in sds_to_uda:
            violations.append(Violation(where, "sds_code", f"duplicate key {code!r}"))
            continue
        if uda in uda_names and uda_names[uda] != row["uda_name"].strip():
            violations.append(Violation(where, "uda_name",
                                        f"conflicting names for UDA {uda!r}"))
        sds_to_uda[code] = uda
        sds_names[code] = row["sds_name"].strip()
        uda_names[uda] = row["uda_name"].strip()
    scheme = FieldScheme(sds_to_uda, sds_names, uda_names)

    salary_table: dict[str, float] = {}
    for line, row in _read_rows(
            paths.salaries, ["academic_rank", "avg_yearly_salary"], violations):
        where = f"{paths.salaries.name}:{line}"
        rank = row["academic_rank"].strip()
        if rank in salary_table:
            violations.append(Violation(where, "academic_rank",
                                        f"duplicate key {rank!r}"))
            continue
        salary = _parse_float(row["avg_yearly_salary"], where,
                              "avg_yearly_salary", violations)
        if salary is None:
            continue
        if salary <= 0:
            violations.append(Violation(where, "avg_yearly_salary", "must be > 0"))
            continue
        salary_table[rank] = salary

    professors: dict[str, Professor] = {}
    for line, row in _read_rows(
            paths.professors,
            ["professor_id", "university_id", "sds_code", "academic_rank",
             "years_on_staff"], violations):
        where = f"{paths.professors.name}:{line}"
        pid = row["professor_id"].strip()
        if not pid:
            violations.append(Violation(where, "professor_id", "empty"))
            continue
        if pid in professors:
            violations.append(Violation(where, "professor_id",
                                        f"duplicate key {pid!r}"))
            continue
        years = _parse_float(row["years_on_staff"], where, "years_on_staff", violations)
        if years is None:
            continue
        professors[pid] = Professor(pid, row["university_id"].strip(),
                                    row["sds_code"].strip(),
                                    row["academic_rank"].strip(), years)

    authorships: list[Authorship] = []
    for line, row in _read_rows(paths.authorships,
                                ["pub_id", "professor_id"], violations):
        where = f"{paths.authorships.name}:{line}"
        pub_id = row["pub_id"].strip()
        pid = row["professor_id"].strip()
        if pub_id not in publications:
            violations.append(Violation(where, "pub_id",
                                        f"unknown publication {pub_id!r}"))
            continue
        if pid not in professors:
            violations.append(Violation(where, "professor_id",
                                        f"unknown professor {pid!r}"))
            continue
        authorships.append(Authorship(pub_id, pid))

    if violations:
        raise CorpusLoadError(violations)

    corpus = Corpus(window, publications, authorships, professors, scheme,
                    salary_table)
    n_outside = sum(1 for p in publications.values() if not window.contains(p.year))
    log.info("loaded corpus: %s (%d publications outside window, kept until filtering)",
             corpus.counts(), n_outside)
    return corpus


# ---------------------------------------------------------------------------
# Filtering and eligibility

def apply_filters(corpus: Corpus, cfg: FilterConfig) -> Corpus:
    """Drop short-tenure professors and excluded/out-of-window publications.

    Idempotent. Excluded doc types leave the baseline population too unless
    cfg.baseline_include_all_doctypes is set, in which case they stay in
    baseline_publications only.
    """
    keep_prof = {pid: p for pid, p in corpus.professors.items()
                 if p.years_on_staff >= cfg.min_years_on_staff}
    in_window = {pid: p for pid, p in corpus.publications.items()
                 if corpus.window.contains(p.year)}
    keep_pub = {pid: p for pid, p in in_window.items()
                if p.doc_type not in cfg.excluded_doc_types}
    if cfg.baseline_include_all_doctypes:
        baseline = dict(in_window)
    else:
        baseline = dict(keep_pub)
    keep_auth = [a for a in corpus.authorships
                 if a.pub_id in keep_pub and a.professor_id in keep_prof]
    report = FilterReport(
        professors_removed_tenure=len(corpus.professors) - len(keep_prof),
        publications_removed_doctype=len(in_window) - len(keep_pub),
        publications_removed_window=len(corpus.publications) - len(in_window),
        authorships_removed=len(corpus.authorships) - len(keep_auth),
    )
    log.info("filters: %s", report)
    return Corpus(corpus.window, keep_pub, keep_auth, keep_prof,
                  corpus.field_scheme, corpus.salary_table,
                  baseline_publications=baseline, filter_report=report,
                  validate=False)


def scope_codes(corpus: Corpus, level: str) -> list[str | None]:
    """Scope codes populated by at least one professor, sorted; [None] overall."""
    if level == LEVEL_OVERALL:
        return [None]
    if level == LEVEL_SDS:
        return sorted({p.sds_code for p in corpus.professors.values()})
    if level == LEVEL_UDA:
        return sorted({corpus.field_scheme.uda_of(p.sds_code)
                       for p in corpus.professors.values()})
    raise ValueError(f"unknown level {level!r}")


def eligible_units(corpus: Corpus, level: str,
                   cfg: FilterConfig) -> list[EligibleUnit]:
    """Universities meeting the per-scope headcount threshold.

    The unit is (university, scope_code); at overall level the scope code is
    None and the unit is the university itself.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    headcount: dict[tuple[str, str | None], int] = {}
    for prof in corpus.professors.values():
        if level == LEVEL_SDS:
            scope: str | None = prof.sds_code
        elif level == LEVEL_UDA:
            scope = corpus.field_scheme.uda_of(prof.sds_code)
        else:
            scope = None
        key = (prof.university_id, scope)
        headcount[key] = headcount.get(key, 0) + 1
    threshold = cfg.min_professors(level)
    return [EligibleUnit(univ, scope, n)
            for (univ, scope), n in sorted(headcount.items(),
                                           key=lambda kv: (kv[0][1] or "", kv[0][0]))
            if n >= threshold]


# ---------------------------------------------------------------------------
# CSV writing (synthesis output, corpus round-trips)

def write_corpus_csvs(corpus: Corpus, outdir: str | Path) -> CorpusPaths:
    """Serialize a corpus to the five canonical CSV files, deterministically."""
    d = Path(outdir)
    d.mkdir(parents=True, exist_ok=True)
    paths = CorpusPaths.from_dir(d)
    with open(paths.publications, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["pub_id", "year", "doc_type", "subject_categories",
                    "citations", "n_authors_total"])
        for pid in sorted(corpus.publications):
            p = corpus.publications[pid]
            w.writerow([p.pub_id, p.year, p.doc_type,
                        "|".join(p.subject_categories), p.citations,
                        p.n_authors_total])
    with open(paths.authorships, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["pub_id", "professor_id"])
        for a in sorted(corpus.authorships, key=lambda a: (a.pub_id, a.professor_id)):
            w.writerow([a.pub_id, a.professor_id])
    with open(paths.professors, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["professor_id", "university_id", "sds_code",
                    "academic_rank", "years_on_staff"])
        for pid in sorted(corpus.professors):
            p = corpus.professors[pid]
            w.writerow([p.professor_id, p.university_id, p.sds_code,
                        p.academic_rank, f"{p.years_on_staff:g}"])
    with open(paths.fields, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["sds_code", "sds_name", "uda_code", "uda_name"])
        for code in sorted(corpus.field_scheme.sds_to_uda):
            uda = corpus.field_scheme.sds_to_uda[code]
            w.writerow([code, corpus.field_scheme.sds_names.get(code, code),
                        uda, corpus.field_scheme.uda_names.get(uda, uda)])
    with open(paths.salaries, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["academic_rank", "avg_yearly_salary"])
        for rank in sorted(corpus.salary_table):
            w.writerow([rank, f"{corpus.salary_table[rank]:g}"])
    return paths


# ---------------------------------------------------------------------------
# Run configuration file (key=value lines)

@dataclass(frozen=True)
class RunConfig:
    window: ObservationWindow
    filters: FilterConfig


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def read_config(path: str | Path) -> RunConfig:
    """Parse a key=value config file into window + filter settings.

    Recognized keys: start_year, end_year, citation_snapshot_label,
    min_years_on_staff, excluded_doc_types (comma separated),
    min_professors_sds, min_professors_uda, min_professors_overall,
    min_units_to_rank, baseline_include_all_doctypes.
    """
    raw: dict[str, str] = {}
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{i}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()

    known = {"start_year", "end_year", "citation_snapshot_label",
             "min_years_on_staff", "excluded_doc_types", "min_professors_sds",
             "min_professors_uda", "min_professors_overall",
             "min_units_to_rank", "baseline_include_all_doctypes"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"{path}: unknown config keys {sorted(unknown)}")
    if "start_year" not in raw or "end_year" not in raw:
        raise ValueError(f"{path}: start_year and end_year are required")

    window = ObservationWindow(
        start_year=int(raw["start_year"]),
        end_year=int(raw["end_year"]),
        citation_snapshot_label=raw.get("citation_snapshot_label", ""),
    )
    defaults = FilterConfig()
    excluded = defaults.excluded_doc_types
    if "excluded_doc_types" in raw:
        excluded = frozenset(t.strip() for t in raw["excluded_doc_types"].split(",")
                             if t.strip())

    def flag(key: str, default: bool) -> bool:
        if key not in raw:
            return default
        value = raw[key].lower()
        if value in _TRUE:
            return True
        if value in _FALSE:
            return False
        raise ValueError(f"{path}: {key} must be boolean, got {raw[key]!r}")

    filters = FilterConfig(
        min_years_on_staff=float(raw.get("min_years_on_staff",
                                         defaults.min_years_on_staff)),
        excluded_doc_types=excluded,
        min_professors_sds=int(raw.get("min_professors_sds",
                                       defaults.min_professors_sds)),
        min_professors_uda=int(raw.get("min_professors_uda",
                                       defaults.min_professors_uda)),
        min_professors_overall=int(raw.get("min_professors_overall",
                                           defaults.min_professors_overall)),
        min_units_to_rank=int(raw.get("min_units_to_rank",
                                      defaults.min_units_to_rank)),
        baseline_include_all_doctypes=flag("baseline_include_all_doctypes", False),
    )
    return RunConfig(window=window, filters=filters)
