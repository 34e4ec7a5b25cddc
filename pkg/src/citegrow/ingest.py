"""Real-dataset ingestion: TSV parsing and seed/schedule construction.

Input formats are one record per line:
  papers     <paper id> TAB <publication year>
  citations  <citing id> TAB <cited id>

Papers inside the study window are sorted by (year, id) and given dense
integer ids. Papers up to the seed end year form the seed network; each
later in-window year becomes a schedule entry whose out-degrees count the
paper's retained references. A reference is retained only when both ends
are in the window and the cited paper is strictly older, which keeps
every edge realizable during replay; forward and same-year references are
dropped and counted, never silently discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import IngestError, ValidationError
from .graph import SeedNetwork, YearSchedule

__all__ = [
    "PaperRecord",
    "IngestConfig",
    "ParsedPapers",
    "ParsedCitations",
    "IngestResult",
    "parse_papers",
    "parse_citations",
    "build_seed_and_schedule",
]

_YEAR_MIN, _YEAR_MAX = 1800, 2100
_MALFORMED_LIMIT = 0.01


@dataclass(frozen=True)
class PaperRecord:
    id: str
    year: int


@dataclass(frozen=True)
class IngestConfig:
    """Study window: seed years, classification cutoff, citation horizon."""

    seed_start: int = 1960
    seed_end: int = 1975
    cutoff: int = 2000
    horizon: int = 2010

    def __post_init__(self):
        if not self.seed_start <= self.seed_end < self.cutoff <= self.horizon:
            raise ValidationError(
                f"years must satisfy seed_start <= seed_end < cutoff <= horizon, got "
                f"{self.seed_start}, {self.seed_end}, {self.cutoff}, {self.horizon}")


@dataclass(frozen=True)
class ParsedPapers:
    records: tuple
    malformed: int
    total_lines: int


@dataclass(frozen=True)
class ParsedCitations:
    edges: tuple
    malformed: int
    dropped_unknown: int
    dropped_self: int
    duplicates: int


def _check_malformed(kind: str, malformed: int, total: int, examples: list) -> None:
    if total and malformed / total > _MALFORMED_LIMIT:
        shown = "; ".join(examples[:5])
        raise IngestError(
            f"{malformed} of {total} {kind} lines are malformed (> 1%); "
            f"first offenders: {shown}")


def parse_papers(path) -> ParsedPapers:
    """Read a papers TSV. Malformed lines (wrong field count, non-integer
    or out-of-range year, duplicate id) are counted and skipped; more than
    1% malformed aborts."""
    p = Path(path)
    if not p.exists():
        raise IngestError(f"papers file not found: {p}")
    records: list[PaperRecord] = []
    seen: set[str] = set()
    malformed = 0
    examples: list[str] = []
    total = 0
    with open(p, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            total += 1
            fields = line.split("\t")
            ok = len(fields) == 2 and fields[0].strip()
            year = None
            if ok:
                try:
                    year = int(fields[1])
                except ValueError:
                    ok = False
            if ok and not _YEAR_MIN <= year <= _YEAR_MAX:
                ok = False
            if ok and fields[0] in seen:
                ok = False
            if not ok:
                malformed += 1
                if len(examples) < 5:
                    examples.append(f"line {lineno}: {line[:60]!r}")
                continue
            seen.add(fields[0])
            records.append(PaperRecord(id=fields[0], year=year))
    _check_malformed("paper", malformed, total, examples)
    if not records:
        raise IngestError(f"papers file {p} contains no usable records")
    return ParsedPapers(records=tuple(records), malformed=malformed, total_lines=total)


def parse_citations(path, known_ids) -> ParsedCitations:
    """Read a citations TSV. Edges naming unknown papers, self-citations
    and duplicates are dropped with counters; malformed lines follow the
    same 1% rule as papers."""
    p = Path(path)
    if not p.exists():
        raise IngestError(f"citations file not found: {p}")
    known = set(known_ids)
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    malformed = dropped_unknown = dropped_self = duplicates = 0
    examples: list[str] = []
    total = 0
    with open(p, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            total += 1
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
                malformed += 1
                if len(examples) < 5:
                    examples.append(f"line {lineno}: {line[:60]!r}")
                continue
            citing, cited = fields
            if citing == cited:
                dropped_self += 1
                continue
            if citing not in known or cited not in known:
                dropped_unknown += 1
                continue
            if (citing, cited) in seen:
                duplicates += 1
                continue
            seen.add((citing, cited))
            edges.append((citing, cited))
    _check_malformed("citation", malformed, total, examples)
    return ParsedCitations(edges=tuple(edges), malformed=malformed,
                           dropped_unknown=dropped_unknown,
                           dropped_self=dropped_self, duplicates=duplicates)


@dataclass(frozen=True)
class IngestResult:
    seed: SeedNetwork
    schedule: YearSchedule
    id_map: dict
    dropped_out_of_window: int
    dropped_forward: int
    dropped_same_year: int

    @property
    def counters(self) -> dict:
        return {
            "seed_nodes": self.seed.n_nodes,
            "seed_edges": self.seed.n_edges,
            "scheduled_nodes": self.schedule.total_nodes,
            "scheduled_edges": self.schedule.total_edges,
            "dropped_out_of_window": self.dropped_out_of_window,
            "dropped_forward": self.dropped_forward,
            "dropped_same_year": self.dropped_same_year,
        }


def build_seed_and_schedule(papers, citations,
                            config: IngestConfig = IngestConfig()) -> IngestResult:
    """Split parsed records into a seed network and a year schedule.

    `papers` is a sequence of PaperRecord, `citations` of (citing, cited)
    id pairs that already passed :func:`parse_citations`. Papers outside
    [seed_start, horizon] are ignored; their citations count as out of
    window.
    """
    records = [r for r in papers]
    in_window = [r for r in records
                 if config.seed_start <= r.year <= config.horizon]
    in_window.sort(key=lambda r: (r.year, r.id))
    if not any(r.year <= config.seed_end for r in in_window):
        raise IngestError(
            f"no papers fall in the seed years {config.seed_start}..{config.seed_end}; "
            "cannot build a seed network")
    id_map = {r.id: idx for idx, r in enumerate(in_window)}
    year_of = {r.id: r.year for r in in_window}

    seed_nodes = [(id_map[r.id], r.year) for r in in_window
                  if r.year <= config.seed_end]
    seed_edges: list[tuple[int, int]] = []
    out_counts = {r.id: 0 for r in in_window if r.year > config.seed_end}
    dropped_window = dropped_forward = dropped_same = 0

    for citing, cited in citations:
        if citing not in id_map or cited not in id_map:
            dropped_window += 1
            continue
        yc, yd = year_of[citing], year_of[cited]
        if yd > yc:
            dropped_forward += 1
            continue
        if yd == yc:
            dropped_same += 1
            continue
        if yc <= config.seed_end:
            seed_edges.append((id_map[citing], id_map[cited]))
        else:
            out_counts[citing] += 1

    entries: dict[int, list[int]] = {}
    for r in in_window:
        if r.year > config.seed_end:
            entries.setdefault(r.year, []).append(out_counts[r.id])

    return IngestResult(
        seed=SeedNetwork(nodes=tuple(seed_nodes), edges=tuple(seed_edges)),
        schedule=YearSchedule(entries),
        id_map=id_map,
        dropped_out_of_window=dropped_window,
        dropped_forward=dropped_forward,
        dropped_same_year=dropped_same,
    )
