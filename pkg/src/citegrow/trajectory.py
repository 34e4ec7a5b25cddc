"""Citation-trajectory classification.

A node's yearly citation counts, normalized by their maximum, are scanned
for peaks: local maxima whose normalized height reaches the peak
threshold. Two peaks are distinct only if the profile dips below the
threshold somewhere between them. The category rules, applied in order:

  other (ot)          mean yearly citations below 1
  steady riser (sr)   counts never decrease and end above where they began
  early riser (er)    a single peak inside the activation period
  frequent riser (fr) two or more distinct peaks
  late riser (lr)     a single peak after the activation period that is
                      not the final year
  other (ot)          anything else (e.g. still rising at the horizon)

Categories depend only on the shape of the trajectory: scaling every count
by a constant cannot change the outcome (except through the mean rule).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .graph import GrowthGraph

__all__ = [
    "TrajectoryCategory",
    "CATEGORY_ORDER",
    "ClassifierParams",
    "CategoryDistribution",
    "normalize_trajectory",
    "detect_peaks",
    "classify",
    "classify_graph",
    "category_distribution",
    "write_classification_csv",
]


class TrajectoryCategory(Enum):
    EARLY_RISER = "er"
    FREQUENT_RISER = "fr"
    LATE_RISER = "lr"
    STEADY_RISER = "sr"
    OTHER = "ot"

    @property
    def code(self) -> str:
        return self.value


CATEGORY_ORDER = (
    TrajectoryCategory.EARLY_RISER,
    TrajectoryCategory.FREQUENT_RISER,
    TrajectoryCategory.LATE_RISER,
    TrajectoryCategory.STEADY_RISER,
    TrajectoryCategory.OTHER,
)
_CAT_INDEX = {cat: i for i, cat in enumerate(CATEGORY_ORDER)}


@dataclass(frozen=True)
class ClassifierParams:
    """Knobs of the trajectory classifier.

    activation_period: years after publication that count as "early".
    peak_threshold: minimum normalized height of a peak, in (0, 1].
    min_history_years: shortest trajectory the classifier accepts.
    """

    activation_period: int = 5
    peak_threshold: float = 0.75
    min_history_years: int = 10

    def __post_init__(self):
        if self.activation_period < 1:
            raise ValidationError(f"activation period must be >= 1, got {self.activation_period}")
        if not 0.0 < self.peak_threshold <= 1.0:
            raise ValidationError(f"peak threshold must be in (0, 1], got {self.peak_threshold}")
        if self.min_history_years < 1:
            raise ValidationError(f"min history must be >= 1, got {self.min_history_years}")


def normalize_trajectory(counts) -> tuple[np.ndarray, bool]:
    """Scale counts by their maximum into [0, 1].

    Returns (normalized, degenerate); an all-zero history is degenerate
    and comes back unchanged.
    """
    c = np.asarray(counts, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise ValidationError("trajectory must be a non-empty 1-D sequence")
    if c.min() < 0:
        raise ValidationError("trajectory counts must be non-negative")
    peak = c.max()
    if peak == 0.0:
        return c.copy(), True
    return c / peak, False


def detect_peaks(counts, normalized, threshold: float) -> list[int]:
    """Offsets of distinct peaks, in increasing order.

    A candidate offset is a local maximum (strictly above its left
    neighbor, at least its right neighbor; boundary offsets drop the
    missing side) whose normalized value reaches `threshold`. The strict
    left edge keeps only the earliest offset of a plateau. A candidate
    after the first is kept only if some offset between it and the last
    kept peak falls below the threshold.
    """
    c = np.asarray(counts, dtype=np.float64)
    z = np.asarray(normalized, dtype=np.float64)
    if c.shape != z.shape or c.ndim != 1 or c.size == 0:
        raise ValidationError("counts and normalized must be matching non-empty 1-D arrays")
    last = c.size - 1
    peaks: list[int] = []
    for t in range(c.size):
        if z[t] < threshold:
            continue
        if t > 0 and not c[t] > c[t - 1]:
            continue
        if t < last and not c[t] >= c[t + 1]:
            continue
        if peaks:
            between = z[peaks[-1] + 1:t]
            if not np.any(between < threshold):
                continue
        peaks.append(t)
    return peaks


def classify(counts, params: ClassifierParams = ClassifierParams()) -> TrajectoryCategory:
    """Assign one trajectory to a category. See the module docstring for
    the decision order."""
    c = np.asarray(counts, dtype=np.float64)
    if c.ndim != 1:
        raise ValidationError("trajectory must be 1-D")
    if c.size < params.min_history_years:
        raise ValidationError(
            f"trajectory has {c.size} years of history, classifier needs "
            f">= {params.min_history_years}")
    if c.min() < 0:
        raise ValidationError("trajectory counts must be non-negative")

    if c.mean() < 1.0:
        return TrajectoryCategory.OTHER
    if np.all(np.diff(c) >= 0) and c[-1] > c[0]:
        return TrajectoryCategory.STEADY_RISER
    normalized, degenerate = normalize_trajectory(c)
    if degenerate:
        return TrajectoryCategory.OTHER
    peaks = detect_peaks(c, normalized, params.peak_threshold)
    if len(peaks) >= 2:
        return TrajectoryCategory.FREQUENT_RISER
    if len(peaks) == 1:
        t = peaks[0]
        if t < params.activation_period:
            return TrajectoryCategory.EARLY_RISER
        if t != c.size - 1:
            return TrajectoryCategory.LATE_RISER
    return TrajectoryCategory.OTHER


@dataclass(frozen=True)
class CategoryDistribution:
    """Category proportions in canonical order (er, fr, lr, sr, ot).

    `counts` is present for distributions measured on a graph and None for
    external reference distributions given as proportions only.
    """

    proportions: np.ndarray
    counts: np.ndarray | None = None

    def __post_init__(self):
        p = np.array(self.proportions, dtype=np.float64)
        if p.shape != (5,):
            raise ValidationError("proportions must have one entry per category")
        if p.min() < 0:
            raise ValidationError("proportions must be non-negative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValidationError(f"proportions must sum to 1, got {p.sum()!r}")
        p.flags.writeable = False
        object.__setattr__(self, "proportions", p)
        if self.counts is not None:
            c = np.array(self.counts, dtype=np.int64)
            if c.shape != (5,) or c.min() < 0:
                raise ValidationError("counts must be five non-negative integers")
            c.flags.writeable = False
            object.__setattr__(self, "counts", c)

    @classmethod
    def from_counts(cls, counts) -> "CategoryDistribution":
        c = np.array(counts, dtype=np.int64)
        total = c.sum()
        if total <= 0:
            raise ValidationError("cannot build a distribution from zero classified nodes")
        return cls(proportions=c / total, counts=c)

    @classmethod
    def from_proportions(cls, values, normalize: bool = False) -> "CategoryDistribution":
        p = np.array(values, dtype=np.float64)
        if normalize:
            total = p.sum()
            if total <= 0:
                raise ValidationError("proportions must have a positive sum")
            p = p / total
        return cls(proportions=p)

    def proportion(self, category) -> float:
        return float(self.proportions[_CAT_INDEX[TrajectoryCategory(category)]])

    def count(self, category) -> int:
        if self.counts is None:
            raise ValidationError("this distribution carries no counts")
        return int(self.counts[_CAT_INDEX[TrajectoryCategory(category)]])

    def as_json_dict(self) -> dict:
        out = {cat.code: round(float(p), 6)
               for cat, p in zip(CATEGORY_ORDER, self.proportions)}
        if self.counts is not None:
            out["counts"] = {cat.code: int(c)
                             for cat, c in zip(CATEGORY_ORDER, self.counts)}
        return out

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.as_json_dict(), indent=2, sort_keys=True) + "\n",
                              encoding="utf-8")

    @classmethod
    def from_json(cls, path) -> "CategoryDistribution":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        try:
            values = [float(data[cat.code]) for cat in CATEGORY_ORDER]
        except KeyError as exc:
            raise ValidationError(f"distribution file is missing category key {exc}") from None
        counts = None
        if "counts" in data:
            counts = [int(data["counts"][cat.code]) for cat in CATEGORY_ORDER]
        # accept percentages as well as proportions
        dist = cls.from_proportions(values, normalize=True)
        if counts is not None:
            dist = cls(proportions=dist.proportions, counts=counts)
        return dist


# -- graph-level classification ----------------------------------------------

def _history_matrix(graph: GrowthGraph, horizon_year: int) -> np.ndarray:
    """(n_nodes, max_offset+1) matrix of citation counts by year offset,
    counting only citations from papers published up to the horizon."""
    n = graph.n_nodes
    width = int(horizon_year) - int(graph.years.min()) + 1
    hist = np.zeros((n, max(width, 1)), dtype=np.int64)
    if graph.n_edges:
        citing_years = graph.years[graph.edges[:, 0]]
        keep = citing_years <= horizon_year
        cited = graph.edges[keep, 1]
        offsets = citing_years[keep] - graph.years[cited]
        np.add.at(hist, (cited, offsets), 1)
    return hist


def _classify_all(graph: GrowthGraph, cutoff_year: int, horizon_year: int,
                  params: ClassifierParams,
                  hist: np.ndarray | None = None):
    """Classify every non-seed node published up to the cutoff. Returns
    (ids, years, categories)."""
    cutoff = int(cutoff_year)
    horizon = int(horizon_year)
    if horizon - cutoff < params.min_history_years - 1:
        raise ValidationError(
            f"window too short: horizon {horizon} gives nodes at cutoff {cutoff} only "
            f"{horizon - cutoff + 1} years of history, classifier needs "
            f">= {params.min_history_years}")
    ids = np.nonzero(graph.years[graph.n_seed:] <= cutoff)[0] + graph.n_seed
    if ids.size == 0:
        raise ValidationError(
            f"no non-seed nodes published up to {cutoff}; nothing to classify")
    if hist is None:
        hist = _history_matrix(graph, horizon)
    years = graph.years
    cats = []
    for i in ids:
        length = horizon - int(years[i]) + 1
        cats.append(classify(hist[i, :length], params))
    return ids, years[ids], cats


def classify_graph(graph: GrowthGraph, cutoff_year: int, horizon_year: int,
                   params: ClassifierParams = ClassifierParams()):
    """Per-node categories as (node_id, year, category) rows."""
    ids, years, cats = _classify_all(graph, cutoff_year, horizon_year, params)
    return [(int(i), int(y), c) for i, y, c in zip(ids, years, cats)]


def category_distribution(graph: GrowthGraph, cutoff_year: int, horizon_year: int,
                          params: ClassifierParams = ClassifierParams()
                          ) -> CategoryDistribution:
    """Category distribution over all classified nodes of a graph."""
    _, _, cats = _classify_all(graph, cutoff_year, horizon_year, params)
    counts = np.zeros(5, dtype=np.int64)
    for c in cats:
        counts[_CAT_INDEX[c]] += 1
    return CategoryDistribution.from_counts(counts)


def write_classification_csv(rows, path) -> None:
    """Rows of (node_id, year, category) to CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_id", "year", "category"])
        for node_id, year, cat in rows:
            writer.writerow([node_id, year, cat.code])
