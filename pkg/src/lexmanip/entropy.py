"""Translation entropy of graph vertices and instance-weighted entropy bands."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bigraph import SOURCE, TranslationGraph, _check_side

ZERO_BAND_LABEL = "zero"


def translation_probability(graph: TranslationGraph, v: str, u: str, side: str = SOURCE) -> float:
    """Share of ``v``'s aligned instances that link it to ``u``."""
    nbrs = graph.neighbors(v, side)
    if not nbrs:
        raise KeyError(f"{v!r} is not a {side} vertex of the graph")
    if u not in nbrs:
        raise KeyError(f"{u!r} is not a neighbor of {side} vertex {v!r}")
    return nbrs[u] / sum(nbrs.values())


def _entropy_nats(weights: Sequence[int]) -> float:
    if len(weights) == 1:
        return 0.0
    total = sum(weights)
    # fsum is correctly rounded, so vertices with the same weight multiset
    # get bit-identical entropies whatever their neighbor names
    h = -math.fsum(w / total * math.log(w / total) for w in weights)
    # rounding can push a uniform distribution a hair above log(n)
    return min(max(h, 0.0), math.log(len(weights)))


def translation_entropy(graph: TranslationGraph, v: str, side: str = SOURCE,
                        log_base: float = math.e) -> float:
    """Shannon entropy of ``v``'s normalized edge weights (natural log by default)."""
    nbrs = graph.neighbors(v, side)
    if not nbrs:
        raise KeyError(f"{v!r} is not a {side} vertex of the graph")
    h = _entropy_nats([nbrs[u] for u in sorted(nbrs)])
    return h if log_base == math.e else h / math.log(log_base)


@dataclass(frozen=True)
class EntropyRecord:
    vertex: str
    side: str
    entropy: float
    instance_count: int
    neighbor_count: int


def entropy_records(graph: TranslationGraph, side: str = SOURCE,
                    log_base: float = math.e) -> list[EntropyRecord]:
    """Per-vertex records sorted by (entropy, instance_count, vertex)."""
    _check_side(side)
    scale = 1.0 if log_base == math.e else 1.0 / math.log(log_base)
    rows = []
    for v in graph.vertices(side):
        nbrs = graph.neighbors(v, side)
        nats = _entropy_nats([nbrs[u] for u in sorted(nbrs)])
        rows.append((nats, sum(nbrs.values()), v, len(nbrs)))
    # sort on nats so the order cannot depend on the reporting base
    rows.sort()
    return [EntropyRecord(v, side, nats * scale if scale != 1.0 else nats, inst, deg)
            for nats, inst, v, deg in rows]


@dataclass(frozen=True)
class BandSpec:
    boundaries: tuple[float, ...] = (33, 67)
    zero_only: bool = False

    def __post_init__(self):
        b = tuple(self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if any(not 0 < x < 100 for x in b):
            raise ValueError("band boundaries must lie strictly between 0 and 100")
        if any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError("band boundaries must be strictly increasing")

    @property
    def labels(self) -> list[str]:
        if self.zero_only:
            return [ZERO_BAND_LABEL, "nonzero"]
        cuts = [0, *self.boundaries, 100]
        return [f"{_fmt(a)}-{_fmt(b)}" for a, b in zip(cuts, cuts[1:])]

    def band_index(self, label: str) -> int:
        labels = self.labels
        if label not in labels:
            raise ValueError(f"unknown band {label!r}; expected one of {labels}")
        return labels.index(label)


def _fmt(x) -> str:
    return str(int(x)) if float(x).is_integer() else str(x)


@dataclass(frozen=True)
class Partition:
    """Band assignment of the vertices on one side of a graph.

    ``order`` lists vertices in partition order; ``masses[k]`` is the
    instance mass of band ``k``.
    """

    side: str
    spec: BandSpec
    assignment: dict
    order: tuple
    masses: tuple

    @property
    def labels(self) -> list[str]:
        return self.spec.labels

    def band(self, k: int) -> set[str]:
        return {v for v, b in self.assignment.items() if b == k}

    def cumulative_masses(self) -> list[int]:
        out, acc = [], 0
        for m in self.masses:
            acc += m
            out.append(acc)
        return out


def partition_by_entropy(graph: TranslationGraph, side: str = SOURCE,
                         spec: BandSpec | None = None, log_base: float = math.e) -> Partition:
    """Split one side's vertices into entropy bands of roughly equal instance mass.

    Vertices are walked in ascending (entropy, instance_count, lemma) order.
    A vertex goes to the first band whose upper cut it starts below, so a
    vertex straddling a cut stays in the earlier band. With ``zero_only``,
    band 0 holds exactly the zero-entropy (degree 1) vertices. The result
    does not depend on ``log_base``; it is accepted so callers can pass their
    reporting base through unchanged.
    """
    spec = spec or BandSpec()
    records = entropy_records(graph, side, log_base)
    n_bands = 2 if spec.zero_only else len(spec.boundaries) + 1
    masses = [0] * n_bands
    assignment = {}
    total = sum(r.instance_count for r in records)
    start = 0
    for r in records:
        if spec.zero_only:
            k = 0 if r.neighbor_count == 1 else 1
        else:
            # exact comparison: start / total >= b / 100
            k = sum(1 for b in spec.boundaries if start * 100 >= Fraction(b) * total)
        assignment[r.vertex] = k
        masses[k] += r.instance_count
        start += r.instance_count
    return Partition(side, spec, assignment, tuple(r.vertex for r in records), tuple(masses))


def subgraph_by_band(graph: TranslationGraph, partition: Partition, band: int) -> TranslationGraph:
    """Keep only the band's vertices on the partitioned side, with all their edges."""
    n = len(partition.masses)
    if not 0 <= band < n:
        raise IndexError(f"band {band} out of range for {n} bands")
    members = partition.band(band)
    if partition.side == SOURCE:
        return graph.restrict(lambda s, t: s in members)
    return graph.restrict(lambda s, t: t in members)


def entropy_report_lines(graph: TranslationGraph, partition: Partition,
                         log_base: float = math.e) -> list[str]:
    """TSV rows ``vertex, side, entropy, instance_count, band`` in partition order."""
    labels = partition.labels
    lines = ["vertex\tside\tentropy\tinstance_count\tband"]
    for r in entropy_records(graph, partition.side, log_base):
        lines.append(f"{r.vertex}\t{r.side}\t{r.entropy:.6f}\t{r.instance_count}\t"
                     f"{labels[partition.assignment[r.vertex]]}")
    return lines

