"""Weighted bipartite translation graph: construction, filtering, serialization."""

from __future__ import annotations

import json
import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus_io import AlignedSentencePair
from .exceptions import FormatError, InvariantError

logger = logging.getLogger(__name__)

SOURCE = "source"
TARGET = "target"
TSV_HEADER = "source_lemma\ttarget_lemma\tweight"
SIDECAR_SUFFIX = ".json"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class EdgeData:
    """Alignment count of one lemma pair, broken down by surface forms."""

    form_counts: Mapping[tuple[str, str], int]

    def __post_init__(self):
        counts = dict(self.form_counts)
        if not counts:
            raise InvariantError("edge without any form counts")
        for forms, c in counts.items():
            if not isinstance(c, int) or isinstance(c, bool) or c < 1:
                raise InvariantError(f"form count for {forms} must be a positive integer, got {c!r}")
        object.__setattr__(self, "form_counts", counts)
        object.__setattr__(self, "_weight", sum(counts.values()))

    @property
    def weight(self) -> int:
        return self._weight


class TranslationGraph:
    """Bipartite graph between source and target lemmas.

    ``edges`` maps ``(source_lemma, target_lemma)`` to :class:`EdgeData`.
    ``reference_out_weight`` records each source vertex's outgoing weight in
    the unfiltered graph; relative filtering is measured against it so that
    repeated filtering is idempotent. The graph is treated as immutable.
    """

    def __init__(self, edges: Mapping[tuple[str, str], EdgeData] | None = None,
                 source_lang: str = "", target_lang: str = "",
                 reference_out_weight: Mapping[str, int] | None = None):
        self.edges: dict[tuple[str, str], EdgeData] = dict(edges or {})
        self.source_lang = source_lang
        self.target_lang = target_lang
        self._adj = {SOURCE: defaultdict(dict), TARGET: defaultdict(dict)}
        for (s, t), data in self.edges.items():
            if not s or not t:
                raise InvariantError("empty lemma in edge")
            w = data.weight
            self._adj[SOURCE][s][t] = w
            self._adj[TARGET][t][s] = w
        self._adj = {side: dict(adj) for side, adj in self._adj.items()}
        if reference_out_weight is None:
            reference_out_weight = {v: sum(nb.values()) for v, nb in self._adj[SOURCE].items()}
        self.reference_out_weight: dict[str, int] = dict(reference_out_weight)
        for v in self._adj[SOURCE]:
            if v not in self.reference_out_weight:
                raise InvariantError(f"no reference weight recorded for source vertex {v!r}")

    @classmethod
    def from_weights(cls, weights: Mapping[tuple[str, str], int], **kwargs) -> "TranslationGraph":
        """Graph whose surface forms coincide with the lemmas."""
        return cls({k: EdgeData({k: int(w)}) for k, w in weights.items()}, **kwargs)

    # -- structure -------------------------------------------------------

    @property
    def source_vertices(self) -> set[str]:
        return set(self._adj[SOURCE])

    @property
    def target_vertices(self) -> set[str]:
        return set(self._adj[TARGET])

    def vertices(self, side: str = SOURCE) -> set[str]:
        return set(self._adj[_check_side(side)])

    def neighbors(self, v: str, side: str = SOURCE) -> dict[str, int]:
        """Neighbor -> weight for vertex ``v`` on ``side`` (empty if absent)."""
        return dict(self._adj[_check_side(side)].get(v, {}))

    def has_vertex(self, v: str, side: str = SOURCE) -> bool:
        return v in self._adj[_check_side(side)]

    def degree(self, v: str, side: str = SOURCE) -> int:
        return len(self._adj[_check_side(side)].get(v, ()))

    def instance_count(self, v: str, side: str = SOURCE) -> int:
        return sum(self._adj[_check_side(side)].get(v, {}).values())

    def weight(self, source: str, target: str) -> int:
        data = self.edges.get((source, target))
        return 0 if data is None else data.weight

    def has_edge(self, source: str, target: str) -> bool:
        return (source, target) in self.edges

    @property
    def total_weight(self) -> int:
        return sum(d.weight for d in self.edges.values())

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TranslationGraph):
            return NotImplemented
        return (self.edges == other.edges and self.source_lang == other.source_lang
                and self.target_lang == other.target_lang
                and self.reference_out_weight == other.reference_out_weight)

    def __repr__(self) -> str:
        return (f"TranslationGraph({len(self._adj[SOURCE])} source, {len(self._adj[TARGET])} target, "
                f"{len(self.edges)} edges, weight {self.total_weight})")

    def restrict(self, keep) -> "TranslationGraph":
        """Subgraph of the edges ``(s, t)`` for which ``keep(s, t)`` holds."""
        edges = {k: d for k, d in self.edges.items() if keep(*k)}
        kept_sources = {s for s, _ in edges}
        ref = {v: w for v, w in self.reference_out_weight.items() if v in kept_sources}
        return TranslationGraph(edges, self.source_lang, self.target_lang, ref)


def _check_side(side: str) -> str:
    if side not in (SOURCE, TARGET):
        raise ValueError(f"side must be 'source' or 'target', got {side!r}")
    return side


# ---------------------------------------------------------------------------
# Construction

def count_alignments(pairs: Iterable[AlignedSentencePair]) -> Counter:
    """Tally ``(src_lemma, tgt_lemma, src_form, tgt_form)`` over aligned links."""
    counts: Counter = Counter()
    for pair in pairs:
        src, tgt = pair.source.tokens, pair.target.tokens
        for i, j in pair.alignment:
            s, t = src[i], tgt[j]
            counts[s.lemma, t.lemma, s.form, t.form] += 1
    return counts


def graph_from_counts(counts: Mapping[tuple[str, str, str, str], int], source_lang: str = "",
                      target_lang: str = "") -> TranslationGraph:
    nested: dict[tuple[str, str], dict[tuple[str, str], int]] = defaultdict(dict)
    for (sl, tl, sf, tf), c in counts.items():
        if c:
            nested[sl, tl][sf, tf] = c
    return TranslationGraph({k: EdgeData(v) for k, v in nested.items()}, source_lang, target_lang)


def build_graph(pairs: Iterable[AlignedSentencePair], source_lang: str = "",
                target_lang: str = "") -> TranslationGraph:
    """Count lemma co-alignments over a bitext.

    Each aligned link ``(i, j)`` adds one to the edge between the lemmas of
    source token ``i`` and target token ``j``, and one to the count of their
    surface-form pair. Unaligned tokens contribute nothing.
    """
    return graph_from_counts(count_alignments(pairs), source_lang, target_lang)


def merge_graphs(*graphs: TranslationGraph) -> TranslationGraph:
    """Sum unfiltered shard graphs built over disjoint parts of a bitext."""
    counts: Counter = Counter()
    langs = set()
    for g in graphs:
        langs.add((g.source_lang, g.target_lang))
        for (sl, tl), data in g.edges.items():
            for (sf, tf), c in data.form_counts.items():
                counts[sl, tl, sf, tf] += c
    if len(langs) > 1:
        raise InvariantError(f"cannot merge graphs with different language tags: {sorted(langs)}")
    sl, tl = langs.pop() if langs else ("", "")
    return graph_from_counts(counts, sl, tl)


# ---------------------------------------------------------------------------
# Filtering

@dataclass(frozen=True)
class FilterSpec:
    abs_threshold: int = 5
    rel_threshold: float = 0.0

    def __post_init__(self):
        if self.abs_threshold < 0:
            raise ValueError("abs_threshold must be >= 0")
        if not 0.0 <= self.rel_threshold <= 1.0:
            raise ValueError("rel_threshold must lie in [0, 1]")


def filter_graph(graph: TranslationGraph, spec: FilterSpec) -> TranslationGraph:
    """Drop edges lighter than ``abs_threshold`` or than ``rel_threshold`` times
    the source vertex's unfiltered outgoing weight."""
    ref = graph.reference_out_weight
    abs_t, rel_t = spec.abs_threshold, spec.rel_threshold

    def keep(s, t):
        w = graph.edges[s, t].weight
        return w >= abs_t and w / ref[s] >= rel_t

    return graph.restrict(keep)


def filtered_instance_fraction(original: TranslationGraph, filtered: TranslationGraph) -> float:
    total = original.total_weight
    if total == 0:
        raise InvariantError("graph has zero total weight")
    return 1.0 - filtered.total_weight / total


@dataclass(frozen=True)
class AutotuneResult:
    rel_threshold: float
    achieved_fraction: float
    within_tolerance: bool


def autotune_rel_threshold(graph: TranslationGraph, abs_threshold: int = 5, target_fraction: float = 0.12,
                           tolerance: float = 0.005, resolution: float = 1e-6) -> AutotuneResult:
    """Bisect for the smallest relative threshold that filters ``target_fraction``
    of the alignment instances (within ``tolerance``).

    The filtered fraction is a non-decreasing step function of the threshold,
    so the target may be unreachable; the closest achievable threshold is
    returned then, with ``within_tolerance`` False.
    """
    if not 0.0 < target_fraction < 1.0:
        raise ValueError("target_fraction must lie strictly between 0 and 1")
    total = graph.total_weight
    if total == 0:
        raise InvariantError("cannot autotune on a graph with zero total weight")

    def frac(r):
        return filtered_instance_fraction(graph, filter_graph(graph, FilterSpec(abs_threshold, r)))

    lo_goal = target_fraction - tolerance
    f0 = frac(0.0)
    if f0 >= lo_goal:
        return AutotuneResult(0.0, f0, abs(f0 - target_fraction) <= tolerance)
    f1 = frac(1.0)
    if f1 < lo_goal:
        return AutotuneResult(1.0, f1, abs(f1 - target_fraction) <= tolerance)
    # invariant: frac(lo) < lo_goal <= frac(hi)
    lo, hi, flo, fhi = 0.0, 1.0, f0, f1
    while hi - lo > resolution:
        mid = (lo + hi) / 2
        fm = frac(mid)
        if fm >= lo_goal:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    if abs(fhi - target_fraction) <= tolerance:
        return AutotuneResult(hi, fhi, True)
    if abs(flo - target_fraction) < abs(fhi - target_fraction):
        return AutotuneResult(lo, flo, False)
    return AutotuneResult(hi, fhi, False)


# ---------------------------------------------------------------------------
# Serialization

def _check_lemma(s: str) -> str:
    if not s or "\t" in s or "\n" in s or "\r" in s:
        raise InvariantError(f"lemma {s!r} cannot be written to TSV")
    return s


def graph_to_tsv(graph: TranslationGraph) -> str:
    lines = [TSV_HEADER]
    for (s, t) in sorted(graph.edges):
        lines.append(f"{_check_lemma(s)}\t{_check_lemma(t)}\t{graph.edges[s, t].weight}")
    return "\n".join(lines) + "\n"


def graph_sidecar(graph: TranslationGraph) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "source_lang": graph.source_lang,
        "target_lang": graph.target_lang,
        "reference_out_weight": dict(sorted(graph.reference_out_weight.items())),
        "form_counts": [
            [s, t, [[sf, tf, c] for (sf, tf), c in sorted(graph.edges[s, t].form_counts.items())]]
            for (s, t) in sorted(graph.edges)
        ],
    }


def sidecar_path(path) -> str:
    return os.fspath(path) + SIDECAR_SUFFIX


def write_graph(graph: TranslationGraph, path) -> None:
    """Write ``path`` (TSV edge list) and ``path + '.json'`` (metadata, form counts)."""
    tsv = graph_to_tsv(graph)
    meta = json.dumps(graph_sidecar(graph), ensure_ascii=False, indent=1, sort_keys=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(tsv)
    with open(sidecar_path(path), "w", encoding="utf-8", newline="\n") as f:
        f.write(meta + "\n")


def _parse_tsv(text: str, path=None) -> dict[tuple[str, str], int]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != TSV_HEADER:
        raise FormatError(f"missing header {TSV_HEADER!r}", path, 1)
    weights = {}
    for lineno, line in enumerate(lines[1:], 2):
        cols = line.split("\t")
        if len(cols) != 3:
            raise FormatError(f"expected 3 columns, found {len(cols)}", path, lineno)
        s, t, w = cols
        if not s or not t:
            raise FormatError("empty lemma", path, lineno)
        try:
            weight = int(w)
        except ValueError:
            raise FormatError(f"weight {w!r} is not an integer", path, lineno, None) from None
        if weight < 1:
            raise InvariantError(f"{path}:line {lineno}: edge weight must be >= 1, got {weight}")
        if (s, t) in weights:
            raise FormatError(f"duplicate edge {s}-{t}", path, lineno)
        weights[s, t] = weight
    return weights


def read_graph(path) -> TranslationGraph:
    """Inverse of :func:`write_graph`.

    Without a sidecar, each edge's surface forms are taken to be its lemmas.
    """
    with open(path, encoding="utf-8") as f:
        weights = _parse_tsv(f.read(), path)
    side = sidecar_path(path)
    if not os.path.exists(side):
        logger.warning("%s: no sidecar found; using lemmas as surface forms", path)
        return TranslationGraph.from_weights(weights)
    with open(side, encoding="utf-8") as f:
        try:
            meta = json.load(f)
        except json.JSONDecodeError as exc:
            raise FormatError(exc.msg, side, exc.lineno, exc.colno) from None
    edges = {}
    for s, t, forms in meta.get("form_counts", []):
        if (s, t) not in weights:
            raise InvariantError(f"{side}: form counts for unknown edge {s}-{t}")
        data = EdgeData({(sf, tf): c for sf, tf, c in forms})
        if data.weight != weights[s, t]:
            raise InvariantError(f"{path}: edge {s}-{t} has weight {weights[s, t]} "
                                 f"but its form counts sum to {data.weight}")
        edges[s, t] = data
    missing = set(weights) - set(edges)
    if missing:
        raise InvariantError(f"{side}: no form counts for edge(s) {sorted(missing)[:5]}")
    return TranslationGraph(edges, meta.get("source_lang", ""), meta.get("target_lang", ""),
                            meta.get("reference_out_weight"))
