"""Graph-driven lexical swapping of source words for target words."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .bigraph import TranslationGraph
from .corpus_io import AlignedSentencePair
from .exceptions import InvariantError, LexmanipError

RULES = ("a", "b", "c", "d")


@dataclass(frozen=True)
class SwapDecision:
    """Outcome for one source token.

    Rules: ``a`` aligned target word is a graph neighbor; ``b`` some other
    word of the target sentence is a neighbor (heaviest edge wins); ``c``
    most common translation from the graph; ``d`` no edge, word kept.
    """

    source_index: int
    rule: str
    replacement: str | None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        if (self.rule == "d") != (self.replacement is None):
            raise InvariantError("rule d and a missing replacement must go together")


class SwapError(LexmanipError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class _FormIndex:
    """Most common target form per source form / per source lemma, from form counts."""

    def __init__(self, graph: TranslationGraph):
        # keyed by (source lemma, source form): target form -> count
        self.by_form: dict[tuple[str, str], Counter] = {}
        for (sl, tl), data in graph.edges.items():
            for (sf, tf), c in data.form_counts.items():
                self.by_form.setdefault((sl, sf), Counter())[tf] += c
        self.by_lemma: dict[str, str] = {}
        for sl in graph.source_vertices:
            nbrs = graph.neighbors(sl)
            # heaviest edge (ties to the smaller lemma), then its most common target form
            best_tl = min(nbrs, key=lambda tl: (-nbrs[tl], tl))
            forms = Counter()
            for (_, tf), c in graph.edges[sl, best_tl].form_counts.items():
                forms[tf] += c
            self.by_lemma[sl] = _most_common(forms)

    def lookup(self, lemma: str, form: str) -> str:
        counts = self.by_form.get((lemma, form))
        if counts:
            return _most_common(counts)
        return self.by_lemma[lemma]


def _most_common(counts: Counter) -> str:
    return min(counts, key=lambda k: (-counts[k], k))


class LexicalSwapper:
    """Apply the swap rules sentence by sentence against a fixed graph.

    Build once per graph; :meth:`swap` is then a pure function of the pair.
    """

    def __init__(self, graph: TranslationGraph):
        self.graph = graph
        self._forms = _FormIndex(graph)

    def swap(self, pair: AlignedSentencePair) -> tuple[list[str], list[SwapDecision]]:
        g = self.graph
        src, tgt = pair.source.tokens, pair.target.tokens
        for tok in (*src, *tgt):
            if not tok.lemma:
                raise InvariantError(f"token {tok.form!r} has no lemma")
        aligned = pair.source_to_target
        out, decisions = [], []
        for v in src:
            j = aligned.get(v.index)
            if j is not None and g.has_edge(v.lemma, tgt[j].lemma):
                rule, repl = "a", tgt[j].form
            else:
                nbrs = g.neighbors(v.lemma)
                candidates = [u for u in tgt if u.lemma in nbrs]
                if candidates:
                    best = min(candidates, key=lambda u: (-nbrs[u.lemma], u.index, u.form))
                    rule, repl = "b", best.form
                elif nbrs:
                    rule, repl = "c", self._forms.lookup(v.lemma, v.form)
                else:
                    rule, repl = "d", None
            decisions.append(SwapDecision(v.index, rule, repl))
            out.append(v.form if repl is None else repl)
        return out, decisions


def swap_sentence(pair: AlignedSentencePair, graph: TranslationGraph) -> tuple[list[str], list[SwapDecision]]:
    """One-off convenience wrapper; use :class:`LexicalSwapper` for corpora."""
    return LexicalSwapper(graph).swap(pair)


@dataclass
class SwapReport:
    rule_counts: Counter = field(default_factory=lambda: Counter({r: 0 for r in RULES}))
    n_sentences: int = 0
    n_skipped: int = 0
    errors: list = field(default_factory=list)
    decisions: list | None = None

    @property
    def n_tokens(self) -> int:
        return sum(self.rule_counts.values())

    @property
    def fraction_swapped(self) -> float:
        n = self.n_tokens
        return (n - self.rule_counts["d"]) / n if n else 0.0

    def merge(self, other: "SwapReport") -> "SwapReport":
        out = SwapReport(self.rule_counts + other.rule_counts, self.n_sentences + other.n_sentences,
                         self.n_skipped + other.n_skipped, self.errors + other.errors)
        for r in RULES:
            out.rule_counts.setdefault(r, 0)
        if self.decisions is not None or other.decisions is not None:
            out.decisions = (self.decisions or []) + (other.decisions or [])
        return out

    def to_dict(self) -> dict:
        return {
            "rule_counts": {r: self.rule_counts[r] for r in RULES},
            "n_sentences": self.n_sentences,
            "n_skipped": self.n_skipped,
            "n_tokens": self.n_tokens,
            "fraction_swapped": self.fraction_swapped,
            "errors": list(self.errors),
        }


def swap_corpus(pairs: Iterable[AlignedSentencePair], graph: TranslationGraph, skip_errors: bool = False,
                keep_decisions: bool = False, first_line: int = 1) -> tuple[list[str], SwapReport]:
    """Swap every pair; returns output lines and an aggregate report.

    With ``skip_errors``, failing sentences are counted and left out of the
    output; otherwise the first failure raises :class:`SwapError`.
    """
    swapper = LexicalSwapper(graph)
    report = SwapReport(decisions=[] if keep_decisions else None)
    lines = []
    for lineno, pair in enumerate(pairs, first_line):
        try:
            tokens, decisions = swapper.swap(pair)
        except LexmanipError as exc:
            if not skip_errors:
                raise SwapError(str(exc), lineno) from exc
            report.n_skipped += 1
            report.errors.append({"line": lineno, "error": str(exc)})
            continue
        lines.append(" ".join(tokens))
        report.n_sentences += 1
        report.rule_counts.update(d.rule for d in decisions)
        if keep_decisions:
            report.decisions.append(decisions)
    return lines, report
