"""scikit-learn style wrappers around the three manipulations and corpus filtering.

Each estimator learns its resources in ``fit`` (a translation graph, ordering
statistics, a character map) and applies them in ``transform``, so the
manipulations compose with ``sklearn.pipeline`` and ``get_params``/``set_params``.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_aligned_pairs, check_text_pairs, check_texts, check_trees
from .bigraph import (FilterSpec, TranslationGraph, autotune_rel_threshold, build_graph,
                      filter_graph)
from .corpus_io import SimplifyConfig, simplify_corpus
from .entropy import BandSpec, partition_by_entropy, subgraph_by_band
from .lexswap import swap_corpus
from .reorder import estimate_ordering_stats, reorder_sentence
from .script_sub import (LATIN_LOWERCASE, CharMap, build_charmap, default_symbols,
                         invert_charmap, substitute_script)

BAND_CHOICES = ("all", "zero", "0-33", "33-67", "67-100")


def select_band(graph: TranslationGraph, band: str = "all", side: str = "source",
                boundaries=(33, 67)):
    """Return ``(subgraph, partition)`` for a band name such as ``"67-100"`` or ``"zero"``."""
    if band == "all":
        return graph, None
    if band == "zero":
        partition = partition_by_entropy(graph, side, BandSpec(zero_only=True))
        return subgraph_by_band(graph, partition, 0), partition
    spec = BandSpec(tuple(boundaries))
    partition = partition_by_entropy(graph, side, spec)
    return subgraph_by_band(graph, partition, spec.band_index(band)), partition


class LexicalSwapTransformer(TransformerMixin, BaseEstimator):
    """Learn a filtered translation graph from an aligned bitext and swap with it.

    Parameters
    ----------
    abs_threshold : int
        Minimum edge weight kept.
    rel_threshold : float
        Minimum share of the source vertex's outgoing weight kept.
    target_filtered_fraction : float or None
        If set, ``rel_threshold`` is ignored and tuned so that this share of
        alignment instances is filtered out.
    tolerance : float
        Allowed deviation from ``target_filtered_fraction``.
    band : str
        ``"all"``, ``"zero"`` or a band label over ``boundaries`` such as ``"67-100"``.
    side : str
        Graph side the entropy bands are computed on.
    boundaries : tuple of float
        Percentile cuts over instance mass.
    skip_errors : bool
        Drop sentences that fail instead of raising.
    """

    def __init__(self, abs_threshold=5, rel_threshold=0.0, target_filtered_fraction=None,
                 tolerance=0.005, band="all", side="source", boundaries=(33, 67), skip_errors=False):
        self.abs_threshold = abs_threshold
        self.rel_threshold = rel_threshold
        self.target_filtered_fraction = target_filtered_fraction
        self.tolerance = tolerance
        self.band = band
        self.side = side
        self.boundaries = boundaries
        self.skip_errors = skip_errors

    def fit(self, X, y=None):
        X = check_aligned_pairs(X)
        return self.fit_graph(build_graph(X))

    def fit_graph(self, graph: TranslationGraph):
        """Fit from an already counted (unfiltered) graph."""
        self.graph_ = graph
        if self.target_filtered_fraction is not None:
            tuned = autotune_rel_threshold(graph, self.abs_threshold, self.target_filtered_fraction,
                                           self.tolerance)
            self.rel_threshold_ = tuned.rel_threshold
        else:
            self.rel_threshold_ = self.rel_threshold
        self.filtered_graph_ = filter_graph(graph, FilterSpec(self.abs_threshold, self.rel_threshold_))
        self.swap_graph_, self.partition_ = select_band(self.filtered_graph_, self.band, self.side,
                                                        self.boundaries)
        return self

    def transform(self, X):
        check_is_fitted(self, "swap_graph_")
        X = check_aligned_pairs(X)
        lines, self.report_ = swap_corpus(X, self.swap_graph_, skip_errors=self.skip_errors)
        return lines


class TreebankReorderer(TransformerMixin, BaseEstimator):
    """Learn pairwise ordering statistics from a target treebank; reorder source trees."""

    def __init__(self, coarse=False):
        self.coarse = coarse

    def fit(self, X, y=None):
        X = check_trees(X)
        if not X:
            raise ValueError("cannot estimate ordering statistics from an empty treebank")
        self.stats_ = estimate_ordering_stats(X, coarse=self.coarse)
        return self

    def transform(self, X):
        check_is_fitted(self, "stats_")
        return [reorder_sentence(t, self.stats_, self.coarse) for t in check_trees(X)]


class ScriptSubstitutionTransformer(TransformerMixin, BaseEstimator):
    """Substitute characters with symbols of another script.

    ``symbols`` is a bundled list name (``"greek"``, ``"chinese"``) or an
    explicit sequence of symbols; ``charmap`` overrides both.
    """

    def __init__(self, symbols="greek", alphabet=LATIN_LOWERCASE, charmap=None):
        self.symbols = symbols
        self.alphabet = alphabet
        self.charmap = charmap

    def fit(self, X=None, y=None):
        if self.charmap is not None:
            self.charmap_ = self.charmap if isinstance(self.charmap, CharMap) else CharMap(self.charmap)
        else:
            symbols = default_symbols(self.symbols) if isinstance(self.symbols, str) else list(self.symbols)
            self.charmap_ = build_charmap(self.alphabet, symbols)
        return self

    def transform(self, X):
        check_is_fitted(self, "charmap_")
        return [substitute_script(t, self.charmap_) for t in check_texts(X)]

    def inverse_transform(self, X):
        check_is_fitted(self, "charmap_")
        inverse = invert_charmap(self.charmap_)
        return [substitute_script(t, inverse) for t in check_texts(X)]


class CorpusSimplifier(TransformerMixin, BaseEstimator):
    """Stateless filter keeping short, clean, lowercased sentence pairs."""

    def __init__(self, source_config=None, target_config=None):
        self.source_config = source_config
        self.target_config = target_config

    def fit(self, X=None, y=None):
        self.source_config_ = self.source_config or SimplifyConfig()
        self.target_config_ = self.target_config or self.source_config_
        return self

    def transform(self, X):
        check_is_fitted(self, "source_config_")
        return simplify_corpus(check_text_pairs(X), self.source_config_, self.target_config_)


__all__ = ["BAND_CHOICES", "CorpusSimplifier", "LexicalSwapTransformer", "ScriptSubstitutionTransformer",
           "TreebankReorderer", "select_band"]
