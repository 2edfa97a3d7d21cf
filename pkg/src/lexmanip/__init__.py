"""Corpus manipulation and lexical alignment analysis.

Script substitution, treebank-driven word reordering and graph-driven lexical
swapping of a source language toward a target language, with the translation
graph, translation entropy and evaluation metrics they rely on.
"""

__version__ = "0.1.0"

from .bigraph import (EdgeData, FilterSpec, TranslationGraph, autotune_rel_threshold, build_graph,
                      filter_graph, merge_graphs, read_graph, write_graph)
from .corpus_io import (AlignedSentencePair, EmbeddingRecord, Sentence, SimplifyConfig, Token,
                        read_alignments, read_conllu, read_embeddings, read_parallel_corpus,
                        simplify_corpus)
from .entropy import (BandSpec, Partition, partition_by_entropy, subgraph_by_band,
                      translation_entropy, translation_probability)
from .estimators import (CorpusSimplifier, LexicalSwapTransformer, ScriptSubstitutionTransformer,
                         TreebankReorderer)
from .evaluation import (PRF, EmbeddingPair, alignment_prf, average_cosine_similarity,
                         cosine_embedding_loss, cosine_similarity)
from .lexswap import LexicalSwapper, SwapDecision, SwapReport, swap_corpus, swap_sentence
from .reorder import (OrderingStats, estimate_ordering_stats, extract_constraints, reorder_tree,
                      solve_order)
from .script_sub import CharMap, build_charmap, invert_charmap, substitute_script
from .tree import DependencyTree, Node
