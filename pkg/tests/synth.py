"""Seeded synthetic data for the test-suite.

Every generator takes an explicit seed (or a ``random.Random``) so each
fixture can be regenerated exactly.
"""

import random

from lexmanip.bigraph import EdgeData, TranslationGraph
from lexmanip.corpus_io import AlignedSentencePair, Sentence
from lexmanip.tree import DependencyTree

SEED = 0x5EED_1E7A_2023_0001

SRC_LEMMAS = ["brown", "cow", "eat", "grass", "for", "by", "we", "take", "note", "of", "your", "statement"]
TGT_LEMMAS = ["marrón", "vaca", "comer", "hierba", "por", "para", "tomar", "nota", "de", "ese", "declaración", "el"]
SUFFIXES = ["", "s", "ed"]
TGT_SUFFIXES = ["", "s", "es", "a"]

DEPRELS = ["nsubj", "obj", "amod", "det", "advmod", "obl", "case", "nmod", "conj", "cc"]


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_sentence(rng, lemmas, suffixes, n):
    lem = [rng.choice(lemmas) for _ in range(n)]
    forms = [l + rng.choice(suffixes) for l in lem]
    return Sentence.from_forms(forms, lem)


def random_aligned_pair(seed, max_len=8):
    rng = _rng(seed)
    src = random_sentence(rng, SRC_LEMMAS, SUFFIXES, rng.randint(1, max_len))
    tgt = random_sentence(rng, TGT_LEMMAS, TGT_SUFFIXES, rng.randint(1, max_len))
    s_idx = list(range(len(src)))
    t_idx = list(range(len(tgt)))
    rng.shuffle(s_idx)
    rng.shuffle(t_idx)
    k = rng.randint(0, min(len(src), len(tgt)))
    return AlignedSentencePair(src, tgt, frozenset(zip(s_idx[:k], t_idx[:k])))


def random_corpus(n, seed=SEED, max_len=8):
    rng = _rng(seed)
    return [random_aligned_pair(rng, max_len) for _ in range(n)]


def random_graph(seed, n_src=6, n_tgt=6, max_weight=50, density=0.5, forms=True):
    rng = _rng(seed)
    edges = {}
    srcs = [f"s{i}" for i in range(n_src)]
    tgts = [f"t{j}" for j in range(n_tgt)]
    for s in srcs:
        nbrs = [t for t in tgts if rng.random() < density] or [rng.choice(tgts)]
        for t in nbrs:
            w = rng.randint(1, max_weight)
            if forms and w > 1 and rng.random() < 0.5:
                a = rng.randint(1, w - 1)
                edges[s, t] = EdgeData({(s, t): a, (s + "x", t + "y"): w - a})
            else:
                edges[s, t] = EdgeData({(s, t): w})
    return TranslationGraph(edges)


def random_tree(seed, n=None, labels=DEPRELS, max_n=9):
    """Random (possibly non-projective) tree over ``n`` nodes."""
    rng = _rng(seed)
    n = n or rng.randint(1, max_n)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * (n + 1)
    for k, nid in enumerate(order):
        heads[nid] = 0 if k == 0 else rng.choice(order[:k])
    forms = [f"w{i}" for i in range(1, n + 1)]
    deprels = ["root" if heads[i] == 0 else rng.choice(labels) for i in range(1, n + 1)]
    return DependencyTree.from_lists(forms, heads[1:], deprels)


def random_projective_tree(seed, n=None, labels=DEPRELS, max_n=9):
    """Random projective tree built by recursive span splitting."""
    rng = _rng(seed)
    n = n or rng.randint(1, max_n)
    heads = [0] * (n + 1)

    def build(lo, hi, parent):
        if lo > hi:
            return
        h = rng.randint(lo, hi)
        heads[h] = parent
        # split the remaining span into contiguous child spans on each side
        for a, b in ((lo, h - 1), (h + 1, hi)):
            start = a
            while start <= b:
                end = rng.randint(start, b)
                build(start, end, h)
                start = end + 1

    build(1, n, 0)
    forms = [f"w{i}" for i in range(1, n + 1)]
    deprels = ["root" if heads[i] == 0 else rng.choice(labels) for i in range(1, n + 1)]
    return DependencyTree.from_lists(forms, heads[1:], deprels)


def spanish_like_graph(seed=SEED, n_vertices=400):
    """Source vertices with two strong translations and a tail of weak ones.

    Each vertex has total mass 100 * scale: edges of 60% and 28%, plus a 12%
    tail split into 7-12 edges of 1-2% each. Every weight is >= 5, so after
    the absolute cut a relative cut of 2% removes exactly 12% of instances.
    """
    rng = random.Random(seed)
    weights = {}
    for v in range(n_vertices):
        scale = rng.choice([5, 10, 20])
        k = rng.randint(7, 12)
        tail = [scale] * k
        left = (12 - k) * scale
        while left:
            i = rng.randrange(k)
            if tail[i] < 2 * scale - 1:
                tail[i] += 1
                left -= 1
        for i, w in enumerate([60 * scale, 28 * scale] + tail):
            weights[f"s{v}", f"t{v}_{i}"] = w
    return TranslationGraph.from_weights(weights)
