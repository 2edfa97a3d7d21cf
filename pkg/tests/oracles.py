"""Independent reference implementations used as test oracles.

Each one is written for clarity rather than speed and shares no code with
the package beyond its data types.
"""

import itertools
from collections import Counter

import mpmath


def brute_force_counts(pairs):
    """Independent tally: scan every (i, j) cell and test membership in the alignment."""
    lemma_counts, form_counts = Counter(), Counter()
    for p in pairs:
        for i, s in enumerate(p.source.tokens):
            for j, t in enumerate(p.target.tokens):
                if (i, j) in p.alignment:
                    lemma_counts[s.lemma, t.lemma] += 1
                    form_counts[s.lemma, t.lemma, s.form, t.form] += 1
    return lemma_counts, form_counts


def mp_entropy(weights, base=None):
    """Reference entropy evaluated with 50 significant digits."""
    with mpmath.workdps(50):
        total = mpmath.mpf(sum(weights))
        h = -mpmath.fsum((mpmath.mpf(w) / total) * mpmath.log(mpmath.mpf(w) / total) for w in weights)
        if base is not None:
            h = h / mpmath.log(base)
        return float(h)


def brute_force_stats(treebank):
    """Tally (head, first, second) over every ordered pair of subtree elements."""
    before, total = Counter(), Counter()
    for tree in treebank:
        for node in tree:
            kids = list(tree.children(node.id))
            if not kids:
                continue
            elems = sorted([(node.id, node.deprel)] + [(c, tree.node(c).deprel) for c in kids])
            for x in range(len(elems)):
                for y in range(len(elems)):
                    if x < y and elems[x][1] != elems[y][1]:
                        a, b = elems[x][1], elems[y][1]
                        before[node.deprel, a, b] += 1
                        total[node.deprel, a, b] += 1
                        total[node.deprel, b, a] += 1
    return before, total


def brute_force_order(labels, constraints):
    """Lexicographically first permutation satisfying everything, else identity."""
    n = len(labels)
    for perm in itertools.permutations(range(n)):
        pos = {e: k for k, e in enumerate(perm)}
        ok = True
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if (labels[i], labels[j]) in constraints and pos[i] > pos[j]:
                    ok = False
                if labels[i] == labels[j] and i < j and pos[i] > pos[j]:
                    ok = False
        if ok:
            return list(perm)
    return list(range(n))


def reference_swap(pair, graph):
    """Step-by-step reading of the four rules, kept deliberately naive."""
    src, tgt = pair.source.tokens, pair.target.tokens
    out, rules = [], []
    for v in src:
        aligned_j = None
        for i, j in pair.alignment:
            if i == v.index:
                aligned_j = j
        # (a) the aligned word is a translation
        if aligned_j is not None and (v.lemma, tgt[aligned_j].lemma) in graph.edges:
            out.append(tgt[aligned_j].form)
            rules.append("a")
            continue
        # (b) some word of the target sentence is a translation: heaviest, then leftmost
        best = None
        for u in tgt:
            if (v.lemma, u.lemma) in graph.edges:
                w = graph.edges[v.lemma, u.lemma].weight
                if best is None or w > best[0]:
                    best = (w, u.form)
        if best is not None:
            out.append(best[1])
            rules.append("b")
            continue
        # (c) most common target form seen for this exact source form
        lemma_edges = [(tl, d) for (sl, tl), d in graph.edges.items() if sl == v.lemma]
        if lemma_edges:
            tally = Counter()
            for _, d in lemma_edges:
                for (sf, tf), c in d.form_counts.items():
                    if sf == v.form:
                        tally[tf] += c
            if not tally:
                top_w = max(d.weight for _, d in lemma_edges)
                top_tl = sorted(tl for tl, d in lemma_edges if d.weight == top_w)[0]
                for (sf, tf), c in graph.edges[v.lemma, top_tl].form_counts.items():
                    tally[tf] += c
            top = max(tally.values())
            out.append(sorted(f for f, c in tally.items() if c == top)[0])
            rules.append("c")
            continue
        # (d) keep the word
        out.append(v.form)
        rules.append("d")
    return out, rules


def partition_oracle(entropy, mass, boundaries):
    """Band walk over ``entropy``/``mass`` dicts keyed by vertex.

    A vertex goes to band k where k counts the cuts its starting mass has
    reached (as an exact percentage of the total).
    """
    order = sorted(entropy, key=lambda v: (entropy[v], mass[v], v))
    total = sum(mass.values())
    out, start = {}, 0
    for v in order:
        out[v] = sum(1 for b in boundaries if 100 * start >= b * total)
        start += mass[v]
    return out
