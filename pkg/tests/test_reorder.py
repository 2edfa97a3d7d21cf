import itertools
import random
from collections import Counter

import pytest

from lexmanip.exceptions import FormatError
from lexmanip.reorder import (OrderingStats, constraints_satisfiable, estimate_ordering_stats,
                              extract_constraints, read_ordering_stats, reorder_sentence, reorder_tree,
                              solve_order, subtree_elements, write_ordering_stats)
from lexmanip.tree import DependencyTree

from oracles import brute_force_order, brute_force_stats
from synth import DEPRELS, SEED, random_projective_tree, random_tree

SPANISH = OrderingStats.from_probabilities({
    ("nsubj", "amod", "nsubj"): 0.1,   # adjective after noun
    ("root", "nsubj", "root"): 0.9,
    ("root", "root", "obj"): 0.9,
    ("root", "nsubj", "obj"): 0.95,
})
HINDI = OrderingStats.from_probabilities({
    ("nsubj", "amod", "nsubj"): 0.9,
    ("root", "nsubj", "root"): 0.95,
    ("root", "obj", "root"): 0.9,      # verb final
    ("root", "nsubj", "obj"): 0.85,
})


def test_stats_vacas_marrones():
    tree = DependencyTree.from_lists(["vacas", "marrones"], [0, 1], ["root", "amod"])
    stats = estimate_ordering_stats([tree])
    assert stats.probability("root", "amod", "root") == 0
    assert stats.probability("root", "root", "amod") == 1
    assert stats.counts("root", "root", "amod") == (1, 1)


def test_stats_leaf_contributes_nothing():
    tree = DependencyTree.from_lists(["x"], [0], ["root"])
    assert not estimate_ordering_stats([tree])


def test_stats_opposite_orders():
    t1 = DependencyTree.from_lists(["vacas", "marrones"], [0, 1], ["root", "amod"])
    t2 = DependencyTree.from_lists(["brown", "cows"], [2, 0], ["amod", "root"])
    stats = estimate_ordering_stats([t1, t2])
    assert stats.probability("root", "amod", "root") == 0.5
    assert stats.probability("root", "root", "amod") == 0.5


def test_stats_against_oracle():
    rng = random.Random(SEED)
    bank = [random_tree(rng) for _ in range(300)]
    stats = estimate_ordering_stats(bank)
    before, total = brute_force_stats(bank)
    assert set(k for k in total) == {k for (h, a, b), _ in stats.items() for k in ((h, a, b), (h, b, a))}
    for (h, a, b), t in total.items():
        assert stats.counts(h, a, b) == (before[h, a, b], t)
        got_ab, got_t = stats.counts(h, a, b)
        assert got_ab + stats.counts(h, b, a)[0] == got_t


def test_stats_merge_is_addition():
    rng = random.Random(SEED + 1)
    bank = [random_tree(rng) for _ in range(60)]
    assert estimate_ordering_stats(bank[:25]) + estimate_ordering_stats(bank[25:]) == estimate_ordering_stats(bank)


def test_coarse_labels():
    tree = DependencyTree.from_lists(["a", "b", "c"], [0, 1, 1], ["root", "nmod:poss", "nmod"])
    fine = estimate_ordering_stats([tree])
    coarse = estimate_ordering_stats([tree], coarse=True)
    assert fine.counts("root", "nmod", "nmod:poss") == (0, 1)
    # both children collapse to nmod, so only root/nmod pairs remain
    assert coarse.counts("root", "root", "nmod") == (2, 2)


def test_constraint_threshold_and_tie():
    stats = OrderingStats.from_probabilities({("root", "amod", "root"): 0.9})
    assert extract_constraints(["amod", "root"], "root", stats) == {("amod", "root")}
    tie = OrderingStats.from_probabilities({("root", "amod", "root"): 0.5})
    assert extract_constraints(["root", "amod"], "root", tie) == {("amod", "root")}
    assert extract_constraints(["x", "y"], "root", stats) == frozenset()


def test_solve_order_examples():
    # brown(amod) cows(nsubj head) with nsubj < amod
    assert solve_order(["amod", "nsubj"], {("nsubj", "amod")}) == [1, 0]
    assert solve_order(["a", "b", "c"], {("a", "b"), ("b", "c"), ("c", "a")}) == [0, 1, 2]
    assert solve_order(["x", "y", "z"], frozenset()) == [0, 1, 2]
    assert not constraints_satisfiable(["a", "b", "c"], {("a", "b"), ("b", "c"), ("c", "a")})


def test_solve_order_equal_labels_keep_order():
    labels = ["amod", "root", "amod"]
    assert solve_order(labels, {("root", "amod")}) == [1, 0, 2]


def test_solve_order_matches_brute_force():
    rng = random.Random(SEED)
    pool = ["a", "b", "c", "d"]
    for _ in range(1500):
        n = rng.randint(1, 6)
        labels = [rng.choice(pool) for _ in range(n)]
        cons = set()
        for a, b in itertools.combinations(sorted(set(labels)), 2):
            r = rng.random()
            if r < 0.4:
                cons.add((a, b))
            elif r < 0.8:
                cons.add((b, a))
        assert solve_order(labels, frozenset(cons)) == brute_force_order(labels, cons)


def test_golden_spanish(cows_tree):
    assert reorder_sentence(cows_tree, SPANISH) == "cows brown eat grass"


def test_golden_hindi(cows_tree):
    assert reorder_sentence(cows_tree, HINDI) == "brown cows grass eat"


def test_golden_from_estimated_treebanks(cows_tree):
    es = DependencyTree.from_lists("vacas marrones comen hierba".split(), [3, 1, 0, 3],
                                   ["nsubj", "amod", "root", "obj"])
    hi = DependencyTree.from_lists("brown cows grass eat".split(), [2, 4, 4, 0],
                                   ["amod", "nsubj", "obj", "root"])
    assert reorder_sentence(cows_tree, estimate_ordering_stats([es])) == "cows brown eat grass"
    assert reorder_sentence(cows_tree, estimate_ordering_stats([hi])) == "brown cows grass eat"


def test_single_token_and_empty_stats(cows_tree):
    t = DependencyTree.from_lists(["hola"], [0], ["root"])
    assert reorder_sentence(t, SPANISH) == "hola"
    assert reorder_sentence(cows_tree, OrderingStats()) == "brown cows eat grass"


def test_cyclic_subtree_keeps_original_order():
    tree = DependencyTree.from_lists(["x", "y", "h"], [3, 3, 0], ["a", "b", "c"])
    stats = OrderingStats.from_probabilities({("c", "a", "b"): 1.0, ("c", "b", "c"): 1.0,
                                              ("c", "a", "c"): 0.0})
    assert reorder_sentence(tree, stats) == "x y h"


def output_positions(tree, stats):
    out = reorder_tree(tree, stats)
    return out, {n.id: k for k, n in enumerate(out)}


def check_reorder_properties(tree, stats):
    out, pos = output_positions(tree, stats)
    assert sorted(n.id for n in out) == [n.id for n in tree]
    assert sorted(n.form for n in out) == sorted(tree.forms)
    for node in tree:
        span = sorted(pos[i] for i in tree.subtree_ids(node.id))
        assert span == list(range(span[0], span[0] + len(span)))
    acyclic = True
    checks = []
    for node in tree:
        if not tree.children(node.id):
            continue
        elems = subtree_elements(tree, node.id)
        labels = [lab for _, lab in elems]
        cons = extract_constraints(labels, node.deprel, stats)
        if not constraints_satisfiable(labels, cons):
            acyclic = False
        checks.append((elems, cons))
    if acyclic:
        for elems, cons in checks:
            for (p, la), (q, lb) in itertools.permutations(elems, 2):
                if (la, lb) in cons:
                    assert pos[p] < pos[q]
    return acyclic


def random_stats(rng, labels=("root", *DEPRELS)):
    probs = {}
    for k in labels:
        for a, b in itertools.combinations(labels, 2):
            if rng.random() < 0.7:
                probs[k, a, b] = rng.choice([0.0, 0.1, 0.5, 0.7, 1.0])
    return OrderingStats.from_probabilities(probs, total=10)


def test_reorder_properties_random():
    rng = random.Random(SEED)
    n_acyclic = 0
    for _ in range(300):
        tree = random_tree(rng, max_n=10)
        n_acyclic += check_reorder_properties(tree, random_stats(rng))
    assert n_acyclic > 50


def test_projective_identity_on_empty_stats():
    rng = random.Random(SEED)
    for _ in range(200):
        tree = random_projective_tree(rng, max_n=12)
        assert reorder_sentence(tree, OrderingStats()) == tree.text()


def test_nonprojective_output_is_projective():
    # the arc 4 -> 2 crosses node 3, which 4 does not dominate
    tree = DependencyTree.from_lists(["a", "b", "c", "d"], [3, 4, 0, 3], ["x", "y", "root", "z"])
    out = [n.id for n in reorder_tree(tree, OrderingStats())]
    assert out == [1, 3, 2, 4]


def test_self_stats_unanimous_keep_order():
    rng = random.Random(SEED + 7)
    for _ in range(200):
        tree = random_projective_tree(rng, max_n=10)
        stats = estimate_ordering_stats([tree])
        if all(b in (0, t) for _, (b, t) in stats.items()):
            assert reorder_sentence(tree, stats) == tree.text()


def test_deterministic(cows_tree):
    assert [n.id for n in reorder_tree(cows_tree, SPANISH)] == [n.id for n in reorder_tree(cows_tree, SPANISH)]


def test_stats_file_round_trip(tmp_path):
    rng = random.Random(SEED)
    stats = estimate_ordering_stats([random_tree(rng) for _ in range(50)])
    path = tmp_path / "order.tsv"
    write_ordering_stats(stats, path)
    assert read_ordering_stats(path) == stats
    text = path.read_text(encoding="utf-8")
    write_ordering_stats(read_ordering_stats(path), path)
    assert path.read_text(encoding="utf-8") == text


def test_stats_file_reverse_orientation(tmp_path):
    path = tmp_path / "order.tsv"
    path.write_text("head_label\tlabel_i\tlabel_j\tbefore\ttotal\nroot\troot\tamod\t3\t4\n", encoding="utf-8")
    assert read_ordering_stats(path).counts("root", "root", "amod") == (3, 4)


@pytest.mark.parametrize("row", ["root\tamod\troot\t5\t4", "root\tamod\troot\tx\t4", "root\tamod\t1\t2",
                                 "root\tamod\tamod\t1\t2"])
def test_stats_file_errors(tmp_path, row):
    path = tmp_path / "order.tsv"
    path.write_text("head_label\tlabel_i\tlabel_j\tbefore\ttotal\n" + row + "\n", encoding="utf-8")
    with pytest.raises(FormatError) as exc:
        read_ordering_stats(path)
    assert exc.value.line == 2


def test_from_probabilities_range():
    with pytest.raises(ValueError):
        OrderingStats.from_probabilities({("a", "b", "c"): 1.5})
