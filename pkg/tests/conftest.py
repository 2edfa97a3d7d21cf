from collections import OrderedDict

import pytest

from lexmanip.bigraph import TranslationGraph
from lexmanip.corpus_io import AlignedSentencePair, Sentence
from lexmanip.tree import DependencyTree

# --- worked example: "brown cows eat grass" / "las vacas marrones comen hierba"


@pytest.fixture
def cows_pair():
    en = Sentence.from_forms("brown cows eat grass".split(), "brown cow eat grass".split(), "en")
    es = Sentence.from_forms("las vacas marrones comen hierba".split(),
                             "el vaca marrón comer hierba".split(), "es")
    # aligner output: brown -> marrones, eat -> comen
    return AlignedSentencePair(en, es, {(0, 2), (2, 3)})


@pytest.fixture
def cows_graph():
    return TranslationGraph.from_weights({("brown", "marrón"): 40, ("eat", "comer"): 90,
                                          ("cow", "vaca"): 25, ("grass", "hierba"): 12})


@pytest.fixture
def cows_tree():
    return DependencyTree.from_lists("brown cows eat grass".split(), [2, 3, 0, 3],
                                     ["amod", "nsubj", "root", "obj"])


@pytest.fixture
def for_por_para_graph():
    return TranslationGraph.from_weights({("for", "por"): 85303, ("for", "para"): 175771,
                                          ("by", "por"): 93781})


# --- acceptance summary: one line per criterion

_results = OrderedDict()


def pytest_runtest_logreport(report):
    marker = getattr(report, "_acceptance", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        key = marker
        ok = report.outcome == "passed"
        _results[key] = _results.get(key, True) and ok


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report._acceptance = (mark.args[0], mark.kwargs.get("title", ""))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {title}")
