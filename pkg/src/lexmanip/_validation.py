"""Input checks shared by the estimators."""

from __future__ import annotations

from collections.abc import Iterable

from .corpus_io import AlignedSentencePair
from .tree import DependencyTree


def _as_list(X, what: str) -> list:
    if isinstance(X, (str, bytes)) or not isinstance(X, Iterable):
        raise TypeError(f"expected an iterable of {what}, got {type(X).__name__}")
    return list(X)


def check_aligned_pairs(X) -> list[AlignedSentencePair]:
    X = _as_list(X, "AlignedSentencePair")
    for n, x in enumerate(X):
        if not isinstance(x, AlignedSentencePair):
            raise TypeError(f"item {n} is {type(x).__name__}, not AlignedSentencePair")
    return X


def check_trees(X) -> list[DependencyTree]:
    X = _as_list(X, "DependencyTree")
    for n, x in enumerate(X):
        if not isinstance(x, DependencyTree):
            raise TypeError(f"item {n} is {type(x).__name__}, not DependencyTree")
    return X


def check_texts(X) -> list[str]:
    X = _as_list(X, "str")
    for n, x in enumerate(X):
        if not isinstance(x, str):
            raise TypeError(f"item {n} is {type(x).__name__}, not str")
    return X


def check_text_pairs(X) -> list[tuple[str, str]]:
    X = _as_list(X, "(source, target) string pairs")
    out = []
    for n, x in enumerate(X):
        try:
            s, t = x
        except (TypeError, ValueError):
            raise TypeError(f"item {n} is not a (source, target) pair") from None
        if not isinstance(s, str) or not isinstance(t, str):
            raise TypeError(f"item {n} does not hold two strings")
        out.append((s, t))
    return out
