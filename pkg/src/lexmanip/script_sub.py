"""Injective character substitution into another script."""

from __future__ import annotations

import string
from collections.abc import Mapping
from importlib import resources
from typing import Iterator, Sequence

from .corpus_io import _read_lines, write_lines
from .exceptions import FormatError, InvariantError

LATIN_LOWERCASE = string.ascii_lowercase


class CharMap(Mapping):
    """An injective character-to-character map.

    Domain and range must be disjoint unless the map is the identity or
    ``allow_overlap`` is set, so that a substituted text cannot be confused
    with an unsubstituted one.
    """

    def __init__(self, mapping: Mapping[str, str], allow_overlap: bool = False):
        mapping = dict(mapping)
        for src, tgt in mapping.items():
            if len(src) != 1 or len(tgt) != 1:
                raise InvariantError(f"charmap entries must be single characters: {src!r} -> {tgt!r}")
        targets = list(mapping.values())
        if len(set(targets)) != len(targets):
            dup = sorted({t for t in targets if targets.count(t) > 1})
            raise InvariantError(f"charmap is not injective; repeated targets {dup}")
        identity = all(s == t for s, t in mapping.items())
        if not identity and not allow_overlap and set(mapping) & set(targets):
            raise InvariantError("charmap domain and range overlap")
        self._map = mapping
        self.allow_overlap = allow_overlap or identity
        self._table = str.maketrans(mapping)

    def __getitem__(self, key: str) -> str:
        return self._map[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        return f"CharMap({self._map!r})"

    def __eq__(self, other):
        if isinstance(other, CharMap):
            return self._map == other._map
        return NotImplemented

    def translate(self, text: str) -> str:
        return text.translate(self._table)


def build_charmap(source_alphabet: Sequence[str], target_symbols: Sequence[str]) -> CharMap:
    """Map the i-th source character to the i-th target symbol.

    Surplus target symbols are ignored. Identical lists give the identity map.
    """
    source_alphabet = list(source_alphabet)
    target_symbols = list(target_symbols)
    if len(set(target_symbols)) != len(target_symbols):
        raise InvariantError("target symbols contain duplicates")
    if len(set(source_alphabet)) != len(source_alphabet):
        raise InvariantError("source alphabet contains duplicates")
    if len(target_symbols) < len(source_alphabet):
        raise InvariantError(f"{len(source_alphabet)} source characters but only "
                             f"{len(target_symbols)} target symbols")
    return CharMap(dict(zip(source_alphabet, target_symbols)))


def substitute_script(text: str, charmap: Mapping[str, str]) -> str:
    """Replace every mapped character; everything else passes through."""
    if isinstance(charmap, CharMap):
        return charmap.translate(text)
    return text.translate(str.maketrans(dict(charmap)))


def invert_charmap(charmap: CharMap) -> CharMap:
    return CharMap({t: s for s, t in charmap.items()}, allow_overlap=charmap.allow_overlap)


def default_symbols(name: str) -> list[str]:
    """Bundled symbol list: ``greek`` (alphabetical) or ``chinese`` (by frequency)."""
    try:
        text = resources.files("lexmanip.data").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValueError(f"no bundled symbol list named {name!r}") from None
    return [line for line in text.split("\n") if line]


def default_charmap(name: str, alphabet: Sequence[str] = LATIN_LOWERCASE) -> CharMap:
    return build_charmap(alphabet, default_symbols(name))


def read_charmap(path) -> CharMap:
    mapping = {}
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 2 or len(cols[0]) != 1 or len(cols[1]) != 1:
            raise FormatError("expected src_char<TAB>tgt_char", path, lineno)
        if cols[0] in mapping:
            raise FormatError(f"character {cols[0]!r} mapped twice", path, lineno)
        mapping[cols[0]] = cols[1]
    return CharMap(mapping)


def write_charmap(charmap: CharMap, path) -> None:
    write_lines(path, (f"{s}\t{t}" for s, t in charmap.items()))
