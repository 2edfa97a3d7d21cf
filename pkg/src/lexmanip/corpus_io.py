"""Readers and writers for parallel text, Pharaoh alignments, CoNLL-U,
token/lemma TSV and embedding files, plus corpus simplification."""

from __future__ import annotations

import logging
import os
import unicodedata
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import (AlignmentConflictWarning, FormatError, InvariantError,
                         TreeSkippedWarning)
from .tree import DependencyTree, Node

logger = logging.getLogger(__name__)

Alignment = frozenset  # of (source_index, target_index) tuples


# ---------------------------------------------------------------------------
# Domain types

@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str = ""

    def __post_init__(self):
        if not self.form:
            raise InvariantError(f"token {self.index} has an empty form")
        if not self.lemma:
            object.__setattr__(self, "lemma", self.form)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    language_tag: str = ""

    def __post_init__(self):
        tokens = tuple(self.tokens)
        object.__setattr__(self, "tokens", tokens)
        for i, tok in enumerate(tokens):
            if tok.index != i:
                raise InvariantError(f"token indices must be 0..{len(tokens) - 1}, got {tok.index} at {i}")

    @classmethod
    def from_forms(cls, forms: Sequence[str], lemmas: Sequence[str] | None = None,
                   language_tag: str = "") -> "Sentence":
        if lemmas is None:
            lemmas = forms
        if len(lemmas) != len(forms):
            raise InvariantError(f"{len(forms)} forms but {len(lemmas)} lemmas")
        return cls(tuple(Token(i, f, l) for i, (f, l) in enumerate(zip(forms, lemmas))), language_tag)

    @classmethod
    def from_text(cls, text: str, language_tag: str = "") -> "Sentence":
        """Whitespace tokenization with the identity lemma."""
        return cls.from_forms(text.split(), language_tag=language_tag)

    def __len__(self):
        return len(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens]


@dataclass(frozen=True)
class AlignedSentencePair:
    source: Sentence
    target: Sentence
    alignment: frozenset = frozenset()

    def __post_init__(self):
        alignment = frozenset((int(i), int(j)) for i, j in self.alignment)
        object.__setattr__(self, "alignment", alignment)
        ns, nt = len(self.source), len(self.target)
        seen_s, seen_t = set(), set()
        for i, j in alignment:
            if not (0 <= i < ns and 0 <= j < nt):
                raise InvariantError(f"alignment link {i}-{j} out of range for lengths {ns}/{nt}")
            if i in seen_s or j in seen_t:
                raise InvariantError(f"alignment is not one-to-one at link {i}-{j}")
            seen_s.add(i)
            seen_t.add(j)

    @property
    def source_to_target(self) -> dict[int, int]:
        return dict(self.alignment)


@dataclass(frozen=True)
class EmbeddingRecord:
    id: int
    vector: np.ndarray = field(compare=False)

    def __eq__(self, other):
        if not isinstance(other, EmbeddingRecord):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.vector, other.vector)


# ---------------------------------------------------------------------------
# Parallel text

def _read_lines(path) -> list[str]:
    """Read a UTF-8 file as a list of lines without terminators."""
    with open(path, "rb") as f:
        raw = f.read()
    if not raw:
        return []
    chunks = raw.split(b"\n")
    if chunks[-1] == b"":
        chunks.pop()
    lines = []
    for lineno, chunk in enumerate(chunks, 1):
        try:
            text = chunk.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"invalid UTF-8 ({exc.reason})", path, lineno, exc.start + 1) from None
        lines.append(text[:-1] if text.endswith("\r") else text)
    return lines


def read_parallel_corpus(source_path, target_path) -> list[tuple[str, str]]:
    src = _read_lines(source_path)
    tgt = _read_lines(target_path)
    if len(src) != len(tgt):
        raise FormatError(f"line-count mismatch: {source_path} has {len(src)} lines, "
                          f"{target_path} has {len(tgt)}")
    return list(zip(src, tgt))


def write_lines(path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            if "\n" in line:
                raise InvariantError("line contains an embedded newline")
            f.write(line)
            f.write("\n")


def write_parallel_corpus(pairs: Iterable[tuple[str, str]], source_path, target_path) -> None:
    pairs = list(pairs)
    write_lines(source_path, (s for s, _ in pairs))
    write_lines(target_path, (t for _, t in pairs))


# ---------------------------------------------------------------------------
# Pharaoh alignments

def _parse_link(tok: str, seps: str = "-"):
    for sep in seps:
        a, found, b = tok.partition(sep)
        if found and a.isdigit() and b.isdigit() and a.isascii() and b.isascii():
            return int(a), int(b), sep
    return None


def parse_alignment_line(line: str, path=None, lineno=None) -> tuple[Alignment, int]:
    """Parse one Pharaoh line into a one-to-one alignment.

    Returns the alignment and the number of links dropped because they
    reused an already linked source or target index (first link wins).
    Exact duplicates are collapsed silently.
    """
    links = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        parsed = _parse_link(tok)
        if parsed is None:
            raise FormatError(f"malformed alignment token {tok!r}", path, lineno, col + 1)
        links.append(parsed[:2])
        col += len(tok)
    kept: list[tuple[int, int]] = []
    seen = set()
    used_s, used_t = set(), set()
    conflicts = 0
    for i, j in links:
        if (i, j) in seen:
            continue
        seen.add((i, j))
        if i in used_s or j in used_t:
            conflicts += 1
            continue
        used_s.add(i)
        used_t.add(j)
        kept.append((i, j))
    return frozenset(kept), conflicts


def read_alignments(path) -> list[Alignment]:
    out = []
    conflicts = 0
    for lineno, line in enumerate(_read_lines(path), 1):
        links, n = parse_alignment_line(line, path, lineno)
        out.append(links)
        conflicts += n
    if conflicts:
        warnings.warn(f"{path}: dropped {conflicts} non one-to-one alignment link(s)",
                      AlignmentConflictWarning, stacklevel=2)
    return out


def read_gold_alignments(path, include_possible: bool = False) -> list[Alignment]:
    """Read a gold standard without enforcing one-to-one links.

    Sure links are written ``i-j``; possible links ``i?j`` or ``ipj``.
    Possible links are dropped unless ``include_possible`` is set.
    """
    out = []
    for lineno, line in enumerate(_read_lines(path), 1):
        links = set()
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            parsed = _parse_link(tok, "-?p")
            if parsed is None:
                raise FormatError(f"malformed alignment token {tok!r}", path, lineno, col + 1)
            i, j, sep = parsed
            if sep == "-" or include_possible:
                links.add((i, j))
            col += len(tok)
        out.append(frozenset(links))
    return out


def format_alignment(alignment: Iterable[tuple[int, int]]) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(alignment))


def write_alignments(path, alignments: Iterable[Iterable[tuple[int, int]]]) -> None:
    write_lines(path, (format_alignment(a) for a in alignments))


# ---------------------------------------------------------------------------
# CoNLL-U and token TSV

def iter_conllu_blocks(path) -> Iterator[tuple[int, list[str], list[tuple[int, list[str]]]]]:
    """Yield ``(first_line, comments, rows)`` per sentence.

    Rows are ``(line_number, columns)`` for ordinary word lines only;
    multiword ranges (``1-2``) and empty nodes (``3.1``) are dropped.
    """
    comments: list[str] = []
    rows: list[tuple[int, list[str]]] = []
    start = None
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            if rows or comments:
                yield start, comments, rows
            comments, rows, start = [], [], None
            continue
        if start is None:
            start = lineno
        if line.startswith("#"):
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise FormatError(f"expected 10 tab-separated columns, found {len(cols)}", path, lineno)
        if "-" in cols[0] or "." in cols[0]:
            continue
        if not cols[0].isdigit():
            raise FormatError(f"bad token id {cols[0]!r}", path, lineno, 1)
        rows.append((lineno, cols))
    if rows or comments:
        yield start, comments, rows


def _comment_metadata(comments: list[str]) -> dict:
    meta = {}
    for c in comments:
        key, sep, value = c[1:].partition("=")
        if sep:
            meta[key.strip()] = value.strip()
    return meta


def _lemma(cols: list[str]) -> str:
    return cols[1] if cols[2] in ("", "_") else cols[2]


def read_conllu(path) -> list[DependencyTree]:
    """Read dependency trees; malformed sentences are skipped with a warning."""
    trees = []
    for start, comments, rows in iter_conllu_blocks(path):
        if not rows:
            continue
        try:
            nodes = []
            for lineno, cols in rows:
                if not cols[6].isdigit():
                    raise InvariantError(f"line {lineno}: bad HEAD {cols[6]!r}")
                nodes.append(Node(int(cols[0]), cols[1], _lemma(cols), int(cols[6]), cols[7]))
            trees.append(DependencyTree(tuple(nodes), _comment_metadata(comments)))
        except InvariantError as exc:
            warnings.warn(f"{path}: skipping sentence at line {start}: {exc}", TreeSkippedWarning,
                          stacklevel=2)
    return trees


def read_conllu_sentences(path, language_tag: str = "") -> list[Sentence]:
    """Read forms and lemmas only; no tree validation, so no sentence is dropped."""
    out = []
    for _, _, rows in iter_conllu_blocks(path):
        if rows:
            out.append(Sentence.from_forms([c[1] for _, c in rows], [_lemma(c) for _, c in rows],
                                           language_tag))
    return out


def read_token_tsv(path, language_tag: str = "") -> list[Sentence]:
    """Read ``form<TAB>lemma`` lines with blank lines between sentences."""
    out = []
    forms: list[str] = []
    lemmas: list[str] = []
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip():
            if forms:
                out.append(Sentence.from_forms(forms, lemmas, language_tag))
            forms, lemmas = [], []
            continue
        form, _, lemma = line.partition("\t")
        if not form or "\t" in lemma:
            raise FormatError("expected form<TAB>lemma", path, lineno)
        forms.append(form)
        lemmas.append(form if lemma in ("", "_") else lemma)
    if forms:
        out.append(Sentence.from_forms(forms, lemmas, language_tag))
    return out


def read_lemmatized(path, language_tag: str = "") -> list[Sentence]:
    """Dispatch on extension: ``.conllu`` is CoNLL-U, anything else token TSV."""
    if os.fspath(path).endswith(".conllu"):
        return read_conllu_sentences(path, language_tag)
    return read_token_tsv(path, language_tag)


def load_aligned_pairs(alignments: Sequence[Alignment], *, corpus: Sequence[tuple[str, str]] | None = None,
                       source_sentences: Sequence[Sentence] | None = None,
                       target_sentences: Sequence[Sentence] | None = None) -> list[AlignedSentencePair]:
    """Zip tokenized sentences (or raw corpus lines) with their alignments.

    When lemmatized sentences are given they define the tokens; a raw
    corpus, if also given, must agree with them token for token.
    Without lemmatized input, lines are whitespace-tokenized and each
    lemma is the form itself.
    """
    if source_sentences is None or target_sentences is None:
        if corpus is None:
            raise ValueError("need either a corpus or lemmatized sentences")
        source_sentences = [Sentence.from_text(s) for s, _ in corpus]
        target_sentences = [Sentence.from_text(t) for _, t in corpus]
    elif corpus is not None:
        if len(corpus) != len(source_sentences):
            raise InvariantError(f"corpus has {len(corpus)} lines but lemma file has {len(source_sentences)} sentences")
        for n, ((s, t), ss, ts) in enumerate(zip(corpus, source_sentences, target_sentences), 1):
            if s.split() != ss.forms or t.split() != ts.forms:
                raise InvariantError(f"line {n}: corpus tokens disagree with lemma file")
    counts = {len(source_sentences), len(target_sentences), len(alignments)}
    if len(counts) != 1:
        raise InvariantError(f"sentence counts differ: {len(source_sentences)} source, "
                             f"{len(target_sentences)} target, {len(alignments)} alignments")
    pairs = []
    for n, (s, t, a) in enumerate(zip(source_sentences, target_sentences, alignments), 1):
        try:
            pairs.append(AlignedSentencePair(s, t, a))
        except InvariantError as exc:
            raise InvariantError(f"line {n}: {exc}") from None
    return pairs


# ---------------------------------------------------------------------------
# Corpus simplification

_DIGITS_SPACE = "0123456789 "
_ASCII_PUNCT = "!\"#%&'()*,-./:;?@[\\]_{}"
_EXTRA_PUNCT = "¡¿«»‘’“”…–—·"


def _chars(*ranges) -> frozenset:
    out = set()
    for r in ranges:
        if isinstance(r, str):
            out.update(r)
        else:
            lo, hi = r
            out.update(chr(c) for c in range(lo, hi + 1))
    return frozenset(out)


_SCRIPT_CHARS = {
    "latin": lambda: _chars((0x61, 0x7A), (0x41, 0x5A), (0xC0, 0xD6), (0xD8, 0xF6), (0xF8, 0xFF)),
    "greek": lambda: _chars((0x0370, 0x03FF), (0x1F00, 0x1FFF)),
    "han": lambda: _chars((0x4E00, 0x9FFF), (0x3000, 0x303F), (0xFF01, 0xFF5E)),
}


@dataclass(frozen=True)
class SimplifyConfig:
    """Per-language filter settings.

    ``allowed_chars`` of None disables the character check. Whitespace
    always passes the character check.
    """

    min_words: int = 4
    max_words: int = 16
    max_punct: int = 1
    allowed_chars: frozenset | None = None
    cjk_mode: bool = False
    min_symbols: int = 5
    max_symbols: int = 25
    lowercase: bool = True

    def __post_init__(self):
        if self.min_words > self.max_words:
            raise ValueError(f"min_words {self.min_words} > max_words {self.max_words}")
        if self.min_symbols > self.max_symbols:
            raise ValueError(f"min_symbols {self.min_symbols} > max_symbols {self.max_symbols}")
        if self.max_punct < 0:
            raise ValueError("max_punct must be non-negative")
        if self.allowed_chars is not None and not isinstance(self.allowed_chars, frozenset):
            object.__setattr__(self, "allowed_chars", frozenset(self.allowed_chars))

    @classmethod
    def for_script(cls, script: str, **kwargs) -> "SimplifyConfig":
        """Config whose allowed characters are ``script``'s letters plus digits,
        space and common punctuation. ``han`` also switches on symbol counting."""
        try:
            letters = _SCRIPT_CHARS[script]()
        except KeyError:
            raise ValueError(f"unknown script {script!r}; choose from {sorted(_SCRIPT_CHARS)}") from None
        kwargs.setdefault("cjk_mode", script == "han")
        return cls(allowed_chars=letters | _chars(_DIGITS_SPACE, _ASCII_PUNCT, _EXTRA_PUNCT), **kwargs)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("min_words", "max_words", "max_punct", "cjk_mode",
                                           "min_symbols", "max_symbols", "lowercase")}
        d["allowed_chars"] = None if self.allowed_chars is None else "".join(sorted(self.allowed_chars))
        return d


def is_punctuation(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def count_punctuation(text: str) -> int:
    return sum(1 for ch in text if is_punctuation(ch))


def count_symbols(text: str) -> int:
    """Non-whitespace, non-punctuation characters (used for logographic scripts)."""
    return sum(1 for ch in text if not ch.isspace() and not is_punctuation(ch))


def line_passes(text: str, config: SimplifyConfig) -> bool:
    """True iff ``text`` (already lowercased if the config asks for it) passes every filter."""
    if config.cjk_mode:
        n = count_symbols(text)
        if not config.min_symbols <= n <= config.max_symbols:
            return False
    else:
        n = len(text.split())
        if not config.min_words <= n <= config.max_words:
            return False
    if count_punctuation(text) > config.max_punct:
        return False
    if config.allowed_chars is not None:
        allowed = config.allowed_chars
        if any(ch not in allowed and not ch.isspace() for ch in text):
            return False
    return True


def simplify_corpus(pairs: Iterable[tuple[str, str]], source_config: SimplifyConfig | None = None,
                    target_config: SimplifyConfig | None = None) -> list[tuple[str, str]]:
    """Keep pairs whose both sides pass their config, lowercasing where configured."""
    source_config = source_config or SimplifyConfig()
    target_config = target_config or source_config
    out = []
    for src, tgt in pairs:
        if source_config.lowercase:
            src = src.lower()
        if target_config.lowercase:
            tgt = tgt.lower()
        if line_passes(src, source_config) and line_passes(tgt, target_config):
            out.append((src, tgt))
    return out


# ---------------------------------------------------------------------------
# Embeddings

def read_embeddings(path) -> list[EmbeddingRecord]:
    records = []
    dim = None
    for lineno, line in enumerate(_read_lines(path), 1):
        fields = line.split()
        try:
            vec = np.array([float(x) for x in fields], dtype=np.float64)
        except ValueError as exc:
            raise FormatError(str(exc), path, lineno) from None
        if vec.size == 0:
            raise FormatError("empty vector", path, lineno)
        if dim is None:
            dim = vec.size
        elif vec.size != dim:
            raise FormatError(f"dimension mismatch: expected {dim}, found {vec.size}", path, lineno)
        records.append(EmbeddingRecord(lineno - 1, vec))
    return records


def embedding_matrix(records: Sequence[EmbeddingRecord]) -> np.ndarray:
    if not records:
        return np.empty((0, 0))
    return np.vstack([r.vector for r in records])


def format_vector(vector) -> str:
    return " ".join(repr(float(x)) for x in vector)


def write_embeddings(path, vectors) -> None:
    write_lines(path, (format_vector(getattr(v, "vector", v)) for v in vectors))
