"""Column-format corpora: tokens, sentences, reading, writing, splitting.

The file format is one token per line with space separated fields
``WORD POS [TAG]``; an empty line terminates a sentence.  Reading is
liberal (any run of spaces or tabs separates fields, a missing final
blank line is accepted); writing is bit-exact: single spaces, LF line
endings, and a terminating blank line after the last sentence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

from .chunks import Span, TagScheme, check_spans, decode, encode


class FormatError(ValueError):
    """Raised on malformed corpus input."""


_WHITESPACE = (" ", "\t", "\n")


@dataclass(frozen=True)
class Token:
    """A word with its part-of-speech tag."""

    word: str
    pos: str

    def __post_init__(self):
        for name, value in (("word", self.word), ("pos", self.pos)):
            if not value or any(ch in value for ch in _WHITESPACE):
                raise ValueError(f"token {name} must be non-empty and whitespace-free: {value!r}")


@dataclass(frozen=True)
class Sentence:
    """An ordered token sequence with an optional gold chunk annotation."""

    tokens: tuple
    gold: Optional[frozenset] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")
        if self.gold is not None:
            object.__setattr__(self, "gold", check_spans(self.gold, len(self.tokens)))

    def __len__(self) -> int:
        return len(self.tokens)

    @cached_property
    def words(self) -> tuple:
        return tuple(t.word for t in self.tokens)

    @cached_property
    def pos_tags(self) -> tuple:
        return tuple(t.pos for t in self.tokens)

    def with_gold(self, phrases: Iterable) -> "Sentence":
        return Sentence(self.tokens, frozenset(Span(s, e) for s, e in phrases))


@dataclass(frozen=True)
class Corpus:
    """An ordered sequence of sentences.

    Order is preserved exactly as read; splitting and evaluation both
    depend on it.
    """

    sentences: tuple

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Corpus(self.sentences[index])
        return self.sentences[index]

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def gold_phrases(self) -> list:
        """Per-sentence gold span sets; raises if any sentence lacks one."""
        missing = [i for i, s in enumerate(self.sentences) if s.gold is None]
        if missing:
            raise ValueError(f"sentence {missing[0]} has no gold annotation")
        return [s.gold for s in self.sentences]


@dataclass(frozen=True)
class SplitSpec:
    """How to carve a corpus into a training part and a tuning part.

    ``prefix`` mode assigns the first ceil(train_fraction * N) sentences
    to the training part.  ``interleaved`` mode sends every k-th
    sentence to the tuning part, where k = round(1 / (1 -
    train_fraction)); sentence i goes to tuning iff i % k == k - 1.
    """

    train_fraction: float = 0.9
    mode: str = "prefix"

    def __post_init__(self):
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValueError(f"train_fraction must be in (0, 1]: {self.train_fraction}")
        if self.mode not in ("prefix", "interleaved"):
            raise ValueError(f"unknown split mode {self.mode!r}")


def read_corpus(
    source: Union[IO, Iterable],
    scheme: Union[TagScheme, str, None] = TagScheme.IOB1,
) -> Corpus:
    """Read a column-format corpus from a line iterable or open file.

    When every token of a sentence carries a third column, that
    sentence's gold annotation is decoded under ``scheme`` (IOB1 unless
    overridden; pass ``chunks.BRACKETS`` for bracket-code files, or
    ``None`` to ignore the annotation column entirely).  Sentences
    without an annotation column get ``gold=None``.

    Raises ``FormatError`` on a wrong field count, on an annotation
    column present for only part of a sentence, or on a tag symbol the
    scheme cannot decode.
    """
    sentences = []
    tokens = []
    tags = []
    lineno = 0

    def flush():
        if not tokens:
            return
        gold = None
        if tags and scheme is not None:
            try:
                gold = decode(tags, scheme)
            except ValueError as exc:
                raise FormatError(f"sentence ending at line {lineno}: {exc}") from None
        sentences.append(Sentence(tuple(tokens), gold))
        tokens.clear()
        tags.clear()

    for lineno, line in enumerate(source, start=1):
        fields = line.split()
        if not fields:
            flush()
            continue
        if len(fields) == 2:
            if tags:
                raise FormatError(f"line {lineno}: missing annotation column")
            tokens.append(Token(fields[0], fields[1]))
        elif len(fields) == 3:
            if tokens and not tags:
                raise FormatError(f"line {lineno}: unexpected annotation column")
            tokens.append(Token(fields[0], fields[1]))
            tags.append(fields[2])
        else:
            raise FormatError(f"line {lineno}: expected 2 or 3 fields, got {len(fields)}")
    flush()
    return Corpus(tuple(sentences))


def write_corpus(
    corpus: Corpus,
    scheme: Union[TagScheme, str],
    sink: IO,
    phrases: Optional[Sequence] = None,
) -> None:
    """Write a corpus in the column format with an annotation column.

    The annotation comes from each sentence's gold span set, or from the
    per-sentence ``phrases`` override.  Raises ``ValueError`` if a
    sentence has neither.
    """
    if phrases is not None and len(phrases) != len(corpus):
        raise ValueError(f"{len(phrases)} phrase sets for {len(corpus)} sentences")
    for i, sentence in enumerate(corpus):
        spans = phrases[i] if phrases is not None else sentence.gold
        if spans is None:
            raise ValueError(f"sentence {i} has no annotation to write")
        tags = encode(spans, len(sentence), scheme)
        for token, tag in zip(sentence.tokens, tags):
            sink.write(f"{token.word} {token.pos} {tag}\n")
        sink.write("\n")


def write_tagged(corpus: Corpus, tags: Sequence, sink: IO) -> None:
    """Write the column format with arbitrary per-word tag strings.

    Unlike ``write_corpus`` this does not go through a span encoding, so
    noisy classifier output is preserved verbatim in interchange files.
    """
    if len(tags) != len(corpus):
        raise ValueError(f"{len(tags)} tag sequences for {len(corpus)} sentences")
    for sentence, sentence_tags in zip(corpus, tags):
        if len(sentence_tags) != len(sentence):
            raise ValueError("tag sequence length does not match its sentence")
        for token, tag in zip(sentence.tokens, sentence_tags):
            sink.write(f"{token.word} {token.pos} {tag}\n")
        sink.write("\n")


def write_tagged_file(corpus: Corpus, tags: Sequence, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        write_tagged(corpus, tags, handle)


def read_tagged(source: Union[IO, Iterable]) -> tuple:
    """Read a tagged file without decoding: (corpus, raw tag sequences).

    Every sentence must carry the annotation column.
    """
    sentences = []
    all_tags = []
    tokens = []
    tags = []
    lineno = 0

    def flush():
        if not tokens:
            return
        sentences.append(Sentence(tuple(tokens), None))
        all_tags.append(list(tags))
        tokens.clear()
        tags.clear()

    for lineno, line in enumerate(source, start=1):
        fields = line.split()
        if not fields:
            flush()
            continue
        if len(fields) != 3:
            raise FormatError(f"line {lineno}: expected 3 fields, got {len(fields)}")
        tokens.append(Token(fields[0], fields[1]))
        tags.append(fields[2])
    flush()
    return Corpus(tuple(sentences)), all_tags


def read_tagged_file(path) -> tuple:
    with open(path, "r", encoding="utf-8") as handle:
        return read_tagged(handle)


def read_corpus_file(path, scheme: Union[TagScheme, str] = TagScheme.IOB1) -> Corpus:
    with open(path, "r", encoding="utf-8") as handle:
        return read_corpus(handle, scheme)


def write_corpus_file(corpus: Corpus, scheme: Union[TagScheme, str], path, phrases=None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        write_corpus(corpus, scheme, handle, phrases)


def split_corpus(corpus: Corpus, spec: SplitSpec, require_both: bool = False):
    """Partition a corpus into (train, tune) parts per ``spec``.

    Deterministic, order preserving, and exhaustive: every sentence
    lands in exactly one part.  With ``require_both`` an empty part
    raises ``ValueError``.
    """
    if len(corpus) == 0:
        raise ValueError("cannot split an empty corpus")
    if spec.train_fraction == 1.0:
        train, tune = list(corpus.sentences), []
    elif spec.mode == "prefix":
        cut = math.ceil(spec.train_fraction * len(corpus))
        train, tune = list(corpus.sentences[:cut]), list(corpus.sentences[cut:])
    else:
        period = round(1.0 / (1.0 - spec.train_fraction))
        train, tune = [], []
        for i, sentence in enumerate(corpus):
            (tune if i % period == period - 1 else train).append(sentence)
    if require_both and (not train or not tune):
        raise ValueError(
            f"split with train_fraction={spec.train_fraction} left an empty part "
            f"({len(train)} train, {len(tune)} tune sentences)"
        )
    return Corpus(tuple(train)), Corpus(tuple(tune))


def sentence_from_pairs(pairs: Iterable, gold: Optional[Iterable] = None) -> Sentence:
    """Build a sentence from (word, pos) pairs, a small test convenience."""
    tokens = tuple(Token(w, p) for w, p in pairs)
    spans = None if gold is None else frozenset(Span(s, e) for s, e in gold)
    return Sentence(tokens, spans)
