"""Chunk spans, per-word tagging schemes, and the open/close bracket view.

A chunk structure over a sentence is a set of non-overlapping,
non-nesting word-index spans.  This module defines that structure and
three interchangeable encodings of it:

* four tagging schemes over the alphabets {I, O, B} and {I, O, E},
  differing in when the begin (B) or end (E) marker is used,
* a bracket view made of two boolean streams, one marking words that
  open a chunk and one marking words that close a chunk,
* a per-word code string serialization of the bracket view
  (".", "[", "]", "[]").

Encoding a valid span set is unambiguous.  Decoding is total: tag
sequences produced by noisy classifiers may violate the scheme rules
and are repaired deterministically rather than rejected (see
``decode``), and arbitrary open/close candidate streams are resolved
to the shortest consistent spans (see ``pair_brackets``).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence, Union


class Span(NamedTuple):
    """A chunk, as an inclusive (start, end) pair of word indices."""

    start: int
    end: int


PhraseSet = frozenset  # frozenset[Span], one per sentence


class TagScheme(str, Enum):
    """The four per-word tagging schemes.

    All four mark chunk-internal words I and outside words O.  They
    differ in the extra marker:

    * IOB1: B on a chunk-initial word only when the previous word ends
      another chunk.
    * IOB2: B on every chunk-initial word.
    * IOE1: E on a chunk-final word only when the next word starts
      another chunk.
    * IOE2: E on every chunk-final word.
    """

    IOB1 = "IOB1"
    IOB2 = "IOB2"
    IOE1 = "IOE1"
    IOE2 = "IOE2"

    @property
    def alphabet(self) -> frozenset:
        if self in (TagScheme.IOB1, TagScheme.IOB2):
            return frozenset("IOB")
        return frozenset("IOE")


#: Name of the bracket representation, usable wherever a scheme name is
#: accepted.  It is not a ``TagScheme``: its "tags" are the four bracket
#: codes below, and decoding goes through ``pair_brackets``.
BRACKETS = "O+C"

#: All five output representations, in canonical order.
REPRESENTATIONS = ("IOB1", "IOB2", "IOE1", "IOE2", BRACKETS)

#: Per-word bracket codes: none, open, close, open-and-close.
BRACKET_CODES = (".", "[", "]", "[]")


@dataclass(frozen=True)
class BracketStream:
    """Per-word open and close decisions for one sentence."""

    opens: tuple
    closes: tuple

    def __post_init__(self):
        object.__setattr__(self, "opens", tuple(bool(v) for v in self.opens))
        object.__setattr__(self, "closes", tuple(bool(v) for v in self.closes))
        if len(self.opens) != len(self.closes):
            raise ValueError(
                "open and close streams differ in length: "
                f"{len(self.opens)} != {len(self.closes)}"
            )

    def __len__(self) -> int:
        return len(self.opens)


def check_spans(spans: Iterable, length: int) -> frozenset:
    """Validate a span collection for a sentence of ``length`` words.

    Returns the spans as a frozenset.  Raises ``ValueError`` if any span
    is out of range, inverted, or shares a word with another span
    (overlap and nesting are both word sharing, so one check covers
    both).
    """
    out = frozenset(Span(int(s), int(e)) for s, e in spans)
    prev_end = -1
    for span in sorted(out):
        if span.start > span.end:
            raise ValueError(f"inverted span {span}")
        if span.start < 0 or span.end >= length:
            raise ValueError(f"span {span} outside sentence of length {length}")
        if span.start <= prev_end:
            raise ValueError(f"span {span} overlaps a previous span")
        prev_end = span.end
    return out


def _as_scheme(scheme: Union[TagScheme, str]) -> Union[TagScheme, str]:
    """Coerce a scheme argument; returns a TagScheme or the BRACKETS name."""
    if isinstance(scheme, TagScheme):
        return scheme
    if scheme == BRACKETS:
        return BRACKETS
    try:
        return TagScheme(scheme)
    except ValueError:
        raise ValueError(
            f"unknown representation {scheme!r}; expected one of {REPRESENTATIONS}"
        ) from None


def encode(phrases: Iterable, length: int, scheme: Union[TagScheme, str]) -> list:
    """Encode a valid span set as per-word tags under ``scheme``.

    ``scheme`` may also be ``BRACKETS``, in which case the bracket code
    strings are returned instead of I/O/B/E tags.
    """
    spans = check_spans(phrases, length)
    scheme = _as_scheme(scheme)
    if scheme == BRACKETS:
        return stream_to_codes(to_brackets(spans, length))
    tags = ["O"] * length
    starts = {s.start for s in spans}
    ends = {s.end for s in spans}
    for start, end in spans:
        for i in range(start, end + 1):
            tags[i] = "I"
    if scheme is TagScheme.IOB2:
        for start in starts:
            tags[start] = "B"
    elif scheme is TagScheme.IOB1:
        for start in starts:
            if start - 1 in ends:
                tags[start] = "B"
    elif scheme is TagScheme.IOE2:
        for end in ends:
            tags[end] = "E"
    elif scheme is TagScheme.IOE1:
        for end in ends:
            if end + 1 in starts:
                tags[end] = "E"
    return tags


def decode(tags: Sequence, scheme: Union[TagScheme, str]) -> frozenset:
    """Decode per-word tags to a span set, repairing invalid sequences.

    Total on any sequence over the scheme's alphabet.  The repair rules
    are forgiving: under the IOB schemes a chunk starts at B, or at an I
    with no chunk already open; under the IOE schemes a chunk ends at E,
    or at an I whose successor is O or the sentence end.  For sequences
    that are valid for their scheme this is exactly the inverse of
    ``encode``.

    Raises ``ValueError`` on a symbol outside the scheme's alphabet.
    """
    scheme = _as_scheme(scheme)
    if scheme == BRACKETS:
        return pair_brackets(codes_to_stream(tags))
    alphabet = scheme.alphabet
    for i, tag in enumerate(tags):
        if tag not in alphabet:
            raise ValueError(f"tag {tag!r} at position {i} not in {scheme.value} alphabet")
    spans = []
    start = None
    if scheme in (TagScheme.IOB1, TagScheme.IOB2):
        for i, tag in enumerate(tags):
            if tag == "O":
                if start is not None:
                    spans.append(Span(start, i - 1))
                    start = None
            elif tag == "B":
                if start is not None:
                    spans.append(Span(start, i - 1))
                start = i
            else:
                if start is None:
                    start = i
    else:
        for i, tag in enumerate(tags):
            if tag == "O":
                if start is not None:
                    spans.append(Span(start, i - 1))
                    start = None
            elif tag == "E":
                if start is None:
                    start = i
                spans.append(Span(start, i))
                start = None
            else:
                if start is None:
                    start = i
    if start is not None:
        spans.append(Span(start, len(tags) - 1))
    return frozenset(spans)


def convert(
    tags: Sequence,
    source: Union[TagScheme, str],
    target: Union[TagScheme, str],
) -> list:
    """Re-encode a tag sequence under another scheme.

    Equal to ``encode(decode(tags, source), len(tags), target)``, so it
    is total on noisy input and preserves the decoded spans.
    """
    return encode(decode(tags, source), len(tags), target)


def to_brackets(phrases: Iterable, length: int) -> BracketStream:
    """Convert a valid span set to its open/close boolean streams."""
    spans = check_spans(phrases, length)
    opens = [False] * length
    closes = [False] * length
    for start, end in spans:
        opens[start] = True
        closes[end] = True
    return BracketStream(opens, closes)


def pair_brackets(stream: BracketStream) -> frozenset:
    """Build spans from open/close candidates, preferring shortest spans.

    Scans left to right keeping only the most recent unconsumed open
    candidate: a newer open supersedes older ones, since pairing an
    older open past a newer one could only produce a longer or nested
    span.  Each close candidate pairs with the pending open, if any;
    candidates that never pair are discarded.  O(n), deterministic, and
    the exact inverse of ``to_brackets`` on streams derived from valid
    span sets.
    """
    spans = []
    pending = None
    for i in range(len(stream)):
        if stream.opens[i]:
            pending = i
        if stream.closes[i] and pending is not None:
            spans.append(Span(pending, i))
            pending = None
    return frozenset(spans)


def tags_to_stream(tags: Sequence, scheme: Union[TagScheme, str]) -> BracketStream:
    """Decode any representation's per-word output to a bracket stream."""
    if _as_scheme(scheme) == BRACKETS:
        return codes_to_stream(tags)
    return to_brackets(decode(tags, scheme), len(tags))


def stream_to_codes(stream: BracketStream) -> list:
    """Serialize a bracket stream as per-word code strings."""
    table = {(False, False): ".", (True, False): "[", (False, True): "]", (True, True): "[]"}
    return [table[o, c] for o, c in zip(stream.opens, stream.closes)]


def codes_to_stream(codes: Sequence) -> BracketStream:
    """Parse per-word bracket codes back into a stream.

    Raises ``ValueError`` on a code outside ``BRACKET_CODES``.
    """
    opens = []
    closes = []
    for i, code in enumerate(codes):
        if code not in BRACKET_CODES:
            raise ValueError(f"bad bracket code {code!r} at position {i}")
        opens.append("[" in code)
        closes.append("]" in code)
    return BracketStream(opens, closes)
