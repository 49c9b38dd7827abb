"""Position-relative feature vectors for the per-word classifiers.

Every classifier sees one instance per word.  An instance is a fixed
arity tuple of value strings filled from slots that are named relative
to the focus word: surrounding words, surrounding POS tags, tags
predicted for earlier words in the same left-to-right pass, and, in a
cascaded second stage, first-stage tags in a window on both sides of
the focus.  Out-of-sentence slots are filled with ``BOUNDARY``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..corpus import Sentence, Token

#: Reserved value for slots that fall outside the sentence.
BOUNDARY = "<#>"

#: Reserved value substituted for word forms never seen in training.
UNKNOWN = "<?>"


@dataclass(frozen=True)
class ContextSpec:
    """Which slots an instance contains.

    ``word_left``/``word_right`` and ``pos_left``/``pos_right`` are
    window widths around the focus word; the focus slot itself is always
    included, unless word slots are disabled wholesale with
    ``use_words=False`` (the POS-only learners).  ``history`` adds the
    tags already predicted for the ``history`` words left of the focus.
    ``stage_window`` adds first-stage tags at offsets
    -stage_window..+stage_window, available only when a full per-word
    tag sequence is supplied at extraction time.
    """

    word_left: int = 4
    word_right: int = 4
    pos_left: int = 4
    pos_right: int = 4
    history: int = 0
    stage_window: int = 0
    use_words: bool = True

    def __post_init__(self):
        for name in ("word_left", "word_right", "pos_left", "pos_right", "history", "stage_window"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def slot_names(self) -> tuple:
        names = []
        if self.use_words:
            names += [f"w[{k:+d}]" for k in range(-self.word_left, self.word_right + 1)]
        names += [f"p[{k:+d}]" for k in range(-self.pos_left, self.pos_right + 1)]
        names += [f"t[{-k}]" for k in range(self.history, 0, -1)]
        if self.stage_window:
            names += [f"s[{k:+d}]" for k in range(-self.stage_window, self.stage_window + 1)]
        return tuple(names)

    def arity(self) -> int:
        return len(self.slot_names())


def _window(values: Sequence, index: int, left: int, right: int) -> list:
    out = []
    for k in range(index - left, index + right + 1):
        out.append(values[k] if 0 <= k < len(values) else BOUNDARY)
    return out


def extract_features(
    sentence,
    index: int,
    spec: ContextSpec,
    history: Sequence = (),
    stage_tags: Optional[Sequence] = None,
) -> tuple:
    """Build the instance for one word as a tuple of slot values.

    ``history`` must cover all positions before ``index`` when the spec
    asks for predicted-tag slots; ``stage_tags`` must cover the whole
    sentence when the spec asks for a first-stage tag window.
    Deterministic: the same arguments always yield the same tuple.
    """
    if not 0 <= index < len(sentence):
        raise IndexError(f"word index {index} out of range for sentence of length {len(sentence)}")
    values = []
    if spec.use_words:
        values += _window(sentence.words, index, spec.word_left, spec.word_right)
    values += _window(sentence.pos_tags, index, spec.pos_left, spec.pos_right)
    if spec.history:
        if len(history) < index:
            raise ValueError(
                f"history covers {len(history)} positions but index is {index}"
            )
        for k in range(spec.history, 0, -1):
            pos = index - k
            values.append(history[pos] if pos >= 0 else BOUNDARY)
    if spec.stage_window:
        if stage_tags is None or len(stage_tags) != len(sentence):
            raise ValueError("stage_window requires a full-sentence tag sequence")
        values += _window(stage_tags, index, spec.stage_window, spec.stage_window)
    return tuple(values)


def mask_unknown_words(sentence: Sentence, known_words) -> Sentence:
    """Copy of the sentence with out-of-vocabulary words replaced by UNKNOWN."""
    if all(t.word in known_words for t in sentence.tokens):
        return sentence
    tokens = tuple(
        t if t.word in known_words else Token(UNKNOWN, t.pos) for t in sentence.tokens
    )
    return Sentence(tokens, sentence.gold)
