"""Deterministic synthetic chunking corpora.

Licensed newspaper data cannot ship with the repository, so experiments
and tests run on generated financial-flavored sentences instead.  The
generator is a small template grammar over a fixed vocabulary: chunks
are determiner/adjective/noun groups, verbs and prepositions stay
outside, and price expressions produce the adjacent-chunk boundaries
that make the tagging schemes differ.

Two properties are engineered in:

* gerunds are chunk-internal for some word forms and chunk-external for
  others, a lexical distinction POS-only learners cannot represent,
* the noun vocabulary is large enough that held-out data contains
  unseen word combinations.

Everything is driven by one seeded RNG, so a (sentence count, seed)
pair always yields the same corpus.
"""

from __future__ import annotations

import random

from .corpus import Corpus, Sentence, Token
from .chunks import Span

_DETS = ["the", "a", "an", "this", "some", "its"]
_ADJS = [
    "early", "late", "big", "small", "new", "old", "strong", "weak",
    "quarterly", "foreign", "domestic", "heavy",
]
_NOUNS = [
    "trading", "market", "gold", "price", "share", "stock", "bond", "index",
    "bank", "firm", "ounce", "profit", "loss", "rate", "dollar", "yield",
    "volume", "report", "quarter", "analyst", "investor", "company", "deal",
    "sector", "fund", "growth", "value", "surplus", "deficit", "contract",
    "margin", "revenue", "estimate", "forecast", "target", "outlook",
]
_PLURALS = ["shares", "stocks", "bonds", "prices", "profits", "gains", "losses", "futures"]
_PROPER = ["Monday", "Tuesday", "Friday", "London", "Tokyo", "Amex", "Nasdaq", "Kong"]
_VERBS = ["rose", "fell", "said", "bought", "sold", "reported", "quoted", "closed"]
_ADVS = ["sharply", "slightly", "quietly", "unexpectedly"]
_PREPS = ["in", "of", "at", "on", "with", "against"]

#: Gerunds that belong inside the chunk they precede ("[early trading
#: volume]") versus gerunds that stay outside ("rising [prices]").
_INNER_GERUNDS = ["trading", "operating"]
_OUTER_GERUNDS = ["rising", "falling", "declining"]


def _amount(rng: random.Random) -> str:
    whole = rng.randrange(1, 400)
    return f"{whole}.{rng.randrange(0, 100):02d}"


def _noun_phrase(rng: random.Random, tokens: list, spans: list) -> None:
    """Append one base noun group and record its span."""
    start = len(tokens)
    kind = rng.random()
    if kind < 0.12:
        tokens.append((rng.choice(_PROPER), "NNP"))
    elif kind < 0.24:
        tokens.append((rng.choice(_PLURALS), "NNS"))
    elif kind < 0.42:
        # Gerund-led group: same POS shape either way, but only the
        # inner gerunds belong to the chunk.
        gerund = rng.choice(_INNER_GERUNDS + _OUTER_GERUNDS)
        tokens.append((gerund, "VBG"))
        if gerund in _OUTER_GERUNDS:
            start = len(tokens)
        tokens.append((rng.choice(_NOUNS), "NN"))
    else:
        if rng.random() < 0.7:
            tokens.append((rng.choice(_DETS), "DT"))
        if rng.random() < 0.5:
            tokens.append((rng.choice(_ADJS), "JJ"))
        tokens.append((rng.choice(_NOUNS), "NN"))
        if rng.random() < 0.2:
            tokens.append((rng.choice(_NOUNS), "NN"))
    spans.append(Span(start, len(tokens) - 1))


def _price_phrase(rng: random.Random, tokens: list, spans: list) -> None:
    """A money amount chunk immediately followed by a unit chunk."""
    start = len(tokens)
    tokens.append(("$", "$"))
    tokens.append((_amount(rng), "CD"))
    spans.append(Span(start, len(tokens) - 1))
    start = len(tokens)
    tokens.append(("an", "DT"))
    tokens.append((rng.choice(["ounce", "share", "contract"]), "NN"))
    spans.append(Span(start, len(tokens) - 1))


def generate_sentence(rng: random.Random) -> Sentence:
    tokens: list = []
    spans: list = []
    _noun_phrase(rng, tokens, spans)
    tokens.append((rng.choice(_VERBS), "VBD"))
    if rng.random() < 0.3:
        tokens.append((rng.choice(_ADVS), "RB"))
    roll = rng.random()
    if roll < 0.25:
        tokens.append(("at", "IN"))
        _price_phrase(rng, tokens, spans)
    elif roll < 0.7:
        tokens.append((rng.choice(_PREPS), "IN"))
        _noun_phrase(rng, tokens, spans)
    else:
        _noun_phrase(rng, tokens, spans)
    if rng.random() < 0.35:
        tokens.append((rng.choice(_PREPS), "IN"))
        _noun_phrase(rng, tokens, spans)
    if rng.random() < 0.15:
        # Bare temporal chunk right after another chunk.
        start = len(tokens)
        tokens.append((rng.choice(["Monday", "Tuesday", "Friday"]), "NNP"))
        spans.append(Span(start, len(tokens) - 1))
    tokens.append((".", "."))
    return Sentence(tuple(Token(w, p) for w, p in tokens), frozenset(spans))


def generate_corpus(n_sentences: int, seed: int = 0) -> Corpus:
    """Generate a reproducible annotated corpus."""
    if n_sentences < 0:
        raise ValueError(f"n_sentences must be >= 0: {n_sentences}")
    rng = random.Random(seed)
    return Corpus(tuple(generate_sentence(rng) for _ in range(n_sentences)))
