"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths:
phrase sets are enumerated recursively, bracket pairing is resolved by
exhaustive search, and scoring is recomputed with plain loops.  Tests
compare library output against these, not against itself.
"""

import random

import pytest

from npchunk import Sentence, Span, Token

# The 17-token example sentence with its six chunks and standard WSJ tags.
EXAMPLE_TOKENS = [
    ("In", "IN"), ("early", "JJ"), ("trading", "NN"), ("in", "IN"),
    ("Hong", "NNP"), ("Kong", "NNP"), ("Monday", "NNP"), (",", ","),
    ("gold", "NN"), ("was", "VBD"), ("quoted", "VBN"), ("at", "IN"),
    ("$", "$"), ("366.50", "CD"), ("an", "DT"), ("ounce", "NN"), (".", "."),
]
EXAMPLE_PHRASES = frozenset(
    {Span(1, 2), Span(4, 5), Span(6, 6), Span(8, 8), Span(12, 13), Span(14, 15)}
)
EXAMPLE_IOB1 = "O I I O I I B O I O O O I I B I O".split()
EXAMPLE_IOB2 = "O B I O B I B O B O O O B I B I O".split()
EXAMPLE_IOE2 = "O I E O I E E O E O O O I E I E O".split()
EXAMPLE_OPENS = {1, 4, 6, 8, 12, 14}
EXAMPLE_CLOSES = {2, 5, 6, 8, 13, 15}


@pytest.fixture
def example_sentence() -> Sentence:
    tokens = tuple(Token(w, p) for w, p in EXAMPLE_TOKENS)
    return Sentence(tokens, EXAMPLE_PHRASES)


def all_phrase_sets(length: int) -> list:
    """Every valid phrase set on a sentence of ``length`` words."""
    results = []

    def walk(pos, acc):
        if pos >= length:
            results.append(frozenset(acc))
            return
        walk(pos + 1, acc)
        for end in range(pos, length):
            acc.append(Span(pos, end))
            walk(end + 1, acc)
            acc.pop()

    walk(0, [])
    return results


def random_phrase_set(rng: random.Random, length: int) -> frozenset:
    """Sample one valid phrase set uniformly-ish by a left-to-right walk."""
    spans = []
    pos = 0
    while pos < length:
        if rng.random() < 0.45:
            end = min(length - 1, pos + rng.randrange(0, 3))
            spans.append(Span(pos, end))
            pos = end + 1
        else:
            pos += 1
    return frozenset(spans)


def brute_force_pairing(opens, closes) -> frozenset:
    """Exhaustive shortest-phrase resolution of candidate brackets.

    Among all valid phrase sets whose every span starts at an open
    candidate and ends at a close candidate: most spans first, then
    smallest total span length, then lexicographically smallest.
    """
    candidates = [
        s
        for s in all_phrase_sets(len(opens))
        if all(opens[sp.start] and closes[sp.end] for sp in s)
    ]

    def key(s):
        spans = sorted(s)
        return (-len(s), sum(e - b + 1 for b, e in spans), spans)

    return min(candidates, key=key)


def brute_force_evaluate(pred, gold, lengths) -> dict:
    """Plain-loop scorer: span set intersection plus per-word accuracies."""
    found_correct = found_total = gold_total = 0
    open_correct = close_correct = word_total = 0
    for p, g, n in zip(pred, gold, lengths):
        for span in p:
            if span in g:
                found_correct += 1
        found_total += len(p)
        gold_total += len(g)
        for i in range(n):
            p_open = any(s.start == i for s in p)
            g_open = any(s.start == i for s in g)
            p_close = any(s.end == i for s in p)
            g_close = any(s.end == i for s in g)
            open_correct += p_open == g_open
            close_correct += p_close == g_close
        word_total += n
    precision = found_correct / found_total if found_total else 0.0
    recall = found_correct / gold_total if gold_total else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {
        "found_correct": found_correct,
        "found_total": found_total,
        "gold_total": gold_total,
        "open_correct": open_correct,
        "close_correct": close_correct,
        "word_total": word_total,
        "precision": precision,
        "recall": recall,
        "f": f,
    }


def tiny_sentence(words_pos, gold=None) -> Sentence:
    tokens = tuple(Token(w, p) for w, p in words_pos)
    spans = None if gold is None else frozenset(Span(s, e) for s, e in gold)
    return Sentence(tokens, spans)
