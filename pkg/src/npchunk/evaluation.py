"""Phrase precision/recall/F scoring and result tables.

A predicted chunk counts as correct only when an identical (start, end)
span exists in the gold annotation of the same sentence.  Counts are
aggregated over the whole corpus (micro-average).  Besides the phrase
level metrics, reports carry per-word accuracies for the open and close
bracket decisions, the two numbers the result tables list alongside F.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .chunks import to_brackets


def f_beta(p: float, r: float, beta: float = 1.0) -> float:
    """The F measure (1 + b^2) * p * r / (b^2 * p + r), 0 on a zero denominator."""
    if beta <= 0:
        raise ValueError(f"beta must be positive: {beta}")
    denom = beta * beta * p + r
    if denom == 0.0:
        return 0.0
    return (1.0 + beta * beta) * p * r / denom


@dataclass(frozen=True)
class EvalReport:
    """Aggregated chunking scores for one system."""

    found_correct: int
    found_total: int
    gold_total: int
    open_correct: int
    close_correct: int
    word_total: int
    beta: float = 1.0

    @property
    def precision(self) -> float:
        return self.found_correct / self.found_total if self.found_total else 0.0

    @property
    def recall(self) -> float:
        return self.found_correct / self.gold_total if self.gold_total else 0.0

    @property
    def f_score(self) -> float:
        return f_beta(self.precision, self.recall, self.beta)

    @property
    def accuracy_open(self) -> float:
        return self.open_correct / self.word_total if self.word_total else 0.0

    @property
    def accuracy_close(self) -> float:
        return self.close_correct / self.word_total if self.word_total else 0.0

    def to_kv(self, prefix: str = "") -> str:
        """Machine-readable one-metric-per-line rendering, full precision."""
        pairs = [
            ("found_correct", self.found_correct),
            ("found_total", self.found_total),
            ("gold_total", self.gold_total),
            ("open_correct", self.open_correct),
            ("close_correct", self.close_correct),
            ("word_total", self.word_total),
            ("precision", repr(self.precision)),
            ("recall", repr(self.recall)),
            ("f_score", repr(self.f_score)),
            ("accuracy_open", repr(self.accuracy_open)),
            ("accuracy_close", repr(self.accuracy_close)),
        ]
        return "".join(f"{prefix}{key} {value}\n" for key, value in pairs)


def evaluate(
    pred: Sequence,
    gold: Sequence,
    lengths: Sequence,
    beta: float = 1.0,
) -> EvalReport:
    """Score per-sentence predicted span sets against gold span sets.

    ``lengths`` gives each sentence's word count, needed for the bracket
    accuracies.  Raises ``ValueError`` when the three sequences are not
    aligned.
    """
    if not (len(pred) == len(gold) == len(lengths)):
        raise ValueError(
            f"misaligned inputs: {len(pred)} predicted, {len(gold)} gold, "
            f"{len(lengths)} lengths"
        )
    found_correct = found_total = gold_total = 0
    open_correct = close_correct = word_total = 0
    for pred_spans, gold_spans, length in zip(pred, gold, lengths):
        pred_spans = frozenset(pred_spans)
        gold_spans = frozenset(gold_spans)
        found_correct += len(pred_spans & gold_spans)
        found_total += len(pred_spans)
        gold_total += len(gold_spans)
        ps = to_brackets(pred_spans, length)
        gs = to_brackets(gold_spans, length)
        open_correct += sum(a == b for a, b in zip(ps.opens, gs.opens))
        close_correct += sum(a == b for a, b in zip(ps.closes, gs.closes))
        word_total += length
    return EvalReport(
        found_correct=found_correct,
        found_total=found_total,
        gold_total=gold_total,
        open_correct=open_correct,
        close_correct=close_correct,
        word_total=word_total,
        beta=beta,
    )


def evaluate_corpus(pred: Sequence, corpus, beta: float = 1.0) -> EvalReport:
    """Score predictions against a corpus that carries gold annotation."""
    return evaluate(pred, corpus.gold_phrases(), [len(s) for s in corpus], beta)


_HEADER = ("system", "open", "close", "precision", "recall", "F")


def render_report(reports: Iterable[Tuple[str, EvalReport]]) -> str:
    """Render named reports as a fixed-width text table.

    Percentages with two decimals, F on the conventional 0-100 scale,
    rounding applied only here.
    """
    rows = [
        (
            name,
            f"{100.0 * r.accuracy_open:6.2f}%",
            f"{100.0 * r.accuracy_close:6.2f}%",
            f"{100.0 * r.precision:6.2f}%",
            f"{100.0 * r.recall:6.2f}%",
            f"{100.0 * r.f_score:6.2f}",
        )
        for name, r in reports
    ]
    widths = [
        max([len(_HEADER[col])] + [len(row[col]) for row in rows])
        for col in range(len(_HEADER))
    ]
    lines = []
    for row in [_HEADER] + rows:
        cells = [row[0].ljust(widths[0])] + [
            row[col].rjust(widths[col]) for col in range(1, len(_HEADER))
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
