"""Entropy-based feature weighting shared by the symbolic learners."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from typing import Sequence


def entropy(labels: Sequence) -> float:
    """Shannon entropy of a label sample, in bits."""
    total = len(labels)
    if total == 0:
        return 0.0
    counts = Counter(labels)
    return -sum((c / total) * math.log2(c / total) for c in counts.values())


def information_gain(values: Sequence, classes: Sequence) -> float:
    """Mutual information between one feature's values and the class.

    H(class) minus the value-weighted conditional entropy.  A constant
    feature scores 0; a feature that is a bijection of the class scores
    the full class entropy.
    """
    if len(values) != len(classes):
        raise ValueError("values and classes must be aligned")
    total = len(classes)
    if total == 0:
        return 0.0
    by_value = defaultdict(list)
    for value, cls in zip(values, classes):
        by_value[value].append(cls)
    conditional = sum(
        (len(group) / total) * entropy(group) for group in by_value.values()
    )
    gain = entropy(classes) - conditional
    return max(gain, 0.0)


def split_info(values: Sequence) -> float:
    """Entropy of the feature's own value distribution."""
    return entropy(values)


def gain_ratio(values: Sequence, classes: Sequence) -> float:
    """Information gain normalized by split info; 0 for constant features."""
    si = split_info(values)
    if si == 0.0:
        return 0.0
    return information_gain(values, classes) / si
