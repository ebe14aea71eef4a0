"""One-layer prefix label maps, inverses, projections, and count criteria.

The label set for dimension d is {0, Delta, 2, 3, ..., d-1}; it has exactly
d members.  Labels are encoded as small integers: 0 for the identity label,
1 for Delta, and a for the numeric label a (2 <= a <= d-1).  At threshold c
a label sigma acts on a prefix vector z through the stop rank it selects:

    0      -> rank 0 (no decrement),
    Delta  -> rank rho_c(z), the first position holding c (else d-1),
    a      -> rank a when rho_c(z) < a, else rank a-1.

For fixed (c, z) the d labels select the d stop ranks in some order, which
is what makes a per-layer label permutation a Latin direction assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import decode_grid, encode_grid, prefix_decrement
from .errors import InvalidInput, ResourceLimit

__all__ = [
    "LABEL_ZERO",
    "LABEL_DELTA",
    "LabelCounts",
    "label_set",
    "label_name",
    "rho",
    "label_rank",
    "label_rank_of",
    "apply_label",
    "invert_label",
    "check_prefix_counts",
    "compose_labels",
    "drift_sum",
]

LABEL_ZERO = 0
LABEL_DELTA = 1


def label_set(d: int) -> tuple[int, ...]:
    """All d label codes for dimension d, in canonical order 0, Delta, 2, ..."""
    return tuple(range(d))


def label_name(label: int) -> str:
    return "Delta" if label == LABEL_DELTA else str(label)


def _check_label(label: int, d: int) -> None:
    if not 0 <= label <= d - 1:
        raise InvalidInput(f"label {label} invalid for dimension {d}")


@dataclass(frozen=True)
class LabelCounts:
    """Occurrence counts of each label in a return word."""

    n0: int
    ndelta: int
    numeric: tuple[int, ...]

    @property
    def total(self) -> int:
        return self.n0 + self.ndelta + sum(self.numeric)

    @classmethod
    def from_sequence(cls, labels: Iterable[int], d: int) -> "LabelCounts":
        counts = [0] * d
        for lab in labels:
            _check_label(lab, d)
            counts[lab] += 1
        return cls(counts[0], counts[1], tuple(counts[2:]))


def rho(z: Sequence[int], c: int) -> int:
    """Least j in 1..d-1 with z_j = c, else d-1."""
    if len(z) < 1:
        raise InvalidInput("prefix vector must have at least one coordinate")
    for j, v in enumerate(z, start=1):
        if v == c:
            return j
    return len(z)


def label_rank(z: Sequence[int], c: int, label: int) -> int:
    """Stop rank selected by a label at threshold c and state z."""
    d = len(z) + 1
    _check_label(label, d)
    if label == LABEL_ZERO:
        return 0
    r = rho(z, c)
    if label == LABEL_DELTA:
        return r
    return label if r < label else label - 1


def label_rank_of(z: np.ndarray, c: int, label: int) -> np.ndarray:
    """Batch stop ranks over prefix rows z (n, d-1)."""
    n, w = z.shape
    if label == LABEL_ZERO:
        return np.zeros(n, dtype=np.int64)
    eq = z == c
    r = np.where(eq.any(axis=1), eq.argmax(axis=1) + 1, w)
    if label == LABEL_DELTA:
        return r
    return np.where(r < label, label, label - 1)


def apply_label(z: Sequence[int], c: int, label: int, m: int) -> tuple[tuple[int, ...], int]:
    """Apply one label; returns the new state and the stop rank used."""
    r = label_rank(z, c, label)
    out = tuple((v - 1) % m if j < r else v for j, v in enumerate(z))
    return out, r


def invert_label(y: Sequence[int], c: int, label: int, m: int) -> tuple[int, ...]:
    """Exact inverse of :func:`apply_label` at fixed (c, label)."""
    d = len(y) + 1
    _check_label(label, d)
    if label == LABEL_ZERO:
        return tuple(y)
    cm1 = (c - 1) % m
    if label == LABEL_DELTA:
        s = rho(y, cm1)
    else:
        before = any(v == cm1 for v in y[: label - 1])
        s = label if before else label - 1
    return tuple((v + 1) % m if j < s else v for j, v in enumerate(y))


def check_prefix_counts(counts: LabelCounts, m: int, length: int) -> tuple[bool, str]:
    """Primitivity criterion on label counts of a threshold-label word.

    True iff the word length is divisible by m, gcd(N_0, m) = 1, and
    gcd(N_k - N_Delta, m) = 1 for every numeric label k.  A passing count
    vector guarantees the composed return map is one m^(d-1)-cycle; failing
    counts carry no assertion either way.
    """
    if counts.total != length:
        raise InvalidInput(f"counts total {counts.total} != length {length}")
    if length % m != 0:
        return False, f"length {length} not divisible by {m}"
    if math.gcd(counts.n0, m) != 1:
        return False, f"gcd(N_0={counts.n0}, {m}) != 1"
    for k, nk in enumerate(counts.numeric, start=2):
        if math.gcd(nk - counts.ndelta, m) != 1:
            return False, f"gcd(N_{k}-N_Delta={nk - counts.ndelta}, {m}) != 1"
    return True, "ok"


def apply_label_of(z: np.ndarray, c: int, label: int, m: int) -> np.ndarray:
    """Batch apply_label without rank reporting."""
    ranks = label_rank_of(z, c, label)
    return prefix_decrement(z, ranks, m)


def compose_labels(
    seq: Sequence[tuple[int, int]], d: int, m: int, budget: int = 200_000_000
) -> np.ndarray:
    """Explicit permutation of all m^(d-1) prefix states under a word.

    ``seq`` lists (threshold, label) pairs applied left to right.  Intended
    for desk-scale validation; the state space times word length must stay
    within ``budget``.
    """
    if not seq:
        raise InvalidInput("label sequence must be nonempty")
    n = m ** (d - 1)
    if n * len(seq) > budget:
        raise ResourceLimit(f"{n} states x {len(seq)} steps exceeds budget {budget}")
    states = decode_grid(np.arange(n, dtype=np.int64), d - 1, m)
    for c, label in seq:
        _check_label(label, d)
        states = apply_label_of(states, c % m, label, m)
    return encode_grid(states, m)


def drift_sum(r: int, m: int, label: int, threshold: int = 0, budget: int = 200_000_000) -> int:
    """Total mod-m decrement of coordinate r+1 contributed by one label.

    Brute-force sum over all states of the first r coordinates: the label's
    stop rank covers coordinate r+1 on a state-dependent subset, and the
    summed contribution reduces mod m to the drift-table value used by the
    primitivity criterion.  Independent of the threshold.
    """
    if r < 1:
        raise InvalidInput(f"level r must be >= 1, got {r}")
    if m**r > budget:
        raise ResourceLimit(f"m^r = {m**r} exceeds budget {budget}")
    width = max(r + 1, label if label >= 2 else 0)
    d_ambient = width + 1
    _check_label(label, d_ambient)
    states = np.zeros((m**r, width), dtype=np.int64)
    states[:, :r] = decode_grid(np.arange(m**r, dtype=np.int64), r, m)
    ranks = label_rank_of(states, threshold % m, label)
    return int(-(np.count_nonzero(ranks >= r + 1)) % m)
