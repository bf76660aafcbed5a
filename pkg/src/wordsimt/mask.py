"""Boolean attention permission masks (True = may attend)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .policy import Schedule
from .tokenization import check_boundaries


@dataclass(frozen=True, eq=False)
class AttentionMask:
    allow: np.ndarray

    def __post_init__(self):
        a = np.array(self.allow, dtype=bool)
        if a.ndim != 2:
            raise InvalidParameter("mask must be 2-D")
        if not a.any(axis=1).all():
            raise InvalidParameter("every row of a mask must allow at least one position")
        a.setflags(write=False)
        object.__setattr__(self, "allow", a)

    @property
    def shape(self):
        return self.allow.shape

    def __eq__(self, other):
        return isinstance(other, AttentionMask) and np.array_equal(self.allow, other.allow)

    def to_lists(self) -> list[list[int]]:
        return self.allow.astype(int).tolist()

    def render(self) -> str:
        return "\n".join(" ".join(str(int(v)) for v in row) for row in self.allow)


def causal_mask(n: int) -> AttentionMask:
    if n < 1:
        raise InvalidParameter(f"mask size must be positive, got {n}")
    return AttentionMask(np.tril(np.ones((n, n), dtype=bool)))


def intra_word_mask(source_boundaries, n: int | None = None) -> AttentionMask:
    """Unidirectional across words, fully bidirectional inside each word.

    Row i may see every token up to the last token of its own word.
    """
    bs = check_boundaries(source_boundaries, n)
    n = bs[-1]
    word_end = np.repeat(np.asarray(bs), np.diff(np.concatenate(([0], bs))))
    cols = np.arange(1, n + 1)
    return AttentionMask(cols[None, :] <= word_end[:, None])


def cross_mask(schedule: Schedule) -> AttentionMask:
    """Target-to-source permissions: target token i sees source tokens 1..g[i]."""
    g = np.asarray(schedule.g)
    cols = np.arange(1, schedule.n + 1)
    return AttentionMask(cols[None, :] <= g[:, None])
