"""READ/WRITE schedules: construction, word-level conversion and action traces.

A schedule stores, for every target token i (1-based), the number of source
tokens g[i] read before that token is written. Boundary sets list the
1-based indices of word-final tokens and always contain the sentence length.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidParameter, InvalidSchedule, InvalidTrace
from .tokenization import check_boundaries, word_first_tokens

READ = "READ"
WRITE = "WRITE"
ABLATIONS = ("WW", "TW", "WT", "TKTK")


@dataclass(frozen=True)
class Schedule:
    g: tuple[int, ...]
    n: int

    def __post_init__(self):
        g = tuple(int(x) for x in self.g)
        object.__setattr__(self, "g", g)
        if self.n < 1:
            raise InvalidSchedule(f"source length must be positive, got {self.n}")
        if not g:
            raise InvalidSchedule("schedule is empty")
        if g[0] < 1 or g[-1] > self.n:
            raise InvalidSchedule(f"values must lie in [1, {self.n}]: {g}")
        if any(a > b for a, b in zip(g, g[1:])):
            raise InvalidSchedule(f"schedule is not monotone: {g}")

    @property
    def m(self) -> int:
        return len(self.g)

    def __len__(self):
        return len(self.g)

    def __getitem__(self, i):
        return self.g[i]

    def to_json(self) -> list[int]:
        return list(self.g)

    @classmethod
    def from_json(cls, values, n: int) -> "Schedule":
        return cls(tuple(values), n)


@dataclass(frozen=True)
class ConversionResult:
    r: tuple[int, ...]
    b: tuple[int, ...]
    w: tuple[int, ...]
    n: int

    @property
    def schedule(self) -> Schedule:
        return Schedule(self.w, self.n)


@dataclass(frozen=True)
class Action:
    action: str
    index: int
    post_final: bool = False

    def to_json(self) -> dict:
        return {"action": self.action, "index": self.index, "post_final": self.post_final}


@dataclass(frozen=True)
class ActionTrace:
    events: tuple[Action, ...]

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.events]

    @classmethod
    def from_json(cls, items) -> "ActionTrace":
        try:
            return cls(tuple(
                Action(str(d["action"]), int(d["index"]), bool(d.get("post_final", False)))
                for d in items
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidTrace(f"malformed trace entry: {e}") from e


@dataclass(frozen=True)
class TransportMatrix:
    """Source-to-target information weights, one row per target token."""

    T: np.ndarray

    def __post_init__(self):
        T = np.array(self.T, dtype=float)
        if T.ndim != 2 or 0 in T.shape:
            raise DimensionError(f"transport matrix must be a non-empty 2-D array, got shape {T.shape}")
        if (T < 0).any():
            raise InvalidParameter("transport matrix has negative entries")
        sums = T.sum(axis=1)
        if (sums <= 0).any() or (sums > 1 + 1e-9).any():
            raise InvalidParameter("transport row sums must lie in (0, 1]")
        T.setflags(write=False)
        object.__setattr__(self, "T", T)

    @property
    def m(self):
        return self.T.shape[0]

    @property
    def n(self):
        return self.T.shape[1]


def _as_g(schedule) -> tuple[tuple[int, ...], int | None]:
    if isinstance(schedule, Schedule):
        return schedule.g, schedule.n
    return tuple(int(x) for x in schedule), None


def _check_k(k):
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidParameter(f"k must be a positive integer, got {k!r}")


def waitk_token(k: int, n: int, m: int) -> Schedule:
    _check_k(k)
    return Schedule(tuple(min(k + i - 1, n) for i in range(1, m + 1)), n)


def word_read_refine(schedule, source_boundaries) -> tuple[int, ...]:
    """Delay every read count to the next source word boundary."""
    g, n = _as_g(schedule)
    bs = check_boundaries(source_boundaries, n)
    if g and max(g) > bs[-1]:
        raise DimensionError(f"schedule reads past the source end {bs[-1]}")
    return tuple(bs[bisect.bisect_left(bs, x)] for x in g)


def target_word_end(i: int, target_boundaries) -> int:
    bt = check_boundaries(target_boundaries)
    if not 1 <= i <= bt[-1]:
        raise IndexError(f"target index {i} outside 1..{bt[-1]}")
    return bt[bisect.bisect_left(bt, i)]


def _group_by_target_word(values, bt):
    # copy the value at each target word's first token across the word
    out = []
    prev_end = None
    for i, v in enumerate(values, start=1):
        end = bt[bisect.bisect_left(bt, i)]
        out.append(v if end != prev_end else out[-1])
        prev_end = end
    return tuple(out)


def _check_pair(schedule, source_boundaries, target_boundaries):
    g, n = _as_g(schedule)
    bs = check_boundaries(source_boundaries, n)
    bt = check_boundaries(target_boundaries, len(g))
    return g, bs, bt


def to_word_policy(schedule, source_boundaries, target_boundaries) -> ConversionResult:
    """Word-level READ followed by word-level WRITE.

    ``r`` pushes every read count to a source word boundary, ``b`` is the end
    of the target word holding each token, and ``w`` holds r fixed across
    each target word so a word is written without interruption.
    """
    g, bs, bt = _check_pair(schedule, source_boundaries, target_boundaries)
    r = word_read_refine(g, bs)
    b = tuple(bt[bisect.bisect_left(bt, i)] for i in range(1, len(g) + 1))
    w = _group_by_target_word(r, bt)
    return ConversionResult(r, b, w, bs[-1])


def waitk_word(k: int, source_boundaries, target_boundaries) -> Schedule:
    """Read k source words, then alternate one word written, one word read."""
    _check_k(k)
    bs = check_boundaries(source_boundaries)
    bt = check_boundaries(target_boundaries)
    g = []
    prev = 0
    for t, end in enumerate(bt, start=1):
        g.extend([bs[min(k + t - 1, len(bs)) - 1]] * (end - prev))
        prev = end
    return Schedule(tuple(g), bs[-1])


def tktk(k: int, n: int, m: int) -> Schedule:
    _check_k(k)
    return Schedule(tuple(min(k * math.ceil(i / k), n) for i in range(1, m + 1)), n)


def ablation_policy(kind: str, g_base=None, source_boundaries=None,
                    target_boundaries=None, *, k=None, n=None, m=None) -> Schedule:
    """WW, TW, WT variants of a base token schedule, or the TkTk baseline.

    WW reads and writes whole words, TW keeps token reads but writes whole
    words, WT reads whole words but writes token by token. TkTk alternates
    k-token reads and k-token writes from ``k``, ``n`` and ``m`` alone.
    """
    kind = str(kind).upper()
    if kind not in ABLATIONS:
        raise InvalidParameter(f"unknown ablation policy {kind!r}; choose from {ABLATIONS}")
    if kind == "TKTK":
        if n is None or m is None:
            raise InvalidParameter("TkTk needs k, n and m")
        return tktk(k, n, m)
    if g_base is None:
        raise InvalidParameter(f"{kind} needs a base schedule")
    g, bs, bt = _check_pair(g_base, source_boundaries, target_boundaries)
    n = bs[-1]
    if kind == "WW":
        return to_word_policy(g, bs, bt).schedule
    if kind == "WT":
        return Schedule(word_read_refine(g, bs), n)
    return Schedule(_group_by_target_word(g, bt), n)


def itst_required_counts(transport, delta: float) -> Schedule:
    """Smallest source prefix whose accumulated weight reaches ``delta``, per row.

    Rows that never reach the threshold read the whole source. The result
    is made monotone with a running maximum.
    """
    if not 0 < delta < 1:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta}")
    if not isinstance(transport, TransportMatrix):
        transport = TransportMatrix(transport)
    T = transport.T
    n = T.shape[1]
    reached = np.cumsum(T, axis=1) >= delta - 1e-12
    raw = np.where(reached.any(axis=1), reached.argmax(axis=1) + 1, n)
    return Schedule(tuple(np.maximum.accumulate(raw).tolist()), n)


def itst_word_policy(schedule, source_boundaries, target_boundaries) -> Schedule:
    """Word-level ITST: the read requirement of each target word's first token,
    lifted to a source word boundary, governs the whole word."""
    g, bs, bt = _check_pair(schedule, source_boundaries, target_boundaries)
    out = []
    first = word_first_tokens(bt)
    starts = set(first)
    cur = 0
    for i in range(1, len(g) + 1):
        if i in starts:
            req = bs[bisect.bisect_left(bs, g[i - 1])]
            cur = max(cur, req)
        out.append(cur)
    return Schedule(tuple(out), bs[-1])


def schedule_to_actions(schedule: Schedule) -> ActionTrace:
    if not isinstance(schedule, Schedule):
        raise InvalidSchedule("expected a Schedule (it carries the source length)")
    events = []
    read = 0
    for i, gi in enumerate(schedule.g, start=1):
        while read < gi:
            read += 1
            events.append(Action(READ, read))
        events.append(Action(WRITE, i))
    while read < schedule.n:
        read += 1
        events.append(Action(READ, read, post_final=True))
    return ActionTrace(tuple(events))


def actions_to_schedule(trace) -> Schedule:
    events = trace.events if isinstance(trace, ActionTrace) else tuple(trace)
    g = []
    read = 0
    for pos, e in enumerate(events):
        if e.action == READ:
            if e.index != read + 1:
                raise InvalidTrace(f"event {pos}: expected READ {read + 1}, got READ {e.index}")
            read += 1
        elif e.action == WRITE:
            if e.index != len(g) + 1:
                raise InvalidTrace(f"event {pos}: expected WRITE {len(g) + 1}, got WRITE {e.index}")
            if read == 0:
                raise InvalidTrace(f"event {pos}: WRITE before any READ")
            g.append(read)
        else:
            raise InvalidTrace(f"event {pos}: unknown action {e.action!r}")
    if not g:
        raise InvalidTrace("trace has no WRITE events")
    # READs after the last WRITE, and only those, carry the post-final flag
    last_write = max(p for p, e in enumerate(events) if e.action == WRITE)
    for pos, e in enumerate(events):
        if e.action == READ and e.post_final != (pos > last_write):
            raise InvalidTrace(f"event {pos}: post_final flag is inconsistent")
    return Schedule(tuple(g), read)
