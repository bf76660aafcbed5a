"""Policy quality as the share of aligned source words read before their target word starts."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, RecordError
from .policy import Schedule
from .tokenization import check_boundaries, word_first_tokens

_PAIR = re.compile(r"(\d+)-(\d+)")


@dataclass(frozen=True)
class AlignmentSet:
    pairs: frozenset[tuple[int, int]]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))


@dataclass(frozen=True)
class QualityReport:
    satisfied: int
    total: int

    @property
    def proportion(self) -> float | None:
        return self.satisfied / self.total if self.total else None

    def __add__(self, other: "QualityReport") -> "QualityReport":
        return QualityReport(self.satisfied + other.satisfied, self.total + other.total)

    def to_json(self) -> dict:
        return {"satisfied": self.satisfied, "total": self.total, "proportion": self.proportion}


def parse_pharaoh(line: str) -> AlignmentSet:
    """Parse 0-based ``i-j`` pairs into a 1-based (source, target) set."""
    pairs = set()
    for m in re.finditer(r"\S+", line):
        pm = _PAIR.fullmatch(m.group())
        if pm is None:
            raise ParseError(f"malformed alignment pair {m.group()!r} at column {m.start() + 1}",
                             column=m.start() + 1)
        pairs.add((int(pm.group(1)) + 1, int(pm.group(2)) + 1))
    return AlignmentSet(frozenset(pairs))


def aligned_read_proportion(schedule: Schedule, source_boundaries, target_boundaries,
                            alignment: AlignmentSet) -> QualityReport:
    bs = check_boundaries(source_boundaries, schedule.n)
    bt = check_boundaries(target_boundaries, schedule.m)
    firsts = word_first_tokens(bt)
    ok = 0
    for s, t in alignment.pairs:
        if not (1 <= s <= len(bs) and 1 <= t <= len(bt)):
            raise IndexError(f"alignment pair ({s}, {t}) outside {len(bs)}x{len(bt)} words")
        if bs[s - 1] <= schedule.g[firsts[t - 1] - 1]:
            ok += 1
    return QualityReport(ok, len(alignment.pairs))


def corpus_quality(records) -> QualityReport:
    """Pair-weighted (micro) aggregate over ``(id, schedule, B_S, B_T, alignment)`` records.

    Sentences without alignment pairs add nothing to either count.
    """
    total = QualityReport(0, 0)
    for rid, schedule, bs, bt, alignment in records:
        try:
            total += aligned_read_proportion(schedule, bs, bt, alignment)
        except (ValueError, IndexError) as e:
            raise RecordError(rid, e) from e
    return total
