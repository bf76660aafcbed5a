"""Word-boundary synchronization between a SiMT tokenization and an LM tokenization.

Both models see the same word sequence under different subword vocabularies.
They exchange activations only after a whole word has been read, which is the
only point where both token prefixes cover the same text.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import VocabularyAlignmentError
from .mask import AttentionMask, cross_mask
from .policy import Schedule
from .tokenization import TokenizedSentence, word_spans


@dataclass(frozen=True)
class DualWord:
    surface: str
    simt_span: tuple[int, int]
    lm_span: tuple[int, int]


@dataclass(frozen=True)
class DualSegmentation:
    words: tuple[DualWord, ...]

    def __len__(self):
        return len(self.words)

    @property
    def simt_length(self) -> int:
        return self.words[-1].simt_span[1]

    @property
    def lm_length(self) -> int:
        return self.words[-1].lm_span[1]

    def to_json(self) -> dict:
        return {"words": [
            {"surface": w.surface, "simt_span": list(w.simt_span), "lm_span": list(w.lm_span)}
            for w in self.words
        ]}


@dataclass(frozen=True)
class SyncEvent:
    words_read: int
    simt_read: int
    lm_read: int


@dataclass(frozen=True)
class SyncSchedule:
    events: tuple[SyncEvent, ...]

    def pairs(self) -> list[tuple[int, int]]:
        return [(e.simt_read, e.lm_read) for e in self.events]

    def to_json(self) -> list[dict]:
        return [
            {"words_read": e.words_read, "simt_read": e.simt_read, "lm_read": e.lm_read}
            for e in self.events
        ]


def align_dual(simt_ts: TokenizedSentence, lm_ts: TokenizedSentence) -> DualSegmentation:
    simt_words = simt_ts.word_surfaces()
    lm_words = lm_ts.word_surfaces()
    # surfaces are compared exactly; any normalization would hide vocabulary mismatches
    for k, (a, b) in enumerate(zip(simt_words, lm_words), start=1):
        if a != b:
            raise VocabularyAlignmentError(
                f"word {k} differs: SiMT {a!r} vs LM {b!r}", word_index=k)
    if len(simt_words) != len(lm_words):
        k = min(len(simt_words), len(lm_words)) + 1
        raise VocabularyAlignmentError(
            f"word counts differ: SiMT has {len(simt_words)}, LM has {len(lm_words)}",
            word_index=k)
    return DualSegmentation(tuple(
        DualWord(s, (a.first, a.last), (b.first, b.last))
        for s, a, b in zip(simt_words, word_spans(simt_ts), word_spans(lm_ts))
    ))


def sync_schedule(word_schedule, dual: DualSegmentation) -> SyncSchedule:
    """Token counts each model has consumed at every word-level READ pause.

    ``word_schedule`` holds cumulative source word counts (for example the
    ``d`` of a WordDelays); repeated values collapse into one event and the
    remaining words are appended so both counts reach their totals.
    """
    counts = list(getattr(word_schedule, "d", word_schedule))
    events = []
    last = 0
    for c in counts + [len(dual)]:
        c = int(c)
        if not 1 <= c <= len(dual):
            raise IndexError(f"word count {c} outside 1..{len(dual)}")
        if c < last:
            raise IndexError(f"word schedule decreases at {c}")
        if c > last:
            w = dual.words[c - 1]
            events.append(SyncEvent(c, w.simt_span[1], w.lm_span[1]))
            last = c
    return SyncSchedule(tuple(events))


def lm_attend_limit(words_read: int, dual: DualSegmentation) -> int:
    if not 0 <= words_read <= len(dual):
        raise IndexError(f"words_read {words_read} outside 0..{len(dual)}")
    return 0 if words_read == 0 else dual.words[words_read - 1].lm_span[1]


def lm_horizon_mask(word_counts, dual: DualSegmentation) -> AttentionMask:
    """Cross-attention from each target position into LM tokens, given the
    number of source words read before that position."""
    limits = [lm_attend_limit(int(c), dual) for c in word_counts]
    return cross_mask(Schedule(tuple(limits), dual.lm_length))
