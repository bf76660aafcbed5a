"""Marked subword sequences and the word/token index algebra.

The canonical representation uses the suffix convention: a token whose text
ended with U+2581 closes a word. Prefix-marked input (SentencePiece style,
where the marker opens a word) is converted on parse. All indices in the
public API are 1-based.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BoundaryError, EmptyInput, MalformedToken

MARKER = "▁"
CONVENTIONS = ("suffix", "prefix")


@dataclass(frozen=True)
class Token:
    text: str
    word_final: bool

    def __post_init__(self):
        if not self.text:
            raise MalformedToken("token text must be non-empty")
        if " " in self.text:
            raise MalformedToken(f"token {self.text!r} contains a space")

    def marked(self) -> str:
        return self.text + MARKER if self.word_final else self.text


@dataclass(frozen=True)
class WordSpan:
    word_index: int
    first: int
    last: int


@dataclass(frozen=True)
class TokenizedSentence:
    tokens: tuple[Token, ...]
    # set when the last token carried no marker and was closed by the parser
    forced_final: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise EmptyInput("a sentence needs at least one token")
        if not self.tokens[-1].word_final:
            raise BoundaryError("the last token of a sentence must be word-final")

    @classmethod
    def from_texts(cls, texts: Sequence[str], boundaries: Iterable[int]):
        """Build a sentence from bare token texts and 1-based word-final indices."""
        bset = set(boundaries)
        toks = tuple(Token(t, j in bset) for j, t in enumerate(texts, start=1))
        if bset - set(range(1, len(toks) + 1)):
            raise BoundaryError(f"boundaries {sorted(bset)} out of range for n={len(toks)}")
        return cls(toks)

    @classmethod
    def synthetic(cls, boundaries: Sequence[int]):
        """Placeholder-text sentence with the given boundary set (handy in tests)."""
        b = check_boundaries(boundaries)
        return cls.from_texts([f"t{j}" for j in range(1, b[-1] + 1)], b)

    @property
    def n(self) -> int:
        return len(self.tokens)

    def __len__(self):
        return len(self.tokens)

    @cached_property
    def boundaries(self) -> tuple[int, ...]:
        return tuple(j for j, tok in enumerate(self.tokens, start=1) if tok.word_final)

    @property
    def num_words(self) -> int:
        return len(self.boundaries)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    def marked(self) -> str:
        """Suffix-marked line; ``parse_marked`` inverts it."""
        return " ".join(t.marked() for t in self.tokens)

    def word_surfaces(self) -> list[str]:
        return [
            "".join(t.text for t in self.tokens[s.first - 1 : s.last])
            for s in word_spans(self)
        ]

    def prefix(self, j: int) -> "TokenizedSentence | None":
        """First ``j`` tokens, or None for j=0. The cut token keeps its own flag."""
        if j == 0:
            return None
        toks = self.tokens[:j]
        if not toks[-1].word_final:
            toks = toks[:-1] + (Token(toks[-1].text, True),)
        return TokenizedSentence(toks)


def check_boundaries(boundaries, n: int | None = None) -> tuple[int, ...]:
    """Validate a boundary index set and return it as a tuple.

    Accepts a TokenizedSentence as well. When ``n`` is given the last
    boundary must equal it.
    """
    if isinstance(boundaries, TokenizedSentence):
        b = boundaries.boundaries
    else:
        b = tuple(int(x) for x in boundaries)
    if not b:
        raise BoundaryError("boundary set is empty")
    if b[0] < 1 or any(x >= y for x, y in zip(b, b[1:])):
        raise BoundaryError(f"boundaries must be strictly increasing from 1: {b}")
    if n is not None and b[-1] != n:
        raise BoundaryError(f"last boundary {b[-1]} does not close a sentence of {n} tokens")
    return b


def parse_marked(line: str, convention: str = "suffix") -> TokenizedSentence:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown marker convention {convention!r}")
    raw = line.split()
    if not raw:
        raise EmptyInput("empty token line")

    texts: list[str] = []
    finals: list[bool] = []
    for col, tok in enumerate(raw, start=1):
        if not tok.strip(MARKER):
            raise MalformedToken(f"token {col} is only a word-boundary marker")
        if convention == "suffix":
            finals.append(tok.endswith(MARKER))
            texts.append(tok[:-1] if tok.endswith(MARKER) else tok)
        else:
            if tok.startswith(MARKER) and texts:
                finals[-1] = True
            texts.append(tok[1:] if tok.startswith(MARKER) else tok)
            finals.append(False)
        if not texts[-1]:
            raise MalformedToken(f"token {col} ({tok!r}) is empty after marker removal")
        if MARKER in texts[-1]:
            raise MalformedToken(f"token {col} ({tok!r}) has a marker in an inner position")

    forced = False
    if convention == "prefix":
        finals[-1] = True
    elif not finals[-1]:
        finals[-1] = True
        forced = True
    return TokenizedSentence(tuple(map(Token, texts, finals)), forced_final=forced)


def word_spans(ts) -> list[WordSpan]:
    b = check_boundaries(ts)
    spans = []
    prev = 0
    for k, last in enumerate(b, start=1):
        spans.append(WordSpan(k, prev + 1, last))
        prev = last
    return spans


def word_index_of(ts, j: int) -> int:
    b = check_boundaries(ts)
    if not 1 <= j <= b[-1]:
        raise IndexError(f"token index {j} outside 1..{b[-1]}")
    return bisect.bisect_left(b, j) + 1


def word_first_tokens(boundaries) -> tuple[int, ...]:
    """1-based index of the first token of every word."""
    b = check_boundaries(boundaries)
    return (1,) + tuple(x + 1 for x in b[:-1])


def detokenize(ts: TokenizedSentence) -> str:
    out = []
    for tok in ts.tokens[:-1]:
        out.append(tok.text + (" " if tok.word_final else ""))
    out.append(ts.tokens[-1].text)
    return "".join(out)

