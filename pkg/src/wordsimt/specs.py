"""Policy specification strings used by the CLI and the corpus harness.

Grammar (one policy per string)::

    offline
    waitk-token:k=3
    waitk-word:k=1
    tktk:k=2                      (same as ablation:tktk:k=2)
    itst:delta=0.6,transport=FILE
    convert:<token policy>        word-level READ and WRITE of the inner policy
    ablation:ww|tw|wt:<token policy>
    ablation:tktk:k=2

``transport`` files hold one JSON matrix (list of rows) per line, parallel
with the source file.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import policy as P
from .errors import DimensionError, InvalidParameter
from .tokenization import TokenizedSentence, check_boundaries

_LEAVES = ("offline", "waitk-token", "waitk-word", "tktk", "itst")
_WORD_LEVEL = ("waitk-word", "convert", "ablation")


@dataclass(frozen=True)
class PolicySpec:
    kind: str
    params: tuple[tuple[str, str], ...] = ()
    inner: "PolicySpec | None" = None
    text: str = field(default="", compare=False)

    def param(self, name, cast=str, default=None):
        for k, v in self.params:
            if k == name:
                try:
                    return cast(v)
                except ValueError as e:
                    raise InvalidParameter(f"bad value for {name!r} in {self.text!r}: {v!r}") from e
        if default is None:
            raise InvalidParameter(f"policy {self.text!r} needs parameter {name!r}")
        return default

    def __str__(self):
        return self.text


def _parse_params(s: str, text: str):
    if not s:
        return ()
    out = []
    for item in s.split(","):
        key, eq, val = item.partition("=")
        if not eq or not key or not val:
            raise InvalidParameter(f"malformed parameter {item!r} in policy {text!r}")
        out.append((key.strip(), val.strip()))
    return tuple(out)


def parse_policy(text: str) -> PolicySpec:
    text = text.strip()
    head, _, rest = text.partition(":")
    head = head.lower()
    if head == "convert":
        inner = parse_policy(rest)
        _require_token_level(inner, text)
        return PolicySpec("convert", (), inner, text)
    if head == "ablation":
        variant, _, inner_text = rest.partition(":")
        variant = variant.lower()
        if variant == "tktk":
            spec = PolicySpec("tktk", _parse_params(inner_text, text), None, text)
            spec.param("k", int)
            return spec
        if variant not in ("ww", "tw", "wt"):
            raise InvalidParameter(f"unknown ablation variant {variant!r} in {text!r}")
        inner = parse_policy(inner_text)
        _require_token_level(inner, text)
        return PolicySpec("ablation", (("variant", variant),), inner, text)
    if head not in _LEAVES:
        raise InvalidParameter(f"unknown policy {head!r} in {text!r}")
    spec = PolicySpec(head, _parse_params(rest, text), None, text)
    if head in ("waitk-token", "waitk-word", "tktk"):
        if spec.param("k", int) < 1:
            raise InvalidParameter(f"k must be positive in {text!r}")
    if head == "itst":
        delta = spec.param("delta", float)
        if not 0 < delta < 1:
            raise InvalidParameter(f"delta must lie in (0, 1) in {text!r}")
        spec.param("transport")
    return spec


def _require_token_level(inner: PolicySpec, text: str):
    if inner.kind in _WORD_LEVEL:
        raise InvalidParameter(f"{text!r}: the inner policy must be token-level")


def is_word_level(spec: PolicySpec) -> bool:
    return spec.kind in _WORD_LEVEL


@lru_cache(maxsize=8)
def load_transports(path: str) -> tuple:
    with open(path, encoding="utf-8") as f:
        return tuple(P.TransportMatrix(json.loads(line)) for line in f if line.strip())


def _transport_for(spec: PolicySpec, record_index: int, n: int, m: int):
    mats = load_transports(spec.param("transport"))
    if not 0 <= record_index < len(mats):
        raise DimensionError(f"transport file has no matrix for record {record_index + 1}")
    T = mats[record_index]
    if (T.m, T.n) != (m, n):
        raise DimensionError(f"transport matrix is {T.m}x{T.n}, sentence pair is {m}x{n}")
    return T


def build_schedule(spec: PolicySpec, source: TokenizedSentence, target: TokenizedSentence,
                   record_index: int = 0) -> P.Schedule:
    """Schedule of ``spec`` for a known target sentence."""
    n, m = source.n, target.n
    bs, bt = source.boundaries, target.boundaries
    kind = spec.kind
    if kind == "offline":
        return P.Schedule((n,) * m, n)
    if kind == "waitk-token":
        return P.waitk_token(spec.param("k", int), n, m)
    if kind == "waitk-word":
        return P.waitk_word(spec.param("k", int), bs, bt)
    if kind == "tktk":
        return P.ablation_policy("tktk", k=spec.param("k", int), n=n, m=m)
    if kind == "itst":
        return P.itst_required_counts(_transport_for(spec, record_index, n, m),
                                      spec.param("delta", float))
    base = build_schedule(spec.inner, source, target, record_index)
    if kind == "convert":
        if spec.inner.kind == "itst":
            return P.itst_word_policy(base, bs, bt)
        return P.to_word_policy(base, bs, bt).schedule
    return P.ablation_policy(spec.param("variant"), base, bs, bt)


def incremental_policy(spec: PolicySpec, source: TokenizedSentence):
    """Return ``need(i, t, word_start)``: source tokens required before target
    token i, which belongs to target word t and opens it when ``word_start``.

    Only information available while decoding is used, so this drives
    simulation against a writer oracle whose output length is unknown.
    """
    n = source.n
    bs = check_boundaries(source)

    def refine(x):
        return bs[bisect.bisect_left(bs, x)]

    kind = spec.kind
    if kind == "offline":
        return lambda i, t, start: n
    if kind == "waitk-token":
        k = spec.param("k", int)
        return lambda i, t, start: min(k + i - 1, n)
    if kind == "tktk":
        k = spec.param("k", int)
        return lambda i, t, start: min(k * math.ceil(i / k), n)
    if kind == "waitk-word":
        k = spec.param("k", int)
        return lambda i, t, start: bs[min(k + t - 1, len(bs)) - 1]
    if kind == "itst":
        raise InvalidParameter("itst needs the full target for its transport matrix; "
                               "simulate it against a fixed hypothesis")

    base = incremental_policy(spec.inner, source)
    variant = "ww" if kind == "convert" else spec.param("variant")
    if variant == "wt":
        return lambda i, t, start: refine(base(i, t, start))
    lift = refine if variant == "ww" else (lambda x: x)
    held = {}

    def need(i, t, start):
        if start or t not in held:
            held[t] = lift(base(i, t, start))
        return held[t]

    return need
