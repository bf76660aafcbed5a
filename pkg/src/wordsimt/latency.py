"""Average Lagging at token level and its word-level projection."""
from __future__ import annotations

import bisect
from dataclasses import asdict, dataclass

from .errors import DimensionError, InvalidParameter
from .policy import Schedule
from .tokenization import check_boundaries, word_first_tokens

GAMMA_CONVENTIONS = ("hypothesis_over_source",)
TAU_CONVENTIONS = ("first_full_read", "fallback_m")


@dataclass(frozen=True)
class ALParams:
    """How AL picks its rate and cutoff.

    ``first_full_read``: tau is the first target position whose delay equals
    the source length, or m if none does. ``fallback_m``: tau is always m.
    The rate gamma is target length over source length.
    """

    gamma_convention: str = "hypothesis_over_source"
    tau_convention: str = "first_full_read"

    def __post_init__(self):
        if self.gamma_convention not in GAMMA_CONVENTIONS:
            raise InvalidParameter(f"unknown gamma convention {self.gamma_convention!r}")
        if self.tau_convention not in TAU_CONVENTIONS:
            raise InvalidParameter(f"unknown tau convention {self.tau_convention!r}")

    def to_json(self):
        return asdict(self)


DEFAULT_PARAMS = ALParams()


@dataclass(frozen=True)
class ALResult:
    al: float
    gamma: float
    tau: int


@dataclass(frozen=True)
class WordDelays:
    d: tuple[int, ...]
    W_src: int
    W_tgt: int


def al_details(delays, source_length: int, params: ALParams = DEFAULT_PARAMS) -> ALResult:
    delays = [int(x) for x in delays]
    if not delays:
        raise DimensionError("cannot compute AL of an empty delay sequence")
    if source_length < 1:
        raise DimensionError("source length must be positive")
    m = len(delays)
    gamma = m / source_length
    tau = m
    if params.tau_convention == "first_full_read":
        for i, d in enumerate(delays, start=1):
            if d >= source_length:
                tau = i
                break
    total = sum(delays[i] - i / gamma for i in range(tau))
    return ALResult(total / tau, gamma, tau)


def average_lagging(schedule, n: int | None = None, params: ALParams = DEFAULT_PARAMS) -> float:
    """AL of a Schedule, or of a raw delay sequence when ``n`` is given."""
    if isinstance(schedule, Schedule):
        return al_details(schedule.g, schedule.n, params).al
    if n is None:
        raise DimensionError("source length is required for a raw delay sequence")
    return al_details(schedule, n, params).al


def project_word_delays(schedule: Schedule, source_boundaries, target_boundaries) -> WordDelays:
    """Word-unit delays: a source word counts as read from its first token,
    a target word counts as written at its last token."""
    try:
        bs = check_boundaries(source_boundaries, schedule.n)
        bt = check_boundaries(target_boundaries, schedule.m)
    except ValueError as e:
        raise DimensionError(str(e)) from e
    firsts = word_first_tokens(bs)
    d = tuple(bisect.bisect_right(firsts, schedule.g[e - 1]) for e in bt)
    return WordDelays(d, len(bs), len(bt))


def word_al_details(schedule: Schedule, source_boundaries, target_boundaries,
                    params: ALParams = DEFAULT_PARAMS) -> ALResult:
    wd = project_word_delays(schedule, source_boundaries, target_boundaries)
    return al_details(wd.d, wd.W_src, params)


def word_average_lagging(schedule: Schedule, source_boundaries, target_boundaries,
                         params: ALParams = DEFAULT_PARAMS) -> float:
    return word_al_details(schedule, source_boundaries, target_boundaries, params).al


@dataclass(frozen=True)
class LatencyReport:
    token: ALResult
    word: ALResult
    params: ALParams

    def to_json(self) -> dict:
        return {
            "token_al": self.token.al,
            "word_al": self.word.al,
            "gamma": {"token": self.token.gamma, "word": self.word.gamma},
            "tau": {"token": self.token.tau, "word": self.word.tau},
            "convention": self.params.to_json(),
        }


def latency_report(schedule: Schedule, source_boundaries, target_boundaries,
                   params: ALParams = DEFAULT_PARAMS) -> LatencyReport:
    return LatencyReport(
        al_details(schedule.g, schedule.n, params),
        word_al_details(schedule, source_boundaries, target_boundaries, params),
        params,
    )
