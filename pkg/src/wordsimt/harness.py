"""Corpus ingestion, step-trace simulation and metric aggregation."""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from statistics import fmean
from typing import Callable, Optional, Sequence

from .alignment_eval import AlignmentSet, QualityReport, aligned_read_proportion, parse_pharaoh
from .errors import (DimensionError, EmptyCorpus, EmptyInput, InvalidParameter, OracleRunaway,
                     RecordError, SimtError)
from .latency import DEFAULT_PARAMS, ALParams, latency_report
from .policy import Schedule
from .specs import PolicySpec, build_schedule, incremental_policy, parse_policy
from .tokenization import MARKER, TokenizedSentence, parse_marked, word_first_tokens

log = logging.getLogger(__name__)

# (source tokens read so far, target tokens emitted so far) -> next marked token, or None to stop
WriterOracle = Callable[[int, tuple], Optional[str]]

ORACLE_LENGTH_FACTOR = 4


@dataclass(frozen=True)
class CorpusRecord:
    id: int
    source: TokenizedSentence
    target: Optional[TokenizedSentence] = None
    alignment: Optional[AlignmentSet] = None


@dataclass(frozen=True)
class Step:
    step: int
    source_tokens: int
    source_words: int
    written: tuple[str, ...]


@dataclass(frozen=True)
class StepTrace:
    steps: tuple[Step, ...]
    source: Optional[TokenizedSentence] = None
    target: Optional[TokenizedSentence] = None

    def write_steps(self) -> list[int]:
        return [s.step for s in self.steps if s.written]

    def to_schedule(self) -> Schedule:
        g = [s.source_tokens for s in self.steps for _ in s.written]
        return Schedule(tuple(g), self.steps[-1].source_tokens)

    def to_json(self) -> list[dict]:
        return [
            {"step": s.step, "source_tokens": s.source_tokens,
             "source_words": s.source_words, "written": list(s.written)}
            for s in self.steps
        ]


class ReplayOracle:
    """Writer oracle that replays a fixed hypothesis regardless of the source prefix."""

    def __init__(self, hypothesis: TokenizedSentence):
        self.tokens = [t.marked() for t in hypothesis.tokens]

    def __call__(self, source_read, emitted):
        i = len(emitted)
        return self.tokens[i] if i < len(self.tokens) else None


def build_trace(source: TokenizedSentence, target: TokenizedSentence,
                schedule: Schedule) -> StepTrace:
    if schedule.n != source.n or schedule.m != target.n:
        raise DimensionError(
            f"schedule is {schedule.m}x{schedule.n}, sentence pair is {target.n}x{source.n}")
    firsts = word_first_tokens(source)
    by_step: dict[int, list[str]] = {}
    for tok, gi in zip(target.tokens, schedule.g):
        by_step.setdefault(gi, []).append(tok.marked())
    steps = []
    words = 0
    for j in range(1, source.n + 1):
        if words < len(firsts) and firsts[words] == j:
            words += 1
        steps.append(Step(j, j, words, tuple(by_step.get(j, ()))))
    return StepTrace(tuple(steps), source, target)


def _oracle_schedule(spec: PolicySpec, source: TokenizedSentence, oracle: WriterOracle,
                     max_length: int):
    need = incremental_policy(spec, source)
    emitted: list[str] = []
    g: list[int] = []
    read = 0
    word = 1
    start = True
    while True:
        i = len(emitted) + 1
        read = max(read, need(i, word, start))
        tok = oracle(read, tuple(emitted))
        if tok is None:
            break
        if len(emitted) >= max_length:
            raise OracleRunaway(f"writer exceeded {max_length} tokens")
        emitted.append(tok)
        g.append(read)
        start = tok.endswith(MARKER)
        if start:
            word += 1
    if not emitted:
        raise EmptyInput("writer produced no target tokens")
    return emitted, g


def simulate(record: CorpusRecord, policy, oracle: Optional[WriterOracle] = None,
             max_length: Optional[int] = None) -> StepTrace:
    """Run a policy on one record and return its step trace.

    With a known target the schedule comes straight from the policy module.
    With an oracle the policy is stepped token by token, reading only what
    the policy requires before asking the oracle for the next token.
    """
    spec = parse_policy(policy) if isinstance(policy, str) else policy
    source = record.source
    if oracle is None:
        if record.target is None:
            raise InvalidParameter("simulate needs a target sentence or a writer oracle")
        return build_trace(source, record.target, build_schedule(spec, source, record.target,
                                                                 record.id - 1))
    limit = max_length if max_length is not None else ORACLE_LENGTH_FACTOR * source.n
    emitted, g = _oracle_schedule(spec, source, oracle, limit)
    target = parse_marked(" ".join(emitted))
    return build_trace(source, target, Schedule(tuple(g), source.n))


def render_trace(trace: StepTrace) -> str:
    header = ("step", "input", "output")
    rows = []
    for s in trace.steps:
        if trace.source is not None:
            inp = " ".join(t.marked() for t in trace.source.tokens[: s.source_tokens])
        else:
            inp = f"{s.source_tokens} tokens"
        rows.append((str(s.step), inp, " ".join(s.written)))
    widths = [max(len(r[c]) for r in rows + [header]) for c in range(3)]
    lines = []
    for r in [header] + rows:
        lines.append(" | ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


# corpus evaluation ---------------------------------------------------------

@dataclass(frozen=True)
class ResultRow:
    id: int
    n: int
    m: int
    schedule: tuple[int, ...]
    token_al: float
    word_al: float
    quality: Optional[QualityReport] = None

    def to_json(self) -> dict:
        d = {"id": self.id, "n": self.n, "m": self.m, "schedule": list(self.schedule),
             "token_al": self.token_al, "word_al": self.word_al}
        if self.quality is not None:
            d["alignment"] = self.quality.to_json()
        return d


@dataclass
class EvalConfig:
    source: str
    target: str
    policy: str
    align: Optional[str] = None
    marker_convention: str = "suffix"
    target_side: str = "reference"
    params: ALParams = DEFAULT_PARAMS
    workers: int = 1
    strict: bool = False


@dataclass
class CorpusResult:
    rows: list[ResultRow]
    errors: list[RecordError] = field(default_factory=list)
    policy: str = ""
    params: ALParams = DEFAULT_PARAMS
    target_side: str = "reference"

    @property
    def aggregate(self) -> dict:
        agg = {
            "records": len(self.rows) + len(self.errors),
            "evaluated": len(self.rows),
            "errors": len(self.errors),
            "mean_token_al": fmean(r.token_al for r in self.rows) if self.rows else None,
            "mean_word_al": fmean(r.word_al for r in self.rows) if self.rows else None,
        }
        scored = [r.quality for r in self.rows if r.quality is not None]
        if scored:
            agg["alignment"] = sum(scored, QualityReport(0, 0)).to_json()
            agg["target_side"] = self.target_side
        return agg

    def to_json(self) -> dict:
        return {
            "policy": self.policy,
            "convention": self.params.to_json(),
            "rows": [r.to_json() for r in self.rows],
            "errors": [{"id": e.record_id, "message": str(e.cause)} for e in self.errors],
            "aggregate": self.aggregate,
        }


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def read_corpus(source, target=None, align=None, convention="suffix"):
    """Parse parallel files into records; unparsable lines come back as RecordError."""
    src = _read_lines(source)
    tgt = _read_lines(target) if target else None
    ali = _read_lines(align) if align else None
    for name, lines in (("target", tgt), ("alignment", ali)):
        if lines is not None and len(lines) != len(src):
            raise DimensionError(f"{name} file has {len(lines)} lines, source has {len(src)}")
    if not src:
        raise EmptyCorpus("source file is empty")
    out = []
    for idx, line in enumerate(src):
        rid = idx + 1
        try:
            out.append(CorpusRecord(
                rid,
                parse_marked(line, convention),
                parse_marked(tgt[idx], convention) if tgt is not None else None,
                parse_pharaoh(ali[idx]) if ali is not None else None,
            ))
        except SimtError as e:
            out.append(RecordError(rid, e))
    return out


def evaluate_record(record: CorpusRecord, spec: PolicySpec,
                    params: ALParams = DEFAULT_PARAMS) -> ResultRow:
    if record.target is None:
        raise InvalidParameter("evaluation needs a target sentence")
    s = build_schedule(spec, record.source, record.target, record.id - 1)
    rep = latency_report(s, record.source, record.target, params)
    quality = None
    if record.alignment is not None:
        quality = aligned_read_proportion(s, record.source, record.target, record.alignment)
    return ResultRow(record.id, s.n, s.m, s.g, rep.token.al, rep.word.al, quality)


def evaluate_records(records: Sequence, spec, params: ALParams = DEFAULT_PARAMS,
                     workers: int = 1, strict: bool = False) -> CorpusResult:
    if not records:
        raise EmptyCorpus("no records to evaluate")
    spec = parse_policy(spec) if isinstance(spec, str) else spec

    def run(item):
        if isinstance(item, RecordError):
            return item
        try:
            return evaluate_record(item, spec, params)
        except (SimtError, ValueError, IndexError) as e:
            return RecordError(item.id, e)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, records))
    else:
        results = [run(r) for r in records]

    rows, errors = [], []
    for r in results:
        if isinstance(r, RecordError):
            if strict:
                raise r
            log.warning("%s", r)
            errors.append(r)
        else:
            rows.append(r)
    return CorpusResult(rows, errors, spec.text, params)


def evaluate_corpus(config: EvalConfig) -> CorpusResult:
    records = read_corpus(config.source, config.target, config.align, config.marker_convention)
    res = evaluate_records(records, config.policy, config.params, config.workers, config.strict)
    res.target_side = config.target_side
    return res


def format_result(result: CorpusResult, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(result.to_json(), ensure_ascii=False, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "n", "m", "token_al", "word_al", "aligned_satisfied",
                    "aligned_total", "schedule"])
        for r in result.rows:
            q = r.quality
            w.writerow([r.id, r.n, r.m, repr(r.token_al), repr(r.word_al),
                        "" if q is None else q.satisfied, "" if q is None else q.total,
                        " ".join(map(str, r.schedule))])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"policy: {result.policy}"]
        for r in result.rows:
            line = f"{r.id}\ttoken_al={r.token_al:.4f}\tword_al={r.word_al:.4f}"
            if r.quality is not None:
                line += f"\taligned={r.quality.satisfied}/{r.quality.total}"
            lines.append(line)
        for e in result.errors:
            lines.append(f"{e.record_id}\tERROR {e.cause}")
        agg = result.aggregate
        for key in ("mean_token_al", "mean_word_al"):
            if agg[key] is not None:
                lines.append(f"{key}: {agg[key]:.4f}")
        if "alignment" in agg:
            a = agg["alignment"]
            lines.append(f"aligned: {a['satisfied']}/{a['total']}")
        return "\n".join(lines) + "\n"
    raise InvalidParameter(f"unknown output format {fmt!r}")
