"""Command-line entry point: ``wordsimt <subcommand> ...``.

Exit status is 0 on success, 1 when a record fails under ``--strict`` (or
on any other runtime error) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import curves
from .errors import InvalidParameter, RecordError, SimtError
from .harness import (EvalConfig, evaluate_corpus, format_result, read_corpus, render_trace,
                      simulate)
from .latency import ALParams, project_word_delays
from .lm_sync import align_dual, sync_schedule
from .mask import causal_mask, cross_mask, intra_word_mask
from .policy import to_word_policy
from .specs import build_schedule, is_word_level, parse_policy
from .tokenization import parse_marked

log = logging.getLogger("wordsimt")


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def _records(args, need_target=True, need_align=False):
    if need_target and not args.target:
        raise UsageError("--target is required")
    if need_align and not args.align:
        raise UsageError("--align is required")
    return read_corpus(args.source, args.target, getattr(args, "align", None),
                       args.marker_convention)


def _each(records, args, fn):
    """Apply ``fn`` per record, collecting (id, result) and honouring --strict."""
    out, failed = [], False
    for rec in records:
        try:
            if isinstance(rec, RecordError):
                raise rec
            out.append((rec.id, fn(rec)))
        except (SimtError, ValueError, IndexError) as e:
            err = e if isinstance(e, RecordError) else RecordError(rec.id, e)
            if args.strict:
                raise err
            log.warning("%s", err)
            failed = True
            out.append((err.record_id, err))
    return out, failed


def cmd_simulate(args):
    spec = parse_policy(args.policy)
    results, _ = _each(_records(args), args, lambda r: simulate(r, spec))
    if args.format == "json":
        return _dump([
            {"id": rid, "error": str(t.cause)} if isinstance(t, RecordError)
            else {"id": rid, "schedule": list(t.to_schedule().g), "steps": t.to_json()}
            for rid, t in results
        ])
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "step", "source_tokens", "source_words", "written"])
        for rid, t in results:
            if isinstance(t, RecordError):
                continue
            for s in t.steps:
                w.writerow([rid, s.step, s.source_tokens, s.source_words, " ".join(s.written)])
        return buf.getvalue()
    parts = []
    for rid, t in results:
        body = f"ERROR {t.cause}\n" if isinstance(t, RecordError) else render_trace(t)
        parts.append(f"# record {rid}\n{body}")
    return "\n".join(parts)


def cmd_convert(args):
    spec = parse_policy(args.policy)
    if is_word_level(spec):
        raise UsageError("convert takes a token-level --policy")

    def run(rec):
        g = build_schedule(spec, rec.source, rec.target, rec.id - 1)
        conv = to_word_policy(g, rec.source, rec.target)
        return {"g": list(g.g), "r": list(conv.r), "b": list(conv.b), "w": list(conv.w)}

    results, _ = _each(_records(args), args, run)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "g", "r", "b", "w"])
        for rid, d in results:
            if not isinstance(d, RecordError):
                w.writerow([rid] + [" ".join(map(str, d[k])) for k in "grbw"])
        return buf.getvalue()
    if args.format == "text":
        return "".join(
            f"{rid}\tERROR {d.cause}\n" if isinstance(d, RecordError)
            else f"{rid}\t" + "\t".join(f"{k}=" + " ".join(map(str, d[k])) for k in "grbw") + "\n"
            for rid, d in results)
    return _dump([{"id": rid, "error": str(d.cause)} if isinstance(d, RecordError)
                  else {"id": rid, **d} for rid, d in results])


def _eval(args):
    cfg = EvalConfig(
        source=args.source, target=args.target, policy=args.policy,
        align=getattr(args, "align", None), marker_convention=args.marker_convention,
        target_side=getattr(args, "target_side", "reference"),
        params=ALParams(tau_convention=args.tau_convention),
        workers=args.workers, strict=args.strict,
    )
    res = evaluate_corpus(cfg)
    return format_result(res, args.format), bool(res.errors)


def cmd_latency(args):
    if not args.target:
        raise UsageError("--target is required")
    return _eval(args)


def cmd_align_eval(args):
    if not args.target or not args.align:
        raise UsageError("align-eval needs --target and --align")
    return _eval(args)


def cmd_mask(args):
    kind = args.kind
    if kind == "cross":
        if not args.policy:
            raise UsageError("--kind cross needs --policy")
        spec = parse_policy(args.policy)

    def run(rec):
        if kind == "causal":
            return causal_mask(rec.source.n)
        if kind == "intra-word":
            return intra_word_mask(rec.source)
        return cross_mask(build_schedule(spec, rec.source, rec.target, rec.id - 1))

    results, _ = _each(_records(args, need_target=(kind == "cross")), args, run)
    if args.format == "json":
        return _dump([{"id": rid, "error": str(m.cause)} if isinstance(m, RecordError)
                      else {"id": rid, "mask": m.to_lists()} for rid, m in results])
    parts = []
    for rid, m in results:
        body = f"ERROR {m.cause}" if isinstance(m, RecordError) else m.render()
        parts.append(f"# record {rid}\n{body}\n")
    return "\n".join(parts)


def cmd_sync(args):
    if not args.simt_tokens or not args.lm_tokens:
        raise UsageError("sync needs --simt-tokens and --lm-tokens")
    with open(args.simt_tokens, encoding="utf-8") as f:
        simt = f.read().splitlines()
    with open(args.lm_tokens, encoding="utf-8") as f:
        lm = f.read().splitlines()
    if len(simt) != len(lm):
        raise UsageError(f"--simt-tokens has {len(simt)} lines, --lm-tokens has {len(lm)}")
    tgt = None
    if args.policy:
        if not args.target:
            raise UsageError("--policy in sync needs --target for the SiMT-side schedule")
        with open(args.target, encoding="utf-8") as f:
            tgt = f.read().splitlines()
        spec = parse_policy(args.policy)

    out, failed = [], False
    for idx, (a, b) in enumerate(zip(simt, lm)):
        rid = idx + 1
        try:
            s_ts = parse_marked(a, args.marker_convention)
            l_ts = parse_marked(b, args.marker_convention)
            dual = align_dual(s_ts, l_ts)
            if tgt is not None:
                t_ts = parse_marked(tgt[idx], args.marker_convention)
                g = build_schedule(spec, s_ts, t_ts, idx)
                words = project_word_delays(g, s_ts, t_ts)
            else:
                words = range(1, len(dual) + 1)
            out.append({"id": rid, "dual": dual.to_json(),
                        "sync": sync_schedule(words, dual).to_json()})
        except (SimtError, ValueError, IndexError) as e:
            err = RecordError(rid, e)
            if args.strict:
                raise err
            log.warning("%s", err)
            failed = True
            out.append({"id": rid, "error": str(e)})
    if args.format == "text":
        lines = []
        for d in out:
            if "error" in d:
                lines.append(f"{d['id']}\tERROR {d['error']}")
            else:
                pairs = " ".join(f"({e['simt_read']},{e['lm_read']})" for e in d["sync"])
                lines.append(f"{d['id']}\t{pairs}")
        return "\n".join(lines) + "\n", failed
    return _dump(out), failed


def cmd_curve(args):
    if not args.input:
        raise UsageError("curve needs --input")
    with open(args.input, encoding="utf-8") as f:
        text = f.read()
    if text.lstrip().lower().startswith("label,"):
        points = curves.read_curve_csv(text)
    else:
        points = curves.parse_result_table(text, args.latency)
    fmt = "csv" if args.format == "text" else args.format
    return curves.emit_curve(points, fmt)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--source", help="source token file (one marked sentence per line)")
    common.add_argument("--target", help="target token file parallel with --source")
    common.add_argument("--policy", help="policy spec, e.g. waitk-word:k=1 or convert:waitk-token:k=3")
    common.add_argument("--marker-convention", choices=("suffix", "prefix"), default="suffix")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--strict", action="store_true", help="abort on the first bad record")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="wordsimt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="step traces of a policy")
    s.set_defaults(func=cmd_simulate)
    s = sub.add_parser("convert", parents=[common], help="word-level conversion r, b, w")
    s.set_defaults(func=cmd_convert)
    for name, func, hlp in (("latency", cmd_latency, "token and word Average Lagging"),
                            ("align-eval", cmd_align_eval, "aligned-read proportion")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--tau-convention", choices=("first_full_read", "fallback_m"),
                       default="first_full_read")
        s.add_argument("--workers", type=int, default=1)
        s.set_defaults(func=func)
        if name == "align-eval":
            s.add_argument("--align", help="Pharaoh alignment file (0-based i-j pairs)")
            s.add_argument("--target-side", choices=("reference", "hypothesis"),
                           default="reference",
                           help="which target text --target and --align refer to")
        else:
            s.add_argument("--align", help="optional Pharaoh alignment file")
    s = sub.add_parser("mask", parents=[common], help="attention permission masks")
    s.add_argument("--kind", choices=("causal", "intra-word", "cross"), default="intra-word")
    s.set_defaults(func=cmd_mask)
    s = sub.add_parser("sync", parents=[common], help="SiMT/LM word-boundary synchronization")
    s.add_argument("--simt-tokens")
    s.add_argument("--lm-tokens")
    s.set_defaults(func=cmd_sync)
    s = sub.add_parser("curve", parents=[common], help="latency/quality curve points")
    s.add_argument("--input", help="result table (k & token AL & word AL & BLEU rows) or CSV")
    s.add_argument("--latency", choices=("word", "token"), default="word")
    s.set_defaults(func=cmd_curve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command not in ("sync", "curve") and not args.source:
        parser.error("--source is required")
    try:
        result = args.func(args)
    except (UsageError, InvalidParameter) as e:
        parser.error(str(e))
    except (SimtError, OSError) as e:
        print(f"wordsimt: {e}", file=sys.stderr)
        return 1
    text, _failed = result if isinstance(result, tuple) else (result, False)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
