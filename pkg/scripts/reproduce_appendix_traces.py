"""Replay the two appendix examples and print their traces and latencies."""
import argparse
from pathlib import Path

from wordsimt import CorpusRecord, latency_report, parse_marked, render_trace, simulate
from wordsimt.specs import build_schedule, parse_policy

DATA = Path(__file__).resolve().parent.parent / "data" / "appendix"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", type=Path, default=DATA)
    args = ap.parse_args()

    sources = (args.data / "source.txt").read_text(encoding="utf-8").splitlines()
    runs = [("word_wait1.txt", "waitk-word:k=1"), ("token_wait1.txt", "waitk-token:k=1")]
    for fname, policy in runs:
        hyps = (args.data / fname).read_text(encoding="utf-8").splitlines()
        for i, (src_line, hyp_line) in enumerate(zip(sources, hyps), start=1):
            src, hyp = parse_marked(src_line), parse_marked(hyp_line)
            trace = simulate(CorpusRecord(i, src, hyp), policy)
            sched = build_schedule(parse_policy(policy), src, hyp, i - 1)
            rep = latency_report(sched, src, hyp)
            print(f"## example {i}, {policy}")
            print(render_trace(trace))
            print(f"writes at steps {trace.write_steps()}; "
                  f"token-AL {rep.token.al:.3f}, word-AL {rep.word.al:.3f}\n")


if __name__ == "__main__":
    main()
