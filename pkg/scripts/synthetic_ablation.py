"""Compare the TkTk/TW/WT/WW ablations on a random synthetic corpus.

Sentences are random boundary sets with placeholder tokens and random
word alignments; only latency and aligned-read proportion are reported.
"""
import argparse
import random

from wordsimt import (AlignmentSet, CorpusRecord, TokenizedSentence, evaluate_records)


def random_sentence(rng, max_words):
    ends, end = [], 0
    for _ in range(rng.randint(1, max_words)):
        end += rng.choice((1, 1, 1, 2, 2, 3))
        ends.append(end)
    return TokenizedSentence.synthetic(ends)


def make_corpus(size, seed, max_words=20):
    rng = random.Random(seed)
    out = []
    for i in range(1, size + 1):
        src, tgt = random_sentence(rng, max_words), random_sentence(rng, max_words)
        # roughly diagonal links with some jitter
        links = set()
        for t in range(1, tgt.num_words + 1):
            s = round(t * src.num_words / tgt.num_words) + rng.randint(-1, 1)
            links.add((min(max(s, 1), src.num_words), t))
        out.append(CorpusRecord(i, src, tgt, AlignmentSet(frozenset(links))))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ks", default="1,2,3,5,7")
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    corpus = make_corpus(args.size, args.seed)
    print("policy,k,token_al,word_al,aligned")
    for k in map(int, args.ks.split(",")):
        for name in ("tktk", "tw", "wt", "ww"):
            spec = f"tktk:k={k}" if name == "tktk" else f"ablation:{name}:tktk:k={k}"
            agg = evaluate_records(corpus, spec, workers=args.workers).aggregate
            print(f"{name.upper()},{k},{agg['mean_token_al']:.3f},{agg['mean_word_al']:.3f},"
                  f"{agg['alignment']['proportion']:.4f}")


if __name__ == "__main__":
    main()
