"""Fixtures and brute-force oracles shared by the test modules.

The oracles evaluate the defining min-sets by exhaustive search and never
call into the package's conversion code.
"""
import random

from hypothesis import strategies as st

EX1_SRC = "Meine▁ B eine▁ waren▁ bl ut über ström t .▁"
EX1_WORD_HYP = "My▁ leg s▁ were▁ bloo dy .▁"
EX1_TOKEN_HYP = "My▁ B ody▁ was▁ blue▁ and▁ my▁ leg s▁ were▁ blood - ri dden .▁"
EX2_SRC = "Ir gen det was▁ lag▁ in▁ der▁ Luft .▁"
EX2_WORD_HYP = "Some thing▁ lay▁ in▁ the▁ air .▁"
EX2_TOKEN_HYP = "Ir gen gen gen gen s ,▁ in▁ fact ,▁ was▁ in▁ the▁ air .▁"


def brute_min(candidates):
    best = None
    for c in candidates:
        if best is None or c < best:
            best = c
    return best


def brute_r(g, bs):
    n = max(bs)
    return [brute_min(j for j in range(1, n + 1) if j >= gi and j in bs) for gi in g]


def brute_b(m, bt):
    return [brute_min(j for j in range(1, m + 1) if j >= i and j in bt) for i in range(1, m + 1)]


def brute_w(g, bs, bt):
    r = brute_r(g, bs)
    b = brute_b(len(g), bt)
    w = []
    for i in range(len(g)):
        if i == 0 or b[i - 1] != b[i]:
            w.append(r[i])
        else:
            w.append(w[i - 1])
    return r, b, w


def brute_word_waitk(k, bs, bt):
    """Enumerate target tokens, locate each one's word by scanning, apply the word delay."""
    bs, bt = sorted(bs), sorted(bt)
    out = []
    for i in range(1, max(bt) + 1):
        t = 1 + sum(1 for e in bt if e < i)
        out.append(bs[min(k + t - 1, len(bs)) - 1])
    return out


def brute_word_delays(g, bs, bt):
    firsts = [1] + [x + 1 for x in sorted(bs)[:-1]]
    return [sum(1 for f in firsts if f <= g[e - 1]) for e in sorted(bt)]


def brute_al(delays, n):
    """Average Lagging straight from its textbook definition."""
    m = len(delays)
    gamma = m / n
    tau = next((i for i, d in enumerate(delays, start=1) if d == n), m)
    return sum(delays[i - 1] - (i - 1) / gamma for i in range(1, tau + 1)) / tau


def random_boundaries(rng: random.Random, n: int):
    inner = [j for j in range(1, n) if rng.random() < 0.5]
    return tuple(inner + [n])


def random_schedule(rng: random.Random, n: int, m: int):
    return tuple(sorted(rng.randint(1, n) for _ in range(m)))


@st.composite
def boundary_sets(draw, max_n=12, min_n=1):
    n = draw(st.integers(min_n, max_n))
    inner = draw(st.sets(st.integers(1, n - 1), max_size=n - 1)) if n > 1 else set()
    return tuple(sorted(inner)) + (n,)


@st.composite
def schedules(draw, n, m):
    return tuple(sorted(draw(st.lists(st.integers(1, n), min_size=m, max_size=m))))


@st.composite
def sentence_pairs(draw, max_n=12, max_m=12):
    bs = draw(boundary_sets(max_n))
    bt = draw(boundary_sets(max_m))
    g = draw(schedules(bs[-1], bt[-1]))
    return g, bs, bt


# criterion id -> (passed, detail); filled by test_acceptance, printed by conftest
ACCEPTANCE = {}


def record(key, ok, detail=""):
    ACCEPTANCE[key] = (bool(ok), detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
    return bool(ok)
