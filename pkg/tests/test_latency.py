import json

import pytest
from hypothesis import given, strategies as st

from wordsimt.errors import DimensionError, InvalidParameter
from wordsimt.latency import (ALParams, al_details, average_lagging, latency_report,
                              project_word_delays, word_average_lagging)
from wordsimt.policy import Schedule, to_word_policy, waitk_token, waitk_word
from wordsimt.tokenization import parse_marked

from helpers import (EX1_SRC, EX1_TOKEN_HYP, EX1_WORD_HYP, EX2_SRC, EX2_TOKEN_HYP,
                     EX2_WORD_HYP, boundary_sets, brute_al, brute_word_delays, sentence_pairs)


def test_word_unit_al_ex1():
    assert average_lagging((1, 2, 3, 4), 4) == 1.0


def test_offline_al():
    assert average_lagging(Schedule((6,) * 6, 6)) == 6


def test_token_al_word_wait1_ex1():
    s = Schedule((1, 3, 3, 4, 10, 10, 10), 10)
    # (1 + 3 + 3 + 4 + 10 - (0+1+2+3+4)/0.7) / 5
    assert average_lagging(s) == pytest.approx(1.342857142857, abs=1e-9)
    assert al_details(s.g, 10).tau == 5


def test_fallback_m_convention():
    s = Schedule((1, 3, 3, 4, 10, 10, 10), 10)
    al = average_lagging(s, params=ALParams(tau_convention="fallback_m"))
    assert al == pytest.approx(sum(g - i / 0.7 for i, g in enumerate(s.g)) / 7)


def test_bad_convention():
    with pytest.raises(InvalidParameter):
        ALParams(tau_convention="last")


def test_raw_delays_need_length():
    with pytest.raises(DimensionError):
        average_lagging((1, 2))


@pytest.mark.parametrize("w, bs, bt, d", [
    ((1, 3, 3, 4, 10, 10, 10), (1, 3, 4, 10), (1, 3, 4, 7), (1, 2, 3, 4)),
    ((4, 4, 5, 6, 7, 9, 9), (4, 5, 6, 7, 9), (2, 3, 4, 5, 7), (1, 2, 3, 4, 5)),
    ((1, 2, 4, 4), (1, 2, 3, 4), (1, 2, 3, 4), (1, 2, 4, 4)),
])
def test_project_word_delays(w, bs, bt, d):
    wd = project_word_delays(Schedule(w, bs[-1]), bs, bt)
    assert wd.d == d
    assert (wd.W_src, wd.W_tgt) == (len(bs), len(bt))


def test_project_mismatch():
    with pytest.raises(DimensionError):
        project_word_delays(Schedule((1, 2), 3), (1, 3), (1, 2, 3))


@pytest.mark.parametrize("src, hyp", [(EX1_SRC, EX1_WORD_HYP), (EX2_SRC, EX2_WORD_HYP)])
def test_word_al_word_wait1_is_one(src, hyp):
    s, h = parse_marked(src), parse_marked(hyp)
    assert word_average_lagging(waitk_word(1, s, h), s, h) == 1.0


def test_word_al_token_wait1_ex1():
    s, h = parse_marked(EX1_SRC), parse_marked(EX1_TOKEN_HYP)
    g = waitk_token(1, s.n, h.n)
    assert project_word_delays(g, s, h).d == (1, 2, 3, 4, 4, 4, 4, 4, 4)
    # gamma = 9/4, tau = 4: (1 + (2 - 4/9) + (3 - 8/9) + (4 - 12/9)) / 4
    assert word_average_lagging(g, s, h) == pytest.approx(11 / 6, abs=1e-12)


@pytest.mark.parametrize("src, tok_hyp, word_hyp", [
    (EX1_SRC, EX1_TOKEN_HYP, EX1_WORD_HYP),
    (EX2_SRC, EX2_TOKEN_HYP, EX2_WORD_HYP),
])
def test_word_policy_word_al_below_token_policy(src, tok_hyp, word_hyp):
    s, th, wh = parse_marked(src), parse_marked(tok_hyp), parse_marked(word_hyp)
    tok = waitk_token(1, s.n, th.n)
    word = waitk_word(1, s, wh)
    assert word_average_lagging(word, s, wh) < word_average_lagging(tok, s, th)


def test_token_al_values_on_appendix_pairs():
    # frozen from the hand expansions in the comments
    s, th, wh = parse_marked(EX1_SRC), parse_marked(EX1_TOKEN_HYP), parse_marked(EX1_WORD_HYP)
    # sum_{i<=10} (i - (i-1)*10/15) / 10
    assert average_lagging(waitk_token(1, s.n, th.n)) == pytest.approx(2.5, abs=1e-12)
    assert average_lagging(waitk_word(1, s, wh)) == pytest.approx(1.342857142857, abs=1e-9)
    s, th, wh = parse_marked(EX2_SRC), parse_marked(EX2_TOKEN_HYP), parse_marked(EX2_WORD_HYP)
    # sum_{i<=9} (i - (i-1)*9/15) / 9
    assert average_lagging(waitk_token(1, s.n, th.n)) == pytest.approx(2.6, abs=1e-12)
    # (4 + (4-9/7) + (5-18/7) + (6-27/7) + (7-36/7) + (9-45/7)) / 6
    assert average_lagging(waitk_word(1, s, wh)) == pytest.approx(55 / 21, abs=1e-12)


def test_report_json():
    s, h = parse_marked(EX1_SRC), parse_marked(EX1_WORD_HYP)
    rep = latency_report(waitk_word(1, s, h), s, h).to_json()
    assert set(rep) == {"token_al", "word_al", "gamma", "tau", "convention"}
    assert rep["word_al"] == 1.0
    assert rep["convention"] == {"gamma_convention": "hypothesis_over_source",
                                 "tau_convention": "first_full_read"}
    json.dumps(rep)


@given(sentence_pairs(max_n=15, max_m=15))
def test_matches_textbook_definition(pair):
    g, bs, bt = pair
    s = Schedule(g, bs[-1])
    assert average_lagging(s) == pytest.approx(brute_al(list(g), bs[-1]), abs=1e-12)
    d = brute_word_delays(g, bs, bt)
    assert list(project_word_delays(s, bs, bt).d) == d
    assert word_average_lagging(s, bs, bt) == pytest.approx(brute_al(d, len(bs)), abs=1e-12)


@given(sentence_pairs(), st.data())
def test_al_monotone_in_schedule(pair, data):
    g, bs, bt = pair
    n = bs[-1]
    bumps = data.draw(st.lists(st.integers(0, n), min_size=len(g), max_size=len(g)))
    bigger = []
    for gi, b in zip(g, bumps):
        bigger.append(max(min(gi + b, n), bigger[-1] if bigger else 0))
    s, t = Schedule(g, n), Schedule(tuple(bigger), n)
    assert average_lagging(t) >= average_lagging(s) - 1e-12
    assert word_average_lagging(t, bs, bt) >= word_average_lagging(s, bs, bt) - 1e-12


@given(boundary_sets(max_n=10), boundary_sets(max_n=10))
def test_equal_word_counts_give_unit_word_al(bs, bt):
    if len(bs) != len(bt):
        bt = tuple(range(1, len(bs) + 1))
    assert word_average_lagging(waitk_word(1, bs, bt), bs, bt) == 1.0


def test_converted_wait1_has_unit_word_al_on_ex1():
    s, h = parse_marked(EX1_SRC), parse_marked(EX1_WORD_HYP)
    conv = to_word_policy(waitk_token(1, s.n, h.n), s, h).schedule
    assert word_average_lagging(conv, s, h) == 1.0
