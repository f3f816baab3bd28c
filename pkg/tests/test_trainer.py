from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from partition_rules.partition import WordSet
from partition_rules.textkit import bounded, normalize
from partition_rules.trainer import (
    EmptyCorpusError,
    FitnessReport,
    SearchConfig,
    fitness,
    prefer,
    search,
)


def oracle_F(patterns, ins, outs):
    """F = 2PR/(P+R) from first principles, as an exact fraction."""
    hit = lambda d: any(p in bounded(d) for p in patterns)
    t = sum(map(hit, ins))
    f = sum(map(hit, outs))
    if t == 0:
        return Fraction(0)
    P = Fraction(t, t + f)
    R = Fraction(t, len(ins))
    return 2 * P * R / (P + R)


def brute_force_optimum(ins, outs, max_len=15):
    """Best F over every word set of at most two substrings of the training documents.

    Substrings with identical coverage are interchangeable, so only distinct
    (in-mask, out-mask) pairs are enumerated.
    """
    masks = set()
    for doc in (bounded(d) for d in ins + outs):
        for i in range(len(doc)):
            for n in range(1, max_len + 1):
                if i + n > len(doc):
                    break
                sub = doc[i : i + n]
                m_in = sum(1 << j for j, d in enumerate(ins) if sub in bounded(d))
                m_out = sum(1 << j for j, d in enumerate(outs) if sub in bounded(d))
                masks.add((m_in, m_out))
    masks = list(masks)
    best = Fraction(0)
    d = len(ins)
    for group in [(m,) for m in masks] + list(combinations(masks, 2)):
        t = bin(_or(g[0] for g in group)).count("1")
        f = bin(_or(g[1] for g in group)).count("1")
        best = max(best, Fraction(2 * t, t + f + d))
    return best


def _or(xs):
    out = 0
    for x in xs:
        out |= x
    return out


def test_fitness_matches_oracle(toy_split):
    ins, outs = toy_split
    for ws in [("bird", "cat"), ("cat",), ("bright",), (" the cat ", "dozen"), ("zzz",)]:
        rep = fitness(ws, ins, outs)
        assert Fraction(2 * rep.t_count, rep.t_count + rep.f_count + rep.d) == oracle_F(ws, ins, outs)
        assert rep.F == pytest.approx(float(oracle_F(ws, ins, outs)), abs=1e-15)


def test_fitness_toy_counts(toy_split):
    ins, outs = toy_split
    rep = fitness(("bird", "cat"), ins, outs)
    # every B document holds cat or bird; so do rows 2, 12 and 13 of class A
    assert (rep.t_count, rep.f_count, rep.d) == (5, 3, 5)
    assert rep.F == pytest.approx(10 / 13)
    assert rep.precision == pytest.approx(5 / 8) and rep.recall == 1.0
    assert rep.as_dict()["F"] == rep.F
    # bright alone also hits rows 1 and 4
    rep = fitness(("bird", "cat", "bright"), ins, outs)
    assert (rep.t_count, rep.f_count) == (5, 5) and rep.F == pytest.approx(2 / 3)


def test_fitness_report_zero():
    rep = FitnessReport(0, 0, 4)
    assert rep.F == 0.0 and rep.P == 0.0 and rep.R == 0.0


def test_prefer_rules():
    one = WordSet(("abc",))
    two = WordSet(("abc", "d"))
    hi, lo = FitnessReport(5, 0, 5), FitnessReport(4, 0, 5)
    assert prefer((two, hi), (one, lo))[0] is two
    assert prefer((one, lo), (two, hi))[0] is two
    # equal F: fewer patterns wins
    assert prefer((two, hi), (one, hi))[0] is one
    # equal F and size: longer mean length wins
    short, long_ = WordSet(("ab",)), WordSet(("abcd",))
    assert prefer((short, hi), (long_, hi))[0] is long_
    # full tie keeps the incumbent
    other = WordSet(("abce",))
    assert prefer((long_, hi), (other, hi))[0] is long_


def test_prefer_is_exact_on_near_ties():
    # 2*1/(1+0+3) == 2*2/(2+2+4): floats agree but the comparison must not depend on them
    a, b = FitnessReport(1, 0, 3), FitnessReport(2, 2, 4)
    assert a.F == b.F
    ws_a, ws_b = WordSet(("x",)), WordSet(("yy",))
    assert prefer((ws_a, a), (ws_b, b))[0] is ws_b


def test_brute_force_optimum_is_reachable(toy_split):
    ins, outs = toy_split
    optimum = brute_force_optimum(ins, outs)
    assert optimum == 1
    res = search("B", ins, outs, SearchConfig(iteration_budget=10_000, rng_seed=7))
    assert Fraction(2 * res.fitness.t_count, res.fitness.t_count + res.fitness.f_count + res.fitness.d) == optimum
    assert oracle_F(res.word_set.patterns, ins, outs) == optimum


def test_search_reproducible(toy_split):
    ins, outs = toy_split
    cfg = SearchConfig(iteration_budget=2000, rng_seed=11)
    a = search("B", ins, outs, cfg)
    b = search("B", ins, outs, cfg)
    assert a.word_set == b.word_set
    assert a.trace == b.trace


def test_search_budget_zero_returns_initial(toy_split):
    ins, outs = toy_split
    res = search("B", ins, outs, SearchConfig(iteration_budget=0, rng_seed=3))
    assert res.trace == []
    assert 1 <= len(res.word_set) <= 2
    assert res.fitness == fitness(res.word_set, ins, outs)


def test_trace_is_monotone(toy_split):
    ins, outs = toy_split
    res = search("B", ins, outs, SearchConfig(iteration_budget=3000, rng_seed=5))
    assert len(res.trace) == 3000
    accepted = [e.F for e in res.trace if e.accepted]
    assert accepted == sorted(accepted)
    for e in res.trace:
        assert e.move in {"add", "remove", "change"}
        assert e.F is not None or not e.accepted
        assert e.as_dict()["patterns"] == list(e.patterns)
    assert res.fitness.F >= max(accepted, default=0.0)


def test_search_respects_limits(toy_split):
    ins, outs = toy_split
    res = search("B", ins, outs, SearchConfig(max_patterns=1, max_pattern_len=4, iteration_budget=500, rng_seed=2))
    assert len(res.word_set) == 1
    assert all(len(p) <= 4 for p in res.word_set)
    assert all(len(e.patterns) == 1 for e in res.trace)


def test_search_patterns_come_from_documents(toy_split):
    ins, outs = toy_split
    res = search("B", ins, outs, SearchConfig(iteration_budget=500, rng_seed=9))
    corpus = [bounded(d) for d in ins + outs]
    for e in res.trace:
        for p in e.patterns:
            assert any(p in d for d in corpus)


def test_search_empty_class():
    with pytest.raises(EmptyCorpusError):
        search("B", [], ["some text"])
    with pytest.raises(EmptyCorpusError):
        search("B", [""], [""])


def test_search_without_negatives():
    res = search("B", ["only positives here"], [], SearchConfig(iteration_budget=200))
    assert res.fitness.F == 1.0


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_patterns=0)
    with pytest.raises(ValueError):
        SearchConfig(max_pattern_len=16)
    with pytest.raises(ValueError):
        SearchConfig(iteration_budget=-1)


docs = st.lists(st.text(alphabet="abc ", min_size=1, max_size=12).map(normalize), min_size=1, max_size=8)


@settings(max_examples=30, deadline=None)
@given(docs, docs, st.integers(0, 2**32 - 1))
def test_search_result_scored_correctly(ins, outs, seed):
    ins = [d for d in ins if d.strip()] or ["a"]
    res = search("x", ins, outs, SearchConfig(iteration_budget=60, rng_seed=seed))
    assert res.fitness == fitness(res.word_set, ins, outs)
    assert Fraction(2 * res.fitness.t_count, res.fitness.t_count + res.fitness.f_count + res.fitness.d) == oracle_F(
        res.word_set.patterns, ins, outs
    )
