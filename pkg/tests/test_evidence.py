import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from partition_rules.evidence import (
    ClassFrame,
    TotalConflictError,
    belief_plausibility,
    combine_bruteforce,
    combine_feasible,
)


def closed_form(ps):
    """m(C_k) = p_k prod_{j!=k}(1-p_j) / sum_i p_i prod_{j!=i}(1-p_j), in exact rationals."""
    fr = [Fraction(p) for p in ps]
    nums = []
    for k, p in enumerate(fr):
        prod = p
        for j, q in enumerate(fr):
            if j != k:
                prod *= 1 - q
        nums.append(prod)
    total = sum(nums)
    return [float(n / total) for n in nums]


def test_two_equal_classes():
    cm = combine_feasible([(0, 0.5), (1, 0.5)])
    assert cm.masses == pytest.approx((0.5, 0.5), abs=1e-15)


def test_confident_class_gains_mass():
    cm = combine_feasible([(0, 0.9), (1, 0.3)])
    assert cm.masses == pytest.approx((0.9 * 0.7 / 0.66, 0.3 * 0.1 / 0.66), abs=1e-15)
    assert cm[0] == pytest.approx(0.9545, abs=1e-4)
    assert cm[0] > 0.9


def test_three_classes_match_closed_form():
    ps = [0.995, 0.121, 0.0111]
    cm = combine_feasible(list(enumerate(ps)))
    assert list(cm.masses) == pytest.approx(closed_form(ps), abs=1e-15)


def test_single_class_gets_everything():
    assert combine_feasible([(0, 0.2)]).masses == (1.0,)
    assert combine_bruteforce([(0, 0.2)]).masses == (1.0,)


def test_certain_class():
    assert combine_feasible([(0, 1.0), (1, 0.0)]).masses == (1.0, 0.0)
    assert combine_feasible([(0, 1.0), (1, 0.7)]).masses == (1.0, 0.0)
    assert combine_bruteforce([(0, 1.0), (1, 0.7)]).masses == (1.0, 0.0)


def test_zero_evidence_class_gets_zero():
    cm = combine_feasible([(0, 0.0), (1, 0.4), (2, 0.4)])
    assert cm.masses == pytest.approx((0.0, 0.5, 0.5))


@pytest.mark.parametrize(
    "evidence",
    [
        [(0, 1.0), (1, 1.0)],
        [(0, 0.0), (1, 0.0)],
        [(0, 0.0)],
    ],
)
def test_total_conflict(evidence):
    with pytest.raises(TotalConflictError):
        combine_feasible(evidence)
    with pytest.raises(TotalConflictError):
        combine_bruteforce(evidence)


def test_vacuous_classes_drop_out():
    cm = combine_feasible([(0, 0.9), (2, 0.3)], n_classes=4)
    assert cm.masses[1] == 0.0 and cm.masses[3] == 0.0
    assert (cm[0], cm[2]) == pytest.approx(combine_feasible([(0, 0.9), (1, 0.3)]).masses)
    assert combine_bruteforce([(0, 0.9), (2, 0.3)], n_classes=4).masses == pytest.approx(cm.masses, abs=1e-15)


def test_bad_evidence():
    with pytest.raises(ValueError):
        combine_feasible([(0, 1.2)])
    with pytest.raises(ValueError):
        combine_feasible([(0, 0.2), (0, 0.3)])
    with pytest.raises(IndexError):
        combine_feasible([(3, 0.2)], n_classes=2)
    with pytest.raises(ValueError):
        combine_feasible([])
    with pytest.raises(ValueError):
        combine_bruteforce(list(enumerate([0.5] * 13)))


def test_extreme_odds_do_not_overflow():
    cm = combine_feasible([(0, 1 - 1e-16), (1, 1e-300)])
    assert cm[0] == 1.0 and 0.0 <= cm[1] < 1e-280


def test_belief_equals_plausibility_on_singletons():
    cm = combine_feasible([(0, 0.6), (1, 0.2), (2, 0.9)])
    for k in range(3):
        bel, pl = belief_plausibility(cm, k)
        assert bel == pytest.approx(pl, abs=1e-15)
        assert cm.bel(k) == bel and cm.pl(k) == pl
    with pytest.raises(IndexError):
        belief_plausibility(cm, 3)


def test_frame():
    frame = ClassFrame(["earn", "acq"])
    assert len(frame) == 2 and frame.index("acq") == 1
    with pytest.raises(ValueError):
        ClassFrame(["a", "a"])
    with pytest.raises(ValueError):
        ClassFrame([])


def test_randomized_oracle_agreement():
    rng = random.Random(20261016)
    for _ in range(300):
        n = rng.randint(1, 12)
        ev = [(k, rng.random()) for k in range(n)]
        fast = combine_feasible(ev).masses
        slow = combine_bruteforce(ev).masses
        assert max(abs(a - b) for a, b in zip(fast, slow)) <= 1e-12


probs = st.floats(1e-9, 1 - 1e-9)
prob_lists = st.lists(probs, min_size=1, max_size=8)


@given(prob_lists)
def test_masses_form_distribution(ps):
    cm = combine_feasible(list(enumerate(ps)))
    assert math.fsum(cm.masses) == pytest.approx(1.0, abs=1e-12)
    assert all(0.0 <= m <= 1.0 for m in cm.masses)
    assert list(cm.masses) == pytest.approx(closed_form(ps), abs=1e-12)


@given(prob_lists, st.randoms(use_true_random=False))
def test_permutation_equivariance(ps, rnd):
    order = list(range(len(ps)))
    rnd.shuffle(order)
    base = combine_feasible(list(enumerate(ps))).masses
    shuffled = combine_feasible([(i, ps[order[i]]) for i in range(len(ps))]).masses
    for i, k in enumerate(order):
        assert shuffled[i] == pytest.approx(base[k], abs=1e-12)


@given(prob_lists, probs, st.integers(0, 7))
def test_monotone_in_own_evidence(ps, bump, which):
    k = which % len(ps)
    hi = max(ps[k], bump)
    lo = min(ps[k], bump)
    a = combine_feasible([(i, lo if i == k else p) for i, p in enumerate(ps)])
    b = combine_feasible([(i, hi if i == k else p) for i, p in enumerate(ps)])
    assert b[k] >= a[k] - 1e-12
    for j in range(len(ps)):
        if j != k:
            assert b[j] <= a[j] + 1e-12


@given(prob_lists)
def test_vacuous_class_is_identity(ps):
    # appending a vacuous class changes nothing
    base = combine_feasible(list(enumerate(ps))).masses
    padded = combine_feasible(list(enumerate(ps)), n_classes=len(ps) + 1).masses
    assert padded[:-1] == pytest.approx(base, abs=1e-15) and padded[-1] == 0.0
