from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from duel.errors import InputError, UnknownSpec
from duel.martingale import simulate
from duel.wagerset import Finite, IntegerMultiples
from duel.zoo import (
    KINDS,
    Copycat,
    PseudoRandom,
    StopOnBankrupt,
    ThresholdSwitcher,
    always_heads,
    opponent_zoo,
)

F = Fraction


def test_copycat_halves_always_heads():
    run = simulate(Copycat(always_heads(2, 10), F(1, 2)), "HTHH")
    assert run.increments == [1, 1, 1, 1]
    assert run.wealth == [5, 6, 5, 6, 7]


def test_threshold_switcher_drops_after_first_tails():
    run = simulate(ThresholdSwitcher(2, 1, 10), "HHTHH")
    assert run.increments == [2, 2, 2, 1, 1]


def test_stop_on_bankrupt_after_one_loss():
    run = simulate(StopOnBankrupt(always_heads(1, 1), Finite((1,))), "THHHH")
    assert run.increments == [1, 0, 0, 0, 0]
    assert run.wealth[-1] == 0


def test_stop_on_bankrupt_stops_on_unaffordable_wager():
    run = simulate(StopOnBankrupt(always_heads(3, 5), Finite((3,))), "TH")
    assert run.increments == [3, 0]


@pytest.mark.parametrize(
    "mode, mag, expected",
    [("floor", F(7, 2), 3), ("nearest", F(7, 2), 4), ("nearest", F(5, 4), 1), (None, F(5, 4), F(5, 4))],
)
def test_copycat_rounding(mode, mag, expected):
    s = Copycat(always_heads(mag, 10), 1, mode, initial=10)
    assert simulate(s, "H").increments == [expected]


def test_copycat_keeps_target_side():
    s = Copycat(opponent_zoo({"kind": "alwaysTails", "w": "3"}), F(1, 3))
    assert simulate(s, "H").increments == [-1]


def test_zoo_builds_every_kind():
    specs = [
        {"kind": "constantWealth", "c": "3"},
        {"kind": "alwaysHeads", "w": "1"},
        {"kind": "alwaysTails", "w": "1/2", "initial": "4"},
        {"kind": "thresholdSwitcher", "w1": "2", "w2": "1"},
        {"kind": "scripted", "wagers": ["1", "-2"], "cycle": True},
        {"kind": "copycat", "target": {"kind": "alwaysHeads", "w": "2"}, "ratio": "1/2"},
        {"kind": "stopOnBankrupt", "inner": {"kind": "alwaysHeads", "w": "1"}, "set": {"kind": "finite", "values": ["1"]}},
        {"kind": "ruler", "set": {"kind": "harmonic_shifted"}, "initial": "64"},
        {"kind": "pseudoRandom", "values": ["1", "2"], "seed": 5},
        {"kind": "followLast", "w": "1"},
    ]
    assert {s["kind"] for s in specs} == set(KINDS)
    for spec in specs:
        s = opponent_zoo(spec)
        again = opponent_zoo(s.spec())
        assert simulate(s, "HTTHHT").wealth == simulate(again, "HTTHHT").wealth


def test_zoo_errors():
    with pytest.raises(UnknownSpec):
        opponent_zoo({"kind": "martian"})
    with pytest.raises(UnknownSpec):
        opponent_zoo({"w": "1"})
    with pytest.raises(InputError):
        opponent_zoo({"kind": "alwaysHeads"})
    with pytest.raises(InputError):
        opponent_zoo({"kind": "copycat", "target": {"kind": "alwaysHeads", "w": "1"}, "ratio": "1", "round": "up"})


@given(seed=st.integers(0, 10**6), h=st.text(alphabet="HT", max_size=60))
def test_pseudo_random_never_overbets(seed, h):
    run = simulate(PseudoRandom([1, 2, 5], seed=seed, initial=3), h)
    assert not run.bankrupt
    assert all(abs(i) in (0, 1, 2, 5) for i in run.increments)


@given(h=st.text(alphabet="HT", max_size=60), w=st.integers(1, 5))
def test_integer_copycat_wagers_stay_in_integers(h, w):
    s = StopOnBankrupt(Copycat(ThresholdSwitcher(w + 1, w, 50), F(1, 2), "nearest"), IntegerMultiples(1))
    run = simulate(s, h)
    assert all(i == 0 or IntegerMultiples(1).contains(abs(i)) for i in run.increments)
