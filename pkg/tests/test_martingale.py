from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duel.errors import DepthCapExceeded, NotHistoryIndependent, SteppedBankruptRun
from duel.martingale import (
    H,
    T,
    MartingaleRun,
    RulerMartingale,
    parse_history,
    ruler_martingale,
    simulate,
    step,
    success_at_horizon,
    two_adic_valuation,
    validate_strategy,
    visit_density,
    walk_tree,
)
from duel.values import INF
from duel.wagerset import (
    ClosedInterval,
    Finite,
    GeometricPowers,
    HarmonicReciprocal,
    HarmonicShifted,
    IntegerMultiples,
    Scaled,
)
from duel.zoo import (
    ConstantWealth,
    FollowLast,
    PseudoRandom,
    Scripted,
    StopOnBankrupt,
    ThresholdSwitcher,
    always_heads,
    always_tails,
)

F = Fraction
histories = st.text(alphabet="HT", max_size=40)


def test_step_examples():
    assert step(MartingaleRun.start(Scripted([2], 5)), H).value == 7
    assert step(MartingaleRun.start(Scripted([2], 5)), T).value == 3
    assert step(MartingaleRun.start(Scripted([0], 5)), T).value == 5


def test_stepping_a_bankrupt_run_raises():
    run = MartingaleRun.start(always_heads(2, 1))
    assert run.bankrupt
    with pytest.raises(SteppedBankruptRun):
        run.step(H)


def test_validate_examples():
    # constant wager 1 with enough money for ten straight losses
    assert validate_strategy(always_heads(1, 10), Finite((1,)), 10).valid
    assert not validate_strategy(always_heads(1, 9), Finite((1,)), 10).valid
    # a zero wager is not a wager from {1}
    assert not validate_strategy(ConstantWealth(1), Finite((1,)), 10).valid
    assert validate_strategy(always_heads(1, 1), Finite((1,)), 10).valid is False  # debt after a loss
    rep = validate_strategy(always_heads(2, 1), Finite((2,)), 3)
    assert not rep.valid and rep.violations[0][0] == ""
    assert validate_strategy(ruler_martingale(Finite((1, 2)), 24), Finite((1, 2)), 12).valid
    with pytest.raises(DepthCapExceeded):
        validate_strategy(ConstantWealth(1), Finite((1,)), 23)


def test_validate_reports_wager_outside_set():
    rep = validate_strategy(always_heads(3, 100), Finite((1, 2)), 2)
    assert not rep.valid
    assert {kind for _, kind, *_ in rep.violations} == {"wager-not-in-set"}


def test_ruler_valuations_and_wagers():
    assert [two_adic_valuation(t) for t in range(1, 9)] == [0, 1, 0, 2, 0, 1, 0, 3]
    r = ruler_martingale(Finite((1, 2)), 10)
    assert [r.wager_at(t) for t in range(1, 9)] == [1, 2, 1, 1, 1, 2, 1, 2]


def test_ruler_default_initial():
    assert RulerMartingale(Finite((F(1, 2), 3))).initial_value == 32
    assert RulerMartingale(HarmonicShifted()).initial_value == 64
    with pytest.raises(Exception):
        RulerMartingale(IntegerMultiples(1))


def count_hits(wagers, a, eps):
    return sum(1 for w in wagers if abs(w - a) < eps)


def test_visit_density_examples():
    r = ruler_martingale(Finite((1, 2)), 10)
    n = 2**16
    # independent count: valuation parity decides the wager
    expected_two = F(sum(1 for t in range(1, n + 1) if two_adic_valuation(t) % 2 == 1), n)
    assert visit_density(r, 2, F(1, 2), n) == expected_two == F(21845, 65536)
    assert visit_density(r, 1, F(1, 2), n) >= F(1, 2)
    assert visit_density(r, 1, 0, n) == 1 - expected_two
    assert visit_density(ruler_martingale(HarmonicShifted(), 64), 2, 0, n) == F(1, 2)
    assert visit_density(r, 7, F(1, 100), n) == 0


def test_visit_density_needs_history_independence():
    with pytest.raises(NotHistoryIndependent):
        visit_density(ThresholdSwitcher(2, 1), 1, F(1, 2), 8)


def test_success_examples():
    assert success_at_horizon(simulate(always_heads(1, 1), "H" * 100), 50)
    assert not success_at_horizon(simulate(always_heads(1, 10), "T" * 20), 0)
    assert not success_at_horizon(simulate(ConstantWealth(1), "HT" * 5), 2)


def test_csv_export():
    run = simulate(Scripted([1, -2], 5), "HH")
    lines = run.to_csv().splitlines()
    assert lines[0] == "t,outcome,wager_signed,wealth"
    assert lines[1:] == ["0,,1,5", "1,H,-2,6", "2,H,0,4"]


SAMPLE_STRATEGIES = [
    always_heads(1, 30),
    always_tails(F(1, 2), 30),
    ThresholdSwitcher(2, 1, 40),
    FollowLast(F(3, 2), 40),
    Scripted([1, -3, F(1, 2)], 40, cycle=True),
    PseudoRandom([1, 2, 5], seed=4, initial=20),
    ruler_martingale(HarmonicShifted(), 64),
]


@pytest.mark.parametrize("s", SAMPLE_STRATEGIES, ids=lambda s: type(s).__name__)
@given(h=histories)
def test_two_point_identity(s, h):
    run = simulate(s, h)
    if run.bankrupt:
        return
    up, down = run.copy().step(H).value, run.copy().step(T).value
    assert (up + down) / 2 == run.value
    assert run.branch_values() == (up, down)


@pytest.mark.parametrize("s", SAMPLE_STRATEGIES, ids=lambda s: type(s).__name__)
@given(h=histories)
def test_replay_is_deterministic(s, h):
    a, b = simulate(s, h), simulate(s, h)
    assert a.wealth == b.wealth and a.increments == b.increments
    assert a.to_csv() == b.to_csv()


@given(h=histories, w=st.fractions(min_value=F(1, 4), max_value=5, max_denominator=8), init=st.integers(0, 12))
def test_stop_on_bankrupt_stays_nonnegative(h, w, init):
    run = simulate(StopOnBankrupt(always_heads(w, init), Finite((w,))), h)
    assert not run.bankrupt
    assert all(v >= 0 for v in run.wealth)


RULER_SETS = [
    Finite((1, 2)),
    Finite((F(1, 3), 5)),
    ClosedInterval(0, 1),
    HarmonicShifted(),
    HarmonicReciprocal(),
    GeometricPowers(2, "nonpositive"),
    Scaled(3, HarmonicShifted()),
]


@pytest.mark.parametrize("a", RULER_SETS, ids=lambda s: s.kind)
@settings(max_examples=15)
@given(d=st.integers(1, 14))
def test_ruler_valid_with_generous_bankroll(a, d):
    sup = a.bounds().sup
    assert sup != INF
    assert validate_strategy(ruler_martingale(a, sup * d), a, d).valid


def test_walk_tree_covers_every_history():
    nodes = list(walk_tree([always_heads(1, 5), ConstantWealth(2)], 4))
    assert len(nodes) == 2**5 - 1
    assert {n.history for n in nodes if len(n.history) == 4} == {tuple(parse_history(f"{i:04b}".replace("0", "H").replace("1", "T"))) for i in range(16)}
    for n in nodes:
        assert n.wealth[1] == 2
        assert n.wealth[0] == 5 + sum(1 if x is H else -1 for x in n.history)
