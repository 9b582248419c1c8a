import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duel.errors import (
    BNotBoundedAwayFromZero,
    InvalidState,
    NotWellOrdered,
    UnboundedA,
)
from duel.evasion import (
    BlockMartingale,
    BoundedConfig,
    WellOrderedConfig,
    bounded_casino,
    cesaro_density,
    k_of,
    normalize_pair,
    p_of,
    ratio_min_case,
    ratio_min_extension,
    ratio_min_outcome,
    repeated_prefix_index,
    stabilization_report,
    suffix_minima,
    two_phase_casino,
    well_ordered_casino,
    windowed_density,
)
from duel.martingale import H, T, MartingaleRun, RulerMartingale
from duel.wagerset import (
    ClosedInterval,
    Finite,
    HalfLine,
    HarmonicShifted,
    IntegerMultiples,
    IntegerSieve,
    MultiplesExclusion,
    SieveWarning,
)
from duel.zoo import (
    ConstantWealth,
    Copycat,
    FollowLast,
    PseudoRandom,
    Scripted,
    StopOnBankrupt,
    ThresholdSwitcher,
    always_heads,
    always_tails,
)

F = Fraction
with warnings.catch_warnings():
    warnings.simplefilter("ignore", SieveWarning)
    ODDS = IntegerSieve(MultiplesExclusion(2))
INTS = IntegerMultiples(1)


# ratio minimisation ---------------------------------------------------------


def test_ratio_min_examples():
    assert ratio_min_outcome(1, 2, 1, 1) is T
    assert ratio_min_outcome(1, 2, 0, 1) is H
    assert ratio_min_case(F(1), F(2), F(0), F(0)) == (H, 3)
    assert ratio_min_case(F(1), F(2), F(1, 2), F(1)) == (H, 2)
    assert ratio_min_case(F(1), F(2), F(-1, 2), F(-1)) == (T, 2)
    with pytest.raises(InvalidState):
        ratio_min_outcome(1, 0, 0, 0)


def brute_ratio_min(n, m, ni, mi):
    """Independent reading of the three rules: evaluate both children as fractions."""
    if ni == 0 and mi == 0:
        return H
    kids = {x: (n + s * ni, m + s * mi) for x, s in ((H, 1), (T, -1))}
    ok = {x: v for x, v in kids.items() if v[1] > 0}
    down = [x for x, (a, b) in ok.items() if F(a) / b < F(n) / m]
    if down:
        return down[0]
    tie = [x for x, (a, b) in ok.items() if F(a) / b == F(n) / m and b > m]
    return tie[0]


@given(
    n=st.integers(0, 20),
    m=st.integers(1, 20),
    ni=st.integers(-20, 20),
    mi=st.integers(-20, 20),
)
def test_ratio_min_matches_brute_force(n, m, ni, mi):
    if abs(ni) > n or abs(mi) > m:
        return  # not a valid pair of martingale states
    assert ratio_min_outcome(n, m, ni, mi) is brute_ratio_min(n, m, ni, mi)


def test_extension_constant_vs_always_heads():
    res = ratio_min_extension(ConstantWealth(1), always_heads(1, 1), "", 5)
    assert [r.outcome for r in res.trace] == [H] * 5
    assert res.ratios() == [F(1, 1 + t) for t in range(6)]


def test_extension_copycat_keeps_ratio():
    m = ThresholdSwitcher(2, 1, 10)
    res = ratio_min_extension(Copycat(m, 1), m, "", 20)
    assert set(res.ratios()) == {1}
    assert all(r.case == 2 for r in res.trace)
    assert cesaro_density(res.trace, 1, F(1, 10)) == 0


def test_extension_respects_prefix():
    res = ratio_min_extension(ConstantWealth(1), always_heads(1, 3), "TT", 1)
    assert res.trace[0].t == 2 and res.trace[0].m == 1


def test_cesaro_examples():
    res = ratio_min_extension(ConstantWealth(2), always_heads(1, 3), "", 30)
    assert cesaro_density(res.trace, 0, F(1, 10)) == 0
    assert windowed_density(res.trace, 0, F(1, 10), [10, 30]) == [0, 0]


def test_extension_integer_opponent_vs_harmonic_ruler():
    ruler = RulerMartingale(HarmonicShifted(), 64)
    n = StopOnBankrupt(Copycat(ruler, 1, "nearest", 32), INTS)
    res = ratio_min_extension(n, ruler, "", 4096)
    rs = res.ratios()
    assert all(a >= b for a, b in zip(rs, rs[1:]))
    assert rs[-1] < rs[0] / 4


OPPONENTS = st.sampled_from(
    [
        lambda s: PseudoRandom([1, 2, 3], seed=s, initial=20),
        lambda s: FollowLast(1 + s % 3, 10 + s % 7),
        lambda s: Copycat(RulerMartingale(HarmonicShifted(), 64), 1, "floor", 16 + s % 40),
        lambda s: Scripted([1, -2, 3][: 1 + s % 3], 15, cycle=True),
    ]
)


@settings(max_examples=30)
@given(make=OPPONENTS, seed=st.integers(0, 1000), steps=st.integers(1, 300))
def test_ratio_never_rises(make, seed, steps):
    n = StopOnBankrupt(make(seed), INTS)
    res = ratio_min_extension(n, RulerMartingale(HarmonicShifted(), 64), "", steps)
    rs = res.ratios()
    assert all(a >= b for a, b in zip(rs, rs[1:]))
    for r, nxt in zip(res.trace, rs[1:]):
        if r.case == 1:
            assert nxt < r.ratio


# normalisation --------------------------------------------------------------


def test_normalize_examples():
    p = normalize_pair(Finite((1, 2)), IntegerMultiples(3))
    assert (p.r_a, p.r_b) == (F(1, 2), F(1, 3))
    assert p.a.bounds().sup == 1 and p.b.bounds().inf_nonzero == 1
    p = normalize_pair(Finite((F(1, 2), 1)), INTS)
    assert (p.r_a, p.r_b) == (1, 1)
    with pytest.raises(UnboundedA):
        normalize_pair(HalfLine(1), INTS)
    with pytest.raises(BNotBoundedAwayFromZero):
        normalize_pair(Finite((1,)), ClosedInterval(0, 1))


# bounded case ---------------------------------------------------------------


def test_k_of_example():
    assert k_of(F(7, 2), [0, 1, 2, 7]) == 2
    assert k_of(F(1, 2), [0, 1]) == 0
    # past the list, S grows by one per index
    assert k_of(F(21, 2), [0, 1, 2, 7]) == 6


def test_bounded_alwaysheads_stops():
    res = bounded_casino(HarmonicShifted(), INTS, [always_heads(1, 5)], 3000)
    rep = stabilization_report(res)
    assert 0 < rep.last_active[0] < 3000 * 4 // 5
    assert all(r.increments[t] == 0 for r in res.opponent_runs for t in range(rep.last_active[0], 3000))
    ks = res.state_log.column("k")
    mins = suffix_minima(ks)
    assert all(a <= b for a, b in zip(mins, mins[1:]))


def test_bounded_padding_only():
    res = bounded_casino(HarmonicShifted(), INTS, [], 512)
    assert set(res.X) == {H}
    ms = res.m_run.wealth
    assert all(b > a for a, b in zip(ms, ms[1:]))


def test_bounded_runs_when_hypothesis_fails():
    # B anticipates A here; the construction still runs, nothing is claimed
    a = Finite((1, 2))
    copy = Copycat(RulerMartingale(Finite((F(1, 2), 1)), 32), 2, None, 64)
    res = bounded_casino(a, INTS, [copy], 400)
    assert res.horizon == 400


def test_bounded_state_log_shape():
    res = bounded_casino(HarmonicShifted(), INTS, [always_heads(1, 5), always_tails(1, 5)], 50)
    cols = res.state_log.columns
    assert cols[:7] == ["t", "outcome", "m", "k", "case", "acting_index", "S_k"]
    assert len(res.state_log.rows) == 51
    assert all(s < m for s, m in zip(res.state_log.column("S_k"), res.state_log.column("m")))
    csv_text = res.state_log.to_csv()
    assert csv_text.splitlines()[0].startswith("t,outcome,m,k,case,acting_index,S_k")


def test_bounded_is_deterministic():
    ops = [ThresholdSwitcher(1, 1, 7), FollowLast(1, 9)]
    a = bounded_casino(HarmonicShifted(), INTS, ops, 800)
    b = bounded_casino(HarmonicShifted(), INTS, ops, 800)
    assert a.X == b.X and a.state_log.to_csv() == b.state_log.to_csv()


def test_bounded_preconditions():
    with pytest.raises(UnboundedA):
        bounded_casino(HalfLine(1), INTS, [], 10)


@settings(max_examples=12)
@given(seed=st.integers(0, 10**5), u=st.integers(1, 4))
def test_bounded_invariants_hold_for_random_pools(seed, u):
    ops = [PseudoRandom([1, 2, 3], seed=seed + j, initial=10 + 7 * j) for j in range(u)]
    res = bounded_casino(HarmonicShifted(), INTS, ops, 600, BoundedConfig(check_invariants=True))
    for r in res.opponent_runs:
        assert min(r.wealth) >= 0
    # an adversarial step against opponent j costs it at least 1, the least element of B
    log = res.state_log
    cols = {c: i for i, c in enumerate(log.columns)}
    for prev, row in zip(log.rows, log.rows[1:]):
        if row[cols["case"]] == "I":
            j = (row[cols["acting_index"]] + 1) // 2
            assert row[cols[f"n_{j}"]] <= prev[cols[f"n_{j}"]] - 1
    assert res.violations == []


# well-ordered case ----------------------------------------------------------


def test_repeated_prefix_scheme():
    assert [repeated_prefix_index(k) for k in range(1, 11)] == [0, 0, 1, 0, 1, 2, 0, 1, 2, 3]


def test_g_interpolation_example():
    # dense sequence 1; 1, 3; ... puts a_2 = 1 and a_3 = 3
    bm = BlockMartingale(Finite((1, 3)), 2)
    run = MartingaleRun.start(bm)
    player = run._player
    run.step(H)
    run.step(H)  # first block (a_1 = a_2 = 1) has length max(1, m=2) = 2
    assert player.k == 2 and player.f == max(1, -(-run.value // 1), 2)
    gs = []
    for _ in range(player.f):
        gs.append(player.g())
        run.step(H)
    assert gs[0] == 1 and gs[1] > 1
    # with f = 2 the ramp sits halfway at the second step
    bm2 = BlockMartingale(Finite((1, 3)), 2)
    p2 = bm2.player()
    p2.k, p2.s, p2.t, p2.f = 2, 10, 10, 2
    assert p2.g() == 1
    p2.t = 11
    assert p2.g() == 2


def test_block_resets_after_tails():
    run = MartingaleRun.start(BlockMartingale(IntegerMultiples(1), 1))
    for x in "HHHHT":
        run.step(H if x == "H" else T)
    assert run._player.k == 1 and run._player.g() == 1


def test_nu_mu_example():
    nus = [0, 1 + 3, 1 + 3 + 1 + 5, 10 + 1 + 100]  # n_1 = 3, n_2 = 5, a rich third opponent
    p = p_of(12 - (1 - 1), nus)
    assert p == 2 and nus[2] == 10
    assert 12 - (nus[p] + 1) == 1
    # phantom zero opponents extend nu by one per index
    # nu_3 = 11, nu_4 = 12, nu_5 = 13
    assert p_of(F(25, 2), [0, 4, 10]) == 4
    assert p_of(12, [0, 4, 10]) == 3
    assert p_of(F(21, 2), [0, 4, 10]) == 2


def test_well_ordered_requires_well_ordered_b():
    with pytest.raises(NotWellOrdered):
        well_ordered_casino(IntegerMultiples(2), ClosedInterval(1, 2), [], 10)


def test_well_ordered_small_run():
    ops = [always_heads(1, 3), ThresholdSwitcher(3, 1, 9)]
    res = well_ordered_casino(IntegerMultiples(2), ODDS, ops, 3000)
    assert res.violations == []
    log = res.state_log
    assert all(m >= g for m, g in zip(log.column("m"), log.column("g")))
    assert log.columns[:9] == ["t", "outcome", "m", "m_inc", "g", "p", "mu", "case", "acting_index"]
    rep = stabilization_report(res)
    assert all(rep.stabilized)


@settings(max_examples=10)
@given(seed=st.integers(0, 10**5))
def test_well_ordered_invariants_random_pools(seed):
    ops = [PseudoRandom([1, 3, 5], seed=seed, initial=11), FollowLast(1, 5)]
    res = well_ordered_casino(IntegerMultiples(2), ODDS, ops, 800, WellOrderedConfig(raise_on_violation=False))
    assert res.violations == []


# two-phase casino -----------------------------------------------------------


def test_two_phase_switches_after_lead_above_three():
    home = ThresholdSwitcher(2, 1, 2)
    res = two_phase_casino(home, [always_heads(1, 1)], 40, b=Finite((1,)))
    xs = "".join(x.value for x in res.X)
    first_t = xs.index("T")
    diff = [h - o for h, o in zip(res.m_run.wealth, res.opponent_runs[0].wealth)]
    assert diff[first_t] > 3 and all(d <= 3 for d in diff[:first_t])
    assert res.opponent_runs[0].wealth[-1] == 0


def test_stabilization_constant_opponents():
    res = bounded_casino(HarmonicShifted(), INTS, [ConstantWealth(3), ConstantWealth(5)], 200)
    assert stabilization_report(res).last_active == [0, 0]
