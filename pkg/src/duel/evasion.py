"""Casino sequences that let one gambler win while every opponent fails.

Everything here works in normalised units: the home martingale's wager set
is scaled so its relevant anchor is 1 and the opponents' wager set so its
least nonzero element is 1.  The scale factors are kept on the result so
ledgers can be mapped back.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    BNotBoundedAwayFromZero,
    CasinoInvariantFailed,
    FragilityAssertionFailed,
    InputError,
    InvalidState,
    MonotonicityViolation,
    NotWellOrdered,
    UnboundedA,
    UndecidableComparison,
)
from .martingale import (
    H,
    T,
    MartingaleRun,
    Outcome,
    Player,
    RulerMartingale,
    Strategy,
    default_ruler_initial,
    parse_history,
)
from .values import INF, Value, as_value, format_value
from .wagerset import Enumeration, Scaled, WagerSet
from .zoo import StopOnBankrupt

# ---------------------------------------------------------------------------
# ratio minimisation
# ---------------------------------------------------------------------------


def ratio_min_case(nval, mval, ninc, minc) -> tuple[Outcome, int]:
    """Ratio-minimising outcome and which rule (1, 2 or 3) chose it."""
    if not mval > 0:
        raise InvalidState(f"ratio minimisation needs M > 0, got {format_value(mval)}")
    if ninc == 0 and minc == 0:
        return H, 3
    tie = None
    for x in (H, T):
        s = x.sign
        n1, m1 = nval + s * ninc, mval + s * minc
        if not m1 > 0:
            continue
        # compare n1/m1 with nval/mval without dividing
        lhs, rhs = n1 * mval, nval * m1
        if lhs < rhs:
            return x, 1
        if lhs == rhs and m1 > mval and tie is None:
            tie = x
    if tie is not None:
        return tie, 2
    raise InvalidState(
        f"no ratio-minimising outcome at N={format_value(nval)}, M={format_value(mval)}, "
        f"N'={format_value(ninc)}, M'={format_value(minc)}; is N negative somewhere?"
    )


def ratio_min_outcome(nval, mval, ninc, minc) -> Outcome:
    """First priority: N/M strictly drops.  Then: N/M unchanged while M grows.  Else heads."""
    return ratio_min_case(*(as_value(v) for v in (nval, mval, ninc, minc)))[0]


@dataclass(frozen=True)
class RatioMinTrace:
    t: int
    n: Value
    m: Value
    n_inc: Value
    m_inc: Value
    outcome: Outcome
    case: int

    @property
    def ratio(self) -> Value:
        return self.n / self.m


@dataclass
class RatioMinResult:
    trace: list
    n_run: MartingaleRun
    m_run: MartingaleRun

    @property
    def final_ratio(self) -> Value:
        return self.n_run.value / self.m_run.value

    def ratios(self) -> list:
        return [r.ratio for r in self.trace] + [self.final_ratio]


def ratio_min_extension(n: Strategy, m: Strategy, prefix="", steps: int = 0) -> RatioMinResult:
    """Extend ``prefix`` by ``steps`` ratio-minimising outcomes, asserting the ratio never rises."""
    n_run, m_run = MartingaleRun.start(n), MartingaleRun.start(m)
    for o in parse_history(prefix):
        n_run.step(o)
        m_run.step(o)
    if not m_run.value > 0:
        raise InvalidState("M must be positive at the end of the prefix")
    trace = []
    for _ in range(steps):
        nv, mv = n_run.value, m_run.value
        ni, mi = n_run.next_increment(), m_run.next_increment()
        x, case = ratio_min_case(nv, mv, ni, mi)
        trace.append(RatioMinTrace(m_run.t, nv, mv, ni, mi, x, case))
        n_run.step(x)
        m_run.step(x)
        lhs, rhs = n_run.value * mv, nv * m_run.value
        if lhs > rhs or (case == 1 and lhs == rhs):
            raise MonotonicityViolation(f"N/M rose at t={m_run.t} (case {case})")
    return RatioMinResult(trace, n_run, m_run)


def deviations(trace: Sequence[RatioMinTrace], L, epsilon) -> list:
    """Per-step flags ``|N' - L M'| > epsilon``."""
    L, epsilon = as_value(L), as_value(epsilon)
    return [abs(r.n_inc - L * r.m_inc) > epsilon for r in trace]


def cesaro_density(trace: Sequence[RatioMinTrace], L, epsilon) -> Fraction:
    if not trace:
        raise InputError("empty trace")
    flags = deviations(trace, L, epsilon)
    return Fraction(sum(flags), len(flags))


def windowed_density(trace: Sequence[RatioMinTrace], L, epsilon, windows: Sequence[int]) -> list:
    """Deviation density over each prefix window ``[0, T)``."""
    flags = deviations(trace, L, epsilon)
    out = []
    for w in windows:
        if w > len(flags) or w < 1:
            raise InputError(f"window {w} does not fit a trace of length {len(flags)}")
        out.append(Fraction(sum(flags[:w]), w))
    return out


# ---------------------------------------------------------------------------
# normalisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedPair:
    a: WagerSet
    b: WagerSet
    r_a: Value
    r_b: Value

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json(), "r_a": format_value(self.r_a), "r_b": format_value(self.r_b)}


def _scale(s: WagerSet, r) -> WagerSet:
    return s if r == 1 else Scaled(r, s)


def b_scale(b: WagerSet) -> Value:
    bb = b.bounds()
    if not bb.bounded_away_from_zero or bb.inf_nonzero == INF:
        raise BNotBoundedAwayFromZero(f"{b.to_json()} has nonzero elements accumulating at 0")
    return 1 / bb.inf_nonzero


def normalize_pair(a: WagerSet, b: WagerSet) -> NormalizedPair:
    """Scale A to ``sup = 1`` and B to ``inf(B minus 0) = 1``."""
    sup = a.bounds().sup
    if sup == INF:
        raise UnboundedA(f"{a.to_json()} is unbounded")
    if not sup > 0:
        raise InputError("A has no positive element")
    ra, rb = 1 / sup, b_scale(b)
    return NormalizedPair(_scale(a, ra), _scale(b, rb), ra, rb)


# ---------------------------------------------------------------------------
# shared bookkeeping
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    return "" if v is None else format_value(v) if not isinstance(v, (str, int)) else str(v)


@dataclass
class StateLog:
    """Column store of per-step casino state; row t describes time t."""

    columns: list
    rows: list = field(default_factory=list)

    def append(self, row: Sequence) -> None:
        self.rows.append(tuple(row))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()


@dataclass
class CasinoResult:
    X: list
    m_run: MartingaleRun
    opponent_runs: list
    state_log: StateLog
    r_a: Value = Fraction(1)
    r_b: Value = Fraction(1)
    metadata: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.X)

    def opponent_wealth(self, i: int) -> list:
        """Normalised wealth ledger of user opponent ``i`` (0-based)."""
        return [self.r_b * w for w in self.opponent_runs[i].wealth]


def _wrap(opponents: Sequence[Strategy], b: WagerSet) -> list:
    return [o if isinstance(o, StopOnBankrupt) else StopOnBankrupt(o, b) for o in opponents]


def _step_all(runs, x, bets):
    for r in runs:
        if r.bankrupt:
            raise CasinoInvariantFailed(f"{r.strategy!r} went into debt despite its stop rule")
        r.step(x, bets)


# ---------------------------------------------------------------------------
# bounded case
# ---------------------------------------------------------------------------


@dataclass
class BoundedConfig:
    m_initial: Value | None = None  # normalised units; default is the ruler default
    observe_bets: bool = False
    check_invariants: bool = True


def alpha_key(floors: Sequence[int], k: int, users: int) -> tuple:
    """The tuple (floor n_1, ..., floor n_k) stored as (explicit head, count of trailing 1s)."""
    head_len = min(k, 2 * users)
    return tuple(floors[:head_len]), k - head_len


def alpha_less(a: tuple, b: tuple) -> bool:
    """Strict lexicographic order on alpha tuples where a proper prefix counts as larger."""
    (ha, ta), (hb, tb) = a, b
    for x, y in zip(ha, hb):
        if x != y:
            return x < y
    if len(ha) != len(hb):
        return len(ha) > len(hb)
    return ta > tb


def k_of(m, partial: Sequence) -> int:
    """``max{i : S_i < m}`` where ``partial[i]`` is S_i for small i and later S_i grow by 1 per index."""
    last = len(partial) - 1
    if partial[last] < m:
        d = m - partial[last]
        return last + math.ceil(d) - 1
    lo = 0
    for i in range(1, len(partial)):
        if partial[i] < m:
            lo = i
        else:
            break
    return lo


def bounded_casino(
    a: WagerSet,
    b: WagerSet,
    opponents: Sequence[Strategy],
    horizon: int,
    config: BoundedConfig | None = None,
) -> CasinoResult:
    """Play the ruler martingale over normalised A against B-opponents padded with constant 1s.

    Virtual index 2j-1 holds user opponent j and every other index holds a
    constant-1 martingale.  Case I answers the lowest active index within
    k(t) adversarially; Case II ratio-minimises the next index against the
    reserve M - S(t).
    """
    config = config or BoundedConfig()
    pair = normalize_pair(a, b)
    m_strat = RulerMartingale(pair.a, config.m_initial if config.m_initial is not None else default_ruler_initial(pair.a))
    users = _wrap(opponents, b)
    U = len(users)
    rb = pair.r_b
    m_run = MartingaleRun.start(m_strat)
    runs = [MartingaleRun.start(u) for u in users]
    cols = ["t", "outcome", "m", "k", "case", "acting_index", "S_k"] + [f"n_{j + 1}" for j in range(U)]
    log = StateLog(cols)
    X: list = []
    violations: list = []

    def state():
        vals = [rb * r.value for r in runs]
        partial = [Fraction(0)]
        for j in range(U):
            partial.append(partial[-1] + vals[j])
            partial.append(partial[-1] + 1)
        return vals, partial

    vals, partial = state()
    m = m_run.value
    k = k_of(m, partial)
    prev_case, prev_act = "", ""
    prev_alpha = None
    try:
        for t in range(horizon + 1):
            s_k = partial[k] if k < len(partial) else partial[-1] + (k - 2 * U)
            log.append([t, X[-1].value if X else "", m, k, prev_case, prev_act, s_k] + vals)
            if config.check_invariants and not s_k < m:
                raise CasinoInvariantFailed(f"S_k(t) >= m(t) at t={t}")
            floors = [math.floor(v) for p in zip(vals, [1] * U) for v in p]
            alpha = alpha_key(floors, k, U)
            if config.check_invariants and prev_alpha is not None:
                if prev_case == "I" and not alpha_less(alpha, prev_alpha):
                    raise CasinoInvariantFailed(f"alpha did not decrease on a Case I step at t={t}")
                if prev_case == "II" and alpha_less(prev_alpha, alpha):
                    raise CasinoInvariantFailed(f"alpha increased on a Case II step at t={t}")
            if t == horizon:
                break
            if m_run.bankrupt:
                raise CasinoInvariantFailed(f"the home martingale cannot cover its wager at t={t}")
            m_inc = m_run.next_increment()
            incs = [rb * r.next_increment() for r in runs]
            acting = None
            for j in range(min(U, (k + 1) // 2)):
                if incs[j] != 0:
                    acting = j
                    break
            if acting is not None:
                x = T if incs[acting] > 0 else H
                case, act = "I", 2 * acting + 1
            else:
                target = k + 1
                if target % 2 == 1 and (target + 1) // 2 <= U:
                    j = (target - 1) // 2
                    nv, ni = vals[j], incs[j]
                else:
                    nv, ni = Fraction(1), Fraction(0)
                reserve = m - s_k
                if not reserve > 0:
                    raise CasinoInvariantFailed(f"reserve M - S(t) is not positive at t={t}")
                x = ratio_min_case(nv, reserve, ni, m_inc)[0]
                case, act = "II", target
            bets = {"M": m_inc, "opponents": incs} if config.observe_bets else None
            X.append(x)
            m_run.step(x, bets)
            _step_all(runs, x, bets)
            k_prev = k
            vals, partial = state()
            m = m_run.value
            k = k_of(m, partial)
            if config.check_invariants and case == "II" and k < k_prev:
                raise CasinoInvariantFailed(f"k(t) fell on a Case II step at t={t + 1}")
            if case == "II" and k == k_prev:
                s_new = partial[k] if k < len(partial) else partial[-1] + (k - 2 * U)
                n_new = vals[(target - 1) // 2] if target % 2 == 1 and (target + 1) // 2 <= U else 1
                if n_new * reserve > nv * (m - s_new):
                    raise MonotonicityViolation(f"N/(M - S) rose on a Case II step at t={t + 1}")
            prev_case, prev_act, prev_alpha = case, act, alpha
    except UndecidableComparison as exc:
        raise UndecidableComparison(f"at step t={t}: {exc}") from exc
    meta = {
        "construction": "bounded",
        "normalization": pair.to_json(),
        "enumeration": m_strat.enumeration.describe(),
        "m_initial": format_value(m_strat.initial_value),
        "virtual_layout": "user j at index 2j-1, constant 1 elsewhere",
        "opponents": [u.spec() for u in users],
    }
    return CasinoResult(X, m_run, runs, log, pair.r_a, rb, meta, violations)


# ---------------------------------------------------------------------------
# well-ordered case
# ---------------------------------------------------------------------------


def repeated_prefix_index(k: int) -> int:
    """0-based position in the base enumeration of term k (1-based) of x1; x1,x2; x1,x2,x3; ..."""
    r = (math.isqrt(8 * (k - 1) + 1) - 1) // 2  # completed rows before term k
    return k - 1 - r * (r + 1) // 2


class DenseRepeating:
    """``a_k`` for k >= 1 from an enumeration, repeating every prefix."""

    def __init__(self, base: Enumeration):
        self.base = base

    def __getitem__(self, k: int):
        return self.base[repeated_prefix_index(k)]


@dataclass
class WellOrderedConfig:
    m_initial: Value = Fraction(1)
    observe_bets: bool = False
    raise_on_violation: bool = True


class _BlockPlayer(Player):
    """Always heads; wager a_k over a block whose length depends on wealth at the block start."""

    __slots__ = ("owner", "k", "s", "f", "t", "wealth")

    def __init__(self, owner):
        self.owner = owner
        self.k, self.s, self.t = 1, 0, 0
        self.wealth = owner.initial_value
        self.f = owner.block_length(self.wealth, 1)

    def wager(self, history, wealth):
        return self.owner.seq[self.k]

    def observe(self, history, outcome, bets=None):
        inc = self.owner.seq[self.k]
        self.wealth = self.wealth + inc if outcome is H else self.wealth - inc
        self.t += 1
        if outcome is T:
            self.k, self.s = 1, self.t
            self.f = self.owner.block_length(self.wealth, 1)
        elif self.t == self.s + self.f:
            self.k, self.s = self.k + 1, self.t
            self.f = self.owner.block_length(self.wealth, self.k)

    def g(self):
        """The smoothed wager: a_k, or a linear ramp towards a larger a_{k+1} across the block."""
        a, a_next = self.owner.seq[self.k], self.owner.seq[self.k + 1]
        if a_next <= a:
            return a
        return ((self.s + self.f - self.t) * a + (self.t - self.s) * a_next) / self.f


class BlockMartingale(Strategy):
    """The well-ordered construction's home martingale.

    It bets heads with wager ``a_k`` for ``f`` consecutive steps, moves on
    to ``a_{k+1}``, and restarts from ``a_1`` after any tails.  The block
    length is the least integer that is at least 1, the wealth at the
    block start, and ``|a_{k+1} - a_k| / a_k``.
    """

    def __init__(self, a_norm: WagerSet, initial_value=Fraction(1)):
        self.seq = DenseRepeating(Enumeration(a_norm))
        super().__init__(initial_value, a_norm)

    def block_length(self, wealth, k) -> int:
        a, a_next = self.seq[k], self.seq[k + 1]
        return max(1, math.ceil(max(wealth, abs(a_next - a) / a)))

    def player(self):
        return _BlockPlayer(self)

    def spec(self):
        return {"kind": "blockMartingale", "set": self.wager_set.to_json(), "initial": format_value(self.initial_value)}


def p_of(level, nus: Sequence) -> int:
    """Largest p >= 0 with ``level > nu_p``; past the listed opponents nu grows by 1 per index."""
    last = len(nus) - 1
    if level > nus[last]:
        return last + math.ceil(level - nus[last]) - 1
    p = 0
    for i in range(1, len(nus)):
        if level > nus[i]:
            p = i
        else:
            break
    return p


def well_ordered_casino(
    a: WagerSet,
    b: WagerSet,
    opponents: Sequence[Strategy],
    horizon: int,
    config: WellOrderedConfig | None = None,
) -> CasinoResult:
    """Block martingale plus fragility-driven casino against B-opponents, B well ordered.

    Opponents past the given list are zero martingales.  The fragility condition
    and the bankroll bound ``m >= g`` are checked at every step.
    """
    config = config or WellOrderedConfig()
    if not b.is_well_ordered():
        raise NotWellOrdered(f"{b.to_json()} is not well ordered")
    base = Enumeration(a)
    a1 = base[0]
    a_norm = _scale(a, 1 / a1)
    rb = b_scale(b)
    m_strat = BlockMartingale(a_norm, config.m_initial)
    users = _wrap(opponents, b)
    U = len(users)
    m_run = MartingaleRun.start(m_strat)
    player: _BlockPlayer = m_run._player
    runs = [MartingaleRun.start(u) for u in users]
    cols = ["t", "outcome", "m", "m_inc", "g", "p", "mu", "case", "acting_index"] + [f"n_{j + 1}" for j in range(U)]
    cols += ["q"]
    log = StateLog(cols)
    X: list = []
    violations: list = []

    def fail(exc_type, msg):
        violations.append(msg)
        if config.raise_on_violation:
            raise exc_type(msg)

    prev_case, prev_act = "", ""
    prev = None  # (case, acting index, p, g, m_inc) at t-1
    try:
        for t in range(horizon + 1):
            m = m_run.value
            m_inc = m_run.next_increment()
            g = player.g()
            vals = [rb * r.value for r in runs]
            nus = [Fraction(0)]
            for j in range(U):
                nus.append(nus[-1] + 1 + vals[j])
            p = p_of(m - (g - 1), nus)
            nu_p = nus[p] if p <= U else nus[U] + (p - U)
            mu = m - (nu_p + 1)
            if not m >= g:
                fail(CasinoInvariantFailed, f"m(t) < g(t) at t={t}")
            if not g >= m_inc:
                fail(CasinoInvariantFailed, f"g(t) < m'(t) at t={t}")
            if prev is not None:
                pcase, pact, pp, pg, pminc = prev
                if pcase == "ii" and pp == p and pp < U and pmu > 0 and mu > 0 and vals[p] * pmu > pn * mu:
                    fail(MonotonicityViolation, f"N/mu rose on a case (ii) step at t={t}")
                if pcase == "i" and p < pact:
                    fail(FragilityAssertionFailed, f"fragile index {pact} lost fragility at t={t}")
                if pcase == "ii" and p < pp:
                    fail(FragilityAssertionFailed, f"p fell from {pp} to {p} on a ratio step at t={t}")
                if X[-1] is T and g != 1:
                    fail(CasinoInvariantFailed, f"g(t) != 1 after tails at t={t}")
                if X[-1] is H and g - pg > pminc:
                    fail(CasinoInvariantFailed, f"g jumped by more than m' at t={t}")
            target_q = None
            if p < U and mu > 0:
                target_q = vals[p] / mu
            log.append([t, X[-1].value if X else "", m, m_inc, g, p, mu, prev_case, prev_act] + vals + [target_q])
            if t == horizon:
                break
            if m_run.bankrupt:
                raise CasinoInvariantFailed(f"the home martingale cannot cover its wager at t={t}")
            incs = [rb * r.next_increment() for r in runs]
            acting = None
            for j in range(min(U, p)):
                if incs[j] != 0:
                    acting = j
                    break
            if acting is not None:
                x = T if incs[acting] > 0 else H
                case, act = "i", acting + 1
            else:
                case, act = "ii", p + 1
                x = H
                if p < U and mu > 0 and incs[p] * mu > vals[p] * m_inc:
                    x = T
            bets = {"M": m_inc, "opponents": incs} if config.observe_bets else None
            X.append(x)
            m_run.step(x, bets)
            _step_all(runs, x, bets)
            prev = (case, act, p, g, m_inc)
            pmu, pn = mu, vals[p] if p < U else None
            prev_case, prev_act = case, act
    except UndecidableComparison as exc:
        raise UndecidableComparison(f"at step t={t}: {exc}") from exc
    meta = {
        "construction": "well-ordered",
        "a_scale": format_value(1 / a1),
        "b_scale": format_value(rb),
        "enumeration": base.describe() + " repeated as x1; x1,x2; x1,x2,x3; ...",
        "m_initial": format_value(m_strat.initial_value),
        "phantoms": "opponents past the list are zero martingales",
        "opponents": [u.spec() for u in users],
    }
    return CasinoResult(X, m_run, runs, log, 1 / a1, rb, meta, violations)


# ---------------------------------------------------------------------------
# two-phase introductory casino
# ---------------------------------------------------------------------------


def two_phase_casino(home: Strategy, opponents: Sequence[Strategy], horizon: int, lead=3, b: WagerSet | None = None) -> CasinoResult:
    """Heads until the home gambler leads gambler 1 by more than ``lead``, one tails, then oppose gambler 1.

    In the second phase heads is chosen whenever gambler 1 stays out.
    """
    lead = as_value(lead)
    if not opponents:
        raise InputError("the two-phase casino needs at least one opponent")
    users = _wrap(opponents, b) if b is not None else list(opponents)
    home_run = MartingaleRun.start(home)
    runs = [MartingaleRun.start(u) for u in users]
    cols = ["t", "outcome", "phase", "m"] + [f"n_{j + 1}" for j in range(len(users))]
    log = StateLog(cols)
    X: list = []
    phase = 1
    try:
        for t in range(horizon + 1):
            log.append([t, X[-1].value if X else "", phase, home_run.value] + [r.value for r in runs])
            if t == horizon:
                break
            if phase == 1:
                if home_run.value - runs[0].value > lead:
                    x, phase = T, 2
                else:
                    x = H
            else:
                inc = runs[0].next_increment()
                x = H if inc <= 0 else T
            if home_run.bankrupt:
                raise CasinoInvariantFailed(f"the home gambler cannot cover its wager at t={t}")
            X.append(x)
            home_run.step(x)
            for r in runs:
                if not r.bankrupt:
                    r.step(x)
                else:
                    raise CasinoInvariantFailed(f"opponent {r.strategy!r} is in debt at t={t}")
    except UndecidableComparison as exc:
        raise UndecidableComparison(f"at step t={t}: {exc}") from exc
    return CasinoResult(X, home_run, runs, log, metadata={"construction": "two-phase", "lead": format_value(lead)})


# ---------------------------------------------------------------------------
# stabilisation
# ---------------------------------------------------------------------------


@dataclass
class StabilizationReport:
    last_active: list  # per opponent: 1 + last t with a nonzero wager, 0 if never
    stabilized: list  # per opponent: no wagers in the final window
    window_start: int
    suffix_min: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "last_active": self.last_active,
            "stabilized": self.stabilized,
            "window_start": self.window_start,
            "suffix_min": {k: _fmt(v) for k, v in self.suffix_min.items()},
        }


def last_active_step(run: MartingaleRun) -> int:
    for t in range(len(run.increments) - 1, -1, -1):
        if run.increments[t] != 0:
            return t + 1
    return 0


def suffix_minima(values: Sequence) -> list:
    out = list(values)
    for i in range(len(out) - 2, -1, -1):
        if out[i + 1] < out[i]:
            out[i] = out[i + 1]
    return out


def stabilization_report(result: CasinoResult, window_fraction=Fraction(1, 5)) -> StabilizationReport:
    horizon = result.horizon
    start = horizon - math.floor(horizon * as_value(window_fraction))
    last = [last_active_step(r) for r in result.opponent_runs]
    stable = [la <= start for la in last]
    mins = {}
    for name in ("k", "p"):
        if name in result.state_log.columns:
            col = result.state_log.column(name)
            mins[name] = min(col[start:]) if col[start:] else None
    return StabilizationReport(last, stable, start, mins)
