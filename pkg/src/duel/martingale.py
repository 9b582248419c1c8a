"""Martingales as betting strategies, their wealth ledgers and validity checks.

A :class:`Strategy` is an immutable description (initial value, declared
wager set, JSON spec).  Calling :meth:`Strategy.player` yields a fresh
:class:`Player` that sees the outcome history one step at a time; a player
only ever receives the history prefix, so it cannot consult the future.
Replaying the same history through a fresh player reproduces the same
increments.

Increments are signed: a positive increment bets on heads.
"""

from __future__ import annotations

import copy
import csv
import enum
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DepthCapExceeded, EmptySet, InputError, NotHistoryIndependent, SteppedBankruptRun
from .values import INF, Value, as_value, format_value
from .wagerset import Enumeration, WagerSet

VALIDATE_DEPTH_CAP = 22


class Outcome(str, enum.Enum):
    HEADS = "H"
    TAILS = "T"

    @property
    def sign(self) -> int:
        return 1 if self is Outcome.HEADS else -1

    @property
    def opposite(self) -> "Outcome":
        return Outcome.TAILS if self is Outcome.HEADS else Outcome.HEADS

    def __str__(self):
        return self.value


H, T = Outcome.HEADS, Outcome.TAILS


def parse_history(text: str | Iterable) -> list[Outcome]:
    """``"HHT"`` or an iterable of outcomes/letters to a list of outcomes."""
    return [Outcome(c) if not isinstance(c, Outcome) else c for c in text]


def history_str(history: Sequence[Outcome]) -> str:
    return "".join(o.value for o in history)


class Player:
    """Mutable per-run state of a strategy.

    ``wager`` may be called any number of times between observations and
    must return the same signed increment each time.
    """

    def wager(self, history: Sequence[Outcome], wealth: Value) -> Value:
        raise NotImplementedError

    def observe(self, history: Sequence[Outcome], outcome: Outcome, bets=None) -> None:
        """``history`` is the prefix before ``outcome`` was appended."""

    def clone(self) -> "Player":
        return copy.copy(self)


class Tracked:
    """A wrapped player together with the wealth it would have on its own."""

    __slots__ = ("player", "wealth")

    def __init__(self, strategy: "Strategy"):
        self.player = strategy.player()
        self.wealth = strategy.initial_value

    def increment(self, history) -> Value:
        return as_value(self.player.wager(history, self.wealth))

    def advance(self, history, outcome, bets=None) -> None:
        inc = self.increment(history)
        self.player.observe(history, outcome, bets)
        self.wealth = self.wealth + inc if outcome is Outcome.HEADS else self.wealth - inc

    def clone(self) -> "Tracked":
        out = Tracked.__new__(Tracked)
        out.player = self.player.clone()
        out.wealth = self.wealth
        return out


class Strategy:
    history_independent = False

    def __init__(self, initial_value, wager_set: WagerSet | None = None):
        self.initial_value = as_value(initial_value)
        if not self.initial_value >= 0:
            raise InputError("initial value must be nonnegative")
        self.wager_set = wager_set

    def player(self) -> Player:
        raise NotImplementedError

    def wager_at(self, t: int) -> Value:
        """Increment at step t >= 1 for history-independent strategies."""
        raise NotImplementedError(f"{type(self).__name__} is not history-independent")

    def spec(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} initial={format_value(self.initial_value)}>"


# ---------------------------------------------------------------------------
# runs
# ---------------------------------------------------------------------------


@dataclass
class MartingaleRun:
    """Wealth ledger of one strategy along one evolving outcome sequence."""

    strategy: Strategy
    history: list = field(default_factory=list)
    wealth: list = field(default_factory=list)
    increments: list = field(default_factory=list)
    bankrupt: bool = False
    _player: Player | None = field(default=None, repr=False)
    _pending: object = field(default=None, repr=False)

    @classmethod
    def start(cls, strategy: Strategy) -> "MartingaleRun":
        run = cls(strategy, [], [strategy.initial_value], [], False, strategy.player())
        run.next_increment()
        return run

    @property
    def t(self) -> int:
        return len(self.history)

    @property
    def value(self):
        return self.wealth[-1]

    def next_increment(self) -> Value:
        """Increment at the current history; flags bankruptcy on a no-debt breach."""
        if self._pending is None:
            inc = as_value(self._player.wager(self.history, self.wealth[-1]))
            self._pending = inc
            if abs(inc) > self.wealth[-1]:
                self.bankrupt = True
        return self._pending

    def step(self, outcome: Outcome, bets=None) -> "MartingaleRun":
        if self.bankrupt:
            raise SteppedBankruptRun(
                f"{self.strategy!r} cannot bet {format_value(self._pending)} "
                f"with wealth {format_value(self.wealth[-1])} at t={self.t}"
            )
        inc = self.next_increment()
        if self.bankrupt:
            return self.step(outcome, bets)
        self._player.observe(self.history, outcome, bets)
        self.history.append(outcome)
        self.increments.append(inc)
        self.wealth.append(self.wealth[-1] + inc if outcome is H else self.wealth[-1] - inc)
        self._pending = None
        self.next_increment()
        return self

    def branch_values(self) -> tuple:
        """Wealth after heads and after tails from the current history."""
        inc = self.next_increment()
        return self.wealth[-1] + inc, self.wealth[-1] - inc

    def copy(self) -> "MartingaleRun":
        return MartingaleRun(
            self.strategy,
            list(self.history),
            list(self.wealth),
            list(self.increments),
            self.bankrupt,
            self._player.clone(),
            self._pending,
        )

    def rows(self) -> Iterator[dict]:
        """CSV rows ``t,outcome,wager_signed,wealth`` including t=0."""
        for t, w in enumerate(self.wealth):
            if t < len(self.increments):
                inc = self.increments[t]
            else:
                inc = self._pending
            yield {
                "t": t,
                "outcome": self.history[t - 1].value if t else "",
                "wager_signed": format_value(inc) if inc is not None else "",
                "wealth": format_value(w),
            }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["t", "outcome", "wager_signed", "wealth"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows())
        return buf.getvalue()


def step(run: MartingaleRun, outcome: Outcome) -> MartingaleRun:
    """Advance ``run`` by one outcome (in place) and return it."""
    return run.step(outcome)


def simulate(strategy: Strategy, outcomes: Iterable, stop_on_bankrupt: bool = True) -> MartingaleRun:
    """Run ``strategy`` along ``outcomes``; stops early if it goes bankrupt."""
    run = MartingaleRun.start(strategy)
    for o in parse_history(outcomes):
        if run.bankrupt and stop_on_bankrupt:
            break
        run.step(o)
    return run


def success_at_horizon(run: MartingaleRun, threshold) -> bool:
    """Finite-horizon success: never in debt and final wealth at least ``threshold``."""
    return not run.bankrupt and run.wealth[-1] >= as_value(threshold)


# ---------------------------------------------------------------------------
# exhaustive tree walks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    history: tuple
    wealth: tuple  # one entry per strategy
    increments: tuple


def walk_tree(strategies: Sequence[Strategy], depth: int) -> Iterator[Node]:
    """Every history of length 0..depth, visited depth first, for several strategies at once.

    Nodes at ``depth`` are yielded with their increments too.  A strategy that
    breaches no-debt keeps being evaluated; callers decide what to do with it.
    """
    players = [s.player() for s in strategies]
    wealth = [s.initial_value for s in strategies]
    stack = [([], players, wealth)]
    while stack:
        hist, players, wealth = stack.pop()
        incs = [as_value(p.wager(hist, w)) for p, w in zip(players, wealth)]
        yield Node(tuple(hist), tuple(wealth), tuple(incs))
        if len(hist) >= depth:
            continue
        for o in (T, H):
            ps = [p.clone() for p in players] if o is T else players
            for p in ps:
                p.observe(hist, o)
            w = [w + i if o is H else w - i for w, i in zip(wealth, incs)]
            stack.append((hist + [o], ps, w))


@dataclass
class ValidationReport:
    depth: int
    nodes: int = 0
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self):
        return {
            "depth": self.depth,
            "nodes": self.nodes,
            "valid": self.valid,
            "violations": [
                {"history": h, "kind": k, "increment": format_value(i), "wealth": format_value(w)}
                for h, k, i, w in self.violations
            ],
        }


def validate_strategy(s: Strategy, wager_set: WagerSet, depth: int, cap: int = VALIDATE_DEPTH_CAP) -> ValidationReport:
    """Walk every history shorter than ``depth`` and report bad wagers.

    A violation is either a wager magnitude outside ``wager_set`` or a bet
    larger than current wealth.  Subtrees below a no-debt breach are skipped.
    """
    if depth > cap:
        raise DepthCapExceeded(f"depth {depth} exceeds the exhaustive cap {cap}")
    report = ValidationReport(depth)
    stack = [([], s.player(), s.initial_value)]
    while stack:
        hist, player, wealth = stack.pop()
        report.nodes += 1
        inc = as_value(player.wager(hist, wealth))
        mag = abs(inc)
        if not wager_set.contains(mag):
            report.violations.append((history_str(hist), "wager-not-in-set", inc, wealth))
        if mag > wealth:
            report.violations.append((history_str(hist), "no-debt", inc, wealth))
            continue
        if len(hist) + 1 >= depth:
            continue
        tails = player.clone()
        tails.observe(hist, T)
        player.observe(hist, H)
        stack.append((hist + [T], tails, wealth - inc))
        stack.append((hist + [H], player, wealth + inc))
    return report


# ---------------------------------------------------------------------------
# ruler martingale
# ---------------------------------------------------------------------------


def two_adic_valuation(t: int) -> int:
    """Largest n with 2**n dividing t (t >= 1)."""
    if t < 1:
        raise ValueError("valuation needs t >= 1")
    return (t & -t).bit_length() - 1


class _IndependentPlayer(Player):
    __slots__ = ("strategy",)

    def __init__(self, strategy):
        self.strategy = strategy

    def wager(self, history, wealth):
        return self.strategy.wager_at(len(history) + 1)


class RulerMartingale(Strategy):
    """Always bets heads; at step t wagers the enumeration element indexed by the 2-adic valuation of t."""

    history_independent = True

    def __init__(self, wager_set: WagerSet, initial_value=None):
        self.enumeration = Enumeration(wager_set)
        try:
            self.enumeration[0]
        except StopIteration:
            raise EmptySet("ruler martingale needs a nonzero wager") from None
        if initial_value is None:
            initial_value = default_ruler_initial(wager_set)
        super().__init__(initial_value, wager_set)
        if not self.initial_value > 0:
            raise InputError("ruler martingale needs a positive initial value")

    def wager_at(self, t):
        return self.enumeration[two_adic_valuation(t)]

    def player(self):
        return _IndependentPlayer(self)

    def spec(self):
        return {"kind": "ruler", "set": self.wager_set.to_json(), "initial": format_value(self.initial_value)}


def default_ruler_initial(wager_set: WagerSet):
    """64 times the largest wager not above 1; unbounded sets need an explicit value."""
    b = wager_set.bounds()
    if b.sup == INF:
        raise InputError("the wager set is unbounded; supply the ruler martingale's initial value")
    top = wager_set.sup_below(Fraction(1))
    if top is None:
        top = b.inf_nonzero
    return 64 * top


def ruler_martingale(wager_set: WagerSet, initial_value=None) -> RulerMartingale:
    return RulerMartingale(wager_set, initial_value)


def visit_density(s: Strategy, a, epsilon, horizon: int) -> Fraction:
    """Fraction of steps 1..horizon whose wager lies within ``epsilon`` of ``a``.

    ``epsilon == 0`` counts exact hits.
    """
    if not s.history_independent:
        raise NotHistoryIndependent(f"{s!r} depends on the history")
    if horizon < 1:
        raise InputError("horizon must be at least 1")
    a, epsilon = as_value(a), as_value(epsilon)
    hits = 0
    for t in range(1, horizon + 1):
        d = abs(s.wager_at(t) - a)
        if d < epsilon or (epsilon == 0 and d == 0):
            hits += 1
    return Fraction(hits, horizon)
