"""Opponent strategies built from JSON specs.

Every spec is a dict with a ``kind`` key.  Wagers and wealth values are
written as strings (``"1/2"``) or integers; nested strategies appear under
``target`` or ``inner``.  An omitted ``initial`` defaults to the largest
wager magnitude the spec names, so the strategy can afford one loss.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import InputError, UnknownSpec
from .martingale import H, T, Player, RulerMartingale, Strategy, Tracked
from .values import Value, as_value, format_value
from .wagerset import WagerSet, from_json as set_from_json


def _v(obj, key, default=None):
    if key not in obj:
        if default is None:
            raise InputError(f"strategy spec {obj.get('kind')!r} is missing field {key!r}")
        return as_value(default)
    return as_value(obj[key])


# ---------------------------------------------------------------------------
# simple strategies
# ---------------------------------------------------------------------------


class _Fixed(Player):
    __slots__ = ("inc",)

    def __init__(self, inc):
        self.inc = inc

    def wager(self, history, wealth):
        return self.inc


class ConstantWealth(Strategy):
    history_independent = True

    def __init__(self, c):
        super().__init__(c)

    def wager_at(self, t):
        return Fraction(0)

    def player(self):
        return _Fixed(Fraction(0))

    def spec(self):
        return {"kind": "constantWealth", "c": format_value(self.initial_value)}


class AlwaysSide(Strategy):
    """Bets ``w`` on one side forever."""

    history_independent = True

    def __init__(self, w, initial=None, heads: bool = True):
        self.w = as_value(w)
        self.heads = heads
        super().__init__(self.w if initial is None else initial)

    def wager_at(self, t):
        return self.w if self.heads else -self.w

    def player(self):
        return _Fixed(self.wager_at(1))

    def spec(self):
        kind = "alwaysHeads" if self.heads else "alwaysTails"
        return {"kind": kind, "w": format_value(self.w), "initial": format_value(self.initial_value)}


def always_heads(w, initial=None) -> AlwaysSide:
    return AlwaysSide(w, initial, True)


def always_tails(w, initial=None) -> AlwaysSide:
    return AlwaysSide(w, initial, False)


class _SwitchPlayer(Player):
    __slots__ = ("owner", "lost")

    def __init__(self, owner):
        self.owner = owner
        self.lost = False

    def wager(self, history, wealth):
        return self.owner.w2 if self.lost else self.owner.w1

    def observe(self, history, outcome, bets=None):
        if outcome is T:
            self.lost = True


class ThresholdSwitcher(Strategy):
    """Bets ``w1`` on heads until the first tails, then ``w2`` on heads forever."""

    def __init__(self, w1, w2, initial=None):
        self.w1, self.w2 = as_value(w1), as_value(w2)
        super().__init__(max(self.w1, self.w2) if initial is None else initial)

    def player(self):
        return _SwitchPlayer(self)

    def spec(self):
        return {
            "kind": "thresholdSwitcher",
            "w1": format_value(self.w1),
            "w2": format_value(self.w2),
            "initial": format_value(self.initial_value),
        }


class Scripted(Strategy):
    """Signed wagers read from a list by step; zero after the list ends unless cycling."""

    history_independent = True

    def __init__(self, wagers, initial=None, cycle: bool = False):
        self.wagers = tuple(as_value(w) for w in wagers)
        if cycle and not self.wagers:
            raise InputError("a cycling script needs at least one wager")
        self.cycle = cycle
        if initial is None:
            initial = max((abs(w) for w in self.wagers), default=Fraction(1))
        super().__init__(initial)

    def wager_at(self, t):
        i = t - 1
        if self.cycle:
            return self.wagers[i % len(self.wagers)]
        return self.wagers[i] if i < len(self.wagers) else Fraction(0)

    def player(self):
        return _IndexPlayer(self)

    def spec(self):
        return {
            "kind": "scripted",
            "wagers": [format_value(w) for w in self.wagers],
            "cycle": self.cycle,
            "initial": format_value(self.initial_value),
        }


class _IndexPlayer(Player):
    __slots__ = ("owner",)

    def __init__(self, owner):
        self.owner = owner

    def wager(self, history, wealth):
        return self.owner.wager_at(len(history) + 1)


class _CappedPlayer(Player):
    __slots__ = ("owner",)

    def __init__(self, owner):
        self.owner = owner

    def wager(self, history, wealth):
        return self.owner.capped(len(history) + 1, wealth)


class PseudoRandom(Strategy):
    """Seeded table of signed wagers drawn from ``values``; each draw shrinks to the largest affordable value."""

    def __init__(self, values, seed: int = 0, initial=None, zero_weight: int = 1):
        self.values = tuple(sorted(as_value(v) for v in values))
        if not self.values or self.values[0] <= 0:
            raise InputError("pseudoRandom needs positive wager values")
        self.seed = seed
        self.zero_weight = zero_weight
        self._table: list = []
        self._rng = random.Random(seed)
        super().__init__(self.values[-1] if initial is None else initial)

    def draw(self, t):
        while len(self._table) < t:
            k = self._rng.randrange(len(self.values) + self.zero_weight)
            s = self._rng.choice((1, -1))
            self._table.append((k, s))
        return self._table[t - 1]

    def capped(self, t, wealth):
        k, s = self.draw(t)
        if k >= len(self.values):
            return Fraction(0)
        while k >= 0 and self.values[k] > wealth:
            k -= 1
        return s * self.values[k] if k >= 0 else Fraction(0)

    def player(self):
        return _CappedPlayer(self)

    def spec(self):
        return {
            "kind": "pseudoRandom",
            "values": [format_value(v) for v in self.values],
            "seed": self.seed,
            "zero_weight": self.zero_weight,
            "initial": format_value(self.initial_value),
        }


class _FollowPlayer(Player):
    __slots__ = ("owner", "last")

    def __init__(self, owner):
        self.owner = owner
        self.last = H

    def wager(self, history, wealth):
        return self.owner.w if self.last is H else -self.owner.w

    def observe(self, history, outcome, bets=None):
        self.last = outcome


class FollowLast(Strategy):
    """Bets ``w`` that the last outcome repeats (heads at the start)."""

    def __init__(self, w, initial=None):
        self.w = as_value(w)
        super().__init__(self.w if initial is None else initial)

    def player(self):
        return _FollowPlayer(self)

    def spec(self):
        return {"kind": "followLast", "w": format_value(self.w), "initial": format_value(self.initial_value)}


# ---------------------------------------------------------------------------
# derived strategies
# ---------------------------------------------------------------------------


def _round(x: Value, mode: str | None) -> Value:
    if mode is None:
        return x
    if mode == "floor":
        return Fraction(math.floor(x))
    if mode == "nearest":  # halves round away from zero
        return Fraction(math.floor(x + Fraction(1, 2)))
    raise InputError(f"unknown rounding mode {mode!r}")


class _CopyPlayer(Player):
    __slots__ = ("owner", "inner")

    def __init__(self, owner):
        self.owner = owner
        self.inner = Tracked(owner.target)

    def wager(self, history, wealth):
        inc = self.inner.increment(history)
        mag = _round(abs(inc) * self.owner.ratio, self.owner.rounding)
        return mag if inc > 0 else -mag

    def observe(self, history, outcome, bets=None):
        self.inner.advance(history, outcome, bets)

    def clone(self):
        out = _CopyPlayer.__new__(_CopyPlayer)
        out.owner = self.owner
        out.inner = self.inner.clone()
        return out


class Copycat(Strategy):
    """Copies a target's side with the wager scaled by ``ratio`` and optionally rounded to an integer."""

    def __init__(self, target: Strategy, ratio, rounding: str | None = None, initial=None):
        self.target = target
        self.ratio = as_value(ratio)
        if not self.ratio > 0:
            raise InputError("copy ratio must be positive")
        self.rounding = rounding
        _round(Fraction(0), rounding)
        if initial is None:
            initial = _round(self.ratio * target.initial_value, rounding)
        super().__init__(initial)
        self.history_independent = target.history_independent

    def wager_at(self, t):
        inc = self.target.wager_at(t)
        mag = _round(abs(inc) * self.ratio, self.rounding)
        return mag if inc > 0 else -mag

    def player(self):
        return _CopyPlayer(self)

    def spec(self):
        out = {
            "kind": "copycat",
            "ratio": format_value(self.ratio),
            "target": self.target.spec(),
            "initial": format_value(self.initial_value),
        }
        if self.rounding:
            out["round"] = self.rounding
        return out


class _StopPlayer(Player):
    __slots__ = ("owner", "inner", "stopped")

    def __init__(self, owner):
        self.owner = owner
        self.inner = owner.inner.player()
        self.stopped = False

    def wager(self, history, wealth):
        if self.stopped:
            return Fraction(0)
        inc = as_value(self.inner.wager(history, wealth))
        if wealth < self.owner.floor or abs(inc) > wealth:
            self.stopped = True
            return Fraction(0)
        return inc

    def observe(self, history, outcome, bets=None):
        if not self.stopped:
            self.inner.observe(history, outcome, bets)

    def clone(self):
        out = _StopPlayer.__new__(_StopPlayer)
        out.owner = self.owner
        out.inner = self.inner.clone()
        out.stopped = self.stopped
        return out


class StopOnBankrupt(Strategy):
    """Passes the inner wagers through until it can no longer afford them, then bets nothing forever.

    It stops once wealth drops below the least nonzero wager of ``wager_set``
    or the inner strategy asks for more than current wealth.
    """

    def __init__(self, inner: Strategy, wager_set: WagerSet | None = None):
        self.inner = inner
        wager_set = wager_set or inner.wager_set
        super().__init__(inner.initial_value, wager_set)
        self.floor = Fraction(0)
        if wager_set is not None:
            b = wager_set.bounds()
            if b.bounded_away_from_zero:
                self.floor = b.inf_nonzero

    def player(self):
        return _StopPlayer(self)

    def spec(self):
        out = {"kind": "stopOnBankrupt", "inner": self.inner.spec()}
        if self.wager_set is not None:
            out["set"] = self.wager_set.to_json()
        return out


def stop_on_bankrupt(inner: Strategy, wager_set: WagerSet | None = None) -> StopOnBankrupt:
    return StopOnBankrupt(inner, wager_set)


# ---------------------------------------------------------------------------
# JSON dispatch
# ---------------------------------------------------------------------------

KINDS = (
    "constantWealth",
    "alwaysHeads",
    "alwaysTails",
    "thresholdSwitcher",
    "scripted",
    "copycat",
    "stopOnBankrupt",
    "ruler",
    "pseudoRandom",
    "followLast",
)


def opponent_zoo(spec) -> Strategy:
    """Build a strategy from its JSON description."""
    if isinstance(spec, Strategy):
        return spec
    if not isinstance(spec, dict) or "kind" not in spec:
        raise UnknownSpec(f"strategy spec needs a 'kind' field: {spec!r}")
    kind = spec["kind"]
    init = spec.get("initial")
    try:
        if kind == "constantWealth":
            return ConstantWealth(_v(spec, "c"))
        if kind == "alwaysHeads":
            return always_heads(_v(spec, "w"), init)
        if kind == "alwaysTails":
            return always_tails(_v(spec, "w"), init)
        if kind == "thresholdSwitcher":
            return ThresholdSwitcher(_v(spec, "w1"), _v(spec, "w2"), init)
        if kind == "scripted":
            return Scripted(spec["wagers"], init, bool(spec.get("cycle", False)))
        if kind == "copycat":
            return Copycat(opponent_zoo(spec["target"]), _v(spec, "ratio"), spec.get("round"), init)
        if kind == "stopOnBankrupt":
            ws = set_from_json(spec["set"]) if "set" in spec else None
            return StopOnBankrupt(opponent_zoo(spec["inner"]), ws)
        if kind == "ruler":
            return RulerMartingale(set_from_json(spec["set"]), init)
        if kind == "pseudoRandom":
            return PseudoRandom(spec["values"], int(spec.get("seed", 0)), init, int(spec.get("zero_weight", 1)))
        if kind == "followLast":
            return FollowLast(_v(spec, "w"), init)
    except KeyError as exc:
        raise InputError(f"strategy spec {kind!r} is missing field {exc.args[0]!r}") from exc
    raise UnknownSpec(f"unknown strategy kind {kind!r}; expected one of {', '.join(KINDS)}")
