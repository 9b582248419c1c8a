"""Building B-martingales that dominate a given A-martingale.

Three constructions live here: the closure approximation (replace each wager
by a nearby element of A, paying for the error up front), proportional
copies, and the f-shadow ``S' = f(M) M'`` together with an exact checker for
the integral lower bound ``S >= F(M)`` where ``F`` is the antiderivative of
``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import EmptyWindow, InputError, MismatchedRuns, UndecidableComparison, Unsupported
from .martingale import H, MartingaleRun, Player, Strategy, Tracked, history_str
from .values import PRECISION, Value, as_value, floor_log2, format_value, is_rational, parse_value, value_to_json
from .wagerset import (
    ClosedInterval,
    Finite,
    GeometricPowers,
    HalfLine,
    HarmonicShifted,
    IntegerSieve,
    NPhiNExclusion,
    WagerSet,
    WithZero,
    from_json as set_from_json,
)

WINDOW_SCAN_LIMIT = 200_000


# ---------------------------------------------------------------------------
# exact comparisons involving natural logs of rationals
# ---------------------------------------------------------------------------


_EXACT_PRODUCT_BITS = 1 << 16


def _log_enclosure(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    with mpmath.workprec(bits + 32):
        v = mpmath.log(mpmath.mpf(q.numerator) / q.denominator)
        m, e = mpmath.frexp(v)
        centre = Fraction(int(mpmath.ldexp(m, bits + 8)), 2 ** (bits + 8)) * Fraction(2) ** e
    pad = Fraction(1, 2**bits) * (1 + abs(centre))
    return centre - pad, centre + pad


def log_sign(q: Fraction, logs: Sequence[tuple[Fraction, Fraction]]) -> int:
    """Sign of ``q + sum(c * ln(a) for c, a in logs)`` with rational ``q``, ``c`` and ``a > 0``.

    The logs collapse to ``ln(R) / D`` for one rational R.  R == 1 settles a
    cancellation exactly; otherwise ``q + ln(R)/D`` is nonzero (ln of a
    rational other than 1 is transcendental) and refinement separates it.
    """
    merged: dict = {}
    for c, a in logs:
        merged[Fraction(a)] = merged.get(Fraction(a), 0) + Fraction(c)
    logs = [(c, a) for a, c in merged.items() if c != 0 and a != 1]
    if not logs:
        return (q > 0) - (q < 0)
    den = math.lcm(*(c.denominator for c, _ in logs))
    size = sum(abs(c * den) * (a.numerator.bit_length() + a.denominator.bit_length()) for c, a in logs)
    if size <= _EXACT_PRODUCT_BITS:
        prod = Fraction(1)
        for c, a in logs:
            prod *= a ** int(c * den)
        if prod == 1:
            return (q > 0) - (q < 0)
        if q == 0:
            return 1 if prod > 1 else -1
    # double precision first; the margin dwarfs the few ulps of rounding error
    try:
        parts = [float(q)] + [float(c) * (math.log(a.numerator) - math.log(a.denominator)) for c, a in logs]
        v = math.fsum(parts)
        margin = 1e-12 * (sum(abs(p) for p in parts) + 1e-300)
        if abs(v) > margin:
            return 1 if v > 0 else -1
    except OverflowError:
        pass
    bits = PRECISION.default_bits
    while True:
        lo = hi = Fraction(q)
        for c, a in logs:
            l, h = _log_enclosure(a, bits)
            lo += min(c * l, c * h)
            hi += max(c * l, c * h)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if bits >= PRECISION.cap_bits:
            raise UndecidableComparison(f"log expression {q} + {logs} not separated from 0 at {bits} bits")
        bits *= 2


@dataclass(frozen=True)
class LogValue:
    """``rational + sum(coef * ln(arg))``; the value of an antiderivative."""

    rational: Fraction
    logs: tuple = ()

    def __sub__(self, other: "LogValue") -> "LogValue":
        logs = dict(self.logs)
        for a, c in other.logs:
            logs[a] = logs.get(a, 0) - c
        return LogValue(self.rational - other.rational, tuple((a, c) for a, c in logs.items() if c != 0))

    def le_rational(self, x) -> bool:
        """``self <= x`` decided exactly."""
        return log_sign(Fraction(x) - self.rational, [(-c, a) for a, c in self.logs]) >= 0

    def __float__(self):
        return float(self.rational) + sum(float(c) * math.log(a) for a, c in self.logs)


def _lv(x) -> LogValue:
    return LogValue(Fraction(x))


# ---------------------------------------------------------------------------
# scaling functions
# ---------------------------------------------------------------------------


class ScalingFunction:
    """Non-increasing, nonnegative f on [0, inf) with an exact antiderivative from 0."""

    kind = ""

    def __call__(self, x) -> Value:
        raise NotImplementedError

    def antiderivative(self, x) -> LogValue:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(ScalingFunction):
    r: object
    kind = "constant"

    def __post_init__(self):
        r = as_value(self.r)
        if r < 0:
            raise InputError("a scaling function must be nonnegative")
        object.__setattr__(self, "r", r)

    def __call__(self, x):
        return self.r

    def antiderivative(self, x):
        if not is_rational(self.r * x):
            raise Unsupported("constant scaling with irrational products has no rational integral")
        return _lv(self.r * x)

    def to_json(self):
        return {"kind": self.kind, "r": value_to_json(self.r)}


@dataclass(frozen=True)
class MinReciprocal(ScalingFunction):
    """``min(1/x, 1)`` with value 1 at 0."""

    kind = "minReciprocal"

    def __call__(self, x):
        return Fraction(1) if x <= 1 else 1 / as_value(x)

    def antiderivative(self, x):
        x = Fraction(x)
        if x <= 1:
            return _lv(x)
        return LogValue(Fraction(1), ((x, Fraction(1)),))

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class DyadicFloor(ScalingFunction):
    """``min(2**-floor(log2 x), 1)`` with value 1 at 0."""

    kind = "dyadicFloor"

    def __call__(self, x):
        if x <= 1:
            return Fraction(1)
        return Fraction(1, 2 ** floor_log2(x))

    def antiderivative(self, x):
        if x <= 1:
            return _lv(x)
        k = floor_log2(x)
        return _lv(k + Fraction(x) / 2**k)

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class PiecewiseRational(ScalingFunction):
    """Step function: value ``values[i]`` on ``[breaks[i], breaks[i+1])`` with ``breaks[0] == 0``."""

    breaks: tuple
    values: tuple
    kind = "piecewiseRational"

    def __post_init__(self):
        br = tuple(Fraction(as_value(b)) for b in self.breaks)
        vs = tuple(Fraction(as_value(v)) for v in self.values)
        if not br or br[0] != 0 or len(br) != len(vs):
            raise InputError("piecewise function needs breaks starting at 0, one value per break")
        if any(b2 <= b1 for b1, b2 in zip(br, br[1:])):
            raise InputError("breakpoints must increase")
        if any(v < 0 for v in vs) or any(v2 > v1 for v1, v2 in zip(vs, vs[1:])):
            raise InputError("piecewise values must be nonnegative and non-increasing")
        object.__setattr__(self, "breaks", br)
        object.__setattr__(self, "values", vs)

    def __call__(self, x):
        out = self.values[0]
        for b, v in zip(self.breaks, self.values):
            if x >= b:
                out = v
        return out

    def antiderivative(self, x):
        x = Fraction(x)
        total = Fraction(0)
        ends = self.breaks[1:] + (None,)
        for b, e, v in zip(self.breaks, ends, self.values):
            if x <= b:
                break
            top = x if e is None or x < e else e
            total += v * (top - b)
        return _lv(total)

    def to_json(self):
        return {
            "kind": self.kind,
            "breaks": [value_to_json(b) for b in self.breaks],
            "values": [value_to_json(v) for v in self.values],
        }


@dataclass(frozen=True)
class QProfile(ScalingFunction):
    """``x -> q_M(x)``, the largest admissible ratio up to ``mcap`` (see :func:`q_profile`)."""

    a: WagerSet
    b: WagerSet
    mcap: object
    kind = "qProfile"

    def __call__(self, x):
        return q_value(self.a, self.b, as_value(self.mcap), as_value(x))

    def antiderivative(self, x):
        x = Fraction(x)
        pts = self.a.elements_upto(x)
        if pts is None:
            raise Unsupported("q-profile integral needs A locally finite")
        # q only changes where A gains an element
        cuts = [Fraction(0)] + [Fraction(p) for p in pts if 0 < p < x] + [x]
        total = Fraction(0)
        for lo, hi in zip(cuts, cuts[1:]):
            total += Fraction(self(lo)) * (hi - lo)
        return _lv(total)

    def to_json(self):
        return {"kind": self.kind, "a": self.a.to_json(), "b": self.b.to_json(), "mcap": value_to_json(self.mcap)}


def scaling_from_json(obj) -> ScalingFunction:
    if isinstance(obj, ScalingFunction):
        return obj
    kind = obj.get("kind") if isinstance(obj, dict) else None
    try:
        if kind == "constant":
            return Constant(parse_value(obj["r"]))
        if kind == "minReciprocal":
            return MinReciprocal()
        if kind == "dyadicFloor":
            return DyadicFloor()
        if kind == "piecewiseRational":
            return PiecewiseRational(tuple(obj["breaks"]), tuple(obj["values"]))
        if kind == "qProfile":
            return QProfile(set_from_json(obj["a"]), set_from_json(obj["b"]), parse_value(obj["mcap"]))
    except KeyError as exc:
        raise InputError(f"scaling function {kind!r} is missing field {exc.args[0]!r}") from exc
    raise InputError(f"unknown scaling function {obj!r}")


# ---------------------------------------------------------------------------
# derived strategies
# ---------------------------------------------------------------------------


class _ScaledPlayer(Player):
    __slots__ = ("owner", "inner")

    def __init__(self, owner):
        self.owner = owner
        self.inner = Tracked(owner.inner)

    def wager(self, history, wealth):
        return self.owner.factor(self.inner.wealth) * self.inner.increment(history)

    def observe(self, history, outcome, bets=None):
        self.inner.advance(history, outcome, bets)

    def clone(self):
        out = type(self).__new__(type(self))
        out.owner = self.owner
        out.inner = self.inner.clone()
        return out


class FShadow(Strategy):
    """``S(empty) = f(0) M(empty)`` and ``S' = f(M) M'``."""

    def __init__(self, inner: Strategy, f: ScalingFunction, wager_set: WagerSet | None = None):
        self.inner = inner
        self.f = f
        super().__init__(f(Fraction(0)) * inner.initial_value, wager_set)

    def factor(self, m):
        return self.f(m)

    def player(self):
        return _ScaledPlayer(self)

    def spec(self):
        return {"kind": "fShadow", "f": self.f.to_json(), "inner": self.inner.spec()}


class ProportionalCopy(FShadow):
    """Ledger exactly ``r`` times the inner one."""

    def __init__(self, inner: Strategy, r, wager_set: WagerSet | None = None):
        r = as_value(r)
        if not r > 0:
            raise InputError("proportional copy needs r > 0")
        self.r = r
        super().__init__(inner, Constant(r), wager_set)
        self.history_independent = inner.history_independent

    def factor(self, m):
        return self.r

    def wager_at(self, t):
        return self.r * self.inner.wager_at(t)

    def spec(self):
        return {"kind": "proportionalCopy", "r": format_value(self.r), "inner": self.inner.spec()}


def proportional_copy(m: Strategy, r) -> ProportionalCopy:
    return ProportionalCopy(m, r)


def f_shadow(m: Strategy, f: ScalingFunction) -> FShadow:
    return FShadow(m, f)


# ---------------------------------------------------------------------------
# closure approximation
# ---------------------------------------------------------------------------


def _first_in_window(a: WagerSet, lo, hi):
    """Enumeration-first element of ``a`` in the open window (lo, hi), or None."""
    if isinstance(a, WithZero):
        return _first_in_window(a.inner, lo, hi)
    if isinstance(a, ClosedInterval) and a.lo < a.hi:
        w = a.hi - a.lo
        for v in ([a.lo] if a.lo > 0 else []) + [a.hi]:
            if lo < v < hi:
                return v
        if hi <= a.lo or lo >= a.hi:
            return None
        for k in range(1, PRECISION.cap_bits):
            den = 2**k
            j = math.floor((lo - a.lo) * den / w) + 1
            j = max(j, 1)
            if j % 2 == 0:
                j += 1
            if j < den:
                v = a.lo + w * Fraction(j, den)
                if v < hi:
                    return v
        return None
    if isinstance(a, HalfLine):
        if lo < a.lo < hi and a.lo > 0:
            return a.lo
        for k in range(1, PRECISION.cap_bits):
            den = 2**k
            j = max(math.floor((lo - a.lo) * den) + 1, 1)
            if j <= k * den:
                v = a.lo + Fraction(j, den)
                if v < hi:
                    return v
        return None
    if isinstance(a, HarmonicShifted):
        if hi <= 1 or lo >= 2:
            return None
        n = 1 if hi > 2 else math.floor(1 / (hi - 1)) + 1
        v = 1 + Fraction(1, n)
        return v if v > lo else None
    if isinstance(a, Finite):
        for v in a.values:
            if lo < v < hi:
                return v
        return None
    for i, v in enumerate(a.enumerate()):
        if lo < v < hi:
            return v
        if i >= WINDOW_SCAN_LIMIT:
            return None
    return None


class _ClosurePlayer(Player):
    __slots__ = ("owner", "inner", "cache")

    def __init__(self, owner):
        self.owner = owner
        self.inner = Tracked(owner.inner)
        self.cache = None

    def wager(self, history, wealth):
        if self.cache is not None and self.cache[0] == len(history):
            return self.cache[1]
        inc = self.inner.increment(history)
        if inc == 0:
            out = Fraction(0)
        else:
            delta = Fraction(1, 2 ** len(history))
            mag = abs(inc)
            pick = _first_in_window(self.owner.wager_set, mag - delta, mag + delta)
            if pick is None:
                raise EmptyWindow(history_str(history))
            out = pick if inc > 0 else -pick
        self.cache = (len(history), out)
        return out

    def observe(self, history, outcome, bets=None):
        self.inner.advance(history, outcome, bets)
        self.cache = None

    def clone(self):
        out = _ClosurePlayer.__new__(_ClosurePlayer)
        out.owner = self.owner
        out.inner = self.inner.clone()
        out.cache = self.cache
        return out


class ClosureApprox(Strategy):
    """Shadows a strategy over the closure of A using wagers from A itself.

    The wager at depth n sits within 2**-n of the original one, so the
    extra 2 in the initial value covers all accumulated error.  A zero
    increment is copied as is.
    """

    def __init__(self, inner: Strategy, a: WagerSet):
        self.inner = inner
        super().__init__(inner.initial_value + 2, a)

    def player(self):
        return _ClosurePlayer(self)

    def spec(self):
        return {"kind": "closureApprox", "set": self.wager_set.to_json(), "inner": self.inner.spec()}


def closure_approx(m: Strategy, a: WagerSet) -> ClosureApprox:
    return ClosureApprox(m, a)


# ---------------------------------------------------------------------------
# integral certificate
# ---------------------------------------------------------------------------


@dataclass
class IntegralReport:
    steps: int
    per_step_violation: int | None = None
    cumulative_violation: int | None = None
    checked: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.per_step_violation is None and self.cumulative_violation is None

    def to_json(self):
        return {
            "steps": self.steps,
            "ok": self.ok,
            "per_step_violation": self.per_step_violation,
            "cumulative_violation": self.cumulative_violation,
        }


def integral_bound_check(m_run: MartingaleRun, s_run: MartingaleRun, f: ScalingFunction) -> IntegralReport:
    """Check ``S(n+1) - S(n) >= F(M(n+1)) - F(M(n))`` and ``S(n) >= F(M(n))`` along both runs.

    ``F`` is the antiderivative of ``f`` from 0; comparisons are exact.
    The first failing step index of each kind is reported.
    """
    if m_run.history != s_run.history:
        raise MismatchedRuns("the two runs follow different outcome sequences")
    report = IntegralReport(len(m_run.history))
    prev_f = f.antiderivative(m_run.wealth[0])
    if not prev_f.le_rational(s_run.wealth[0]):
        report.cumulative_violation = 0
    for n in range(1, len(m_run.wealth)):
        cur_f = f.antiderivative(m_run.wealth[n])
        ds = s_run.wealth[n] - s_run.wealth[n - 1]
        if report.per_step_violation is None and not (cur_f - prev_f).le_rational(ds):
            report.per_step_violation = n - 1
        if report.cumulative_violation is None and not cur_f.le_rational(s_run.wealth[n]):
            report.cumulative_violation = n
        if report.per_step_violation is not None and report.cumulative_violation is not None:
            break
        prev_f = cur_f
    return report


# ---------------------------------------------------------------------------
# q-profile
# ---------------------------------------------------------------------------


def _candidate_ratios(b: WagerSet, a1, mcap):
    """Descending positive t <= mcap with t * a1 in the closure of B, for discrete B."""
    if isinstance(b, WithZero):
        return _candidate_ratios(b.inner, a1, mcap)
    elems = b.elements_upto(mcap * a1)
    if elems is None:
        return None
    return sorted({e / a1 for e in elems if e > 0}, reverse=True)


def q_value(a: WagerSet, b: WagerSet, mcap, x) -> Value:
    """Largest t in [0, mcap] with t * (A ∩ (0, x]) inside the closure of B (0 always qualifies)."""
    pts = a.elements_upto(x)
    if pts is None:
        return _structural_q(a, b, mcap, x)
    pts = sorted(p for p in pts if p > 0)
    if not pts:
        return mcap
    inner = b.inner if isinstance(b, WithZero) else b
    if isinstance(inner, (ClosedInterval, HalfLine)):
        lo_t = inner.lo / pts[0]
        hi_t = mcap if isinstance(inner, HalfLine) else min(mcap, inner.hi / pts[-1])
        return hi_t if lo_t <= hi_t else Fraction(0)
    cands = _candidate_ratios(b, pts[0], mcap)
    if cands is None:
        raise Unsupported(f"no q-profile rule for B = {b.to_json()}")
    for t in cands:
        if all(b.closure_contains(t * p) for p in pts[1:]):
            return t
    return Fraction(0)


def _structural_q(a: WagerSet, b: WagerSet, mcap, x) -> Value:
    """q for infinite A ∩ (0, x]: interval targets, or powers of one base on both sides."""
    inner = b.inner if isinstance(b, WithZero) else b
    top = a.sup_below(x)
    if top is None:
        return mcap
    if isinstance(inner, (ClosedInterval, HalfLine)):
        low = a.bounds().inf_nonzero
        if inner.lo == 0:
            lo_t = Fraction(0)
        elif low == 0:
            return Fraction(0)
        else:
            lo_t = inner.lo / low
        hi_t = mcap if isinstance(inner, HalfLine) else min(mcap, inner.hi / top)
        return hi_t if lo_t <= hi_t else Fraction(0)
    if isinstance(a, GeometricPowers) and isinstance(inner, GeometricPowers) and a.base == inner.base:
        # A ∩ (0, x] = base**n for every n <= N, so B must hold base**(k + n) for all of them
        if inner.exponents == "nonnegative":
            return Fraction(0)
        k = _floor_log(mcap, a.base)
        if inner.exponents == "nonpositive":
            k = min(k, -a.exponent_of(top))
        return a.base**k
    raise Unsupported(f"no q-profile rule for A = {a.to_json()}, B = {b.to_json()}")


def _floor_log(x, base) -> int:
    k = 0
    while base ** (k + 1) <= x:
        k += 1
    while base**k > x:
        k -= 1
    return k


def q_profile(a: WagerSet, b: WagerSet, mcap, xs) -> list:
    mcap = as_value(mcap)
    return [q_value(a, b, mcap, as_value(x)) for x in xs]


def q_cutoff(xs, qs) -> Value | None:
    """Least sample x from which every later sample has q = 0; None if the last sample is nonzero."""
    cut = None
    for x, q in zip(reversed(list(xs)), reversed(list(qs))):
        if q != 0:
            break
        cut = x
    return cut


def sieve_cutoff_bound(b: IntegerSieve, mcap) -> int | None:
    """For A the positive integers and B = integers minus {n * phi(n)}: q vanishes from this x on.

    Every candidate ratio t <= mcap is a positive integer (the least element
    of A is 1), and the multiple a = phi(t) puts t * a = t * phi(t) outside
    B, so q(x) = 0 once x >= max phi(t).
    """
    ex = b.excluded
    if not isinstance(ex, NPhiNExclusion):
        return None
    ts = [t for t in range(1, math.floor(mcap) + 1) if b.contains(t)]
    return max((ex.phi_of(t) for t in ts), default=1)
