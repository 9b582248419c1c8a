"""Wager sets: a closed catalogue of descriptors for subsets of the nonnegative reals.

Every structural query (membership, membership in the closure, bounds,
well-orderedness, scaling) is answered exactly per variant.  Sets outside the
catalogue are deliberately unsupported.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import ClassVar, Iterator

from .errors import EmptySet, InputError, Unsupported
from .values import (
    INF,
    Real,
    Value,
    as_value,
    format_value,
    is_rational,
    value_to_json,
)

SIEVE_CHECK_BOUND = 10**6


class SieveWarning(UserWarning):
    """An integer sieve removes a whole ideal {r, 2r, 3r, ...}."""


# ---------------------------------------------------------------------------
# small exact helpers
# ---------------------------------------------------------------------------


def _is_pos_int(x) -> bool:
    return is_rational(x) and x > 0 and Fraction(x).denominator == 1


def _iroot(n: int, k: int) -> int | None:
    """Exact integer k-th root of n, or None."""
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c > 0 and c**k == n:
            return c
    return None


def _log2(x) -> float:
    """log2 of a positive value without overflowing floats on huge rationals."""
    if isinstance(x, Fraction):
        shift = x.numerator.bit_length() - x.denominator.bit_length()
        return shift + math.log2(float(x / Fraction(2) ** shift))
    return math.log2(float(x))


def _ceil(x) -> int:
    return -math.floor(-x)


@dataclass(frozen=True)
class Bounds:
    sup: object
    inf_nonzero: object
    bounded_away_from_zero: bool
    contains_zero: bool


# ---------------------------------------------------------------------------
# sieve exclusion rules
# ---------------------------------------------------------------------------


class Exclusion:
    """Rule generating the integers removed by an :class:`IntegerSieve`."""

    kind: ClassVar[str]

    def excludes(self, n: int) -> bool:
        raise NotImplementedError

    def ideal_survives(self, r: int) -> bool:
        """True iff no multiple of ``r`` is excluded."""
        raise NotImplementedError

    def covers_ideal(self, r: int, bound: int) -> bool:
        """True iff every multiple of ``r`` up to ``bound`` is excluded."""
        return all(self.excludes(r * k) for k in range(1, bound // r + 1))


@dataclass(frozen=True)
class FiniteExclusion(Exclusion):
    values: tuple = ()
    kind: ClassVar[str] = "finite"

    def __post_init__(self):
        vals = tuple(sorted({int(v) for v in self.values}))
        if any(v <= 0 for v in vals):
            raise InputError("excluded integers must be positive")
        object.__setattr__(self, "values", vals)

    def excludes(self, n):
        return n in self.values

    def ideal_survives(self, r):
        return all(v % r for v in self.values)

    def covers_ideal(self, r, bound):
        return False

    def to_json(self):
        return {"kind": self.kind, "values": list(self.values)}


@dataclass(frozen=True)
class MultiplesExclusion(Exclusion):
    """Removes every multiple of ``of``; ``of=2`` leaves the odd integers."""

    of: int = 2
    kind: ClassVar[str] = "multiples"

    def __post_init__(self):
        if int(self.of) < 2:
            raise InputError("excluding multiples of 1 would leave an empty sieve")
        object.__setattr__(self, "of", int(self.of))

    def excludes(self, n):
        return n % self.of == 0

    def ideal_survives(self, r):
        return False

    def covers_ideal(self, r, bound):
        return r % self.of == 0

    def to_json(self):
        return {"kind": self.kind, "of": self.of}


_PHI = {
    "power": lambda n, e: n**e,
    "exp2": lambda n, e: 2**n,
    "factorial": lambda n, e: math.factorial(n),
}


@dataclass(frozen=True)
class NPhiNExclusion(Exclusion):
    """Removes ``n * phi(n)`` for every n >= 1, with ``phi`` increasing."""

    phi: str = "power"
    exp: int = 2
    kind: ClassVar[str] = "n_phi_n"

    def __post_init__(self):
        if self.phi not in _PHI:
            raise InputError(f"unknown phi {self.phi!r}; expected one of {sorted(_PHI)}")
        if self.phi == "power" and int(self.exp) < 1:
            raise InputError("phi(n) = n**exp must be increasing (exp >= 1)")

    def phi_of(self, n: int) -> int:
        return _PHI[self.phi](n, self.exp)

    def excluded_value(self, n: int) -> int:
        return n * self.phi_of(n)

    def excludes(self, x):
        if self.phi == "power":
            return _iroot(x, self.exp + 1) is not None
        n = 1
        while True:
            v = self.excluded_value(n)
            if v >= x:
                return v == x
            n += 1

    def ideal_survives(self, r):
        # r * phi(r) is a multiple of r
        return False

    def covers_ideal(self, r, bound):
        return False

    def to_json(self):
        out = {"kind": self.kind, "phi": self.phi}
        if self.phi == "power":
            out["exp"] = self.exp
        return out


def exclusion_from_json(obj) -> Exclusion:
    if isinstance(obj, (list, tuple)):
        return FiniteExclusion(tuple(obj))
    kind = obj.get("kind")
    if kind == "finite":
        return FiniteExclusion(tuple(obj.get("values", ())))
    if kind == "multiples":
        return MultiplesExclusion(int(obj["of"]))
    if kind == "n_phi_n":
        return NPhiNExclusion(obj.get("phi", "power"), int(obj.get("exp", 2)))
    raise InputError(f"unknown exclusion rule {obj!r}")


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


class WagerSet:
    kind: ClassVar[str]

    def contains(self, x) -> bool:
        raise NotImplementedError

    def closure_contains(self, x) -> bool:
        raise NotImplementedError

    def bounds(self) -> Bounds:
        raise NotImplementedError

    def is_well_ordered(self) -> bool:
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def is_locally_finite(self) -> bool:
        """True iff the closure meets every [a, b] with 0 < a < b in finitely many points."""
        raise NotImplementedError

    def enumerate(self) -> Iterator[Value]:
        raise NotImplementedError

    def elements_upto(self, x) -> list | None:
        """Sorted positive elements <= x, or None when there are infinitely many."""
        raise NotImplementedError

    def sup_below(self, x):
        """Supremum of the positive elements <= x, or None if there are none."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __contains__(self, x):
        return self.contains(as_value(x))


@dataclass(frozen=True)
class Finite(WagerSet):
    values: tuple = ()
    kind: ClassVar[str] = "finite"

    def __post_init__(self):
        vals = [as_value(v) for v in self.values]
        if any(not v > 0 for v in vals):
            raise InputError("Finite sets hold positive values only; wrap in WithZero for 0")
        uniq: list = []
        for v in sorted(vals):
            if not uniq or uniq[-1] != v:
                uniq.append(v)
        object.__setattr__(self, "values", tuple(uniq))

    def contains(self, x):
        return x in self.values

    closure_contains = contains

    def bounds(self):
        if not self.values:
            return Bounds(0, INF, True, False)
        return Bounds(self.values[-1], self.values[0], True, False)

    def is_well_ordered(self):
        return True

    def is_finite(self):
        return True

    def is_locally_finite(self):
        return True

    def enumerate(self):
        if not self.values:
            return
        yield from itertools.cycle(self.values)

    def elements_upto(self, x):
        return [v for v in self.values if v <= x]

    def sup_below(self, x):
        below = self.elements_upto(x)
        return below[-1] if below else None

    def to_json(self):
        return {"kind": self.kind, "values": [value_to_json(v) for v in self.values]}


@dataclass(frozen=True)
class IntegerMultiples(WagerSet):
    step: object = Fraction(1)
    kind: ClassVar[str] = "integer_multiples"

    def __post_init__(self):
        s = as_value(self.step)
        if not s > 0:
            raise InputError("IntegerMultiples step must be positive")
        object.__setattr__(self, "step", s)

    def contains(self, x):
        if not x > 0:
            return False
        q = x / self.step
        return _is_pos_int(q)

    closure_contains = contains

    def bounds(self):
        return Bounds(INF, self.step, True, False)

    def is_well_ordered(self):
        return True

    def is_locally_finite(self):
        return True

    def enumerate(self):
        for k in itertools.count(1):
            yield self.step * k

    def elements_upto(self, x):
        n = math.floor(x / self.step)
        return [self.step * k for k in range(1, n + 1)]

    def sup_below(self, x):
        n = math.floor(x / self.step)
        return self.step * n if n >= 1 else None

    def to_json(self):
        return {"kind": self.kind, "step": value_to_json(self.step)}


@dataclass(frozen=True)
class ClosedInterval(WagerSet):
    lo: object = Fraction(0)
    hi: object = Fraction(1)
    kind: ClassVar[str] = "closed_interval"

    def __post_init__(self):
        lo, hi = as_value(self.lo), as_value(self.hi)
        if lo < 0 or hi < lo:
            raise InputError("ClosedInterval needs 0 <= lo <= hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, x):
        return self.lo <= x <= self.hi

    closure_contains = contains

    def bounds(self):
        if self.hi == 0:
            return Bounds(0, INF, True, True)
        return Bounds(self.hi, self.lo, self.lo > 0, self.lo == 0)

    def is_well_ordered(self):
        return self.lo == self.hi

    def is_finite(self):
        return self.lo == self.hi

    def is_locally_finite(self):
        return self.lo == self.hi

    def enumerate(self):
        lo, hi = self.lo, self.hi
        if hi == 0:
            return
        if lo == hi:
            yield from itertools.repeat(lo)
            return
        if lo > 0:
            yield lo
        yield hi
        width = hi - lo
        for k in itertools.count(1):
            den = 2**k
            for j in range(1, den, 2):
                yield lo + width * Fraction(j, den)

    def elements_upto(self, x):
        if x < self.lo or self.hi == 0:
            return []
        if self.lo == self.hi:
            return [self.lo]
        return None

    def sup_below(self, x):
        if x < self.lo or self.hi == 0 or x == 0:
            return None
        return min(self.hi, x)

    def to_json(self):
        return {"kind": self.kind, "lo": value_to_json(self.lo), "hi": value_to_json(self.hi)}


@dataclass(frozen=True)
class HalfLine(WagerSet):
    lo: object = Fraction(0)
    kind: ClassVar[str] = "half_line"

    def __post_init__(self):
        lo = as_value(self.lo)
        if lo < 0:
            raise InputError("HalfLine needs lo >= 0")
        object.__setattr__(self, "lo", lo)

    def contains(self, x):
        return x >= self.lo

    closure_contains = contains

    def bounds(self):
        return Bounds(INF, self.lo, self.lo > 0, self.lo == 0)

    def is_well_ordered(self):
        return False

    def is_locally_finite(self):
        return False

    def enumerate(self):
        lo = self.lo
        if lo > 0:
            yield lo
        for k in itertools.count(1):
            den = 2**k
            prev_range = (k - 1) * 2 ** (k - 1)
            for j in range(1, k * den + 1):
                if j % 2 == 0 and j // 2 <= prev_range:
                    continue
                yield lo + Fraction(j, den)

    def elements_upto(self, x):
        return [] if x < self.lo else None

    def sup_below(self, x):
        if x < self.lo or x == 0:
            return None
        return x

    def to_json(self):
        return {"kind": self.kind, "lo": value_to_json(self.lo)}


GEOMETRIC_RANGES = ("all", "nonpositive", "nonnegative")


@dataclass(frozen=True)
class GeometricPowers(WagerSet):
    """``{base**n}`` for n in all integers, n <= 0, or n >= 0.

    A base below 1 is rewritten to its reciprocal with the range flipped, so
    ``base > 1`` holds after construction.
    """

    base: object = Fraction(2)
    exponents: str = "all"
    kind: ClassVar[str] = "geometric_powers"

    def __post_init__(self):
        b = as_value(self.base)
        rng = self.exponents
        if rng not in GEOMETRIC_RANGES:
            raise InputError(f"exponent range must be one of {GEOMETRIC_RANGES}")
        if not b > 0 or b == 1:
            raise InputError("GeometricPowers base must be positive and != 1")
        if b < 1:
            b = 1 / b
            rng = {"all": "all", "nonpositive": "nonnegative", "nonnegative": "nonpositive"}[rng]
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "exponents", rng)

    def _allowed(self, n: int) -> bool:
        return (
            self.exponents == "all"
            or (self.exponents == "nonpositive" and n <= 0)
            or (self.exponents == "nonnegative" and n >= 0)
        )

    def exponent_of(self, x) -> int | None:
        """n with base**n == x exactly, or None."""
        if not x > 0:
            return None
        guess = round(_log2(x) / _log2(self.base))
        for n in (guess - 1, guess, guess + 1):
            if self.base**n == x:
                return n
        return None

    def contains(self, x):
        n = self.exponent_of(x)
        return n is not None and self._allowed(n)

    def closure_contains(self, x):
        if x == 0:
            return self.exponents != "nonnegative"
        return self.contains(x)

    def bounds(self):
        if self.exponents == "all":
            return Bounds(INF, Fraction(0), False, False)
        if self.exponents == "nonpositive":
            return Bounds(Fraction(1), Fraction(0), False, False)
        return Bounds(INF, Fraction(1), True, False)

    def is_well_ordered(self):
        return self.exponents == "nonnegative"

    def is_locally_finite(self):
        return True

    def enumerate(self):
        b = self.base
        if self.exponents == "nonnegative":
            for n in itertools.count(0):
                yield b**n
        elif self.exponents == "nonpositive":
            for n in itertools.count(0):
                yield b ** (-n)
        else:
            yield Fraction(1)
            for n in itertools.count(1):
                yield b**n
                yield b ** (-n)

    def elements_upto(self, x):
        if self.exponents != "nonnegative":
            return None if x > 0 else []
        out = []
        n = 0
        while self.base**n <= x:
            out.append(self.base**n)
            n += 1
        return out

    def sup_below(self, x):
        if not x > 0:
            return None
        n = math.floor(math.log(float(x)) / math.log(float(self.base)))
        while self.base ** (n + 1) <= x:
            n += 1
        while self.base**n > x:
            n -= 1
        if self._allowed(n):
            return self.base**n
        if self.exponents == "nonpositive":
            return Fraction(1)
        return None

    def to_json(self):
        return {"kind": self.kind, "base": value_to_json(self.base), "exponents": self.exponents}


@dataclass(frozen=True)
class HarmonicShifted(WagerSet):
    """``{1 + 1/n : n >= 1}``."""

    kind: ClassVar[str] = "harmonic_shifted"

    def contains(self, x):
        if not is_rational(x) or not x > 1:
            return False
        return _is_pos_int(1 / (Fraction(x) - 1))

    def closure_contains(self, x):
        return x == 1 or self.contains(x)

    def bounds(self):
        return Bounds(Fraction(2), Fraction(1), True, False)

    def is_well_ordered(self):
        return False

    def is_locally_finite(self):
        return False

    def enumerate(self):
        for n in itertools.count(1):
            yield 1 + Fraction(1, n)

    def elements_upto(self, x):
        return [] if x <= 1 else None

    def sup_below(self, x):
        if x >= 2:
            return Fraction(2)
        if x <= 1:
            return None
        n = _ceil(1 / (x - 1))
        return 1 + Fraction(1, n)

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class HarmonicReciprocal(WagerSet):
    """``{1/n : n >= 1}``."""

    kind: ClassVar[str] = "harmonic_reciprocal"

    def contains(self, x):
        if not is_rational(x) or not x > 0:
            return False
        return _is_pos_int(1 / Fraction(x))

    def closure_contains(self, x):
        return x == 0 or self.contains(x)

    def bounds(self):
        return Bounds(Fraction(1), Fraction(0), False, False)

    def is_well_ordered(self):
        return False

    def is_locally_finite(self):
        return True

    def enumerate(self):
        for n in itertools.count(1):
            yield Fraction(1, n)

    def elements_upto(self, x):
        return None if x > 0 else []

    def sup_below(self, x):
        if not x > 0:
            return None
        if x >= 1:
            return Fraction(1)
        return Fraction(1, _ceil(1 / x))

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class IntegerSieve(WagerSet):
    """The positive integers minus an excluded set."""

    excluded: Exclusion = field(default_factory=FiniteExclusion)
    kind: ClassVar[str] = "integer_sieve"

    def __post_init__(self):
        ex = self.excluded
        if not isinstance(ex, Exclusion):
            ex = exclusion_from_json(ex)
            object.__setattr__(self, "excluded", ex)
        for r in range(1, 65):
            if ex.covers_ideal(r, SIEVE_CHECK_BOUND):
                warnings.warn(
                    f"sieve excludes the whole ideal {r}Z+ (checked up to {SIEVE_CHECK_BOUND})",
                    SieveWarning,
                    stacklevel=3,
                )
                break

    def contains(self, x):
        return _is_pos_int(x) and not self.excluded.excludes(int(x))

    closure_contains = contains

    def bounds(self):
        n = 1
        while self.excluded.excludes(n):
            n += 1
        return Bounds(INF, Fraction(n), True, False)

    def is_well_ordered(self):
        return True

    def is_locally_finite(self):
        return True

    def enumerate(self):
        for n in itertools.count(1):
            if not self.excluded.excludes(n):
                yield Fraction(n)

    def elements_upto(self, x):
        return [Fraction(n) for n in range(1, math.floor(x) + 1) if not self.excluded.excludes(n)]

    def sup_below(self, x):
        n = math.floor(x)
        while n >= 1 and self.excluded.excludes(n):
            n -= 1
        return Fraction(n) if n >= 1 else None

    def surviving_ideal(self, limit: int = SIEVE_CHECK_BOUND) -> int | None:
        """Least r <= limit whose ideal r*Z+ lies inside the sieve, if any."""
        ex = self.excluded
        if isinstance(ex, FiniteExclusion):
            for r in range(1, (max(ex.values) if ex.values else 0) + 2):
                if ex.ideal_survives(r):
                    return r
            return None
        if isinstance(ex, (MultiplesExclusion, NPhiNExclusion)):
            return None
        for r in range(1, limit + 1):
            if ex.ideal_survives(r):
                return r
        return None

    def to_json(self):
        return {"kind": self.kind, "excluded": self.excluded.to_json()}


@dataclass(frozen=True)
class WithZero(WagerSet):
    inner: WagerSet = field(default_factory=Finite)
    kind: ClassVar[str] = "with_zero"

    def contains(self, x):
        return x == 0 or self.inner.contains(x)

    def closure_contains(self, x):
        return x == 0 or self.inner.closure_contains(x)

    def bounds(self):
        b = self.inner.bounds()
        return Bounds(b.sup, b.inf_nonzero, b.bounded_away_from_zero, True)

    def is_well_ordered(self):
        return self.inner.is_well_ordered()

    def is_finite(self):
        return self.inner.is_finite()

    def is_locally_finite(self):
        return self.inner.is_locally_finite()

    def enumerate(self):
        return self.inner.enumerate()

    def elements_upto(self, x):
        return self.inner.elements_upto(x)

    def sup_below(self, x):
        return self.inner.sup_below(x)

    def to_json(self):
        return {"kind": self.kind, "inner": self.inner.to_json()}


@dataclass(frozen=True)
class UnionOf(WagerSet):
    parts: tuple = ()
    kind: ClassVar[str] = "union"

    def __post_init__(self):
        if not self.parts:
            raise InputError("UnionOf needs at least one component")
        object.__setattr__(self, "parts", tuple(self.parts))

    def contains(self, x):
        return any(p.contains(x) for p in self.parts)

    def closure_contains(self, x):
        return any(p.closure_contains(x) for p in self.parts)

    def bounds(self):
        bs = [p.bounds() for p in self.parts]
        return Bounds(
            max(b.sup for b in bs),
            min(b.inf_nonzero for b in bs),
            all(b.bounded_away_from_zero for b in bs),
            any(b.contains_zero for b in bs),
        )

    def is_well_ordered(self):
        # closure of a finite union is the union of closures, so the
        # no-left-accumulation condition holds iff it holds componentwise
        return all(p.is_well_ordered() for p in self.parts)

    def is_finite(self):
        return all(p.is_finite() for p in self.parts)

    def is_locally_finite(self):
        return all(p.is_locally_finite() for p in self.parts)

    def enumerate(self):
        gens = [p.enumerate() for p in self.parts]
        while gens:
            alive = []
            for g in gens:
                try:
                    yield next(g)
                    alive.append(g)
                except StopIteration:
                    pass
            gens = alive

    def elements_upto(self, x):
        out = []
        for p in self.parts:
            e = p.elements_upto(x)
            if e is None:
                return None
            out.extend(e)
        uniq: list = []
        for v in sorted(out):
            if not uniq or uniq[-1] != v:
                uniq.append(v)
        return uniq

    def sup_below(self, x):
        sups = [s for s in (p.sup_below(x) for p in self.parts) if s is not None]
        return max(sups) if sups else None

    def to_json(self):
        return {"kind": self.kind, "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class Scaled(WagerSet):
    r: object = Fraction(1)
    inner: WagerSet = field(default_factory=Finite)
    kind: ClassVar[str] = "scaled"

    def __post_init__(self):
        r = as_value(self.r)
        if not r > 0:
            raise InputError("scaling factor must be positive")
        object.__setattr__(self, "r", r)

    def contains(self, x):
        return self.inner.contains(x / self.r)

    def closure_contains(self, x):
        return self.inner.closure_contains(x / self.r)

    def bounds(self):
        b = self.inner.bounds()
        return Bounds(
            b.sup * self.r if b.sup != INF else INF,
            b.inf_nonzero * self.r if b.inf_nonzero != INF else INF,
            b.bounded_away_from_zero,
            b.contains_zero,
        )

    def is_well_ordered(self):
        return self.inner.is_well_ordered()

    def is_finite(self):
        return self.inner.is_finite()

    def is_locally_finite(self):
        return self.inner.is_locally_finite()

    def enumerate(self):
        for v in self.inner.enumerate():
            yield v * self.r

    def elements_upto(self, x):
        e = self.inner.elements_upto(x / self.r)
        return None if e is None else [v * self.r for v in e]

    def sup_below(self, x):
        s = self.inner.sup_below(x / self.r)
        return None if s is None else s * self.r

    def to_json(self):
        return {"kind": self.kind, "r": value_to_json(self.r), "inner": self.inner.to_json()}


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def from_json(obj) -> WagerSet:
    if isinstance(obj, WagerSet):
        return obj
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"wager set JSON needs a 'kind' field: {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "finite":
            return Finite(tuple(as_value(v) for v in obj["values"]))
        if kind == "integer_multiples":
            return IntegerMultiples(as_value(obj.get("step", "1")))
        if kind == "closed_interval":
            return ClosedInterval(as_value(obj["lo"]), as_value(obj["hi"]))
        if kind == "half_line":
            return HalfLine(as_value(obj.get("lo", "0")))
        if kind == "geometric_powers":
            return GeometricPowers(as_value(obj["base"]), obj.get("exponents", "all"))
        if kind == "harmonic_shifted":
            return HarmonicShifted()
        if kind == "harmonic_reciprocal":
            return HarmonicReciprocal()
        if kind == "integer_sieve":
            return IntegerSieve(exclusion_from_json(obj.get("excluded", [])))
        if kind == "with_zero":
            return WithZero(from_json(obj["inner"]))
        if kind == "union":
            return UnionOf(tuple(from_json(p) for p in obj["parts"]))
        if kind == "scaled":
            return Scaled(as_value(obj["r"]), from_json(obj["inner"]))
    except KeyError as exc:
        raise InputError(f"wager set of kind {kind!r} is missing field {exc.args[0]!r}") from exc
    raise InputError(f"unknown wager set kind {kind!r}")


def to_json(s: WagerSet) -> dict:
    return s.to_json()


# ---------------------------------------------------------------------------
# module-level queries
# ---------------------------------------------------------------------------


def contains(s: WagerSet, x) -> bool:
    return s.contains(as_value(x))


def closure_contains(s: WagerSet, x) -> bool:
    return s.closure_contains(as_value(x))


def bounds(s: WagerSet) -> Bounds:
    return s.bounds()


def is_well_ordered(s: WagerSet) -> bool:
    return s.is_well_ordered()


def dense_enumeration(s: WagerSet) -> Iterator[Value]:
    """Deterministic stream dense in ``s`` minus zero."""
    gen = s.enumerate()
    try:
        first = next(gen)
    except StopIteration:
        raise EmptySet(f"{s.to_json()} has no nonzero element") from None
    return itertools.chain([first], gen)


class Enumeration:
    """Random access into a dense enumeration, extended lazily."""

    def __init__(self, s: WagerSet):
        self.set = s
        self._gen = dense_enumeration(s)
        self._items: list = []

    def __getitem__(self, n: int):
        while len(self._items) <= n:
            self._items.append(next(self._gen))
        return self._items[n]

    def prefix(self, n: int) -> list:
        if n:
            self[n - 1]
        return self._items[:n]

    def describe(self) -> str:
        head = ", ".join(format_value(v) for v in self.prefix(6))
        return f"dense enumeration of {self.set.kind}: {head}, ..."


# ---------------------------------------------------------------------------
# scaling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scaling:
    verdict: str  # "Yes" | "No" | "Unknown"
    r: object = None
    reason: str = ""

    @property
    def yes(self) -> bool:
        return self.verdict == "Yes"

    def to_json(self):
        out = {"scales": self.verdict}
        if self.r is not None:
            out["r"] = value_to_json(self.r)
        return out


def _yes(r, reason):
    return Scaling("Yes", r, reason)


def _no(reason):
    return Scaling("No", None, reason)


UNKNOWN = Scaling("Unknown", None, "no catalogued rule decides this pair")

_FINITE_PREFIX = 8
_SEARCH_LIMIT = 2000


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _finite_into(avals: list, b: WagerSet, search_limit: int) -> Scaling:
    """Scaling of a finite positive set given by ``avals`` (sorted) into ``b``."""
    a1 = avals[0]
    ratios = [a / a1 for a in avals]

    if isinstance(b, Scaled):
        res = _finite_into(avals, b.inner, search_limit)
        return _yes(res.r * b.r, res.reason) if res.yes else res
    if isinstance(b, WithZero):
        return _finite_into(avals, b.inner, search_limit)
    if isinstance(b, Finite) or (isinstance(b, UnionOf) and b.is_finite()):
        bvals = b.elements_upto(INF) if isinstance(b, UnionOf) else list(b.values)
        bset = set(bvals)
        for bv in bvals:
            if all(bv * rho in bset for rho in ratios):
                return _yes(bv / a1, "finite shape match")
        return _no("no element of B carries the shape of A")
    if isinstance(b, (ClosedInterval, HalfLine)):
        return _interval_rule(avals[0], avals[-1], b)

    rational = all(is_rational(rho) for rho in ratios)
    if isinstance(b, IntegerMultiples):
        if not rational:
            return _no("A has two rationally independent elements; B is a lattice")
        den = _lcm(Fraction(rho).denominator for rho in ratios)
        return _yes(b.step * den / a1, "common denominator of A's ratios")
    if isinstance(b, HarmonicReciprocal):
        if not rational:
            return _no("A has two rationally independent elements; B is {1/n}")
        num = _lcm(Fraction(rho).numerator for rho in ratios)
        return _yes(Fraction(1, num) / a1, "common numerator of A's ratios")
    if isinstance(b, GeometricPowers):
        exps = [b.exponent_of(rho) for rho in ratios]
        if any(e is None for e in exps):
            return _no("ratios within A are not powers of the base")
        if b.exponents == "nonpositive":
            n0 = -max(exps)
        else:
            n0 = -min(exps)
        return _yes(b.base**n0 / a1, "ratios within A are powers of the base")
    if isinstance(b, IntegerSieve):
        if not rational:
            return _no("A has two rationally independent elements; B is a set of integers")
        den = _lcm(Fraction(rho).denominator for rho in ratios)
        ex = b.excluded
        if isinstance(ex, MultiplesExclusion):
            # k * rho mod `of` is periodic in the multiplier with period `of`
            for j in range(1, ex.of + 1):
                k = den * j
                if all(b.contains(k * rho) for rho in ratios):
                    return _yes(Fraction(k) / a1, "sieve residue search")
            return _no("every residue class hits the excluded multiples")
        for j in range(1, search_limit + 1):
            k = den * j
            if all(b.contains(k * rho) for rho in ratios):
                return _yes(Fraction(k) / a1, "sieve search")
        return Scaling("Unknown", None, f"no witness among the first {search_limit} candidates")
    if isinstance(b, HarmonicShifted):
        if ratios[-1] > 2:
            return _no("A's spread exceeds the factor 2 available in [1, 2]")
        cands = [Fraction(1)] + [1 + Fraction(1, n) for n in range(1, search_limit + 1)]
        for bv in cands:
            if all(b.closure_contains(bv * rho) for rho in ratios):
                return _yes(bv / a1, "harmonic search")
        return Scaling("Unknown", None, f"no witness among the first {search_limit} candidates")
    return UNKNOWN


def _interval_rule(a_inf, a_sup, b) -> Scaling:
    if isinstance(b, HalfLine):
        if b.lo == 0:
            return _yes(Fraction(1), "B is the whole half-line")
        if a_inf == 0:
            return _no("A accumulates at 0 but B is bounded away from 0")
        return _yes(b.lo / a_inf, "lift A above the half-line start")
    lo, hi = b.lo, b.hi
    if a_sup == INF:
        return _no("A is unbounded, B is bounded")
    if hi == 0:
        return _no("B has no positive element")
    if lo == 0:
        return _yes(hi / a_sup, "shrink A into [0, hi]")
    if a_inf == 0:
        return _no("A accumulates at 0 but B is bounded away from 0")
    r = lo / a_inf
    if r * a_sup <= hi:
        return _yes(r, "A's spread fits in the interval")
    return _no("A's spread sup/inf exceeds hi/lo")


def scales_into(a: WagerSet, b: WagerSet, search_limit: int = _SEARCH_LIMIT) -> Scaling:
    """Decide whether ``r * a`` lies in the closure of ``b`` for some r > 0."""
    if isinstance(a, Scaled):
        res = scales_into(a.inner, b, search_limit)
        return _yes(res.r / a.r, res.reason) if res.yes else res
    if isinstance(b, Scaled):
        res = scales_into(a, b.inner, search_limit)
        return _yes(res.r * b.r, res.reason) if res.yes else res

    ab = a.bounds()
    if ab.contains_zero and not b.closure_contains(Fraction(0)):
        return _no("0 is in A but not in the closure of B")
    if isinstance(a, WithZero):
        a = a.inner
        ab = a.bounds()
    if isinstance(b, WithZero):
        b = b.inner
    if ab.sup == 0 or ab.inf_nonzero == INF:
        return _yes(Fraction(1), "A has no positive element")

    if a == b:
        return _yes(Fraction(1), "identical sets")
    if a.is_finite():
        avals = a.elements_upto(INF)
        return _finite_into(avals, b, search_limit)

    bb = b.bounds()
    if ab.sup == INF and bb.sup != INF:
        return _no("A is unbounded, B is bounded")
    if ab.inf_nonzero == 0 and bb.bounded_away_from_zero:
        return _no("A accumulates at 0 but B is bounded away from 0")
    if b.is_finite():
        return _no("A is infinite, the closure of B is finite")
    if not a.is_locally_finite() and b.is_locally_finite():
        return _no("A has a positive accumulation point, the closure of B has none")
    if isinstance(b, (ClosedInterval, HalfLine)):
        return _interval_rule(ab.inf_nonzero, ab.sup, b)

    prefix = []
    for v in itertools.islice(dense_enumeration(a), 4 * _FINITE_PREFIX):
        if v not in prefix:
            prefix.append(v)
        if len(prefix) == _FINITE_PREFIX:
            break
    sub = _finite_into(sorted(prefix), b, search_limit)
    if sub.verdict == "No":
        return _no(f"a finite part of A already fails: {sub.reason}")

    if isinstance(a, IntegerMultiples):
        if isinstance(b, IntegerMultiples):
            return _yes(b.step / a.step, "lattice into lattice")
        if isinstance(b, IntegerSieve):
            c = b.surviving_ideal()
            if c is None:
                return _no("every ideal meets the excluded set")
            return _yes(Fraction(c) / a.step, f"the ideal {c}Z+ survives the sieve")
    if isinstance(a, GeometricPowers) and isinstance(b, GeometricPowers) and a.base == b.base:
        if b.exponents == "all" or a.exponents == b.exponents:
            return _yes(Fraction(1), "same base, exponent range contained")
    if isinstance(a, GeometricPowers) and a.exponents == "nonnegative" and isinstance(b, IntegerMultiples):
        if is_rational(a.base) and Fraction(a.base).denominator == 1:
            return _yes(b.step, "integer powers are integers")
    if isinstance(b, UnionOf):
        for p in b.parts:
            res = scales_into(a, p, search_limit)
            if res.yes:
                return _yes(res.r, f"into a component: {res.reason}")
    return UNKNOWN
