"""Exact values used for wagers and wealth.

Rationals are plain :class:`fractions.Fraction` objects.  Irrational
quantities are :class:`Real` objects: Laurent polynomials with rational
coefficients in the named constants ``pi``, ``sqrt2`` and ``log2_3``.
Equality of two values is decided symbolically; order comparisons fall back
on rational interval enclosures that are refined on demand, up to a cap.

Arithmetic that leaves the ring (dividing by a sum of constants, logarithms)
raises :class:`~duel.errors.UnsupportedArithmetic`.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath

from .errors import InputError, UndecidableComparison, UnsupportedArithmetic

CONSTANTS = ("pi", "sqrt2", "log2_3")

INF = math.inf


@dataclass
class Precision:
    default_bits: int = 128
    cap_bits: int = 1024


def _env_bits() -> int:
    raw = os.environ.get("DUEL_PRECISION_BITS")
    if not raw:
        return 128
    try:
        bits = int(raw)
    except ValueError as exc:
        raise InputError(f"DUEL_PRECISION_BITS must be an integer, got {raw!r}") from exc
    if bits < 8:
        raise InputError("DUEL_PRECISION_BITS must be at least 8")
    return bits


PRECISION = Precision(default_bits=_env_bits(), cap_bits=max(1024, _env_bits()))


def set_precision(default_bits: int | None = None, cap_bits: int | None = None) -> Precision:
    """Change the global enclosure precision; returns the previous setting."""
    previous = Precision(PRECISION.default_bits, PRECISION.cap_bits)
    if default_bits is not None:
        PRECISION.default_bits = int(default_bits)
    if cap_bits is not None:
        PRECISION.cap_bits = int(cap_bits)
    return previous


@lru_cache(maxsize=None)
def constant_enclosure(name: str, bits: int) -> tuple[Fraction, Fraction]:
    """Rational interval of width at most ``2**-bits`` around a named constant."""
    if name == "sqrt2":
        s = math.isqrt(2 << (2 * bits))
        return Fraction(s, 1 << bits), Fraction(s + 1, 1 << bits)
    with mpmath.workprec(bits + 32):
        if name == "pi":
            approx = +mpmath.pi
        elif name == "log2_3":
            approx = mpmath.log(3) / mpmath.log(2)
        else:
            raise InputError(f"unknown constant {name!r}")
        man, exp = approx.man_exp
    centre = Fraction(int(man)) * (Fraction(2) ** int(exp))
    # mpmath is accurate to a few ulps at bits+32; a 2**-(bits+1) pad is generous
    pad = Fraction(1, 1 << (bits + 1))
    return centre - pad, centre + pad


Key = tuple  # (pi exponent, sqrt2 exponent in {0, 1}, log2_3 exponent)
_ONE: Key = (0, 0, 0)


def _normalise_key(key: tuple[int, int, int], coef: Fraction) -> tuple[Key, Fraction]:
    a, b, d = key
    r = b % 2
    q = (b - r) // 2
    if q:
        coef = coef * (Fraction(2) ** q)
    return (a, r, d), coef


def _terms_of(x) -> dict | None:
    if isinstance(x, Real):
        return x.terms
    if isinstance(x, Fraction):
        return {_ONE: x} if x else {}
    if isinstance(x, int) and not isinstance(x, bool):
        return {_ONE: Fraction(x)} if x else {}
    return None


def _make(terms: dict, bits: int):
    terms = {k: c for k, c in terms.items() if c}
    if not terms:
        return Fraction(0)
    if len(terms) == 1 and _ONE in terms:
        return terms[_ONE]
    return Real(terms, bits)


class Real:
    """An exact irrational value: a Laurent polynomial in the named constants."""

    __slots__ = ("terms", "bits")

    def __init__(self, terms: dict, bits: int | None = None):
        self.terms = terms
        self.bits = bits if bits is not None else PRECISION.default_bits

    # -- arithmetic ---------------------------------------------------------

    def _bits_with(self, other) -> int:
        if isinstance(other, Real):
            return max(self.bits, other.bits)
        return self.bits

    def __add__(self, other):
        ot = _terms_of(other)
        if ot is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in ot.items():
            out[k] = out.get(k, 0) + c
        return _make(out, self._bits_with(other))

    __radd__ = __add__

    def __neg__(self):
        return Real({k: -c for k, c in self.terms.items()}, self.bits)

    def __pos__(self):
        return self

    def __sub__(self, other):
        ot = _terms_of(other)
        if ot is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in ot.items():
            out[k] = out.get(k, 0) - c
        return _make(out, self._bits_with(other))

    def __rsub__(self, other):
        if _terms_of(other) is None:
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        ot = _terms_of(other)
        if ot is None:
            return NotImplemented
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in ot.items():
                key, c = _normalise_key((k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]), c1 * c2)
                out[key] = out.get(key, 0) + c
        return _make(out, self._bits_with(other))

    __rmul__ = __mul__

    def inverse(self):
        if len(self.terms) != 1:
            raise UnsupportedArithmetic(f"cannot invert the sum {self}")
        (key, coef), = self.terms.items()
        nkey, ncoef = _normalise_key((-key[0], -key[1], -key[2]), 1 / coef)
        return _make({nkey: ncoef}, self.bits)

    def __truediv__(self, other):
        if isinstance(other, Real):
            return self * other.inverse()
        ot = _terms_of(other)
        if ot is None:
            return NotImplemented
        if not ot:
            raise ZeroDivisionError("division by zero")
        return self * (1 / ot[_ONE])

    def __rtruediv__(self, other):
        if _terms_of(other) is None:
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = Fraction(1)
        for _ in range(abs(n)):
            out = out * base
        return out

    # -- order --------------------------------------------------------------

    def enclosure(self, bits: int | None = None) -> tuple[Fraction, Fraction]:
        bits = bits or self.bits
        lo_sum = hi_sum = Fraction(0)
        for key, coef in self.terms.items():
            lo = hi = Fraction(1)
            for name, e in zip(CONSTANTS, key):
                if not e:
                    continue
                clo, chi = constant_enclosure(name, bits)
                if e > 0:
                    lo, hi = lo * clo ** e, hi * chi ** e
                else:
                    lo, hi = lo / chi ** -e, hi / clo ** -e
            if coef > 0:
                lo_sum += coef * lo
                hi_sum += coef * hi
            else:
                lo_sum += coef * hi
                hi_sum += coef * lo
        return lo_sum, hi_sum

    def sign(self) -> int:
        bits = self.bits
        while True:
            lo, hi = self.enclosure(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if bits >= PRECISION.cap_bits:
                raise UndecidableComparison(
                    f"sign of {self} undecided at the {PRECISION.cap_bits}-bit cap"
                )
            bits = min(2 * bits, PRECISION.cap_bits)

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            raise TypeError("exact values do not compare with finite floats")
        ot = _terms_of(other)
        if ot is None:
            return NotImplemented
        diff = self - other
        return diff.sign() if isinstance(diff, Real) else (diff > 0) - (diff < 0)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if isinstance(other, float):
            return False
        ot = _terms_of(other)
        if ot is None:
            return NotImplemented
        return self.terms == ot

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __floor__(self):
        lo, _ = self.enclosure()
        n = math.floor(lo)
        while self >= n + 1:
            n += 1
        while self < n:
            n -= 1
        return n

    def __float__(self):
        lo, hi = self.enclosure(64)
        return float((lo + hi) / 2)

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        parts = []
        for key in sorted(self.terms):
            coef = self.terms[key]
            factors = []
            for name, e in zip(CONSTANTS, key):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Real({self})"


Value = Union[Fraction, Real]


def const(name: str, bits: int | None = None) -> Real:
    """The named constant as an exact value."""
    if name not in CONSTANTS:
        raise InputError(f"unknown constant {name!r}; expected one of {CONSTANTS}")
    key = tuple(1 if c == name else 0 for c in CONSTANTS)
    return Real({key: Fraction(1)}, bits)


def is_rational(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_value(x) -> Value:
    """Coerce ints, strings and JSON forms to an exact value."""
    if isinstance(x, Real):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError("booleans are not values")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (str, dict)):
        return parse_value(x)
    if isinstance(x, float):
        raise InputError(f"float {x!r} is not an exact value; use a 'p/q' string")
    raise InputError(f"cannot interpret {x!r} as a value")


def parse_value(obj) -> Value:
    if isinstance(obj, dict):
        bits = obj.get("bits")
        if "const" in obj:
            v = const(obj["const"], bits)
            if "coef" in obj:
                v = v * parse_value(obj["coef"])
            return v
        if "terms" in obj:
            out: Value = Fraction(0)
            for term in obj["terms"]:
                t: Value = parse_value(term.get("coef", "1"))
                for name in CONSTANTS:
                    e = int(term.get(name, 0))
                    if e:
                        t = t * const(name, bits) ** e
                out = out + t
            return out
        raise InputError(f"value object needs 'const' or 'terms': {obj!r}")
    if isinstance(obj, (int, Fraction, Real)) and not isinstance(obj, bool):
        return as_value(obj)
    if not isinstance(obj, str):
        raise InputError(f"cannot parse value {obj!r}")
    text = obj.strip()
    if text in CONSTANTS:
        return const(text)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed rational {obj!r}") from exc


def value_to_json(v):
    if isinstance(v, Real):
        if len(v.terms) == 1:
            (key, coef), = v.terms.items()
            if sum(key) == 1 and max(key) == 1:
                name = CONSTANTS[key.index(1)]
                out = {"const": name, "bits": v.bits}
                if coef != 1:
                    out["coef"] = format_value(coef)
                return out
        terms = []
        for key in sorted(v.terms):
            term = {"coef": format_value(v.terms[key])}
            term.update({n: e for n, e in zip(CONSTANTS, key) if e})
            terms.append(term)
        return {"terms": terms, "bits": v.bits}
    if v == INF:
        return "inf"
    return format_value(v)


def format_value(v) -> str:
    """Canonical text of a value (``"p/q"``, or ``"p"`` for integers)."""
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, Real):
        return str(v)
    return str(Fraction(v))


def to_float(v) -> float:
    return float(v)


def floor_log2(x: Value) -> int:
    """Largest integer k with 2**k <= x, for x > 0."""
    if not x > 0:
        raise InputError("floor_log2 needs a positive argument")
    if isinstance(x, Real):
        k = math.floor(math.log2(float(x)))
        while Fraction(2) ** (k + 1) <= x:
            k += 1
        while Fraction(2) ** k > x:
            k -= 1
        return k
    x = Fraction(x)
    k = x.numerator.bit_length() - x.denominator.bit_length()
    while Fraction(2) ** (k + 1) <= x:
        k += 1
    while Fraction(2) ** k > x:
        k -= 1
    return k


def sign(x) -> int:
    if isinstance(x, Real):
        return x.sign()
    return (x > 0) - (x < 0)
