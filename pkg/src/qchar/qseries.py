"""Truncated q-series with rational exponents and integer coefficients."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence


class InsufficientPrecision(ValueError):
    """A comparison or lookup asked for terms beyond a series' truncation order."""


def as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class QSeries:
    """Sum of c_e q^e over rational e <= order; nothing is known above ``order``.

    Instances are immutable.  Exponents are kept in lowest terms and zero
    coefficients are never stored.
    """

    __slots__ = ("_terms", "_order")

    def __init__(self, terms: Mapping = (), order=0):
        order = as_fraction(order)
        items = dict(terms).items() if not isinstance(terms, dict) else terms.items()
        clean = {}
        for e, c in items:
            e = as_fraction(e)
            c = int(c)
            if c and e <= order:
                clean[e] = clean.get(e, 0) + c
        self._terms = dict(sorted((e, c) for e, c in clean.items() if c))
        self._order = order

    # --- constructors ---------------------------------------------------

    @classmethod
    def one(cls, order) -> "QSeries":
        return cls({0: 1}, order)

    @classmethod
    def zero(cls, order) -> "QSeries":
        return cls({}, order)

    @classmethod
    def monomial(cls, exponent, order, coeff: int = 1) -> "QSeries":
        return cls({exponent: coeff}, order)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], order, shift=0) -> "QSeries":
        """Series sum_m coeffs[m] q^(shift + m)."""
        shift = as_fraction(shift)
        return cls({shift + m: c for m, c in enumerate(coeffs) if c}, order)

    # --- accessors --------------------------------------------------------

    @property
    def order(self) -> Fraction:
        return self._order

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def valuation(self) -> Fraction:
        """Smallest exponent with nonzero coefficient; ``order`` if none is known."""
        return next(iter(self._terms), self._order)

    def coefficient(self, exponent) -> int:
        exponent = as_fraction(exponent)
        if exponent > self._order:
            raise InsufficientPrecision(f"q^{exponent} is above order {self._order}")
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    # --- arithmetic -------------------------------------------------------

    def truncate(self, order) -> "QSeries":
        order = min(as_fraction(order), self._order)
        return QSeries(self._terms, order)

    def __add__(self, other: "QSeries") -> "QSeries":
        out = defaultdict(int, self._terms)
        for e, c in other._terms.items():
            out[e] += c
        return QSeries(out, min(self._order, other._order))

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self._terms.items()}, self._order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, factor: int) -> "QSeries":
        return QSeries({e: factor * c for e, c in self._terms.items()}, self._order)

    def shift(self, r) -> "QSeries":
        """Multiply by q^r; the truncation order moves with it."""
        r = as_fraction(r)
        return QSeries({e + r: c for e, c in self._terms.items()}, self._order + r)

    def __mul__(self, other: "QSeries") -> "QSeries":
        if isinstance(other, int):
            return self.scale(other)
        order = min(self._order + other.valuation(), other._order + self.valuation())
        out = defaultdict(int)
        b_items = list(other._terms.items())
        for ea, ca in self._terms.items():
            for eb, cb in b_items:
                e = ea + eb
                if e > order:
                    break
                out[e] += ca * cb
        return QSeries(out, order)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._order == other._order and self._terms == other._terms

    def __hash__(self):
        return hash((self._order, tuple(self._terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*q^{e}" for e, c in self._terms.items()) or "0"
        return f"QSeries({body} + O(q^>{self._order}))"

    # --- rendering --------------------------------------------------------

    def to_text(self) -> str:
        return "".join(f"{e} {c}\n" for e, c in self._terms.items())

    def to_dict(self) -> dict:
        return {
            "order": str(self._order),
            "terms": [{"exp": str(e), "coeff": str(c)} for e, c in self._terms.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "QSeries":
        return cls({as_fraction(t["exp"]): int(t["coeff"]) for t in data["terms"]}, data["order"])

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Comparison:
    """Outcome of ``equal_to_order``; falsy on mismatch, with the first witness."""

    equal: bool
    exponent: Optional[Fraction] = None
    left: int = 0
    right: int = 0

    def __bool__(self) -> bool:
        return self.equal


def equal_to_order(a: QSeries, b: QSeries, order) -> Comparison:
    order = as_fraction(order)
    if order > a.order or order > b.order:
        raise InsufficientPrecision(
            f"comparison to order {order} but operands known to {a.order} and {b.order}"
        )
    for e in sorted(set(a._terms) | set(b._terms)):
        if e > order:
            break
        ca, cb = a._terms.get(e, 0), b._terms.get(e, 0)
        if ca != cb:
            return Comparison(False, e, ca, cb)
    return Comparison(True)


class SeriesAccumulator:
    """Mutable sum of shifted integer-exponent coefficient lists, all cut at one order."""

    def __init__(self, order):
        self.order = as_fraction(order)
        self._terms = defaultdict(int)

    def add_coeffs(self, coeffs: Sequence[int], shift) -> None:
        shift = as_fraction(shift)
        for m, c in enumerate(coeffs):
            e = shift + m
            if e > self.order:
                break
            if c:
                self._terms[e] += c

    def add(self, series: QSeries) -> None:
        if series.order < self.order:
            raise InsufficientPrecision("accumulated series is truncated below the target")
        for e, c in series.items():
            if e <= self.order:
                self._terms[e] += c

    def result(self) -> QSeries:
        return QSeries(self._terms, self.order)


# --- q-Pochhammer symbols -------------------------------------------------


def _poly_mul(a: Sequence[int], b: Sequence[int], deg: int) -> list[int]:
    out = [0] * (deg + 1)
    for i, x in enumerate(a):
        if i > deg:
            break
        if x:
            for j, y in enumerate(b):
                if i + j > deg:
                    break
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def pochhammer_coeffs(p: int, deg: int) -> tuple[int, ...]:
    """Coefficients of (1-q)(1-q^2)...(1-q^p) up to q^deg."""
    coeffs = [1] + [0] * deg
    for l in range(1, p + 1):
        for m in range(deg, l - 1, -1):
            coeffs[m] -= coeffs[m - l]
    return tuple(coeffs)


@lru_cache(maxsize=None)
def inv_pochhammer_coeffs(p: int, deg: int) -> tuple[int, ...]:
    """Coefficients of 1/(q)_p: partitions into parts of size <= p."""
    coeffs = [1] + [0] * deg
    for l in range(1, p + 1):
        for m in range(l, deg + 1):
            coeffs[m] += coeffs[m - l]
    return tuple(coeffs)


@lru_cache(maxsize=None)
def inv_pochhammer_product(ps: tuple[int, ...], deg: int) -> tuple[int, ...]:
    """Coefficients of prod_i 1/(q)_{ps[i]}; ``ps`` should be sorted for cache hits."""
    if deg < 0:
        return ()
    if not ps:
        return (1,) + (0,) * deg
    head = inv_pochhammer_coeffs(ps[0], deg)
    return tuple(_poly_mul(head, inv_pochhammer_product(ps[1:], deg), deg))


def _int_order(order) -> int:
    order = as_fraction(order)
    return max(-1, order.numerator // order.denominator)


def euler_pochhammer(p: int, order) -> QSeries:
    """(q)_p = (1-q)(1-q^2)...(1-q^p), (q)_0 = 1."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    return QSeries.from_coeffs(pochhammer_coeffs(p, max(_int_order(order), 0)), order)


def euler_inv(p: int, order) -> QSeries:
    """1/(q)_p."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    return QSeries.from_coeffs(inv_pochhammer_coeffs(p, max(_int_order(order), 0)), order)


def euler_inf_inv(order) -> QSeries:
    """1/(q)_inf, the partition generating function (product over l >= 1)."""
    deg = max(_int_order(order), 0)
    return QSeries.from_coeffs(inv_pochhammer_coeffs(deg, deg), order)


def euler_inf(order) -> QSeries:
    """(q)_inf = prod_{l >= 1} (1 - q^l)."""
    deg = max(_int_order(order), 0)
    return QSeries.from_coeffs(pochhammer_coeffs(deg, deg), order)


def power(series: QSeries, e: int) -> QSeries:
    out = QSeries.one(series.order)
    for _ in range(e):
        out = out * series
    return out


def sum_series(items: Iterable[QSeries], order) -> QSeries:
    acc = SeriesAccumulator(order)
    for s in items:
        acc.add(s)
    return acc.result()
