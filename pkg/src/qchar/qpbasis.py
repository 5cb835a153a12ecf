"""Quasi-particle monomial bases: admissibility, enumeration, energies, tables.

A monomial stores, per color i, particles p = 1..r_i^(1) as (charge, index)
pairs with charges weakly decreasing in p.  Index bounds are computed directly
from the admissibility rules; no character formula is used here, so the
census can be checked against the fermionic sums independently.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .fermionic import HighestWeight, weight_of_charges
from .lattice import WeightVec
from .qseries import QSeries, as_fraction

PRINCIPAL = "principal"
PARAFERMIONIC = "parafermionic"


@dataclass(frozen=True, order=True)
class QPMonomial:
    """colors[i-1] = ((charge, m), ...) for p = 1, 2, ...; charges nonincreasing."""

    colors: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def n(self) -> int:
        return len(self.colors)

    @property
    def color_type(self) -> tuple[int, ...]:
        """(r_1, ..., r_n); the rendered form "(r_n;...;r_1)" lists r_n first."""
        return tuple(sum(c for c, _ in parts) for parts in self.colors)

    @property
    def color_charge_type(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(c for c, _ in parts) for parts in self.colors)

    def color_dual_charge_type(self, K: int) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(sum(1 for c, _ in parts if c >= t) for t in range(1, K + 1))
            for parts in self.colors
        )

    def occupation(self, K: int) -> tuple[int, ...]:
        """Flat p_i^(s), color-major, charges 1..K."""
        out = []
        for parts in self.colors:
            cnt = Counter(c for c, _ in parts)
            out.extend(cnt.get(s, 0) for s in range(1, K + 1))
        return tuple(out)

    @property
    def principal_energy(self) -> int:
        return -sum(m for parts in self.colors for _, m in parts)

    def weight(self, hw: HighestWeight) -> WeightVec:
        return weight_of_charges(hw, self.color_type)

    def index_vector(self) -> tuple[int, ...]:
        return tuple(m for parts in self.colors for _, m in parts)

    def render(self) -> str:
        """Color n first, each color from its last particle to its first."""
        out = []
        for i in range(self.n, 0, -1):
            for charge, m in reversed(self.colors[i - 1]):
                root = f"a{i}" if charge == 1 else f"{charge}a{i}"
                out.append(f"{m}_{{{root}}}")
        return "(" + " ".join(out) + ")"

    def to_list(self) -> list[list[int]]:
        return [[i + 1, c, m] for i, parts in enumerate(self.colors) for c, m in parts]


@dataclass(frozen=True)
class AdmissibilityContext:
    hw: HighestWeight
    K: Optional[int] = None

    def __post_init__(self):
        if self.K is None:
            object.__setattr__(self, "K", self.hw.k - 1)
        if not 0 <= self.K <= self.hw.k:
            raise ValueError(f"K={self.K} must lie in 0..{self.hw.k}")

    @property
    def n(self) -> int:
        return self.hw.n

    def delta_count(self, i: int, charge: int) -> int:
        """sum_{t=1}^{charge} delta_{i, j_t}."""
        return sum(1 for t in range(1, charge + 1) if self.hw.j_t(t) == i)


def index_upper_bound(
    ctx: AdmissibilityContext,
    i: int,
    p: int,
    charges: Sequence[int],
    lower_charges: Sequence[int],
) -> int:
    """Upper bound on m_{p,i} from the charges of colors i and i-1 (1-based p)."""
    n_p = charges[p - 1]
    return (
        sum(min(n_p, c) for c in lower_charges)
        - ctx.delta_count(i, n_p)
        - sum(2 * min(n_p, charges[q]) for q in range(p - 1))
        - n_p
    )


def check_admissible(mono: QPMonomial, ctx: AdmissibilityContext) -> bool:
    if mono.n != ctx.n:
        return False
    prev: tuple[int, ...] = ()
    for i, parts in enumerate(mono.colors, start=1):
        charges = [c for c, _ in parts]
        if any(not 1 <= c <= ctx.K for c in charges):
            return False
        if any(a < b for a, b in zip(charges, charges[1:])):
            return False
        for p, (c, m) in enumerate(parts, start=1):
            if m > index_upper_bound(ctx, i, p, charges, prev):
                return False
            if p < len(parts) and parts[p][0] == c and parts[p][1] > m - 2 * c:
                return False
        prev = tuple(charges)
    return True


def parafermionic_energy(mono: QPMonomial, ctx: AdmissibilityContext) -> Fraction:
    """-sum m - (1/k)(r_1^2 + ... + r_n^2 - r_1 r_2 - ... - r_{n-1} r_n) - (kj/k) r_j."""
    hw = ctx.hw
    r = mono.color_type
    quad = sum(x * x for x in r) - sum(r[i] * r[i + 1] for i in range(len(r) - 1))
    lin = hw.kj * r[hw.j - 1] if hw.j is not None else 0
    return mono.principal_energy - Fraction(quad + lin, hw.k)


def _pf_correction(ctx: AdmissibilityContext, r: Sequence[int]) -> Fraction:
    hw = ctx.hw
    quad = sum(x * x for x in r) - sum(r[i] * r[i + 1] for i in range(len(r) - 1))
    lin = hw.kj * r[hw.j - 1] if hw.j is not None else 0
    return Fraction(quad + lin, hw.k)


# --- enumeration ---------------------------------------------------------------


def _dual_vectors(prev: Sequence[int], K: int, limit: Fraction) -> Iterator[tuple[int, ...]]:
    """Nonincreasing (r^(1), ..., r^(K)) >= 0 with sum_u (r^(u) - prev^(u))^2 <= limit."""
    out = [0] * K

    def rec(u: int, cap: int, rem: Fraction):
        if u == K:
            yield tuple(out)
            return
        # r^(u) - prev[u] ranges over |.| <= sqrt(rem)
        span = math.isqrt(int(rem)) if rem >= 0 else -1
        if span < 0:
            return
        lo = max(0, prev[u] - span)
        hi = min(cap, prev[u] + span)
        for v in range(lo, hi + 1):
            d = (v - prev[u]) ** 2
            if d <= rem:
                out[u] = v
                yield from rec(u + 1, v, rem - d)

    cap = 10**9
    yield from rec(0, cap, limit)


def _charges_from_dual(dual: Sequence[int]) -> tuple[int, ...]:
    """Charge list n_1 >= n_2 >= ... from dual counts r^(t) = #{p : n_p >= t}."""
    if not dual or dual[0] == 0:
        return ()
    return tuple(sum(1 for t in dual if t >= p) for p in range(1, dual[0] + 1))


@dataclass
class Census:
    """Graded count of admissible monomials; ``monomials`` is filled when listing."""

    grading: str
    max_energy: Fraction
    counts: dict = field(default_factory=dict)
    monomials: dict = field(default_factory=dict)

    def series(self) -> QSeries:
        return QSeries(self.counts, self.max_energy)

    def listing(self) -> list[tuple[Fraction, QPMonomial]]:
        rows = []
        for grade, monos in self.monomials.items():
            for m in monos:
                rows.append((grade, m))
        rows.sort(key=lambda gm: (gm[0], gm[1].color_type[::-1], gm[1].index_vector()))
        return rows

    def to_json(self) -> str:
        out = []
        for grade in sorted(self.counts):
            entry = {"grade": str(grade), "count": self.counts[grade]}
            if self.monomials:
                monos = sorted(self.monomials.get(grade, []), key=lambda m: (m.color_type[::-1], m.index_vector()))
                entry["monomials"] = [m.to_list() for m in monos]
            out.append(entry)
        return json.dumps(out)


def _parse_type(value) -> Optional[tuple]:
    """Accept color-types given as (r_1, ..., r_n) tuples."""
    return None if value is None else tuple(value)


def enumerate_basis(
    ctx: AdmissibilityContext,
    max_energy,
    grading: str = PARAFERMIONIC,
    color_type: Optional[Sequence[int]] = None,
    charge_type: Optional[Sequence[Sequence[int]]] = None,
    weight_class: Optional[Sequence[int]] = None,
    listing: bool = False,
    radius=1,
) -> Census:
    """Census of admissible monomials of chosen grading <= ``max_energy``.

    Filters: ``color_type`` (r_1, ..., r_n); ``charge_type`` per color as
    nonincreasing charge tuples; ``weight_class`` as residues c with
    r_i = c_i mod k.  ``radius`` scales the internal search budget; the
    census itself is always cut at ``max_energy``.
    """
    if grading not in (PRINCIPAL, PARAFERMIONIC):
        raise ValueError(f"unknown grading {grading!r}")
    E = as_fraction(max_energy)
    census = Census(grading, E)
    if E < 0:
        return census
    n, K, hw = ctx.n, ctx.K, ctx.hw
    search = E * radius
    color_type = _parse_type(color_type)
    charge_type = None if charge_type is None else tuple(tuple(c) for c in charge_type)

    if grading == PRINCIPAL:
        s_max = None
    else:
        s_max = _pf_dual_norm_cap(ctx, search)

    counts = defaultdict(int)
    monos = defaultdict(list)

    def leaf(all_charges: tuple[tuple[int, ...], ...]):
        r = tuple(sum(c) for c in all_charges)
        if color_type is not None and r != color_type:
            return
        if charge_type is not None and all_charges != charge_type:
            return
        if weight_class is not None and any((r[i] - weight_class[i]) % hw.k for i in range(n)):
            return
        shift = _pf_correction(ctx, r) if grading == PARAFERMIONIC else Fraction(0)
        budget = E + shift  # principal-energy budget
        if budget < 0:
            return
        for mono in _index_assignments(ctx, all_charges, budget):
            grade = mono.principal_energy - shift
            counts[grade] += 1
            if listing:
                monos[grade].append(mono)

    # DFS over colors with dual-charge vectors.  For the principal grading the
    # minimal energy equals (1/2)|g_1|^2 + sum (1/2)|g_i - g_{i+1}|^2 + (1/2)|g_n|^2
    # in dual-charge coordinates plus nonnegative terms, which gives the pruning.
    chosen: list[tuple[int, ...]] = []

    def rec(i: int, used: Fraction, prev: tuple[int, ...]):
        if i == n:
            if grading == PRINCIPAL and used + Fraction(sum(x * x for x in prev), 2) > search:
                return
            leaf(tuple(_charges_from_dual(d) for d in chosen))
            return
        if grading == PRINCIPAL:
            limit = 2 * (search - used)
            anchor = prev if i > 0 else (0,) * K
        else:
            limit = Fraction(s_max) - used
            anchor = (0,) * K
        for dual in _dual_vectors(anchor, K, limit):
            if grading == PRINCIPAL:
                step = Fraction(sum((a - b) ** 2 for a, b in zip(dual, anchor)), 2)
            else:
                step = Fraction(sum(x * x for x in dual))
            chosen.append(dual)
            rec(i + 1, used + step, dual)
            chosen.pop()

    rec(0, Fraction(0), (0,) * K)
    census.counts = dict(sorted(counts.items()))
    if listing:
        census.monomials = {g: monos[g] for g in sorted(monos)}
    return census


def _pf_dual_norm_cap(ctx: AdmissibilityContext, E: Fraction) -> int:
    """Cap S on sum_{i,u} (r_i^(u))^2 over monomials with parafermionic energy <= E.

    Minimal parafermionic energy >= (1/k) * (principal quadratic part) - (kj/k) r_j
    (Cauchy-Schwarz with K = k-1 summands), principal quadratic part >=
    (lambda/2) S with lambda = 4/(n+1)^2 below the smallest Cartan eigenvalue,
    and r_j <= sqrt(K S).
    """
    hw, K = ctx.hw, ctx.K
    lam = Fraction(4, (hw.n + 1) ** 2)
    a = lam / (2 * hw.k)
    b = Fraction(hw.kj, hw.k)

    def lower(S):
        # <= a*S - b*sqrt(K*S), the true lower bound
        return a * S - b * (math.isqrt(K * S) + 1)

    S = 0
    # lower() is eventually increasing; stop once past its minimum and above E
    while not (lower(S) > E and 2 * a * math.isqrt(S) > b * max(K, 1) + 1):
        S += 1
    return S


def _index_assignments(
    ctx: AdmissibilityContext, all_charges: tuple[tuple[int, ...], ...], budget: Fraction
) -> Iterator[QPMonomial]:
    """All admissible index choices with principal energy <= budget."""
    n = ctx.n
    # per-particle upper bounds, straight from the admissibility rule
    bounds = []
    prev: tuple[int, ...] = ()
    for i, charges in enumerate(all_charges, start=1):
        bounds.append([index_upper_bound(ctx, i, p, charges, prev) for p in range(1, len(charges) + 1)])
        prev = charges
    flat = [(i, p) for i in range(n) for p in range(len(all_charges[i]))]
    min_energy = -sum(b for bs in bounds for b in bs)
    if min_energy > budget:
        return
    slack_total = budget - min_energy
    ms = [[0] * len(c) for c in all_charges]

    def rec(idx: int, energy_used):
        # energy_used = -sum of chosen m so far, compared with the best case for the rest
        if idx == len(flat):
            yield QPMonomial(tuple(
                tuple(zip(all_charges[i], ms[i])) for i in range(n)
            ))
            return
        i, p = flat[idx]
        rest_min = -sum(bounds[ii][pp] for ii, pp in flat[idx + 1:])
        top = bounds[i][p]
        c = all_charges[i][p]
        if p > 0 and all_charges[i][p - 1] == c:
            top = min(top, ms[i][p - 1] - 2 * c)
        m = top
        while energy_used - m + rest_min <= budget:
            ms[i][p] = m
            yield from rec(idx + 1, energy_used - m)
            m -= 1

    if slack_total >= 0:
        yield from rec(0, 0)


# --- tables --------------------------------------------------------------------


def format_color_type(r: Sequence[int]) -> str:
    return "(" + ";".join(str(x) for x in reversed(r)) + ")"


def format_charge_type(charges: Sequence[Sequence[int]]) -> str:
    return "(" + ";".join(",".join(str(c) for c in reversed(cs)) for cs in reversed(charges)) + ")"


def render_table(census: Census, with_charge_type: bool = False) -> str:
    """Rows `color-type | energy | [charge-type |] basis`, grouped by color-type and energy."""
    header = "color-type | energy | " + ("color-charge-type | " if with_charge_type else "") + "basis"
    lines = [header]
    groups = defaultdict(list)
    for grade, mono in census.listing():
        key = (mono.color_type[::-1], grade)
        if with_charge_type:
            key += (mono.color_charge_type[::-1],)
        groups[key].append(mono)
    for key in sorted(groups):
        ct, grade = key[0], key[1]
        cells = [format_color_type(ct[::-1]), str(grade)]
        if with_charge_type:
            cells.append(format_charge_type(key[2][::-1]))
        cells.append(", ".join(m.render() for m in groups[key]))
        lines.append(" | ".join(cells))
    return "\n".join(lines) + "\n"
