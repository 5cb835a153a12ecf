"""Fermionic-sum q-characters over occupation numbers p_i^(s).

Every sum here has the shape

    sum_p  q^{(1/2) p.M.p + L.p} / prod_{i,s} (q)_{p_i^(s)}

for a positive definite kernel ``M``.  Occupation tuples are laid out
color-major: index ``(i-1)*K + (s-1)`` holds p_i^(s).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .lattice import (
    WeightVec,
    context,
    enumerate_quadratic,
    inner_product,
    inv_cartan_slk_entry,
)
from .qseries import QSeries, SeriesAccumulator, as_fraction, inv_pochhammer_product


class DomainError(ValueError):
    """An argument lies outside the domain of the formula."""


@dataclass(frozen=True)
class HighestWeight:
    """k0*L0 + kj*Lj at level k = k0 + kj for sl(n+1)^; ``j`` is None for k*L0."""

    n: int
    k: int
    k0: int
    j: Optional[int] = None
    kj: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"rank must be positive, got {self.n}")
        if self.k < 1:
            raise DomainError(f"level must be positive, got {self.k}")
        if self.k0 < 0 or self.kj < 0 or self.k0 + self.kj != self.k:
            raise DomainError(f"need k0 + kj = k with k0, kj >= 0 (got {self.k0}, {self.kj}, {self.k})")
        if (self.kj == 0) != (self.j is None):
            raise DomainError("kj = 0 exactly when no index j is given")
        if self.j is not None and not 1 <= self.j <= self.n:
            raise DomainError(f"j={self.j} outside 1..{self.n}")

    @classmethod
    def vacuum(cls, n: int, k: int) -> "HighestWeight":
        return cls(n, k, k)

    @classmethod
    def parse(cls, spec: str, n: int) -> "HighestWeight":
        """Parse "2*L0", "1*L0+1*L1", "L0+L2" or "2*L1"."""
        coeffs: dict[int, int] = {}
        for part in spec.replace(" ", "").split("+"):
            m = re.fullmatch(r"(?:(\d+)\*)?L(\d+)", part)
            if not m:
                raise DomainError(f"malformed weight term {part!r} in {spec!r}")
            idx = int(m.group(2))
            coeffs[idx] = coeffs.get(idx, 0) + int(m.group(1) or 1)
        k0 = coeffs.pop(0, 0)
        coeffs = {i: c for i, c in coeffs.items() if c}
        if len(coeffs) > 1:
            raise DomainError(f"at most one nonzero L_j (j >= 1) is supported: {spec!r}")
        if coeffs:
            (j, kj), = coeffs.items()
            return cls(n, k0 + kj, k0, j, kj)
        return cls(n, k0, k0)

    @property
    def is_vacuum(self) -> bool:
        return self.j is None

    def j_t(self, t: int) -> int:
        """Level-one slot label: 0 for t <= k0, j otherwise."""
        return 0 if t <= self.k0 or self.j is None else self.j

    @property
    def finite(self) -> WeightVec:
        """The finite part Lambda = kj * Lambda_j."""
        if self.j is None:
            return WeightVec.zero(self.n)
        return WeightVec.fundamental(self.n, self.j) * self.kj

    def dotted(self) -> "HighestWeight":
        """Drop the level-one factor in slot k: (k-1) L0 + (kj - 1) Lj, or (k-1) L0."""
        if self.k < 2:
            raise DomainError("the reduced weight needs level k >= 2")
        if self.kj <= 1:
            return HighestWeight(self.n, self.k - 1, self.k0 if self.kj else self.k - 1)
        return HighestWeight(self.n, self.k - 1, self.k0, self.j, self.kj - 1)

    def spec(self) -> str:
        s = f"{self.k0}*L0"
        return s + (f"+{self.kj}*L{self.j}" if self.j is not None else "")

    def __str__(self):
        return self.spec()


@dataclass(frozen=True)
class OccupationTuple:
    """p[i-1][s-1] = number of particles of color i and charge s."""

    p: tuple[tuple[int, ...], ...]

    @classmethod
    def from_flat(cls, flat: Sequence[int], n: int, K: int) -> "OccupationTuple":
        return cls(tuple(tuple(flat[i * K:(i + 1) * K]) for i in range(n)))

    @property
    def charges(self) -> tuple[int, ...]:
        """r_i = sum_s s * p_i^(s)."""
        return tuple(sum((s + 1) * x for s, x in enumerate(row)) for row in self.p)

    @property
    def dual_charges(self) -> tuple[tuple[int, ...], ...]:
        """r_i^(u) = sum_{s >= u} p_i^(s)."""
        return tuple(tuple(sum(row[u:]) for u in range(len(row))) for row in self.p)


# --- kernels ----------------------------------------------------------------


def principal_kernel(n: int, K: int) -> list[list[int]]:
    """A_lm * min(s, t) over (color, charge) pairs with charges 1..K."""
    A = context(n).cartan
    idx = [(i, s) for i in range(n) for s in range(1, K + 1)]
    return [[A[l][m] * min(s, t) for (m, t) in idx] for (l, s) in idx]


def parafermionic_kernel(n: int, k: int) -> list[list[Fraction]]:
    """A_lm * (A_{sl(k)}^{-1})_st over charges 1..k-1."""
    A = context(n).cartan
    idx = [(i, s) for i in range(n) for s in range(1, k)]
    return [[A[l][m] * inv_cartan_slk_entry(s, t, k) for (m, t) in idx] for (l, s) in idx]


def principal_linear(hw: HighestWeight, K: int) -> list[Fraction]:
    """Coefficients of sum_{s = k0+1}^{K} (s - k0) p_j^(s)."""
    lin = [Fraction(0)] * (hw.n * K)
    if hw.j is not None:
        for s in range(hw.k0 + 1, K + 1):
            lin[(hw.j - 1) * K + s - 1] = Fraction(s - hw.k0)
    return lin


def parafermionic_linear(hw: HighestWeight) -> list[Fraction]:
    """Principal linear term minus (kj/k) sum_s s p_j^(s), charges 1..k-1."""
    K = hw.k - 1
    lin = principal_linear(hw, K)
    if hw.j is not None:
        for s in range(1, K + 1):
            lin[(hw.j - 1) * K + s - 1] -= Fraction(hw.kj * s, hw.k)
    return lin


def quadratic_value(M, L, p) -> Fraction:
    size = len(p)
    return (
        sum(p[a] * M[a][b] * p[b] for a in range(size) for b in range(size)) / Fraction(2)
        + sum(L[a] * p[a] for a in range(size))
    )


def fermionic_sum(
    M,
    L,
    order,
    accept: Optional[Callable[[tuple[int, ...]], bool]] = None,
    radius=1,
) -> QSeries:
    """sum_{p >= 0} q^{(1/2)pMp + Lp} / prod (q)_p, exact through ``order``.

    ``radius`` scales the enumeration bound (the self-check doubles it).
    """
    order = as_fraction(order)
    acc = SeriesAccumulator(order)
    size = len(L)
    bound = max(order, Fraction(0)) * radius if radius != 1 else order
    for p, e in enumerate_quadratic(M, L, bound, lower=[0] * size):
        if e > order or (accept is not None and not accept(p)):
            continue
        deg = int((order - e).__floor__())
        acc.add_coeffs(inv_pochhammer_product(tuple(sorted(x for x in p if x)), deg), e)
    return acc.result()


def _class_filter(n: int, K: int, residues: Sequence[int], k: int):
    def accept(p):
        for i in range(n):
            r = sum((s + 1) * p[i * K + s] for s in range(K))
            if (r - residues[i]) % k:
                return False
        return True

    return accept


def restriction_residues(hw: HighestWeight, restriction) -> tuple[int, ...]:
    """Normalise a weight-class restriction to alpha-coordinates of mu - Lambda mod k.

    ``restriction`` is either a ``WeightVec`` mu (which must lie in Lambda + Q)
    or a sequence of integers c with mu = Lambda + sum c_i alpha_i.
    """
    if isinstance(restriction, WeightVec):
        if restriction.n != hw.n:
            raise DomainError("restriction has the wrong rank")
        diff = (restriction - hw.finite).root_coords()
        if any(c.denominator != 1 for c in diff):
            raise DomainError(f"weight {restriction} is not in Lambda + Q")
        return tuple(int(c) % hw.k for c in diff)
    cs = tuple(restriction)
    if len(cs) != hw.n or any(Fraction(c).denominator != 1 for c in cs):
        raise DomainError(f"restriction {cs} must be {hw.n} integers")
    return tuple(int(c) % hw.k for c in cs)


def principal_sum(hw: HighestWeight, order, K: Optional[int] = None, radius=1) -> QSeries:
    """Principal-subspace character with charges 1..K (K defaults to the level).

    For the reduced weight of a level-k weight, pass ``hw.dotted()``.
    """
    K = hw.k if K is None else K
    if K < 0 or K > hw.k:
        raise DomainError(f"K={K} must lie in 0..{hw.k}")
    return fermionic_sum(principal_kernel(hw.n, K), principal_linear(hw, K), order, radius=radius)


def parafermionic_sum(
    hw: HighestWeight,
    order,
    restriction: Union[None, WeightVec, Sequence[int]] = None,
    radius=1,
) -> QSeries:
    """Parafermionic character with the inverse sl(k) Cartan kernel, optionally one weight class."""
    if hw.k < 2:
        raise DomainError("parafermionic sums need level k >= 2")
    K = hw.k - 1
    accept = None
    if restriction is not None:
        accept = _class_filter(hw.n, K, restriction_residues(hw, restriction), hw.k)
    return fermionic_sum(
        parafermionic_kernel(hw.n, hw.k), parafermionic_linear(hw), order, accept, radius
    )


def prop01_sum(n: int, k: int, order, radius=1) -> QSeries:
    """Vacuum character from particles of charges 1..k and antiparticles of charge k.

    Sum over p_{+i}^(s) (s <= k) and p_{-i}^(k) of
    q^{(1/2) sum A_lm min(s,t) (p_+ - p_-)_l^s (p_+ - p_-)_m^t + sum_l p_{+l}^(k) p_{-l}^(k)}
    over prod (q)_{p_+} (q)_{p_-}.  With d_l = p_{+l}^(k) - p_{-l}^(k) the
    quadratic part is positive definite in (p_+^(s<k), d); the pairs with a
    given d are then enumerated directly.
    """
    order = as_fraction(order)
    M = principal_kernel(n, k)
    lower = [0 if s < k else None for _ in range(n) for s in range(1, k + 1)]
    bound = max(order, Fraction(0)) * radius if radius != 1 else order
    acc = SeriesAccumulator(order)
    for P, e0 in enumerate_quadratic(M, [0] * (n * k), bound, lower=lower):
        if e0 > order:
            continue
        ds = [P[l * k + k - 1] for l in range(n)]
        plus = [P[l * k + s] for l in range(n) for s in range(k - 1)]
        for pairs, extra in _antiparticle_pairs(ds, order - e0):
            e = e0 + extra
            parts = plus + [x for ab in pairs for x in ab]
            deg = int((order - e).__floor__())
            acc.add_coeffs(inv_pochhammer_product(tuple(sorted(x for x in parts if x)), deg), e)
    return acc.result()


def _antiparticle_pairs(ds: Sequence[int], budget):
    """All ((a_l, b_l))_l with a_l - b_l = d_l, a_l, b_l >= 0, sum a_l b_l <= budget."""
    if not ds:
        yield (), 0
        return
    d = ds[0]
    b = max(0, -d)
    while True:
        a = b + d
        ab = a * b
        if ab > budget:
            break
        for rest, extra in _antiparticle_pairs(ds[1:], budget - ab):
            yield ((a, b),) + rest, ab + extra
        b += 1


def two_variable_sum(order) -> QSeries:
    """sum_{a,b >= 0} q^{a^2 + b^2 - ab} / ((q)_a (q)_b), by a plain double loop."""
    order = as_fraction(order)
    acc = SeriesAccumulator(order)
    a = 0
    # a^2 + b^2 - ab >= (a^2 + b^2)/2
    while a * a <= 2 * order:
        b = 0
        while b * b <= 2 * order:
            e = a * a + b * b - a * b
            if e <= order:
                deg = int((order - e).__floor__())
                acc.add_coeffs(inv_pochhammer_product(tuple(sorted(x for x in (a, b) if x)), deg), e)
            b += 1
        a += 1
    return acc.result()


def durfee_rhs(const: int, order) -> QSeries:
    """sum_{a - b = const; a, b >= 0} q^{ab} / ((q)_a (q)_b)."""
    order = as_fraction(order)
    acc = SeriesAccumulator(order)
    b = max(0, -const)
    while True:
        a = b + const
        if a * b > order:
            break
        deg = int((order - a * b).__floor__())
        acc.add_coeffs(inv_pochhammer_product(tuple(sorted(x for x in (a, b) if x)), deg), a * b)
        b += 1
    return acc.result()


def weight_of_charges(hw: HighestWeight, charges: Sequence[int]) -> WeightVec:
    """Lambda + sum_i r_i alpha_i."""
    return hw.finite + WeightVec.from_root_coords(charges)


def norm_shift(hw: HighestWeight, mu: WeightVec) -> Fraction:
    """(<mu,mu> - <Lambda,Lambda>) / 2k, the D^h eigenvalue on the mu-weight space."""
    lam = hw.finite
    return (inner_product(mu, mu) - inner_product(lam, lam)) / (2 * hw.k)
