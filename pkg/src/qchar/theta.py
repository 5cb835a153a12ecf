"""Degree-k theta functions of the A_n root lattice and full module characters."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fermionic import (
    DomainError,
    HighestWeight,
    principal_kernel,
    principal_linear,
)
from .lattice import WeightVec, context, enumerate_quadratic, inner_product
from .qseries import (
    QSeries,
    SeriesAccumulator,
    as_fraction,
    euler_inf_inv,
    inv_pochhammer_product,
    power,
)


@dataclass
class GradedCharacter:
    """Finitely supported map weight -> QSeries, all cut at one order.

    With ``weight_resolved`` False the map has the single key ``None``
    (all y_i specialised to 1).
    """

    order: Fraction
    components: dict = field(default_factory=dict)
    weight_resolved: bool = True

    def q_only(self) -> QSeries:
        acc = SeriesAccumulator(self.order)
        for s in self.components.values():
            acc.add(s)
        return acc.result()

    def collapse(self) -> "GradedCharacter":
        return GradedCharacter(self.order, {None: self.q_only()}, weight_resolved=False)

    def get(self, weight: WeightVec) -> QSeries:
        return self.components.get(weight, QSeries.zero(self.order))

    def to_dict(self) -> list:
        if not self.weight_resolved:
            return [{"weight": None, "series": self.q_only().to_dict()}]
        rows = sorted(self.components.items(), key=lambda kv: kv[0].root_coords())
        return [
            {"weight": [str(x) for x in w.root_coords()], "series": s.to_dict()}
            for w, s in rows
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: list) -> "GradedCharacter":
        comps = {}
        resolved = True
        order = None
        for row in data:
            s = QSeries.from_dict(row["series"])
            order = s.order if order is None else min(order, s.order)
            if row["weight"] is None:
                resolved = False
                comps[None] = s
            else:
                comps[WeightVec.from_root_coords([Fraction(x) for x in row["weight"]])] = s
        return cls(order if order is not None else Fraction(0), comps, resolved)

    def to_text(self) -> str:
        if not self.weight_resolved:
            return self.q_only().to_text()
        out = []
        for row in self.to_dict():
            out.append("# weight " + ",".join(row["weight"]))
            out.extend(f"{t['exp']} {t['coeff']}" for t in row["series"]["terms"])
        return "\n".join(out) + "\n"


def _finish(terms: dict, order: Fraction, weight_resolved: bool) -> GradedCharacter:
    comps = {w: QSeries(t, order) for w, t in terms.items() if t}
    char = GradedCharacter(order, comps, True)
    return char if weight_resolved else char.collapse()


def theta_series(mu: WeightVec, k: int, order, weight_resolved: bool = True, radius=1) -> GradedCharacter:
    """q^{|mu|^2/2k} sum_{a in Q} q^{(k/2)|a|^2 + <a,mu>}, keyed by the weight k*a + mu."""
    if not mu.in_weight_lattice():
        raise DomainError(f"{mu} is not in the weight lattice")
    order = as_fraction(order)
    n = mu.n
    A = context(n).cartan
    base = inner_product(mu, mu) / (2 * k)
    M = [[k * A[i][j] for j in range(n)] for i in range(n)]
    bound = (order - base) * radius if radius != 1 else order - base
    terms: dict = {}
    for a, v in enumerate_quadratic(M, list(mu.coords), bound):
        e = base + v
        if e > order:
            continue
        w = WeightVec.from_root_coords(a) * k + mu
        terms.setdefault(w, {})
        terms[w][e] = terms[w].get(e, 0) + 1
    return _finish(terms, order, weight_resolved)


def assemble_character(
    hw: HighestWeight, order, weight_resolved: bool = True, radius=1
) -> GradedCharacter:
    """Tr q^D prod y_i^{h_i} on L(hw) from the principal-subspace sum times theta sums.

    The joint exponent over (p, a), with p the occupation numbers for charges
    1..k-1 and a in Q,

        (1/2) p.(A x B).p + lin(p) + (k/2)|a|^2 + <a, Lambda + sum_i r_i alpha_i>,

    is a positive definite quadratic form (k-1 charge levels against level
    k), so both sums are enumerated together.  Each point contributes
    q^E / prod (q)_p at weight k*a + Lambda + sum r_i alpha_i; the total is
    divided by (q)_inf^n at the end.
    """
    order = as_fraction(order)
    n, k = hw.n, hw.k
    K = k - 1
    A = context(n).cartan
    Mp = principal_kernel(n, K)
    Lp = principal_linear(hw, K)
    size_p = n * K
    size = size_p + n
    M = [[Fraction(0)] * size for _ in range(size)]
    for x in range(size_p):
        for y in range(size_p):
            M[x][y] = Fraction(Mp[x][y])
    for i in range(n):
        for j in range(n):
            M[size_p + i][size_p + j] = Fraction(k * A[i][j])
    # cross term sum_{i,l,s} a_i A_il s p_l^(s)
    for i in range(n):
        for l in range(n):
            for s in range(1, K + 1):
                x = l * K + s - 1
                M[size_p + i][x] = M[x][size_p + i] = Fraction(A[i][l] * s)
    lam = hw.finite
    L = list(Lp) + list(lam.coords)
    bound = order * radius if radius != 1 else order
    lower = [0] * size_p + [None] * n
    terms: dict = {}
    for x, e in enumerate_quadratic(M, L, bound, lower=lower):
        if e > order:
            continue
        p, a = x[:size_p], x[size_p:]
        r = [sum(s * p[l * K + s - 1] for s in range(1, K + 1)) for l in range(n)]
        w = lam + WeightVec.from_root_coords([k * a[i] + r[i] for i in range(n)])
        deg = int((order - e).__floor__())
        coeffs = inv_pochhammer_product(tuple(sorted(v for v in p if v)), deg)
        t = terms.setdefault(w, {})
        for m, c in enumerate(coeffs):
            if c:
                t[e + m] = t.get(e + m, 0) + c
    boson = power(euler_inf_inv(order), n)
    comps = {w: QSeries(t, order) * boson for w, t in terms.items()}
    char = GradedCharacter(order, {w: s for w, s in comps.items() if not s.is_zero()}, True)
    return char if weight_resolved else char.collapse()


def special_character_L1L2(order, radius=1) -> QSeries:
    """Parafermionic trace for L1 + L2 at sl(3) level 2, as a two-term fermionic sum.

    First term:  q^{(1/2)(p1^2 + p2^2 - p1 p2) + p1 - (p1 + p2)/2}
    Second term: q^{(1/2)((p1+1)^2 + p2^2 - (p1+1) p2) + p2 - ((p1+1) + p2)/2}
    both over (q)_{p1} (q)_{p2}.
    """
    order = as_fraction(order)
    acc = SeriesAccumulator(order)
    M = [[1, Fraction(-1, 2)], [Fraction(-1, 2), 1]]
    bound = order * radius if radius != 1 else order

    def first(p1, p2):
        return Fraction(p1 * p1 + p2 * p2 - p1 * p2, 2) + p1 - Fraction(p1 + p2, 2)

    def second(p1, p2):
        a = p1 + 1
        return Fraction(a * a + p2 * p2 - a * p2, 2) + p2 - Fraction(a + p2, 2)

    # same quadratic part; linear parts expanded: (1/2, -1/2) and (1/2, 0)
    for term, lin in ((first, [Fraction(1, 2), Fraction(-1, 2)]), (second, [Fraction(1, 2), 0])):
        for p, v in enumerate_quadratic(M, lin, bound, lower=[0, 0]):
            e = term(*p)
            if e != v:
                raise AssertionError(f"exponent expansion mismatch at {p}: {e} != {v}")
            if e > order:
                continue
            deg = int((order - e).__floor__())
            acc.add_coeffs(inv_pochhammer_product(tuple(sorted(x for x in p if x)), deg), e)
    return acc.result()
