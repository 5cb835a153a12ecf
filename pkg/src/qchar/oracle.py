"""Weight multiplicities of standard A_n^(1) modules by the affine Freudenthal recursion.

A weight of L(hw) is recorded as (finite part mu, depth d), meaning
k*L0 + mu - d*delta.  Internally mu is keyed by the integer vector
c = alpha-coordinates of Lambda - mu.  Nothing here uses the fermionic
formulas; this module is the independent reference they are tested against.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .fermionic import HighestWeight
from .lattice import WeightVec, context, enumerate_quadratic, inner_product
from .qseries import (
    InsufficientPrecision,
    QSeries,
    SeriesAccumulator,
    euler_inf,
    power,
)

log = logging.getLogger(__name__)

CACHE_VERSION = 1
CACHE_ENV = "QCHAR_CACHE_DIR"


class ConsistencyError(RuntimeError):
    """The recursion or a derived trace produced an impossible value."""


@dataclass(frozen=True)
class DominantWeight:
    """Any dominant integral affine weight: level k and finite part Lambda."""

    n: int
    k: int
    finite: WeightVec

    def __post_init__(self):
        c = self.finite.coords
        if len(c) != self.n or any(x.denominator != 1 or x < 0 for x in c) or sum(c) > self.k:
            raise ValueError(f"{self.finite} is not dominant integral at level {self.k}")

    @classmethod
    def of(cls, hw: Union[HighestWeight, "DominantWeight"]) -> "DominantWeight":
        if isinstance(hw, DominantWeight):
            return hw
        return cls(hw.n, hw.k, hw.finite)

    @classmethod
    def parse(cls, spec: str, n: int) -> "DominantWeight":
        """Affine weights such as "L1+L2" or "2*L0+L1"."""
        labels = [0] * (n + 1)
        for part in spec.replace(" ", "").split("+"):
            m = re.fullmatch(r"(?:(\d+)\*)?L(\d+)", part)
            if not m or int(m.group(2)) > n:
                raise ValueError(f"malformed weight term {part!r}")
            labels[int(m.group(2))] += int(m.group(1) or 1)
        return cls(n, sum(labels), WeightVec(tuple(labels[1:])))

    @property
    def labels(self) -> tuple[int, ...]:
        """(k - sum Lambda_i, Lambda_1, ..., Lambda_n)."""
        c = [int(x) for x in self.finite.coords]
        return (self.k - sum(c), *c)

    def spec(self) -> str:
        return "+".join(f"{c}*L{i}" for i, c in enumerate(self.labels) if c)

    def __str__(self):
        return self.spec()


@dataclass
class MultTable:
    hw: DominantWeight
    max_depth: int
    entries: dict = field(default_factory=dict)  # (c tuple, depth) -> int

    @property
    def n(self) -> int:
        return self.hw.n

    @property
    def k(self) -> int:
        return self.hw.k

    def _key(self, mu: WeightVec) -> Optional[tuple[int, ...]]:
        diff = (self.hw.finite - mu).root_coords()
        if any(c.denominator != 1 for c in diff):
            return None
        return tuple(int(c) for c in diff)

    def mult(self, mu: WeightVec, depth: int) -> int:
        if depth > self.max_depth:
            raise InsufficientPrecision(f"depth {depth} beyond table depth {self.max_depth}")
        key = self._key(mu)
        return 0 if key is None else self.entries.get((key, depth), 0)

    def weights(self, depth: Optional[int] = None) -> list[WeightVec]:
        """Finite parts that occur (at ``depth``, or at any depth)."""
        lam = self.hw.finite
        cs = sorted({c for (c, d) in self.entries if depth is None or d == depth})
        return [lam - WeightVec.from_root_coords(c) for c in cs]

    def dimension(self, depth: int) -> int:
        return sum(m for (c, d), m in self.entries.items() if d == depth)

    # --- cache format ---

    def to_dict(self) -> dict:
        lam = self.hw.finite
        entries = []
        for (c, d), m in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mu = lam - WeightVec.from_root_coords(c)
            entries.append({"weight": [str(x) for x in mu.root_coords()], "depth": d, "mult": str(m)})
        return {
            "params": _params(self.hw, self.max_depth),
            "version": CACHE_VERSION,
            "cartan": [list(r) for r in context(self.n).cartan],
            "entries": entries,
        }

    @classmethod
    def from_dict(cls, data: dict, hw: DominantWeight, max_depth: int) -> "MultTable":
        if data.get("version") != CACHE_VERSION or data.get("params") != _params(hw, max_depth):
            raise ValueError("cache parameters do not match")
        if data.get("cartan") != [list(r) for r in context(hw.n).cartan]:
            raise ValueError("cache Cartan matrix does not match")
        table = cls(hw, max_depth)
        lam = hw.finite
        for e in data["entries"]:
            mu = WeightVec.from_root_coords([Fraction(x) for x in e["weight"]])
            key = table._key(mu)
            if key is None:
                raise ValueError("cached weight outside Lambda + Q")
            table.entries[(key, int(e["depth"]))] = int(e["mult"])
        return table


def _params(hw: DominantWeight, max_depth: int) -> dict:
    return {"n": hw.n, "k": hw.k, "labels": list(hw.labels), "max_depth": max_depth}


def _region(hw: DominantWeight, depth: int) -> list[tuple[int, ...]]:
    """Candidate c at ``depth``: |mu|^2 - 2kd <= |Lambda|^2 and c_i + d >= 0.

    Every weight of L(hw) lies in this region (its norm cannot exceed that of
    the highest weight, and hw minus it is a nonnegative root combination).
    """
    n, k = hw.n, hw.k
    A = context(n).cartan
    lam = hw.finite
    # |Lambda - c.alpha|^2 = |Lambda|^2 - 2 sum c_i Lambda_i + c.A.c
    M = [[2 * A[i][j] for j in range(n)] for i in range(n)]
    L = [-2 * lam.coords[i] for i in range(n)]
    return [c for c, _ in enumerate_quadratic(M, L, 2 * k * depth, lower=[-depth] * n)]


def freudenthal_table(
    hw: Union[HighestWeight, DominantWeight],
    max_depth: int,
    cache_dir: Union[None, str, Path] = None,
) -> MultTable:
    """Multiplicities of every weight of L(hw) with depth <= max_depth.

    With ``cache_dir`` (or $QCHAR_CACHE_DIR) the table is read from / written to
    a JSON document; a corrupt or mismatched cache is ignored and rebuilt.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    hw = DominantWeight.of(hw)
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    path = None
    if cache_dir:
        path = Path(cache_dir) / _cache_name(hw, max_depth)
        if path.exists():
            try:
                return MultTable.from_dict(json.loads(path.read_text()), hw, max_depth)
            except (ValueError, KeyError, TypeError) as exc:
                log.warning("ignoring cache %s: %s", path, exc)
    table = _build(hw, max_depth)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_dict()))
        tmp.replace(path)
    return table


def _cache_name(hw: DominantWeight, max_depth: int) -> str:
    return f"mult_n{hw.n}_" + "_".join(str(x) for x in hw.labels) + f"_d{max_depth}.json"


def _build(hw: DominantWeight, max_depth: int, order_key=None) -> MultTable:
    n, k = hw.n, hw.k
    ctx = context(n)
    h = ctx.dual_coxeter
    G = ctx.inv_cartan_fund
    A = ctx.cartan
    lam = [Fraction(x) for x in hw.finite.coords]
    rho = [Fraction(1)] * n

    def fund(c):
        # fundamental coordinates of mu = Lambda - c.alpha
        return [lam[i] - sum(A[i][j] * c[j] for j in range(n)) for i in range(n)]

    def norm(v):
        return sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n))

    lam_norm = norm(lam)
    top = norm([lam[i] + rho[i] for i in range(n)])
    pos = ctx.positive_roots
    real = [(a, 0) for a in pos] + [
        (tuple(s * x for x in a), m) for m in range(1, max_depth + 1) for a in pos for s in (1, -1)
    ]

    entries: dict = {}
    for d in range(max_depth + 1):
        region = _region(hw, d)
        # highest finite weights first: smallest sum of c
        region.sort(key=order_key or (lambda c: (sum(c), c)))
        for c in region:
            if d == 0 and not any(c):
                entries[(c, 0)] = 1
                continue
            mu = fund(c)
            total = Fraction(0)
            for a, m in real:
                if m > d:
                    continue
                # <mu, a> with a in alpha-coordinates: sum a_i mu_i
                pair = sum(a[i] * mu[i] for i in range(n))
                j = 1
                while True:
                    dd = d - j * m
                    if dd < 0:
                        break
                    cc = tuple(c[i] - j * a[i] for i in range(n))
                    mm = fund(cc)
                    # the string of admissible j is an interval containing 0
                    if norm(mm) - 2 * k * dd > lam_norm:
                        break
                    mult = entries.get((cc, dd), 0)
                    if mult:
                        total += (pair + 2 * j + k * m) * mult
                    j += 1
            for m in range(1, d + 1):
                j = 1
                while d - j * m >= 0:
                    mult = entries.get((c, d - j * m), 0)
                    total += n * k * m * mult
                    j += 1
            denom = top - norm([mu[i] + rho[i] for i in range(n)]) + 2 * (k + h) * d
            if denom <= 0:
                raise ConsistencyError(f"nonpositive Freudenthal denominator at c={c}, depth {d}")
            value = 2 * total / denom
            if value.denominator != 1 or value < 0:
                raise ConsistencyError(f"non-integral multiplicity {value} at c={c}, depth {d}")
            if value:
                entries[(c, d)] = int(value)
    return MultTable(hw, max_depth, entries)


def weight_trace(table: MultTable, mu: WeightVec, order: Optional[int] = None) -> QSeries:
    """Tr q^D on the mu-weight space: sum_d mult(mu, d) q^d."""
    order = table.max_depth if order is None else order
    if order > table.max_depth:
        raise InsufficientPrecision(f"order {order} beyond table depth {table.max_depth}")
    key = table._key(mu)
    if key is None:
        return QSeries.zero(order)
    return QSeries({d: table.entries.get((key, d), 0) for d in range(order + 1)}, order)


def string_exponent(hw: Union[HighestWeight, DominantWeight], mu: WeightVec) -> Fraction:
    """<L+rho,L+rho>/2(k+h) - <rho,rho>/2h - <mu,mu>/2k."""
    ctx = context(hw.n)
    lam = hw.finite
    lr = lam + ctx.rho
    h = ctx.dual_coxeter
    return (
        inner_product(lr, lr) / (2 * (hw.k + h))
        - ctx.weyl_rho_normsq / (2 * h)
        - inner_product(mu, mu) / (2 * hw.k)
    )


def string_function(table: MultTable, mu: WeightVec) -> QSeries:
    return weight_trace(table, mu).shift(string_exponent(table.hw, mu))


def class_representatives(hw: Union[HighestWeight, DominantWeight]) -> list[tuple[int, ...]]:
    """Residues c in {0..k-1}^n labelling the classes Lambda + sum c_i alpha_i mod kQ."""
    return list(itertools.product(range(hw.k), repeat=hw.n))


def min_norm_representative(hw: Union[HighestWeight, DominantWeight], residues: Sequence[int]) -> WeightVec:
    """The shortest mu in Lambda + sum c_i alpha_i + kQ (ties: smallest alpha-coordinates)."""
    n, k = hw.n, hw.k
    mu0 = hw.finite + WeightVec.from_root_coords(residues)
    A = context(n).cartan
    # |mu0 + k a|^2 - |mu0|^2 = k^2 a.A.a + 2k sum a_i mu0_i
    M = [[2 * k * k * A[i][j] for j in range(n)] for i in range(n)]
    L = [2 * k * mu0.coords[i] for i in range(n)]
    best = min((v, a) for a, v in enumerate_quadratic(M, L, 0))
    return mu0 + WeightVec.from_root_coords(best[1]) * k


def parafermionic_trace(
    table: MultTable,
    classes: Optional[Iterable[Sequence[int]]] = None,
    representative: Optional[WeightVec] = None,
) -> QSeries:
    """Tr q^{D - D^h} on the parafermionic space, summed over the given classes.

    Each class contributes (q)_inf^n q^{(|Lambda|^2 - |mu|^2)/2k} Tr q^D|L_mu for
    a representative mu (the shortest one unless ``representative`` is given
    for a single class).  The result must have nonnegative integer coefficients.
    """
    hw = table.hw
    lam = hw.finite
    if representative is not None:
        reps = [representative]
    else:
        classes = class_representatives(hw) if classes is None else classes
        reps = [min_norm_representative(hw, c) for c in classes]
    parts = []
    for mu in reps:
        shift = (inner_product(lam, lam) - inner_product(mu, mu)) / (2 * hw.k)
        tr = weight_trace(table, mu).shift(shift)
        parts.append(tr * power(euler_inf(tr.order), hw.n))
    order = min(p.order for p in parts)
    acc = SeriesAccumulator(order)
    for p in parts:
        acc.add(p)
    result = acc.result()
    bad = [(e, c) for e, c in result.items() if c < 0]
    if bad:
        raise ConsistencyError(f"negative coefficient in parafermionic trace: {bad[0]}")
    return result
