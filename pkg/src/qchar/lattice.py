"""Root and weight lattices of sl(n+1), with exact rational arithmetic.

Weights are stored in the fundamental-weight basis.  All public indices are
1-based, so ``simple_root(n, 1)`` is alpha_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence


class LatticeError(ValueError):
    """Rank mismatch or an index outside the supported range."""


def cartan_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix of sl(n+1) (type A_n)."""
    if n < 1:
        raise LatticeError(f"rank must be positive, got {n}")
    return tuple(
        tuple(2 if l == m else (-1 if abs(l - m) == 1 else 0) for m in range(n))
        for l in range(n)
    )


def exact_inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    size = len(matrix)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == r)) for i in range(size)]
        for r, row in enumerate(matrix)
    ]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise LatticeError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = 1 / aug[col][col]
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


@dataclass(frozen=True)
class LatticeContext:
    """Cartan data for A_n."""

    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise LatticeError(f"rank must be positive, got {self.rank}")

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        return cartan_matrix(self.rank)

    @cached_property
    def inv_cartan_fund(self) -> tuple[tuple[Fraction, ...], ...]:
        # <Lambda_i, Lambda_j> = min(i, j) - ij/(n+1)
        h = self.rank + 1
        return tuple(
            tuple(Fraction(min(i, j)) - Fraction(i * j, h) for j in range(1, h))
            for i in range(1, h)
        )

    @property
    def dual_coxeter(self) -> int:
        return self.rank + 1

    @property
    def dim_g(self) -> int:
        return (self.rank + 1) ** 2 - 1

    @cached_property
    def rho(self) -> "WeightVec":
        return WeightVec(tuple(Fraction(1) for _ in range(self.rank)))

    @cached_property
    def weyl_rho_normsq(self) -> Fraction:
        return inner_product(self.rho, self.rho)

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots of A_n as alpha-coordinate vectors (alpha_a + ... + alpha_b)."""
        n = self.rank
        return tuple(
            tuple(int(a <= i <= b) for i in range(n))
            for a in range(n)
            for b in range(a, n)
        )

    def check_identity(self) -> bool:
        prod = mat_mul(self.cartan, self.inv_cartan_fund)
        return all(prod[i][j] == int(i == j) for i in range(self.rank) for j in range(self.rank))


@lru_cache(maxsize=None)
def context(n: int) -> LatticeContext:
    return LatticeContext(n)


@dataclass(frozen=True, order=True)
class WeightVec:
    """A weight of sl(n+1) in the fundamental-weight basis."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, n: int) -> "WeightVec":
        return cls((0,) * n)

    @classmethod
    def fundamental(cls, n: int, i: int) -> "WeightVec":
        _check_index(n, i)
        return cls(tuple(int(m == i) for m in range(1, n + 1)))

    @classmethod
    def simple_root(cls, n: int, i: int) -> "WeightVec":
        _check_index(n, i)
        return cls(context(n).cartan[i - 1])

    @classmethod
    def from_root_coords(cls, coords: Sequence) -> "WeightVec":
        n = len(coords)
        A = context(n).cartan
        return cls(tuple(sum(A[i][j] * Fraction(coords[j]) for j in range(n)) for i in range(n)))

    def root_coords(self) -> tuple[Fraction, ...]:
        G = context(self.n).inv_cartan_fund
        return tuple(sum(G[i][j] * self.coords[j] for j in range(self.n)) for i in range(self.n))

    def in_weight_lattice(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def in_root_lattice(self) -> bool:
        return all(c.denominator == 1 for c in self.root_coords())

    def _same_rank(self, other: "WeightVec"):
        if self.n != other.n:
            raise LatticeError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "WeightVec") -> "WeightVec":
        self._same_rank(other)
        return WeightVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "WeightVec") -> "WeightVec":
        self._same_rank(other)
        return WeightVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "WeightVec":
        return WeightVec(tuple(-a for a in self.coords))

    def __mul__(self, scalar) -> "WeightVec":
        return WeightVec(tuple(a * scalar for a in self.coords))

    __rmul__ = __mul__

    def reflect(self, i: int) -> "WeightVec":
        """Simple Weyl reflection s_i."""
        return self - WeightVec.simple_root(self.n, i) * self.coords[i - 1]

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _check_index(n: int, i: int):
    if not 1 <= i <= n:
        raise LatticeError(f"index {i} outside 1..{n}")


def inner_product(u: WeightVec, v: WeightVec) -> Fraction:
    u._same_rank(v)
    G = context(u.n).inv_cartan_fund
    return sum(
        (u.coords[i] * G[i][j] * v.coords[j] for i in range(u.n) for j in range(u.n)),
        Fraction(0),
    )


def min_matrix_entry(s: int, t: int, k: int) -> int:
    """B^{st} = min(s, t) for 1 <= s, t <= k-1."""
    _check_slk(s, t, k)
    return min(s, t)


def inv_cartan_slk_entry(s: int, t: int, k: int) -> Fraction:
    """Entry of the inverse Cartan matrix of sl(k): min(s,t) - st/k."""
    _check_slk(s, t, k)
    return Fraction(min(s, t)) - Fraction(s * t, k)


def _check_slk(s: int, t: int, k: int):
    if k < 2:
        raise LatticeError(f"sl(k) needs k >= 2, got {k}")
    if not (1 <= s <= k - 1 and 1 <= t <= k - 1):
        raise LatticeError(f"indices ({s},{t}) outside 1..{k - 1}")


# --- positive definite quadratic forms -------------------------------------


def _ldl(M: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """M = U^T diag(D) U with U unit upper triangular."""
    size = len(M)
    U = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    D = [Fraction(0)] * size
    for i in range(size):
        D[i] = M[i][i] - sum(U[l][i] ** 2 * D[l] for l in range(i))
        if D[i] <= 0:
            raise LatticeError("quadratic form is not positive definite")
        for j in range(i + 1, size):
            U[i][j] = (M[i][j] - sum(U[l][i] * U[l][j] * D[l] for l in range(i))) / D[i]
    return U, D


def enumerate_quadratic(
    M: Sequence[Sequence],
    L: Sequence,
    bound,
    lower: Optional[Sequence[Optional[int]]] = None,
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield every integer x with (1/2) x.M.x + L.x <= bound, with its value.

    ``M`` must be symmetric positive definite.  ``lower[i]``, when not None,
    is an inclusive lower bound on ``x[i]``.  Candidate ranges come from a
    completed-square (Fincke-Pohst) decomposition; every emitted point is
    checked exactly, and the float ranges are widened so none is missed.
    """
    size = len(M)
    M = [[Fraction(x) for x in row] for row in M]
    L = [Fraction(x) for x in L]
    bound = Fraction(bound)
    lower = list(lower) if lower is not None else [None] * size
    if size == 0:
        if bound >= 0:
            yield (), Fraction(0)
        return
    U, D = _ldl(M)
    # minimiser of the form: c = -M^{-1} L
    Minv = exact_inverse(M)
    c = [-sum(Minv[i][j] * L[j] for j in range(size)) for i in range(size)]
    shift = sum(c[i] * M[i][j] * c[j] for i in range(size) for j in range(size)) / 2
    radius = bound + shift  # (1/2)(x-c).M.(x-c) <= radius
    if radius < 0:
        return
    x = [0] * size
    y = [Fraction(0)] * size

    def value(xs):
        return (
            sum(xs[i] * M[i][j] * xs[j] for i in range(size) for j in range(size)) / 2
            + sum(L[i] * xs[i] for i in range(size))
        )

    def rec(i: int, rem: Fraction):
        tail = sum((U[i][j] * y[j] for j in range(i + 1, size)), Fraction(0))
        # (1/2) D_i (y_i + tail)^2 <= rem, y_i = x_i - c_i
        centre = c[i] - tail
        half = math.sqrt(float(2 * rem / D[i]))
        lo = math.floor(float(centre) - half) - 1
        hi = math.ceil(float(centre) + half) + 1
        if lower[i] is not None:
            lo = max(lo, lower[i])
        for xi in range(lo, hi + 1):
            z = xi - c[i] + tail
            used = D[i] * z * z / 2
            if used > rem:
                continue
            x[i] = xi
            y[i] = xi - c[i]
            if i == 0:
                yield tuple(x), value(x)
            else:
                yield from rec(i - 1, rem - used)

    for point, val in rec(size - 1, radius):
        if val <= bound:
            yield point, val


def lattice_vectors_by_norm(
    n: int, k, bound, linear: Optional[WeightVec] = None
) -> list[WeightVec]:
    """Root-lattice vectors alpha with (k/2)<alpha,alpha> + <alpha, linear> <= bound.

    Returned sorted by their alpha-coordinates.
    """
    A = context(n).cartan
    M = [[Fraction(k) * A[i][j] for j in range(n)] for i in range(n)]
    # <alpha, linear> = sum_i a_i * (fundamental coordinate i of linear)
    L = list(linear.coords) if linear is not None else [0] * n
    pts = sorted(p for p, _ in enumerate_quadratic(M, L, bound))
    return [WeightVec.from_root_coords(p) for p in pts]
