import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qchar.fermionic import (
    DomainError,
    HighestWeight,
    OccupationTuple,
    durfee_rhs,
    norm_shift,
    parafermionic_kernel,
    parafermionic_sum,
    principal_kernel,
    principal_linear,
    principal_sum,
    prop01_sum,
    quadratic_value,
    restriction_residues,
    two_variable_sum,
)
from qchar.lattice import WeightVec, enumerate_quadratic, inner_product, inv_cartan_slk_entry
from qchar.qseries import QSeries, equal_to_order, euler_inf_inv

from oracles import gordon_counts, multipartition_counts, partition_counts, squares_sum_counts


def ints(s: QSeries, upto: int) -> list[int]:
    return [s.coefficient(m) for m in range(upto + 1)]


# --- weights ------------------------------------------------------------------------


def test_parse_and_render():
    hw = HighestWeight.parse("1*L0+1*L1", 2)
    assert (hw.k, hw.k0, hw.j, hw.kj) == (2, 1, 1, 1)
    assert hw.spec() == "1*L0+1*L1"
    assert HighestWeight.parse("L0+L2", 2) == HighestWeight(2, 2, 1, 2, 1)
    assert HighestWeight.parse("2*L1", 1) == HighestWeight(1, 2, 0, 1, 2)
    assert HighestWeight.parse("3*L0", 2).is_vacuum


@pytest.mark.parametrize("bad", ["L1+L2", "2*X0", "L3", "", "-1*L0"])
def test_parse_rejects(bad):
    with pytest.raises(DomainError):
        HighestWeight.parse(bad, 2)


def test_validation():
    with pytest.raises(DomainError):
        HighestWeight(2, 2, 1)
    with pytest.raises(DomainError):
        HighestWeight(2, 2, 0, 3, 2)
    with pytest.raises(DomainError):
        HighestWeight(0, 1, 1)


def test_dotted_weight():
    assert HighestWeight(2, 3, 1, 1, 2).dotted() == HighestWeight(2, 2, 1, 1, 1)
    assert HighestWeight(2, 3, 2, 1, 1).dotted() == HighestWeight.vacuum(2, 2)
    assert HighestWeight.vacuum(2, 3).dotted() == HighestWeight.vacuum(2, 2)
    with pytest.raises(DomainError):
        HighestWeight.vacuum(1, 1).dotted()


def test_level_one_slots():
    hw = HighestWeight(2, 3, 1, 2, 2)
    assert [hw.j_t(t) for t in (1, 2, 3)] == [0, 2, 2]
    assert hw.finite == WeightVec((0, 2))


def test_occupation_charges():
    p = OccupationTuple.from_flat([1, 2, 0, 0, 0, 1], 2, 3)
    assert p.charges == (5, 3)
    assert p.dual_charges == ((3, 2, 0), (1, 1, 1))


# --- kernels ------------------------------------------------------------------------


@pytest.mark.parametrize("n,k", [(1, 2), (2, 3), (3, 4)])
def test_kernels_positive_definite_and_symmetric(n, k):
    for M in (principal_kernel(n, k - 1), parafermionic_kernel(n, k)):
        assert all(M[a][b] == M[b][a] for a in range(len(M)) for b in range(len(M)))
        # enumerate_quadratic raises on a form that is not positive definite
        list(enumerate_quadratic(M, [0] * len(M), 0))
    M = parafermionic_kernel(n, k)
    K = k - 1
    assert M[0][0] == 2 * inv_cartan_slk_entry(1, 1, k)
    if n >= 2:
        # colors 1 and 2, charge 1 each: A_12 (1 - 1/k)
        assert M[0][K] == -inv_cartan_slk_entry(1, 1, k)


def test_quadratic_value():
    M = [[2, 1], [1, 2]]
    assert quadratic_value(M, [1, 0], (2, 3)) == Fraction(2 * 4 + 2 * 6 + 2 * 9, 2) + 2


def test_principal_linear_term():
    hw = HighestWeight(1, 3, 1, 1, 2)
    # sum_{s > k0} (s - k0) p^(s) over s = 1..3
    assert principal_linear(hw, 3) == [0, 1, 2]


# --- principal sums against partition counts ---------------------------------------------


def test_rogers_ramanujan_values():
    # partitions into parts differing by at least 2
    assert ints(principal_sum(HighestWeight.vacuum(1, 1), 10), 10) == [1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6]


@pytest.mark.parametrize("K", [1, 2, 3])
def test_gordon_identities(K):
    for k0 in range(K + 1):
        hw = HighestWeight(1, K, k0, None if k0 == K else 1, K - k0)
        assert ints(principal_sum(hw, 12), 12) == gordon_counts(12, K, k0), (K, k0)


def test_principal_K_zero_is_one():
    assert principal_sum(HighestWeight.vacuum(2, 2), 5, K=0) == QSeries.one(5)
    with pytest.raises(DomainError):
        principal_sum(HighestWeight.vacuum(2, 2), 5, K=3)


# --- parafermionic sums --------------------------------------------------------------


def distinct_half_odd(N2: int, offset: Fraction) -> dict:
    """Coefficients of prod_{m >= 1} (1 + q^{m - offset}) up to q^{N2/2}, by subsets."""
    parts = [m - offset for m in range(1, N2 + 2) if m - offset <= Fraction(N2, 2)]
    out: dict = {}
    for r in range(len(parts) + 1):
        for sub in itertools.combinations(parts, r):
            e = sum(sub, Fraction(0))
            if e <= Fraction(N2, 2):
                out[e] = out.get(e, 0) + 1
    return out


def test_level_two_sl2_free_fermion():
    # kernel 1: sum q^{p^2/2}/(q)_p = prod (1 + q^{m - 1/2})
    s = parafermionic_sum(HighestWeight.vacuum(1, 2), 8)
    assert s.terms == distinct_half_odd(16, Fraction(1, 2))
    # with L1: sum q^{p^2/2 - p/2}/(q)_p = prod_{m >= 0} (1 + q^m)
    t = parafermionic_sum(HighestWeight(1, 2, 1, 1, 1), 8)
    expected = {e: 2 * c for e, c in distinct_half_odd(16, Fraction(0)).items() if e.denominator == 1}
    assert t.terms == expected


def test_classes_partition_the_sum():
    for hw in (HighestWeight.vacuum(2, 2), HighestWeight(2, 3, 2, 1, 1)):
        total = parafermionic_sum(hw, 6)
        parts = [parafermionic_sum(hw, 6, restriction=c) for c in itertools.product(range(hw.k), repeat=2)]
        acc = parts[0]
        for p in parts[1:]:
            acc = acc + p
        assert acc == total


def test_parafermionic_needs_level_two():
    with pytest.raises(DomainError):
        parafermionic_sum(HighestWeight.vacuum(1, 1), 3)


def test_restriction_domain():
    hw = HighestWeight.vacuum(2, 2)
    with pytest.raises(DomainError):
        restriction_residues(hw, WeightVec.fundamental(2, 1))
    with pytest.raises(DomainError):
        restriction_residues(hw, (1,))


@given(
    st.sampled_from([(1, 2), (2, 2), (2, 3), (3, 2)]),
    st.data(),
)
def test_restriction_is_mod_k(nk, data):
    n, k = nk
    hw = HighestWeight(n, k, k - 1, 1, 1)
    c = data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))
    a = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    mu = hw.finite + WeightVec.from_root_coords(c)
    moved = mu + WeightVec.from_root_coords(a) * k
    assert restriction_residues(hw, mu) == restriction_residues(hw, moved) == tuple(x % k for x in c)
    # the norm shift moves by <mu, a> + (k/2)|a|^2
    av = WeightVec.from_root_coords(a)
    assert norm_shift(hw, moved) - norm_shift(hw, mu) == inner_product(mu, av) + Fraction(k, 2) * inner_product(av, av)


# --- Durfee rectangles and the two-variable sum ----------------------------------------


@pytest.mark.parametrize("const", range(-3, 4))
def test_durfee_identity(const):
    assert ints(durfee_rhs(const, 25), 25) == partition_counts(25)


def test_durfee_against_product():
    assert equal_to_order(durfee_rhs(2, 40), euler_inf_inv(40), 40)


def test_sl2_level_one_vacuum_character():
    # sum_m q^{m^2} / (q)_inf
    sq = squares_sum_counts(12)
    p = partition_counts(12)
    expected = [sum(sq.get(e, 0) * p[m - e] for e in range(m + 1)) for m in range(13)]
    assert ints(prop01_sum(1, 1, 12), 12) == expected
    assert expected[:5] == [1, 3, 4, 7, 13]
    assert prop01_sum(1, 1, 12) == two_variable_sum(12)


def test_two_variable_sum_small():
    assert ints(two_variable_sum(3), 3) == [1, 3, 4, 7]


def test_prop01_sl3_level_one_is_a2_theta_over_boson():
    # 1/(q)_inf^2 times the A2 lattice theta sum: 1 + 6q + 6q^3 + 6q^4 + ...
    s = prop01_sum(2, 1, 4)
    theta = {0: 1, 1: 6, 2: 0, 3: 6, 4: 6}
    p2 = multipartition_counts(4, 2)
    assert ints(s, 4) == [sum(theta[e] * p2[m - e] for e in range(m + 1)) for m in range(5)]
