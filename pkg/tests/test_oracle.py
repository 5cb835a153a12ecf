import json
import logging
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchar.fermionic import HighestWeight
from qchar.lattice import WeightVec, inner_product
from qchar.oracle import (
    ConsistencyError,
    DominantWeight,
    MultTable,
    _build,
    _cache_name,
    freudenthal_table,
    min_norm_representative,
    parafermionic_trace,
    string_exponent,
    string_function,
    weight_trace,
)
from qchar.qseries import InsufficientPrecision, equal_to_order

from oracles import level_one_mult


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("QCHAR_CACHE_DIR", raising=False)


# --- level one: every weight space is a Fock space -----------------------------------


@pytest.mark.parametrize("spec,n", [("L0", 1), ("L1", 1), ("L0", 2), ("L2", 2), ("L0", 3)])
def test_level_one_multiplicities(spec, n):
    hw = DominantWeight.parse(spec, n)
    depth = 5 if n < 3 else 3
    table = freudenthal_table(hw, depth)
    lam = hw.finite
    for (c, d), m in table.entries.items():
        mu = lam - WeightVec.from_root_coords(c)
        half = (inner_product(mu, mu) - inner_product(lam, lam)) / 2
        assert m == level_one_mult(half, d, n), (c, d)


def test_level_one_grade_dimensions():
    # sum_m q^{m^2} / (q)_inf, counted independently of the recursion
    table = freudenthal_table(HighestWeight.vacuum(1, 1), 5)
    assert [table.dimension(d) for d in range(6)] == [1, 3, 4, 7, 13, 19]


def test_highest_weight_has_multiplicity_one():
    for spec, n in [("2*L0", 1), ("L0+L1", 2), ("L1+L2", 2), ("3*L0", 2)]:
        hw = DominantWeight.parse(spec, n)
        table = freudenthal_table(hw, 2)
        assert table.mult(hw.finite, 0) == 1
        assert hw.finite in table.weights(0)


def test_vacuum_grade_one_is_adjoint():
    # the depth-one space of the level-k vacuum is the adjoint representation
    for n, k in [(1, 2), (2, 2), (2, 3), (3, 1)]:
        table = freudenthal_table(HighestWeight.vacuum(n, k), 1)
        assert table.dimension(1) == (n + 1) ** 2 - 1


@pytest.mark.parametrize("spec,n,depth", [("2*L0", 2, 6), ("L0+L1", 2, 6), ("L1+L2", 2, 6), ("L0+L2", 3, 4)])
def test_finite_weyl_invariance(spec, n, depth):
    table = freudenthal_table(DominantWeight.parse(spec, n), depth)
    for d in range(depth + 1):
        for mu in table.weights(d):
            m = table.mult(mu, d)
            for nu in (mu.reflect(i) for i in range(1, n + 1)):
                assert table.mult(nu, d) == m, (mu, nu, d)


def test_translation_invariance():
    # t_alpha moves (mu, d) to (mu + k alpha, d + <mu, alpha> + k|alpha|^2/2)
    hw = DominantWeight.parse("L0+L1", 2)
    table = freudenthal_table(hw, 7)
    a = WeightVec.simple_root(2, 1)
    for d in range(4):
        for mu in table.weights(d):
            shift = inner_product(mu, a) + hw.k * inner_product(a, a) / 2
            target = d + shift
            if 0 <= target <= 7:
                assert table.mult(mu + a * hw.k, int(target)) == table.mult(mu, d)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["2*L0", "L0+L1", "L1+L2", "3*L0"]), st.integers(0, 2**32))
def test_recursion_independent_of_visit_order(spec, seed):
    hw = DominantWeight.parse(spec, 2)
    rng = random.Random(seed)
    salt = {}

    def key(c):
        # keep the sum of c increasing (the recursion needs higher weights first) and shuffle ties
        return (sum(c), salt.setdefault(c, rng.random()))

    assert _build(hw, 4, order_key=key).entries == freudenthal_table(hw, 4).entries


# --- cache ------------------------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    hw = DominantWeight.parse("L0+L1", 2)
    first = freudenthal_table(hw, 3, cache_dir=tmp_path)
    path = tmp_path / _cache_name(hw, 3)
    assert path.name == "mult_n2_1_1_0_d3.json"
    data = json.loads(path.read_text())
    assert data["params"] == {"n": 2, "k": 2, "labels": [1, 1, 0], "max_depth": 3}
    assert {"weight", "depth", "mult"} <= set(data["entries"][0])
    assert freudenthal_table(hw, 3, cache_dir=tmp_path).entries == first.entries


def test_cache_is_used(tmp_path):
    hw = DominantWeight.parse("2*L0", 1)
    table = freudenthal_table(hw, 2, cache_dir=tmp_path)
    path = tmp_path / _cache_name(hw, 2)
    data = json.loads(path.read_text())
    data["entries"][0]["mult"] = "7"
    path.write_text(json.dumps(data))
    assert freudenthal_table(hw, 2, cache_dir=tmp_path).mult(hw.finite, 0) == 7
    assert table.mult(hw.finite, 0) == 1


def test_corrupt_cache_is_rebuilt(tmp_path, caplog):
    hw = DominantWeight.parse("2*L0", 1)
    path = tmp_path / _cache_name(hw, 2)
    path.write_text("{not json")
    with caplog.at_level(logging.WARNING):
        # a JSON decode error is a ValueError
        table = freudenthal_table(hw, 2, cache_dir=tmp_path)
    assert "ignoring cache" in caplog.text
    assert table.mult(hw.finite, 0) == 1
    assert json.loads(path.read_text())["version"] == 1


def test_mismatched_cache_is_ignored(tmp_path, caplog):
    a = DominantWeight.parse("2*L0", 1)
    b = DominantWeight.parse("L0+L1", 1)
    freudenthal_table(b, 2, cache_dir=tmp_path)
    (tmp_path / _cache_name(a, 2)).write_text((tmp_path / _cache_name(b, 2)).read_text())
    with caplog.at_level(logging.WARNING):
        table = freudenthal_table(a, 2, cache_dir=tmp_path)
    assert "do not match" in caplog.text
    assert table.entries == freudenthal_table(a, 2).entries


def test_env_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("QCHAR_CACHE_DIR", str(tmp_path / "sub"))
    freudenthal_table(DominantWeight.parse("L0", 1), 1)
    assert (tmp_path / "sub" / "mult_n1_1_0_d1.json").exists()


# --- string functions and traces --------------------------------------------------------


def test_string_function_exponents():
    hw = HighestWeight.vacuum(2, 2)
    assert string_exponent(hw, WeightVec.zero(2)) == Fraction(-2, 15)
    # Lambda0 + Lambda1 at its highest weight
    assert string_exponent(HighestWeight(2, 2, 1, 1, 1), WeightVec.fundamental(2, 1)) == Fraction(-1, 30)


def test_string_function_symmetry():
    t1 = freudenthal_table(HighestWeight(2, 2, 1, 1, 1), 6)
    t2 = freudenthal_table(HighestWeight(2, 2, 1, 2, 1), 6)
    s1 = string_function(t1, WeightVec.fundamental(2, 1))
    s2 = string_function(t2, WeightVec.fundamental(2, 2))
    assert s1 == s2
    assert s1.valuation() == Fraction(-1, 30)


def test_sl2_level_one_string_function():
    # c^{L0}_0 = q^{-1/24} / (q)_inf
    s = string_function(freudenthal_table(HighestWeight.vacuum(1, 1), 6), WeightVec.zero(1))
    assert [s.coefficient(Fraction(-1, 24) + m) for m in range(7)] == [1, 1, 2, 3, 5, 7, 11]


@pytest.mark.parametrize("residues", [(0, 0), (1, 0), (1, 1), (0, 1)])
def test_trace_independent_of_representative(residues):
    hw = HighestWeight(2, 2, 1, 1, 1)
    lam = hw.finite
    base = min_norm_representative(hw, residues)
    reps = [base + WeightVec.from_root_coords(a) * hw.k for a in ([1, 0], [0, 1], [-1, 1])]
    # a longer representative loses (|mu|^2 - |Lambda|^2)/2k of the table depth
    loss = max(inner_product(mu, mu) - inner_product(lam, lam) for mu in reps) / (2 * hw.k)
    table = freudenthal_table(hw, 6 + math.ceil(loss))
    via_min = parafermionic_trace(table, [residues])
    for mu in reps:
        assert equal_to_order(via_min, parafermionic_trace(table, representative=mu), 6)


def test_min_norm_representative_is_shortest():
    hw = HighestWeight.vacuum(2, 3)
    for residues in [(0, 0), (1, 2), (2, 2), (2, 0)]:
        mu = min_norm_representative(hw, residues)
        assert all(int(x) % 3 == r for x, r in zip(mu.root_coords(), residues))
        best = inner_product(mu, mu)
        for a in range(-2, 3):
            for b in range(-2, 3):
                nu = mu + WeightVec.from_root_coords([3 * a, 3 * b])
                assert inner_product(nu, nu) >= best


def test_weight_trace_edges():
    table = freudenthal_table(HighestWeight.vacuum(2, 2), 3)
    assert weight_trace(table, WeightVec.fundamental(2, 1)).terms == {}
    with pytest.raises(InsufficientPrecision):
        weight_trace(table, WeightVec.zero(2), 4)
    with pytest.raises(InsufficientPrecision):
        table.mult(WeightVec.zero(2), 4)


def test_negative_trace_is_reported():
    hw = DominantWeight.parse("L0", 1)
    truncated = MultTable(hw, 3, {((0,), 0): 1})
    with pytest.raises(ConsistencyError):
        parafermionic_trace(truncated, [(0,)])


# --- weights ----------------------------------------------------------------------------


def test_dominant_weight_parse():
    w = DominantWeight.parse("L1+L2", 2)
    assert (w.k, w.labels, w.spec()) == (2, (0, 1, 1), "1*L1+1*L2")
    assert DominantWeight.parse("2*L0 + L1", 2).labels == (2, 1, 0)
    assert DominantWeight.of(HighestWeight(2, 3, 1, 2, 2)) == DominantWeight(2, 3, WeightVec((0, 2)))
    assert str(w) == "1*L1+1*L2"


@pytest.mark.parametrize("bad", ["L3", "X1", "", "L1+-L2"])
def test_dominant_weight_rejects(bad):
    with pytest.raises(ValueError):
        DominantWeight.parse(bad, 2)


def test_dominant_weight_validation():
    with pytest.raises(ValueError):
        DominantWeight(2, 1, WeightVec((1, 1)))
    with pytest.raises(ValueError):
        DominantWeight(2, 2, WeightVec((Fraction(1, 2), 0)))
    with pytest.raises(ValueError):
        freudenthal_table(DominantWeight.parse("L0", 1), -1)
