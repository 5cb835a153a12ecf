"""Named cross-check suites, each producing a machine-readable ``CheckReport``.

A suite walks a parameter grid and compares two independently computed
q-series case by case with ``equal_to_order``.  The first disagreement
stops the suite and becomes the report's witness, together with a command
line that reruns exactly that case.  A comparison that asks for terms
beyond what one side was computed to is reported as
``insufficient-precision``, never as a mismatch.
"""

from __future__ import annotations

import itertools
import json
import math
import shlex
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

from . import known_tables
from .fermionic import (
    HighestWeight,
    durfee_rhs,
    fermionic_sum,
    norm_shift,
    parafermionic_sum,
    principal_sum,
    prop01_sum,
    two_variable_sum,
)
from .lattice import WeightVec, context, exact_inverse, inner_product, inv_cartan_slk_entry, cartan_matrix
from .oracle import (
    DominantWeight,
    class_representatives,
    freudenthal_table,
    min_norm_representative,
    parafermionic_trace,
    string_function,
    weight_trace,
)
from .qpbasis import (
    PARAFERMIONIC,
    PRINCIPAL,
    AdmissibilityContext,
    enumerate_basis,
    format_charge_type,
    format_color_type,
)
from .qseries import (
    InsufficientPrecision,
    QSeries,
    as_fraction,
    equal_to_order,
    euler_inf_inv,
    power,
)
from .theta import assemble_character, special_character_L1L2, theta_series

PASS = "pass"
FAIL = "fail"
PRECISION = "insufficient-precision"

# (n, k) grids for the census, oracle and character comparisons.
CENSUS_GRID = ((1, 2), (1, 3), (2, 2), (2, 3))
ORACLE_GRID = ((1, 2), (1, 3), (2, 2))
CHARACTER_GRID = ((1, 1), (1, 2), (2, 2))


class UnknownSuite(KeyError):
    pass


@dataclass
class CheckReport:
    suite: str
    params: dict
    order: Optional[str]
    status: str
    witness: Optional[dict] = None
    reproduce: Optional[str] = None
    cases: int = 0
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.status != PASS and self.witness is None:
            raise ValueError("a failing report must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "order": self.order,
            "status": self.status,
            "cases": self.cases,
        }
        if self.witness is not None:
            out["witness"] = self.witness
            out["reproduce"] = self.reproduce
        if self.notes:
            out["notes"] = self.notes
        return out


def reports_to_json(reports: list[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


# --- plumbing -------------------------------------------------------------------


@dataclass
class _Case:
    """One comparison: ``run()`` returns None on agreement or a witness dict."""

    label: dict
    run: Callable[[], Optional[dict]]


def _series_case(label: dict, left: Callable[[], QSeries], right: Callable[[], QSeries], order) -> _Case:
    def run():
        a, b = left(), right()
        cmp = equal_to_order(a, b, order)
        if cmp:
            return None
        return {"exponent": str(cmp.exponent), "left": cmp.left, "right": cmp.right}

    return _Case(label, run)


def _weights(params: dict, n: int, k: int) -> list[HighestWeight]:
    if "weight" in params:
        return [HighestWeight.parse(params["weight"], n)]
    out = [HighestWeight.vacuum(n, k)]
    if k >= 2:
        out.append(HighestWeight(n, k, k - 1, 1, 1))
    return out


def _pairs(params: dict, grid) -> list[tuple[int, int]]:
    if "n" in params and "k" in params:
        return [(int(params["n"]), int(params["k"]))]
    return [
        (n, k)
        for n, k in grid
        if ("n" not in params or n == int(params["n"])) and ("k" not in params or k == int(params["k"]))
    ]


def _reproduce(suite: str, label: dict, order) -> str:
    words = ["qchar", "verify", "--suite", suite]
    extra = []
    for key, value in label.items():
        if key in ("n", "k", "weight"):
            words += [f"--{key}", str(value)]
        elif key != "check":
            extra.append(f"{key}={value}")
    for item in extra:
        words += ["--param", item]
    if order is not None:
        words += ["--order", str(order)]
    return " ".join(shlex.quote(w) for w in words)


# --- suites ---------------------------------------------------------------------


def _durfee(params, order, notes) -> Iterator[_Case]:
    consts = [int(params["const"])] if "const" in params else range(-3, 4)
    for c in consts:
        yield _series_case(
            {"const": c}, lambda c=c: durfee_rhs(c, order), lambda: euler_inf_inv(order), order
        )


def _cartan_inverse(params, order, notes) -> Iterator[_Case]:
    ks = [int(params["k"])] if "k" in params else range(2, int(params.get("k_max", 12)) + 1)
    for k in ks:

        def run(k=k):
            inv = exact_inverse(cartan_matrix(k - 1))
            for s in range(1, k):
                for t in range(1, k):
                    got = inv_cartan_slk_entry(s, t, k)
                    if got != inv[s - 1][t - 1]:
                        return {"entry": [s, t], "formula": str(got), "inverse": str(inv[s - 1][t - 1])}
            return None

        yield _Case({"k": k}, run)


def _lattice_sum_box(mu: WeightVec, k: int, order: Fraction) -> QSeries:
    """sum_a q^{(k/2)|a|^2 + <a,mu>} over a box proven to hold every term <= order."""
    n = mu.n
    A = context(n).cartan
    lam_min = 4 * math.sin(math.pi / (2 * (n + 1))) ** 2 * 0.99
    m = math.sqrt(sum(float(c) ** 2 for c in mu.coords))
    # (k/2) lam |a|^2 - m |a| <= order bounds the Euclidean norm of a
    t = (m + math.sqrt(m * m + 2 * k * lam_min * max(float(order), 0))) / (k * lam_min)
    B = int(math.ceil(t)) + 1
    terms = defaultdict(int)
    for a in itertools.product(range(-B, B + 1), repeat=n):
        e = Fraction(k, 2) * sum(a[i] * A[i][j] * a[j] for i in range(n) for j in range(n))
        e += sum(a[i] * mu.coords[i] for i in range(n))
        if e <= order:
            terms[e] += 1
    return QSeries(terms, order)


def _theta_rewrite(params, order, notes) -> Iterator[_Case]:
    n, k = int(params.get("n", 2)), int(params.get("k", 2))
    mu_coords = params.get("mu", "1" + ",0" * (n - 1))
    mu = WeightVec.from_root_coords([as_fraction(x) for x in str(mu_coords).split(",")])
    shift = inner_product(mu, mu) / (2 * k)

    def rhs():
        return theta_series(mu, k, order + shift, weight_resolved=False).q_only().shift(-shift)

    yield _series_case(
        {"n": n, "k": k, "mu": ",".join(str(c) for c in mu.root_coords())},
        lambda: _lattice_sum_box(mu, k, order),
        rhs,
        order,
    )


def _table_cells(name: str, hw: HighestWeight, cells, with_charge: bool, notes) -> Iterator[_Case]:
    ctx = AdmissibilityContext(hw)
    top = max(as_fraction(c[1]) for c in cells)
    census = enumerate_basis(ctx, top, listing=True)
    computed = defaultdict(set)
    for grade, mono in census.listing():
        key = (format_color_type(mono.color_type), str(grade))
        key += (format_charge_type(mono.color_charge_type) if with_charge else None,)
        computed[key].add(mono.render())
    for ct, energy, charge, listed in cells:
        key = (ct, energy, charge)

        def run(key=key, listed=listed):
            got = computed.get(key, set())
            want = set(listed)
            diff = {
                "listed_only": sorted(want - got),
                "computed_only": sorted(got - want),
            }
            expected = known_tables.EXPECTED_DIFFS.get((name,) + key)
            if expected is not None:
                if diff == {k: sorted(v) for k, v in expected.items()}:
                    notes.append({"cell": [name, *key], "expected_diff": diff})
                    return None
                return {"cell": [name, *key], "expected_diff": expected, **diff}
            if diff["listed_only"] or diff["computed_only"]:
                return {"cell": [name, *key], **diff}
            return None

        yield _Case({"table": name, "cell": f"{ct} {energy}" + (f" {charge}" if charge else "")}, run)


def _tables(params, order, notes) -> Iterator[_Case]:
    yield from _table_cells("level2", HighestWeight.vacuum(2, 2), known_tables.LEVEL2_VACUUM, False, notes)
    yield from _table_cells("level3", HighestWeight.vacuum(2, 3), known_tables.LEVEL3_VACUUM, True, notes)


def _count_vs_fermionic(params, order, notes) -> Iterator[_Case]:
    for n, k in _pairs(params, CENSUS_GRID):
        for hw in _weights(params, n, k):
            ctx = AdmissibilityContext(hw)
            base = {"n": n, "k": k, "weight": hw.spec()}
            yield _series_case(
                {**base, "check": "principal"},
                lambda ctx=ctx: enumerate_basis(ctx, order, grading=PRINCIPAL).series(),
                lambda hw=hw: principal_sum(hw.dotted(), order, K=hw.k - 1),
                order,
            )
            yield _series_case(
                {**base, "check": "parafermionic"},
                lambda ctx=ctx: enumerate_basis(ctx, order).series(),
                lambda hw=hw: parafermionic_sum(hw, order),
                order,
            )
            for cls in class_representatives(hw):
                yield _series_case(
                    {**base, "check": f"class {cls}"},
                    lambda ctx=ctx, cls=cls: enumerate_basis(ctx, order, weight_class=cls).series(),
                    lambda hw=hw, cls=cls: parafermionic_sum(hw, order, restriction=cls),
                    order,
                )


def _trace_from_fermionic(hw: HighestWeight, mu: WeightVec, order) -> QSeries:
    """Tr q^D on the mu weight space from the restricted parafermionic sum."""
    s = norm_shift(hw, mu)
    pf = parafermionic_sum(hw, order - s, restriction=mu)
    return (pf * power(euler_inf_inv(pf.order), hw.n)).shift(s)


def oracle_depth(hw, order) -> int:
    """Depth needed so the min-norm-representative trace reaches ``order``."""
    lam2 = inner_product(hw.finite, hw.finite)
    worst = max(
        inner_product(m, m) - lam2
        for m in (min_norm_representative(hw, c) for c in class_representatives(hw))
    ) / (2 * hw.k)
    return int(math.ceil(order + max(worst, 0)))


def _fermionic_vs_oracle(params, order, notes) -> Iterator[_Case]:
    for n, k in _pairs(params, ORACLE_GRID):
        for hw in _weights(params, n, k):
            base = {"n": n, "k": k, "weight": hw.spec()}
            table = freudenthal_table(hw, int(math.ceil(order)))
            for cls in class_representatives(hw):
                mu = hw.finite + WeightVec.from_root_coords(cls)
                yield _series_case(
                    {**base, "check": f"trace {cls}"},
                    lambda table=table, mu=mu: weight_trace(table, mu),
                    lambda hw=hw, mu=mu: _trace_from_fermionic(hw, mu, order),
                    order,
                )
            deep = freudenthal_table(hw, oracle_depth(hw, order))
            yield _series_case(
                {**base, "check": "parafermionic trace"},
                lambda deep=deep: parafermionic_trace(deep),
                lambda hw=hw: parafermionic_sum(hw, order),
                order,
            )


def _character_vs_oracle(params, order, notes) -> Iterator[_Case]:
    for n, k in _pairs(params, CHARACTER_GRID):
        for hw in _weights(params, n, k):
            base = {"n": n, "k": k, "weight": hw.spec()}
            table = freudenthal_table(hw, int(math.ceil(order)))
            char = assemble_character(hw, order)
            for w in sorted(set(char.components) | set(table.weights()), key=lambda w: w.root_coords()):
                yield _series_case(
                    {**base, "check": "weight " + ",".join(str(c) for c in w.root_coords())},
                    lambda w=w: char.get(w),
                    lambda w=w, table=table: weight_trace(table, w),
                    order,
                )


def _prop01_vs_assembly(params, order, notes) -> Iterator[_Case]:
    for n, k in _pairs(params, CHARACTER_GRID):
        yield _series_case(
            {"n": n, "k": k},
            lambda n=n, k=k: prop01_sum(n, k, order),
            lambda n=n, k=k: assemble_character(HighestWeight.vacuum(n, k), order, weight_resolved=False).q_only(),
            order,
        )
        if (n, k) == (1, 1):
            yield _series_case(
                {"n": 1, "k": 1, "check": "two-variable"},
                lambda: prop01_sum(1, 1, order),
                lambda: two_variable_sum(order),
                order,
            )


# Level-2 sl(3) string functions as fermionic sums over (p1, p2) with a
# parity condition: (weight, mu, prefactor exponent, linear term, parities).
LEVEL2_STRINGS = (
    ("2*L0", (0, 0), Fraction(-2, 15), (0, 0), (0, 0)),
    ("2*L0", (1, 1), Fraction(-2, 15), (0, 0), (1, 1)),
    ("1*L0+1*L1", (1, 0), Fraction(-1, 30), (Fraction(-1, 2), 0), (0, 0)),
    ("1*L0+1*L1", (0, 2), Fraction(-1, 30), (Fraction(-1, 2), 0), (0, 1)),
)
_A2_KERNEL = [[1, Fraction(-1, 2)], [Fraction(-1, 2), 1]]


def level2_string_formula(e0, linear, parity, order) -> QSeries:
    """q^{e0} / (q)_inf^2 * sum over p with p mod 2 = parity of q^{(1/2)pMp + L.p}/(q)_p1 (q)_p2."""
    s = fermionic_sum(_A2_KERNEL, list(linear), order - e0, accept=lambda p: (p[0] % 2, p[1] % 2) == parity)
    return (s * power(euler_inf_inv(s.order), 2)).shift(e0)


def _level2_strings(params, order, notes) -> Iterator[_Case]:
    depth = int(math.ceil(order)) + 1
    for spec, mu_fund, e0, lin, par in LEVEL2_STRINGS:
        mu = WeightVec(mu_fund)
        table = freudenthal_table(HighestWeight.parse(spec, 2), depth)

        def run(table=table, mu=mu, e0=e0, lin=lin, par=par):
            oracle = string_function(table, mu)
            formula = level2_string_formula(e0, lin, par, oracle.order)
            leading = min(e for e, _ in formula.items())
            if oracle.valuation() != leading:
                return {"leading": [str(oracle.valuation()), str(leading)]}
            cmp = equal_to_order(oracle, formula, order)
            if not cmp:
                return {"exponent": str(cmp.exponent), "left": cmp.left, "right": cmp.right}
            return None

        yield _Case({"weight": spec, "mu": ",".join(map(str, mu_fund)), "prefactor": str(e0)}, run)

    # cyclic symmetry of the three level-2 string functions with a single L_j
    forms = [
        (DominantWeight.parse("L0+L1", 2), WeightVec((1, 0))),
        (DominantWeight.parse("L0+L2", 2), WeightVec((0, 1))),
        (DominantWeight.parse("L1+L2", 2), WeightVec((1, 1))),
    ]
    ref = string_function(freudenthal_table(forms[0][0], depth), forms[0][1])
    for hw, mu in forms[1:]:
        yield _series_case(
            {"check": f"symmetry {hw.spec()}"},
            lambda: ref,
            lambda hw=hw, mu=mu: string_function(freudenthal_table(hw, depth), mu),
            order,
        )

    l1l2 = DominantWeight.parse("L1+L2", 2)
    yield _series_case(
        {"check": "L1+L2 two-term formula"},
        lambda: special_character_L1L2(max(order, 10)),
        lambda: parafermionic_trace(freudenthal_table(l1l2, oracle_depth(l1l2, max(order, 10)))),
        max(order, 10),
    )


# --- exhaustiveness -------------------------------------------------------------

EVALUATORS: dict[str, Callable] = {
    "principal_sum": lambda p, o, r: principal_sum(p["hw"], o, radius=r),
    "parafermionic_sum": lambda p, o, r: parafermionic_sum(p["hw"], o, radius=r),
    "prop01_sum": lambda p, o, r: prop01_sum(p["hw"].n, p["hw"].k, o, radius=r),
    "theta_series": lambda p, o, r: theta_series(p["hw"].finite, p["hw"].k, o, False, radius=r).q_only(),
    "assemble_character": lambda p, o, r: assemble_character(p["hw"], o, False, radius=r).q_only(),
    "census_principal": lambda p, o, r: enumerate_basis(
        AdmissibilityContext(p["hw"]), o, grading=PRINCIPAL, radius=r
    ).series(),
    "census_parafermionic": lambda p, o, r: enumerate_basis(
        AdmissibilityContext(p["hw"]), o, grading=PARAFERMIONIC, radius=r
    ).series(),
    "special_character_L1L2": lambda p, o, r: special_character_L1L2(o, radius=r),
}

# Grid and default order per evaluator (the census, oracle and character grids).
EXHAUSTIVE_GRID = {
    "principal_sum": (CENSUS_GRID, 10),
    "parafermionic_sum": (CENSUS_GRID, 10),
    "census_principal": (CENSUS_GRID, 10),
    "census_parafermionic": (CENSUS_GRID, 10),
    "prop01_sum": (CHARACTER_GRID, 12),
    "theta_series": (CHARACTER_GRID, 10),
    "assemble_character": (CHARACTER_GRID, 8),
    "special_character_L1L2": (((2, 2),), 10),
}


def self_check_exhaustiveness(evaluator: str, params: dict, order) -> CheckReport:
    """Pass iff doubling the evaluator's search radius changes nothing up to ``order``."""
    if evaluator not in EVALUATORS:
        raise UnknownSuite(f"unknown evaluator {evaluator!r}")
    order = as_fraction(order)
    n, k = int(params.get("n", 2)), int(params.get("k", 2))
    hw = HighestWeight.parse(params["weight"], n) if "weight" in params else HighestWeight.vacuum(n, k)
    label = {"evaluator": evaluator, "n": hw.n, "k": hw.k, "weight": hw.spec()}
    fn = EVALUATORS[evaluator]
    case = _series_case(label, lambda: fn({"hw": hw}, order, 1), lambda: fn({"hw": hw}, order, 2), order)
    return _finish("exhaustiveness", label, order, [case], [])


def _exhaustiveness(params, order, notes) -> Iterator[_Case]:
    names = [params["evaluator"]] if "evaluator" in params else list(EXHAUSTIVE_GRID)
    for name in names:
        grid, default_order = EXHAUSTIVE_GRID[name]
        o = default_order if order is None else order
        fn = EVALUATORS[name]
        for n, k in _pairs(params, grid):
            for hw in _weights(params, n, k) if name not in ("prop01_sum", "special_character_L1L2") else [
                HighestWeight.vacuum(n, k)
            ]:
                if name in ("census_principal", "census_parafermionic", "parafermionic_sum") and k < 2:
                    continue
                label = {"evaluator": name, "n": n, "k": k, "weight": hw.spec()}
                yield _series_case(
                    label,
                    lambda fn=fn, hw=hw, o=o: fn({"hw": hw}, o, 1),
                    lambda fn=fn, hw=hw, o=o: fn({"hw": hw}, o, 2),
                    o,
                )


# --- registry -------------------------------------------------------------------

SUITES: dict[str, tuple[Callable, Optional[Fraction]]] = {
    "durfee": (_durfee, Fraction(40)),
    "cartan-inverse": (_cartan_inverse, None),
    "theta-rewrite": (_theta_rewrite, Fraction(10)),
    "tables": (_tables, None),
    "count-vs-fermionic": (_count_vs_fermionic, Fraction(10)),
    "fermionic-vs-oracle": (_fermionic_vs_oracle, Fraction(8)),
    "character-vs-oracle": (_character_vs_oracle, Fraction(8)),
    "prop01-vs-assembly": (_prop01_vs_assembly, Fraction(12)),
    "example51": (_level2_strings, Fraction(8)),
    "exhaustiveness": (_exhaustiveness, None),
}


def suite_names() -> list[str]:
    return sorted(SUITES)


def _finish(suite: str, params: dict, order, cases, notes) -> CheckReport:
    shown = None if order is None else str(order)
    count = 0
    for case in cases:
        count += 1
        try:
            witness = case.run()
        except InsufficientPrecision as exc:
            return CheckReport(
                suite, params, shown, PRECISION, {"case": case.label, "message": str(exc)},
                _reproduce(suite, case.label, shown), count, notes,
            )
        if witness is not None:
            return CheckReport(
                suite, params, shown, FAIL, {"case": case.label, **witness},
                _reproduce(suite, case.label, shown), count, notes,
            )
    return CheckReport(suite, params, shown, PASS, None, None, count, notes)


def run_suite(name: str, params: Optional[dict] = None, order=None) -> CheckReport:
    """Run one named suite; ``params`` narrows its grid (n, k, weight, const, ...)."""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(suite_names())} or all")
    params = dict(params or {})
    fn, default_order = SUITES[name]
    order = default_order if order is None else as_fraction(order)
    notes: list = []
    return _finish(name, params, order, fn(params, order, notes), notes)


def _run_one(args) -> CheckReport:
    return run_suite(*args)


def run_suites(names: list[str], params: Optional[dict] = None, order=None, jobs: int = 1) -> list[CheckReport]:
    """Run several suites (``all`` expands to every suite); reports sorted by suite name."""
    expanded = []
    for name in names:
        expanded.extend(suite_names() if name == "all" else [name])
    for name in expanded:
        if name not in SUITES:
            raise UnknownSuite(f"unknown suite {name!r}")
    expanded = sorted(set(expanded))
    work = [(name, params, order) for name in expanded]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, work))
    else:
        reports = [_run_one(w) for w in work]
    return sorted(reports, key=lambda r: r.suite)
