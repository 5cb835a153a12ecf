"""Published listings of low-energy quasi-particle monomials, transcribed verbatim.

Each cell is (color-type, energy, color-charge-type or None, monomials), in
the notation produced by ``QPMonomial.render``.  Cells are compared as sets,
so row order inside a cell does not matter.
"""

from __future__ import annotations

# sl(3), level 2, vacuum; color-types (1;2) and (2;2) up to energy 4.
LEVEL2_VACUUM = (
    ("(1;2)", "3/2", None, ["(1_{a2} -3_{a1} -1_{a1})"]),
    ("(1;2)", "5/2", None, ["(1_{a2} -4_{a1} -1_{a1})", "(0_{a2} -3_{a1} -1_{a1})"]),
    ("(1;2)", "7/2", None, [
        "(1_{a2} -5_{a1} -1_{a1})",
        "(1_{a2} -4_{a1} -2_{a1})",
        "(0_{a2} -4_{a1} -1_{a1})",
        "(1_{a2} -3_{a1} -1_{a1})",
    ]),
    ("(2;2)", "2", None, ["(-1_{a2} 1_{a2} -3_{a1} -1_{a1})"]),
    ("(2;2)", "3", None, [
        "(-2_{a2} 1_{a2} -3_{a1} -1_{a1})",
        "(-1_{a2} 1_{a2} -4_{a1} -1_{a1})",
    ]),
    ("(2;2)", "4", None, [
        "(-3_{a2} 1_{a2} -3_{a1} -1_{a1})",
        "(-2_{a2} 1_{a2} -4_{a1} -1_{a1})",
        "(-2_{a2} 0_{a2} -3_{a1} -1_{a1})",
        "(-1_{a2} 1_{a2} -5_{a1} -1_{a1})",
        "(-1_{a2} 1_{a2} -4_{a1} -2_{a1})",
    ]),
)

# sl(3), level 3, vacuum; color-types (1;2) and (2;2) up to energy 11/3.
LEVEL3_VACUUM = (
    ("(1;2)", "1", "(1;2)", ["(0_{a2} -2_{2a1})"]),
    ("(1;2)", "2", "(1;1,1)", ["(1_{a2} -3_{a1} -1_{a1})"]),
    ("(1;2)", "2", "(1;2)", ["(0_{a2} -3_{2a1})", "(-1_{a2} -2_{2a1})"]),
    ("(1;2)", "3", "(1;1,1)", ["(1_{a2} -4_{a1} -1_{a1})", "(0_{a2} -3_{a1} -1_{a1})"]),
    ("(1;2)", "3", "(1;2)", [
        "(0_{a2} -4_{2a1})",
        "(-1_{a2} -3_{2a1})",
        "(-2_{a2} -2_{2a1})",
    ]),
    ("(1;2)", "4", "(1;1,1)", [
        "(1_{a2} -4_{a1} -2_{a1})",
        "(1_{a2} -5_{a1} -1_{a1})",
        "(0_{a2} -4_{a1} -1_{a1})",
        "(-1_{a2} -3_{a1} -1_{a1})",
    ]),
    ("(1;2)", "4", "(1;2)", [
        "(0_{a2} -5_{2a1})",
        "(-1_{a2} -4_{2a1})",
        "(-2_{a2} -3_{2a1})",
        "(-3_{a2} -2_{2a1})",
    ]),
    ("(2;2)", "2/3", "(2;2)", ["(0_{2a2} -2_{2a1})"]),
    ("(2;2)", "5/3", "(2;2)", ["(0_{2a2} -3_{2a1})", "(-1_{2a2} -2_{2a1})"]),
    ("(2;2)", "8/3", "(1,1;1,1)", ["(-1_{a2} 1_{a2} -3_{a1} -1_{a1})"]),
    ("(2;2)", "8/3", "(2;1,1)", ["(0_{2a2} -3_{a1} -1_{a1})"]),
    ("(2;2)", "8/3", "(1,1;2)", ["(-2_{a2} 0_{a2} -2_{2a1})"]),
    ("(2;2)", "8/3", "(2;2)", [
        "(0_{2a2} -4_{2a1})",
        "(-1_{2a2} -3_{2a1})",
        "(-2_{2a2} -2_{2a1})",
    ]),
    ("(2;2)", "11/3", "(1,1;1,1)", [
        "(-1_{a2} 1_{a2} -4_{a1} -1_{a1})",
        "(-2_{a2} 1_{a2} -3_{a1} -1_{a1})",
    ]),
    ("(2;2)", "11/3", "(2;1,1)", [
        "(0_{2a2} -4_{a1} -1_{a1})",
        "(-1_{2a2} -3_{a1} -1_{a1})",
    ]),
    ("(2;2)", "11/3", "(1,1;2)", [
        "(-2_{a2} 0_{a2} -3_{2a1})",
        "(-3_{a2} 0_{a2} -2_{2a1})",
    ]),
    ("(2;2)", "11/3", "(2;2)", [
        "(0_{2a2} -5_{2a1})",
        "(-1_{2a2} -4_{2a1})",
        "(-2_{2a2} -3_{2a1})",
        "(-3_{2a2} -2_{2a1})",
    ]),
)

# Cells where the listing and the enumerator disagree.  The listed monomial
# below is the same monomial already listed at energy 3/2, so it cannot also
# sit at 7/2; the enumerator finds its color-2 index shifted by -2 instead.
EXPECTED_DIFFS = {
    ("level2", "(1;2)", "7/2", None): {
        "listed_only": ["(1_{a2} -3_{a1} -1_{a1})"],
        "computed_only": ["(-1_{a2} -3_{a1} -1_{a1})"],
    },
}
