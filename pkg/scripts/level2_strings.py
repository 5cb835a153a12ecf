"""Level-2 sl(3) string functions: parity-restricted fermionic sums next to the oracle.

    python3 scripts/level2_strings.py [ORDER]
"""

import sys
from fractions import Fraction

from qchar.fermionic import HighestWeight
from qchar.lattice import WeightVec
from qchar.oracle import freudenthal_table, string_function
from qchar.qseries import equal_to_order
from qchar.verify import LEVEL2_STRINGS, level2_string_formula


def main():
    order = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(8)
    for spec, mu, e0, lin, parity in LEVEL2_STRINGS:
        table = freudenthal_table(HighestWeight.parse(spec, 2), int(order) + 1)
        oracle = string_function(table, WeightVec(mu))
        formula = level2_string_formula(e0, lin, parity, oracle.order)
        verdict = "agree" if equal_to_order(oracle, formula, order) else "DISAGREE"
        print(f"{spec}  mu={mu}  prefactor q^{e0}  parity {parity}: {verdict} to order {order}")
        for e, c in formula.truncate(order).items():
            print(f"  {e} {c}")


if __name__ == "__main__":
    main()
