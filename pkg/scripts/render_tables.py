"""Print the quasi-particle listings for sl(3) at levels 2 and 3 (vacuum modules).

    python3 scripts/render_tables.py              # print to stdout
    python3 scripts/render_tables.py --write-golden

The second form rewrites tests/golden/, which the test suite compares against.
"""

import argparse
from pathlib import Path

from qchar.fermionic import HighestWeight
from qchar.qpbasis import AdmissibilityContext, enumerate_basis, render_table

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

# (file stem, level, color-type as (r_1, r_2), max energy)
LISTINGS = [
    ("table_level2_22", 2, (2, 2), 4),
    ("table_level3_12", 3, (2, 1), 4),
]


def render(level, color_type, max_energy) -> str:
    census = enumerate_basis(
        AdmissibilityContext(HighestWeight.vacuum(2, level)), max_energy, color_type=color_type, listing=True
    )
    return render_table(census, with_charge_type=level >= 3)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--write-golden", action="store_true")
    args = parser.parse_args()
    for stem, level, ct, top in LISTINGS:
        text = render(level, ct, top)
        if args.write_golden:
            (GOLDEN / f"{stem}.txt").write_text(text)
            print(f"wrote {stem}.txt")
        else:
            print(f"== level {level}, color-type ({ct[1]};{ct[0]})")
            print(text)


if __name__ == "__main__":
    main()
