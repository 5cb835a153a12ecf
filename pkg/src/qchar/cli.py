"""Command-line front end: ``qchar <command> [options]``.

Exit codes: 0 on success, 1 when a check fails, 2 on a usage error.
Options may also come from a ``--config`` file of ``key=value`` lines,
using the long option names; command-line flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .fermionic import DomainError, HighestWeight, norm_shift, parafermionic_sum, principal_sum, prop01_sum
from .lattice import LatticeError, WeightVec
from .oracle import (
    CACHE_ENV,
    DominantWeight,
    freudenthal_table,
    parafermionic_trace,
    string_exponent,
    weight_trace,
)
from .qpbasis import PARAFERMIONIC, PRINCIPAL, AdmissibilityContext, enumerate_basis, render_table
from .qseries import QSeries, as_fraction, equal_to_order, euler_inf_inv, power
from .theta import assemble_character, special_character_L1L2, theta_series
from .verify import UnknownSuite, oracle_depth, reports_to_json, run_suites, suite_names



class UsageError(Exception):
    pass


# --- argument parsing -------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        value = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected an integer or a/b, got {text!r}")
    if "." in str(text) or "e" in str(text).lower():
        raise argparse.ArgumentTypeError(f"use a/b rather than decimals: {text!r}")
    return value


def _int_list(text: str, sep: str = ",") -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(sep))
    except ValueError:
        raise UsageError(f"expected integers separated by {sep!r}, got {text!r}")


def _add_common(p: argparse.ArgumentParser, weight: bool = True, order_default: Optional[str] = "10"):
    p.add_argument("--n", type=int, default=None, help="rank n of sl(n+1)")
    p.add_argument("--k", type=int, default=None, help="level")
    if weight:
        p.add_argument("--weight", default=None, help='highest weight such as "2*L0" or "1*L0+1*L1"')
    p.add_argument("--order", type=_rational, default=None if order_default is None else Fraction(order_default))
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cache-dir", default=None, help=f"oracle table cache (default ${CACHE_ENV})")
    p.add_argument("--config", default=None, help="key=value file with defaults for these options")
    p.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchar", description="Exact q-characters for sl(n+1)^ modules.")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.commands = sub.choices

    p = sub.add_parser("fermionic", help="principal-subspace fermionic sum")
    _add_common(p)
    p.add_argument("--charges", type=int, default=None, help="largest charge K (default k)")
    p.add_argument("--reduced", action="store_true", help="use the reduced weight at level k-1")

    p = sub.add_parser("parafermionic", help="parafermionic fermionic sum")
    _add_common(p)
    p.add_argument("--mu", default=None, help="weight class as alpha-coordinates of mu - Lambda")

    for name in ("enumerate", "table"):
        p = sub.add_parser(name, help="census of admissible quasi-particle monomials")
        _add_common(p, order_default=None)
        p.add_argument("--max-energy", type=_rational, default=Fraction(4))
        p.add_argument("--grading", choices=(PARAFERMIONIC, PRINCIPAL), default=PARAFERMIONIC)
        p.add_argument("--color-type", default=None, help='"r_n;...;r_1"')
        p.add_argument("--mu", default=None, help="weight class as alpha-coordinates of mu - Lambda")
        if name == "enumerate":
            p.add_argument("--list", action="store_true", help="print the monomials as well")

    p = sub.add_parser("theta", help="degree-k theta function of the root lattice")
    _add_common(p, weight=False)
    p.add_argument("--mu", default="", help="alpha-coordinates of mu (a/b allowed); default 0")
    p.add_argument("--q-only", action="store_true")

    p = sub.add_parser("character", help="full module character from fermionic and theta sums")
    _add_common(p)
    p.add_argument("--q-only", action="store_true")

    p = sub.add_parser("string", help="string function c_mu of L(Lambda)")
    _add_common(p)
    p.add_argument("--mu", default=None, help="alpha-coordinates of mu - Lambda (default 0)")
    p.add_argument("--method", choices=("fermionic", "oracle", "both"), default="both")

    p = sub.add_parser("oracle-build", help="build (or load) a Freudenthal multiplicity table")
    _add_common(p)

    p = sub.add_parser("prop01", help="vacuum character from particles and antiparticles")
    _add_common(p)

    p = sub.add_parser("special-l1l2", help="two-term parafermionic character of L1+L2 at sl(3) level 2")
    _add_common(p, weight=False)
    p.add_argument("--method", choices=("fermionic", "oracle", "both"), default="fermionic")

    p = sub.add_parser("verify", help="run cross-check suites")
    _add_common(p, order_default=None)
    p.add_argument("--suite", action="append", default=None, help=f"one of {', '.join(suite_names())}, all")
    p.add_argument("--param", action="append", default=[], help="extra suite parameter key=value")
    return parser


def _read_config(path: str) -> dict:
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    for num, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-")] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    config = _read_config(args.config)
    # re-parse with the config lines prepended, so explicit flags override them
    subparser = parser.commands[args.command]
    known = {opt for action in subparser._actions for opt in action.option_strings}
    extra = []
    for key, value in config.items():
        flag = "--" + key.replace("_", "-")
        if flag not in known:
            raise UsageError(f"config key {key!r} is not an option of {args.command}")
        action = next(a for a in subparser._actions if flag in a.option_strings)
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes"):
                extra.append(flag)
        elif isinstance(action, argparse._AppendAction):
            extra.extend(x for v in value.split(";") for x in (flag, v.strip()))
        else:
            extra += [flag, value]
    return parser.parse_args([args.command] + extra + argv[1:])


# --- helpers ------------------------------------------------------------------------


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name} is required")


def _hw(args) -> HighestWeight:
    _require(args, "n")
    if args.weight is None:
        _require(args, "k")
        return HighestWeight.vacuum(args.n, args.k)
    hw = HighestWeight.parse(args.weight, args.n)
    if args.k is not None and args.k != hw.k:
        raise UsageError(f"weight {args.weight!r} has level {hw.k}, not --k {args.k}")
    return hw


def _emit(series: QSeries, fmt: str) -> str:
    return series.to_json() + "\n" if fmt == "json" else series.to_text()


def _cache_dir(args) -> Optional[str]:
    path = args.cache_dir or os.environ.get(CACHE_ENV)
    if path:
        Path(path).mkdir(parents=True, exist_ok=True)
    return path


def _residues(text: Optional[str], n: int) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    cs = _int_list(text)
    if len(cs) != n:
        raise UsageError(f"expected {n} coordinates, got {text!r}")
    return cs


def _color_type(text: Optional[str], n: int) -> Optional[tuple[int, ...]]:
    """ "r_n;...;r_1" -> (r_1, ..., r_n)."""
    if text is None:
        return None
    rs = _int_list(text.strip("()"), ";")
    if len(rs) != n:
        raise UsageError(f"color-type needs {n} entries, got {text!r}")
    return tuple(reversed(rs))


# --- commands -----------------------------------------------------------------------


def cmd_fermionic(args) -> tuple[int, str]:
    hw = _hw(args)
    if args.reduced:
        K = hw.k - 1 if args.charges is None else args.charges
        return 0, _emit(principal_sum(hw.dotted(), args.order, K=K), args.format)
    return 0, _emit(principal_sum(hw, args.order, K=args.charges), args.format)


def cmd_parafermionic(args) -> tuple[int, str]:
    hw = _hw(args)
    return 0, _emit(parafermionic_sum(hw, args.order, restriction=_residues(args.mu, hw.n)), args.format)


def _census(args):
    hw = _hw(args)
    census = enumerate_basis(
        AdmissibilityContext(hw),
        args.max_energy,
        grading=args.grading,
        color_type=_color_type(args.color_type, hw.n),
        weight_class=_residues(args.mu, hw.n),
        listing=args.command == "table" or getattr(args, "list", False),
    )
    return hw, census


def cmd_enumerate(args) -> tuple[int, str]:
    _, census = _census(args)
    if args.format == "json":
        return 0, census.to_json() + "\n"
    lines = [f"{g} {c}" for g, c in sorted(census.counts.items())]
    if args.list:
        lines += [f"{g} {m.render()}" for g, m in census.listing()]
    return 0, "\n".join(lines) + ("\n" if lines else "")


def cmd_table(args) -> tuple[int, str]:
    hw, census = _census(args)
    if args.format == "json":
        return 0, census.to_json() + "\n"
    return 0, render_table(census, with_charge_type=hw.k >= 3)


def _weightvec(text: str, n: int) -> WeightVec:
    if not text:
        return WeightVec.zero(n)
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"expected {n} coordinates, got {text!r}")
    try:
        return WeightVec.from_root_coords([_rational(x) for x in parts])
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc))


def cmd_theta(args) -> tuple[int, str]:
    _require(args, "n", "k")
    char = theta_series(_weightvec(args.mu, args.n), args.k, args.order, weight_resolved=not args.q_only)
    return 0, (char.to_json() + "\n" if args.format == "json" else char.to_text())


def cmd_character(args) -> tuple[int, str]:
    char = assemble_character(_hw(args), args.order, weight_resolved=not args.q_only)
    return 0, (char.to_json() + "\n" if args.format == "json" else char.to_text())


def _string_fermionic(hw: HighestWeight, mu: WeightVec, order: Fraction) -> QSeries:
    e = string_exponent(hw, mu)
    s = norm_shift(hw, mu)
    pf = parafermionic_sum(hw, order - e - s, restriction=mu)
    return (pf * power(euler_inf_inv(pf.order), hw.n)).shift(s + e)


def _string_oracle(hw, mu: WeightVec, order: Fraction, cache_dir) -> QSeries:
    e = string_exponent(hw, mu)
    depth = max(0, math.ceil(order - e))
    table = freudenthal_table(hw, depth, cache_dir)
    return weight_trace(table, mu).shift(e).truncate(order)


def _compare(label_a, a: QSeries, label_b, b: QSeries, order, fmt) -> tuple[int, str]:
    cmp = equal_to_order(a, b, order)
    verdict = {"agree": cmp.equal, "order": str(order)}
    if not cmp.equal:
        verdict.update(exponent=str(cmp.exponent), **{label_a: cmp.left, label_b: cmp.right})
    if fmt == "json":
        body = json.dumps({label_a: a.to_dict(), label_b: b.to_dict(), "verdict": verdict}) + "\n"
    else:
        body = f"# {label_a}\n{a.to_text()}# {label_b}\n{b.to_text()}"
        body += "# agree\n" if cmp.equal else f"# disagree at q^{cmp.exponent}: {cmp.left} vs {cmp.right}\n"
    return (0 if cmp.equal else 1), body


def cmd_string(args) -> tuple[int, str]:
    hw = _hw(args)
    c = _residues(args.mu, hw.n) or (0,) * hw.n
    mu = hw.finite + WeightVec.from_root_coords(c)
    order = args.order
    if args.method == "fermionic":
        return 0, _emit(_string_fermionic(hw, mu, order), args.format)
    if args.method == "oracle":
        return 0, _emit(_string_oracle(hw, mu, order, _cache_dir(args)), args.format)
    return _compare(
        "fermionic", _string_fermionic(hw, mu, order),
        "oracle", _string_oracle(hw, mu, order, _cache_dir(args)),
        order, args.format,
    )


def cmd_oracle_build(args) -> tuple[int, str]:
    _require(args, "n")
    if args.weight is None:
        _require(args, "k")
        hw = DominantWeight.of(HighestWeight.vacuum(args.n, args.k))
    else:
        try:
            hw = DominantWeight.parse(args.weight, args.n)
        except ValueError as exc:
            raise UsageError(str(exc))
    if args.order.denominator != 1 or args.order < 0:
        raise UsageError("oracle-build needs a nonnegative integer --order (the depth)")
    table = freudenthal_table(hw, int(args.order), _cache_dir(args))
    if args.format == "json":
        return 0, json.dumps(table.to_dict()) + "\n"
    lines = [f"# {hw.spec()} depth<={table.max_depth} weights={len(table.entries)}"]
    lines += [f"{d} {table.dimension(d)}" for d in range(table.max_depth + 1)]
    return 0, "\n".join(lines) + "\n"


def cmd_prop01(args) -> tuple[int, str]:
    hw = _hw(args)
    if not hw.is_vacuum:
        raise UsageError("prop01 is defined for the vacuum weight k*L0 only")
    return 0, _emit(prop01_sum(hw.n, hw.k, args.order), args.format)


def cmd_special(args) -> tuple[int, str]:
    order = args.order
    formula = special_character_L1L2(order)
    if args.method == "fermionic":
        return 0, _emit(formula, args.format)
    hw = DominantWeight.parse("L1+L2", 2)
    table = freudenthal_table(hw, oracle_depth(hw, max(order, 0)), _cache_dir(args))
    oracle = parafermionic_trace(table).truncate(order)
    if args.method == "oracle":
        return 0, _emit(oracle, args.format)
    return _compare("fermionic", formula, "oracle", oracle, order, args.format)


def cmd_verify(args) -> tuple[int, str]:
    params = {}
    for key in ("n", "k", "weight"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    for item in args.param:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip().replace("-", "_")] = value.strip()
    try:
        reports = run_suites(args.suite or ["all"], params, args.order, jobs=args.jobs)
    except UnknownSuite as exc:
        raise UsageError(exc.args[0])
    code = 0 if all(r.passed for r in reports) else 1
    if args.format == "json":
        return code, reports_to_json(reports) + "\n"
    lines = []
    for r in reports:
        line = f"{r.suite}: {r.status} ({r.cases} cases)"
        if r.witness is not None:
            line += f"\n  witness: {json.dumps(r.witness)}\n  rerun: {r.reproduce}"
        for note in r.notes:
            line += f"\n  note: {json.dumps(note)}"
        lines.append(line)
    return code, "\n".join(lines) + "\n"


HANDLERS = {
    "fermionic": cmd_fermionic,
    "parafermionic": cmd_parafermionic,
    "enumerate": cmd_enumerate,
    "table": cmd_table,
    "theta": cmd_theta,
    "character": cmd_character,
    "string": cmd_string,
    "oracle-build": cmd_oracle_build,
    "prop01": cmd_prop01,
    "special-l1l2": cmd_special,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        code, out = HANDLERS[args.command](args)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (UsageError, DomainError, LatticeError) as exc:
        print(f"qchar: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
