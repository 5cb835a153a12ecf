import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from qchar import cli
from qchar.fermionic import HighestWeight, parafermionic_sum
from qchar.qseries import QSeries
from qchar.theta import GradedCharacter, theta_series
from qchar.lattice import WeightVec

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("QCHAR_CACHE_DIR", raising=False)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fermionic_text(capsys):
    code, out, _ = run(capsys, "fermionic", "--n", "1", "--k", "1", "--order", "6")
    assert code == 0
    assert out == "0 1\n1 1\n2 1\n3 1\n4 2\n5 2\n6 3\n"


def test_string_both_agrees(capsys):
    code, out, _ = run(
        capsys, "string", "--n", "2", "--k", "2", "--weight", "2*L0", "--mu", "0,0", "--order", "12", "--method", "both"
    )
    assert code == 0
    fermionic, oracle = out.split("# oracle\n")
    assert fermionic.startswith("# fermionic\n-2/15 1\n13/15 2\n28/15 8\n")
    assert oracle.endswith("# agree\n")
    assert fermionic.removeprefix("# fermionic\n") == oracle.removesuffix("# agree\n")


def test_string_disagreement_exits_one(capsys, monkeypatch):
    real = cli._string_fermionic
    monkeypatch.setattr(cli, "_string_fermionic", lambda hw, mu, order: real(hw, mu, order) + QSeries.monomial(1, order))
    code, out, _ = run(capsys, "string", "--n", "1", "--k", "2", "--order", "3", "--format", "json")
    assert code == 1
    verdict = json.loads(out)["verdict"]
    assert verdict["agree"] is False and verdict["exponent"] == "1"


def test_verify_durfee(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "durfee", "--order", "40")
    assert code == 0
    assert out == "durfee: pass (7 cases)\n"


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cartan-inverse", "--suite", "durfee", "--order", "5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [r["suite"] for r in data] == ["cartan-inverse", "durfee"]
    assert all(r["status"] == "pass" for r in data)


def test_table_layout(capsys):
    code, out, _ = run(capsys, "table", "--n", "2", "--k", "3", "--weight", "3*L0", "--max-energy", "4", "--color-type", "1;2")
    assert code == 0
    assert out == (GOLDEN / "table_level3_12.txt").read_text()


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "2", "--k", "2", "--weight", "2*L0", "--color-type", "2;2", "--format", "json")
    assert code == 0
    counts = {row["grade"]: row["count"] for row in json.loads(out)}
    assert [counts[e] for e in ("2", "3", "4")] == [1, 2, 5]


def test_parafermionic_matches_library(capsys):
    code, out, _ = run(capsys, "parafermionic", "--n", "2", "--k", "3", "--weight", "2*L0+1*L1", "--mu", "1,2", "--order", "4", "--format", "json")
    assert code == 0
    hw = HighestWeight(2, 3, 2, 1, 1)
    assert QSeries.from_json(out) == parafermionic_sum(hw, 4, restriction=(1, 2))


def test_theta_json_round_trip(capsys):
    code, out, _ = run(capsys, "theta", "--n", "2", "--k", "2", "--mu", "1/3,2/3", "--order", "5", "--format", "json")
    assert code == 0
    mu = WeightVec.from_root_coords([Fraction(1, 3), Fraction(2, 3)])
    assert GradedCharacter.from_dict(json.loads(out)) == theta_series(mu, 2, 5)


def test_character_and_prop01(capsys):
    _, char, _ = run(capsys, "character", "--n", "1", "--k", "1", "--order", "5", "--q-only")
    code, prop, _ = run(capsys, "prop01", "--n", "1", "--k", "1", "--order", "5")
    assert code == 0
    assert char == prop == "0 1\n1 3\n2 4\n3 7\n4 13\n5 19\n"


def test_special_both(capsys):
    code, out, _ = run(capsys, "special-l1l2", "--order", "3", "--method", "both")
    assert code == 0 and out.endswith("# agree\n")


def test_oracle_build_creates_cache_dir(capsys, tmp_path):
    target = tmp_path / "new" / "cache"
    code, out, _ = run(capsys, "oracle-build", "--n", "2", "--weight", "L1+L2", "--order", "3", "--cache-dir", str(target))
    assert code == 0
    assert (target / "mult_n2_0_1_1_d3.json").exists()


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nn = 1\nk = 1\norder = 4\n")
    code, out, _ = run(capsys, "fermionic", "--config", str(cfg))
    assert code == 0 and out == "0 1\n1 1\n2 1\n3 1\n4 2\n"
    # explicit flags override the file
    code, out, _ = run(capsys, "fermionic", "--config", str(cfg), "--order", "2")
    assert out == "0 1\n1 1\n2 1\n"
    cfg.write_text("colour = 3\n")
    code, _, err = run(capsys, "fermionic", "--config", str(cfg))
    assert code == 2 and "not an option" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["fermionic", "--n", "2", "--weight", "L1+L2"],
        ["fermionic", "--n", "2", "--k", "3", "--weight", "2*L0"],
        ["fermionic", "--k", "2"],
        ["fermionic", "--n", "1", "--k", "1", "--order", "0.5"],
        ["verify", "--suite", "nope"],
        ["verify", "--suite", "durfee", "--param", "novalue"],
        ["parafermionic", "--n", "1", "--k", "1"],
        ["table", "--n", "2", "--k", "2", "--color-type", "x;y"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_byte_identical_output():
    argv = [sys.executable, "-m", "qchar.cli", "character", "--n", "2", "--k", "2", "--weight", "1*L0+1*L1", "--order", "3"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True, env={"PYTHONHASHSEED": "123", "PATH": ""}).stdout
    assert first == second and first.startswith(b"# weight ")


def test_series_json_round_trip(capsys):
    _, out, _ = run(capsys, "parafermionic", "--n", "1", "--k", "3", "--order", "5", "--format", "json")
    assert QSeries.from_json(out) == parafermionic_sum(HighestWeight.vacuum(1, 3), 5)
