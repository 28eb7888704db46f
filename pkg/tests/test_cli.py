import json

import numpy as np
import pytest

from slelab.cli import main, parse_complex
from slelab.io import trace_from_csv, trace_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [("1+2i", 1 + 2j), ("2i", 2j), ("-0.5-i", -0.5 - 1j), ("3", 3), ("1e-3+4.5i", 1e-3 + 4.5j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_zero_drive_traces(capsys):
    code, out, _ = run(capsys, "trace", "--grade", "2", "--kappa", "0", "--T", "1")
    assert code == 0
    tip = trace_from_csv(out).points[-1]
    assert abs(abs(tip) - 8 ** 0.25) < 1e-9
    assert abs(np.angle(tip) - np.pi / 4) < 1e-9
    code, out, _ = run(capsys, "trace", "--grade", "1", "--kappa", "0", "--T", "1", "--format", "json")
    assert abs(trace_from_json(out).points[-1] - 2j) < 1e-9


def test_seeded_trace_is_reproducible(capsys):
    args = ("trace", "--grade", "2", "--kappa", "40", "--sign", "2", "--seed", "7", "--T", "0.5")
    first = run(capsys, *args)[1]
    assert first == run(capsys, *args)[1]


def test_seed_is_required(capsys):
    code, _, err = run(capsys, "trace", "--kappa", "2")
    assert code == 1 and "seed" in err


def test_hull_and_manifest(tmp_path, capsys):
    out = tmp_path / "hull.csv"
    code, _, _ = run(capsys, "hull", "--grade", "2", "--kappa", "0", "--t", "0.125", "--dt", "1e-3",
                     "--grid", "0,1.2,0,1.2,13,13", "--out", str(out))
    assert code == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    hit = [(float(r), float(i)) for r, i, tau in rows if tau not in ("inf", "nan")]
    assert hit and all(abs(r - i) < 1e-12 and r * r + i * i <= 1 for r, i in hit)
    manifest = json.loads((tmp_path / "hull.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "hull" and manifest["flags"]["grade"] == 2


def test_virasoro_commands(capsys):
    code, out, _ = run(capsys, "virasoro", "singular", "--level", "4", "--c", "-22/5", "--delta", "0")
    assert json.loads(out)["vectors"] == [["1", "5/27", "-5/3", "125/27", "-125/108"]]
    code, out, _ = run(capsys, "virasoro", "gram", "--level", "1", "--c", "0", "--delta", "0")
    assert json.loads(out)["gram"] == [["0"]]
    code, out, _ = run(capsys, "virasoro", "reduce", "--model", "5,2", "--module", "1,1",
                       "--terms", "4:1;2,2:-5/3", "--expect-null")
    assert code == 0 and json.loads(out)["null"] is True
    code, out, _ = run(capsys, "virasoro", "reduce", "--model", "5,2", "--module", "1,1",
                       "--terms", "4:1;2,2:-1", "--expect-null")
    assert code == 3 and json.loads(out)["null"] is False


def test_bridge_commands(capsys):
    _, out, _ = run(capsys, "bridge", "solve-kappa", "--grade", "2", "--sign", "2", "--model", "5,2", "--module", "1,1")
    assert json.loads(out)["kappa"] == ["40"]
    _, out, _ = run(capsys, "bridge", "solve-kappa", "--grade", "2", "--sign", "1", "--model", "5,2", "--module", "1,1")
    d = json.loads(out)
    assert d["kappa"] == [] and d["note"] == "no non-negative solution"
    _, out, _ = run(capsys, "bridge", "obstruction", "--grade", "2", "--sign", "2")
    coeffs = [t["coeff"] for t in json.loads(out)["terms"]]
    assert coeffs == ["-1/4*κ + 10", "3/4*κ"]


def test_stats_commands(capsys):
    code, out, _ = run(capsys, "stats", "scale-invariance", "--alpha", "1", "--shared-seeds", "--seed", "0",
                       "--N", "100", "--t", "0.01")
    assert code == 0 and json.loads(out)["p_value"] == 1.0
    code, _, err = run(capsys, "stats", "scale-invariance", "--z", "1+", "--seed", "0")
    assert code == 1 and "usage" in err


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "hull", "--grid", "1,2")[0] == 1
    assert run(capsys, "virasoro", "reduce", "--terms", "4:1")[0] == 1
    assert run(capsys, "trace", "--T", "0.00015")[0] == 1


def test_numeric_failure_exits_two(capsys):
    # M(2, 2) is not a minimal model: p and p' must be coprime
    code, _, err = run(capsys, "bridge", "solve-kappa", "--grade", "2", "--sign", "2", "--model", "2,2", "--module", "1,1")
    assert code == 2 and "numerical failure" in err
