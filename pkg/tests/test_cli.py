import json
from pathlib import Path

import pytest

from magicmap.cli import main

ROOT = Path(__file__).resolve().parents[1]
FA = str(ROOT / "benchmarks" / "full_adder.blif")


def test_missing_file_is_input_error(capsys, tmp_path):
    assert main([str(tmp_path / "nope.blif")]) == 2
    assert "input-error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["x.blif", "--k", "1"], ["x.blif", "--k", "11"], ["x.blif", "--grid", "10"],
                                  ["x.blif", "--mode", "diag"], ["x.blif", "--verify", "-3"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.blif"
    bad.write_text(".model b\n.inputs a\n.outputs q\n.latch a q 0\n.end\n")
    assert main([str(bad)]) == 2
    assert "unsupported-sequential" in capsys.readouterr().err


def test_capacity_exit(capsys):
    assert main([FA, "--lut-netlist", "--grid", "2x4"]) == 3
    assert "capacity-exceeded" in capsys.readouterr().err


def test_bad_bitlet_config(tmp_path):
    cfg = tmp_path / "b.cfg"
    cfg.write_text("nonsense = 3\n")
    assert main(["bench:c17", "--k", "3", "--bitlet-config", str(cfg)]) == 1


def test_full_adder_summary(capsys):
    assert main([FA, "--lut-netlist"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "speedup" in out[0] and "area-saving" in out[0]
    row = out[1].split()
    assert row[0] == "full_adder" and len(row) == 8


def test_sweep_reports_are_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["bench:adder4", "bench:mux4", "--k", "2", "--k", "3", "--k", "7", "--k", "10", "--seed", "9"]
    assert main(args + ["--report", str(a)]) == 0
    assert main(args + ["--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert len(doc["reports"]) == 2 * 4 * 2
    assert all(r["verification"]["passed"] for r in doc["reports"])
    assert "adder4|hipe" in doc["pareto"]
    out = capsys.readouterr().out
    assert "pareto adder4 [hipe]" in out


def test_emitters_and_model(tmp_path, capsys):
    cfg = tmp_path / "b.cfg"
    cfg.write_text("io_bits = 5\n")
    rc = main(["bench:c17", "--k", "3", "--mode", "hipe", "--emit-blif", str(tmp_path / "blif"),
               "--emit-trace", str(tmp_path / "tr"), "--bitlet-config", str(cfg), "--charge-init"])
    assert rc == 0
    assert (tmp_path / "blif" / "c17_k3.blif").read_text().startswith(".model")
    trace = (tmp_path / "tr" / "c17_k3_hipe.trace").read_text()
    assert trace.startswith("# grid 1024x1024") and "INIT" in trace
    assert "model c17 k=3 [hipe]" in capsys.readouterr().out


def test_aiger_input(tmp_path):
    aag = tmp_path / "h.aag"
    aag.write_text("aag 3 2 0 1 1\n2\n4\n7\n6 2 4\n")
    assert main([str(aag), "--k", "2", "--verify", "exhaustive"]) == 0
