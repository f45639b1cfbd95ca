import json

import numpy as np
import pytest

from schwarzflow.cli import EXIT_CONFIG, EXIT_OK, EXIT_USAGE, atlas_grid, main, parse_params
from schwarzflow.errors import ConfigError
from schwarzflow.io import read_csv
from schwarzflow.model import PhysParams

REL = {"eps": 1, "k": 0.3, "M": 1}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def manifest(out):
    return json.loads((out / "manifest.json").read_text())


# config parsing


def test_parse_params_requires_all_fields():
    with pytest.raises(ConfigError):
        parse_params({"eps": 1, "k": 0.3})
    with pytest.raises(ConfigError):
        parse_params({"eps": 0, "k": 0.3, "M": 1})
    assert parse_params({"eps": 0, "k": 0.3, "m": 2}).reduced_mass == 2.0


def test_atlas_grid_spans_horizon_to_far_field():
    r = atlas_grid(PhysParams(eps=1.0, k=0.3, mass_M=1.0), 100)
    assert r[0] > 2.0 and r[0] < 2.0 + 1e-5 and r[-1] == pytest.approx(1e3)
    assert np.all(np.diff(r) > 0)


def test_missing_config_is_usage_error(tmp_path):
    assert main(["steady", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path)]) == EXIT_USAGE


def test_unknown_command_is_usage_error():
    assert main(["frobnicate"]) == EXIT_USAGE


def test_malformed_json_is_config_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["riemann", "--config", str(p), "--out", str(tmp_path / "o")]) == EXIT_CONFIG


# steady


def test_steady_empty_case_list(tmp_path):
    out = tmp_path / "o"
    assert main(["steady", "--config", write(tmp_path, {"cases": []}), "--out", str(out)]) == EXIT_OK
    assert manifest(out)["files"] == []


def test_steady_shock_rows_and_failed_case(tmp_path):
    cfg = {"cases": [{"name": "shock", "params": REL, "base": [15, 1, 0.15], "n": 400},
                     {"name": "bad", "params": REL, "base": [1, 1, 0.15]}]}
    out = tmp_path / "o"
    assert main(["steady", "--config", write(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
    d = read_csv(out / "shock.csv")
    assert list(d) == ["r", "rho", "v", "branch_id", "is_shock", "regime"]
    at = np.flatnonzero(d["is_shock"] == 1)
    assert at.size == 2 and d["r"][at[0]] == d["r"][at[1]]
    # steady jump: v_left v_right = k^2
    assert d["v"][at[0]] * d["v"][at[1]] == pytest.approx(0.09, rel=1e-10)
    m = manifest(out)
    assert [f["name"] for f in m["files"]] == ["shock.csv"]
    assert any(n.startswith("bad:") for n in m["notes"])


def test_steady_parallel_matches_serial(tmp_path):
    cfg = write(tmp_path, {"cases": [{"name": f"c{i}", "params": REL, "base": [6 + i, 1, -0.05], "n": 300}
                                     for i in range(3)]})
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["steady", "--config", cfg, "--out", str(a)]) == EXIT_OK
    assert main(["steady", "--config", cfg, "--out", str(b), "--parallel", "2"]) == EXIT_OK
    assert manifest(a)["files"] == manifest(b)["files"]


# riemann


def record(out):
    d = {}
    for line in (out / "fan.csv").read_text().splitlines()[1:]:
        k, v = line.split(",", 1)
        d[k] = v
    return d


def test_riemann_identical_states(tmp_path):
    cfg = {"params": REL, "r0": 4, "left": [1.2, 0.1], "right": {"rho": 1.2, "v": 0.1}}
    out = tmp_path / "o"
    assert main(["riemann", "--config", write(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
    assert float(record(out)["strength"]) == 0.0
    prof = read_csv(out / "profile.csv")
    assert prof["xi"].size == 512 and np.all(prof["rho"] == 1.2)


def test_riemann_stiff_speeds(tmp_path):
    cfg = {"params": {"eps": 0.5, "k": 2, "M": 1}, "r0": 4, "left": [1, 0.2], "right": [2, -0.3]}
    out = tmp_path / "o"
    assert main(["riemann", "--config", write(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
    rec = record(out)
    s = (1 - 2 / 4) / 0.5
    assert float(rec["wave1_speed_lo"]) == -s and float(rec["wave2_speed_hi"]) == s
    assert rec["wave1_kind"] == "Contact"


# evolve


EVOLVE = {"params": REL, "dr": 0.05, "dt": 0.02, "domain": [2.5, 20], "t_end": 0.2,
          "initial": {"type": "orbit", "base": [6, 1, -0.05]}}


def test_evolve_holds_orbit(tmp_path):
    out = tmp_path / "o"
    assert main(["evolve", "--config", write(tmp_path, dict(EVOLVE, snapshot_every=5)), "--out", str(out)]) == 0
    snaps = sorted(out.glob("snapshot_*.csv"))
    assert [s.name for s in snaps] == ["snapshot_000000.csv", "snapshot_000005.csv", "snapshot_000010.csv"]
    last = read_csv(snaps[-1])
    assert list(last) == ["t", "r", "rho", "v", "w", "z", "deviation", "untrusted"]
    assert last["deviation"].max() < 1e-8
    diag = read_csv(out / "diagnostics.csv")
    assert diag["t"].size == 11


def test_evolve_default_cadence_two_snapshots(tmp_path):
    out = tmp_path / "o"
    assert main(["evolve", "--config", write(tmp_path, EVOLVE), "--out", str(out)]) == EXIT_OK
    assert len(list(out.glob("snapshot_*.csv"))) == 2


def test_evolve_cfl_violation(tmp_path):
    out = tmp_path / "o"
    assert main(["evolve", "--config", write(tmp_path, dict(EVOLVE, dt=0.03)), "--out", str(out)]) == EXIT_CONFIG


def test_evolve_unknown_initial_type(tmp_path):
    cfg = dict(EVOLVE, initial={"type": "vortex"})
    assert main(["evolve", "--config", write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_evolve_reproducible(tmp_path):
    cfg = dict(EVOLVE, domain=[6, 10], t_end=0.1,
               initial={"type": "riemann", "r_split": 8, "left": [1, 0.05], "right": [0.6, 0.1]})
    path = write(tmp_path, cfg)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["evolve", "--config", path, "--out", str(a), "--seq-offset", "3"]) == EXIT_OK
    assert main(["evolve", "--config", path, "--out", str(b), "--seq-offset", "3"]) == EXIT_OK
    assert manifest(a)["files"] == manifest(b)["files"]


# limits, verify, plotscript


def test_limits_writes_one_file_per_check(tmp_path):
    cfg = {"checks": [{"kind": "NonRelativistic", "params": {"eps": 0, "k": 0.3, "m": 1}, "small": 0.01},
                      {"kind": "Stiff", "params": {"eps": 1, "k": 1, "M": 1}, "small": 0}]}
    out = tmp_path / "o"
    assert main(["limits", "--config", write(tmp_path, cfg), "--out", str(out)]) == EXIT_OK
    assert sorted(p.name for p in out.glob("limit_*.csv")) == ["limit_00_NonRelativistic.csv", "limit_01_Stiff.csv"]


def test_verify_unknown_id(capsys):
    assert main(["verify", "--suite", "42"]) == EXIT_USAGE


def test_verify_selection(tmp_path, capsys):
    out = tmp_path / "v"
    assert main(["verify", "--suite", "1,6,10", "--out", str(out)]) == EXIT_OK
    lines = [ln for ln in capsys.readouterr().out.splitlines() if ln.startswith("criterion")]
    assert len(lines) == 3 and all("PASS" in ln for ln in lines)
    assert read_csv(out / "verify.csv")["id"].tolist() == [1.0, 6.0, 10.0]


def test_plotscript(tmp_path):
    out = tmp_path / "o"
    main(["riemann", "--config", write(tmp_path, {"params": REL, "r0": 4, "left": [2, 0.1], "right": [0.5, -0.2]}),
          "--out", str(out)])
    assert main(["plotscript", "--out", str(out)]) == EXIT_OK
    assert "profile.csv" in (out / "plot.gp").read_text()
