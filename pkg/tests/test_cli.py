import json
import math

import numpy as np
import pytest

from walklab.cli import main
from walklab.evolution_direct import classical_walk_oracle


def write_config(path, **kw):
    base = {"n": 3, "p": 0.5, "t_max": 3, "backend": "direct", "seed": 11}
    base.update(kw)
    path.write_text(json.dumps(base), encoding="utf-8")
    return path


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# walklab schema=")
    header = lines[1].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[2:]]
    return lines[0], rows


def test_evolve_writes_distribution_and_invariants(tmp_path):
    cfg = write_config(tmp_path / "cfg.json")
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == 0
    meta, rows = read_csv(out / "distribution.csv")
    assert "schema=distribution.v1" in meta and "seed=11" in meta and "config=" in meta
    t0 = [r for r in rows if r["t"] == "0"]
    assert len(t0) == 1
    assert (t0[0]["x"], t0[0]["y"]) == ("0", "0")
    assert float(t0[0]["p"]) == 1.0
    log_lines = (out / "invariants.log").read_text(encoding="utf-8").splitlines()
    assert log_lines[0].startswith("# walklab schema=")
    assert len(log_lines) == 1 + 4  # header + t=0..3
    assert log_lines[1].startswith("t=0 trace=1.00000000000e+00")


def test_evolve_single_step_quarter_probabilities(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", p=0.0, t_max=1)
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == 0
    _, rows = read_csv(out / "distribution.csv")
    t1 = [r for r in rows if r["t"] == "1"]
    assert len(t1) == 4
    assert all(float(r["p"]) == pytest.approx(0.25, abs=1e-12) for r in t1)


def test_evolve_p1_matches_classical_oracle_file(tmp_path):
    n, t_max = 4, 5
    cfg = write_config(tmp_path / "cfg.json", n=n, p=1.0, t_max=t_max)
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == 0
    _, rows = read_csv(out / "distribution.csv")
    grid = np.zeros((n, n))
    for r in rows:
        if r["t"] == str(t_max):
            grid[int(r["x"]), int(r["y"])] = float(r["p"])
    assert np.abs(grid - classical_walk_oracle(n, t_max).probs).max() < 1e-12


def test_entropy_csv_schema_and_values(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", p=0.0, t_max=4)
    out = tmp_path / "out"
    assert main(["entropy", "--config", str(cfg), "--out", str(out)]) == 0
    meta, rows = read_csv(out / "entropy.csv")
    assert "schema=entropy.v1" in meta
    assert [r["t"] for r in rows] == [str(t) for t in range(5)]
    for r in rows:
        assert float(r["s_total"]) < 1e-8
        assert set(r) == {"t", "s_total", "s_coin", "s_walker", "mutual_info"}


def test_spectrum_outputs(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", n=4)
    out = tmp_path / "out"
    assert main(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
    meta, rows = read_csv(out / "spectrum.csv")
    assert len(rows) == 16 * 256  # 16 eigenvalues per quadruple, N^4 quadruples
    assert max(float(r["modulus"]) for r in rows) <= 1 + 1e-10
    # lambda ~ 1 rows only at equal-momentum quadruples
    for r in rows:
        if abs(float(r["re_lambda"]) - 1) < 1e-6 and abs(float(r["im_lambda"])) < 1e-6:
            assert (r["kx"], r["ky"]) == (r["kxp"], r["kyp"])
    report = json.loads((out / "audit_report.json").read_text(encoding="utf-8"))
    assert report["schema_version"] == "spectrum.v1"
    assert report["audit"]["proposition1"]["plus_one"]["ok"] is True
    assert report["seed"] == 11


def test_audit_command_with_block_limits(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", t_max=300)
    out = tmp_path / "out"
    assert main(["audit", "--config", str(cfg), "--out", str(out), "--trials", "100"]) == 0
    report = json.loads((out / "audit_report.json").read_text(encoding="utf-8"))
    audit = report["audit"]
    assert {"proposition1", "factorization", "contraction", "block_limits"} <= set(audit)
    assert audit["block_limits"]["t_max"] == 300


def test_limits_outputs_and_horizon_exit_code(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", t_max=0, backend="fourier")
    out = tmp_path / "out"
    assert main(["limits", "--config", str(cfg), "--out", str(out)]) == 0
    rep = json.loads((out / "limits.json").read_text(encoding="utf-8"))["report"]
    assert rep["diag"]["paper"] == pytest.approx(1 / 12, abs=1e-6)
    assert rep["diag"]["forced_uniform"] == pytest.approx(1 / 36, abs=1e-6)
    assert abs(rep["entropy"]["measured"] - math.log(36)) < 1e-3
    assert "support_parity" in rep

    short = write_config(tmp_path / "short.json", t_max=5, backend="fourier")
    assert main(["limits", "--config", str(short), "--out", str(out)]) == 4


def test_outputs_are_byte_identical_across_reruns(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", t_max=4)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for args_out in (out1, out2):
        assert main(["evolve", "--config", str(cfg), "--out", str(args_out)]) == 0
        assert main(["entropy", "--config", str(cfg), "--out", str(args_out)]) == 0
        assert main(["limits", "--config", str(write_config(tmp_path / 'l.json', t_max=0, backend='fourier')), "--out", str(args_out)]) == 0
        assert main(["audit", "--config", str(cfg), "--out", str(args_out), "--trials", "50"]) == 0
    for name in ("distribution.csv", "invariants.log", "entropy.csv", "limits.json", "audit_report.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_seed_flag_overrides_config(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", t_max=1)
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(cfg), "--out", str(out), "--seed", "77"]) == 0
    meta, _ = read_csv(out / "distribution.csv")
    assert "seed=77" in meta


def test_backend_flag_overrides_config(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", n=3, t_max=2)
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(cfg), "--out", str(out), "--backend", "both"]) == 0
    meta, _ = read_csv(out / "distribution.csv")
    assert '"backend":"both"' in meta


def test_numerical_errors_exit_3(tmp_path, monkeypatch):
    import walklab.runs
    from walklab.errors import TooLarge

    def boom(cfg, seed=0, t_long=None):
        raise TooLarge("synthetic numerical failure")

    monkeypatch.setattr(walklab.runs, "run_limits", boom)
    cfg = write_config(tmp_path / "cfg.json", t_max=0, backend="fourier")
    assert main(["limits", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 3


def test_config_errors_exit_2(tmp_path):
    missing = tmp_path / "nope.json"
    out = tmp_path / "out"
    assert main(["evolve", "--config", str(missing), "--out", str(out)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["evolve", "--config", str(bad), "--out", str(out)]) == 2
    badp = write_config(tmp_path / "badp.json", p=2.0)
    assert main(["evolve", "--config", str(badp), "--out", str(out)]) == 2
    badn = write_config(tmp_path / "badn.json", n="three")
    assert main(["evolve", "--config", str(badn), "--out", str(out)]) == 2
