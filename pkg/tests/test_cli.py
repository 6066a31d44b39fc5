import csv
import json

import numpy as np
import pytest

from spinweave.cli import EXPERIMENTS, SCHEMA, main
from spinweave.network import NetworkSpec


def run(args, tmp_path, stem="out"):
    code = main(["run", *args, "--out", str(tmp_path / stem)])
    return code, tmp_path / f"{stem}.csv", tmp_path / f"{stem}.json"


def test_transfer_summary(tmp_path, capsys):
    code, csv_path, json_path = run(["transfer", "--n", "6"], tmp_path)
    assert code == 0
    summary = json.loads(json_path.read_text())
    assert summary["schema"] == SCHEMA
    assert summary["arrival"] == pytest.approx(1.0, abs=1e-10)
    assert summary["time"] == pytest.approx(np.pi)
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["theta_or_chi", "kappa", "arrival_prob", "phase", "nu", "chi0", "seed"]
    assert float(rows[-1][2]) == pytest.approx(summary["arrival"])


def test_freqscan_rows_and_determinism(tmp_path):
    args = ["freqscan", "--n", "8", "--grid", "256", "--coupling-disorder", "0.8", "--seed", "7"]
    code, c1, j1 = run(args, tmp_path, "a")
    assert code == 0
    _, c2, j2 = run(args, tmp_path, "b")
    assert c1.read_bytes() == c2.read_bytes()
    assert len(c1.read_text().splitlines()) == 257
    assert j1.read_text() == j2.read_text()


def test_freqscan_error_free_estimate(tmp_path):
    _, _, j = run(["freqscan", "--n", "8", "--grid", "256"], tmp_path)
    assert json.loads(j.read_text())["estimated_N"] == 8


def test_threads_leave_output_unchanged(tmp_path, monkeypatch):
    args = ["freqscan", "--n", "6", "--grid", "128", "--timing-jitter", "0.3", "--seed", "4"]
    _, serial, _ = run(args, tmp_path, "s")
    monkeypatch.setenv("SPINWEAVE_THREADS", "3")
    _, threaded, _ = run(args, tmp_path, "t")
    assert serial.read_bytes() == threaded.read_bytes()


def test_summary_recomputable_from_rows(tmp_path):
    _, c, j = run(["fringe", "--n", "5", "--grid", "24"], tmp_path)
    rows = list(csv.DictReader(c.open()))
    from spinweave.protocols import fit_fringe

    nu, chi0 = fit_fringe([float(r["theta_or_chi"]) for r in rows], [float(r["arrival_prob"]) for r in rows])
    s = json.loads(j.read_text())
    assert nu == pytest.approx(s["nu"]) and chi0 == pytest.approx(s["chi0"])


@pytest.mark.parametrize("exp", [e for e in EXPERIMENTS if e not in ("holonomy", "freqscan")])
def test_every_experiment_runs(tmp_path, exp):
    code, _, j = run([exp, "--n", "4"], tmp_path)
    assert code == 0, exp
    assert json.loads(j.read_text())["experiment"] == exp


def test_holonomy_experiment(tmp_path):
    code, _, j = run(["holonomy", "--n", "4", "--T", "100", "--steps", "2000"], tmp_path)
    s = json.loads(j.read_text())
    assert code == 0
    assert s["closed_form"]["fidelity_to_target"] == pytest.approx(1.0)
    assert s["adiabatic_vs_transport"] < 2e-3


def test_nonadiabatic_holonomy_exit_3(tmp_path):
    code, _, _ = run(["holonomy", "--n", "4", "--T", "5", "--steps", "200"], tmp_path)
    assert code == 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "bits", "n": 11, "bits": 4}))
    code, _, j = run(["--config", str(cfg), "--n", "6"], tmp_path)
    assert code == 0
    assert json.loads(j.read_text())["estimated_N"] == 6


@pytest.mark.parametrize(
    "args",
    [
        ["transfer", "--n", "1"],
        ["geoloop", "--kappa", "1", "--omega", "1"],
        ["fringe", "--grid", "0"],
        ["freqscan", "--n", "8", "--grid", "20"],
        ["freqscan", "--timing-jitter", "1.5"],
        ["nonexistent"],
    ],
)
def test_invalid_config_exit_2(tmp_path, args):
    assert main(["run", *args, "--out", str(tmp_path / "x")]) == 2


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "bits", "colour": "red"}))
    assert main(["run", "--config", str(cfg)]) == 2


def test_emit_network_round_trip(tmp_path):
    path = tmp_path / "pst.json"
    assert main(["emit-network", "pst", "--param", "N=6", "--out", str(path)]) == 0
    spec = NetworkSpec.load(path)
    assert spec.n_sites == 6
    path2 = tmp_path / "rotation.json"
    args = ["emit-network", "rotation", "--param", "beta=1", "--param", "gamma_mid=2", "--param", "delta_out=3"]
    assert main([*args, "--out", str(path2)]) == 0
    from spinweave.network import build_single_qubit_network

    assert NetworkSpec.load(path2) == build_single_qubit_network(1.0, 2.0, 3.0)
    assert main(["check-network", str(path2)]) == 0


def test_emit_network_bad_params(tmp_path):
    assert main(["emit-network", "pst", "--param", "bogus=1", "--out", str(tmp_path / "x.json")]) == 2


def test_malformed_network_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n_sites": 3, "edges": [[1, 4, 1.0, 0.0]]}')
    assert main(["check-network", str(bad)]) == 2
    assert main(["run", "transfer", "--network", str(bad)]) == 2
    assert main(["check-network", str(tmp_path / "missing.json")]) == 2


def test_transfer_on_emitted_network(tmp_path):
    path = tmp_path / "chain.json"
    main(["emit-network", "pst", "--param", "N=5", "--param", "lam=2.0", "--out", str(path)])
    code, _, j = run(["transfer", "--network", str(path), "--lambda", "2.0"], tmp_path)
    assert code == 0 and json.loads(j.read_text())["arrival"] == pytest.approx(1.0, abs=1e-10)
