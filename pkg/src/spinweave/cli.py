"""Command-line batch runner.

``spinweave run <experiment> [flags]`` writes ``<out>.csv`` (one row per sweep
point) and ``<out>.json`` (summary), and prints the summary. ``spinweave
emit-network <builder> --out file.json`` writes a network description and
``spinweave check-network file.json`` validates one.

Exit codes: 0 success, 2 invalid configuration or input, 3 numerical failure flag
(ambiguous bit, non-adiabatic run, imperfect transfer).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import gates, protocols
from .dynamics import DynamicsError, StateVector, assemble, propagate
from .network import BUILDERS, NetworkError, NetworkSpec, build_pst_chain

SCHEMA = "spinweave.summary/1"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
EXPERIMENTS = (
    "transfer", "geoloop", "bits", "fringe", "freqscan", "offset",
    "gate-hadamard", "gate-ab", "gate-cnot", "gate-cphase", "holonomy", "block",
)
DEFAULTS = {
    "n": 8, "lambda": 1.0, "kappa": None, "omega": None, "bits": 4, "grid": None,
    "timing_jitter": 0.0, "coupling_disorder": 0.0, "offset": 0.0, "seed": 0,
    "phi": None, "R": None, "T": 200.0, "steps": 4000, "network": None, "out": None,
}


class ConfigError(ValueError):
    pass


class Outcome:
    def __init__(self, records=None, summary=None, failed=False):
        self.records = records or []
        self.summary = summary or {}
        self.failed = failed


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(protocols.CSV_COLUMNS)
    for r in records:
        w.writerow([_fmt(v) for v in r.row()])
    return buf.getvalue()


def _errors(cfg) -> protocols.ErrorModel:
    return protocols.ErrorModel(cfg["timing_jitter"], cfg["coupling_disorder"], cfg["offset"], cfg["seed"])


def _kappa(cfg) -> float:
    if cfg["kappa"] is not None and cfg["omega"] is not None:
        raise ConfigError("give --kappa or --omega, not both")
    if cfg["omega"] is not None:
        return protocols.kappa_for_solid_angle(cfg["lambda"], cfg["omega"])
    return 1.0 * cfg["lambda"] if cfg["kappa"] is None else cfg["kappa"]


def _grid(cfg, default: int) -> int:
    g = default if cfg["grid"] is None else cfg["grid"]
    if g < 1:
        raise ConfigError("grid must be non-empty")
    return g


# --- experiments ----------------------------------------------------------------------


def exp_transfer(cfg) -> Outcome:
    lam = cfg["lambda"]
    spec = NetworkSpec.load(cfg["network"]) if cfg["network"] else build_pst_chain(cfg["n"], lam)
    src, dst = spec.port("in"), spec.port("out")
    H = assemble(spec, 1)
    psi0 = StateVector.excitation(spec.n_sites, src[0], vacuum_weight=0.5)
    t0 = np.pi / lam
    records = []
    for t in np.linspace(0, t0, _grid(cfg, 65)):
        psi = propagate(H, t, psi0)
        p = sum(abs(psi.amplitude(s)) ** 2 for s in dst) / 0.5
        phase = float(np.angle(psi.amplitude(dst[0]) * np.conj(psi.vacuum)))
        records.append(protocols.ExperimentRecord(float(t), arrival_prob=min(p, 1.0), phase=phase, seed=cfg["seed"]))
    arrival = records[-1].arrival_prob
    return Outcome(records, {"arrival": arrival, "time": t0, "n_sites": spec.n_sites}, arrival < 1 - 1e-8)


def exp_geoloop(cfg) -> Outcome:
    N, lam = cfg["n"], cfg["lambda"]
    errors = _errors(cfg)
    oracle = protocols.ChainOracle(N, lam, errors)
    omegas = np.linspace(0, np.pi, _grid(cfg, 33) + 1)[1:]
    records = []
    for i, w in enumerate(omegas):
        k = protocols.kappa_for_solid_angle(lam, w)
        a = oracle.loop_amplitude(k, run_index=i)
        records.append(protocols.ExperimentRecord(float(w), k, abs(a) ** 2, protocols.wrap_phase(np.angle(a)), seed=errors.seed))
    kappa = _kappa(cfg)
    p, phase = protocols.geometric_loop(N, lam, kappa, errors)
    slope = float(np.polyfit(omegas, np.unwrap([r.phase for r in records]), 1)[0]) if len(omegas) > 1 else math.nan
    omega = protocols.solid_angle(lam, kappa)
    return Outcome(records, {
        "kappa": kappa, "omega": omega, "return_probability": p, "phase": phase,
        "predicted_phase": protocols.predicted_phase(N, omega), "phase_slope": slope,
    })


def exp_bits(cfg) -> Outcome:
    errors = _errors(cfg)
    est = protocols.estimate_length_bits(protocols.ChainOracle(cfg["n"], cfg["lambda"], errors), cfg["bits"])
    records = [
        protocols.ExperimentRecord(np.pi / 2**r, protocols.kappa_for_solid_angle(cfg["lambda"], np.pi / 2**r), p, seed=errors.seed,)
        for r, p in enumerate(est.probabilities)
    ]
    return Outcome(records, {"estimated_N": est.N, "bits": est.bits, "low_confidence": est.low_confidence}, est.low_confidence)


def exp_fringe(cfg) -> Outcome:
    N, lam = cfg["n"], cfg["lambda"]
    kappa = _kappa(cfg)
    chis = np.linspace(0, 2 * np.pi, _grid(cfg, 64), endpoint=False)
    fit = protocols.fringe_scan(N, lam, kappa, chis, _errors(cfg))
    omega = protocols.solid_angle(lam, kappa)
    return Outcome(fit.records, {
        "nu": fit.nu, "chi0": fit.chi0, "kappa": kappa, "omega": omega,
        "J_omega_mod_2pi": float(np.mod(protocols.predicted_phase(N, omega), 2 * np.pi)),
    })


def exp_freqscan(cfg) -> Outcome:
    thetas = protocols.default_theta_grid(_grid(cfg, 256))
    est = protocols.frequency_scan(cfg["n"], cfg["lambda"], thetas, _errors(cfg))
    return Outcome(est.records, {"estimated_J": est.J, "estimated_N": est.N})


def exp_offset(cfg) -> Outcome:
    N, lam, b = cfg["n"], cfg["lambda"], cfg["offset"]
    kappa = _kappa(cfg)
    phase = protocols.calibrate_offset(N, lam, kappa, b)
    expected = protocols.wrap_phase(2 * np.pi * b / math.hypot(lam, kappa))
    rec = protocols.ExperimentRecord(b, kappa, phase=phase, seed=cfg["seed"])
    return Outcome([rec], {
        "dynamical_phase": phase, "expected": expected,
        "recovered_offset": protocols.offset_from_phase(phase, lam, kappa),
    })


def _gate_outcome(lu: gates.LogicalUnitary, target, extra=None) -> Outcome:
    summary = lu.report(target)
    summary.update(extra or {})
    return Outcome([], summary, lu.arrival_probability < 1 - 1e-8)


def exp_gate_hadamard(cfg) -> Outcome:
    return _gate_outcome(gates.hadamard_gate(cfg["n"], None, cfg["lambda"]), gates.HADAMARD, {"target": "H"})


def exp_gate_ab(cfg) -> Outcome:
    phi = np.pi if cfg["phi"] is None else cfg["phi"]
    N = max(cfg["n"], 3)
    lu = gates.ab_phase_gate(N, cfg["lambda"], phi)
    return _gate_outcome(lu, gates.phase_gate(phi), {"target": "diag(1, e^{i phi})", "phi": phi})


def exp_gate_cnot(cfg) -> Outcome:
    N, lam = cfg["n"], cfg["lambda"]
    records = []
    worst = 0.0
    for t in np.linspace(0, 2 * np.pi / lam, _grid(cfg, 101)):
        p_sim, _ = gates.simulate_cnot(N, t, lam)
        worst = max(worst, abs(p_sim - gates.cnot_flip_probability_closed(N, t, lam)))
        records.append(protocols.ExperimentRecord(float(t), arrival_prob=min(p_sim, 1.0), seed=cfg["seed"]))
    info = gates.cnot_gate_flip(N, lam)
    info.update({"closed_vs_sim_max": worst, "chain_equivalence_deviation": gates.cnot_chain_deviation(N, lam)})
    return Outcome(records, info, info["flip_probability"] < 1 - 1e-9)


def exp_gate_cphase(cfg) -> Outcome:
    N, lam = cfg["n"], cfg["lambda"]
    records, worst = [], 0.0
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            r = gates.two_excitation_exchange(N, lam, (i, j))
            worst = max(worst, abs(r.ratio + 1))
            records.append(protocols.ExperimentRecord(float(i * 100 + j), arrival_prob=min(r.arrival, 1.0),
                                                      phase=float(np.angle(r.ratio)), seed=cfg["seed"]))
    G = gates.exchange_gate(N, lam)
    return Outcome(records, {
        "max_ratio_deviation": worst,
        "cz_fidelity": gates.gate_fidelity(gates.strip_local_z(G), gates.CZ),
        "gate_diagonal": [complex(z) for z in np.diag(G)],
    })


def exp_holonomy(cfg) -> Outcome:
    N = cfg["n"]
    R = N // 2 if cfg["R"] is None else cfg["R"]
    params = gates.HolonomyParams(N, R, 0.0, 0.0)
    theta, phi = gates.holonomy_hadamard_params(params.P)
    params = gates.HolonomyParams(N, R, theta, phi)
    closed = gates.holonomy_closed_form(params)
    run = gates.adiabatic_holonomy(N, R, theta, phi, cfg["T"], cfg["steps"], cfg["lambda"])
    transport = gates.holonomy_transport(params)
    summary = {
        "P": params.P, "theta": theta, "phi": phi, "T": cfg["T"], "steps": cfg["steps"],
        "closed_form": gates.gate_report(closed, 1.0, gates.HADAMARD),
        "adiabatic": gates.gate_report(run.matrix, 1 - run.leakage, gates.HADAMARD, run.leakage),
        "adiabatic_vs_closed_form": gates.phase_aligned_distance(run.matrix, closed),
        "adiabatic_vs_transport": gates.phase_aligned_distance(run.matrix, transport),
        "non_adiabatic": run.flagged,
    }
    return Outcome([], summary, run.flagged)


def exp_block(cfg) -> Outcome:
    N, lam = cfg["n"], cfg["lambda"]
    g = np.geomspace(10 * lam, 100 * lam, _grid(cfg, 10))
    slope, alpha, leak = gates.zeeman_block_scaling(N, lam, g)
    records = [protocols.ExperimentRecord(float(x), arrival_prob=float(l), seed=cfg["seed"]) for x, l in zip(g, leak)]
    return Outcome(records, {"slope": slope, "alpha": alpha, "blocked_transfer_at_max_g": gates.blocked_transfer(N, g[-1], lam)})


RUNNERS = {
    "transfer": exp_transfer, "geoloop": exp_geoloop, "bits": exp_bits, "fringe": exp_fringe,
    "freqscan": exp_freqscan, "offset": exp_offset, "gate-hadamard": exp_gate_hadamard,
    "gate-ab": exp_gate_ab, "gate-cnot": exp_gate_cnot, "gate-cphase": exp_gate_cphase,
    "holonomy": exp_holonomy, "block": exp_block,
}


# --- argument handling ----------------------------------------------------------------


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("experiment", nargs="?", choices=EXPERIMENTS)
    p.add_argument("--config", help="JSON file with experiment settings; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--lambda", dest="lambda", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--bits", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("--timing-jitter", dest="timing_jitter", type=float)
    p.add_argument("--coupling-disorder", dest="coupling_disorder", type=float)
    p.add_argument("--offset", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--phi", type=float)
    p.add_argument("--R", dest="R", type=int)
    p.add_argument("--T", dest="T", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--network", help="network JSON (transfer experiment)")
    p.add_argument("--out", help="output stem; writes <out>.csv and <out>.json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinweave", description="Spin-network transfer, metrology and gate experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_flags(sub.add_parser("run", help="run one experiment"))
    em = sub.add_parser("emit-network", help="write a network description as JSON")
    em.add_argument("builder", choices=sorted(BUILDERS))
    em.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                    help="builder keyword argument (repeatable), e.g. --param N=6")
    em.add_argument("--out", required=True)
    chk = sub.add_parser("check-network", help="validate a network JSON file")
    chk.add_argument("path")
    return parser


def resolve_config(ns: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    experiment = None
    if ns.config:
        try:
            data = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        experiment = data.pop("experiment", None)
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for key in DEFAULTS:
        val = getattr(ns, key, None)
        if val is not None:
            cfg[key] = val
    experiment = ns.experiment or experiment
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {', '.join(EXPERIMENTS)}")
    cfg["experiment"] = experiment
    if cfg["n"] < 2:
        raise ConfigError("--n must be >= 2")
    if cfg["lambda"] <= 0:
        raise ConfigError("--lambda must be positive")
    return cfg


def _parse_value(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def cmd_run(ns) -> int:
    cfg = resolve_config(ns)
    out = RUNNERS[cfg["experiment"]](cfg)
    echo = {k: v for k, v in cfg.items() if k != "out"}
    summary = {"schema": SCHEMA, "experiment": cfg["experiment"], "config": echo, "numerical_failure": out.failed}
    summary.update(out.summary)
    text = json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n"
    if cfg["out"]:
        stem = Path(cfg["out"])
        stem.parent.mkdir(parents=True, exist_ok=True)
        Path(f"{stem}.csv").write_text(records_csv(out.records))
        Path(f"{stem}.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_NUMERIC if out.failed else EXIT_OK


def cmd_emit(ns) -> int:
    params = {}
    for item in ns.param:
        if "=" not in item:
            raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        params[k] = _parse_value(v)
    try:
        spec = BUILDERS[ns.builder](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {ns.builder}: {exc}") from exc
    spec.save(ns.out)
    return EXIT_OK


def cmd_check(ns) -> int:
    try:
        spec = NetworkSpec.load(ns.path)
    except OSError as exc:
        raise ConfigError(str(exc)) from exc
    sys.stdout.write(json.dumps({"n_sites": spec.n_sites, "edges": len(spec.edges), "ports": sorted(spec.ports)}) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    handler = {"run": cmd_run, "emit-network": cmd_emit, "check-network": cmd_check}[ns.command]
    try:
        return handler(ns)
    except (ConfigError, NetworkError, protocols.ProtocolError, gates.GateError, DynamicsError) as exc:
        sys.stderr.write(f"spinweave: invalid configuration: {exc}\n")
        return EXIT_CONFIG
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"spinweave: numerical failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
