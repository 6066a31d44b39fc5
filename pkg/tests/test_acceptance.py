"""Acceptance checks: each prints one PASS/FAIL line, then asserts.

Run ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to see the lines. Some checks are expected to fail; see the README.
"""
import itertools
import math
import time

import numpy as np
import pytest

from spinweave import gates, protocols
from spinweave.dynamics import assemble
from spinweave.network import build_pst_chain

RESULTS = {}


def report(key, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {key:>2}. {title}: {detail}"
    RESULTS[key] = (ok, line)
    print(line, flush=True)
    return ok


def check_transfer():
    t0 = time.perf_counter()
    worst = min(abs(assemble(build_pst_chain(N)).propagator(np.pi)[N - 1, 0]) ** 2 for N in range(2, 13))
    dt = time.perf_counter() - t0
    ok = worst >= 1 - 1e-10 and dt < 1.0
    return report(1, "perfect transfer N=2..12", ok, f"min arrival {worst:.15f}, {dt:.3f}s")


def check_loop():
    worst_p = min(protocols.geometric_loop(N, 1.0, k)[0] for N in (3, 8) for k in (0, 0.5, 1, 3))
    slopes = {N: protocols.loop_phase_slope(N) for N in (3, 8)}
    slope_err = max(abs(abs(s) - (N - 1) / 2) for N, s in slopes.items())
    ok = worst_p >= 1 - 1e-10 and slope_err <= 1e-6
    detail = f"min return {worst_p:.12f}; slopes {slopes[3]:+.9f} (N=3), {slopes[8]:+.9f} (N=8); |slope| error {slope_err:.1e}; sign negative under exp(-iHt)"
    return report(2, "geometric loop", ok, detail)


def check_bits():
    t0 = time.perf_counter()
    wrong = [N for N in range(2, 17) if protocols.estimate_length_bits(protocols.ChainOracle(N), 4).N != N]
    dt = time.perf_counter() - t0
    return report(3, "bit metrology N=2..16, 4 bits", not wrong and dt < 10, f"wrong={wrong}, {dt:.2f}s")


def check_fringe():
    N, kappa = 8, 1.0
    fit = protocols.fringe_scan(N, 1.0, kappa, np.linspace(0, 2 * np.pi, 64, endpoint=False))
    target = np.mod(protocols.predicted_phase(N, protocols.solid_angle(1.0, kappa)), 2 * np.pi)
    diff = abs(np.angle(np.exp(1j * (fit.chi0 - target))))
    ok = abs(fit.nu - 1) <= 1e-6 and diff <= 1e-6
    detail = f"nu={fit.nu:.9f}; chi0={fit.chi0 / np.pi:.6f}pi vs J*Omega={target / np.pi:.6f}pi (off by {diff / np.pi:.6f}pi)"
    return report(4, "fringe law", ok, detail)


def check_robustness():
    t0 = time.perf_counter()
    thetas = protocols.default_theta_grid(256)

    def count(**kw):
        return sum(
            protocols.frequency_scan(8, 1.0, thetas, protocols.ErrorModel(seed=s, **kw)).N == 8 for s in range(100)
        )

    jitter = count(timing_jitter_frac=0.5)
    disorder = count(coupling_disorder_frac=0.8)
    dt = time.perf_counter() - t0
    ok = jitter > 50 and disorder >= 90 and dt < 120
    return report(5, "frequency-scan robustness", ok, f"jitter 50%: {jitter}/100 correct; disorder 80%: {disorder}/100 correct; {dt:.1f}s")


def check_offset():
    lam, kappa = 1.0, 1.0
    errs = [
        abs(protocols.calibrate_offset(5, lam, kappa, b) - protocols.wrap_phase(2 * np.pi * b / math.hypot(lam, kappa)))
        for b in (0.0, 0.1, -0.3)
    ]
    return report(6, "offset calibration", max(errs) <= 1e-6, f"max error {max(errs):.1e}")


def check_ab():
    fids, arrivals = [], []
    for phi in (0.0, np.pi / 3, np.pi):
        lu = gates.ab_phase_gate(5, 1.0, phi)
        fids.append(lu.fidelity(gates.phase_gate(phi)))
        arrivals.append(lu.arrival_probability)
    spread = max(arrivals) - min(arrivals)
    ok = min(fids) >= 1 - 1e-8 and spread <= 1e-10
    return report(7, "flux-ring phase gate", ok, f"min fidelity {min(fids):.12f}, arrival spread {spread:.1e}")


def check_networks():
    fid_h = gates.hadamard_gate(6, 3).fidelity(gates.HADAMARD)
    grid = [0.4, 2.1, 4.5]
    worst = max(
        gates.phase_aligned_distance(gates.rotation_gate(b, g, d).matrix, gates.rotation_target(b, g, d))
        for b, g, d in itertools.product(grid, grid, grid)
    )
    ok = fid_h >= 1 - 1e-8 and worst <= 1e-6
    return report(8, "Hadamard and rotation networks", ok, f"Hadamard fidelity {fid_h:.12f}; worst composition distance {worst:.1e}")


def check_cnot():
    dev = max(gates.cnot_chain_deviation(N) for N in (2, 3, 4, 8))
    ts = np.linspace(0, 2 * np.pi, 401)
    closed = max(
        np.abs(np.array([gates.simulate_cnot(N, t)[0] for t in ts]) - gates.cnot_flip_probability_closed(N, ts)).max()
        for N in (2, 3, 4, 8)
    )
    flips = [gates.simulate_cnot(N, gates.cnot_flip_time(N))[0] for N in (2, 3, 4, 8)]
    widths = [gates.cnot_flip_width(N) for N in range(2, 9)]
    mono = all(a > b for a, b in zip(widths, widths[1:]))
    ok = dev <= 1e-12 and closed <= 1e-10 and min(flips) >= 1 - 1e-9 and mono
    detail = (f"chain deviation {dev:.1e}; closed-vs-sim {closed:.1e}; min flip {min(flips):.12f} at t=pi; "
              f"10-90% widths {widths[0]:.3f} -> {widths[-1]:.3f} monotone={mono}")
    return report(9, "chain CNOT", ok, detail)


def check_exchange():
    worst = max(
        abs(gates.two_excitation_exchange(N, 1.0, (i, j)).ratio + 1)
        for N in range(2, 11) for i in range(1, N + 1) for j in range(i + 1, N + 1)
    )
    fid = min(gates.cphase_fidelity(N) for N in range(2, 11))
    ok = worst <= 1e-8 and fid >= 1 - 1e-8
    return report(10, "exchange sign and CZ", ok, f"max |ratio+1| {worst:.1e}; min CZ fidelity {fid:.12f}")


def check_holonomy():
    t0 = time.perf_counter()
    res = max(
        gates.eigen_residual(gates.HolonomyParams(*a))
        for a in [(4, 2, np.pi / 3, np.pi / 7), (6, 2, 1.0, 2.0), (8, 5, 2.5, -1.0)]
    )
    th, ph = gates.holonomy_hadamard_params(0.5)
    perr = max(abs(th - np.pi / 4), abs(ph - np.pi / np.cos(np.pi / 8)))
    params = gates.HolonomyParams(4, 2, th, ph)
    closed = gates.holonomy_closed_form(params)
    fid = gates.gate_fidelity(closed, gates.HADAMARD)
    devs = []
    for T in (25, 50, 100, 200):
        run = gates.adiabatic_holonomy(4, 2, th, ph, float(T), 20 * T)
        devs.append(gates.phase_aligned_distance(run.matrix, closed))
    transport = gates.phase_aligned_distance(run.matrix, gates.holonomy_transport(params))
    mono = all(a > b for a, b in zip(devs, devs[1:]))
    dt = time.perf_counter() - t0
    ok = res <= 1e-10 and perr <= 1e-9 and fid >= 1 - 1e-10 and devs[-1] <= 1e-2 and mono and dt < 60
    detail = (f"residual {res:.1e}; params error {perr:.1e}; closed-form H fidelity {fid:.12f}; "
              f"adiabatic vs closed form {', '.join(f'{d:.4f}' for d in devs)} (T=25..200) monotone={mono}; "
              f"adiabatic vs transported connection {transport:.1e}; {dt:.1f}s")
    return report(11, "holonomic Hadamard", ok, detail)


def check_block():
    slope, alpha, _ = gates.zeeman_block_scaling(6)
    return report(12, "Zeeman block scaling", abs(slope + 2) <= 0.2, f"slope {slope:.4f}, alpha {alpha:.3f}")


CHECKS = [
    check_transfer, check_loop, check_bits, check_fringe, check_robustness, check_offset,
    check_ab, check_networks, check_cnot, check_exchange, check_holonomy, check_block,
]


@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__[6:] for c in CHECKS])
def test_acceptance(check, capsys):
    with capsys.disabled():
        ok = check()
    assert ok, RESULTS[max(RESULTS)][1] if RESULTS else check.__name__


if __name__ == "__main__":
    outcomes = [c() for c in CHECKS]
    print(f"{sum(outcomes)}/{len(outcomes)} acceptance checks passed")
