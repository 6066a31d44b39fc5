"""Geometric-phase experiments on a perfect-transfer chain.

The chain Hamiltonian ``lam J_x`` and the gradient ``kappa J_z`` act on the one
excitation sector as rotations of a spin ``J = (N - 1)/2``. The basic loop is

1. ``lam J_x`` for ``pi / (2 lam)``  (``|M_z=J> -> |M_y=J>``),
2. ``lam J_x + kappa J_z`` for ``pi / sqrt(lam^2 + kappa^2)``  (``|M_y=J> -> |M_y=-J>``),
3. ``lam J_x`` for ``pi / (2 lam)``  (back to site 1),

run on ``(|vac> + |1>)/sqrt(2)``. With ``Omega = 2 atan(lam / kappa)`` the state
returns with amplitude ``exp(-i J (pi + Omega))`` relative to the vacuum: the
loop encloses solid angle ``pi + Omega`` on the spin's Bloch sphere, so the phase
is linear in ``Omega`` with slope ``-J``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .dynamics import SubspaceOperator, assemble
from .network import build_pst_chain, gradient_diagonal, scale_edges

TWO_PI = 2 * np.pi
AMBIGUITY_BAND = 0.05


class ProtocolError(ValueError):
    """Raised when an experiment is mis-specified (bad grid, bad error model)."""


def wrap_phase(x):
    """Map angles to (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, TWO_PI) - np.pi
    y = np.where(y == -np.pi, np.pi, y)
    return float(y) if np.ndim(y) == 0 else y


def worker_count() -> int:
    env = os.environ.get("SPINWEAVE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ProtocolError(f"SPINWEAVE_THREADS must be an integer, got {env!r}") from None
    return 1


def sweep_map(fn, items: Sequence, workers: int | None = None) -> list:
    """Evaluate ``fn(index, item)`` over a sweep; results come back in grid order."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(i, x) for i, x in enumerate(items)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(items)), items))


@dataclass(frozen=True)
class ErrorModel:
    """Imperfections injected into a protocol run.

    Timing jitter multiplies each segment duration by ``1 + u``, ``u ~ U[-f, f]``,
    drawn fresh for every run. Coupling disorder multiplies each edge amplitude by
    ``1 + u`` once per network instance. ``field_offset`` shifts the gradient by a
    uniform energy while the field is on.
    """

    timing_jitter_frac: float = 0.0
    coupling_disorder_frac: float = 0.0
    field_offset: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("timing_jitter_frac", "coupling_disorder_frac"):
            f = getattr(self, name)
            if not 0.0 <= f < 1.0:
                raise ProtocolError(f"{name} must lie in [0, 1), got {f}")
        if self.seed < 0:
            raise ProtocolError("seed must be non-negative")

    def disorder_factors(self, n_edges: int) -> np.ndarray:
        if self.coupling_disorder_frac == 0:
            return np.ones(n_edges)
        rng = np.random.default_rng([self.seed, 1])
        return 1.0 + rng.uniform(-self.coupling_disorder_frac, self.coupling_disorder_frac, n_edges)

    def timing_factors(self, n_segments: int, run_index: int) -> np.ndarray:
        if self.timing_jitter_frac == 0:
            return np.ones(n_segments)
        rng = np.random.default_rng([self.seed, 2, run_index])
        return 1.0 + rng.uniform(-self.timing_jitter_frac, self.timing_jitter_frac, n_segments)


NO_ERRORS = ErrorModel()

CSV_COLUMNS = ("theta_or_chi", "kappa", "arrival_prob", "phase", "nu", "chi0", "seed")


@dataclass
class ExperimentRecord:
    """One sweep point."""

    value: float
    kappa: float = math.nan
    arrival_prob: float = math.nan
    phase: float = math.nan
    nu: float = math.nan
    chi0: float = math.nan
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.arrival_prob
        if not math.isnan(p) and not -1e-12 <= p <= 1 + 1e-12:
            raise ProtocolError(f"probability {p} outside [0, 1]")

    def row(self) -> list:
        return [self.value, self.kappa, self.arrival_prob, self.phase, self.nu, self.chi0, self.seed]


def solid_angle(lam: float, kappa: float) -> float:
    """``2 atan(lam / kappa)``; continuous through ``kappa = 0`` (gives pi)."""
    if lam <= 0:
        raise ProtocolError("lam must be positive")
    return 2.0 * math.atan2(lam, kappa)


def kappa_for_solid_angle(lam: float, omega: float) -> float:
    """Inverse of :func:`solid_angle`: ``lam / tan(omega / 2)``."""
    if not 0.0 < omega < TWO_PI:
        raise ProtocolError(f"solid angle must lie in (0, 2 pi), got {omega}")
    half = omega / 2
    if abs(half - np.pi / 2) < 1e-15:
        return 0.0
    return lam * math.cos(half) / math.sin(half)


def predicted_phase(N: int, omega: float) -> float:
    """Geometric phase ``J * Omega`` with ``J = (N - 1)/2``."""
    return 0.5 * (N - 1) * omega


def loop_return_phase(N: int, omega: float, repeats: int = 1) -> float:
    """Closed-form vacuum-relative phase of ``repeats`` error-free loops, wrapped.

    ``-J (pi + Omega)`` per loop under ``U = exp(-i H t)``.
    """
    return wrap_phase(-repeats * 0.5 * (N - 1) * (np.pi + omega))


def interference_probability(a: complex, chi: float) -> float:
    """Probability of reading 0 after a phase rotation by ``chi`` and a Hadamard.

    ``a`` is the returning amplitude relative to the vacuum component (``|a| <= 1``).
    """
    if abs(a) > 1 + 1e-9:
        raise ProtocolError(f"|a| = {abs(a)} exceeds 1")
    return float(np.clip(0.5 * (1.0 + (a * np.exp(-1j * chi)).real), 0.0, 1.0))


class ChainOracle:
    """A manufactured chain of unknown length that can be probed with loop experiments.

    Only ``lam`` (equivalently the transfer time) is meant to be known to the
    experimenter; the estimators below use nothing else.
    """

    def __init__(self, N: int, lam: float = 1.0, errors: ErrorModel | None = None):
        if N < 2:
            raise ProtocolError(f"chain needs N >= 2, got {N}")
        self._N = N
        self.lam = float(lam)
        self.errors = errors or NO_ERRORS
        chain = build_pst_chain(N, lam)
        chain = scale_edges(chain, self.errors.disorder_factors(len(chain.edges)))
        self.network = chain
        self.runs = 0

    @cached_property
    def _hx(self) -> np.ndarray:
        return assemble(self.network, 1).matrix

    def _hk(self, kappa: float, offset: float) -> np.ndarray:
        return self._hx + np.diag(gradient_diagonal(self._N, kappa, offset))

    def _run(self, hams, durations, run_index) -> complex:
        durations = np.asarray(durations, dtype=float) * self.errors.timing_factors(len(durations), run_index)
        self.runs += 1
        U = kernels.ordered_exp_product(np.stack(hams), durations)
        # input (|vac> + |1>)/sqrt(2); a = 2 conj(v) c_1 with v = 1/sqrt(2)
        return complex(U[0, 0])

    def loop_amplitude(self, kappa: float, repeats: int = 1, run_index: int = 0) -> complex:
        """Amplitude returning to site 1 (relative to the vacuum) after ``repeats`` loops."""
        lam = self.lam
        hk = self._hk(kappa, self.errors.field_offset)
        hams, durations = [], []
        for _ in range(repeats):
            hams += [self._hx, hk, self._hx]
            durations += [np.pi / (2 * lam), np.pi / math.hypot(lam, kappa), np.pi / (2 * lam)]
        return self._run(hams, durations, run_index)

    def offset_loop_amplitude(self, kappa: float, offset: float | None = None, run_index: int = 0) -> complex:
        """Modified loop: full 2 pi turn about the tilted axis, then ``3 pi / (2 lam)`` to return."""
        lam = self.lam
        b = self.errors.field_offset if offset is None else offset
        hams = [self._hx, self._hk(kappa, b), self._hx]
        durations = [np.pi / (2 * lam), TWO_PI / math.hypot(lam, kappa), 3 * np.pi / (2 * lam)]
        return self._run(hams, durations, run_index)


def geometric_loop(N: int, lam: float = 1.0, kappa: float = 0.0, errors: ErrorModel | None = None,
                   run_index: int = 0) -> tuple[float, float]:
    """Run one loop; return (return probability, vacuum-relative phase in (-pi, pi])."""
    a = ChainOracle(N, lam, errors).loop_amplitude(kappa, run_index=run_index)
    return float(abs(a) ** 2), wrap_phase(np.angle(a))


def loop_phase_slope(N: int, lam: float = 1.0, omegas: Iterable[float] | None = None) -> float:
    """Least-squares slope of the unwrapped loop phase against ``Omega``."""
    omegas = np.linspace(0.2, np.pi, 41) if omegas is None else np.sort(np.asarray(list(omegas), float))
    oracle = ChainOracle(N, lam)
    phases = np.unwrap([np.angle(oracle.loop_amplitude(kappa_for_solid_angle(lam, w))) for w in omegas])
    return float(np.polyfit(omegas, phases, 1)[0])


@dataclass
class LengthEstimate:
    N: int
    bits: list[int]
    probabilities: list[float]
    low_confidence: bool

    @property
    def parity_even(self) -> bool:
        return self.bits[0] == 1


def estimate_length_bits(oracle: ChainOracle, max_bits: int = 4) -> LengthEstimate:
    """Read ``N - 1`` bit by bit, least significant first (semiclassical phase estimation).

    Round 0 is the plain ``kappa = 0`` loop, whose phase ``-pi (N - 1)`` gives the
    parity. Round ``r >= 1`` uses ``Omega_r = pi / 2^r`` and runs the loop twice:
    the phase is then ``-(N - 1)(pi + Omega_r)`` and, once the already-known low
    bits are rotated away, only ``-pi * bit_r`` remains. Each round thresholds the
    interference probability at 1/2.
    """
    if max_bits < 1:
        raise ProtocolError("max_bits must be >= 1")
    lam = oracle.lam
    known = 0
    bits, probs = [], []
    low = False
    for r in range(max_bits):
        omega = np.pi / 2**r
        repeats = 1 if r == 0 else 2
        a = oracle.loop_amplitude(kappa_for_solid_angle(lam, omega), repeats=repeats, run_index=r)
        chi = -known * 0.5 * repeats * (np.pi + omega)
        p = interference_probability(a, chi)
        bit = 0 if p > 0.5 else 1
        low |= abs(p - 0.5) < AMBIGUITY_BAND
        bits.append(bit)
        probs.append(p)
        known += bit << r
    return LengthEstimate(known + 1, bits, probs, low)


@dataclass
class FringeFit:
    nu: float
    chi0: float
    records: list[ExperimentRecord]


def fit_fringe(chis, probs) -> tuple[float, float]:
    """Least-squares fit of ``(1 + nu cos(chi0 - chi))/2``; returns (nu, chi0 in [0, 2 pi))."""
    chis = np.asarray(chis, float)
    y = 2.0 * np.asarray(probs, float) - 1.0
    A = np.column_stack([np.cos(chis), np.sin(chis)])
    (c, s), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(math.hypot(c, s)), float(np.mod(math.atan2(s, c), TWO_PI))


def fringe_scan(N: int, lam: float, kappa: float, chis: Sequence[float], errors: ErrorModel | None = None) -> FringeFit:
    """Scan the analysis rotation ``chi`` at fixed field; fit visibility and offset.

    ``chi0`` is the absolute offset of the fringe maximum (the loop's vacuum-relative
    phase). Each ``chi`` point is an independent run.
    """
    chis = np.asarray(chis, float)
    if chis.size < 3:
        raise ProtocolError("a fringe fit needs at least 3 points")
    errors = errors or NO_ERRORS
    oracle = ChainOracle(N, lam, errors)

    def point(i, chi):
        a = oracle.loop_amplitude(kappa, run_index=i)
        return a, interference_probability(a, chi)

    results = sweep_map(point, list(chis))
    probs = [p for _, p in results]
    nu, chi0 = fit_fringe(chis, probs)
    records = [
        ExperimentRecord(float(chi), kappa, p, wrap_phase(np.angle(a)), nu, chi0, errors.seed)
        for chi, (a, p) in zip(chis, results)
    ]
    return FringeFit(nu, chi0, records)


class FrequencyScanError(ProtocolError):
    pass


@dataclass
class FrequencyEstimate:
    J: float
    scores: dict[float, float]
    records: list[ExperimentRecord]

    @property
    def N(self) -> int:
        return int(round(2 * self.J + 1))


def default_theta_grid(points: int) -> np.ndarray:
    """Midpoint grid on (0, pi); avoids the kappa = +-inf endpoints."""
    return (np.arange(points) + 0.5) * np.pi / points


def estimate_frequency(thetas, probs, max_J: float) -> tuple[float, dict[float, float]]:
    """Pick the half-integer J whose sinusoid ``cos(2 J theta + c)`` explains most variance."""
    thetas = np.asarray(thetas, float)
    y = np.asarray(probs, float)
    total = float(np.sum((y - y.mean()) ** 2))
    scores = {}
    for twoJ in range(1, int(round(2 * max_J)) + 1):
        A = np.column_stack([np.ones_like(thetas), np.cos(twoJ * thetas), np.sin(twoJ * thetas)])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = float(np.sum((A @ coef - y) ** 2))
        scores[twoJ / 2] = 1.0 - resid / total if total > 0 else 0.0
    best = max(scores, key=lambda j: (scores[j], -j))
    return best, scores


def frequency_scan(N: int, lam: float = 1.0, thetas: Sequence[float] | None = None, errors: ErrorModel | None = None,
                   max_N: int = 32) -> FrequencyEstimate:
    """Sweep the field as ``kappa = lam cot(theta)`` at ``chi = 0``; estimate J from the fringe frequency.

    The error-free signal is ``(1 + cos(J (pi + 2 theta)))/2``: frequency ``2J`` in
    theta. Candidates are J = 1/2 .. (max_N - 1)/2; the grid must give at least
    four points per oscillation of the fastest candidate.
    """
    thetas = default_theta_grid(256) if thetas is None else np.asarray(thetas, float)
    if np.any(thetas <= 0) or np.any(thetas >= np.pi):
        raise FrequencyScanError("theta values must lie strictly inside (0, pi)")
    max_J = 0.5 * (max_N - 1)
    span = float(np.ptp(thetas)) if thetas.size > 1 else 0.0
    cycles = max_J * span / np.pi
    if thetas.size < 4 or cycles <= 0 or thetas.size / cycles < 4:
        raise FrequencyScanError(
            f"grid of {thetas.size} points is too coarse for J up to {max_J} (need >= 4 points per oscillation)"
        )
    errors = errors or NO_ERRORS
    oracle = ChainOracle(N, lam, errors)

    def point(i, theta):
        kappa = lam * math.cos(theta) / math.sin(theta)
        a = oracle.loop_amplitude(kappa, run_index=i)
        return kappa, a

    results = sweep_map(point, list(thetas))
    probs = [interference_probability(a, 0.0) for _, a in results]
    J, scores = estimate_frequency(thetas, probs, max_J)
    records = [
        ExperimentRecord(float(t), k, p, wrap_phase(np.angle(a)), seed=errors.seed, extra={"return_prob": abs(a) ** 2})
        for t, (k, a), p in zip(thetas, results, probs)
    ]
    return FrequencyEstimate(J, scores, records)


def calibrate_offset(N: int, lam: float = 1.0, kappa: float = 1.0, field_offset: float = 0.0,
                     errors: ErrorModel | None = None) -> float:
    """Dynamical phase picked up from a gradient offset, in (-pi, pi].

    Runs the modified loop (2 pi about the tilted axis, then ``3 pi/(2 lam)``) whose
    geometric part is a multiple of 2 pi. The returned value ``phi_dyn`` is defined
    by ``a = exp(-i phi_dyn)``; error-free it equals ``b * 2 pi / sqrt(lam^2 + kappa^2)``.
    """
    oracle = ChainOracle(N, lam, errors)
    a = oracle.offset_loop_amplitude(kappa, field_offset)
    return wrap_phase(-np.angle(a))


def offset_from_phase(phase: float, lam: float, kappa: float) -> float:
    """Invert :func:`calibrate_offset` (valid while the phase has not wrapped)."""
    return phase * math.hypot(lam, kappa) / TWO_PI


def gradient_operator(N: int, lam: float, kappa: float, offset: float = 0.0) -> SubspaceOperator:
    """``lam J_x + kappa J_z + offset`` on the one-excitation sector of a perfect chain."""
    hx = assemble(build_pst_chain(N, lam), 1).matrix
    return SubspaceOperator(hx + np.diag(gradient_diagonal(N, kappa, offset)))
