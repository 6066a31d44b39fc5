"""Excitation-number sectors, exact propagation and amplitude observables.

The XY Hamiltonian conserves the number of excitations, so every calculation
lives in one sector: the vacuum (k=0), one excitation (dimension N) or two
excitations (dimension N(N-1)/2, pairs in lexicographic order). The vacuum has
energy exactly 0 and is carried as a scalar next to the sector amplitudes; it is
the phase reference for all interferometric quantities.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .network import NetworkSpec

HERMITIAN_RTOL = 1e-12


class DynamicsError(ValueError):
    """Raised for dimension mismatches and ill-posed observables."""


@dataclass(frozen=True)
class ExcitationBasis:
    """Ordered basis of one excitation sector; each state is a tuple of 1-based sites."""

    n_sites: int
    k: int

    def __post_init__(self):
        if self.k not in (0, 1, 2):
            raise DynamicsError(f"only k in (0, 1, 2) is supported, got {self.k}")
        if self.k == 2 and self.n_sites < 2:
            raise DynamicsError("two excitations need at least two sites")

    @cached_property
    def states(self) -> tuple[tuple[int, ...], ...]:
        return tuple(combinations(range(1, self.n_sites + 1), self.k))

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, sites) -> int:
        key = tuple(sorted((sites,) if isinstance(sites, (int, np.integer)) else sites))
        try:
            return self._index[key]
        except KeyError:
            raise DynamicsError(f"{key} is not a state of this basis") from None

    def to_dict(self) -> dict:
        return {"n_sites": self.n_sites, "k": self.k}


@dataclass(frozen=True, eq=False)
class SubspaceOperator:
    """Dense Hermitian operator on an excitation sector."""

    matrix: np.ndarray
    basis: ExcitationBasis | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DynamicsError(f"operator must be square, got shape {m.shape}")
        if self.basis is not None and self.basis.dim != m.shape[0]:
            raise DynamicsError("operator dimension does not match its basis")
        scale = max(np.abs(m).max(initial=0.0), 1.0)
        if np.abs(m - m.conj().T).max(initial=0.0) > HERMITIAN_RTOL * scale:
            raise DynamicsError("operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linalg.eigh(self.matrix)

    def propagator(self, t: float) -> np.ndarray:
        w, v = self.eig
        return (v * np.exp(-1j * w * t)) @ v.conj().T

    def __add__(self, other: "SubspaceOperator") -> "SubspaceOperator":
        return SubspaceOperator(self.matrix + other.matrix, self.basis)

    def shifted(self, energy: float) -> "SubspaceOperator":
        """Operator plus ``energy`` times the identity (a uniform field offset)."""
        return SubspaceOperator(self.matrix + energy * np.eye(self.dim), self.basis)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Vacuum amplitude plus amplitudes over one excitation sector."""

    vacuum: complex
    amplitudes: np.ndarray
    basis: ExcitationBasis

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.basis.dim:
            raise DynamicsError(f"expected {self.basis.dim} amplitudes, got {amps.shape[0]}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "vacuum", complex(self.vacuum))

    @property
    def norm(self) -> float:
        return float(np.sqrt(abs(self.vacuum) ** 2 + np.vdot(self.amplitudes, self.amplitudes).real))

    def is_normalized(self, tol: float = 1e-10) -> bool:
        return abs(self.norm - 1.0) <= tol

    def amplitude(self, sites) -> complex:
        return complex(self.amplitudes[self.basis.index(sites)])

    @classmethod
    def excitation(cls, n_sites: int, sites, *, vacuum_weight: float = 0.0, k: int | None = None) -> "StateVector":
        """Basis state on ``sites``, optionally in superposition with the vacuum.

        ``vacuum_weight`` is the probability of the vacuum component; with 0.5 the
        state is ``(|vac> + |sites>)/sqrt(2)``.
        """
        sites = (sites,) if isinstance(sites, (int, np.integer)) else tuple(sites)
        basis = ExcitationBasis(n_sites, len(sites) if k is None else k)
        amps = np.zeros(basis.dim, dtype=np.complex128)
        amps[basis.index(sites)] = np.sqrt(1.0 - vacuum_weight)
        return cls(np.sqrt(vacuum_weight), amps, basis)

    @classmethod
    def from_vector(cls, vec, n_sites: int, k: int = 1, vacuum: complex = 0.0) -> "StateVector":
        return cls(vacuum, np.asarray(vec, dtype=np.complex128), ExcitationBasis(n_sites, k))

    def to_dict(self) -> dict:
        return {
            "basis": self.basis.to_dict(),
            "vacuum": [self.vacuum.real, self.vacuum.imag],
            "amplitudes": [[a.real, a.imag] for a in self.amplitudes],
        }

    @classmethod
    def from_dict(cls, data) -> "StateVector":
        basis = ExcitationBasis(int(data["basis"]["n_sites"]), int(data["basis"]["k"]))
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
        return cls(complex(*data["vacuum"]), amps, basis)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class Schedule:
    """Piecewise-constant evolution: ``(operator, duration)`` segments applied in order."""

    segments: tuple[tuple[SubspaceOperator, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        segs = tuple((op, float(t)) for op, t in self.segments)
        for _, t in segs:
            if t < 0:
                raise DynamicsError(f"negative segment duration {t}")
        object.__setattr__(self, "segments", segs)

    @property
    def total_time(self) -> float:
        return sum(t for _, t in self.segments)


def assemble(spec: NetworkSpec, k: int = 1) -> SubspaceOperator:
    """Hamiltonian of ``spec`` restricted to the k-excitation sector.

    For k=2 the matrix element ``<{a,c}|H|{a,b}>`` is the hop b -> c, with no
    fermionic sign factors (hard-core occupation basis); the diagonal is the sum
    of the two on-site energies.
    """
    if k not in (1, 2):
        raise DynamicsError(f"assemble supports k=1 or k=2, got {k}")
    basis = ExcitationBasis(spec.n_sites, k)
    single = spec.hop_matrix()
    if k == 1:
        return SubspaceOperator(single, basis)
    hops = single.copy()
    np.fill_diagonal(hops, 0.0)
    return SubspaceOperator(kernels.pair_hamiltonian(hops, spec.onsite_energies()), basis)


def operator(matrix, basis: ExcitationBasis | None = None) -> SubspaceOperator:
    return SubspaceOperator(np.asarray(matrix, dtype=np.complex128), basis)


def _check_dims(H: SubspaceOperator, psi: StateVector):
    if H.dim != psi.basis.dim:
        raise DynamicsError(f"operator dimension {H.dim} does not match state dimension {psi.basis.dim}")


def propagate(H: SubspaceOperator, t: float, psi: StateVector) -> StateVector:
    """Apply ``exp(-i H t)``; the vacuum amplitude is unchanged."""
    _check_dims(H, psi)
    return StateVector(psi.vacuum, H.propagator(t) @ psi.amplitudes, psi.basis)


def run_schedule(sched: Schedule, psi0: StateVector) -> StateVector:
    psi = psi0
    for op, t in sched.segments:
        psi = propagate(op, t, psi)
    return psi


def schedule_propagator(sched: Schedule) -> np.ndarray:
    """Full propagator of a schedule, computed by the ordered-product kernel."""
    if not sched.segments:
        raise DynamicsError("empty schedule has no defined dimension")
    hams = np.stack([op.matrix for op, _ in sched.segments])
    return kernels.ordered_exp_product(hams, [t for _, t in sched.segments])


def evolve_time_dependent(H_of_s: Callable[[float], np.ndarray | SubspaceOperator], T: float, steps: int) -> np.ndarray:
    """Propagator of a slowly varying Hamiltonian ``H(s)``, ``s = t / T`` in [0, 1].

    Midpoint rule: ``prod_m exp(-i H((m - 1/2)/steps) T/steps)``; second order in
    ``1/steps``.
    """
    if steps < 1:
        raise DynamicsError("steps must be >= 1")
    if T <= 0:
        raise DynamicsError("total time must be positive")
    mats = []
    for m in range(steps):
        h = H_of_s((m + 0.5) / steps)
        mats.append(h.matrix if isinstance(h, SubspaceOperator) else np.asarray(h, dtype=np.complex128))
    hams = np.stack(mats)
    return kernels.ordered_exp_product(hams, np.full(steps, T / steps))


def arrival_probability(psi: StateVector, sites: Sequence[int] | int) -> float:
    """Total weight on the basis states made of ``sites`` (one excitation: sum of |amp|^2)."""
    if isinstance(sites, (int, np.integer)):
        sites = (int(sites),)
    if psi.basis.k == 1:
        return float(sum(abs(psi.amplitude(s)) ** 2 for s in sites))
    wanted = set(sites)
    return float(
        sum(abs(a) ** 2 for st, a in zip(psi.basis.states, psi.amplitudes) if set(st) <= wanted)
    )


def site_amplitude_phase(psi: StateVector, site, *, min_reference: float = 1e-9) -> tuple[float, float]:
    """Magnitude of the amplitude on ``site`` and its phase relative to the vacuum, in (-pi, pi]."""
    if abs(psi.vacuum) <= min_reference:
        raise DynamicsError("vacuum amplitude too small to serve as phase reference")
    amp = psi.amplitude(site)
    rel = amp * np.conj(psi.vacuum)
    phase = float(np.angle(rel)) if abs(rel) > 0 else 0.0
    if phase <= -np.pi:
        phase += 2 * np.pi
    return abs(amp), phase
