"""Logical gates built from network topology, exchange statistics and holonomies.

A dual-rail qubit stores ``|0_L>`` as an excitation on rail 0 and ``|1_L>`` as
an excitation on rail 1. A network acts as a gate when, at its transfer time,
both rail inputs arrive at the rail outputs with unit probability; the 2x2 block
of the propagator between those ports is the logical unitary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import comb

from .dynamics import StateVector, SubspaceOperator, assemble, evolve_time_dependent, propagate
from .network import (
    DualRailPorts,
    NetworkSpec,
    attach_onsite_block,
    build_flux_ring,
    build_hadamard_section,
    build_linked_chains,
    build_pst_chain,
    build_single_qubit_network,
    gradient_diagonal,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
LEAKAGE_LIMIT = 0.1


class GateError(ValueError):
    pass


def phase_gate(x: float) -> np.ndarray:
    """``diag(1, e^{ix})``."""
    return np.diag([1.0, np.exp(1j * x)])


def gate_fidelity(M: np.ndarray, target: np.ndarray) -> float:
    """``|tr(target^dag M)|^2 / d^2``: 1 iff M equals target up to a global phase."""
    M = np.asarray(M, complex)
    target = np.asarray(target, complex)
    d = target.shape[0]
    return float(abs(np.trace(target.conj().T @ M)) ** 2 / d**2)


def phase_aligned_distance(U: np.ndarray, V: np.ndarray) -> float:
    """Trace distance ``||U - e^{ia} V||_1 / 2`` after choosing the best global phase ``a``."""
    ov = np.trace(V.conj().T @ U)
    ph = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(0.5 * np.linalg.svd(U - ph * V, compute_uv=False).sum())


@dataclass(frozen=True)
class LogicalUnitary:
    """Logical action of a dual-rail network: columns are the images of ``|0_L>``, ``|1_L>``."""

    matrix: np.ndarray
    arrival_probability: float

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise GateError(f"logical matrix must be 2x2, got {m.shape}")
        if np.linalg.svd(m, compute_uv=False).max() > 1 + 1e-9:
            raise GateError("logical matrix is not sub-unitary")
        object.__setattr__(self, "matrix", m)

    @property
    def is_unitary(self) -> bool:
        return bool(np.allclose(self.matrix.conj().T @ self.matrix, np.eye(2), atol=1e-8))

    def fidelity(self, target) -> float:
        return gate_fidelity(self.matrix, target)

    def report(self, target, leakage: float = 0.0) -> dict:
        return gate_report(self.matrix, self.arrival_probability, target, leakage)


def gate_report(matrix, arrival: float, target, leakage: float = 0.0) -> dict:
    """JSON-ready gate summary."""
    m = np.asarray(matrix, complex).reshape(-1)
    return {
        "matrix": [[float(z.real), float(z.imag)] for z in m],
        "arrival": float(arrival),
        "fidelity_to_target": gate_fidelity(matrix, target),
        "leakage": float(leakage),
    }


def logical_unitary(spec: NetworkSpec, ports: DualRailPorts | None, t: float) -> LogicalUnitary:
    """Propagate each logical input for time ``t`` and read the rail outputs."""
    ports = ports or DualRailPorts.from_spec(spec)
    U = assemble(spec, 1).propagator(t)
    ins = [ports.rail0_in - 1, ports.rail1_in - 1]
    outs = [ports.rail0_out - 1, ports.rail1_out - 1]
    block = U[np.ix_(outs, ins)]
    arrival = float(np.min(np.sum(np.abs(block) ** 2, axis=0)))
    return LogicalUnitary(block, arrival)


def disjoint_union(a: NetworkSpec, b: NetworkSpec, prefix: tuple[str, str] = ("a_", "b_")) -> NetworkSpec:
    """Place two networks side by side; ``b``'s sites are shifted past ``a``'s."""
    off = a.n_sites
    edges = tuple(a.edges) + tuple((i + off, j + off, amp) for i, j, amp in b.edges)
    onsite = tuple(a.onsite) + tuple((i + off, e) for i, e in b.onsite)
    ports = {prefix[0] + k: v for k, v in a.ports.items()}
    ports.update({prefix[1] + k: tuple(s + off for s in v) for k, v in b.ports.items()})
    return NetworkSpec(a.n_sites + b.n_sites, edges, onsite, ports)


# --- phase, Hadamard and rotation networks ---------------------------------------


def ab_phase_network(N: int, lam: float = 1.0, phi: float = 0.0, gauge: str = "transport") -> NetworkSpec:
    """Rail 1 is a flux ring between its in/out sites, rail 0 a plain N-site chain."""
    ring = build_flux_ring(N, lam, phi, gauge)
    net = disjoint_union(ring, build_pst_chain(N, lam), ("ring_", "chain_"))
    ports = DualRailPorts(net.port("chain_in")[0], net.port("ring_in")[0], net.port("chain_out")[0], net.port("ring_out")[0])
    return NetworkSpec(net.n_sites, net.edges, net.onsite, {**net.ports, **ports.as_ports()})


def ab_phase_gate(N: int, lam: float = 1.0, phi: float = 0.0, gauge: str = "transport") -> LogicalUnitary:
    """Logical action of the flux-ring phase gate at ``t = pi / lam``.

    With the phase carried along the transport direction the ring arm behaves as
    ``cos(d) J_x + sin(d) J_y``, transfer stays perfect and the gate is
    ``diag(1, e^{i phi})`` up to a global phase. With ``gauge="loop"`` the flux
    threads the ring and the two arms interfere, so arrival depends on ``phi``.
    """
    return logical_unitary(ab_phase_network(N, lam, phi, gauge), None, np.pi / lam)


def hadamard_gate(N: int = 6, section: int | None = None, lam: float = 1.0) -> LogicalUnitary:
    """Two parallel chains with one crossing link; Hadamard at ``t = pi / lam``."""
    section = (N // 2) if section is None else section
    return logical_unitary(build_hadamard_section(N, section, lam), None, np.pi / lam)


def rotation_gate(beta: float, gamma_mid: float, delta_out: float, lam: float = 1.0) -> LogicalUnitary:
    """Twelve-site network with two crossing units and three phased links."""
    return logical_unitary(build_single_qubit_network(beta, gamma_mid, delta_out, lam), None, np.pi / lam)


def rotation_target(beta: float, gamma_mid: float, delta_out: float) -> np.ndarray:
    """``D(delta) H D(gamma) H D(beta)``; the first phase acts first."""
    return phase_gate(delta_out) @ HADAMARD @ phase_gate(gamma_mid) @ HADAMARD @ phase_gate(beta)


# --- chain-mediated CNOT ------------------------------------------------------------


def cnot_operator(N: int, lam: float = 1.0) -> SubspaceOperator:
    """Chain plus target qubit in the basis ``|n, b>``, index ``b*N + n - 1``.

    Within each target block the hop ``n -> n+1`` is ``lam sqrt(n (2N - n))/2``; the
    control term couples ``|N,0>`` and ``|N,1>`` with ``-lam N / 2``.
    """
    if N < 1:
        raise GateError("N must be >= 1")
    H = np.zeros((2 * N, 2 * N), dtype=complex)
    for b in (0, 1):
        for n in range(1, N):
            h = 0.5 * lam * math.sqrt(n * (2 * N - n))
            H[b * N + n - 1, b * N + n] = H[b * N + n, b * N + n - 1] = h
    H[N - 1, 2 * N - 1] = H[2 * N - 1, N - 1] = -0.5 * lam * N
    return SubspaceOperator(H)


def cnot_chain_relabel(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Permutation and sign gauge mapping the CNOT basis onto a 2N-site chain.

    ``|n,0> -> site n``, ``|n,1> -> site 2N+1-n`` with a sign flip on the ``b=1``
    block. Returns ``(perm, signs)`` such that ``S P H P^T S`` is the chain matrix.
    """
    perm = np.empty(2 * N, dtype=int)
    for n in range(1, N + 1):
        perm[n - 1] = n - 1
        perm[N + n - 1] = 2 * N - n
    signs = np.concatenate([np.ones(N), -np.ones(N)])
    return perm, signs


def cnot_chain_deviation(N: int, lam: float = 1.0) -> float:
    """Max entry difference between the gauged CNOT matrix and the 2N perfect chain."""
    H = cnot_operator(N, lam).matrix
    perm, signs = cnot_chain_relabel(N)
    mapped = np.zeros_like(H)
    gauged = H * np.outer(signs, signs)
    mapped[np.ix_(perm, perm)] = gauged
    chain = assemble(build_pst_chain(2 * N, lam), 1).matrix
    return float(np.abs(mapped - chain).max())


def cnot_flip_probability_closed(N: int, t, lam: float = 1.0):
    """Closed-form probability that the target has flipped, starting from ``|1,0>``.

    Binomial tail: ``sum_{n=N+1}^{2N} C(2N-1, n-1) x^{n-1} (1-x)^{2N-n}`` with
    ``x = sin^2(lam t / 2)``.
    """
    x = np.sin(0.5 * lam * np.asarray(t, dtype=float)) ** 2
    n = np.arange(N + 1, 2 * N + 1)
    terms = comb(2 * N - 1, n - 1) * np.power.outer(x, n - 1) * np.power.outer(1 - x, 2 * N - n)
    out = terms.sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def simulate_cnot(N: int, t: float, lam: float = 1.0) -> tuple[float, StateVector]:
    """Evolve ``|1,0>`` (control excitation at the far end) and measure the flip probability."""
    H = cnot_operator(N, lam)
    psi0 = StateVector.from_vector(np.eye(2 * N)[0], 2 * N)
    psi = propagate(H, t, psi0)
    return float(np.sum(np.abs(psi.amplitudes[N:]) ** 2)), psi


def cnot_flip_time(N: int, lam: float = 1.0) -> float:
    """First peak of the end-to-end return ``|<1,1|psi(t)>|^2`` (grid search, then refinement).

    The flip probability itself saturates on a broad plateau, so the sharp return
    peak is used to locate the flip.
    """
    H = cnot_operator(N, lam)
    w, v = H.eig
    row, col = v[N], v.conj()[0]

    def ret(t):
        return float(abs(np.sum(row * np.exp(-1j * w * t) * col)) ** 2)

    grid = np.linspace(0, 2 * np.pi / lam, 2001)
    k = int(np.argmax([ret(t) for t in grid]))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    res = minimize_scalar(lambda t: -ret(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return float(res.x)


def cnot_flip_width(N: int, lam: float = 1.0, low: float = 0.1, high: float = 0.9) -> float:
    """Rise time of the flip probability between ``low`` and ``high`` on ``[0, pi/lam]``.

    The flip probability is a binomial tail in ``sin^2(lam t/2)``, monotone on that
    interval.
    """
    f = lambda t, level: cnot_flip_probability_closed(N, t, lam) - level
    t_end = np.pi / lam
    return brentq(f, 0, t_end, args=(high,), xtol=1e-14) - brentq(f, 0, t_end, args=(low,), xtol=1e-14)


def cnot_gate_flip(N: int, lam: float = 1.0) -> dict:
    """Control-conditioned target action: no excitation leaves the target alone."""
    t = cnot_flip_time(N, lam)
    p, psi = simulate_cnot(N, t, lam)
    return {"flip_time": t, "flip_probability": p, "end_return": float(abs(psi.amplitudes[N]) ** 2), "width": cnot_flip_width(N, lam)}


# --- two-excitation exchange --------------------------------------------------------


@dataclass(frozen=True)
class ExchangeResult:
    source: tuple[int, int]
    target: tuple[int, int]
    arrival: float
    ratio: complex


def two_excitation_exchange(N: int, lam: float = 1.0, pair: tuple[int, int] = (1, 2)) -> ExchangeResult:
    """Transfer two excitations through a perfect chain and compare with two single transfers.

    ``ratio`` is the pair amplitude divided by the product of the two single-excitation
    amplitudes; hard-core excitations swap order on the way, which costs a sign.
    """
    i, j = sorted(pair)
    if not 1 <= i < j <= N:
        raise GateError(f"pair must be two distinct sites in 1..{N}")
    chain = build_pst_chain(N, lam)
    t0 = np.pi / lam
    U1 = assemble(chain, 1).propagator(t0)
    H2 = assemble(chain, 2)
    psi = propagate(H2, t0, StateVector.excitation(N, (i, j)))
    target = (N + 1 - j, N + 1 - i)
    amp = psi.amplitude(target)
    single = U1[N - i, i - 1] * U1[N - j, j - 1]
    return ExchangeResult((i, j), target, float(abs(amp) ** 2), complex(amp / single))


def exchange_gate(N: int, lam: float = 1.0, pair: tuple[int, int] = (1, 2)) -> np.ndarray:
    """Two-qubit gate from sharing one chain.

    Qubit A has its rail-1 site at ``pair[0]`` and qubit B at ``pair[1]``; the rail-0
    excitations sit off the chain and do not evolve. Basis order ``|AB>`` = 00, 01,
    10, 11.
    """
    i, j = sorted(pair)
    chain = build_pst_chain(N, lam)
    t0 = np.pi / lam
    U1 = assemble(chain, 1).propagator(t0)
    both = propagate(assemble(chain, 2), t0, StateVector.excitation(N, (i, j)))
    return np.diag([1.0, U1[N - j, j - 1], U1[N - i, i - 1], both.amplitude((N + 1 - j, N + 1 - i))])


def strip_local_z(G: np.ndarray) -> np.ndarray:
    """Remove single-qubit z phases (and a global phase) from a diagonal two-qubit gate."""
    d = np.diag(G) / G[0, 0]
    local = np.kron(phase_gate(np.angle(d[2])), phase_gate(np.angle(d[1])))
    return np.diag(d) @ local.conj()


def cphase_fidelity(N: int, lam: float = 1.0, pair: tuple[int, int] = (1, 2)) -> float:
    return gate_fidelity(strip_local_z(exchange_gate(N, lam, pair)), CZ)


# --- Zeeman blocking ----------------------------------------------------------------


def block_leakage(N: int, g_block: float, lam: float = 1.0, site: int | None = None, samples: int = 801) -> float:
    """Largest population found at or beyond a detuned site during one transfer time.

    The blocking fidelity is ``1 - leakage``. The default blocked site is the middle
    of the chain.
    """
    site = (N + 1) // 2 if site is None else site
    spec = attach_onsite_block(build_pst_chain(N, lam), site, g_block)
    H = assemble(spec, 1)
    w, v = H.eig
    ts = np.linspace(0, np.pi / lam, samples)
    amps = v @ (np.exp(-1j * np.outer(w, ts)) * v.conj()[0][:, None])
    return float(np.max(np.sum(np.abs(amps[site - 1 :]) ** 2, axis=0)))


def blocked_transfer(N: int, g_block: float, lam: float = 1.0, site: int | None = None) -> float:
    """End-to-end transfer probability at ``pi / lam`` with a block in place."""
    site = (N + 1) // 2 if site is None else site
    spec = attach_onsite_block(build_pst_chain(N, lam), site, g_block)
    U = assemble(spec, 1).propagator(np.pi / lam)
    return float(abs(U[N - 1, 0]) ** 2)


def zeeman_block_scaling(N: int = 6, lam: float = 1.0, g_values=None) -> tuple[float, float, np.ndarray]:
    """Fit ``1 - f = alpha / g^p``; returns ``(-p, alpha, leakages)``."""
    g = np.geomspace(10 * lam, 100 * lam, 10) if g_values is None else np.asarray(g_values, float)
    leak = np.array([block_leakage(N, x, lam) for x in g])
    slope, icpt = np.polyfit(np.log(g), np.log(leak), 1)
    return float(slope), float(np.exp(icpt)), leak


# --- non-abelian holonomy -----------------------------------------------------------


def holonomy_P(N: int, R: int) -> float:
    """Weight of the binomial top state beyond link R, times two."""
    if not 1 <= R <= N:
        raise GateError(f"R must lie in 1..{N}")
    n = np.arange(R + 1, N + 1)
    return float(2.0 * comb(N - 1, n - 1).sum() / 2.0**N)


def holonomy_s(P: float, theta: float) -> float:
    return 0.5 * math.sqrt((P * math.sin(theta)) ** 2 + (1 - P + P * math.cos(theta)) ** 2)


@dataclass(frozen=True)
class HolonomyParams:
    N: int
    R: int
    theta: float
    phi: float

    def __post_init__(self):
        if self.N < 2 or not 1 <= self.R <= self.N - 1:
            raise GateError(f"need N >= 2 and 1 <= R <= N-1, got N={self.N}, R={self.R}")

    @cached_property
    def P(self) -> float:
        return holonomy_P(self.N, self.R)

    @cached_property
    def s(self) -> float:
        return holonomy_s(self.P, self.theta)


def connection_matrices(P: float, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """``(A_theta, A_phi)`` in the form used by the closed-form holonomy."""
    a_theta = 0.5j * P * PAULI_Y
    a_phi = 0.5j * (P * math.sin(theta) * PAULI_X + (1 - P + P * math.cos(theta)) * PAULI_Z)
    return a_theta, a_phi


def eigvec_pair(params: HolonomyParams, theta: float | None = None, phi: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """The two top eigenvectors of the linked chains over sites ``1..N`` then ``1'..N'``."""
    N, R = params.N, params.R
    th = params.theta if theta is None else theta
    ph = params.phi if phi is None else phi
    w = np.sqrt(comb(N - 1, np.arange(N))) / math.sqrt(2.0 ** (N - 1))
    c, s = math.cos(th / 2), math.sin(th / 2)
    near = np.arange(N) < R
    top1 = np.where(near, w, c * w).astype(complex)
    bot1 = np.where(near, 0.0, -s * np.exp(-1j * ph) * w)
    top2 = np.where(near, 0.0, s * np.exp(1j * ph) * w).astype(complex)
    bot2 = np.where(near, w, c * w).astype(complex)
    psi1 = np.concatenate([top1, bot1])
    psi2 = np.exp(-1j * ph) * np.concatenate([top2, bot2])
    return psi1, psi2


def top_energy(N: int, lam: float = 1.0) -> float:
    return 0.5 * lam * (N - 1)


def eigen_residual(params: HolonomyParams, lam: float = 1.0) -> float:
    """Largest ``||H psi - E_max psi||`` over the pair."""
    H = assemble(build_linked_chains(params.N, params.R, params.theta, params.phi, lam), 1).matrix
    E = top_energy(params.N, lam)
    return max(float(np.linalg.norm(H @ v - E * v)) for v in eigvec_pair(params))


def holonomy_closed_form(params: HolonomyParams) -> np.ndarray:
    """Closed-form holonomy of the loop (0,0) -> (theta,0) -> (theta,phi) -> (0,phi).

    ``exp(-i P theta sigma_y / 2) exp(A_phi phi) exp(i P theta sigma_y / 2)``, written as
    ``cos(s phi) + (sin(s phi) / s) exp(-i P theta sigma_y) A_phi``.
    """
    P, th, ph = params.P, params.theta, params.phi
    s = holonomy_s(P, th)
    _, a_phi = connection_matrices(P, th)
    rot = math.cos(P * th) * np.eye(2) - 1j * math.sin(P * th) * PAULI_Y
    return math.cos(s * ph) * np.eye(2) + (math.sin(s * ph) / s) * rot @ a_phi


def holonomy_transport(params: HolonomyParams, steps: int = 64) -> np.ndarray:
    """Holonomy from the connection computed numerically on the eigenvector pair.

    The connection ``A_ij = -<psi_i | d psi_j>`` is obtained by central differences
    and integrated along each leg with midpoint matrix exponentials, so this is an
    independent oracle for the adiabatic run.
    """
    from scipy.linalg import expm

    def conn(th, ph, which, h=1e-6):
        if which == "theta":
            a, b = eigvec_pair(params, th + h, ph), eigvec_pair(params, th - h, ph)
        else:
            a, b = eigvec_pair(params, th, ph + h), eigvec_pair(params, th, ph - h)
        base = eigvec_pair(params, th, ph)
        d = [(x - y) / (2 * h) for x, y in zip(a, b)]
        return -np.array([[np.vdot(base[i], d[j]) for j in range(2)] for i in range(2)])

    th, ph = params.theta, params.phi
    U = np.eye(2, dtype=complex)
    legs = [
        (lambda u: (u * th, 0.0), "theta", th),
        (lambda u: (th, u * ph), "phi", ph),
        (lambda u: ((1 - u) * th, ph), "theta", -th),
    ]
    for path, which, span in legs:
        for m in range(steps):
            a, b = path((m + 0.5) / steps)
            U = expm(conn(a, b, which) * span / steps) @ U
    return U


def holonomy_hadamard_params(P: float) -> tuple[float, float]:
    """``(theta, phi)`` for which the closed-form holonomy is a Hadamard.

    ``theta`` is the smallest root in ``[0, pi/(P+1)]`` of equal x and z
    coefficients; ``phi = pi / (2 s)``.
    """
    if not 0 < P <= 1:
        raise GateError(f"P must lie in (0, 1], got {P}")

    def f(th):
        x = P * math.sin((P + 1) * th) + (1 - P) * math.sin(P * th)
        z = (1 - P) * math.cos(P * th) + P * math.cos((P + 1) * th)
        return x - z

    hi = np.pi / (P + 1)
    if f(0.0) * f(hi) > 0:
        raise GateError(f"no Hadamard root in [0, pi/(P+1)] for P={P}")
    theta = brentq(f, 0.0, hi, xtol=1e-15, rtol=1e-15) if f(hi) != 0 else hi
    return theta, np.pi / (2 * holonomy_s(P, theta))


def _smooth(u: float) -> float:
    # zero velocity at both ends of every leg
    return u - math.sin(2 * np.pi * u) / (2 * np.pi)


@dataclass(frozen=True)
class AdiabaticResult:
    matrix: np.ndarray
    leakage: float
    T: float
    steps: int

    @property
    def flagged(self) -> bool:
        return self.leakage > LEAKAGE_LIMIT


def adiabatic_holonomy(N: int, R: int, theta: float, phi: float, T: float, steps: int = 4000,
                       lam: float = 1.0) -> AdiabaticResult:
    """Drive the linked chains around the parameter loop and project onto the top pair.

    Each leg uses a smooth ramp; leg durations are proportional to the leg's extent in
    parameter space. The matrix is ``<psi_i(end)|U|psi_j(start)> e^{i E_max T}``, with
    the end frame at ``(0, phi)``.
    """
    params = HolonomyParams(N, R, theta, phi)
    lengths = np.array([abs(theta), abs(phi), abs(theta)])
    if lengths.sum() == 0:
        return AdiabaticResult(np.eye(2, dtype=complex), 0.0, T, steps)
    frac = lengths / lengths.sum()

    def ham(th, ph):
        return assemble(build_linked_chains(N, R, th, ph, lam), 1).matrix

    legs = [
        lambda u: ham(_smooth(u) * theta, 0.0),
        lambda u: ham(theta, _smooth(u) * phi),
        lambda u: ham((1 - _smooth(u)) * theta, phi),
    ]
    U = np.eye(2 * N, dtype=complex)
    for leg, f in zip(legs, frac):
        if f == 0:
            continue
        U = evolve_time_dependent(leg, T * f, max(1, int(round(steps * f)))) @ U
    start = np.column_stack(eigvec_pair(params, 0.0, 0.0))
    end = np.column_stack(eigvec_pair(params, 0.0, phi))
    M = end.conj().T @ U @ start * np.exp(1j * top_energy(N, lam) * T)
    leakage = 1.0 - float(np.sum(np.abs(M) ** 2)) / 2
    return AdiabaticResult(M, leakage, T, steps)


def prepare_top_eigenstate(N: int, lam: float = 1.0) -> StateVector:
    """Rotate ``|1>`` into the top eigenvector of ``lam J_x`` with ``lam (J_x + J_z)`` for ``pi/(sqrt2 lam)``."""
    hx = assemble(build_pst_chain(N, lam), 1).matrix
    H = SubspaceOperator(hx + np.diag(gradient_diagonal(N, lam)))
    return propagate(H, np.pi / (math.sqrt(2) * lam), StateVector.excitation(N, 1))


def top_eigenvector(N: int, lam: float = 1.0) -> np.ndarray:
    _, v = assemble(build_pst_chain(N, lam), 1).eig
    return v[:, -1]

