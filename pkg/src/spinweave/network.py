"""Spin networks as weighted graphs, plus constructors for the standard topologies.

Conventions
-----------
* Sites are numbered from 1, matching the ket labels ``|1>, ..., |N>``.
* An edge ``(i, j, amp)`` stores the one-excitation matrix element
  ``<j|H|i> = amp``; the reverse hop is ``conj(amp)``. For an XY coupling written
  as ``J (sx sx + sy sy)`` the stored amplitude is therefore ``2 J``.
* hbar = 1 and energies are in units of the chain strength ``lam``; the perfect
  transfer time of every chain built here is ``pi / lam``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np


class NetworkError(ValueError):
    """Raised for malformed network descriptions or invalid builder arguments."""


@dataclass(frozen=True)
class NetworkSpec:
    """Immutable description of a spin network restricted to hopping terms."""

    n_sites: int
    edges: tuple[tuple[int, int, complex], ...] = ()
    onsite: tuple[tuple[int, float], ...] = ()
    ports: Mapping[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_sites < 1:
            raise NetworkError(f"n_sites must be positive, got {self.n_sites}")
        edges = tuple((int(i), int(j), complex(a)) for i, j, a in self.edges)
        seen = set()
        for i, j, _ in edges:
            self._check_site(i)
            self._check_site(j)
            if i == j:
                raise NetworkError(f"self-loop on site {i}")
            key = frozenset((i, j))
            if key in seen:
                raise NetworkError(f"duplicate edge between {i} and {j}")
            seen.add(key)
        onsite = tuple((int(s), float(e)) for s, e in self.onsite)
        sites = [s for s, _ in onsite]
        for s in sites:
            self._check_site(s)
        if len(set(sites)) != len(sites):
            raise NetworkError("on-site energy listed twice for one site")
        ports = {}
        for name, members in dict(self.ports).items():
            members = tuple(int(s) for s in members)
            for s in members:
                self._check_site(s)
            if len(set(members)) != len(members):
                raise NetworkError(f"port {name!r} repeats a site")
            ports[str(name)] = members
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "onsite", onsite)
        object.__setattr__(self, "ports", ports)

    def _check_site(self, s):
        if not 1 <= s <= self.n_sites:
            raise NetworkError(f"site {s} outside 1..{self.n_sites}")

    def hop_matrix(self) -> np.ndarray:
        """One-excitation Hamiltonian (site ``n`` is row ``n - 1``)."""
        h = np.zeros((self.n_sites, self.n_sites), dtype=np.complex128)
        for i, j, amp in self.edges:
            h[j - 1, i - 1] += amp
            h[i - 1, j - 1] += np.conj(amp)
        for s, e in self.onsite:
            h[s - 1, s - 1] += e
        return h

    def onsite_energies(self) -> np.ndarray:
        e = np.zeros(self.n_sites)
        for s, val in self.onsite:
            e[s - 1] = val
        return e

    def edge(self, i: int, j: int) -> complex:
        """Matrix element ``<j|H|i>`` (0 when the sites are not linked)."""
        for a, b, amp in self.edges:
            if (a, b) == (i, j):
                return amp
            if (a, b) == (j, i):
                return np.conj(amp)
        return 0j

    def port(self, name: str) -> tuple[int, ...]:
        try:
            return self.ports[name]
        except KeyError:
            raise NetworkError(f"no port named {name!r}") from None

    def with_edges(self, edges) -> "NetworkSpec":
        return NetworkSpec(self.n_sites, tuple(edges), self.onsite, self.ports)

    def with_onsite(self, onsite) -> "NetworkSpec":
        return NetworkSpec(self.n_sites, self.edges, tuple(onsite), self.ports)

    def to_dict(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "edges": [[i, j, a.real, a.imag] for i, j, a in self.edges],
            "onsite": [[s, e] for s, e in self.onsite],
            "ports": {k: list(v) for k, v in self.ports.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "NetworkSpec":
        try:
            edges = [(int(i), int(j), complex(float(re), float(im))) for i, j, re, im in data["edges"]]
            onsite = [(int(s), float(e)) for s, e in data.get("onsite", [])]
            ports = {str(k): tuple(int(s) for s in v) for k, v in data.get("ports", {}).items()}
            n_sites = int(data["n_sites"])
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkError(f"malformed network description: {exc}") from exc
        return cls(n_sites, tuple(edges), tuple(onsite), ports)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "NetworkSpec":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise NetworkError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise NetworkError(f"{path}: expected a JSON object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class DualRailPorts:
    """Input and output sites of the two rails of a dual-rail qubit.

    ``|0_L>`` is an excitation on rail 0, ``|1_L>`` an excitation on rail 1.
    """

    rail0_in: int
    rail1_in: int
    rail0_out: int
    rail1_out: int

    def __post_init__(self):
        if len({self.rail0_in, self.rail1_in, self.rail0_out, self.rail1_out}) != 4:
            raise NetworkError("dual-rail ports must be four distinct sites")

    @classmethod
    def from_spec(cls, spec: NetworkSpec) -> "DualRailPorts":
        return cls(
            spec.port("rail0_in")[0],
            spec.port("rail1_in")[0],
            spec.port("rail0_out")[0],
            spec.port("rail1_out")[0],
        )

    def as_ports(self) -> dict[str, tuple[int, ...]]:
        return {
            "rail0_in": (self.rail0_in,),
            "rail1_in": (self.rail1_in,),
            "rail0_out": (self.rail0_out,),
            "rail1_out": (self.rail1_out,),
        }


def pst_hops(N: int, lam: float = 1.0) -> np.ndarray:
    """Hop amplitudes ``(lam/2) sqrt(n (N - n))`` for n = 1..N-1."""
    n = np.arange(1, N)
    return 0.5 * lam * np.sqrt(n * (N - n))


def build_pst_chain(N: int, lam: float = 1.0) -> NetworkSpec:
    """Perfect-transfer chain of N sites; its one-excitation block is ``lam * J_x``."""
    if N < 2:
        raise NetworkError(f"chain needs at least 2 sites, got {N}")
    if lam <= 0:
        raise NetworkError("lam must be positive")
    hops = pst_hops(N, lam)
    edges = tuple((n, n + 1, complex(hops[n - 1])) for n in range(1, N))
    return NetworkSpec(N, edges, (), {"in": (1,), "out": (N,)})


def gradient_diagonal(N: int, kappa: float, offset: float = 0.0) -> np.ndarray:
    """On-site energies of a linear field gradient, ``kappa * J_z`` plus a uniform offset.

    Entry ``n - 1`` is ``(kappa/2)(N + 1 - 2n) + offset``; site 1 is the ``M = +J``
    end.
    """
    if N < 2:
        raise NetworkError(f"gradient needs at least 2 sites, got {N}")
    n = np.arange(1, N + 1)
    return 0.5 * kappa * (N + 1 - 2 * n) + offset


def build_y_junction(N: int, lam: float = 1.0) -> NetworkSpec:
    """Chain whose first site is split into a symmetric pair.

    Sites 1 and 2 form the input pair, each coupled to site 3 with ``hop_1 / sqrt(2)``;
    sites 3..N+1 continue as sites 2..N of the perfect chain.
    """
    if N < 3:
        raise NetworkError(f"Y junction needs N >= 3, got {N}")
    hops = pst_hops(N, lam)
    edges = [(1, 3, hops[0] / np.sqrt(2)), (2, 3, hops[0] / np.sqrt(2))]
    edges += [(n + 1, n + 2, hops[n - 1]) for n in range(2, N)]
    return NetworkSpec(N + 1, tuple(edges), (), {"in_pair": (1, 2), "out": (N + 1,)})


def build_flux_ring(N: int, lam: float = 1.0, phi: float = 0.0, gauge: str = "loop") -> NetworkSpec:
    """Ring of two parallel branches between sites A (=1) and B (=2).

    Upper branch sites are ``3 .. N``, lower branch sites ``N+1 .. 2N-2``; the
    ring has ``L = 2(N - 1)`` edges. ``gauge`` places the phase:

    ``"loop"``
        every hop along the ring orientation A -> upper -> B -> lower -> A carries
        ``exp(i phi / L)``, so ``phi`` is the flux enclosed by the ring.
    ``"transport"``
        every hop in the A -> B direction on both branches carries
        ``exp(i phi / (N - 1))``; the one-excitation block is then
        ``cos(d) J_x + sin(d) J_y`` on the symmetric modes and the arriving state
        carries phase ``phi``. No net flux is enclosed.
    ``"edge"``
        the loop flux ``phi`` is placed entirely on the A -> upper hop (gauge
        equivalent to ``"loop"``).
    """
    if N < 3:
        raise NetworkError(f"flux ring needs N >= 3, got {N}")
    hops = pst_hops(N, lam)
    upper = [1] + list(range(3, N + 1)) + [2]
    lower = [1] + list(range(N + 1, 2 * N - 1)) + [2]
    n_edges = 2 * (N - 1)
    if gauge == "loop":
        fwd, back = np.exp(1j * phi / n_edges), np.exp(-1j * phi / n_edges)
    elif gauge == "transport":
        fwd = back = np.exp(1j * phi / (N - 1))
    elif gauge == "edge":
        fwd = back = 1.0
    else:
        raise NetworkError(f"unknown gauge {gauge!r}")
    edges = []
    for k in range(N - 1):
        amp = hops[k] / np.sqrt(2) if k in (0, N - 2) else hops[k]
        up_amp = amp * fwd
        if gauge == "edge" and k == 0:
            up_amp = amp * np.exp(1j * phi)
        edges.append((upper[k], upper[k + 1], complex(up_amp)))
        # "back" is the phase for the A -> B direction on the lower branch
        edges.append((lower[k], lower[k + 1], complex(amp * back)))
    return NetworkSpec(2 * N - 2, tuple(edges), (), {"in": (1,), "out": (2,)})


def build_hadamard_unit(scale: float = 1.0) -> NetworkSpec:
    """Four-site crossing unit: L1=1, L2=2, R1=3, R2=4.

    Hops L1-R1 = L2-R2 = L1-R2 = +s and L2-R1 = -s. In the basis
    ``(|L1> +- |L2>)/sqrt(2)`` it splits into two two-site links of strength
    ``sqrt(2) s``: the symmetric input goes to R2, the antisymmetric one to R1.
    Ports follow that routing, so the unit acts as a Hadamard on the dual-rail
    qubit.
    """
    if scale <= 0:
        raise NetworkError("scale must be positive")
    s = float(scale)
    edges = ((1, 3, s), (2, 4, s), (1, 4, s), (2, 3, -s))
    ports = {"rail0_in": (1,), "rail1_in": (2,), "rail0_out": (4,), "rail1_out": (3,)}
    return NetworkSpec(4, edges, (), ports)


def _two_rail_sites(N):
    # rail 0 occupies sites 1..N, rail 1 sites N+1..2N
    return (lambda n: n), (lambda n: N + n)


def build_parallel_chains(N: int, lam: float = 1.0) -> NetworkSpec:
    """Two uncoupled perfect chains used as a dual-rail wire."""
    hops = pst_hops(N, lam)
    r0, r1 = _two_rail_sites(N)
    edges = []
    for n in range(1, N):
        edges.append((r0(n), r0(n + 1), hops[n - 1]))
        edges.append((r1(n), r1(n + 1), hops[n - 1]))
    ports = DualRailPorts(r0(1), r1(1), r0(N), r1(N)).as_ports()
    return NetworkSpec(2 * N, tuple(edges), (), ports)


def build_hadamard_section(N: int, section: int, lam: float = 1.0) -> NetworkSpec:
    """Two parallel N-site chains whose link ``section`` is a Hadamard unit.

    The unit's scale is ``hop_section / sqrt(2)`` so the section keeps the
    strength of the chain it replaces. Rail 0 enters on the lower chain and
    leaves on the upper chain (the routing of :func:`build_hadamard_unit`).
    """
    if not 1 <= section <= N - 1:
        raise NetworkError(f"section must lie in 1..{N - 1}")
    hops = pst_hops(N, lam)
    r0, r1 = _two_rail_sites(N)
    edges = []
    for n in range(1, N):
        if n == section:
            s = hops[n - 1] / np.sqrt(2)
            edges += [
                (r0(n), r0(n + 1), s),
                (r1(n), r1(n + 1), s),
                (r0(n), r1(n + 1), s),
                (r1(n), r0(n + 1), -s),
            ]
        else:
            edges.append((r0(n), r0(n + 1), hops[n - 1]))
            edges.append((r1(n), r1(n + 1), hops[n - 1]))
    ports = DualRailPorts(r0(1), r1(1), r1(N), r0(N)).as_ports()
    return NetworkSpec(2 * N, tuple(edges), (), ports)


def build_single_qubit_network(beta: float, gamma_mid: float, delta_out: float, lam: float = 1.0) -> NetworkSpec:
    """Two six-site rails implementing ``D(delta) H D(gamma) H D(beta)``.

    Rail 0 is sites 1..6 (plain couplings), rail 1 is sites 7..12 and carries the
    phases on links 1, 3 and 5. Links 2 and 4 are crossing units with rail hops
    2 and crossings +-2, in mirror orientation so that the two units compose to
    the identity at zero phases. All labels are multiplied by ``lam/2``, making
    the network equivalent to two N=6 perfect chains (transfer time ``pi/lam``).
    """
    c = 0.5 * lam
    r0, r1 = _two_rail_sites(6)
    rail = [np.sqrt(5), 2.0, 3.0, 2.0, np.sqrt(5)]
    phase = {1: beta, 3: gamma_mid, 5: delta_out}
    edges = []
    for n in range(1, 6):
        edges.append((r0(n), r0(n + 1), c * rail[n - 1]))
        edges.append((r1(n), r1(n + 1), c * rail[n - 1] * np.exp(1j * phase.get(n, 0.0))))
    # link 2: rail1 -> rail0 is +2, rail0 -> rail1 is -2; link 4 mirrored
    edges += [(r1(2), r0(3), 2 * c), (r0(2), r1(3), -2 * c)]
    edges += [(r0(4), r1(5), 2 * c), (r1(4), r0(5), -2 * c)]
    ports = DualRailPorts(r0(1), r1(1), r0(6), r1(6)).as_ports()
    return NetworkSpec(12, tuple(edges), (), ports)


def build_linked_chains(N: int, R: int, theta: float, phi: float, lam: float = 1.0) -> NetworkSpec:
    """Two perfect chains joined at link R by a tunable crossing.

    Chain sites ``n`` are 1..N and primed sites ``n'`` are N+1..2N. Link R carries
    ``hop_R cos(theta/2)`` on both chains, ``<R+1|H|R'> = hop_R sin(theta/2) e^{i phi}``
    and ``<(R+1)'|H|R> = -hop_R sin(theta/2) e^{-i phi}``.
    """
    if not 1 <= R <= N - 1:
        raise NetworkError(f"link index R must lie in 1..{N - 1}, got {R}")
    hops = pst_hops(N, lam)
    top, bot = _two_rail_sites(N)
    edges = []
    for n in range(1, N):
        h = hops[n - 1] * (np.cos(theta / 2) if n == R else 1.0)
        edges.append((top(n), top(n + 1), h))
        edges.append((bot(n), bot(n + 1), h))
    hr = hops[R - 1] * np.sin(theta / 2)
    if hr != 0:
        edges.append((bot(R), top(R + 1), hr * np.exp(1j * phi)))
        edges.append((top(R), bot(R + 1), -hr * np.exp(-1j * phi)))
    ports = DualRailPorts(top(1), bot(1), top(N), bot(N)).as_ports()
    return NetworkSpec(2 * N, tuple(edges), (), ports)


def attach_onsite_block(spec: NetworkSpec, site: int, g_block: float) -> NetworkSpec:
    """Add a static detuning ``g_block`` to one site (a Zeeman block)."""
    spec._check_site(site)
    energies = dict(spec.onsite)
    energies[site] = energies.get(site, 0.0) + g_block
    return spec.with_onsite(sorted(energies.items()))


def scale_edges(spec: NetworkSpec, factors: Sequence[float]) -> NetworkSpec:
    """Multiply each edge amplitude by the matching factor (coupling disorder)."""
    factors = list(factors)
    if len(factors) != len(spec.edges):
        raise NetworkError("one factor per edge required")
    return spec.with_edges((i, j, a * f) for (i, j, a), f in zip(spec.edges, factors))


def flip_site_gauge(spec: NetworkSpec, site: int) -> NetworkSpec:
    """Negate every edge touching ``site`` (a local basis sign change)."""
    spec._check_site(site)
    return spec.with_edges((i, j, -a if site in (i, j) else a) for i, j, a in spec.edges)


BUILDERS = {
    "pst": build_pst_chain,
    "yjunction": build_y_junction,
    "ring": build_flux_ring,
    "hadamard": build_hadamard_unit,
    "hadamard-section": build_hadamard_section,
    "parallel": build_parallel_chains,
    "rotation": build_single_qubit_network,
    "linked": build_linked_chains,
}
