import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinweave.network import (
    BUILDERS,
    DualRailPorts,
    NetworkError,
    NetworkSpec,
    attach_onsite_block,
    build_flux_ring,
    build_hadamard_unit,
    build_linked_chains,
    build_pst_chain,
    build_single_qubit_network,
    build_y_junction,
    flip_site_gauge,
    gradient_diagonal,
    scale_edges,
)


def test_two_site_chain_hop():
    spec = build_pst_chain(2, 1.0)
    assert spec.edges == ((1, 2, 0.5 + 0j),)
    assert spec.port("in") == (1,) and spec.port("out") == (2,)


def test_six_site_hops():
    hops = [a.real for _, _, a in build_pst_chain(6).edges]
    np.testing.assert_allclose(hops, 0.5 * np.sqrt([5, 8, 9, 8, 5]), atol=1e-15)


@pytest.mark.parametrize("N", [3, 9, 10])
def test_chain_hops_mirror_symmetric(N):
    hops = [a for _, _, a in build_pst_chain(N, 2.3).edges]
    assert np.allclose(hops, hops[::-1])


def test_chain_rejects_short():
    with pytest.raises(NetworkError):
        build_pst_chain(1)


def test_gradient_values():
    np.testing.assert_allclose(gradient_diagonal(5, 2.0), [4, 2, 0, -2, -4])
    np.testing.assert_allclose(gradient_diagonal(4, 1.0, 0.3), [1.8, 0.8, -0.2, -1.2])
    assert np.all(gradient_diagonal(7, 0.0) == 0)
    assert abs(gradient_diagonal(8, 3.1).sum()) < 1e-12


def test_hop_matrix_is_hermitian_with_stored_direction():
    spec = NetworkSpec(3, ((1, 2, 1 + 2j), (2, 3, -0.5j)), ((2, 0.7),))
    h = spec.hop_matrix()
    assert np.allclose(h, h.conj().T)
    assert h[1, 0] == 1 + 2j  # <2|H|1>
    assert spec.edge(1, 2) == 1 + 2j and spec.edge(2, 1) == 1 - 2j
    assert spec.edge(1, 3) == 0
    assert h[1, 1] == 0.7


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_sites=2, edges=((1, 1, 1.0),)),
        dict(n_sites=2, edges=((1, 2, 1.0), (2, 1, 1.0))),
        dict(n_sites=2, edges=((1, 3, 1.0),)),
        dict(n_sites=2, ports={"in": (1, 1)}),
        dict(n_sites=2, onsite=((1, 0.1), (1, 0.2))),
        dict(n_sites=0),
    ],
)
def test_invalid_specs_rejected(kwargs):
    with pytest.raises(NetworkError):
        NetworkSpec(**kwargs)


def test_dual_rail_ports_distinct():
    with pytest.raises(NetworkError):
        DualRailPorts(1, 2, 2, 3)


def test_y_junction_layout():
    spec = build_y_junction(4)
    assert spec.n_sites == 5
    assert spec.port("in_pair") == (1, 2) and spec.port("out") == (5,)
    assert np.isclose(spec.edge(1, 3), spec.edge(2, 3))
    with pytest.raises(NetworkError):
        build_y_junction(2)


def test_flux_ring_size_and_phase():
    spec = build_flux_ring(4, 1.0, phi=0.6)
    assert spec.n_sites == 6 and len(spec.edges) == 6
    # product of hop phases around the ring orientation equals the flux
    h = spec.hop_matrix()
    loop = [1, 3, 4, 2, 6, 5, 1]
    prod = np.prod([h[b - 1, a - 1] for a, b in zip(loop, loop[1:])])
    assert np.isclose(np.angle(prod), 0.6)


def test_flux_ring_gauges_share_spectrum():
    a = np.linalg.eigvalsh(build_flux_ring(5, 1.0, 1.1, "loop").hop_matrix())
    b = np.linalg.eigvalsh(build_flux_ring(5, 1.0, 1.1, "edge").hop_matrix())
    np.testing.assert_allclose(a, b, atol=1e-12)
    with pytest.raises(NetworkError):
        build_flux_ring(5, 1.0, 0.0, "nonsense")


def test_hadamard_unit_signs():
    spec = build_hadamard_unit(0.5)
    assert spec.edge(2, 3) == -0.5
    assert sum(1 for e in spec.edges if e[2].real > 0) == 3


def test_single_qubit_network_shape():
    spec = build_single_qubit_network(1.0, 2.0, 3.0)
    assert spec.n_sites == 12 and len(spec.edges) == 14
    assert np.isclose(np.angle(spec.edge(7, 8)), 1.0)
    assert np.isclose(np.angle(spec.edge(11, 12)), 3.0)


def test_linked_chains_decouple_at_zero_angle():
    spec = build_linked_chains(4, 2, 0.0, 0.3)
    assert len(spec.edges) == 6
    with pytest.raises(NetworkError):
        build_linked_chains(4, 4, 0.1, 0.1)


def test_onsite_block_adds():
    spec = attach_onsite_block(build_pst_chain(6), 3, 100.0)
    assert spec.onsite_energies()[2] == 100.0
    assert attach_onsite_block(build_pst_chain(6), 3, 0.0).onsite_energies().sum() == 0


def test_flip_site_gauge_preserves_spectrum():
    spec = build_single_qubit_network(0.4, 1.3, 2.2)
    a = np.linalg.eigvalsh(spec.hop_matrix())
    b = np.linalg.eigvalsh(flip_site_gauge(spec, 8).hop_matrix())
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_scale_edges_length_check():
    with pytest.raises(NetworkError):
        scale_edges(build_pst_chain(4), [1.0])


@pytest.mark.parametrize(
    "name,kwargs",
    [
        ("pst", dict(N=6)),
        ("rotation", dict(beta=1.0, gamma_mid=2.0, delta_out=3.0)),
        ("ring", dict(N=4, phi=0.7)),
        ("linked", dict(N=4, R=2, theta=0.5, phi=0.2)),
    ],
)
def test_json_round_trip(tmp_path, name, kwargs):
    spec = BUILDERS[name](**kwargs)
    path = tmp_path / "net.json"
    spec.save(path)
    back = NetworkSpec.load(path)
    assert back == spec


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(NetworkError):
        NetworkSpec.load(path)
    path.write_text(json.dumps({"n_sites": 2, "edges": [[1, 2, 0.5]]}))
    with pytest.raises(NetworkError):
        NetworkSpec.load(path)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(2, 6),
    amps=st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=5, max_size=5),
)
def test_dict_round_trip_property(n, amps):
    edges = tuple((i, i + 1, amps[i - 1]) for i in range(1, n))
    spec = NetworkSpec(n, edges, ((1, 0.25),), {"in": (1,), "out": (n,)})
    assert NetworkSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec
