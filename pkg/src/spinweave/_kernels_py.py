"""Pure-numpy versions of the compiled kernels (same signatures, same results)."""
import numpy as np


def ordered_exp_product(hams, durations):
    """Return exp(-i H[m-1] dt[m-1]) ... exp(-i H[0] dt[0]) for a stack of Hermitian H."""
    hams = np.asarray(hams, dtype=np.complex128)
    durations = np.asarray(durations, dtype=np.float64)
    if hams.ndim != 3 or hams.shape[1] != hams.shape[2]:
        raise ValueError("Hamiltonian stack must be square")
    if durations.shape != (hams.shape[0],):
        raise ValueError("one duration per Hamiltonian required")
    n = hams.shape[1]
    if hams.shape[0] == 0:
        return np.eye(n, dtype=np.complex128)
    evals, vecs = np.linalg.eigh(hams)
    phases = np.exp(-1j * evals * durations[:, None])
    steps = (vecs * phases[:, None, :]) @ vecs.conj().transpose(0, 2, 1)
    acc = np.eye(n, dtype=np.complex128)
    for step in steps:
        acc = step @ acc
    return acc


def pair_hamiltonian(single, onsite):
    """Two-excitation block over lexicographically ordered site pairs.

    ``single[c, b]`` is the hop b -> c; the diagonal of ``single`` is ignored.
    """
    single = np.asarray(single, dtype=np.complex128)
    onsite = np.asarray(onsite, dtype=np.float64)
    n = single.shape[0]
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    index = {pair: p for p, pair in enumerate(pairs)}
    out = np.zeros((len(pairs), len(pairs)), dtype=np.complex128)
    for p, (a, b) in enumerate(pairs):
        out[p, p] = onsite[a] + onsite[b]
        for c in range(n):
            if c in (a, b):
                continue
            if single[c, b] != 0:
                out[index[tuple(sorted((a, c)))], p] += single[c, b]
            if single[c, a] != 0:
                out[index[tuple(sorted((b, c)))], p] += single[c, a]
    return out
