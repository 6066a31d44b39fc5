# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Both kernels mirror :mod:`spinweave._kernels_py` exactly; the backend is chosen
in :mod:`spinweave.kernels`.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin
from scipy.linalg.cython_lapack cimport zheevd
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()


def ordered_exp_product(const double complex[:, :, ::1] hams, const double[::1] durations):
    """Return exp(-i H[m-1] dt[m-1]) ... exp(-i H[0] dt[0]) for a stack of Hermitian H."""
    cdef int nseg = hams.shape[0]
    cdef int n = hams.shape[1]
    if hams.shape[2] != n:
        raise ValueError("Hamiltonian stack must be square")
    if durations.shape[0] != nseg:
        raise ValueError("one duration per Hamiltonian required")
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)

    # Fortran-ordered scratch; column k of `vecs` is eigenvector k.
    cdef double complex[::1, :] vecs = np.empty((n, n), dtype=np.complex128, order="F")
    cdef double complex[::1, :] scaled = np.empty((n, n), dtype=np.complex128, order="F")
    cdef double complex[::1, :] step = np.empty((n, n), dtype=np.complex128, order="F")
    cdef double complex[::1, :] acc = np.zeros((n, n), dtype=np.complex128, order="F")
    cdef double complex[::1, :] tmp = np.empty((n, n), dtype=np.complex128, order="F")
    cdef double[::1] evals = np.empty(n, dtype=np.float64)
    # divide-and-conquer workspace, sized for jobz="V"
    cdef int lwork = 2 * n + n * n
    cdef int lrwork = 1 + 5 * n + 2 * n * n
    cdef int liwork = 3 + 5 * n
    cdef double complex[::1] work = np.empty(lwork, dtype=np.complex128)
    cdef double[::1] rwork = np.empty(lrwork, dtype=np.float64)
    cdef int[::1] iwork = np.empty(liwork, dtype=np.intc)

    cdef int i, j, k, m, info = 0, failed = -1
    cdef char jobz = b"V"
    cdef char uplo = b"L"
    cdef char no = b"N"
    cdef char ct = b"C"
    cdef double complex one = 1.0
    cdef double complex zero = 0.0
    cdef double complex phase
    cdef double angle
    cdef double complex* cur = &acc[0, 0]
    cdef double complex* nxt = &tmp[0, 0]
    cdef double complex* swap

    for i in range(n):
        acc[i, i] = 1.0

    with nogil:
        for m in range(nseg):
            for j in range(n):
                for i in range(n):
                    vecs[i, j] = hams[m, i, j]
            zheevd(&jobz, &uplo, &n, &vecs[0, 0], &n, &evals[0], &work[0], &lwork, &rwork[0], &lrwork,
                   &iwork[0], &liwork, &info)
            if info != 0:
                failed = m
                break
            for k in range(n):
                angle = -evals[k] * durations[m]
                phase = cos(angle) + 1j * sin(angle)
                for i in range(n):
                    scaled[i, k] = vecs[i, k] * phase
            zgemm(&no, &ct, &n, &n, &n, &one, &scaled[0, 0], &n, &vecs[0, 0], &n, &zero, &step[0, 0], &n)
            zgemm(&no, &no, &n, &n, &n, &one, &step[0, 0], &n, cur, &n, &zero, nxt, &n)
            swap = cur
            cur = nxt
            nxt = swap
    if failed >= 0:
        raise ArithmeticError(f"zheevd failed on segment {failed} (info={info})")
    if cur != &acc[0, 0]:
        return np.ascontiguousarray(tmp)
    return np.ascontiguousarray(acc)


def pair_hamiltonian(const double complex[:, ::1] single, const double[::1] onsite):
    """Two-excitation block over lexicographically ordered site pairs.

    ``single[c, b]`` is the hop b -> c; the diagonal of ``single`` is ignored.
    """
    cdef int n = single.shape[0]
    cdef int dim = n * (n - 1) // 2
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] h2 = out
    cdef int[:, ::1] index = np.full((n, n), -1, dtype=np.intc)
    cdef int a, b, c, p, q
    cdef double complex amp

    p = 0
    for a in range(n):
        for b in range(a + 1, n):
            index[a, b] = p
            index[b, a] = p
            p += 1

    for a in range(n):
        for b in range(a + 1, n):
            p = index[a, b]
            h2[p, p] = onsite[a] + onsite[b]
            for c in range(n):
                if c == a or c == b:
                    continue
                # move the excitation at b to c, a stays
                amp = single[c, b]
                if amp != 0:
                    q = index[a, c]
                    h2[q, p] = h2[q, p] + amp
                # move the excitation at a to c, b stays
                amp = single[c, a]
                if amp != 0:
                    q = index[b, c]
                    h2[q, p] = h2[q, p] + amp
    return out
