"""Hot loops, each with a numba and a pure-numpy implementation.

The numba versions are used unless numba is missing or LINDPOS_DISABLE_NUMBA
is set. Both paths must agree to round-off; ``tests/test_kernels.py`` checks it
and ``benchmarks/bench_kernels.py`` times them.
"""
from __future__ import annotations

import numpy as np

from .config import NUMBA_DISABLED

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None

HAVE_NUMBA = numba is not None and not NUMBA_DISABLED


# ---------------------------------------------------------------------------
# min eigenvalue of S[|psi><psi|] for a batch of pure states
# ---------------------------------------------------------------------------

def pure_output_min_eig_numpy(s: np.ndarray, psis: np.ndarray) -> np.ndarray:
    m, d = psis.shape
    proj = psis[:, :, None] * psis.conj()[:, None, :]
    # column stacking: vec(P)[i + j*d] = P[i, j]
    vecs = proj.transpose(0, 2, 1).reshape(m, d * d)
    out = (vecs @ s.T).reshape(m, d, d).transpose(0, 2, 1)
    out = 0.5 * (out + out.conj().transpose(0, 2, 1))
    return np.linalg.eigvalsh(out)[:, 0]


def _pure_output_min_eig_loop(s, psis):
    m, d = psis.shape
    res = np.empty(m)
    v = np.empty(d * d, dtype=np.complex128)
    r = np.empty((d, d), dtype=np.complex128)
    for k in range(m):
        p = psis[k]
        for j in range(d):
            cj = np.conj(p[j])
            for i in range(d):
                v[i + j * d] = p[i] * cj
        w = s @ v
        for j in range(d):
            for i in range(d):
                r[i, j] = 0.5 * (w[i + j * d] + np.conj(w[j + i * d]))
        res[k] = np.linalg.eigvalsh(r)[0]
    return res


# ---------------------------------------------------------------------------
# dissipator superoperator  sum_ij c_ij [conj(F_j) (x) F_i - 1/2 I (x) G_ij - 1/2 G_ij^T (x) I]
# with G_ij = F_j^dag F_i, column-stacking convention
# ---------------------------------------------------------------------------

def dissipator_superop_numpy(c: np.ndarray, f: np.ndarray) -> np.ndarray:
    n = f.shape[1]
    eye = np.eye(n, dtype=np.complex128)
    # sandwich term: sum_ij c_ij conj(F_j) (x) F_i
    sandwich = np.einsum("ij,jab,icd->acbd", c, f.conj(), f).reshape(n * n, n * n)
    # G = sum_ij c_ij F_j^dag F_i
    g = np.einsum("ij,jba,ibc->ac", c, f.conj(), f)
    return sandwich - 0.5 * np.kron(eye, g) - 0.5 * np.kron(g.T, eye)


def _dissipator_superop_loop(c, f):
    m, n, _ = f.shape
    nn = n * n
    out = np.zeros((nn, nn), dtype=np.complex128)
    g = np.zeros((n, n), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            cij = c[i, j]
            if cij == 0:
                continue
            fi = f[i]
            fjc = np.conj(f[j])
            for a in range(n):
                for b in range(n):
                    x = cij * fjc[a, b]
                    if x == 0:
                        continue
                    for cc in range(n):
                        for dd in range(n):
                            out[a * n + cc, b * n + dd] += x * fi[cc, dd]
            # G += c_ij F_j^dag F_i
            for a in range(n):
                for cc in range(n):
                    acc = 0j
                    for b in range(n):
                        acc += fjc[b, a] * fi[b, cc]
                    g[a, cc] += cij * acc
    for a in range(n):
        for b in range(n):
            gab = 0.5 * g[a, b]
            for k in range(n):
                # I (x) G
                out[k * n + a, k * n + b] -= gab
                # G^T (x) I
                out[b * n + k, a * n + k] -= gab
    return out


if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    pure_output_min_eig_numba = _jit(_pure_output_min_eig_loop)
    dissipator_superop_numba = _jit(_dissipator_superop_loop)
else:  # pragma: no cover
    pure_output_min_eig_numba = None
    dissipator_superop_numba = None


def pure_output_min_eig(s: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of ``unvec(s @ vec(|psi><psi|))`` for each row of ``psis``."""
    s = np.ascontiguousarray(s, dtype=np.complex128)
    psis = np.ascontiguousarray(np.atleast_2d(psis), dtype=np.complex128)
    if HAVE_NUMBA:
        return pure_output_min_eig_numba(s, psis)
    return pure_output_min_eig_numpy(s, psis)


def dissipator_superop(c: np.ndarray, f: np.ndarray) -> np.ndarray:
    c = np.ascontiguousarray(c, dtype=np.complex128)
    f = np.ascontiguousarray(f, dtype=np.complex128)
    if HAVE_NUMBA:
        return dissipator_superop_numba(c, f)
    return dissipator_superop_numpy(c, f)
