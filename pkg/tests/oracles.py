"""Independent oracles for the test suite.

These deliberately avoid the library's own computational paths: a hand-rolled
cyclic Jacobi eigensolver (vs LAPACK), entrywise outer products, full-matrix
SVD norms, and dense parameter scans. They are slow and only used at small
sizes.
"""

import numpy as np


def jacobi_eigvalsh(A, sweeps=100, tol=1e-14):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations,
    ascending. Each pivot phase-aligns the off-diagonal entry and applies the
    classic symmetric rotation."""
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    scale = max(1.0, float(np.max(np.abs(A))))
    for _ in range(sweeps):
        off = 0.0
        for i in range(n - 1):
            off += float(np.sum(np.abs(A[i, i + 1 :]) ** 2))
        if np.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = A[p, q]
                if abs(z) < 1e-300:
                    continue
                phi = np.angle(z)
                a, b = A[p, p].real, A[q, q].real
                tau = (b - a) / (2 * abs(z))
                if tau == 0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                G = np.eye(n, dtype=complex)
                G[p, p] = c
                G[p, q] = s
                G[q, p] = -s * np.exp(-1j * phi)
                G[q, q] = c * np.exp(-1j * phi)
                A = G.conj().T @ A @ G
    return np.sort(np.diag(A).real)


def outer_sym_entrywise(x, y):
    """Symmetric outer product by an explicit double loop."""
    n = len(x)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = 0.5 * (y[i] * np.conj(x[j]) + x[i] * np.conj(y[j]))
    return out


def svd_schatten(M, p):
    """Schatten norm from a full SVD of the explicit matrix."""
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if p == np.inf:
        return float(s[0]) if s.size else 0.0
    return float(np.sum(s**p) ** (1.0 / p))


def align_dist_scan(x, y, p, resolution=200_000):
    """Phase-circle scan for the vector metric on complex rays."""
    th = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    d = x[None, :] - np.exp(1j * th)[:, None] * y[None, :]
    if p == np.inf:
        vals = np.max(np.abs(d), axis=1)
    else:
        vals = np.sum(np.abs(d) ** p, axis=1) ** (1.0 / p)
    return float(np.min(vals))


def random_vector(rng, n, complex_field):
    v = rng.standard_normal(n)
    if complex_field:
        v = v + 1j * rng.standard_normal(n)
    return v


def random_hermitian(rng, n, complex_field):
    g = rng.standard_normal((n, n))
    if complex_field:
        g = g + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2
