"""Reference computations used as independent checks in the test suite.

None of these share code with the package: they are slow, direct
formulations or calls into numpy.linalg.
"""

import numpy as np


def jordan(n):
    return np.eye(n, k=1, dtype=complex)


def random_matrix(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_hermitian(rng, n):
    X = random_matrix(rng, n)
    return 0.5 * (X + X.conj().T)


def random_unitary(rng, n):
    Q, R = np.linalg.qr(random_matrix(rng, n))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_zeros(rng, n, rmax=0.8):
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def charpoly(H):
    """Ascending coefficients of det(zI - H) by the Faddeev-LeVerrier recursion."""
    n = H.shape[0]
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    M = np.zeros_like(H, dtype=complex)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = H @ M + c[n - k + 1] * eye
        c[n - k] = -np.trace(H @ M) / k
    return c


def brute_extreme_points(z):
    """Indices of hull vertices: endpoints of edges with every other point strictly left."""
    z = np.asarray(z, dtype=complex)
    n = z.size
    keep = set()
    for i in range(n):
        d = z - z[i]
        # cross[j, k] = Im(conj(z_j - z_i) (z_k - z_i))
        cross = (d.conj()[:, None] * d[None, :]).imag
        np.fill_diagonal(cross, 1.0)
        cross[:, i] = 1.0
        ok = np.all(cross > 0, axis=1)
        ok[i] = False
        for j in np.flatnonzero(ok):
            keep.add(i)
            keep.add(int(j))
    return keep


def inside_convex(vertices, z, tol=0.0):
    """Brute inside test for a counterclockwise convex vertex loop."""
    v = np.asarray(vertices, dtype=complex)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    a, b = v, np.roll(v, -1)
    cross = ((b - a).conj()[None, :] * (z[:, None] - a[None, :])).imag
    return np.all(cross >= -tol, axis=1)


def dense_boundary(vertices, n):
    v = np.asarray(vertices, dtype=complex)
    loop = np.append(v, v[0])
    out = [v]
    per = max(2, n // v.size)
    s = np.linspace(0, 1, per, endpoint=False)
    for a, b in zip(loop[:-1], loop[1:]):
        out.append(a + s * (b - a))
    return np.concatenate(out)


def brute_hausdorff(P_vertices, Q_vertices, n=20000):
    """Hausdorff distance of two filled convex polygons from dense boundary samples."""
    def one_sided(A, B):
        src = dense_boundary(A, 2000)
        dst = dense_boundary(B, n)
        inside = inside_convex(B, src, 1e-15)
        worst = 0.0
        for lo in range(0, src.size, 200):
            blk = src[lo:lo + 200]
            d = np.min(np.abs(blk[:, None] - dst[None, :]), axis=1)
            d[inside[lo:lo + 200]] = 0.0
            worst = max(worst, float(d.max()))
        return worst
    return max(one_sided(P_vertices, Q_vertices), one_sided(Q_vertices, P_vertices))


def max_rayleigh(rng, A, gamma, count):
    """Largest Re(exp(-i gamma) <Ax, x>) over random unit vectors."""
    n = A.shape[0]
    best = -np.inf
    for lo in range(0, count, 100000):
        k = min(100000, count - lo)
        X = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        q = np.einsum("ki,ij,kj->k", X.conj(), A, X)
        best = max(best, float(np.max((np.exp(-1j * gamma) * q).real)))
    return best


def convex_ok(vertices, tol=1e-12):
    v = np.asarray(vertices, dtype=complex)
    if v.size < 3:
        return True
    e = np.roll(v, -1) - v
    cross = (e.conj() * np.roll(e, -1)).imag
    return bool(np.all(cross >= -tol * max(1.0, np.max(np.abs(v))) ** 2))
