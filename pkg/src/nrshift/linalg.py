"""Dense numerical kernels: Hermitian eigenproblems and polynomial roots.

Matrices are plain ``numpy`` complex arrays.  Every routine accepts a single
``(n, n)`` matrix and most also accept a stack ``(..., n, n)`` so that sweeps
over many angles can be done in one vectorised pass.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, InputError

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60
HERMITIAN_TOL = 1e-12

ABERTH_TOL = 1e-13
ABERTH_MAX_ITER = 200
ROOT_RESIDUAL_TOL = 1e-8
CLUSTER_TOL = 1e-7

# batches larger than this are split across NR_THREADS workers
_CHUNK = 4096


class HermitianEigen(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray | None


def as_cmatrix(A, name="matrix"):
    """Return ``A`` as a complex square matrix (or stack), validating shape."""
    M = np.asarray(A, dtype=complex)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise InputError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def _max_workers():
    try:
        return max(1, int(os.environ.get("NR_THREADS", "1")))
    except ValueError:
        return 1


def _jacobi(A, want_vectors, tol, max_sweeps):
    # A: (B, n, n) Hermitian, modified in place
    B, n, _ = A.shape
    V = np.tile(np.eye(n, dtype=complex), (B, 1, 1)) if want_vectors else None
    rows = np.arange(B)
    offmask = ~np.eye(n, dtype=bool)
    scale = np.sqrt(np.sum(np.abs(A) ** 2, axis=(1, 2)))
    thresh = tol * scale

    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))
        if np.all(off <= thresh):
            break
        if _ == max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(max off-diagonal norm {off.max():.3e})",
                residuals=off,
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                mag = np.abs(apq)
                if not np.any(mag):
                    continue
                app = A[:, p, p].real.copy()
                aqq = A[:, q, q].real.copy()
                nz = mag > 0
                safe = np.where(nz, mag, 1.0)
                with np.errstate(over="ignore", invalid="ignore"):
                    theta = (aqq - app) / (2.0 * safe)
                    t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(nz & np.isfinite(t), t, 0.0)
                t = np.where(nz & (theta == 0), 1.0, t)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = np.where(nz, apq / safe, 1.0).conj()
                # U = diag(1, ph) @ [[c, s], [-s, c]] restricted to (p, q)
                upp, upq, uqp, uqq = c, s, -s * ph, c * ph

                colp = A[:, :, p].copy()
                colq = A[:, :, q]
                A[:, :, p] = colp * upp[:, None] + colq * uqp[:, None]
                A[:, :, q] = colp * upq[:, None] + colq * uqq[:, None]
                rowp = A[:, p, :].copy()
                rowq = A[:, q, :]
                A[:, p, :] = rowp * upp[:, None] + rowq * uqp.conj()[:, None]
                A[:, q, :] = rowp * upq[:, None] + rowq * uqq.conj()[:, None]
                A[rows, p, q] = 0.0
                A[rows, q, p] = 0.0
                A[rows, p, p] = app - t * mag
                A[rows, q, q] = aqq + t * mag

                if V is not None:
                    vp = V[:, :, p].copy()
                    vq = V[:, :, q]
                    V[:, :, p] = vp * upp[:, None] + vq * uqp[:, None]
                    V[:, :, q] = vp * upq[:, None] + vq * uqq[:, None]

    values = np.einsum("bii->bi", A).real.copy()
    order = np.argsort(values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    if V is not None:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
    return values, V


def hermitian_eigs(H, want_vectors=True, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a complex Hermitian matrix by cyclic Jacobi rotations.

    ``H`` may be a single ``(n, n)`` matrix or a stack ``(..., n, n)``.
    Eigenvalues are returned ascending; ``vectors[..., :, k]`` is the unit
    eigenvector for ``values[..., k]``.  Sweeps continue until the
    off-diagonal Frobenius norm drops below ``tol * ||H||_F``.

    Raises InputError if ``H`` is not Hermitian to within
    ``1e-12 * ||H||``.
    """
    H = as_cmatrix(H, "H")
    defect = np.sqrt(np.sum(np.abs(H - np.swapaxes(H, -1, -2).conj()) ** 2, axis=(-2, -1)))
    norm = np.sqrt(np.sum(np.abs(H) ** 2, axis=(-2, -1)))
    if np.any(defect > HERMITIAN_TOL * np.maximum(norm, np.finfo(float).tiny)):
        raise InputError(f"matrix is not Hermitian: ||H - H*|| = {np.max(defect):.3e}")

    shape = H.shape
    n = shape[-1]
    A = (0.5 * (H + np.swapaxes(H, -1, -2).conj())).reshape(-1, n, n).copy()
    B = A.shape[0]

    workers = _max_workers()
    if workers > 1 and B > _CHUNK:
        bounds = list(range(0, B, _CHUNK)) + [B]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(
                lambda lo_hi: _jacobi(A[lo_hi[0]:lo_hi[1]], want_vectors, tol, max_sweeps),
                zip(bounds[:-1], bounds[1:]),
            ))
        values = np.concatenate([p[0] for p in parts])
        vectors = np.concatenate([p[1] for p in parts]) if want_vectors else None
    else:
        values, vectors = _jacobi(A, want_vectors, tol, max_sweeps)

    values = values.reshape(shape[:-1])
    if vectors is not None:
        vectors = vectors.reshape(shape)
    return HermitianEigen(values, vectors)


def trim_poly(coeffs, rtol=0.0):
    """Drop vanishing leading coefficients (ascending order)."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.size == 0:
        return c
    cutoff = rtol * np.max(np.abs(c))
    k = c.size
    while k > 1 and abs(c[k - 1]) <= cutoff:
        k -= 1
    return c[:k]


def polyval(coeffs, z):
    """Horner evaluation of an ascending coefficient vector at ``z``."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for a in np.asarray(coeffs, dtype=complex)[::-1]:
        out = out * z + a
    return out


def _horner_batch(C, z):
    # C: (B, d+1) ascending, z: (B, d) -> p(z), p'(z)
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for k in range(C.shape[1] - 1, -1, -1):
        dp = dp * z + p
        p = p * z + C[:, k:k + 1]
    return p, dp


def _polish_multiple(coeffs, z0, k, tol):
    # a root of multiplicity k is a simple root of the (k-1)-th derivative
    c = coeffs
    for _ in range(k - 1):
        c = c[1:] * np.arange(1, c.size)
    dc = c[1:] * np.arange(1, c.size)
    z = z0
    for _ in range(8):
        d = polyval(dc, z)
        if d == 0:
            break
        step = polyval(c, z) / d
        z = z - step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z if np.isfinite(z) and abs(z - z0) < tol else z0


def _merge_clusters(roots, tol, coeffs=None):
    # single linkage within tol, each cluster replaced by its mean
    # (polished on a derivative when the coefficients are supplied)
    d = roots.size
    if d < 2:
        return roots
    dist = np.abs(roots[:, None] - roots[None, :])
    np.fill_diagonal(dist, np.inf)
    if dist.min() >= tol:
        return roots
    label = np.arange(d)
    for i in range(d):
        for j in range(i + 1, d):
            if dist[i, j] < tol and label[i] != label[j]:
                label[label == label[j]] = label[i]
    out = roots.copy()
    for lab in np.unique(label):
        idx = label == lab
        z = roots[idx].mean()
        k = int(idx.sum())
        if k > 1 and coeffs is not None:
            z = _polish_multiple(coeffs, z, k, tol)
        out[idx] = z
    return out


def poly_roots_batch(C, tol=ABERTH_TOL, max_iter=ABERTH_MAX_ITER, cluster_tol=CLUSTER_TOL):
    """Roots of many polynomials of one common degree.

    ``C`` has shape ``(B, d+1)`` with ascending coefficients and nonzero
    leading coefficients.  Returns a ``(B, d)`` array.  Aberth-Ehrlich
    simultaneous iteration started from a circle of Cauchy-bound radius.
    """
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    B, d1 = C.shape
    d = d1 - 1
    if d < 1:
        raise InputError("polynomial degree must be at least 1")
    lead = C[:, -1]
    if np.any(lead == 0):
        raise InputError("leading coefficient is zero; trim the polynomial first")
    M = C / lead[:, None]
    if d == 1:
        return -M[:, :1]

    radius = 1.0 + np.max(np.abs(M[:, :-1]), axis=1)
    angles = 2 * np.pi * np.arange(d) / d + 0.4
    z = radius[:, None] * np.exp(1j * angles)[None, :]
    active = np.ones((B, d), dtype=bool)
    eye = np.eye(d, dtype=bool)

    for _ in range(max_iter):
        p, dp = _horner_batch(M, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(p == 0, 0.0, p / dp)
            diff = z[:, :, None] - z[:, None, :]
            diff[:, eye] = np.inf
            s = np.sum(1.0 / diff, axis=2)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        w = np.where(active, w, 0.0)
        z = z - w
        active &= np.abs(w) > tol * np.maximum(1.0, np.abs(z))
        if not active.any():
            break

    p, _ = _horner_batch(M, z)
    scale = np.zeros_like(z, dtype=float)
    az = np.abs(z)
    for k in range(d, -1, -1):
        scale = scale * az + np.abs(M[:, k:k + 1])
    resid = np.abs(p) / scale
    if np.any(active & (resid > ROOT_RESIDUAL_TOL)):
        raise ConvergenceError(
            f"Aberth iteration did not converge in {max_iter} iterations "
            f"(worst relative residual {resid.max():.3e})",
            residuals=resid,
        )
    if cluster_tol > 0:
        for b in range(B):
            z[b] = _merge_clusters(z[b], cluster_tol, M[b])
    return z


def poly_roots(coeffs, tol=ABERTH_TOL, max_iter=ABERTH_MAX_ITER, cluster_tol=CLUSTER_TOL):
    """All complex roots of a polynomial, repeated by multiplicity.

    ``coeffs`` are ascending: ``coeffs[k]`` multiplies ``z**k``.  Roots that
    land within ``cluster_tol`` of each other are treated as one multiple
    root and replaced by their mean.

    >>> np.sort_complex(poly_roots([-1, 0, 1])).real
    array([-1.,  1.])
    """
    c = trim_poly(coeffs)
    if c.size < 2 or c[-1] == 0:
        raise InputError("poly_roots needs a polynomial of degree >= 1")
    return poly_roots_batch(c[None, :], tol, max_iter, cluster_tol)[0]


def mat_poly_eval(coeffs, A):
    """Evaluate ``p(A)`` by Horner's rule (ascending coefficients)."""
    A = as_cmatrix(A, "A")
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if c.size == 0:
        raise InputError("empty polynomial")
    n = A.shape[-1]
    eye = np.eye(n, dtype=complex)
    P = c[-1] * eye
    for a in c[-2::-1]:
        P = P @ A + a * eye
    return P


def operator_norm(A):
    """Spectral norm: square root of the top eigenvalue of ``A* A``."""
    A = as_cmatrix(A, "A")
    G = np.swapaxes(A, -1, -2).conj() @ A
    vals = hermitian_eigs(G, want_vectors=False).values
    return np.sqrt(np.maximum(vals[..., -1], 0.0))
