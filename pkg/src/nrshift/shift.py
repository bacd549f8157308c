"""Compressions of the shift to model spaces of finite Blaschke products.

For zeros ``a_1..a_n`` in the disk, ``S_B`` is represented in the
Takenaka-Malmquist basis by an upper triangular matrix.  Bordering it with
one row and one column parametrised by ``lam`` on the unit circle gives the
unitary 1-dilations ``U_lam``; their eigenvalues solve ``z B(z) = lam`` and
span inscribed polygons whose intersection is W(S_B).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError
from .geometry import ConvexPolygon, clip_halfplanes, convex_hull, halfplanes_of, polygon_intersection
from .linalg import poly_roots_batch

ZERO_MARGIN = 1e-12
UNIMODULAR_TOL = 1e-12
ROOT_CIRCLE_TOL = 1e-9
DEFAULT_LAMBDA_COUNT = 360


def as_zeros(zeros):
    """Validate a zero list: nonempty, every ``|a| < 1 - 1e-12``."""
    a = np.atleast_1d(np.asarray(zeros, dtype=complex)).reshape(-1)
    if a.size == 0:
        raise InputError("a Blaschke product needs at least one zero")
    bad = np.abs(a) >= 1 - ZERO_MARGIN
    if bad.any():
        raise InputError(f"zeros must lie in the open unit disk: {a[bad]}")
    return a


def _check_unimodular(lam, name="lambda"):
    lam = complex(lam)
    if abs(abs(lam) - 1) > UNIMODULAR_TOL:
        raise InputError(f"{name} must have modulus 1, got |{name}| = {abs(lam)!r}")
    return lam


@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    """``B(z) = constant * prod (z - a_j) / (1 - conj(a_j) z)``."""

    zeros: np.ndarray
    constant: complex = 1.0

    def __post_init__(self):
        z = as_zeros(self.zeros)
        z.setflags(write=False)
        object.__setattr__(self, "zeros", z)
        object.__setattr__(self, "constant", _check_unimodular(self.constant, "constant"))

    @property
    def degree(self):
        return self.zeros.size

    def __call__(self, z):
        return blaschke_eval(self, z)


def blaschke_eval(B, z):
    """Evaluate ``B`` at ``z`` (vectorised).  Raises at a pole."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, B.constant, dtype=complex)
    for a in B.zeros:
        den = 1 - np.conj(a) * z
        if np.any(np.abs(den) < 1e-15):
            raise InputError(f"evaluation at the pole 1/conj({a})")
        out = out * (z - a) / den
    return out


def _neg_conj_prods(a):
    # P[i, j] = prod_{k=i}^{j-1} (-conj a_k) with 0-based half-open ranges
    n = a.size
    c = -np.conj(a)
    P = np.ones((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            P[i, j] = P[i, j - 1] * c[j - 1]
    return P


def sb_matrix(zeros):
    """Upper triangular matrix of ``S_B`` in the Takenaka-Malmquist basis.

    ``A[i, i] = a_i`` and, for ``i < j``,
    ``A[i, j] = prod_{i<k<j}(-conj a_k) * sqrt(1-|a_i|^2) * sqrt(1-|a_j|^2)``.
    """
    a = as_zeros(zeros)
    n = a.size
    d = np.sqrt(1 - np.abs(a) ** 2)
    P = _neg_conj_prods(a)
    A = np.diag(a)
    for i in range(n):
        for j in range(i + 1, n):
            A[i, j] = P[i + 1, j] * d[i] * d[j]
    return A


@dataclass(frozen=True, eq=False)
class UnitaryDilation:
    base: BlaschkeProduct
    lam: complex
    matrix: np.ndarray


def unitary_dilation(zeros, lam):
    """The ``(n+1) x (n+1)`` unitary ``U_lam`` whose top-left block is ``S_B``."""
    a = as_zeros(zeros)
    lam = _check_unimodular(lam)
    n = a.size
    d = np.sqrt(1 - np.abs(a) ** 2)
    P = _neg_conj_prods(a)
    U = np.zeros((n + 1, n + 1), dtype=complex)
    U[:n, :n] = sb_matrix(a)
    for j in range(n):
        U[n, j] = lam * P[0, j] * d[j]
    for i in range(n):
        U[i, n] = P[i + 1, n] * d[i]
    U[n, n] = lam * P[0, n]
    return UnitaryDilation(BlaschkeProduct(a), lam, U)


def dilation_polynomial(zeros, lams):
    """Ascending coefficients of ``z prod(z - a_k) - lam prod(1 - conj(a_k) z)``.

    One row per entry of ``lams``.
    """
    a = as_zeros(zeros)
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    num = np.array([0.0, 1.0], dtype=complex)
    den = np.array([1.0], dtype=complex)
    for ak in a:
        num = np.convolve(num, [-ak, 1.0])
        den = np.convolve(den, [1.0, -np.conj(ak)])
    C = np.tile(num, (lams.size, 1))
    C[:, : den.size] -= lams[:, None] * den[None, :]
    return C


def _sorted_by_arg(z):
    return np.take_along_axis(z, np.argsort(np.angle(z), axis=-1), axis=-1)


def dilation_eigenvalues_many(zeros, lams):
    """Solutions of ``z B(z) = lam`` for every ``lam``; shape ``(len(lams), n+1)``.

    Rows are sorted by argument.  Roots are projected onto the unit circle;
    a root further than 1e-9 from it raises NumericalError.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    for lam in lams:
        _check_unimodular(lam)
    roots = poly_roots_batch(dilation_polynomial(zeros, lams))
    off = np.abs(np.abs(roots) - 1)
    if np.any(off > ROOT_CIRCLE_TOL):
        raise NumericalError(
            f"dilation eigenvalue off the unit circle by {off.max():.3e}"
        )
    return _sorted_by_arg(roots / np.abs(roots))


def dilation_eigenvalues(zeros, lam):
    """The ``n+1`` distinct unimodular eigenvalues of ``U_lam``, sorted by argument."""
    return dilation_eigenvalues_many(zeros, [lam])[0]


def poncelet_polygon(zeros, lam):
    """Inscribed (n+1)-gon with vertices at the eigenvalues of ``U_lam``."""
    return ConvexPolygon(dilation_eigenvalues(zeros, lam))


def lambda_grid(count):
    return np.exp(2j * np.pi * np.arange(count) / count)


def numrange_via_dilations(zeros, lambda_count=DEFAULT_LAMBDA_COUNT):
    """Intersection of the Poncelet polygons over a uniform grid of ``lam``.

    Approximates W(S_B) from outside; it is exact in the limit of a dense grid.
    """
    if lambda_count < 3:
        raise InputError(f"lambda_count must be >= 3, got {lambda_count}")
    verts = dilation_eigenvalues_many(zeros, lambda_grid(lambda_count))
    if verts.shape[1] == 2:
        # chords of the circle: intersect as segments
        result = ConvexPolygon(verts[0])
        for row in verts[1:]:
            result = polygon_intersection(result, ConvexPolygon(row), tol=1e-10)
            if result.empty:
                break
    else:
        normals, offsets = [], []
        for row in verts[1:]:
            u, h = halfplanes_of(ConvexPolygon(row))
            normals.append(u)
            offsets.append(h)
        raw = clip_halfplanes(verts[0], np.concatenate(normals), np.concatenate(offsets))
        result = convex_hull(raw) if raw.size else ConvexPolygon([])
    if result.empty:
        raise NumericalError("intersection of dilation polygons is empty")
    return result
