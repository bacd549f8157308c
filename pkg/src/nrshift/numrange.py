"""Numerical ranges of matrices.

The boundary of W(A) is traced with Kippenhahn's support lines: for each
direction ``gamma`` the largest eigenvalue ``h`` of the Hermitian part of
``exp(-i gamma) A`` gives the support line ``x cos(gamma) + y sin(gamma) = h``
and a top eigenvector ``v`` gives the touching point ``<Av, v>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError
from .geometry import ConvexPolygon, convex_hull, densify
from .linalg import as_cmatrix, hermitian_eigs, mat_poly_eval, operator_norm, polyval

DEFAULT_SAMPLES = 720
# relative gap below which two top eigenvalues count as one (flat boundary piece)
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SupportSample:
    gamma: float
    h: float
    boundary_point: complex


@dataclass(frozen=True, eq=False)
class NumericalRangeApprox:
    """Inner and outer polygonal approximations of W(A).

    ``inner`` is the hull of exact boundary points, ``outer`` the intersection
    of the sampled support half-planes, so ``inner <= W(A) <= outer``.
    """

    inner: ConvexPolygon
    outer: ConvexPolygon
    samples: tuple

    @property
    def gammas(self):
        return np.array([s.gamma for s in self.samples])

    @property
    def support_values(self):
        return np.array([s.h for s in self.samples])

    @property
    def boundary_points(self):
        return np.array([s.boundary_point for s in self.samples])


def sample_angles(nsamples):
    return 2 * np.pi * np.arange(nsamples) / nsamples


def hermitian_part(A, gamma):
    """``(exp(-i gamma) A + exp(i gamma) A*) / 2`` for every gamma.

    ``A`` may be a stack ``(..., n, n)``; the result has shape
    ``(..., len(gamma), n, n)``.
    """
    A = as_cmatrix(A)
    rot = np.exp(-1j * np.atleast_1d(np.asarray(gamma, dtype=float)))[:, None, None]
    RA = rot * A[..., None, :, :]
    return 0.5 * (RA + np.swapaxes(RA, -1, -2).conj())


def support_sweep(A, gammas, want_points=True):
    """Support values and touching points of W(A) over many directions.

    Returns ``(h, points)`` with shapes ``(..., G)``; ``points`` is None when
    ``want_points`` is false.  When the top eigenvalue is repeated the
    eigenvector with the lowest index among the tied ones is used.
    """
    A = as_cmatrix(A)
    H = hermitian_part(A, gammas)
    eig = hermitian_eigs(H, want_vectors=want_points)
    h = eig.values[..., -1]
    if not want_points:
        return h, None
    norm = np.sqrt(np.sum(np.abs(A) ** 2, axis=(-2, -1)))[..., None]
    tied = eig.values >= (h - TIE_TOL * np.maximum(norm, 1e-300))[..., None]
    k = np.argmax(tied, axis=-1)
    v = np.take_along_axis(eig.vectors, k[..., None, None], axis=-1)[..., 0]
    Av = np.einsum("...ij,...gj->...gi", A, v)
    points = np.sum(v.conj() * Av, axis=-1)
    return h, points


def support_value(A, gamma):
    """Largest eigenvalue ``h`` of Re(exp(-i gamma) A) and a unit eigenvector."""
    A = as_cmatrix(A)
    if A.ndim != 2:
        raise InputError("support_value takes a single matrix")
    eig = hermitian_eigs(hermitian_part(A, gamma)[0])
    h = eig.values[-1]
    norm = np.sqrt(np.sum(np.abs(A) ** 2))
    k = int(np.argmax(eig.values >= h - TIE_TOL * max(norm, 1e-300)))
    return float(h), eig.vectors[:, k]


def boundary_point(A, gamma):
    """Point ``<Av, v>`` where the support line at angle ``gamma`` touches W(A)."""
    A = as_cmatrix(A)
    _, v = support_value(A, gamma)
    return complex(v.conj() @ A @ v)


def _outer_vertices(gammas, h):
    # consecutive support lines meet at the outer polygon's corners
    g1, g2 = gammas, np.roll(gammas, -1)
    h1, h2 = h, np.roll(h, -1)
    det = np.sin(g2 - g1)
    x = (h1 * np.sin(g2) - h2 * np.sin(g1)) / det
    y = (h2 * np.cos(g1) - h1 * np.cos(g2)) / det
    return x + 1j * y


def numerical_range(A, nsamples=DEFAULT_SAMPLES):
    """Sandwich W(A) between two polygons using ``nsamples`` equally spaced directions."""
    A = as_cmatrix(A)
    if A.ndim != 2:
        raise InputError("numerical_range takes a single matrix")
    if nsamples < 3:
        raise InputError(f"nsamples must be >= 3, got {nsamples}")
    gammas = sample_angles(nsamples)
    h, pts = support_sweep(A, gammas)
    inner = convex_hull(pts)
    outer = convex_hull(_outer_vertices(gammas, h))
    samples = tuple(
        SupportSample(float(g), float(hh), complex(p)) for g, hh, p in zip(gammas, h, pts)
    )
    return NumericalRangeApprox(inner, outer, samples)


def bounding_rectangle(A):
    """``(alpha_1, alpha_n, beta_1, beta_n)``: extreme eigenvalues of Re(A) and Im(A)."""
    A = as_cmatrix(A)
    re = 0.5 * (A + A.conj().T)
    im = (A - A.conj().T) / 2j
    a = hermitian_eigs(re, want_vectors=False).values
    b = hermitian_eigs(im, want_vectors=False).values
    return float(a[0]), float(a[-1]), float(b[0]), float(b[-1])


@dataclass(frozen=True)
class Ellipse:
    """Closed elliptical disk given by its foci and minor axis length.

    ``minor_axis == 0`` is the segment between the foci; equal foci give a
    circular disk of diameter ``minor_axis``.
    """

    focus1: complex
    focus2: complex
    minor_axis: float

    def __post_init__(self):
        if not self.minor_axis >= 0:
            raise InputError(f"minor axis must be >= 0, got {self.minor_axis}")

    @property
    def center(self):
        return 0.5 * (self.focus1 + self.focus2)

    @property
    def semi_minor(self):
        return 0.5 * self.minor_axis

    @property
    def semi_major(self):
        return float(np.hypot(self.semi_minor, 0.5 * abs(self.focus2 - self.focus1)))

    @property
    def angle(self):
        d = self.focus2 - self.focus1
        return float(np.angle(d)) if d != 0 else 0.0

    def support(self, gamma):
        psi = np.asarray(gamma, dtype=float) - self.angle
        L, s = self.semi_major, self.semi_minor
        return (np.exp(-1j * np.asarray(gamma)) * self.center).real + np.sqrt(
            (L * np.cos(psi)) ** 2 + (s * np.sin(psi)) ** 2
        )

    def point_at(self, gamma):
        """Boundary point whose outward normal points along ``exp(i gamma)``."""
        psi = np.asarray(gamma, dtype=float) - self.angle
        L, s = self.semi_major, self.semi_minor
        den = np.sqrt((L * np.cos(psi)) ** 2 + (s * np.sin(psi)) ** 2)
        with np.errstate(invalid="ignore", divide="ignore"):
            local = np.where(den > 0, (L * L * np.cos(psi) + 1j * s * s * np.sin(psi)) / den, 0.0)
        return self.center + np.exp(1j * self.angle) * local

    def boundary(self, npoints=DEFAULT_SAMPLES):
        """Inscribed polygon through the touching points of ``npoints`` support lines."""
        return convex_hull(self.point_at(sample_angles(npoints)))


def elliptical_range(A):
    """Exact numerical range of a 2x2 matrix as an :class:`Ellipse`.

    Foci are the eigenvalues ``a, b``; the minor axis is
    ``sqrt(tr(A* A) - |a|^2 - |b|^2)``.
    """
    A = as_cmatrix(A)
    if A.shape != (2, 2):
        raise InputError(f"elliptical_range needs a 2x2 matrix, got {A.shape}")
    tr = A[0, 0] + A[1, 1]
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    disc = np.sqrt(tr * tr - 4 * det + 0j)
    a = 0.5 * (tr + disc)
    b = 0.5 * (tr - disc)
    # product form keeps the smaller root accurate
    if abs(a) < abs(b):
        a, b = b, a
    if a != 0:
        b = det / a
    frob2 = float(np.sum(np.abs(A) ** 2))
    minor = np.sqrt(max(0.0, frob2 - abs(a) ** 2 - abs(b) ** 2))
    return Ellipse(complex(a), complex(b), float(minor))


def _scalar_value(A):
    n = A.shape[0]
    alpha = np.trace(A) / n
    dev = np.sqrt(np.sum(np.abs(A - alpha * np.eye(n)) ** 2))
    scale = max(np.sqrt(np.sum(np.abs(A) ** 2)), 1e-300)
    return alpha if dev <= 1e-15 * scale else None


def numerical_radius(A, nsamples=DEFAULT_SAMPLES):
    """Largest sampled support value, a lower estimate of w(A) = max |W(A)|."""
    A = as_cmatrix(A)
    if nsamples < 3:
        raise InputError(f"nsamples must be >= 3, got {nsamples}")
    alpha = _scalar_value(A)
    if alpha is not None:
        return float(abs(alpha))
    h, _ = support_sweep(A, sample_angles(nsamples), want_points=False)
    return float(np.max(h))


def crouzeix_ratio(p, A, nsamples=DEFAULT_SAMPLES):
    """``||p(A)|| / max |p|`` over the outer approximation of W(A).

    The outer polygon contains W(A), so the denominator is an overestimate
    and the ratio errs low.
    """
    A = as_cmatrix(A)
    num = float(operator_norm(mat_poly_eval(p, A)))
    outer = numerical_range(A, nsamples).outer
    den = float(np.max(np.abs(polyval(p, densify(outer, nsamples)))))
    if den == 0.0:
        raise NumericalError("max |p| over W(A) is zero; Crouzeix ratio undefined")
    return num / den
