"""Compressed shifts on model spaces of rational inner functions on the bidisk.

``Theta = lam * p_rev / p`` where ``p`` is a polynomial of bidegree ``(m, n)``
with no zeros in the open bidisk and ``p_rev`` is its reflection.  For a
unimodular ``tau`` outside the exceptional set, the slice ``z -> Theta(z, tau)``
is a Blaschke product of degree ``m``; the numerical range of the compressed
shift in the first variable is the closed convex hull of the slice ranges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError
from .geometry import ConvexPolygon, convex_hull
from .linalg import poly_roots, trim_poly
from .numrange import DEFAULT_SAMPLES, elliptical_range, sample_angles, support_sweep
from .shift import BlaschkeProduct, blaschke_eval, sb_matrix

EXCEPTIONAL_TOL = 1e-6
SLICE_DISK_TOL = 1e-9
SLICE_MATCH_TOL = 1e-8
DEFAULT_TAU_COUNT = 360
_SAMPLE_POINTS = 1000


def _as_grid(p):
    g = np.array(p, dtype=complex)
    if g.ndim != 2 or g.size == 0:
        raise InputError(f"coefficient grid must be a nonempty 2-d array, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise InputError("coefficient grid has non-finite entries")
    return g


def reflect_poly(p, degree=None):
    """Coefficients of ``z1^m z2^n conj(p(1/conj z1, 1/conj z2))``.

    Entry ``[i, j]`` of the result is ``conj(p[m - i, n - j])``.
    """
    g = _as_grid(p)
    if degree is not None and tuple(degree) != (g.shape[0] - 1, g.shape[1] - 1):
        raise InputError(f"grid shape {g.shape} does not match degree {tuple(degree)}")
    return g[::-1, ::-1].conj()


def poly2_eval(p, z1, z2):
    """Evaluate ``sum p[i, j] z1^i z2^j`` elementwise over broadcast ``z1, z2``."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
    for row in p[::-1]:
        inner = np.zeros_like(out)
        for c in row[::-1]:
            inner = inner * z2 + c
        out = out * z1 + inner
    return out


def poly2_mul(p, q):
    """Product of two bivariate coefficient grids."""
    p, q = _as_grid(p), _as_grid(q)
    out = np.zeros((p.shape[0] + q.shape[0] - 1, p.shape[1] + q.shape[1] - 1), dtype=complex)
    for i in range(p.shape[0]):
        for j in range(p.shape[1]):
            out[i:i + q.shape[0], j:j + q.shape[1]] += p[i, j] * q
    return out


def _sample_points(rng, count):
    # thirds: open bidisk, disk x circle, circle x disk
    k = count // 3
    def disk(s):
        return np.sqrt(rng.uniform(0, 1, s)) * np.exp(2j * np.pi * rng.uniform(0, 1, s))
    def circle(s):
        return np.exp(2j * np.pi * rng.uniform(0, 1, s))
    rest = count - 2 * k
    z1 = np.concatenate([disk(k), disk(k), circle(rest)])
    z2 = np.concatenate([disk(k), circle(k), disk(rest)])
    return z1, z2


def _first_zero_in_disk(g, w, margin=1e-7):
    # roots of p(., w_k) and p(w_k, .) must stay outside the open disk
    for grid, label in ((g, "z1"), (g.T, "z2")):
        powers = w[:, None] ** np.arange(grid.shape[1])[None, :]
        for wk, q in zip(w, powers @ grid.T):
            q = trim_poly(q, rtol=1e-14)
            if q.size < 2:
                continue
            r = poly_roots(q)
            k = int(np.argmin(np.abs(r)))
            if abs(r[k]) < 1 - margin:
                return label, complex(r[k]), complex(wk)
    return None


@dataclass(frozen=True, eq=False)
class RationalInnerFunction:
    """``Theta(z1, z2) = constant * p_rev(z) / p(z)`` with ``p_rev`` the reflection of ``p``.

    ``p_coeffs[i, j]`` multiplies ``z1^i z2^j``; the grid shape fixes the
    bidegree.  ``p`` is checked to be nonvanishing on 1000 seeded points of
    the bidisk and its two faces, and its one-variable slices through 64 of
    those points must have no roots in the open disk.  Common factors of ``p`` and ``p_rev`` are
    not detected.
    """

    p_coeffs: np.ndarray
    constant: complex = 1.0

    def __post_init__(self):
        g = _as_grid(self.p_coeffs)
        g.setflags(write=False)
        object.__setattr__(self, "p_coeffs", g)
        lam = complex(self.constant)
        if abs(abs(lam) - 1) > 1e-12:
            raise InputError(f"constant must be unimodular, got |constant| = {abs(lam)!r}")
        object.__setattr__(self, "constant", lam)
        z1, z2 = _sample_points(np.random.default_rng(0), _SAMPLE_POINTS)
        vals = np.abs(poly2_eval(g, z1, z2))
        if vals.min() <= 1e-10:
            k = int(np.argmin(vals))
            raise InputError(f"p vanishes near ({z1[k]:.6g}, {z2[k]:.6g}); Theta is not inner")
        bad = _first_zero_in_disk(g, np.concatenate([z1[:32], z2[_SAMPLE_POINTS // 3:][:32]]))
        if bad is not None:
            label, r, wk = bad
            raise InputError(f"p has a zero with {label} = {r:.6g} inside the disk (other variable {wk:.6g})")

    @property
    def degree(self):
        return self.p_coeffs.shape[0] - 1, self.p_coeffs.shape[1] - 1

    @property
    def reflection(self):
        return reflect_poly(self.p_coeffs)

    def __call__(self, z1, z2):
        return self.constant * poly2_eval(self.reflection, z1, z2) / poly2_eval(self.p_coeffs, z1, z2)

    def z1_poly(self, tau):
        """Ascending coefficients of ``z1 -> p(z1, tau)``."""
        powers = np.asarray(tau, dtype=complex) ** np.arange(self.p_coeffs.shape[1])
        return self.p_coeffs @ powers

    def z1_poly_reflected(self, tau):
        """Ascending coefficients of ``z1 -> p_rev(z1, tau)``."""
        powers = np.asarray(tau, dtype=complex) ** np.arange(self.p_coeffs.shape[1])
        return self.reflection @ powers


def theta_linear(a, c):
    """Degree-(1, 1) inner function with ``p = a - z1 + c z2``."""
    return RationalInnerFunction([[a, c], [-1.0, 0.0]])


def theta_squared(a, c):
    """Square of :func:`theta_linear`, with ``p = (a - z1 + c z2)^2``."""
    q = np.array([[a, c], [-1.0, 0.0]], dtype=complex)
    return RationalInnerFunction(poly2_mul(q, q))


def product_example():
    """Degree-(2, 2) inner function with ``p = (2 - z1 - z2)(3 - 2 z1 - z2)``.

    Its reflection is ``(2 z1 z2 - z1 - z2)(3 z1 z2 - z1 - 2 z2)``.
    """
    return RationalInnerFunction(poly2_mul([[2, -1], [-1, 0]], [[3, -1], [-2, 0]]))


def lifted_blaschke(zeros):
    """One-variable Blaschke product ``prod (z1 - a)/(1 - conj(a) z1)`` as a bidisk function."""
    p = np.array([1.0], dtype=complex)
    for a in np.atleast_1d(np.asarray(zeros, dtype=complex)):
        p = np.convolve(p, [1.0, -np.conj(a)])
    return RationalInnerFunction(p[:, None])


def exceptional_check(theta, tau, tol=EXCEPTIONAL_TOL):
    """True when ``z1 -> p(z1, tau)`` has a root within ``tol`` of the unit circle."""
    q = trim_poly(theta.z1_poly(tau), rtol=1e-14)
    if q.size <= 1:
        return False
    r = poly_roots(q)
    return bool(np.any(np.abs(np.abs(r) - 1) < tol))


@dataclass(frozen=True, eq=False)
class SliceResult:
    tau: complex
    blaschke: BlaschkeProduct | None
    excluded: bool


def _fit_point(B):
    # a point where B is well away from 0, preferring the origin
    if abs(blaschke_eval(B, 0.0)) > 1e-8:
        return 0j
    cand = 0.5 * np.exp(2j * np.pi * np.arange(8) / 8)
    return complex(cand[int(np.argmax(np.abs(blaschke_eval(B, cand))))])


def slice_blaschke(theta, tau, tol=EXCEPTIONAL_TOL, seed=0):
    """The Blaschke product ``z -> Theta(z, tau)``.

    Returns an excluded result when ``tau`` is (within ``tol``) in the
    exceptional set.  Otherwise the zeros are the roots of ``p_rev(., tau)``
    and the unimodular constant is fitted at ``z = 0`` then checked at 20
    seeded points of the disk.
    """
    tau = complex(tau)
    if abs(abs(tau) - 1) > 1e-12:
        raise InputError(f"tau must be unimodular, got |tau| = {abs(tau)!r}")
    if exceptional_check(theta, tau, tol):
        return SliceResult(tau, None, True)
    m = theta.degree[0]
    if m == 0:
        raise InputError("Theta has degree 0 in z1; slices are constants")
    zeros = poly_roots(theta.z1_poly_reflected(tau))
    if zeros.size != m:
        raise NumericalError(f"slice at tau={tau} has {zeros.size} zeros, expected {m}")
    if np.max(np.abs(zeros)) >= 1 - SLICE_DISK_TOL:
        raise NumericalError(
            f"slice zero {zeros[np.argmax(np.abs(zeros))]} at tau={tau} is not inside the disk; Theta is not inner"
        )
    B = BlaschkeProduct(zeros)
    z0 = _fit_point(B)
    c = theta(z0, tau)[()] / blaschke_eval(B, z0)[()]
    B = BlaschkeProduct(zeros, c / abs(c))
    rng = np.random.default_rng(seed)
    z = 0.95 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    err = np.max(np.abs(blaschke_eval(B, z) - theta(z, tau)))
    if err > SLICE_MATCH_TOL:
        raise NumericalError(f"slice Blaschke product misfits Theta(., {tau}) by {err:.3e}")
    return SliceResult(tau, B, False)


@dataclass(frozen=True, eq=False)
class BidiskRange:
    """Hull of slice numerical ranges with a count of skipped exceptional slices."""

    polygon: ConvexPolygon
    used: int
    excluded: int


def tau_grid(count):
    return np.exp(2j * np.pi * np.arange(count) / count)


def bidisk_numrange(theta, tau_count=DEFAULT_TAU_COUNT, gamma_count=DEFAULT_SAMPLES, tol=EXCEPTIONAL_TOL):
    """Convex hull of the inner polygons of W(S_B) over the non-exceptional slices."""
    if tau_count < 8:
        raise InputError(f"tau_count must be >= 8, got {tau_count}")
    mats = []
    excluded = 0
    for tau in tau_grid(tau_count):
        s = slice_blaschke(theta, tau, tol)
        if s.excluded:
            excluded += 1
            continue
        mats.append(sb_matrix(s.blaschke.zeros))
    if not mats:
        raise NumericalError("every slice is exceptional; no numerical range to form")
    _, pts = support_sweep(np.stack(mats), sample_angles(gamma_count))
    return BidiskRange(convex_hull(pts), len(mats), excluded)


def mtheta_fixture(tau):
    """Hard-coded 2x2 symbol for the product example (:func:`product_example`)."""
    tau = complex(tau)
    if abs(tau) > 1 + 1e-12:
        raise InputError(f"tau must lie in the closed disk, got |tau| = {abs(tau)!r}")
    w = tau.conjugate()
    return np.array(
        [
            [1 / (2 - w), 0],
            [-np.sqrt(6) * (1 - w) ** 2 / ((2 - w) * (3 - w)), 2 / (3 - w)],
        ],
        dtype=complex,
    )


def bidisk_numrange_via_mtheta(tau_count=DEFAULT_TAU_COUNT, gamma_count=DEFAULT_SAMPLES):
    """Hull of the exact elliptical ranges of the fixture over the tau grid."""
    if tau_count < 8:
        raise InputError(f"tau_count must be >= 8, got {tau_count}")
    pts = [elliptical_range(mtheta_fixture(t)).point_at(sample_angles(gamma_count)) for t in tau_grid(tau_count)]
    return convex_hull(np.concatenate(pts))


def boundary_curve(a, c, t):
    """Boundary of the range for ``Theta = theta_squared(a, c)`` with ``a = 1 + c``.

    Returns ``(x, y)`` arrays matching the shape of ``t``.
    """
    if not (a > 0 and c > 0):
        raise InputError(f"a and c must be positive, got a={a}, c={c}")
    if abs(a - 1 - c) >= 1e-12:
        raise InputError(f"need a = 1 + c for a singularity at (1, -1), got a={a}, c={c}")
    t = np.asarray(t, dtype=float)
    s = a + c
    phi = t - np.arcsin(np.clip(a / s * np.sin(t), -1.0, 1.0))
    amp = a * c * (1 - np.cos(t)) / s ** 2
    x = (a + c * np.cos(t)) / s + amp * np.cos(phi)
    y = c * np.sin(t) / s + amp * np.sin(phi)
    return x, y
