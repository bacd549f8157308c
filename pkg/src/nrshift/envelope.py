"""Envelopes of one-parameter curve families.

A family is ``F(x, y, t) = 0``.  Its discriminant envelope is the set of
points where both ``F`` and ``dF/dt`` vanish for some ``t``; here it is found
numerically with a 2-d Newton solve per ``t`` seeded from points on the
curve.  The circle family behind the 2x2 elliptical range has the closed
form envelope implemented in :func:`ert_envelope`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .linalg import as_cmatrix
from .numrange import support_sweep

NEWTON_TOL = 1e-10
DEDUP_TOL = 1e-8
ISOLATED_TOL = 1e-8


@dataclass(frozen=True)
class EnvelopePoint:
    t: float
    x: float
    y: float
    isolated: bool = False

    @property
    def z(self):
        return complex(self.x, self.y)


def family_F(m, x, y, t):
    """Circle family ``(x - (1 - t^2))^2 + y^2 - m^2 t^2 (1 - t^2)`` and its t-derivative.

    Circle ``C_t`` has center ``(1 - t^2, 0)`` and radius ``m t sqrt(1 - t^2)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    u = x - (1 - t * t)
    F = u * u + y * y - m * m * t * t * (1 - t * t)
    Ft = 4 * t * u - m * m * (2 * t - 4 * t ** 3)
    return F, Ft


def ert_envelope(m, t):
    """Closed-form envelope points of the circle family at parameter ``t``.

    ``x = (1 - t^2) + (m^2/2)(1 - 2t^2)``, ``y = +-sqrt(m^2 (t^2 - t^4) - (m^4/4)(1 - 2t^2)^2)``;
    empty when the radicand is negative.
    """
    if not 0.0 <= t <= 1.0:
        raise InputError(f"t must lie in [0, 1], got {t}")
    x = (1 - t * t) + 0.5 * m * m * (1 - 2 * t * t)
    rad = m * m * (t * t - t ** 4) - 0.25 * m ** 4 * (1 - 2 * t * t) ** 2
    if rad < 0:
        return []
    y = float(np.sqrt(rad))
    if y == 0.0:
        return [EnvelopePoint(t, x, 0.0)]
    return [EnvelopePoint(t, x, y), EnvelopePoint(t, x, -y)]


def verify_on_ellipse(point, m):
    """Residual ``|(x - 1/2)^2 / (1 + m^2) + y^2 / m^2 - 1/4|``."""
    if m <= 0:
        raise InputError(f"m must be positive, got {m}")
    x, y = (point.x, point.y) if isinstance(point, EnvelopePoint) else point
    return abs((x - 0.5) ** 2 / (1 + m * m) + y * y / (m * m) - 0.25)


class CurveFamily:
    """Interface used by :func:`discriminant_envelope`.

    Subclasses provide vectorised ``values`` -> ``(F, F_t)``, ``jacobian`` ->
    ``(F_x, F_y, F_tx, F_ty)`` and ``seeds(t, k)`` -> complex points on the
    curve ``Gamma_t`` of shape ``(len(t), k)``.
    """

    def values(self, x, y, t):
        raise NotImplementedError

    def jacobian(self, x, y, t):
        h = 1e-6
        Fxp, Ftxp = self.values(x + h, y, t)
        Fxm, Ftxm = self.values(x - h, y, t)
        Fyp, Ftyp = self.values(x, y + h, t)
        Fym, Ftym = self.values(x, y - h, t)
        return (Fxp - Fxm) / (2 * h), (Fyp - Fym) / (2 * h), (Ftxp - Ftxm) / (2 * h), (Ftyp - Ftym) / (2 * h)

    def seeds(self, t, k):
        raise NotImplementedError


@dataclass(frozen=True)
class CircleFamily(CurveFamily):
    m: float

    def __post_init__(self):
        if not self.m > 0:
            raise InputError(f"m must be positive, got {self.m}")

    def values(self, x, y, t):
        return family_F(self.m, x, y, t)

    def jacobian(self, x, y, t):
        u = x - (1 - t * t)
        return 2 * u, 2 * y, 4 * t, np.zeros_like(y)

    def center(self, t):
        return 1 - np.asarray(t) ** 2

    def radius(self, t):
        t = np.asarray(t)
        return self.m * t * np.sqrt(np.clip(1 - t * t, 0, None))

    def seeds(self, t, k):
        t = np.asarray(t, dtype=float)
        ang = np.exp(2j * np.pi * np.arange(k) / k)
        return self.center(t)[:, None] + self.radius(t)[:, None] * ang[None, :]


@dataclass(eq=False)
class SupportLineFamily(CurveFamily):
    """Kippenhahn support lines ``x cos t + y sin t = h(t)`` of W(A).

    ``dh/dt`` comes from first-order eigenvalue perturbation:
    ``h'(t) = Im(exp(-i t) <Av, v>)`` for the top eigenvector ``v``.
    """

    A: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.A = as_cmatrix(self.A)

    def _support(self, t):
        t = np.asarray(t, dtype=float)
        missing = np.unique([v for v in t.ravel().tolist() if v not in self._cache])
        if missing.size:
            h, w = support_sweep(self.A, missing)
            dh = (np.exp(-1j * missing) * w).imag
            for g, hv, dv in zip(missing.tolist(), h, dh):
                self._cache[g] = (hv, dv)
        hv = np.array([self._cache[v][0] for v in t.ravel().tolist()]).reshape(t.shape)
        dv = np.array([self._cache[v][1] for v in t.ravel().tolist()]).reshape(t.shape)
        return hv, dv

    def support(self, t):
        """``(h(t), h'(t))`` for scalar or array ``t``."""
        return self._support(np.atleast_1d(np.asarray(t, dtype=float)))

    def values(self, x, y, t):
        h, dh = self._support(t)
        c, s = np.cos(t), np.sin(t)
        return x * c + y * s - h, -x * s + y * c - dh

    def jacobian(self, x, y, t):
        return np.cos(t), np.sin(t), -np.sin(t), np.cos(t)

    def seeds(self, t, k):
        t = np.asarray(t, dtype=float)
        h, _ = self._support(t)
        R = max(float(np.sqrt(np.sum(np.abs(self.A) ** 2))), 1.0)
        s = np.linspace(-R, R, k)
        return np.exp(1j * t)[:, None] * (h[:, None] + 1j * s[None, :])


@dataclass(eq=False)
class ImplicitFamily(CurveFamily):
    """Family from plain callables; spatial derivatives by central differences
    unless ``jac`` is given."""

    F: object
    F_t: object
    seed_fn: object
    jac: object = None

    def values(self, x, y, t):
        return np.asarray(self.F(x, y, t), dtype=float), np.asarray(self.F_t(x, y, t), dtype=float)

    def jacobian(self, x, y, t):
        if self.jac is not None:
            return self.jac(x, y, t)
        return super().jacobian(x, y, t)

    def seeds(self, t, k):
        return np.asarray(self.seed_fn(np.asarray(t, dtype=float), k), dtype=complex)


def _bcast(v, like):
    return np.broadcast_to(np.asarray(v, dtype=float), like.shape)


def discriminant_envelope(family, t_grid, seeds_per_t=8, tol=NEWTON_TOL,
                          dedup_tol=DEDUP_TOL, max_iter=50):
    """Numerical discriminant envelope: solve ``F = F_t = 0`` for each ``t``.

    Newton iterations in ``(x, y)`` start from ``seeds_per_t`` points on each
    curve ``Gamma_t``.  Seeds whose residual stays above ``tol`` are dropped;
    survivors within ``dedup_tol`` of each other (same ``t``) are merged.
    Points where the spatial gradient of ``F`` vanishes are flagged
    ``isolated`` (the curve degenerates there, e.g. a zero-radius circle).
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if t_grid.size == 0:
        raise InputError("t_grid must be nonempty")
    seeds = family.seeds(t_grid, seeds_per_t)
    T = np.repeat(t_grid, seeds.shape[1])
    X = seeds.real.ravel().copy()
    Y = seeds.imag.ravel().copy()

    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            F, Ft = family.values(X, Y, T)
            Fx, Fy, Ftx, Fty = (_bcast(v, X) for v in family.jacobian(X, Y, T))
            J = np.stack([np.stack([Fx, Fy], -1), np.stack([Ftx, Fty], -1)], -2)
            ok = np.all(np.isfinite(J), axis=(-2, -1)) & np.isfinite(F) & np.isfinite(Ft)
            J[~ok] = 0.0
            rhs = np.stack([np.where(ok, F, 0.0), np.where(ok, Ft, 0.0)], -1)
            step = np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-12), rhs)
            X = X - step[:, 0]
            Y = Y - step[:, 1]
            if np.all(np.abs(step) <= 1e-15 * (1 + np.abs(np.stack([X, Y], -1)))):
                break
        F, Ft = family.values(X, Y, T)
        Fx, Fy, _, _ = (_bcast(v, X) for v in family.jacobian(X, Y, T))

    good = np.isfinite(F) & np.isfinite(Ft) & (np.abs(F) < tol) & (np.abs(Ft) < tol)
    grad = np.hypot(Fx, Fy)
    out = []
    k = seeds.shape[1]
    for i, t in enumerate(t_grid):
        kept = []
        for j in range(i * k, (i + 1) * k):
            if not good[j]:
                continue
            z = complex(X[j], Y[j])
            if any(abs(z - w) <= dedup_tol for w in kept):
                continue
            kept.append(z)
            out.append(EnvelopePoint(float(t), float(X[j]), float(Y[j]), bool(grad[j] < ISOLATED_TOL)))
    return out
