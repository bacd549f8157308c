"""Planar convex geometry on complex-number points.

A point ``x + iy`` is stored as the complex number ``x + 1j*y``.  Convex
polygons keep their vertices counterclockwise.  One or two vertices give a
degenerate polygon (a point or a segment); zero vertices is the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

HULL_TOL = 1e-12
CLIP_TOL = 1e-12

# points per chunk when forming point x edge distance tables
_DIST_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=complex).reshape(-1)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return self.vertices.size

    def __repr__(self):
        return f"ConvexPolygon({self.vertices.size} vertices)"

    @property
    def empty(self):
        return self.vertices.size == 0

    @property
    def degenerate(self):
        """True for a single point or a segment."""
        return 0 < self.vertices.size <= 2

    @property
    def scale(self):
        if self.empty:
            return 0.0
        return float(np.max(np.abs(self.vertices - self.vertices.mean())))

    def edges(self):
        """Edge start and end points; a segment counts as one edge."""
        v = self.vertices
        if v.size == 2:
            return v[:1], v[1:]
        return v, np.roll(v, -1)

    def support(self, gamma):
        """Support function ``max_v Re(exp(-i gamma) v)``, vectorised in gamma."""
        if self.empty:
            raise InputError("support function of an empty polygon")
        g = np.asarray(gamma, dtype=float)
        rot = np.exp(-1j * g)[..., None]
        return np.max((rot * self.vertices).real, axis=-1)

    def distance(self, z):
        """Euclidean distance from each ``z`` to the filled polygon (0 inside)."""
        if self.empty:
            raise InputError("distance to an empty polygon")
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        v = self.vertices
        if v.size == 1:
            return np.abs(z - v[0])
        a, b = self.edges()
        ab = b - a
        L2 = np.abs(ab) ** 2
        tol = 1e-14 * max(self.scale, 1.0) ** 2
        out = np.empty(flat.size)
        for lo in range(0, flat.size, _DIST_CHUNK):
            zz = flat[lo:lo + _DIST_CHUNK, None]
            az = zz - a[None, :]
            t = np.clip((az * ab.conj()).real / np.where(L2 > 0, L2, 1.0), 0.0, 1.0)
            d = np.min(np.abs(az - t * ab), axis=1)
            if v.size >= 3:
                cross = (ab.conj() * az).imag
                d[np.all(cross >= -tol, axis=1)] = 0.0
            out[lo:lo + _DIST_CHUNK] = d
        return out.reshape(z.shape)

    def contains(self, z, tol=1e-9):
        return self.distance(z) <= tol


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chain(pts, eps):
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= eps:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= eps:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _prefilter(z, eps):
    # Akl-Toussaint: drop points strictly inside the octagon of extreme points
    x, y = z.real, z.imag
    keys = (x, y, x + y, x - y)
    idx = set()
    for k in keys:
        idx.add(int(np.argmax(k)))
        idx.add(int(np.argmin(k)))
    cand = z[sorted(idx)]
    order = np.lexsort((cand.imag, cand.real))
    octa = _chain([(c.real, c.imag) for c in cand[order]], eps)
    if len(octa) < 3:
        return z
    oc = np.array([complex(px, py) for px, py in octa])
    a, b = oc, np.roll(oc, -1)
    inside = np.ones(z.size, dtype=bool)
    for ai, bi in zip(a, b):
        inside &= ((bi - ai).conjugate() * (z - ai)).imag > 4 * eps
    return z[~inside]


def convex_hull(points, tol=HULL_TOL):
    """Counterclockwise convex hull by Andrew's monotone chain.

    Collinear and duplicate points are dropped using a tolerance relative to
    the extent of the point set.  Degenerate inputs give a one-vertex (point)
    or two-vertex (segment) polygon.
    """
    z = np.asarray(points, dtype=complex).reshape(-1)
    if z.size == 0:
        raise InputError("convex_hull needs at least one point")
    if not np.all(np.isfinite(z)):
        raise InputError("convex_hull got non-finite points")
    span = max(np.ptp(z.real), np.ptp(z.imag))
    mag = float(np.max(np.abs(z)))
    if span <= tol * mag or span == 0.0:
        return ConvexPolygon([z.mean()])
    # cross products of rounding noise scale like span * mag * eps
    eps = tol * span * max(span, mag)
    if z.size > 64:
        z = _prefilter(z, eps)
    order = np.lexsort((z.imag, z.real))
    zs = z[order]
    pts = list(zip(zs.real.tolist(), zs.imag.tolist()))
    hull = _chain(pts, eps)
    h = np.array([complex(px, py) for px, py in hull])
    if h.size > 1:
        keep = np.abs(h - np.roll(h, 1)) > tol * span
        if not keep.any():
            keep[0] = True
        h = h[keep]
    return ConvexPolygon(h)


def halfplanes_of(P):
    """Outward unit normals ``u`` and offsets ``h`` with P = {Re(conj(u) z) <= h}."""
    if len(P) < 3:
        raise InputError("half-plane form needs a polygon with at least 3 vertices")
    a, b = P.edges()
    e = b - a
    u = -1j * e / np.abs(e)
    return u, (u.conj() * a).real


def clip_halfplanes(vertices, normals, offsets, tol=CLIP_TOL):
    """Clip a convex vertex loop by half-planes ``Re(conj(u) z) <= h``.

    Sutherland-Hodgman, one half-plane at a time.  Returns the raw vertex
    array (possibly with near-duplicates); run it through ``convex_hull`` to
    obtain a clean polygon.
    """
    v = np.asarray(vertices, dtype=complex).reshape(-1)
    normals = np.asarray(normals, dtype=complex).reshape(-1)
    offsets = np.asarray(offsets, dtype=float).reshape(-1)
    if v.size == 0:
        return v
    scale = max(np.max(np.abs(v)), 1.0)
    atol = tol * scale
    for u, h in zip(normals, offsets):
        d = (v * u.conjugate()).real - h
        inside = d <= atol
        if inside.all():
            continue
        if not inside.any():
            return v[:0]
        nxt = np.roll(v, -1)
        dn = np.roll(d, -1)
        crossing = inside != np.roll(inside, -1)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(crossing, d / (d - dn), 0.0)
        ip = v + (nxt - v) * t
        out = np.stack([v, ip], axis=1).reshape(-1)
        keep = np.stack([inside, crossing], axis=1).reshape(-1)
        v = out[keep]
    return v


def _segment_intersection(P, Q, tol):
    # both degenerate (point or segment)
    if len(P) == 1 or len(Q) == 1:
        pt, other = (P, Q) if len(P) == 1 else (Q, P)
        z = pt.vertices[0]
        return ConvexPolygon([z]) if other.distance(z) <= tol else ConvexPolygon([])
    a, b = P.vertices
    c, d = Q.vertices
    r, s = b - a, d - c
    denom = (r.conjugate() * s).imag
    scale = max(abs(r), abs(s), 1e-300)
    if abs(denom) > tol * scale * scale:
        t = ((c - a).conjugate() * s).imag / denom
        z = a + t * r
        if P.distance(z) <= tol and Q.distance(z) <= tol:
            return ConvexPolygon([z])
        return ConvexPolygon([])
    # parallel: overlap along the common line if they are collinear
    if abs(((c - a).conjugate() * r).imag) / abs(r) > tol:
        return ConvexPolygon([])
    ts = sorted(((w - a) * r.conjugate()).real / abs(r) ** 2 for w in (c, d))
    lo, hi = max(0.0, ts[0]), min(1.0, ts[1])
    if hi < lo - tol / abs(r):
        return ConvexPolygon([])
    return convex_hull([a + lo * r, a + max(lo, hi) * r])


def polygon_intersection(P, Q, tol=CLIP_TOL):
    """Intersection of two convex polygons by successive half-plane clipping."""
    if P.empty or Q.empty:
        return ConvexPolygon([])
    if len(Q) < 3 and len(P) >= 3:
        P, Q = Q, P
    if len(Q) < 3:
        return _segment_intersection(P, Q, max(tol, 1e-12) * max(P.scale, Q.scale, 1.0))
    u, h = halfplanes_of(Q)
    raw = clip_halfplanes(P.vertices, u, h, tol)
    if raw.size == 0:
        return ConvexPolygon([])
    return convex_hull(raw)


def polygon_support(P, gamma):
    """Support value of ``P`` in direction ``exp(i gamma)``."""
    return P.support(gamma)


def hausdorff_distance(P, Q, ngamma=360):
    """Symmetric Hausdorff distance between two filled convex polygons.

    The distance to a convex set is a convex function, so its maximum over a
    polygon sits at a vertex: the vertex-to-set pass below is exact.  The
    support-function difference on a ``ngamma`` grid is a lower bound that is
    folded in as a cross-check.
    """
    if P.empty or Q.empty:
        raise InputError("Hausdorff distance of an empty polygon")
    exact = max(np.max(Q.distance(P.vertices)), np.max(P.distance(Q.vertices)))
    g = 2 * np.pi * np.arange(ngamma) / ngamma
    grid = np.max(np.abs(P.support(g) - Q.support(g)))
    return float(max(exact, grid))


def densify(P, npoints):
    """Vertices of ``P`` plus ``npoints`` points spread evenly along its boundary."""
    if P.empty:
        raise InputError("cannot densify an empty polygon")
    v = P.vertices
    if v.size == 1:
        return v.copy()
    loop = np.append(v, v[0]) if v.size > 2 else np.array([v[0], v[1], v[0]])
    seg = np.abs(np.diff(loop))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    s = np.linspace(0.0, cum[-1], int(npoints), endpoint=False)
    pts = np.interp(s, cum, loop.real) + 1j * np.interp(s, cum, loop.imag)
    return np.concatenate([v, pts])
