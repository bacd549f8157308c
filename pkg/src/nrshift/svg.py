"""Minimal SVG writer for planar figures given as complex points."""

from __future__ import annotations

import numpy as np

UNIT_VIEW = (-1.2, 1.2, -1.2, 1.2)


def fit_view(points, margin=0.08):
    """Square viewport ``(xmin, xmax, ymin, ymax)`` around the points."""
    z = np.concatenate([np.atleast_1d(np.asarray(p, dtype=complex)).ravel() for p in points])
    cx = 0.5 * (z.real.max() + z.real.min())
    cy = 0.5 * (z.imag.max() + z.imag.min())
    half = 0.5 * max(np.ptp(z.real), np.ptp(z.imag), 1e-6) * (1 + 2 * margin)
    return (cx - half, cx + half, cy - half, cy + half)


def _fmt(v):
    return f"{v:.5f}".rstrip("0").rstrip(".")


class SvgFigure:
    """Accumulates shapes in data coordinates and renders them with y pointing up."""

    def __init__(self, view=UNIT_VIEW, size=600):
        self.view = tuple(float(v) for v in view)
        self.size = int(size)
        self._items = []

    def _xy(self, z):
        x0, x1, y0, y1 = self.view
        sx = (np.real(z) - x0) / (x1 - x0) * self.size
        sy = (y1 - np.imag(z)) / (y1 - y0) * self.size
        return sx, sy

    def _path(self, z, closed):
        sx, sy = self._xy(np.asarray(z, dtype=complex))
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(np.atleast_1d(sx), np.atleast_1d(sy)))
        return ("polygon" if closed else "polyline"), pts

    def polygon(self, z, stroke="black", fill="none", width=1.5, opacity=1.0):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if z.size == 1:
            return self.dots(z, color=stroke, radius=2.5)
        tag, pts = self._path(z, closed=z.size > 2)
        self._items.append(
            f'<{tag} points="{pts}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-opacity="{opacity}"/>'
        )
        return self

    def polyline(self, z, stroke="black", width=1.0, opacity=1.0):
        tag, pts = self._path(z, closed=False)
        self._items.append(
            f'<{tag} points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-opacity="{opacity}"/>'
        )
        return self

    def circle(self, center, radius, stroke="gray", width=1.0, dash=None):
        sx, sy = self._xy(complex(center))
        r = radius / (self.view[1] - self.view[0]) * self.size
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self._items.append(
            f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="{_fmt(r)}" fill="none" '
            f'stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )
        return self

    def unit_circle(self):
        return self.circle(0j, 1.0, stroke="gray", width=1.0, dash="4,3")

    def dots(self, z, color="black", radius=2.0):
        sx, sy = self._xy(np.atleast_1d(np.asarray(z, dtype=complex)))
        for a, b in zip(sx, sy):
            self._items.append(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{radius}" fill="{color}"/>')
        return self

    def render(self):
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="0 0 {self.size} {self.size}">'
        )
        body = "\n".join(self._items)
        return f'{head}\n<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.render())
