"""``nr`` command line front end.

Every command writes a CSV with a header row (stdout unless ``--csv`` is
given) and optionally an SVG figure.  Exit status is 0 on success, 2 for bad
input and 3 for a numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from .bidisk import (
    bidisk_numrange,
    boundary_curve,
    mtheta_fixture,
    product_example,
    slice_blaschke,
    tau_grid,
    theta_squared,
)
from .envelope import CircleFamily, SupportLineFamily, discriminant_envelope, verify_on_ellipse
from .errors import InputError, NumericalError
from .geometry import convex_hull
from .linalg import as_cmatrix
from .numrange import DEFAULT_SAMPLES, crouzeix_ratio, elliptical_range, numerical_range
from .shift import (
    DEFAULT_LAMBDA_COUNT,
    as_zeros,
    blaschke_eval,
    dilation_eigenvalues_many,
    lambda_grid,
    numrange_via_dilations,
    sb_matrix,
    unitary_dilation,
)
from .svg import UNIT_VIEW, SvgFigure, fit_view

COMMANDS = ("matrix", "blaschke", "dilation", "poncelet", "envelope", "bidisk", "crouzeix")
EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
# shapes drawn per figure when a family is large
_MAX_DRAWN = 36


@dataclass
class JobSpec:
    command: str
    params: dict = field(default_factory=dict)
    csv_path: str | None = None
    svg_path: str | None = None


# ---- input parsing -------------------------------------------------------

_IMAG_ONLY = re.compile(r"^([+-]?)i$")


def parse_complex(text):
    """Parse ``re+imi`` style literals such as ``0.5-0.25i``, ``-i`` or ``2``."""
    s = text.strip().replace(" ", "")
    if not s:
        raise InputError("empty complex literal")
    m = _IMAG_ONLY.match(s)
    if m:
        return complex(0, -1.0 if m.group(1) == "-" else 1.0)
    if s.endswith("i"):
        s = re.sub(r"(^|[+-])i$", r"\g<1>1i", s)
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def parse_complex_list(text):
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise InputError("expected a comma-separated list of complex numbers")
    return np.array([parse_complex(t) for t in items], dtype=complex)


def load_matrix(path):
    """Read ``{"n": int, "re": [[...]], "im": [[...]]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix file {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "re" not in doc or "im" not in doc:
        raise InputError('matrix JSON needs keys "n", "re" and "im"')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise InputError(f'"n" must be a positive integer, got {n!r}')
    try:
        re_part = np.array(doc["re"], dtype=float)
        im_part = np.array(doc["im"], dtype=float)
    except (TypeError, ValueError):
        raise InputError('"re" and "im" must be numeric n x n arrays') from None
    if re_part.shape != (n, n) or im_part.shape != (n, n):
        raise InputError(f'"re" and "im" must both have shape ({n}, {n})')
    return as_cmatrix(re_part + 1j * im_part)


def dump_matrix(A):
    A = np.asarray(A, dtype=complex)
    return json.dumps({"n": A.shape[0], "re": A.real.tolist(), "im": A.imag.tolist()})


# ---- output helpers ------------------------------------------------------

def _write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def sample_rows(approx):
    return [(s.gamma, s.h, s.boundary_point.real, s.boundary_point.imag) for s in approx.samples]


def polygon_rows(P):
    """One ``gamma,h,x,y`` row per vertex, with ``gamma`` inside the vertex's normal cone."""
    v = P.vertices
    if v.size == 1:
        g = np.array([0.0])
    elif v.size == 2:
        d = v[1] - v[0]
        g = np.angle(np.array([-d, d]))
    else:
        e = np.roll(v, -1) - v
        u = -1j * e / np.abs(e)
        g = np.angle(np.roll(u, 1) + u)
    h = (np.exp(-1j * g) * v).real
    return list(zip(g, h, v.real, v.imag))


def read_rows(path):
    """Re-read a ``gamma,h,x,y`` CSV as complex boundary points."""
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([complex(float(r["x"]), float(r["y"])) for r in rows])


def _check_inner_outer(approx, tol):
    scale = max(approx.outer.scale, 1.0)
    gap = float(np.max(approx.outer.distance(approx.inner.vertices)))
    if gap > tol * scale:
        raise NumericalError(f"inner polygon leaves the outer polygon by {gap:.3e}")


# ---- commands ------------------------------------------------------------

def _cmd_matrix(job):
    p = job.params
    A = load_matrix(p["input"])
    approx = numerical_range(A, p["samples"])
    _check_inner_outer(approx, p["tol"])
    _write_csv(job.csv_path, ["gamma", "h", "x", "y"], sample_rows(approx))
    if job.svg_path:
        eig = np.linalg.eigvals(A)
        fig = SvgFigure(fit_view([approx.outer.vertices, eig]))
        fig.polygon(approx.outer.vertices, stroke="#bbbbbb", width=1.0)
        fig.polygon(approx.inner.vertices, stroke="#1f4e9c", fill="#dbe6f7")
        fig.dots(eig, color="#b22222", radius=3)
        fig.save(job.svg_path)


def _cmd_blaschke(job):
    p = job.params
    zeros = as_zeros(p["zeros"])
    approx = numerical_range(sb_matrix(zeros), p["samples"])
    _check_inner_outer(approx, p["tol"])
    _write_csv(job.csv_path, ["gamma", "h", "x", "y"], sample_rows(approx))
    if job.svg_path:
        fig = SvgFigure(UNIT_VIEW).unit_circle()
        lams = lambda_grid(min(p["lambda_count"], 12))
        for row in dilation_eigenvalues_many(zeros, lams):
            fig.polygon(row, stroke="#888888", width=0.8, opacity=0.8)
        fig.polygon(approx.inner.vertices, stroke="#1f4e9c", fill="#dbe6f7", width=1.8)
        fig.dots(zeros, color="#b22222", radius=3)
        fig.save(job.svg_path)


def _cmd_dilation(job):
    p = job.params
    zeros = as_zeros(p["zeros"])
    d = unitary_dilation(zeros, p["lam"])
    U = d.matrix
    unit_err = float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2))
    if unit_err > p["tol"]:
        raise NumericalError(f"dilation fails unitarity by {unit_err:.3e}")
    mu = dilation_eigenvalues_many(zeros, [p["lam"]])[0]
    resid = float(np.max(np.abs(mu * blaschke_eval(d.base, mu) - p["lam"])))
    if resid > p["tol"]:
        raise NumericalError(f"eigenvalue equation residual {resid:.3e}")
    _write_csv(job.csv_path, ["gamma", "h", "x", "y"], polygon_rows(convex_hull(mu)))
    if p.get("matrix_out"):
        with open(p["matrix_out"], "w", encoding="utf-8") as fh:
            fh.write(dump_matrix(U) + "\n")
    if job.svg_path:
        fig = SvgFigure(UNIT_VIEW).unit_circle()
        fig.polygon(mu, stroke="#1f4e9c", width=1.5)
        fig.dots(mu, color="#1f4e9c", radius=3)
        fig.dots(zeros, color="#b22222", radius=3)
        fig.save(job.svg_path)


def _cmd_poncelet(job):
    p = job.params
    zeros = as_zeros(p["zeros"])
    W = numrange_via_dilations(zeros, p["lambda_count"])
    _write_csv(job.csv_path, ["gamma", "h", "x", "y"], polygon_rows(W))
    if job.svg_path:
        fig = SvgFigure(UNIT_VIEW).unit_circle()
        step = max(1, p["lambda_count"] // _MAX_DRAWN)
        lams = lambda_grid(p["lambda_count"])[::step]
        for row in dilation_eigenvalues_many(zeros, lams):
            fig.polygon(row, stroke="#888888", width=0.6, opacity=0.7)
        fig.polygon(W.vertices, stroke="#1f4e9c", fill="#dbe6f7", width=1.8)
        fig.save(job.svg_path)


def _cmd_envelope(job):
    p = job.params
    n = p["samples"]
    if p.get("input"):
        A = load_matrix(p["input"])
        fam = SupportLineFamily(A)
        ts = 2 * np.pi * np.arange(n) / n
    else:
        m = p["m"]
        fam = CircleFamily(m)
        ts = np.linspace(0.0, 1.0, n)
    pts = discriminant_envelope(fam, ts)
    if not p.get("input"):
        bad = [q for q in pts if not q.isolated and verify_on_ellipse(q, p["m"]) > p["tol"]]
        if bad:
            raise NumericalError(f"{len(bad)} envelope points miss the ellipse by more than {p['tol']}")
    _write_csv(job.csv_path, ["t", "x", "y", "isolated"], [(q.t, q.x, q.y, int(q.isolated)) for q in pts])
    if job.svg_path:
        z = np.array([q.z for q in pts]) if pts else np.zeros(1, dtype=complex)
        if p.get("input"):
            fig = SvgFigure(fit_view([z]))
            for g in ts[:: max(1, n // _MAX_DRAWN)]:
                base = fam.support(g)[0] * np.exp(1j * g)
                span = 4 * (np.ptp(z.real) + np.ptp(z.imag) + 1e-3)
                fig.polyline(base + np.exp(1j * g) * 1j * np.array([-span, span]), stroke="#bbbbbb", width=0.6)
        else:
            tt = np.linspace(0, 1, _MAX_DRAWN + 2)[1:-1]
            ring = np.exp(2j * np.pi * np.arange(181) / 180)
            circles = [fam.center(t) + fam.radius(t) * ring for t in tt]
            fig = SvgFigure(fit_view(circles + [z]))
            for c in circles:
                fig.polyline(c, stroke="#bbbbbb", width=0.6)
        fig.dots(z, color="#1f4e9c", radius=1.5)
        fig.save(job.svg_path)


def _cmd_bidisk(job):
    p = job.params
    if p.get("example") == "product":
        theta = product_example()
    else:
        theta = theta_squared(p["a"], p["c"])
    res = bidisk_numrange(theta, p["tau_count"], p["samples"])
    print(f"slices used: {res.used}, excluded: {res.excluded}", file=sys.stderr)
    _write_csv(job.csv_path, ["gamma", "h", "x", "y"], polygon_rows(res.polygon))
    if job.svg_path:
        fig = SvgFigure(UNIT_VIEW).unit_circle()
        step = max(1, p["tau_count"] // _MAX_DRAWN)
        for tau in tau_grid(p["tau_count"])[::step]:
            if p.get("example") == "product":
                ell = elliptical_range(mtheta_fixture(tau))
                fig.polygon(ell.boundary(180).vertices, stroke="#888888", width=0.6, opacity=0.8)
                continue
            s = slice_blaschke(theta, tau)
            if not s.excluded:
                sl = numerical_range(sb_matrix(s.blaschke.zeros), 180).inner
                fig.polygon(sl.vertices, stroke="#888888", width=0.6, opacity=0.8)
        fig.polygon(res.polygon.vertices, stroke="#1f4e9c", width=1.8)
        if p.get("example") != "product" and abs(p["a"] - 1 - p["c"]) < 1e-12:
            x, y = boundary_curve(p["a"], p["c"], 2 * np.pi * np.arange(720) / 720)
            fig.polygon(x + 1j * y, stroke="#b22222", width=1.0)
        fig.save(job.svg_path)


def _random_case(rng):
    n = int(rng.integers(1, 7))
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    deg = int(rng.integers(1, 9))
    c = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
    return A, c


def _cmd_crouzeix(job):
    p = job.params
    rows = []
    if p.get("random"):
        rng = np.random.default_rng(p["seed"])
        for k in range(p["random"]):
            A, c = _random_case(rng)
            rows.append((k, A.shape[0], c.size - 1, crouzeix_ratio(c, A, p["samples"])))
    else:
        if p.get("input"):
            A = load_matrix(p["input"])
        else:
            A = np.array([[0, 1], [0, 0]], dtype=complex)
        c = p["poly"]
        rows.append((0, A.shape[0], c.size - 1, crouzeix_ratio(c, A, p["samples"])))
    _write_csv(job.csv_path, ["trial", "n", "degree", "ratio"], rows)


_RUNNERS = {
    "matrix": _cmd_matrix,
    "blaschke": _cmd_blaschke,
    "dilation": _cmd_dilation,
    "poncelet": _cmd_poncelet,
    "envelope": _cmd_envelope,
    "bidisk": _cmd_bidisk,
    "crouzeix": _cmd_crouzeix,
}


def validate(job):
    p = job.params
    if job.command not in COMMANDS:
        raise InputError(f"unknown command {job.command!r}")
    if p.get("samples", 3) < 3:
        raise InputError("--samples must be at least 3")
    if p.get("lambda_count", 3) < 3:
        raise InputError("--lambda-count must be at least 3")
    if p.get("tau_count", 8) < 8:
        raise InputError("--tau-count must be at least 8")
    if not p.get("tol", 1.0) > 0:
        raise InputError("--tol must be positive")
    if job.command in ("blaschke", "dilation", "poncelet"):
        if p.get("zeros") is None:
            raise InputError("--zeros is required")
    if job.command == "matrix" and not p.get("input"):
        raise InputError("--input is required")
    if job.command == "envelope" and not p.get("input"):
        if p.get("m") is None or not p["m"] > 0:
            raise InputError("envelope needs --m > 0 or --input")
    if job.command == "bidisk" and p.get("example") != "product":
        if p.get("a") is None or p.get("c") is None:
            raise InputError("bidisk needs --a and --c (or --example product)")
    if job.command == "crouzeix" and p.get("random") is not None and p["random"] < 1:
        raise InputError("--random must be positive")


def run(job):
    """Validate and execute a job; returns the process exit status."""
    try:
        validate(job)
        _RUNNERS[job.command](job)
    except InputError as exc:
        print(f"nr {job.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"nr {job.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"nr {job.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="support directions (default 720)")
    common.add_argument("--lambda-count", type=int, default=DEFAULT_LAMBDA_COUNT)
    common.add_argument("--tau-count", "--tau", dest="tau_count", type=int, default=360)
    common.add_argument("--tol", type=float, default=1e-9, help="verification tolerance (default 1e-9)")
    common.add_argument("--svg", dest="svg_path")
    common.add_argument("--csv", dest="csv_path")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="nr", description="Numerical ranges and compressed shifts.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("matrix", parents=[common], help="numerical range of a matrix")
    sp.add_argument("--input", required=True, help='JSON file {"n", "re", "im"}')

    for name, text in (("blaschke", "range of the compressed shift S_B"),
                       ("dilation", "unitary 1-dilation and its eigenvalues"),
                       ("poncelet", "range as an intersection of inscribed polygons")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--zeros", required=True, type=parse_complex_list, help="e.g. 0,0.5+0.2i")
        if name == "dilation":
            sp.add_argument("--lam", type=parse_complex, default=1 + 0j, help="unimodular parameter")
            sp.add_argument("--matrix-out", help="write the dilation matrix as JSON")

    sp = sub.add_parser("envelope", parents=[common], help="discriminant envelope of a family")
    sp.add_argument("--m", type=float)
    sp.add_argument("--input", help="matrix JSON; uses its support-line family")

    sp = sub.add_parser("bidisk", parents=[common], help="slice-hull range for an inner function on the bidisk")
    sp.add_argument("--a", type=float)
    sp.add_argument("--c", type=float)
    sp.add_argument("--example", choices=["product"])

    sp = sub.add_parser("crouzeix", parents=[common], help="ratio ||p(A)|| / max |p| over W(A)")
    sp.add_argument("--input")
    sp.add_argument("--poly", type=parse_complex_list, default=np.array([0, 1], dtype=complex),
                    help="ascending coefficients (default z)")
    sp.add_argument("--random", type=int, help="number of seeded random trials")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    params = {k: v for k, v in vars(args).items() if k not in ("command", "csv_path", "svg_path")}
    job = JobSpec(args.command, params, args.csv_path, args.svg_path)
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
