"""Axis-aligned grids, polyline curves, and curve/cell integration.

The grid discretizes a box domain with uniform cells per axis; fields attach
one value per cell (cell-centered, C order) and are treated as piecewise
constant. Curves are polylines, for which the length supremum over partitions
is attained by the vertex chain, so lengths and per-cell traversal lengths
are computed in closed form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateCurveError, DomainError

# Relative slack when testing containment in the closed grid box. Curves may
# touch the boundary; only genuine excursions outside are rejected.
BOX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Grid:
    """Axis-aligned box discretization carrying Lebesgue cell volumes."""

    box_min: np.ndarray
    box_max: np.ndarray
    resolution: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "box_min", np.atleast_1d(np.asarray(self.box_min, dtype=float)))
        object.__setattr__(self, "box_max", np.atleast_1d(np.asarray(self.box_max, dtype=float)))
        object.__setattr__(self, "resolution", np.atleast_1d(np.asarray(self.resolution, dtype=int)))
        if not (self.box_min.shape == self.box_max.shape == self.resolution.shape):
            raise ValueError("box_min, box_max and resolution must have matching length")
        if not np.all(np.isfinite(self.box_min)) or not np.all(np.isfinite(self.box_max)):
            raise ValueError("box bounds must be finite")
        if not np.all(self.box_min < self.box_max):
            raise ValueError("box_min must be strictly below box_max componentwise")
        if not np.all(self.resolution >= 1):
            raise ValueError("resolution must be >= 1 per axis")

    @property
    def ndim(self) -> int:
        return len(self.resolution)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(r) for r in self.resolution)

    @property
    def num_cells(self) -> int:
        return int(np.prod(self.resolution))

    @property
    def spacing(self) -> np.ndarray:
        return (self.box_max - self.box_min) / self.resolution

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis_centers(self, axis: int) -> np.ndarray:
        h = self.spacing[axis]
        return self.box_min[axis] + (np.arange(self.resolution[axis]) + 0.5) * h

    def cell_centers(self) -> np.ndarray:
        """Centers of all cells, shape (num_cells, ndim), C order."""
        axes = [self.axis_centers(i) for i in range(self.ndim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def contains(self, points: np.ndarray) -> bool:
        """True if every point lies in the closed box (up to BOX_TOL slack)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        slack = BOX_TOL * (1.0 + np.abs(self.box_max - self.box_min))
        return bool(
            np.all(pts >= self.box_min - slack) and np.all(pts <= self.box_max + slack)
        )

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Flat cell indices of the cells containing the given points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        idx = np.floor((pts - self.box_min) / self.spacing).astype(int)
        idx = np.clip(idx, 0, self.resolution - 1)
        return np.ravel_multi_index(tuple(idx.T), self.shape)

    def to_json(self) -> dict:
        return {
            "box_min": self.box_min.tolist(),
            "box_max": self.box_max.tolist(),
            "resolution": self.resolution.tolist(),
        }

    @classmethod
    def from_json(cls, record: dict) -> "Grid":
        return cls(record["box_min"], record["box_max"], record["resolution"])

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "Grid":
        return cls.from_json(json.loads(Path(path).read_text()))


class Polyline:
    """Rectifiable curve given by an ordered vertex chain in R^N."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a nonempty (k, N) array")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertices must be finite")
        self.vertices = v

    @property
    def ndim(self) -> int:
        return self.vertices.shape[1]

    @property
    def segment_lengths(self) -> np.ndarray:
        d = np.diff(self.vertices, axis=0)
        return np.sqrt(np.sum(d * d, axis=1))

    @property
    def cumulative_arclength(self) -> np.ndarray:
        """Nondecreasing arc positions of the vertices; starts at 0."""
        return np.concatenate([[0.0], np.cumsum(self.segment_lengths)])

    @property
    def length(self) -> float:
        return float(np.sum(self.segment_lengths))

    def points_at(self, ts) -> np.ndarray:
        """Points at arc-length parameters ``ts`` along the chain."""
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        cum = self.cumulative_arclength
        total = cum[-1]
        if np.any(ts < -BOX_TOL * (1 + total)) or np.any(ts > total * (1 + BOX_TOL) + BOX_TOL):
            raise ValueError("arc-length parameter out of [0, length]")
        ts = np.clip(ts, 0.0, total)
        if self.vertices.shape[0] == 1:
            return np.repeat(self.vertices, len(ts), axis=0)
        seg = np.clip(np.searchsorted(cum, ts, side="right") - 1, 0, len(cum) - 2)
        seg_len = self.segment_lengths
        width = seg_len[seg]
        frac = np.where(width > 0, (ts - cum[seg]) / np.where(width > 0, width, 1.0), 0.0)
        p0 = self.vertices[seg]
        p1 = self.vertices[seg + 1]
        return p0 + frac[:, None] * (p1 - p0)

    def point_at(self, t: float) -> np.ndarray:
        return self.points_at([t])[0]

    def __repr__(self):
        return f"Polyline({self.vertices.shape[0]} vertices, length={self.length:.6g})"


def length(c: Polyline) -> float:
    """Length of a polyline: the partition supremum, attained by the vertices."""
    return c.length


def arclength_parametrize(c: Polyline) -> Polyline:
    """Return ``c`` with degenerate repeated vertices collapsed.

    The result evaluates ``points_at`` on [0, length] and every restriction
    [s, t] has length t - s. Constant curves cannot be parametrized.
    """
    if c.length <= 0.0:
        raise DegenerateCurveError("cannot arc-length parametrize a constant curve")
    keep = np.concatenate([[True], c.segment_lengths > 0.0])
    return Polyline(c.vertices[keep])


def restrict(c: Polyline, s: float, t: float) -> Polyline:
    """Subcurve of ``c`` between arc-length parameters s <= t."""
    total = c.length
    if not (0.0 <= s <= t <= total * (1 + BOX_TOL) + BOX_TOL):
        raise ValueError(f"need 0 <= s <= t <= length, got s={s}, t={t}, length={total}")
    s = min(s, total)
    t = min(t, total)
    cum = c.cumulative_arclength
    inner = (cum > s) & (cum < t)
    pts = np.vstack([c.points_at([s]), c.vertices[inner], c.points_at([t])])
    return Polyline(pts)


@dataclass
class CurveFamily:
    """Finite family of nonconstant curves indexing a modulus problem."""

    curves: list
    label: str = ""

    def __post_init__(self):
        for c in self.curves:
            if c.length <= 0.0:
                raise DegenerateCurveError("curve families admit nonconstant curves only")

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)


@dataclass
class ScalarField:
    """Cell-centered piecewise-constant scalar field on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.values.shape[0] != self.grid.num_cells:
            raise ValueError("values must carry one entry per grid cell")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def value_at(self, points: np.ndarray) -> np.ndarray:
        return self.values[self.grid.locate(points)]


def _require_inside(c: Polyline, g: Grid) -> None:
    if c.ndim != g.ndim:
        raise ValueError("curve dimension does not match grid dimension")
    if not g.contains(c.vertices):
        raise DomainError("curve exits the grid box")


def _segment_crossings(g: Grid, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Parameters t in (0, 1) where the segment p->q crosses interior cell planes."""
    d = q - p
    ts = []
    for i in range(g.ndim):
        if d[i] == 0.0:
            continue
        lo, hi = (p[i], q[i]) if d[i] > 0 else (q[i], p[i])
        h = g.spacing[i]
        kmin = max(1, int(np.floor((lo - g.box_min[i]) / h)) + 1)
        kmax = min(int(g.resolution[i]) - 1, int(np.ceil((hi - g.box_min[i]) / h)) - 1)
        if kmax < kmin:
            continue
        planes = g.box_min[i] + np.arange(kmin, kmax + 1) * h
        ts.append((planes - p[i]) / d[i])
    if not ts:
        return np.empty(0)
    t = np.concatenate(ts)
    return np.sort(t[(t > 0.0) & (t < 1.0)])


def cell_lengths(c: Polyline, g: Grid) -> sp.csr_matrix:
    """Arc length of ``c`` inside each cell, as a sparse 1 x num_cells row.

    Each segment is split at the interior cell planes it crosses; the cell
    owning each piece is identified by the piece midpoint, so entries sum to
    the curve length exactly (up to roundoff).
    """
    _require_inside(c, g)
    row = np.zeros(g.num_cells)
    for p, q, seg_len in zip(c.vertices[:-1], c.vertices[1:], c.segment_lengths):
        if seg_len == 0.0:
            continue
        t = np.concatenate([[0.0], _segment_crossings(g, p, q), [1.0]])
        widths = np.diff(t) * seg_len
        mids = p + (0.5 * (t[:-1] + t[1:]))[:, None] * (q - p)
        np.add.at(row, g.locate(mids), widths)
    return sp.csr_matrix(row[None, :])


def curve_integral(rho: ScalarField, c: Polyline, step: float | None = None) -> float:
    """Integral of ``rho`` along the arc-length parametrized curve ``c``.

    Composite midpoint quadrature. The partition refines both the requested
    step (default: half the minimum grid spacing) and the cell-plane
    crossings, so the quadrature is exact for the piecewise-constant field
    model and agrees with the constraint-row discretization.
    """
    g = rho.grid
    _require_inside(c, g)
    if np.any(rho.values < 0.0):
        raise ValueError("curve_integral expects a nonnegative density")
    if step is None:
        step = float(np.min(g.spacing)) / 2.0
    if step <= 0.0:
        raise ValueError("quadrature step must be positive")
    total = 0.0
    for p, q, seg_len in zip(c.vertices[:-1], c.vertices[1:], c.segment_lengths):
        if seg_len == 0.0:
            continue
        t = np.concatenate([[0.0], _segment_crossings(g, p, q), [1.0]])
        pieces = []
        for a, b in zip(t[:-1], t[1:]):
            if b <= a:
                continue
            n = max(1, int(np.ceil((b - a) * seg_len / step)))
            pieces.append(np.linspace(a, b, n + 1))
        if not pieces:
            continue
        tt = np.unique(np.concatenate(pieces))
        widths = np.diff(tt) * seg_len
        mids = p + (0.5 * (tt[:-1] + tt[1:]))[:, None] * (q - p)
        total += float(np.dot(rho.value_at(mids), widths))
    return total


# ---------------------------------------------------------------------------
# File formats: polylines as plain CSV (one vertex per line), families as a
# JSON manifest listing CSV paths, grids as a JSON record.

def save_polyline_csv(c: Polyline, path) -> None:
    lines = [",".join(format(x, ".17g") for x in v) for v in c.vertices]
    Path(path).write_text("\n".join(lines) + "\n")


def load_polyline_csv(path) -> Polyline:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([float(x) for x in line.split(",")])
    if not rows:
        raise ValueError(f"empty polyline file: {path}")
    return Polyline(np.asarray(rows))


def save_family(fam: CurveFamily, manifest_path, stem: str = "curve") -> None:
    manifest_path = Path(manifest_path)
    paths = []
    for i, c in enumerate(fam.curves):
        rel = f"{stem}_{i:04d}.csv"
        save_polyline_csv(c, manifest_path.parent / rel)
        paths.append(rel)
    manifest_path.write_text(json.dumps({"label": fam.label, "curves": paths}, indent=2) + "\n")


def load_family(manifest_path) -> CurveFamily:
    manifest_path = Path(manifest_path)
    record = json.loads(manifest_path.read_text())
    curves = [load_polyline_csv(manifest_path.parent / rel) for rel in record["curves"]]
    return CurveFamily(curves=curves, label=record.get("label", ""))
