"""Escape times, asymptotic-fate classification, and plane-slice rasters.

An orbit "escapes" when it leaves the population simplex; the surplus over
the carrying capacity makes the next iterate negative and the species
crash.  ``escape_time`` reports the first exit, ``classify_fate`` also
recognizes convergence to one of the fixed points, and ``raster_slice``
evaluates the fate over a 2D grid on an axis-aligned plane cut of the
simplex, mirroring the escape-set and basin pictures.

Raster cells are mutually independent.  The grid kernel is vectorized one
row at a time and reproduces the scalar ``classify_fate`` bit for bit
(same operations in the same order), so rasters are bitwise identical for
any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .equilibria import FixedPointId, fixed_points
from .map_core import Params, State, in_simplex, step

__all__ = [
    "FateKind",
    "Fate",
    "PlaneSlice",
    "EscapeRaster",
    "one_step_escapes",
    "escape_time",
    "classify_fate",
    "raster_slice",
    "CODE_UNDETERMINED",
]

DEFAULT_CONV_TOL = 1e-8
DEFAULT_CONV_WINDOW = 20
DEFAULT_FATE_MAX_ITER = 50_000
DEFAULT_RASTER_MAX_ITER = 50

# Raster cell codes: k >= 0 means escaped at iterate k (0 is the sentinel
# for cell centers that already lie outside the simplex); -1..-4 mean
# converged to P1..P4; -9 means undetermined within the iteration budget.
CODE_UNDETERMINED = -9

_FP_CODE = {
    FixedPointId.P1: -1,
    FixedPointId.P2: -2,
    FixedPointId.P3: -3,
    FixedPointId.P4: -4,
}


class FateKind(Enum):
    CONVERGED_P1 = "converged_p1"
    CONVERGED_P2 = "converged_p2"
    CONVERGED_P3 = "converged_p3"
    CONVERGED_P4 = "converged_p4"
    ESCAPED = "escaped"
    UNDETERMINED = "undetermined"


_CONVERGED_KIND = {
    FixedPointId.P1: FateKind.CONVERGED_P1,
    FixedPointId.P2: FateKind.CONVERGED_P2,
    FixedPointId.P3: FateKind.CONVERGED_P3,
    FixedPointId.P4: FateKind.CONVERGED_P4,
}


@dataclass(frozen=True)
class Fate:
    """Asymptotic outcome of an orbit; ``escape_index`` is set only for
    escaped orbits."""

    kind: FateKind
    escape_index: int | None = None


def _code_to_fate(code: int) -> Fate:
    if code >= 0:
        return Fate(FateKind.ESCAPED, int(code))
    if code == CODE_UNDETERMINED:
        return Fate(FateKind.UNDETERMINED)
    fp = list(_CONVERGED_KIND.values())[-code - 1]
    return Fate(fp)


@dataclass(frozen=True)
class PlaneSlice:
    """Axis-aligned plane, e.g. ``PlaneSlice("y", 0.0)`` for the y=0 wall.

    The two free axes, in (x, y, z) order, index raster columns (first
    free axis, ``u``) and rows (second free axis, ``v``).
    """

    axis: str
    offset: float

    def __post_init__(self) -> None:
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"plane axis must be x, y or z, got {self.axis!r}")

    def free_axes(self) -> tuple[str, str]:
        return tuple(a for a in ("x", "y", "z") if a != self.axis)


@dataclass(frozen=True)
class EscapeRaster:
    """Fate grid over a plane slice.

    ``codes`` has shape (ny, nx); cell ``(i, j)`` (column i, row j) covers
    the center ``cell_center(i, j)`` of the (i, j)-th rectangle of the
    bounds, sampled at cell centers.
    """

    plane: PlaneSlice
    bounds: tuple[float, float, float, float]
    resolution: tuple[int, int]
    max_iter: int
    conv_tol: float
    conv_window: int
    codes: np.ndarray

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        umin, umax, vmin, vmax = self.bounds
        nx, ny = self.resolution
        u = umin + (i + 0.5) * (umax - umin) / nx
        v = vmin + (j + 0.5) * (vmax - vmin) / ny
        return u, v

    def state_at(self, i: int, j: int) -> State:
        u, v = self.cell_center(i, j)
        coords = {self.plane.axis: self.plane.offset}
        fu, fv = self.plane.free_axes()
        coords[fu] = u
        coords[fv] = v
        return State(coords["x"], coords["y"], coords["z"])

    def fate(self, i: int, j: int) -> Fate:
        return _code_to_fate(int(self.codes[j, i]))


def one_step_escapes(s, p: Params) -> bool:
    """True iff a simplex point maps outside the simplex in one iterate."""
    if not in_simplex(s):
        raise ValueError("one_step_escapes expects a point of the simplex")
    return not in_simplex(step(s, p))


def escape_time(s, p: Params, max_iter: int) -> int | None:
    """Smallest k <= max_iter with the k-th iterate outside the simplex,
    or ``None`` if the orbit survives the whole budget."""
    if not in_simplex(s):
        raise ValueError("escape_time expects a point of the simplex")
    mu, beta, gamma = p.mu, p.beta, p.gamma
    x, y, z = s
    for k in range(1, max_iter + 1):
        x, y, z = (
            mu * x * (1.0 - x - y - z),
            beta * y * (x - z),
            gamma * y * z,
        )
        if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
            return k
    return None


def classify_fate(
    s,
    p: Params,
    max_iter: int = DEFAULT_FATE_MAX_ITER,
    conv_tol: float = DEFAULT_CONV_TOL,
    conv_window: int = DEFAULT_CONV_WINDOW,
) -> Fate:
    """Escape / convergence / undetermined outcome of one orbit.

    Escape is checked before convergence at every step, so an orbit that
    lingers near a fixed point but later exits is still Escaped.
    Convergence to a fixed point requires the max-norm distance to stay
    below ``conv_tol`` for ``conv_window`` consecutive iterates; the first
    existing fixed point (in id order) to complete a window wins.
    """
    if not in_simplex(s):
        raise ValueError("classify_fate expects a point of the simplex")
    fps = [r for r in fixed_points(p) if r.exists_in_E]
    coords = [r.coordinates for r in fps]
    counters = [0] * len(fps)
    mu, beta, gamma = p.mu, p.beta, p.gamma
    x, y, z = s
    for k in range(1, max_iter + 1):
        x, y, z = (
            mu * x * (1.0 - x - y - z),
            beta * y * (x - z),
            gamma * y * z,
        )
        if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
            return Fate(FateKind.ESCAPED, k)
        for idx, (px, py, pz) in enumerate(coords):
            if abs(x - px) < conv_tol and abs(y - py) < conv_tol and abs(z - pz) < conv_tol:
                counters[idx] += 1
                if counters[idx] >= conv_window:
                    return Fate(_CONVERGED_KIND[fps[idx].id])
            else:
                counters[idx] = 0
    return Fate(FateKind.UNDETERMINED)


def _row_codes(plane, u, v, p, max_iter, conv_tol, conv_window, fp_items):
    # Vector twin of classify_fate for one raster row.  Mirrors the scalar
    # arithmetic expression for expression so results agree bitwise.
    n = u.shape[0]
    if plane.axis == "x":
        x = np.full(n, plane.offset)
        y, z = u.copy(), np.full(n, v)
    elif plane.axis == "y":
        x = u.copy()
        y, z = np.full(n, plane.offset), np.full(n, v)
    else:
        x, y = u.copy(), np.full(n, v)
        z = np.full(n, plane.offset)

    codes = np.full(n, CODE_UNDETERMINED, dtype=np.int32)
    active = (x >= 0.0) & (y >= 0.0) & (z >= 0.0) & ((x + y + z) <= 1.0)
    codes[~active] = 0

    mu, beta, gamma = p.mu, p.beta, p.gamma
    counters = np.zeros((len(fp_items), n), dtype=np.int32)
    # Frozen (escaped/outside) lanes still flow through the arithmetic;
    # their values are discarded, so arithmetic warnings are irrelevant.
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_iter + 1):
            if not active.any():
                break
            nx = mu * x * (1.0 - x - y - z)
            ny = beta * y * (x - z)
            nz = gamma * y * z
            x = np.where(active, nx, x)
            y = np.where(active, ny, y)
            z = np.where(active, nz, z)
            in_u = (x >= 0.0) & (y >= 0.0) & (z >= 0.0) & ((x + y + z) <= 1.0)
            escaped_now = active & ~in_u
            codes[escaped_now] = k
            active &= in_u
            for idx, (code, px, py, pz) in enumerate(fp_items):
                near = (
                    (np.abs(x - px) < conv_tol)
                    & (np.abs(y - py) < conv_tol)
                    & (np.abs(z - pz) < conv_tol)
                )
                counters[idx] = np.where(near, counters[idx] + 1, 0)
                done = active & (counters[idx] >= conv_window)
                codes[done] = code
                active &= ~done
    return codes


def raster_slice(
    plane: PlaneSlice,
    bounds: tuple[float, float, float, float],
    resolution: tuple[int, int],
    p: Params,
    max_iter: int = DEFAULT_RASTER_MAX_ITER,
    conv_tol: float = DEFAULT_CONV_TOL,
    conv_window: int = DEFAULT_CONV_WINDOW,
    threads: int = 1,
) -> EscapeRaster:
    """Fate of every cell center of an (nx, ny) grid over the plane cut.

    Cell centers outside the simplex get the escaped-at-0 sentinel.  Rows
    are independent; with ``threads > 1`` they are computed concurrently
    and assembled in order, which cannot change any cell value.
    """
    nx, ny = resolution
    if nx < 1 or ny < 1:
        raise ValueError("resolution must be at least 1x1")
    umin, umax, vmin, vmax = bounds
    u = umin + (np.arange(nx) + 0.5) * (umax - umin) / nx
    vs = [vmin + (j + 0.5) * (vmax - vmin) / ny for j in range(ny)]

    fps = [r for r in fixed_points(p) if r.exists_in_E]
    fp_items = [
        (_FP_CODE[r.id], r.coordinates.x, r.coordinates.y, r.coordinates.z)
        for r in fps
    ]

    def run_row(j):
        return _row_codes(plane, u, vs[j], p, max_iter, conv_tol, conv_window, fp_items)

    if threads > 1 and ny > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_row, range(ny)))
    else:
        rows = [run_row(j) for j in range(ny)]

    return EscapeRaster(
        plane=plane,
        bounds=tuple(bounds),
        resolution=(nx, ny),
        max_iter=max_iter,
        conv_tol=conv_tol,
        conv_window=conv_window,
        codes=np.vstack(rows),
    )
