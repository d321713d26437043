"""Full Lyapunov spectrum along orbits via tangent-space propagation.

An orthonormal tangent frame is pushed forward by the Jacobian at every
iterate and re-orthonormalized with modified Gram-Schmidt each step; the
accumulated logs of the column norms divided by the step count give the
three exponents.  Re-orthonormalizing every step (rather than every m)
matters here because the Jacobian determinant collapses quickly near the
simplex walls.

Directions whose norm underflows (orbits on the y=0 wall annihilate two
tangent directions exactly) are reported as the -inf sentinel and the
frame column is replaced by a fresh unit vector so the remaining
exponents stay meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .map_core import Params

__all__ = ["LyapunovResult", "lyapunov_spectrum", "max_lyapunov"]

DEFAULT_TRANSIENT = 30_000
DEFAULT_STEPS = 100_000

_NORM_FLOOR = 1e-300
_IDENTITY_FRAME = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


@dataclass(frozen=True)
class LyapunovResult:
    """Exponents sorted descending (per-iterate natural-log rates), or
    ``None`` with ``escaped=True`` if the orbit left the simplex.

    ``mean_log_abs_det`` averages log|det J| over the same measurement
    window; in exact arithmetic it equals the exponent sum.
    """

    exponents: tuple | None
    steps_used: int
    transient_skipped: int
    escaped: bool
    mean_log_abs_det: float | None

    @property
    def max_exponent(self) -> float:
        if self.exponents is None:
            return math.nan
        return self.exponents[0]


def _replacement_direction(v1, v2, which):
    # Deterministic fresh unit vector orthogonal to the two other frame
    # columns; tried in fixed axis order so reruns are identical.
    for ex, ey, ez in _IDENTITY_FRAME:
        cx, cy, cz = ex, ey, ez
        for (ox, oy, oz) in (v1, v2):
            d = cx * ox + cy * oy + cz * oz
            cx, cy, cz = cx - d * ox, cy - d * oy, cz - d * oz
        nrm = math.sqrt(cx * cx + cy * cy + cz * cz)
        if nrm > 0.5:
            return (cx / nrm, cy / nrm, cz / nrm)
    return _IDENTITY_FRAME[which]


def lyapunov_spectrum(
    s0,
    p: Params,
    transient: int = DEFAULT_TRANSIENT,
    steps: int = DEFAULT_STEPS,
    initial_frame=None,
) -> LyapunovResult:
    """Three-exponent spectrum of the orbit started at ``s0``.

    The orbit is first iterated ``transient`` steps; escape at any point
    (during the transient or the measurement) aborts with an escaped
    result and no exponents.  ``initial_frame`` may supply a different
    orthonormal starting frame (three column vectors); converged results
    do not depend on it beyond roundoff.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    mu, beta, gamma = p.mu, p.beta, p.gamma
    x, y, z = s0
    if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
        return LyapunovResult(None, 0, 0, True, None)
    for k in range(transient):
        x, y, z = (
            mu * x * (1.0 - x - y - z),
            beta * y * (x - z),
            gamma * y * z,
        )
        if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
            return LyapunovResult(None, 0, k + 1, True, None)

    frame = list(initial_frame) if initial_frame is not None else list(_IDENTITY_FRAME)
    acc = [0.0, 0.0, 0.0]
    dead = [False, False, False]
    det_acc = 0.0
    det_hit_zero = False

    for n in range(steps):
        # Jacobian at the current state; the two entries of the first row
        # after the diagonal coincide, and the bottom-left entry is zero.
        j00 = mu * (1.0 - 2.0 * x - y - z)
        j01 = -mu * x
        j10 = beta * y
        j11 = beta * (x - z)
        j12 = -beta * y
        j21 = gamma * z
        j22 = gamma * y

        det = j00 * (j11 * j22 - j12 * j21) - j01 * (j10 * j22) + j01 * (j10 * j21)
        a = abs(det)
        if a == 0.0:
            det_hit_zero = True
        else:
            det_acc += math.log(a)

        new_frame = []
        for i in range(3):
            vx, vy, vz = frame[i]
            wx = j00 * vx + j01 * vy + j01 * vz
            wy = j10 * vx + j11 * vy + j12 * vz
            wz = j21 * vy + j22 * vz
            for (ox, oy, oz) in new_frame:
                d = wx * ox + wy * oy + wz * oz
                wx, wy, wz = wx - d * ox, wy - d * oy, wz - d * oz
            nrm = math.sqrt(wx * wx + wy * wy + wz * wz)
            if nrm < _NORM_FLOOR:
                dead[i] = True
                if len(new_frame) == 2:
                    repl = _replacement_direction(new_frame[0], new_frame[1], i)
                elif len(new_frame) == 1:
                    repl = _replacement_direction(new_frame[0], (0.0, 0.0, 0.0), i)
                else:
                    repl = _IDENTITY_FRAME[i]
                new_frame.append(repl)
            else:
                if not dead[i]:
                    acc[i] += math.log(nrm)
                new_frame.append((wx / nrm, wy / nrm, wz / nrm))
        frame = new_frame

        x, y, z = (
            mu * x * (1.0 - x - y - z),
            beta * y * (x - z),
            gamma * y * z,
        )
        if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
            return LyapunovResult(None, n + 1, transient, True, None)

    exps = tuple(
        sorted(
            (-math.inf if dead[i] else acc[i] / steps for i in range(3)),
            reverse=True,
        )
    )
    mean_det = -math.inf if det_hit_zero else det_acc / steps
    return LyapunovResult(exps, steps, transient, False, mean_det)


def max_lyapunov(
    s0,
    p: Params,
    transient: int = DEFAULT_TRANSIENT,
    steps: int = DEFAULT_STEPS,
) -> float:
    """Largest exponent; NaN if the orbit escapes."""
    return lyapunov_spectrum(s0, p, transient, steps).max_exponent
