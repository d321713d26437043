"""Parameter sweeps along straight paths through the cuboid.

Every sampled parameter point restarts from the same initial condition
(the protocol behind the published diagrams), iterates a transient, and
then records attractor samples, the fixed-point reports, the zone label
and a Lyapunov spectrum measured from the post-transient state.  An
attractor-following mode that continues from the previous sample's final
state is available behind a flag but off by default.

Also here: the smoothed local-maxima extraction used for the
period-doubling diagrams, the level clustering rule, and the locator of
the gamma value where the coexistence point sheds an invariant curve (the
discrete Hopf onset).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .equilibria import (
    FixedPointReport,
    NoCrossingError,
    ZoneId,
    _p4_pair_modulus,
    fixed_points,
    zone,
)
from .lyapunov import LyapunovResult, lyapunov_spectrum
from .map_core import Params, State

__all__ = [
    "PathSpec",
    "SweepRecord",
    "sweep",
    "local_maxima",
    "maxima_levels",
    "neimark_sacker_gamma",
]

DEFAULT_SWEEP_TRANSIENT = 30_000
# 2^11 samples so a spectrum of the kept series covers the full window.
DEFAULT_SWEEP_KEEP = 2048
DEFAULT_SWEEP_LYAP_STEPS = 10_000
DEFAULT_SMOOTH_WINDOW = 3


@dataclass(frozen=True)
class PathSpec:
    """Straight parameter path, sampled affinely with both endpoints."""

    start: Params
    end: Params
    samples: int

    def __post_init__(self) -> None:
        if self.samples < 2:
            raise ValueError("a path needs at least 2 samples")

    def params_at(self, i: int) -> Params:
        t = i / (self.samples - 1)
        return Params(
            self.start.mu + t * (self.end.mu - self.start.mu),
            self.start.beta + t * (self.end.beta - self.start.beta),
            self.start.gamma + t * (self.end.gamma - self.start.gamma),
        )

    def points(self) -> list[Params]:
        return [self.params_at(i) for i in range(self.samples)]


@dataclass(frozen=True)
class SweepRecord:
    """One sampled parameter point; ``attractor_samples`` is empty exactly
    when the orbit escaped."""

    params: Params
    t: float
    attractor_samples: tuple
    fixed_points: list[FixedPointReport]
    lyapunov: LyapunovResult | None
    zone: ZoneId
    escaped: bool


def _record_at(p, t, s_start, transient, keep, lyap_steps, zone_tol):
    mu, beta, gamma = p.mu, p.beta, p.gamma
    x, y, z = s_start
    escaped = not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0)
    if not escaped:
        for _ in range(transient):
            x, y, z = (
                mu * x * (1.0 - x - y - z),
                beta * y * (x - z),
                gamma * y * z,
            )
            if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
                escaped = True
                break
    samples = []
    if not escaped:
        samples.append(State(x, y, z))
        for _ in range(keep - 1):
            x, y, z = (
                mu * x * (1.0 - x - y - z),
                beta * y * (x - z),
                gamma * y * z,
            )
            if not (x >= 0.0 and y >= 0.0 and z >= 0.0 and (x + y + z) <= 1.0):
                escaped = True
                samples = []
                break
            samples.append(State(x, y, z))
    lyap = None
    if not escaped and lyap_steps > 0:
        lyap = lyapunov_spectrum(samples[0], p, transient=0, steps=lyap_steps)
    return SweepRecord(
        params=p,
        t=t,
        attractor_samples=tuple(samples),
        fixed_points=fixed_points(p),
        lyapunov=lyap,
        zone=zone(p, zone_tol),
        escaped=escaped,
    ), State(x, y, z)


def sweep(
    path: PathSpec,
    s0,
    transient: int = DEFAULT_SWEEP_TRANSIENT,
    keep: int = DEFAULT_SWEEP_KEEP,
    lyap_steps: int = DEFAULT_SWEEP_LYAP_STEPS,
    zone_tol: float = 1e-9,
    continue_state: bool = False,
    threads: int = 1,
) -> list[SweepRecord]:
    """One record per sampled parameter on the path.

    With ``continue_state`` the initial condition of each sample is the
    final state of the previous one (attractor following); the default
    reuses ``s0`` everywhere.  Records are independent in the default
    mode, so threading cannot change their content.
    """
    if keep < 1:
        raise ValueError("keep must be >= 1")
    pts = path.points()
    ts = [i / (path.samples - 1) for i in range(path.samples)]

    if continue_state:
        records = []
        s = State(*s0)
        for p, t in zip(pts, ts):
            rec, s_end = _record_at(p, t, s, transient, keep, lyap_steps, zone_tol)
            records.append(rec)
            if not rec.escaped:
                s = s_end
        return records

    def run(i):
        return _record_at(pts[i], ts[i], s0, transient, keep, lyap_steps, zone_tol)[0]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, range(path.samples)))
    return [run(i) for i in range(path.samples)]


def local_maxima(series, smooth_window: int = DEFAULT_SMOOTH_WINDOW) -> list[float]:
    """Values of the strict interior maxima of the running-average
    smoothed series (window 1 disables smoothing).

    The window must be odd so the average stays centered; the smoothed
    series is shorter by window-1 points.
    """
    if smooth_window < 1 or smooth_window % 2 == 0:
        raise ValueError("smooth_window must be an odd positive integer")
    xs = list(series)
    if len(xs) < 3:
        raise ValueError("series must have at least 3 points")
    if smooth_window == 1:
        sm = xs
    else:
        inv = 1.0 / smooth_window
        sm = []
        for i in range(len(xs) - smooth_window + 1):
            acc = 0.0
            for j in range(smooth_window):
                acc += xs[i + j]
            sm.append(acc * inv)
    return [sm[k] for k in range(1, len(sm) - 1) if sm[k - 1] < sm[k] > sm[k + 1]]


def _median_lag_diff(values, q: int) -> float:
    diffs = sorted(abs(values[i + q] - values[i]) for i in range(len(values) - q))
    return diffs[len(diffs) // 2]


def maxima_levels(maxima, max_levels: int = 32) -> tuple[int, list[tuple[float, int]]]:
    """Count the cyclic levels of a maxima sequence and summarize them.

    On a period-q invariant curve the series maxima cycle through q bands,
    so the median of |m[i+q] - m[i]| collapses at the true q while staying
    large at any smaller lag.  Starting from q = 1 the count doubles while
    doubling keeps shrinking that statistic by at least half.  This is
    deliberately a time-structure rule: successive doublings can leave
    neighbouring bands overlapping in value, where any sorted-gap split
    would undercount.

    Returns (level count, [(level mean, members), ...]) with levels sorted
    ascending by mean.
    """
    m = list(maxima)
    if not m:
        return 0, []
    q = 1
    while 2 * q <= max_levels and len(m) >= 4 * q:
        if _median_lag_diff(m, 2 * q) < 0.5 * _median_lag_diff(m, q):
            q *= 2
        else:
            break
    levels = []
    for r in range(q):
        members = m[r::q]
        levels.append((sum(members) / len(members), len(members)))
    return q, sorted(levels)


_NS_SCAN = 400


def neimark_sacker_gamma(
    mu: float,
    beta: float,
    tol: float = 1e-9,
    gamma_lo: float = 5.0,
    gamma_hi: float = 9.4,
) -> float:
    """Gamma at which the coexistence point's complex pair first crosses
    the unit circle along [gamma_lo, gamma_hi] (the stable-to-curve
    boundary along a gamma path), by scan plus bisection.

    Raises :class:`NoCrossingError` when the modulus stays on one side of
    1 over the whole range where the point exists.
    """
    margin = 1.0 - 1.0 / mu - 1.0 / beta
    if margin <= 0.0:
        raise NoCrossingError(
            "the coexistence point does not exist anywhere on the gamma range"
        )
    lo = max(gamma_lo, 1.0 / margin)
    if lo > gamma_hi:
        raise NoCrossingError(
            "the coexistence point does not exist anywhere on the gamma range"
        )

    def g(gamma: float) -> float:
        return _p4_pair_modulus(mu, beta, gamma) - 1.0

    xs = [lo + (gamma_hi - lo) * k / _NS_SCAN for k in range(_NS_SCAN + 1)]
    g_prev = g(xs[0])
    if g_prev == 0.0:
        return xs[0]
    for k in range(1, _NS_SCAN + 1):
        g_cur = g(xs[k])
        if g_cur == 0.0:
            return xs[k]
        if (g_cur < 0.0) != (g_prev < 0.0):
            a, fa = xs[k - 1], g_prev
            b = xs[k]
            while b - a > tol:
                mid = 0.5 * (a + b)
                fm = g(mid)
                if fm == 0.0:
                    return mid
                if (fm < 0.0) == (fa < 0.0):
                    a, fa = mid, fm
                else:
                    b = mid
            return 0.5 * (a + b)
        g_prev = g_cur
    raise NoCrossingError(
        f"no unit-modulus crossing along gamma for mu={mu}, beta={beta}"
    )
