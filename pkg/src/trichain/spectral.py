"""DFT magnitudes of attractor time series and frequency-halving detection.

The transform follows the plain rectangular-window definition

    f_j = sum_k x_k * exp(-2*pi*i*j*k / n),   j = 0..n-1,

computed with a fast transform (same convention).  A cascade of
period-doublings of invariant curves shows up as a new leading peak at
half the previous fundamental in each successive spectrum (the old
harmonics persist and usually stay stronger), which ``detect_halving``
checks as a scale-free ratio test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Spectrum",
    "Peak",
    "dft",
    "dominant_peak",
    "peak_near",
    "halving_chain",
    "detect_halving",
]

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class Spectrum:
    """Magnitudes |f_j| for j = 0..n-1; real input makes them symmetric
    under j -> n-j."""

    n: int
    magnitudes: np.ndarray


class Peak(NamedTuple):
    index: float
    magnitude: float


def dft(series) -> Spectrum:
    """Magnitude spectrum of a real series (rectangular window)."""
    xs = np.asarray(series, dtype=float)
    if xs.ndim != 1 or xs.size < 1:
        raise ValueError("series must be a non-empty 1D sequence")
    return Spectrum(n=int(xs.size), magnitudes=np.abs(np.fft.fft(xs)))


def dominant_peak(spec: Spectrum, exclude_dc: bool = True) -> Peak:
    """Largest magnitude over the low half of the spectrum, with the bin
    index refined to a fractional position by quadratic interpolation of
    the log-magnitudes around the peak.

    Equal magnitudes resolve to the lower index.  The DC bin is skipped by
    default.
    """
    n = spec.n
    if n < 4:
        raise ValueError("peak search needs at least 4 bins")
    mags = spec.magnitudes
    lo = 1 if exclude_dc else 0
    hi = n // 2
    j = lo + int(np.argmax(mags[lo : hi + 1]))
    return Peak(index=_interp_at(mags, j), magnitude=float(mags[j]))


def _interp_at(mags, j: int) -> float:
    lm = float(np.log(max(mags[j - 1], _LOG_FLOOR)))
    l0 = float(np.log(max(mags[j], _LOG_FLOOR)))
    lp = float(np.log(max(mags[j + 1], _LOG_FLOOR)))
    denom = lm - 2.0 * l0 + lp
    if denom == 0.0:
        return float(j)
    delta = 0.5 * (lm - lp) / denom
    return j + min(0.5, max(-0.5, delta))


def peak_near(
    spec: Spectrum,
    target: float,
    rel_tol: float = 0.05,
    relevance: float = 1e-3,
) -> Peak | None:
    """Strongest bin in a window around ``target``, provided it stands out
    from the spectrum (magnitude at least ``relevance`` times the overall
    non-DC maximum); ``None`` when nothing relevant lives there.
    """
    n = spec.n
    mags = spec.magnitudes
    half = max(2.0, 3.0 * rel_tol * target)
    lo = max(1, int(np.floor(target - half)))
    hi = min(n // 2, int(np.ceil(target + half)))
    if lo > hi:
        return None
    j = lo + int(np.argmax(mags[lo : hi + 1]))
    if mags[j] < relevance * float(np.max(mags[1 : n // 2 + 1])):
        return None
    return Peak(index=_interp_at(mags, j), magnitude=float(mags[j]))


def halving_chain(
    spectra, rel_tol: float = 0.05, relevance: float = 1e-3
) -> tuple[list, bool]:
    """Follow the cascade of subharmonics across an ordered spectrum list.

    The chain starts at the first spectrum's dominant peak; in each later
    spectrum it looks for a relevant peak at half the previously found
    index.  A period-doubled curve keeps its old harmonics (often still
    the strongest bins), so the cascade is read off the newly appearing
    half-frequency component rather than the global argmax.

    Returns the per-spectrum peak indices (``None`` where no relevant peak
    sits at the halved position) and whether the whole chain halved within
    ``rel_tol`` relative.
    """
    specs = list(spectra)
    if len(specs) < 2:
        raise ValueError("need at least two spectra")
    first = dominant_peak(specs[0])
    found: list = [first.index]
    ok = True
    prev = first.index
    for s in specs[1:]:
        target = prev / 2.0
        pk = peak_near(s, target, rel_tol, relevance)
        if pk is None or abs(pk.index - target) > rel_tol * target:
            found.append(None if pk is None else pk.index)
            ok = False
            prev = target
            continue
        found.append(pk.index)
        prev = pk.index
    return found, ok


def detect_halving(spectra, rel_tol: float = 0.05) -> bool:
    """True iff each successive spectrum carries its leading peak at half
    the previous one's index, within ``rel_tol`` relative."""
    return halving_chain(spectra, rel_tol)[1]
