import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trichain.map_core import Params, iterate_streaming
from trichain.spectral import (
    Spectrum,
    detect_halving,
    dft,
    dominant_peak,
    halving_chain,
    peak_near,
)


def naive_dft_magnitudes(xs):
    # Reference transform straight from the defining sum.
    n = len(xs)
    out = []
    for j in range(n):
        acc = 0j
        for k, x in enumerate(xs):
            acc += x * np.exp(-2j * np.pi * j * k / n)
        out.append(abs(acc))
    return out


def tone(index, n=2048, amplitude=1.0):
    k = np.arange(n)
    return dft(amplitude * np.cos(2.0 * np.pi * k * index / n))


class TestDft:
    def test_constant_series(self):
        spec = dft([3.0] * 8)
        assert spec.magnitudes[0] == pytest.approx(24.0, rel=1e-12)
        assert np.all(spec.magnitudes[1:] < 1e-12)

    def test_pure_cosine_bins(self):
        k = np.arange(64)
        spec = dft(np.cos(2.0 * np.pi * k * 5 / 64))
        assert spec.magnitudes[5] == pytest.approx(32.0, rel=1e-9)
        assert spec.magnitudes[59] == pytest.approx(32.0, rel=1e-9)
        others = np.delete(spec.magnitudes, [5, 59])
        assert np.all(others < 1e-9)

    def test_matches_defining_sum(self):
        rng = np.random.default_rng(5)
        xs = rng.normal(size=48)
        spec = dft(xs)
        ref = naive_dft_magnitudes(list(xs))
        for got, want in zip(spec.magnitudes, ref):
            assert got == pytest.approx(want, rel=1e-9, abs=1e-9)

    def test_delta_is_flat(self):
        spec = dft([1.0] + [0.0] * 15)
        assert np.allclose(spec.magnitudes, 1.0, atol=1e-12)

    @settings(max_examples=40)
    @given(st.lists(st.floats(-10, 10), min_size=4, max_size=128))
    def test_parseval_and_conjugate_symmetry(self, xs):
        spec = dft(xs)
        n = spec.n
        energy_time = sum(x * x for x in xs)
        energy_freq = float(np.sum(spec.magnitudes**2)) / n
        assert energy_freq == pytest.approx(energy_time, rel=1e-9, abs=1e-9)
        for j in range(1, n):
            assert spec.magnitudes[j] == pytest.approx(
                spec.magnitudes[n - j], rel=1e-9, abs=1e-9
            )

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            dft([])


class TestDominantPeak:
    def test_pure_cosine_location(self):
        pk = dominant_peak(tone(5, n=64))
        assert pk.index == pytest.approx(5.0, abs=0.01)
        assert pk.magnitude == pytest.approx(32.0, rel=1e-9)

    def test_fractional_frequency_is_interpolated(self):
        pk = dominant_peak(tone(45.75))
        assert pk.index == pytest.approx(45.75, abs=0.3)

    def test_tie_breaks_to_lower_index(self):
        mags = np.zeros(16)
        mags[3] = mags[6] = 7.0
        pk = dominant_peak(Spectrum(16, mags))
        assert 2.5 <= pk.index <= 3.5 and pk.magnitude == 7.0

    def test_dc_exclusion(self):
        xs = np.full(32, 10.0)
        xs += np.cos(2 * np.pi * np.arange(32) * 4 / 32)
        spec = dft(xs)
        assert dominant_peak(spec, exclude_dc=True).index == pytest.approx(4.0, abs=0.01)
        assert dominant_peak(spec, exclude_dc=False).index == 0.0

    def test_rejects_tiny_spectrum(self):
        with pytest.raises(ValueError):
            dominant_peak(Spectrum(2, np.ones(2)))


class TestHalving:
    def test_published_cascade_pattern(self):
        specs = [tone(183.0), tone(91.5), tone(45.75)]
        assert detect_halving(specs, rel_tol=0.05)

    def test_equal_peaks_rejected(self):
        assert not detect_halving([tone(100.0), tone(100.0)])

    def test_two_percent_off_accepted(self):
        assert detect_halving([tone(100.0), tone(51.0)], rel_tol=0.05)

    def test_outside_tolerance_rejected(self):
        assert not detect_halving([tone(100.0), tone(56.0)], rel_tol=0.05)

    def test_needs_two_spectra(self):
        with pytest.raises(ValueError):
            detect_halving([tone(100.0)])

    def test_chain_reports_found_indices(self):
        chain, ok = halving_chain([tone(120.0), tone(60.0), tone(30.0)])
        assert ok
        assert chain[0] == pytest.approx(120.0, abs=0.3)
        assert chain[1] == pytest.approx(60.0, abs=0.3)
        assert chain[2] == pytest.approx(30.0, abs=0.3)

    def test_peak_near_relevance_floor(self):
        spec = tone(100.0)
        assert peak_near(spec, 50.0) is None
        found = peak_near(spec, 99.0)
        assert found is not None and found.index == pytest.approx(100.0, abs=0.3)


class TestAttractorSpectra:
    def test_doubled_curve_carries_harmonic_stack(self):
        # The period-4 curve's spectrum shows peaks near the fundamental,
        # its double, and its quadruple.
        p = Params(2.1, 3.36, 7.18)
        xs = [
            s.x
            for k, s in iterate_streaming((0.2, 0.02, 0.03), p, 30_000 + 2047)
            if k >= 30_000
        ]
        assert len(xs) == 2048
        spec = dft(xs)
        for target in (45.75, 91.5, 183.0):
            pk = peak_near(spec, target)
            assert pk is not None
            assert pk.index == pytest.approx(target, abs=2.0)
