import math

import numpy as np
import pytest

from trichain.equilibria import FixedPointId, eigenvalues_closed, fixed_point_coordinates
from trichain.lyapunov import lyapunov_spectrum, max_lyapunov
from trichain.map_core import Params, jacobian, step

S0 = (0.1, 0.02, 0.03)


def numpy_qr_spectrum(s0, p, transient, steps):
    # Independent reference: dense numpy QR factorization each step.
    s = s0
    for _ in range(transient):
        s = step(s, p)
    q = np.eye(3)
    acc = np.zeros(3)
    for _ in range(steps):
        j = np.array(jacobian(s, p)).reshape(3, 3)
        q, r = np.linalg.qr(j @ q)
        d = np.abs(np.diag(r))
        # qr may flip column signs; magnitudes are what matters
        acc += np.log(d)
        s = step(s, p)
    return np.sort(acc / steps)[::-1]


class TestAtFixedPoints:
    def test_origin_spectrum_is_log_mu_and_sentinels(self):
        # After the transient the orbit underflows to the exact origin,
        # where two tangent directions are annihilated outright.
        p = Params(0.7, 2.5, 5.0)
        r = lyapunov_spectrum((0.3, 0.2, 0.05), p, transient=5000, steps=500)
        assert not r.escaped
        l1, l2, l3 = r.exponents
        assert l1 == pytest.approx(math.log(0.7), abs=1e-12)
        assert l2 == -math.inf and l3 == -math.inf

    def test_seeded_at_prey_predator_point_matches_eigenvalues(self):
        # Zone C: seed exactly at the planar equilibrium; the exponents are
        # the logs of its eigenvalue moduli.
        p = Params(1.55, 3.0, 6.0)
        s = fixed_point_coordinates(FixedPointId.P3, p)
        r = lyapunov_spectrum(s, p, transient=0, steps=60000)
        expected = sorted(
            (math.log(abs(l)) for l in eigenvalues_closed(FixedPointId.P3, p)),
            reverse=True,
        )
        for got, want in zip(r.exponents, expected):
            assert got == pytest.approx(want, abs=1e-4)


class TestRegimes:
    def test_stable_coexistence_is_contracting(self):
        r = lyapunov_spectrum(S0, Params(2.1, 3.36, 5.2), transient=20000, steps=20000)
        assert r.exponents[0] < 0.0

    def test_invariant_curve_has_zero_max_exponent(self):
        lam = max_lyapunov(S0, Params(2.1, 3.36, 6.8), transient=30000, steps=50000)
        assert abs(lam) < 1e-2

    def test_chaotic_regime_is_expanding(self):
        lam = max_lyapunov(S0, Params(2.1, 3.36, 9.14), transient=30000, steps=50000)
        assert lam > 0.01


class TestContracts:
    def test_matches_independent_qr_reference(self):
        # Same orbit, same frame, dense numpy QR instead of hand-rolled
        # Gram-Schmidt: finite-time exponents must agree closely.
        for p in (Params(2.1, 3.36, 9.14), Params(2.1, 3.36, 5.4), Params(2.1, 3.89, 6.5)):
            ours = lyapunov_spectrum(S0, p, transient=2000, steps=5000)
            ref = numpy_qr_spectrum(S0, p, transient=2000, steps=5000)
            for got, want in zip(ours.exponents, ref):
                assert got == pytest.approx(want, abs=1e-7)

    def test_trace_identity(self):
        for p in (Params(2.1, 3.36, 9.14), Params(2.1, 3.36, 5.4), Params(2.1, 3.89, 6.5)):
            r = lyapunov_spectrum(S0, p, transient=2000, steps=4000)
            assert sum(r.exponents) == pytest.approx(r.mean_log_abs_det, abs=1e-6)

    def test_escaped_orbit_flagged(self):
        r = lyapunov_spectrum((0.25, 0.39, 0.0), Params(3.0, 4.5, 7.5), 1000, 1000)
        assert r.escaped and r.exponents is None
        assert math.isnan(max_lyapunov((0.25, 0.39, 0.0), Params(3.0, 4.5, 7.5), 1000, 1000))

    def test_bit_reproducible(self):
        a = lyapunov_spectrum(S0, Params(2.1, 3.36, 7.3), 3000, 3000)
        b = lyapunov_spectrum(S0, Params(2.1, 3.36, 7.3), 3000, 3000)
        assert a.exponents == b.exponents
        assert a.mean_log_abs_det == b.mean_log_abs_det

    def test_frame_invariance(self):
        # The starting frame aligns with the leading tangent directions
        # within a bounded number of steps, leaving an O(1/steps) imprint
        # on the finite-time exponents; the tolerance reflects that.
        p = Params(2.1, 3.36, 9.14)
        steps = 20000
        base = lyapunov_spectrum(S0, p, 5000, steps)
        c, s = math.cos(0.7), math.sin(0.7)
        rotated = ((c, s, 0.0), (-s, c, 0.0), (0.0, 0.0, 1.0))
        other = lyapunov_spectrum(S0, p, 5000, steps, initial_frame=rotated)
        for x, y in zip(base.exponents, other.exponents):
            assert x == pytest.approx(y, abs=20.0 / steps)

    def test_rejects_zero_steps(self):
        with pytest.raises(ValueError):
            lyapunov_spectrum(S0, Params(2.1, 3.36, 7.3), 10, 0)

    def test_exponents_sorted_descending(self):
        r = lyapunov_spectrum(S0, Params(2.1, 3.36, 7.3), 5000, 10000)
        assert list(r.exponents) == sorted(r.exponents, reverse=True)
