import math

import numpy as np
import pytest

from logring.dynamics import (IntegratorConfig, StepSizeError, conserved, deviation, drifts,
                              growth_rate, integrate, perturb_along_mode)
from logring.model import BodySet, RingParams, re_configuration
from logring.spectral import mode_factor, mode_factors

EPS = 1e-8


def _ring(n, central):
    return RingParams.central(n, 0.5) if central else RingParams.free(n)


class TestConserved:
    def test_momentum_zero(self):
        q = conserved(re_configuration(RingParams.central(4, 0.5)))
        assert np.abs(q.linear_momentum).max() <= 1e-15

    @pytest.mark.parametrize("n,mu,r", [(4, 0.5, 1.0), (7, 0.2, 2.0)])
    def test_angular_momentum(self, n, mu, r):
        p = RingParams.central(n, mu, r=r)
        assert conserved(re_configuration(p)).angular_momentum == \
            pytest.approx(n * mu * r * r * p.omega, rel=1e-14)

    def test_static_energy(self):
        x = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]])
        m = np.array([1.0, 2.0, 0.5])
        q = conserved(BodySet(m, x, np.zeros_like(x)))
        want = 2 * math.log(3) + 0.5 * math.log(4) + 1.0 * math.log(5)
        assert q.energy == pytest.approx(want, rel=1e-15)


class TestIntegrate:
    def test_hexagon_fidelity(self):
        p = RingParams.central(6, 0.5)
        tr = integrate(re_configuration(p), 10 * p.period)
        assert deviation(tr, p).max() <= 1e-6
        assert tr.times[-1] == pytest.approx(10 * p.period)

    def test_free_pair_circular(self):
        p = RingParams.free(2)
        assert p.omega**2 == pytest.approx(0.5)
        tr = integrate(re_configuration(p), 3 * p.period)
        radii = np.hypot(*tr.positions.transpose(2, 0, 1))
        assert np.abs(radii - 1).max() <= 1e-8

    @pytest.mark.parametrize("n", range(2, 9))
    @pytest.mark.parametrize("central", [True, False])
    def test_period_return(self, n, central):
        p = _ring(n, central)
        s = re_configuration(p)
        f = integrate(s, p.period).final
        assert np.abs(f.positions - s.positions).max() <= 1e-7
        assert np.abs(f.velocities - s.velocities).max() <= 1e-7

    @pytest.mark.parametrize("n", range(2, 9))
    @pytest.mark.parametrize("central", [True, False])
    def test_time_reversal(self, n, central):
        # one period: n = 2 is linearly unstable, so longer horizons amplify round-off
        p = _ring(n, central)
        s = re_configuration(p)
        f = integrate(s, p.period).final
        back = integrate(BodySet(f.masses, f.positions, -f.velocities), p.period).final
        assert np.abs(back.positions - s.positions).max() <= 1e-6

    def test_backward_in_time(self):
        p = RingParams.central(4, 0.5)
        tr = integrate(re_configuration(p), -0.5 * p.period)
        assert deviation(tr, p).max() <= 1e-8

    @pytest.mark.parametrize("n", [2, 5, 8, 12])
    @pytest.mark.parametrize("central", [True, False])
    def test_drift_bounds(self, n, central):
        p = _ring(n, central)
        d = drifts(integrate(re_configuration(p), 10 * p.period))
        assert d["energy_drift"] <= 1e-8
        assert d["angular_momentum_drift"] <= 1e-10
        assert d["linear_momentum_drift"] <= 1e-12

    def test_convergence(self):
        p = RingParams.central(6, 0.5)
        s = re_configuration(p)
        e1 = deviation(integrate(s, 10 * p.period), p).max()
        e2 = deviation(integrate(s, 10 * p.period, IntegratorConfig(rtol=5e-11, atol=5e-13)), p).max()
        assert e2 <= e1 / 2

    def test_collision_flagged(self):
        b = BodySet([1.0, 1.0], [[-1e-3, 0.0], [1e-3, 0.0]], np.zeros((2, 2)))
        tr = integrate(b, 10.0, IntegratorConfig(dmin=1e-6))
        assert tr.collided and 0 < tr.collision_time < 10.0

    def test_step_size_error_type(self):
        err = StepSizeError("underflow", 1.5)
        assert err.time == 1.5 and "1.5" in str(err)

    def test_bad_config(self):
        with pytest.raises(ValueError):
            IntegratorConfig(rtol=0)
        with pytest.raises(ValueError):
            integrate(re_configuration(RingParams.free(3)), 0.0)


class TestPerturbation:
    @pytest.mark.parametrize("central", [True, False])
    def test_zero_mode_is_rotation(self, central):
        p = RingParams.central(5, 0.6) if central else RingParams.free(5)
        s = perturb_along_mode(p, 0, 0.0, EPS)
        ref = re_configuration(p)
        z = s.positions[:5, 0] + 1j * s.positions[:5, 1]
        z0 = ref.positions[:5, 0] + 1j * ref.positions[:5, 1]
        phi = np.angle(z / z0)
        assert np.ptp(phi) <= 1e-15 and abs(phi[0]) == pytest.approx(EPS, rel=1e-6)
        assert np.abs(np.abs(z) - 1).max() <= 1e-15

    @pytest.mark.parametrize("central", [True, False])
    def test_zero_mode_no_drift(self, central):
        p = RingParams.central(5, 0.6) if central else RingParams.free(5)
        cfg = IntegratorConfig(rtol=1e-12, atol=1e-14)
        floor = deviation(integrate(re_configuration(p), 20 * p.period, cfg), p).max()
        tr = integrate(perturb_along_mode(p, 0, 0.0, EPS), 20 * p.period, cfg)
        assert deviation(tr, p).max() <= EPS + 2 * floor

    def test_centre_of_mass_kept(self):
        p = RingParams.central(4, 0.5)
        f = mode_factor(p, 1)
        s = perturb_along_mode(p, 1, f.lambdas[0], EPS)
        ref = re_configuration(p)
        m = s.masses[:, None]
        dx, dv = s.positions - ref.positions, s.velocities - ref.velocities
        assert np.abs((m * dx).sum(0)).max() <= 1e-7 * EPS
        assert np.abs((m * dv).sum(0)).max() <= 1e-7 * EPS
        assert np.abs(dx[4]).max() > 0

    def test_stable_modes_bounded(self):
        p = RingParams.central(5, 0.6)
        for f in mode_factors(p)[1:]:
            for lam in f.lambdas[::2]:
                tr = integrate(perturb_along_mode(p, f.j, lam, EPS), 20 * p.period)
                assert deviation(tr, p).max() <= 10 * EPS
                assert growth_rate(tr, p, EPS) is None


class TestGrowth:
    def test_two_body(self):
        p = RingParams.central(2, 0.5)
        f = mode_factor(p, 1)
        lam = max(f.lambdas, key=lambda z: z.real)
        tr = integrate(perturb_along_mode(p, 1, lam, EPS), 20 / lam.real,
                       IntegratorConfig(sample_dt=0.02))
        g = growth_rate(tr, p, EPS)
        assert g is not None and g.r_squared >= 0.99
        assert g.rate == pytest.approx(lam.real, rel=0.2)

    def test_window_not_found(self):
        p = RingParams.central(5, 0.6)
        tr = integrate(re_configuration(p), 20 * p.period)
        assert growth_rate(tr, p, EPS) is None
