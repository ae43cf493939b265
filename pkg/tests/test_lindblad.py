import numpy as np
import pytest

from dicke_critic import baths
from dicke_critic.baths import Dephasing, Generalized, Thermal
from dicke_critic.errors import DegenerateSteadyStateError, PreconditionError
from dicke_critic.lindblad import SpinModel, propagate, steady_state, two_time_sx


def model_for(bath, omega_z=1.0):
    return baths.spin_model(bath, omega_z)


def closed_form_sx(ts, gamma, omega_z, sz):
    return 0.25 * np.exp(-gamma * ts) * (np.cos(omega_z * ts) - 2j * sz * np.sin(omega_z * ts))


class TestSteadyState:
    def test_thermal_polarization(self):
        for temp in (0.2, 0.5, 1.0, 3.0):
            ss = steady_state(model_for(Thermal(gamma=0.1, temperature=temp)))
            assert ss.null_dim == 1
            assert ss.sz == pytest.approx(-0.5 * np.tanh(1.0 / (2 * temp)), abs=1e-12)

    def test_generalized_polarization(self):
        for t in (0.0, 0.3, 0.7, 1.0):
            ss = steady_state(model_for(Generalized(gamma=0.2, t=t)))
            assert ss.sz == pytest.approx(-0.5 * (1 - t**2) / (1 + t**2), abs=1e-12)

    def test_generalized_t1_unpolarized(self):
        assert steady_state(model_for(Generalized(gamma=0.2, t=1.0))).sz == pytest.approx(0.0, abs=1e-12)

    def test_dephasing_is_degenerate(self):
        ss = steady_state(model_for(Dephasing(gamma=0.3, sz=-0.4)))
        assert ss.null_dim == 2
        assert ss.degenerate
        assert ss.sz == pytest.approx(-0.4, abs=1e-15)

    def test_degenerate_without_designation_raises(self):
        model = SpinModel(omega_z=1.0, channels=baths.channels_of(Dephasing(0.3, -0.4), 1.0))
        with pytest.raises(DegenerateSteadyStateError):
            steady_state(model)


class TestPropagate:
    def test_zero_time_identity(self, rng):
        model = model_for(Thermal(gamma=0.2, temperature=0.4))
        rho0 = np.diag([0.7, 0.3]).astype(complex)
        assert np.allclose(propagate(model, rho0, 0.0), rho0, atol=1e-14)

    def test_negative_time_rejected(self):
        model = model_for(Thermal(gamma=0.2, temperature=0.4))
        with pytest.raises(PreconditionError):
            propagate(model, np.eye(2, dtype=complex) / 2, -1.0)

    def test_dephasing_coherence_phase(self):
        gphi, wz, t = 0.3, 1.2, 2.5
        model = model_for(Dephasing(gamma=gphi, sz=0.0), omega_z=wz)
        rho0 = np.array([[0.5, 0.2 + 0.1j], [0.2 - 0.1j, 0.5]], dtype=complex)
        rho_t = propagate(model, rho0, t)
        expected01 = (0.2 + 0.1j) * np.exp((-gphi - 1j * wz) * t)
        assert abs(rho_t[0, 1] - expected01) < 1e-12
        assert abs(np.trace(rho_t) - 1.0) < 1e-12

    def test_long_time_reaches_steady_state(self):
        model = model_for(Thermal(gamma=0.2, temperature=0.5))
        rho0 = np.array([[1.0, 0], [0, 0]], dtype=complex)
        rho_inf = propagate(model, rho0, 50.0 / 0.2)
        assert np.max(np.abs(rho_inf - steady_state(model).rho)) < 1e-10


class TestTwoTimeCorrelator:
    def test_starts_at_one_quarter(self):
        model = model_for(Thermal(gamma=0.1, temperature=0.5))
        series = two_time_sx(model, steady_state(model).rho)
        assert series.values[0] == pytest.approx(0.25, abs=1e-12)

    def test_dephasing_closed_form_grid(self):
        # regression theorem vs analytic solution over a parameter grid
        for gphi in (0.1, 0.35, 0.6):
            for wz in (0.5, 1.0, 2.0):
                model = model_for(Dephasing(gamma=gphi, sz=-0.5), omega_z=wz)
                series = two_time_sx(model, steady_state(model).rho)
                expected = closed_form_sx(series.times, gphi, wz, -0.5)
                assert np.max(np.abs(series.values - expected)) < 1e-10

    def test_undamped_unpolarized_is_pure_cosine(self):
        model = model_for(Dephasing(gamma=0.0, sz=0.0), omega_z=1.0)
        series = two_time_sx(model, steady_state(model).rho)
        assert series.tail_only
        assert series.tail.decay_rate == 0.0
        ts = np.linspace(0, 20, 101)
        vals = series.tail.value(ts)
        assert np.max(np.abs(vals - 0.25 * np.cos(ts))) < 1e-12
        assert np.max(np.abs(np.imag(vals))) < 1e-15

    def test_thermal_envelope_rate(self):
        gamma_t, temp = 0.1, 0.5
        model = model_for(Thermal(gamma=gamma_t, temperature=temp))
        series = two_time_sx(model, steady_state(model).rho)
        n = baths.bose_occupation(1.0, temp)
        assert series.tail.decay_rate == pytest.approx((1 + 2 * n) * gamma_t, rel=1e-10)
        assert series.tail.frequency == pytest.approx(1.0, rel=1e-10)

    def test_generalized_coherence_modes(self):
        # the two transverse components decay at gamma(1-t)^2 and gamma(1+t)^2,
        # so the correlator oscillates at a shifted frequency and its envelope
        # decays at their mean gamma(1+t^2)
        gamma, t, wz = 0.2, 0.4, 1.0
        model = model_for(Generalized(gamma=gamma, t=t), omega_z=wz)
        series = two_time_sx(model, steady_state(model).rho)
        assert series.tail.decay_rate == pytest.approx(gamma * (1 + t**2), rel=1e-12)
        assert series.tail.frequency == pytest.approx(
            np.sqrt(wz**2 - 4 * t**2 * gamma**2), rel=1e-12
        )

    def test_orderings_are_conjugate(self):
        model = model_for(Generalized(gamma=0.2, t=0.4))
        rho = steady_state(model).rho
        right = two_time_sx(model, rho)
        left = two_time_sx(model, rho, ordering="left", tmax=right.times[-1], dt=right.dt)
        assert np.max(np.abs(left.values - np.conj(right.values))) < 1e-13

    def test_norm_bound_and_peak_envelope(self):
        model = model_for(Dephasing(gamma=0.15, sz=-0.3))
        series = two_time_sx(model, steady_state(model).rho)
        mags = np.abs(series.values)
        assert np.max(mags) <= 0.25 + 1e-12
        # peak amplitude per oscillation period is non-increasing
        per = int(round(2 * np.pi / series.dt))
        peaks = [mags[i: i + per].max() for i in range(0, mags.size - per, per)]
        assert all(a >= b - 1e-12 for a, b in zip(peaks, peaks[1:]))

    def test_dt_precondition(self):
        model = model_for(Dephasing(gamma=0.3, sz=-0.5))
        rho = steady_state(model).rho
        with pytest.raises(PreconditionError):
            two_time_sx(model, rho, dt=0.5)  # > 0.1 * min(1/wz, 1/gamma)

    def test_tmax_precondition(self):
        model = model_for(Dephasing(gamma=0.3, sz=-0.5))
        rho = steady_state(model).rho
        with pytest.raises(PreconditionError):
            two_time_sx(model, rho, tmax=12.0 / 0.3)  # envelope ~ 6e-6 > 1e-10
