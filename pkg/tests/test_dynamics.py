import numpy as np
import pytest

from photon_pistol import AccuracyError, AtomicState, DomainError, Geometry, emission
from photon_pistol.dynamics import PulseSchedule, convergence_study, integrate

from conftest import PSI_SPECIAL


class TestPulseSchedule:
    @pytest.mark.parametrize("shape", ["sine", "smoothstep"])
    def test_endpoints(self, shape):
        p = PulseSchedule(2.0, 3.0, 10.0, shape=shape)
        assert p.rabi(0.0) == (0.0, 3.0)
        assert p.rabi(10.0) == (2.0, 0.0)

    def test_counterintuitive_order(self):
        p = PulseSchedule(1.0, 1.0, 1.0)
        ts = np.linspace(0, 1, 11)
        a, b = np.array([p.rabi(t) for t in ts]).T
        assert np.all(np.diff(a) > 0) and np.all(np.diff(b) < 0)

    @pytest.mark.parametrize(
        "kwargs",
        [dict(omega_a0=-1), dict(omega_b0=0), dict(duration=0), dict(shape="gauss")],
    )
    def test_rejects(self, kwargs):
        base = dict(omega_a0=1.0, omega_b0=1.0, duration=1.0)
        with pytest.raises(DomainError):
            PulseSchedule(**{**base, **kwargs})

    def test_scaled(self):
        p = PulseSchedule(1.0, 2.0, 3.0, detuning=0.1, shape="smoothstep").scaled(4)
        assert (p.duration, p.omega_b0, p.detuning, p.shape) == (12.0, 2.0, 0.1, "smoothstep")


def test_drive_off_leaves_state_untouched(s323, rng):
    init = AtomicState.equilibrium(s323)
    res = integrate(s323, Geometry.from_psi(0.4), init, PulseSchedule(0.0, 1.0, 50.0), steps=2000)
    assert res.w_num == 0.0
    assert res.P_num is None
    assert np.array_equal(res.rho_final[:7, :7], init.rho_a)


def test_unit_emission_211(s211):
    res = integrate(s211, Geometry.from_psi(0.0), AtomicState.pure(s211, 0), PulseSchedule(1.0, 1.0, 200.0))
    assert abs(res.w_num - 1.0) <= 0.02


def test_detuning_independence(s211):
    geo = Geometry.from_psi(np.pi / 3)
    init = AtomicState.pure(s211, 0)
    T = 200.0
    w = [integrate(s211, geo, init, PulseSchedule(1.0, 1.0, T, detuning=x / T)).w_num for x in (0.0, 5.0, 20.0)]
    assert max(w) - min(w) < 0.02


def test_conservation_and_purity(s323):
    res = integrate(s323, Geometry.from_psi(PSI_SPECIAL), AtomicState.pure(s323, 1), PulseSchedule(1.0, 1.0, 100.0))
    assert res.max_trace_drift < 1e-8
    assert res.max_hermiticity_error < 1e-8
    rho = res.rho_final
    assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-6)


def test_too_few_steps_detected(s323):
    with pytest.raises(AccuracyError):
        integrate(s323, Geometry.from_psi(0.3), AtomicState.equilibrium(s323), PulseSchedule(50.0, 50.0, 200.0), steps=200)


def test_rejects_bad_inputs(s323, s211):
    with pytest.raises(DomainError):
        integrate(s323, Geometry.from_psi(0), AtomicState.equilibrium(s211), PulseSchedule(1, 1, 1))
    with pytest.raises(DomainError):
        integrate(s323, Geometry.from_psi(0), AtomicState.equilibrium(s323), PulseSchedule(1, 1, 1), steps=0)


def test_convergence_study(s323):
    geo = Geometry.from_psi(np.pi / 4)
    init = AtomicState.equilibrium(s323)
    rows = convergence_study(s323, geo, init, PulseSchedule(1.0, 1.0, 100.0), [1, 2, 4], base_steps=5000)
    assert [r.omega_T for r in rows] == [100.0, 200.0, 400.0]
    assert rows[-1].deviation <= rows[0].deviation
    assert rows[-1].leakage <= rows[0].leakage
    assert rows[-1].deviation < 0.02


def test_convergence_rejects_bad_factors(s211):
    geo = Geometry.from_psi(0)
    with pytest.raises(DomainError):
        convergence_study(s211, geo, AtomicState.pure(s211, 0), PulseSchedule(1, 1, 1), [2, 1])


@pytest.mark.slow
@pytest.mark.parametrize(
    "initial, psi",
    [("equilibrium", np.pi / 2), ("pure", np.pi / 2), ("pure", PSI_SPECIAL)],
)
def test_polarization_matches_adiabatic_limit(s323, initial, psi):
    # well inside the adiabatic regime the integrated photon matrix reproduces the closed form
    init = AtomicState.equilibrium(s323) if initial == "equilibrium" else AtomicState.pure(s323, 0)
    geo = Geometry.from_psi(psi)
    closed = emission(s323, geo, init)
    res = integrate(s323, geo, init, PulseSchedule(1.0, 1.0, 800.0, shape="smoothstep"), steps=40_000)
    assert abs(res.w_num - closed.w) < 2e-3
    assert abs(res.P_num - closed.P) < 5e-3
    assert res.leakage < 1e-3


def test_default_step_count_resolves_dynamics(s323):
    # halving the step at the default resolution moves w_num by less than 1e-6
    geo = Geometry.from_psi(np.pi / 4)
    init = AtomicState.equilibrium(s323)
    sched = PulseSchedule(1.0, 1.0, 200.0)
    coarse = integrate(s323, geo, init, sched).w_num
    fine = integrate(s323, geo, init, sched, steps=20_000).w_num
    assert abs(coarse - fine) < 1e-6
