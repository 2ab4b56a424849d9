import math

import numpy as np
import pytest

from rydsim.core import StateVector, drive_2level, lr_decompose
from rydsim.dynamics import (
    IntegratorConfig,
    NoiseSpec,
    evolve_lindblad,
    evolve_schrodinger,
    lindblad_operators,
)
from rydsim.errors import InvalidParameterError
from rydsim.metrics import fidelity_mixed, fidelity_pure
from rydsim.pulses import LRPulseParams, lr_pulse


def two_level_hamiltonian(params):
    """Driven (|0>, |r>) block of the shortcut pulse as a 9-dim single-atom
    stand-in: a 3-level atom with the |1> level untouched."""

    def h(t):
        block = drive_2level(lr_pulse(t, params))
        full = np.zeros((3, 3), dtype=complex)
        full[0, 0] = block[0, 0]
        full[0, 2] = block[0, 1]
        full[2, 0] = block[1, 0]
        full[2, 2] = block[1, 1]
        return full

    return h


class TestSchrodinger:
    def test_zero_hamiltonian_is_identity(self):
        psi0 = StateVector(1, np.array([0.6, 0.8j, 0.0]))
        out = evolve_schrodinger(
            psi0, lambda t: np.zeros((3, 3), dtype=complex), (0.0, 2.0)
        )
        assert np.allclose(out.state.amplitudes, psi0.amplitudes, atol=1e-12)

    @pytest.mark.parametrize("method", ["magnus4", "rk4", "adaptive"])
    def test_resonant_half_rabi_cycle(self, method):
        omega = 3.0
        h = np.zeros((3, 3), dtype=complex)
        h[0, 2] = h[2, 0] = 0.5 * omega
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        out = evolve_schrodinger(
            psi0, lambda t: h, (0.0, math.pi / omega), IntegratorConfig(method=method)
        )
        expected = np.array([0.0, 0.0, -1.0j])
        assert np.allclose(out.state.amplitudes, expected, atol=1e-7)

    def test_shortcut_step_transfers_population_with_known_phase(self):
        from rydsim.core import lr_phase

        params = LRPulseParams.from_boundaries(1.0)
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        out = evolve_schrodinger(psi0, two_level_hamiltonian(params), (0.0, 1.0))
        amp_r = out.state.amplitudes[2]
        assert abs(amp_r) ** 2 == pytest.approx(1.0, abs=1e-4)
        expected_phase = -0.5 * math.pi + lr_phase(params)
        diff = (np.angle(amp_r) - expected_phase + math.pi) % (2 * math.pi) - math.pi
        assert abs(diff) <= 1e-4

    def test_norm_conservation(self):
        params = LRPulseParams.from_boundaries(1.0)
        psi0 = StateVector(1, np.array([0.8, 0.0, 0.6]))
        out = evolve_schrodinger(psi0, two_level_hamiltonian(params), (0.0, 1.0))
        assert abs(out.state.norm() - 1.0) <= 1e-8

    def test_step_halving_convergence(self):
        params = LRPulseParams.from_boundaries(1.0)
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        h = two_level_hamiltonian(params)
        ref = evolve_schrodinger(psi0, h, (0.0, 1.0), IntegratorConfig(steps=4000))
        halved = evolve_schrodinger(psi0, h, (0.0, 1.0), IntegratorConfig(steps=8000))
        fid_change = abs(
            fidelity_pure(ref.state, halved.state) - 1.0
        )
        assert fid_change <= 1e-8

    def test_invariant_eigenstate_transport(self):
        # the expansion amplitudes on the invariant eigenstates stay constant
        params = LRPulseParams.from_boundaries(1.0)
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        out = evolve_schrodinger(
            psi0,
            two_level_hamiltonian(params),
            (0.0, 1.0),
            IntegratorConfig(record_trajectory=True, sample_count=41),
        )
        for t, amp in zip(out.times, out.trajectory):
            d = lr_decompose(amp, params.alpha(t), params.beta(t))
            assert abs(abs(d.c_plus) - 1.0) <= 1e-4
            assert abs(d.c_minus) <= 2e-2

    def test_trajectory_sampling(self):
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        out = evolve_schrodinger(
            psi0,
            lambda t: np.zeros((3, 3), dtype=complex),
            (0.0, 1.0),
            IntegratorConfig(steps=100, record_trajectory=True, sample_count=11),
        )
        assert out.times[0] == pytest.approx(0.0)
        assert out.times[-1] == pytest.approx(1.0)
        assert out.trajectory.shape == (11, 3)

    def test_full_schedule_propagator_is_unitary(self, sta_pi_schedule):
        # column-by-column propagation of the identity; the default
        # two-exponential scheme is exactly unitary at any step size
        config = IntegratorConfig(steps=300)
        cols = []
        for k in range(9):
            amp = np.zeros(9, dtype=complex)
            amp[k] = 1.0
            psi = StateVector(2, amp)
            for window in sta_pi_schedule.windows:
                psi = evolve_schrodinger(
                    psi, sta_pi_schedule.window_hamiltonian(window), window, config
                ).state
            cols.append(psi.amplitudes)
        u = np.column_stack(cols)
        assert np.linalg.norm(u.conj().T @ u - np.eye(9)) <= 1e-7

    def test_unknown_method_rejected(self):
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        with pytest.raises(InvalidParameterError):
            evolve_schrodinger(
                psi0,
                lambda t: np.zeros((3, 3), dtype=complex),
                (0.0, 1.0),
                IntegratorConfig(method="euler"),
            )

    def test_config_validation(self):
        with pytest.raises(InvalidParameterError):
            IntegratorConfig(steps=0)
        with pytest.raises(InvalidParameterError):
            IntegratorConfig(tolerance=-1.0)


class TestLindblad:
    def test_pure_exponential_decay(self):
        gamma = 0.37
        rho0 = StateVector(1, np.array([0.0, 0.0, 1.0])).to_density_matrix()
        out = evolve_lindblad(
            rho0,
            lambda t: np.zeros((3, 3), dtype=complex),
            NoiseSpec(gamma_r0=gamma, gamma_r1=0.0),
            (0.0, 2.0),
            IntegratorConfig(steps=400),
        )
        # a lone atom is the control: |r> decays to |0>
        assert out.state.entries[2, 2].real == pytest.approx(math.exp(-gamma * 2.0), abs=1e-9)
        assert out.state.entries[0, 0].real == pytest.approx(1.0 - math.exp(-gamma * 2.0), abs=1e-9)

    def test_target_operator_acts_on_level_one(self):
        ops = lindblad_operators(NoiseSpec(0.01, 0.04), 2)
        assert len(ops) == 2
        assert ops[0][0 * 3 + 0, 2 * 3 + 0] == pytest.approx(math.sqrt(0.01))
        assert ops[1][0 * 3 + 1, 0 * 3 + 2] == pytest.approx(math.sqrt(0.04))

    @pytest.mark.parametrize("method", ["split", "rk4", "adaptive"])
    def test_zero_noise_matches_schrodinger(self, method):
        params = LRPulseParams.from_boundaries(1.0)
        h = two_level_hamiltonian(params)
        psi0 = StateVector(1, np.array([1.0, 0.0, 0.0]))
        pure = evolve_schrodinger(psi0, h, (0.0, 1.0)).state
        mixed = evolve_lindblad(
            psi0.to_density_matrix(),
            h,
            NoiseSpec(0.0, 0.0),
            (0.0, 1.0),
            IntegratorConfig(method=method, steps=2000, tolerance=1e-10),
        ).state
        assert abs(fidelity_mixed(pure, mixed) - 1.0) <= 1e-7

    def test_trace_hermiticity_and_positivity(self):
        params = LRPulseParams.from_boundaries(1.0)
        h = two_level_hamiltonian(params)
        rho0 = StateVector(1, np.array([1.0, 0.0, 0.0])).to_density_matrix()
        out = evolve_lindblad(rho0, h, NoiseSpec(0.01, 0.01), (0.0, 1.0)).state
        assert abs(out.trace() - 1.0) <= 1e-7
        assert out.hermiticity_defect() <= 1e-8
        assert out.min_eigenvalue() >= -1e-7

    def test_split_and_rk4_agree(self):
        params = LRPulseParams.from_boundaries(1.0)
        h = two_level_hamiltonian(params)
        rho0 = StateVector(1, np.array([1.0, 0.0, 0.0])).to_density_matrix()
        a = evolve_lindblad(rho0, h, NoiseSpec(0.02, 0.0), (0.0, 1.0),
                            IntegratorConfig(method="split", steps=2000)).state
        b = evolve_lindblad(rho0, h, NoiseSpec(0.02, 0.0), (0.0, 1.0),
                            IntegratorConfig(method="rk4", steps=2000)).state
        # split is second order in the step, rk4 fourth; agreement is set
        # by the splitting error at this step count
        assert np.linalg.norm(a.entries - b.entries) <= 1e-6
