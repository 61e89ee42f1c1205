import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eitkit import (
    DensityMatrix3,
    LambdaSystem,
    PoleError,
    SingularLiouvillian,
    ValidityError,
    bloch_steady_state,
    extrapolated_coherence_ratio,
    linear_coherence,
    steady_coherence_ab,
)
from eitkit.constants import TWO_PI

from conftest import GAMMA, make_system


class TestLambdaSystem:
    def test_rejects_negative_rates(self):
        with pytest.raises(ValueError):
            LambdaSystem(omega_b=1.0, omega_c=2.0, gamma_b_decay=-1.0,
                         gamma_c_decay=GAMMA)

    def test_rejects_zero_total_decay(self):
        with pytest.raises(ValueError):
            LambdaSystem(omega_b=0.0, omega_c=1.0)

    def test_gamma_total_is_sum(self):
        sys = LambdaSystem(omega_b=0.0, omega_c=1.0, gamma_b_decay=3.0,
                           gamma_c_decay=4.0)
        assert sys.gamma_total == 7.0

    def test_weak_signal_check(self):
        strong = make_system(omega_b=TWO_PI * 1e6, omega_c=TWO_PI * 2e6,
                             allow_strong_signal=False)
        with pytest.raises(ValidityError):
            strong.check_weak_signal()
        # explicit override
        make_system(omega_b=TWO_PI * 1e6, omega_c=TWO_PI * 2e6).check_weak_signal()


class TestLinearCoherence:
    def test_two_level_limit(self):
        # omega_c = 0, delta2 = 0: the inner term vanishes and the bare
        # two-level response omega_b/(Delta - i*Gamma/2) remains.
        sys = make_system(omega_b=0.3, omega_c=0.0, delta_pump=TWO_PI * 1e6,
                          gamma_bc=TWO_PI * 100.0)
        expected = 0.3 / (TWO_PI * 1e6 - 0.5j * GAMMA)
        assert linear_coherence(sys) == pytest.approx(expected, rel=1e-14)

    def test_dark_state_limit(self):
        # gamma_bc -> 0+ at two-photon resonance: perfect transparency.
        mags = [
            abs(linear_coherence(make_system(gamma_bc=g)))
            for g in (TWO_PI * 1e3, TWO_PI * 1.0, TWO_PI * 1e-3)
        ]
        assert mags[0] > mags[1] > mags[2]
        # The residual absorption scales linearly with gamma_bc.
        assert mags[2] / mags[0] == pytest.approx(1e-6, rel=1e-2)

    def test_generic_point_pinned(self):
        # Hand evaluation of the closed formula at the standard point.
        sys = make_system(
            omega_b=TWO_PI * 0.5e6, omega_c=TWO_PI * 2e6,
            delta_pump=TWO_PI * 50e6, delta2=TWO_PI * 10e3,
        )
        expected = 0.0011116640337779696 + 0.00015509974571543316j
        assert linear_coherence(sys) == pytest.approx(expected, rel=1e-12)

    def test_generic_point_matches_steady_state_oracle(self):
        sys = make_system(
            omega_b=0.0, omega_c=TWO_PI * 2e6,
            delta_pump=TWO_PI * 50e6, delta2=TWO_PI * 10e3,
        )
        lin = linear_coherence(dataclasses.replace(sys, omega_b=1.0))
        oracle = extrapolated_coherence_ratio(sys)
        assert abs(oracle - lin) / abs(lin) < 1e-6

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            linear_coherence(make_system(gamma_bc=0.0, delta2=0.0))

    def test_weak_signal_rejected(self):
        sys = make_system(omega_b=TWO_PI * 1e6, omega_c=TWO_PI * 2e6,
                          allow_strong_signal=False)
        with pytest.raises(ValidityError):
            linear_coherence(sys)

    @given(scale=st.floats(min_value=1e-6, max_value=1e3))
    def test_odd_in_omega_b(self, scale):
        base = make_system(omega_b=0.25, delta_pump=TWO_PI * 3e6,
                           delta2=TWO_PI * 5e3)
        scaled = dataclasses.replace(base, omega_b=0.25 * scale)
        assert linear_coherence(scaled) == pytest.approx(
            scale * linear_coherence(base), rel=1e-12
        )

    @given(
        log_gbc=st.floats(min_value=-2.0, max_value=8.0),
        log_oc=st.floats(min_value=-2.0, max_value=8.0),
        delta2_hz=st.floats(min_value=-1e9, max_value=1e9),
    )
    @settings(max_examples=200)
    def test_passive_at_pump_resonance(self, log_gbc, log_oc, delta2_hz):
        # The medium absorbs (never amplifies) the signal at Delta = 0.
        sys = make_system(
            omega_c=TWO_PI * 10.0**log_oc,
            gamma_bc=TWO_PI * 10.0**log_gbc,
            delta2=TWO_PI * delta2_hz,
            delta_pump=0.0,
        )
        assert linear_coherence(sys).imag >= -1e-30


class TestDensityMatrix3:
    def test_rejects_non_hermitian(self):
        m = np.diag([0.5, 0.3, 0.2]).astype(complex)
        m[0, 1] = 0.1
        with pytest.raises(ValueError, match="Hermitian"):
            DensityMatrix3(m)

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            DensityMatrix3(np.diag([0.5, 0.3, 0.3]).astype(complex))

    def test_accessors(self):
        m = np.diag([0.2, 0.5, 0.3]).astype(complex)
        m[0, 1] = m[1, 0] = 0.05
        dm = DensityMatrix3(m)
        assert dm.rho_ab == 0.05
        assert np.allclose(dm.populations, [0.2, 0.5, 0.3])


class TestBlochSteadyState:
    def test_degenerate_raises(self):
        # No field and no relaxation connecting the ground states.
        sys = make_system(omega_b=0.0, omega_c=0.0, gamma_bc=TWO_PI * 100.0)
        with pytest.raises(SingularLiouvillian):
            bloch_steady_state(sys)

    def test_pump_only_empties_c(self):
        # With only the pump on, everything accumulates in the dark |b>.
        sys = make_system(omega_b=0.0, omega_c=TWO_PI * 1e6,
                          gamma_bc=TWO_PI * 100.0)
        rho = bloch_steady_state(sys)
        assert rho.populations == pytest.approx([0.0, 1.0, 0.0], abs=1e-9)

    def test_exchange_equalizes_populations(self):
        # Symmetric exchange with no fields: the ground states equilibrate.
        sys = make_system(omega_b=0.0, omega_c=0.0, gamma_bc=0.0,
                          gamma_pe=TWO_PI * 100.0)
        rho = bloch_steady_state(sys)
        assert rho.populations == pytest.approx([0.0, 0.5, 0.5], abs=1e-9)

    def test_weak_signal_agrees_with_linear_response(self):
        sys = make_system(
            omega_b=0.0, omega_c=TWO_PI * 2e6,
            delta_pump=TWO_PI * 50e6, delta2=TWO_PI * 10e3,
        )
        lin = linear_coherence(dataclasses.replace(sys, omega_b=1.0))
        ratio = extrapolated_coherence_ratio(sys)
        assert abs(ratio - lin) / abs(lin) <= 1e-3

    @given(
        log_rates=st.lists(
            st.floats(min_value=math.log(TWO_PI * 10),
                      max_value=math.log(TWO_PI * 1e7)),
            min_size=4, max_size=4,
        ),
        delta_pump=st.floats(min_value=-TWO_PI * 1e9, max_value=TWO_PI * 1e9),
        delta2=st.floats(min_value=-TWO_PI * 1e9, max_value=TWO_PI * 1e9),
    )
    @settings(max_examples=100, deadline=None)
    def test_output_is_valid_density_matrix(self, log_rates, delta_pump, delta2):
        gb, gc, gbc, oc = (math.exp(v) for v in log_rates)
        sys = LambdaSystem(
            omega_b=oc / 50.0, omega_c=oc, delta_pump=delta_pump, delta2=delta2,
            gamma_b_decay=gb, gamma_c_decay=gc, gamma_bc=gbc,
            allow_strong_signal=True,
        )
        # Either a valid density matrix (the constructor enforces the
        # invariants) or an explicit degeneracy error for nearly decoupled
        # parameter corners; silent garbage is the failure mode under test.
        try:
            rho = bloch_steady_state(sys)
        except SingularLiouvillian:
            return
        assert abs(np.trace(rho.matrix) - 1.0) < 1e-12


class TestBatchedCoherence:
    def test_matches_single_solves(self):
        sys = make_system(omega_b=TWO_PI * 0.1e6, delta2=TWO_PI * 5e3)
        deltas = np.linspace(-TWO_PI * 500e6, TWO_PI * 500e6, 7)
        batch = steady_coherence_ab(sys, deltas)
        for d, expected in zip(deltas, batch):
            single = bloch_steady_state(
                dataclasses.replace(sys, delta_pump=float(d))
            ).rho_ab
            assert single == pytest.approx(expected, rel=1e-9)
