import math

import numpy as np
import pytest

from eitkit import LambdaSystem, MediumConfig
from eitkit.constants import DIPOLE_D1, TWO_PI

GAMMA = TWO_PI * 5.75e6
W_D = TWO_PI * 275.99e6       # cell at 363 K, 795 nm
GAMMA_BC = TWO_PI * 1.5e3


@pytest.fixture
def medium():
    return MediumConfig(
        number_density=1e17,
        dipole_moment=DIPOLE_D1,
        cell_length=0.05,
        beam_diameter=0.01,
        signal_wavelength=795e-9,
        buffer_gas_label="Ne",
        buffer_gas_pressure_torr=1.0,
    )


def make_system(omega_b=1.0, omega_c=TWO_PI * 2e6, delta_pump=0.0, delta2=0.0,
                gamma_bc=GAMMA_BC, gamma_pe=0.0, gamma_total=GAMMA,
                allow_strong_signal=True):
    return LambdaSystem(
        omega_b=omega_b,
        omega_c=omega_c,
        delta_pump=delta_pump,
        delta2=delta2,
        gamma_b_decay=0.5 * gamma_total,
        gamma_c_decay=0.5 * gamma_total,
        gamma_bc=gamma_bc,
        gamma_pe=gamma_pe,
        allow_strong_signal=allow_strong_signal,
    )
