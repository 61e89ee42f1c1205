"""Velocity-induced detuning distributions and ensemble-averaged susceptibility.

Both fields co-propagate, so the two-photon detuning is held fixed while the
pump detuning Delta is smeared by the thermal velocity distribution.  The
average is available by adaptive quadrature for either profile shape and in
closed form for the Lorentzian approximation (where the average reduces to a
single residue).
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .atom import LambdaSystem, linear_coherence, steady_coherence_ab
from .constants import c, epsilon_0, hbar, k_B, TWO_PI
from .errors import PoleError
from .quadrature import QuadratureConfig, integrate_adaptive

SQRT_PI_LN2 = math.sqrt(math.pi * math.log(2.0))


class ProfileShape(enum.Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN_APPROX = "lorentzian"


@dataclass(frozen=True)
class DopplerProfile:
    """Detuning distribution of half-width ``w_d`` (rad/s).

    Both shapes share the same peak value sqrt(ln2)/(w_d*sqrt(pi)) and the
    same half-maximum point at |Delta| = w_d.  The Lorentzian shape is the
    deliberately *unnormalized* approximation used by the closed-form
    average; its integral is sqrt(pi*ln2), not 1.
    """

    w_d: float
    shape: ProfileShape = ProfileShape.GAUSSIAN
    temperature: float | None = None
    atom_mass: float | None = None
    wavelength: float | None = None

    def __post_init__(self):
        if self.w_d <= 0:
            raise ValueError("w_d must be positive")

    @property
    def peak(self):
        return math.sqrt(math.log(2.0)) / (self.w_d * math.sqrt(math.pi))


@dataclass(frozen=True)
class MediumConfig:
    """Macroscopic medium and beam parameters."""

    number_density: float            # atoms/m^3
    dipole_moment: float             # C*m
    cell_length: float               # m
    beam_diameter: float             # m
    signal_wavelength: float         # m
    buffer_gas_label: str = ""
    buffer_gas_pressure_torr: float = 0.0

    def __post_init__(self):
        for name in ("number_density", "dipole_moment", "cell_length",
                     "beam_diameter", "signal_wavelength"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def prefactor(self):
        """Coupling prefactor N*D^2/(hbar*eps0), rad/s.  Always recomputed."""
        return self.number_density * self.dipole_moment**2 / (hbar * epsilon_0)

    @property
    def signal_omega(self):
        """Signal carrier angular frequency, rad/s."""
        return TWO_PI * c / self.signal_wavelength


def doppler_width(temperature: float, wavelength: float, atom_mass: float) -> float:
    """Half-width W_d (rad/s) of the Doppler-broadened detuning distribution.

    The full width is 2*W_d = (4*pi/lambda)*sqrt(2*ln2*k_B*T/m).
    """
    if temperature <= 0 or wavelength <= 0 or atom_mass <= 0:
        raise ValueError("temperature, wavelength and atom_mass must be positive")
    fwhm = (4.0 * math.pi / wavelength) * math.sqrt(
        2.0 * math.log(2.0) * k_B * temperature / atom_mass
    )
    return 0.5 * fwhm


def profile_density(profile: DopplerProfile, delta):
    """Distribution value p(Delta) in s/rad; vectorized over ``delta``."""
    delta = np.asarray(delta, dtype=float)
    x = delta / profile.w_d
    if profile.shape is ProfileShape.GAUSSIAN:
        return profile.peak * np.exp(-math.log(2.0) * x**2)
    return profile.peak / (1.0 + x**2)


def _coherence_ratio(sys: LambdaSystem, response: str):
    """rho_ab/omega_b as a vectorized function of the pump detuning."""
    if response == "linear":
        sys.check_weak_signal()
        inner = 1j * sys.gamma_bc + sys.delta2
        if abs(inner) < 1e-30:
            # Surface the pole the same way the scalar path does.
            linear_coherence(sys)
        stark = sys.omega_c**2 / inner

        def ratio(delta):
            return 1.0 / (delta - sys.delta2 + stark - 0.5j * sys.gamma_total)

        return ratio
    if response == "bloch":
        if sys.omega_b <= 0:
            raise ValueError("bloch response needs omega_b > 0")
        sys.check_weak_signal()

        def ratio(delta):
            return steady_coherence_ab(sys, delta) / sys.omega_b

        return ratio
    raise ValueError(f"unknown response kind {response!r}")


def _feature_breakpoints(sys: LambdaSystem, pump_offset: float):
    """Pump detunings around which the atomic response varies sharply."""
    gamma_eff = max(sys.gamma_bc, sys.gamma_pe, 1e-3)
    stark = sys.omega_c**2 / (1j * gamma_eff + sys.delta2)
    center = sys.delta2 - stark.real
    gamma = sys.gamma_total
    points = [pump_offset, 0.0, center]
    for k in (1.0, 10.0, 100.0, 1000.0):
        points.extend((center - k * gamma, center + k * gamma))
    return points


def average_susceptibility_numeric(
    sys: LambdaSystem,
    medium: MediumConfig,
    profile: DopplerProfile,
    quad: QuadratureConfig = QuadratureConfig(),
    pump_offset: float = 0.0,
    response: str = "linear",
) -> complex:
    """Ensemble-averaged signal susceptibility by adaptive quadrature.

    chi = (prefactor/omega_b) * integral p(Delta - pump_offset) * rho_ab dDelta.

    The Gaussian profile is integrated over +-8*W_d around the pump center
    (the truncated tails carry < 1e-10 of the weight).  The heavy-tailed
    Lorentzian shape is integrated over the full line through the
    substitution Delta = W_d*tan(theta), which the closed form implicitly
    assumes; truncating it at 8*W_d would discard several percent of the
    weight whenever the optical resonance sits far from the line center.
    """
    ratio = _coherence_ratio(sys, response)
    breakpoints = _feature_breakpoints(sys, pump_offset)

    if profile.shape is ProfileShape.GAUSSIAN:
        lo = pump_offset - 8.0 * profile.w_d
        hi = pump_offset + 8.0 * profile.w_d

        def integrand(delta):
            return profile_density(profile, delta - pump_offset) * ratio(delta)

        value, _ = integrate_adaptive(integrand, lo, hi, quad, breakpoints)
    else:
        w_d = profile.w_d
        scale = profile.peak * w_d  # p_L(Delta) * dDelta/dtheta is constant

        def integrand(theta):
            delta = pump_offset + w_d * np.tan(theta)
            return scale * ratio(delta)

        theta_breaks = [math.atan((p - pump_offset) / w_d) for p in breakpoints]
        value, _ = integrate_adaptive(
            integrand, -0.5 * math.pi, 0.5 * math.pi, quad, theta_breaks
        )
    return complex(medium.prefactor * value)


def average_susceptibility_closed(
    sys: LambdaSystem, medium: MediumConfig, w_d: float
) -> complex:
    """Closed-form average susceptibility for the Lorentzian profile.

    chi = 2*prefactor*sqrt(pi*ln2) * (i*gamma_bc + delta2) /
          [(gamma_bc - i*delta2)*(Gamma + 2*W_d - 2i*delta2) + 2*|omega_c|^2]
    """
    if w_d <= 0:
        raise ValueError("w_d must be positive")
    numerator = 1j * sys.gamma_bc + sys.delta2
    denominator = (
        (sys.gamma_bc - 1j * sys.delta2)
        * (sys.gamma_total + 2.0 * w_d - 2j * sys.delta2)
        + 2.0 * sys.omega_c**2
    )
    if abs(denominator) < 1e-30:
        raise PoleError("closed-form susceptibility denominator is zero")
    return complex(2.0 * medium.prefactor * SQRT_PI_LN2 * numerator / denominator)
