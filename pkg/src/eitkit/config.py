"""Run configuration: INI-style files with explicit unit suffixes.

Every physical key carries its unit in the name (``_hz``, ``_w``, ``_m``,
``_k``, ...); frequencies are ordinary frequencies in Hz on disk and are
converted to angular rad/s exactly once, here.  Unknown keys are rejected so
typos cannot silently fall back to defaults.
"""

import configparser
import dataclasses
import io
from dataclasses import dataclass

import numpy as np

from .atom import LambdaSystem
from .constants import (
    DIPOLE_D1,
    GAMMA_TOTAL_HZ,
    LAMBDA_D1,
    M_RB87,
    TWO_PI,
)
from .doppler import DopplerProfile, MediumConfig, ProfileShape, doppler_width
from .errors import ConfigError
from .propagation import ALCOCK_RB, CellModel, PowerSweep, rabi_from_power
from .quadrature import QuadratureConfig

#: (section, key) -> default value as a string; None marks required-if-used
#: keys that have a computed fallback.
_SCHEMA = {
    "constants": {
        "dipole_moment_cm": repr(DIPOLE_D1),
        "wavelength_m": repr(LAMBDA_D1),
        "gamma_total_hz": repr(GAMMA_TOTAL_HZ),
        "atom_mass_kg": repr(M_RB87),
        "branching_b": "0.5",   # fraction of Gamma decaying into |b>
    },
    "system": {
        "gamma_bc_hz": "1500.0",
        "gamma_pe_hz": "0.0",
        "omega_b_hz": "0.0",
        "delta_pump_hz": "0.0",
        "profile_shape": "gaussian",   # gaussian | lorentzian
    },
    "cell": {
        "temperature_k": "363.0",
        "length_m": "0.05",
        "beam_diameter_m": "0.01",
        "buffer_gas": "Ne",
        "buffer_gas_pressure_torr": "1.0",
        "pump_absorption_scale_m2": "0.0",
        "number_density_per_m3": "",   # blank: from the vapor correlation
    },
    "sweep": {
        "pump_power_w": "1.0e-3",
        "power_min_w": "1.0e-4",
        "power_max_w": "1.2e-3",
        "power_points": "12",
        "temperature_min_k": "333.0",
        "temperature_max_k": "373.0",
        "temperature_points": "5",
        "delta2_span_hz": "200e3",
        "delta2_points": "401",
    },
    "numerics": {
        "quad_rel_tol": "1e-9",
        "quad_max_subdivisions": "2000",
        "n_slices": "256",
    },
    "run": {
        "seed": "12345",
    },
}

_FLOAT_KEYS = {
    key
    for section, keys in _SCHEMA.items()
    for key in keys
    if key not in ("buffer_gas", "profile_shape", "seed", "power_points",
                   "temperature_points", "delta2_points",
                   "quad_max_subdivisions", "n_slices",
                   "number_density_per_m3")
}
_INT_KEYS = {"seed", "power_points", "temperature_points", "delta2_points",
             "quad_max_subdivisions", "n_slices"}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration (internal units: rad/s, W, m, K)."""

    # constants
    dipole_moment: float
    wavelength: float
    gamma_total: float          # rad/s
    atom_mass: float
    branching_b: float
    # system
    gamma_bc: float             # rad/s
    gamma_pe: float             # rad/s
    omega_b: float              # rad/s
    delta_pump: float           # rad/s
    profile_shape: ProfileShape
    # cell
    temperature: float
    cell_length: float
    beam_diameter: float
    buffer_gas: str
    buffer_gas_pressure_torr: float
    pump_absorption_scale: float
    number_density: float | None
    # sweep
    pump_power: float
    power_grid: np.ndarray
    temperature_grid: np.ndarray
    delta2_grid: np.ndarray     # rad/s
    # numerics
    quad: QuadratureConfig
    n_slices: int
    # run
    seed: int
    #: W_d (rad/s), resolved from the cell temperature at load time.
    w_d: float
    #: raw resolved key/value text for the manifest echo
    resolved_text: str

    def omega_c(self, power=None):
        """Pump Rabi frequency (rad/s) for a pump power (default configured)."""
        p = self.pump_power if power is None else power
        return rabi_from_power(p, self.beam_diameter, self.dipole_moment)

    def system(self, power=None, delta2=0.0):
        return LambdaSystem(
            omega_b=self.omega_b,
            omega_c=self.omega_c(power),
            delta_pump=self.delta_pump,
            delta2=delta2,
            gamma_b_decay=self.branching_b * self.gamma_total,
            gamma_c_decay=(1.0 - self.branching_b) * self.gamma_total,
            gamma_bc=self.gamma_bc,
            gamma_pe=self.gamma_pe,
        )

    def medium(self):
        from .propagation import rb_number_density

        density = (self.number_density if self.number_density is not None
                   else rb_number_density(self.temperature))
        return MediumConfig(
            number_density=density,
            dipole_moment=self.dipole_moment,
            cell_length=self.cell_length,
            beam_diameter=self.beam_diameter,
            signal_wavelength=self.wavelength,
            buffer_gas_label=self.buffer_gas,
            buffer_gas_pressure_torr=self.buffer_gas_pressure_torr,
        )

    def cell(self, temperature=None):
        return CellModel(
            medium=self.medium(),
            temperature=self.temperature if temperature is None else temperature,
            n_slices=self.n_slices,
            vapor_pressure_coefficients=ALCOCK_RB,
            pump_absorption_scale=self.pump_absorption_scale,
        )

    def profile(self):
        return DopplerProfile(
            w_d=self.w_d,
            shape=self.profile_shape,
            temperature=self.temperature,
            atom_mass=self.atom_mass,
            wavelength=self.wavelength,
        )

    def power_sweep(self):
        return PowerSweep(
            powers=self.power_grid,
            beam_diameter=self.beam_diameter,
            dipole_moment=self.dipole_moment,
        )


def _parse_value(section, key, raw):
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"expected a number, got {raw!r}", section, key) from None
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"expected an integer, got {raw!r}", section, key) from None
    return raw


def load_config(path=None, text=None) -> RunConfig:
    """Load and validate a run configuration file (or literal text)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if text is not None:
            parser.read_string(text)
        else:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config syntax error: {exc}") from None

    values = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError("unknown section", section)
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError("unknown key", section, key)
            values[(section, key)] = raw
    for section, keys in _SCHEMA.items():
        for key, default in keys.items():
            values.setdefault((section, key), default)

    parsed = {
        key: _parse_value(section, key, raw)
        for (section, key), raw in values.items()
    }

    shape_label = parsed["profile_shape"].strip().lower()
    try:
        shape = {"gaussian": ProfileShape.GAUSSIAN,
                 "lorentzian": ProfileShape.LORENTZIAN_APPROX}[shape_label]
    except KeyError:
        raise ConfigError(f"unknown profile shape {shape_label!r}",
                          "system", "profile_shape") from None

    density_raw = parsed["number_density_per_m3"].strip()
    number_density = float(density_raw) if density_raw else None

    for key in ("temperature_k", "length_m", "beam_diameter_m", "wavelength_m",
                "atom_mass_kg", "dipole_moment_cm", "gamma_total_hz",
                "pump_power_w", "power_min_w", "power_max_w",
                "delta2_span_hz"):
        if parsed[key] <= 0:
            section = next(s for s, keys in _SCHEMA.items() if key in keys)
            raise ConfigError("must be positive", section, key)
    if not 0.0 < parsed["branching_b"] < 1.0:
        raise ConfigError("must lie in (0, 1)", "constants", "branching_b")
    for key in ("power_points", "temperature_points"):
        if parsed[key] < 1:
            raise ConfigError("must be >= 1", "sweep", key)
    if parsed["delta2_points"] < 16:
        raise ConfigError("must be >= 16", "sweep", "delta2_points")
    if parsed["power_max_w"] < parsed["power_min_w"]:
        raise ConfigError("power_max_w below power_min_w", "sweep", "power_max_w")
    if parsed["temperature_max_k"] < parsed["temperature_min_k"]:
        raise ConfigError("temperature_max_k below temperature_min_k",
                          "sweep", "temperature_max_k")

    try:
        quad = QuadratureConfig(
            rel_tol=parsed["quad_rel_tol"],
            max_subdivisions=parsed["quad_max_subdivisions"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc), "numerics") from None

    w_d = doppler_width(parsed["temperature_k"], parsed["wavelength_m"],
                        parsed["atom_mass_kg"])

    half_span = 0.5 * TWO_PI * parsed["delta2_span_hz"]
    delta2_grid = np.linspace(-half_span, half_span, parsed["delta2_points"])
    power_grid = np.linspace(parsed["power_min_w"], parsed["power_max_w"],
                             parsed["power_points"])
    temperature_grid = np.linspace(parsed["temperature_min_k"],
                                   parsed["temperature_max_k"],
                                   parsed["temperature_points"])

    echo = io.StringIO()
    for section in _SCHEMA:
        echo.write(f"[{section}]\n")
        for key in _SCHEMA[section]:
            echo.write(f"{key} = {values[(section, key)]}\n")
        echo.write("\n")

    try:
        config = RunConfig(
            dipole_moment=parsed["dipole_moment_cm"],
            wavelength=parsed["wavelength_m"],
            gamma_total=TWO_PI * parsed["gamma_total_hz"],
            atom_mass=parsed["atom_mass_kg"],
            branching_b=parsed["branching_b"],
            gamma_bc=TWO_PI * parsed["gamma_bc_hz"],
            gamma_pe=TWO_PI * parsed["gamma_pe_hz"],
            omega_b=TWO_PI * parsed["omega_b_hz"],
            delta_pump=TWO_PI * parsed["delta_pump_hz"],
            profile_shape=shape,
            temperature=parsed["temperature_k"],
            cell_length=parsed["length_m"],
            beam_diameter=parsed["beam_diameter_m"],
            buffer_gas=parsed["buffer_gas"],
            buffer_gas_pressure_torr=parsed["buffer_gas_pressure_torr"],
            pump_absorption_scale=parsed["pump_absorption_scale_m2"],
            number_density=number_density,
            pump_power=parsed["pump_power_w"],
            power_grid=power_grid,
            temperature_grid=temperature_grid,
            delta2_grid=delta2_grid,
            quad=quad,
            n_slices=parsed["n_slices"],
            seed=parsed["seed"],
            w_d=w_d,
            resolved_text=echo.getvalue(),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config


def default_config() -> RunConfig:
    """The configuration obtained from an empty file (all defaults)."""
    return load_config(text="")


def with_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Functional update helper for programmatic use."""
    return dataclasses.replace(config, **overrides)
