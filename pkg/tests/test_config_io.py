import math
import textwrap

import numpy as np
import pytest

from eitkit import (
    ConfigError,
    DataError,
    FitResult,
    ProfileShape,
    ResonanceScan,
    default_config,
    load_config,
    with_overrides,
)
from eitkit.constants import DIPOLE_D1, TWO_PI
from eitkit.csvio import (
    read_scan,
    read_series,
    write_fit,
    write_scan,
    write_series,
    write_slopes,
)
from eitkit.doppler import doppler_width


class TestLoadConfig:
    def test_defaults(self):
        cfg = default_config()
        assert cfg.gamma_bc == pytest.approx(TWO_PI * 1500.0, rel=1e-14)
        assert cfg.gamma_pe == 0.0
        assert cfg.temperature == 363.0
        assert cfg.dipole_moment == DIPOLE_D1
        assert cfg.profile_shape is ProfileShape.GAUSSIAN
        assert cfg.seed == 12345
        assert cfg.delta2_grid.size == 401
        assert cfg.delta2_grid[-1] == pytest.approx(TWO_PI * 100e3, rel=1e-12)
        assert cfg.power_grid.size == 12
        assert cfg.power_grid[0] == 1e-4 and cfg.power_grid[-1] == 1.2e-3
        assert cfg.temperature_grid[0] == 333.0 and cfg.temperature_grid[-1] == 373.0

    def test_doppler_width_resolved_from_temperature(self):
        cfg = load_config(text="[cell]\ntemperature_k = 333.0\n")
        assert cfg.w_d == pytest.approx(
            doppler_width(333.0, cfg.wavelength, cfg.atom_mass), rel=1e-14
        )

    def test_hz_to_angular_conversion(self):
        cfg = load_config(text="[system]\ngamma_bc_hz = 2000\ndelta_pump_hz = 1e6\n")
        assert cfg.gamma_bc == pytest.approx(TWO_PI * 2000.0, rel=1e-14)
        assert cfg.delta_pump == pytest.approx(TWO_PI * 1e6, rel=1e-14)

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as exc:
            load_config(text="[system]\ngamma_bc = 10\n")
        assert exc.value.section == "system"
        assert exc.value.key == "gamma_bc"

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError) as exc:
            load_config(text="[laser]\npower = 1\n")
        assert exc.value.section == "laser"

    def test_non_numeric_value(self):
        with pytest.raises(ConfigError):
            load_config(text="[cell]\ntemperature_k = warm\n")

    def test_nonpositive_rejected(self):
        with pytest.raises(ConfigError):
            load_config(text="[cell]\ntemperature_k = -10\n")

    def test_bad_profile_shape(self):
        with pytest.raises(ConfigError):
            load_config(text="[system]\nprofile_shape = voigt\n")

    def test_bad_power_ordering(self):
        with pytest.raises(ConfigError):
            load_config(text="[sweep]\npower_min_w = 2e-3\npower_max_w = 1e-3\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(path=tmp_path / "nope.ini")

    def test_syntax_error(self):
        with pytest.raises(ConfigError):
            load_config(text="gamma_bc_hz = 10\n")   # key before any section

    def test_builders_consistent(self):
        cfg = default_config()
        sys = cfg.system()
        assert sys.omega_c == pytest.approx(cfg.omega_c(), rel=1e-14)
        assert sys.gamma_total == pytest.approx(cfg.gamma_total, rel=1e-14)
        assert cfg.medium().cell_length == cfg.cell_length
        assert cfg.cell().temperature == cfg.temperature
        assert cfg.profile().w_d == cfg.w_d
        assert cfg.power_sweep().powers.size == 12

    def test_explicit_number_density_override(self):
        cfg = load_config(text="[cell]\nnumber_density_per_m3 = 2.5e17\n")
        assert cfg.medium().number_density == 2.5e17

    def test_with_overrides(self):
        cfg = with_overrides(default_config(), temperature=350.0)
        assert cfg.temperature == 350.0

    def test_resolved_text_echo(self):
        cfg = load_config(text="[system]\ngamma_bc_hz = 1750\n")
        assert "gamma_bc_hz = 1750" in cfg.resolved_text
        assert "[sweep]" in cfg.resolved_text

    def test_inline_comments_stripped(self):
        cfg = load_config(text="[cell]\ntemperature_k = 353.0  # hot cell\n")
        assert cfg.temperature == 353.0


class TestScanCsv:
    def _scan(self):
        grid = np.linspace(-TWO_PI * 100e3, TWO_PI * 100e3, 41)
        values = 5.0 - 2.0 / (1.0 + (grid / (TWO_PI * 20e3)) ** 2)
        return ResonanceScan(delta2=grid, values=values)

    def test_round_trip(self, tmp_path):
        path = tmp_path / "scan.csv"
        scan = self._scan()
        write_scan(path, scan, cell_length=0.05)
        back = read_scan(path)
        assert np.allclose(back.delta2, scan.delta2, rtol=1e-12)
        assert np.allclose(back.values, scan.values, rtol=1e-12)

    def test_hz_on_disk(self, tmp_path):
        path = tmp_path / "scan.csv"
        write_scan(path, self._scan(), cell_length=0.05)
        lines = path.read_text().splitlines()
        assert lines[0] == "# eitkit scan csv v1"
        assert lines[1] == "delta2_hz,absorption_per_m,transmission"
        first = float(lines[2].split(",")[0])
        assert first == pytest.approx(-100e3, rel=1e-10)

    def test_transmission_column_consistent(self, tmp_path):
        path = tmp_path / "scan.csv"
        scan = self._scan()
        write_scan(path, scan, cell_length=0.05)
        rows = np.loadtxt(path, delimiter=",", skiprows=2)
        assert np.allclose(rows[:, 2], np.exp(-rows[:, 1] * 0.05), rtol=1e-10)

    def test_schema_mismatch(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# eitkit series csv v1\nfoo\n")
        with pytest.raises(DataError):
            read_scan(path)

    def test_wrong_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# eitkit scan csv v1\ndelta2_hz,absorption_per_m\n1,2\n")
        with pytest.raises(DataError):
            read_scan(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "# eitkit scan csv v1\ndelta2_hz,absorption_per_m,transmission\n"
            "0.0,abc,1.0\n"
        )
        with pytest.raises(DataError):
            read_scan(path)

    def test_empty_body(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "# eitkit scan csv v1\ndelta2_hz,absorption_per_m,transmission\n"
        )
        with pytest.raises(DataError):
            read_scan(path)


class TestSeriesCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "series.csv"
        powers = np.linspace(1e-4, 1.2e-3, 6)
        omega_c = TWO_PI * 1e6 * np.sqrt(powers / 1e-3)
        fwhm = TWO_PI * (3e3 + 4e7 * powers)
        write_series(path, powers, omega_c, fwhm)
        series = read_series(path, temperature=363.0)
        assert np.allclose(series.powers, powers, rtol=1e-12)
        assert np.allclose(series.fwhm, fwhm, rtol=1e-12)
        assert series.temperature == 363.0

    def test_rejects_unsorted(self, tmp_path):
        path = tmp_path / "series.csv"
        write_series(path, [2e-4, 1e-4], [1.0, 1.0], [1.0, 1.0])
        with pytest.raises(DataError):
            read_series(path)


class TestFitAndSlopesCsv:
    def test_fit_report_units(self, tmp_path):
        path = tmp_path / "fit.csv"
        result = FitResult(
            names=("slope", "intercept", "gamma_bc"),
            values=np.array([1e7, TWO_PI * 3000.0, TWO_PI * 1500.0]),
            sigmas=np.array([1e5, TWO_PI * 30.0, TWO_PI * 15.0]),
            rss=1.25, dof=10, converged=True, n_iter=0,
        )
        write_fit(path, result, extra=[("note", 7.0)])
        rows = {r.split(",")[0]: r.split(",")[1:]
                for r in path.read_text().splitlines()[2:]}
        # slope is per-watt, left in angular units; the rates land in Hz
        assert float(rows["slope"][0]) == pytest.approx(1e7, rel=1e-10)
        assert float(rows["intercept_hz"][0]) == pytest.approx(3000.0, rel=1e-10)
        assert float(rows["gamma_bc_hz"][0]) == pytest.approx(1500.0, rel=1e-10)
        assert float(rows["gamma_bc_hz"][1]) == pytest.approx(15.0, rel=1e-10)
        assert float(rows["rss"][0]) == pytest.approx(1.25, rel=1e-12)
        assert float(rows["dof"][0]) == 10.0
        assert float(rows["note"][0]) == 7.0

    def test_slopes_hz_per_watt(self, tmp_path):
        path = tmp_path / "slopes.csv"
        write_slopes(path, [333.0, 353.0], [TWO_PI * 3.3e7, TWO_PI * 4.4e7])
        lines = path.read_text().splitlines()
        assert lines[0] == "# eitkit slopes csv v1"
        assert float(lines[2].split(",")[1]) == pytest.approx(3.3e7, rel=1e-10)
