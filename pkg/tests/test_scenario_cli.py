import numpy as np
import pytest

from nfsec.cli import main
from nfsec.report import emit_csv, read_csv
from nfsec.scenario import (ScenarioParseError, ScenarioValidationError, build_scenario,
                            bundled_scenarios, load_scenario, parse_scenario_text)
from nfsec.sweeps import power_spectrum, sweep_alpha, sweep_re

MINIMAL = "user_radius_m = 5\neve_radius_m = 3.5\nschemes = proposed,signal_only\n"


def test_bundled_scenarios_load():
    names = bundled_scenarios()
    assert {"range_map", "power_split", "range_sweep"} <= set(names)
    for name in names:
        sc = load_scenario(name)
        assert sc.system.n_antennas == 513


def test_minimal_scenario_defaults():
    sc = build_scenario(parse_scenario_text(MINIMAL))
    assert sc.system.element_spacing == pytest.approx(sc.system.wavelength / 2)
    assert sc.eve.radius == 3.5 and sc.user.angle == 0.0
    assert len(sc.digest) == 16
    assert sc.digest == build_scenario(parse_scenario_text("# c\n" + MINIMAL)).digest


@pytest.mark.parametrize("text,line,column", [
    ("user_radius_m = 5\nbogus = 1\n", 2, 1),
    ("user_radius_m = 5\nuser_radius_m = 6\n", 2, 1),
    ("user_radius_m\n", 1, 1),
    ("  user_radius_m = abc\n", 1, 19),
    ("", 1, 1),
])
def test_parse_errors_carry_location(text, line, column):
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario_text(text, source="x.scenario")
    assert info.value.line == line and info.value.column == column
    assert str(info.value).startswith(f"x.scenario:{line}:{column}:")


@pytest.mark.parametrize("text,field,word", [
    ("user_radius_m = 5\n", "eve_radius_m", "required"),
    ("user_radius_m = 5\neve_radius_m = 1\n", "eve_radius_m", "Fresnel"),
    ("user_radius_m = 500\neve_radius_m = 4\n", "user_radius_m", "Rayleigh"),
    ("user_radius_m = 5\neve_radius_m = 4\ncorrelation_mode = fuzzy\n", "correlation_mode", "one of"),
    ("user_radius_m = 5\neve_radius_m = 4\nn_antennas = 1\n", "system", ""),
])
def test_validation_errors_name_the_field(text, field, word):
    with pytest.raises(ScenarioValidationError) as info:
        build_scenario(parse_scenario_text(text))
    assert info.value.field == field
    assert word in str(info.value)


@pytest.fixture(scope="module")
def small():
    return build_scenario(parse_scenario_text(MINIMAL + "search_grid_points = 256\n"))


def test_sweep_alpha_shape(small):
    result = sweep_alpha(small, np.linspace(0, 0.9, 10))
    assert result.table.shape == (10, 2)
    assert np.all(result.table >= 0)
    # signal-only ignores the forced split
    assert np.ptp(result.column(small.schemes[1])) < 1e-12
    with pytest.raises(ValueError):
        sweep_alpha(small, [0.5, 1.0])


def test_sweep_re_rejects_out_of_annulus(small):
    with pytest.raises(ValueError):
        sweep_re(small, [1.0, 4.0])
    with pytest.raises(ValueError):
        sweep_re(small, [4.0], channel="fog")


def test_csv_round_trip_and_determinism(small, tmp_path):
    result = sweep_re(small, np.linspace(3, 7, 5))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(result, a)
    emit_csv(sweep_re(small, np.linspace(3, 7, 5)), b)
    assert a.read_bytes() == b.read_bytes()
    meta, header, rows = read_csv(a)
    assert list(meta)[:2] == ["scenario", "seed"] and meta["scenario"] == small.digest
    assert header == ["r_E", "proposed", "signal_only"]
    np.testing.assert_allclose(np.array(rows, dtype=float)[:, 1:], result.table, rtol=1e-8)


def test_csv_write_failure(small, tmp_path):
    result = sweep_re(small, [4.0])
    with pytest.raises(OSError, match="cannot write"):
        emit_csv(result, tmp_path / "missing" / "x.csv")


def test_spectrum_peaks_at_focus(small):
    spec = power_spectrum(small, "signal", radii=np.linspace(3, 7, 81), angles=np.linspace(-0.01, 0.01, 21))
    assert spec.values.max() == 1.0
    assert abs(spec.peak_radius() - spec.design.qs.radius) <= 0.1
    with pytest.raises(ValueError):
        power_spectrum(small, "noise")


def test_cli_design_prints(capsys):
    assert main(["design", "--scenario", "range_map"]) == 0
    out = capsys.readouterr().out
    assert "proposed" in out and "r_S=" in out


def test_cli_sweep_with_plot(tmp_path):
    out = tmp_path / "alpha.csv"
    code = main(["sweep-alpha", "--scenario", "power_split", "--grid", "0:0.9:10",
                 "--out", str(out), "--plot"])
    assert code == 0
    assert out.exists() and out.with_suffix(".png").exists()


def test_cli_errors_exit_two(tmp_path, capsys):
    assert main(["design", "--scenario", str(tmp_path / "nope.scenario")]) == 2
    bad = tmp_path / "bad.scenario"
    bad.write_text("user_radius_m = 5\nwhat = 3\n")
    assert main(["design", "--scenario", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "bad.scenario:2:1" in err


def test_cli_validate(capsys):
    assert main(["validate", "--scenario", "range_map", "--count", "20"]) == 0
    assert "0 failed" in capsys.readouterr().out
