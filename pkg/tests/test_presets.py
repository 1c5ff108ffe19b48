import math
from pathlib import Path

import pytest

from app.core.errors import ConfigValidationError, PersistenceError
from app.presets import get_preset, preset_names, resolve_apparatus
from app.requirements import longitudinal_temperature_limit
from app.schemas.run_config import RunConfig, ScanType

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_preset_names():
    assert preset_names() == ["altin", "bec", "debs", "typical"]


def test_typical_preset(typical_config, rb87):
    assert typical_config.order == 1
    assert typical_config.interrogation_time == 50e-3
    assert typical_config.first_pulse_time == 20e-3
    assert typical_config.cloud.longitudinal_temperature == pytest.approx(
        0.01 * longitudinal_temperature_limit(rb87), rel=1e-12)


def test_published_presets(rb87):
    altin = get_preset("altin", rb87)
    assert (altin.order, altin.interrogation_time, altin.first_pulse_time) == (2, 40e-3, 2e-3)
    debs = get_preset("debs", rb87)
    assert (debs.order, debs.interrogation_time, debs.pi_pulse_duration) == (1, 3e-3, 50e-6)


def test_unknown_preset(rb87):
    with pytest.raises(ConfigValidationError) as info:
        get_preset("nope", rb87)
    assert info.value.field == "preset"


def test_overrides_on_top_of_preset():
    run = RunConfig.from_mapping({
        "preset": "bec",
        "apparatus": {"order": 5, "detuning_ghz": 2.0, "cloud": {"initial_radius": 1e-3}},
    })
    config = resolve_apparatus(run)
    assert config.order == 5
    assert config.detuning == pytest.approx(2 * math.pi * 2e9)
    assert config.cloud.initial_radius == 1e-3
    assert config.cloud.transverse_temperature == 0.36e-6
    assert config.beam_diameter == 3.46e-3


def test_yaml_run_configs():
    chirp = RunConfig.from_yaml(CONFIGS / "chirp_scan.yaml")
    assert chirp.scan.kind is ScanType.CHIRP
    assert chirp.scan.interrogation_times == [0.040, 0.050, 0.060]
    assert chirp.output.seed == 7
    altin = resolve_apparatus(RunConfig.from_yaml(CONFIGS / "altin_sequence.yaml"))
    assert altin.order == 2


def test_run_config_errors(tmp_path):
    with pytest.raises(PersistenceError):
        RunConfig.from_yaml(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("scan:\n  alpha_min: 2.0\n  alpha_max: 1.0\n")
    with pytest.raises(ConfigValidationError):
        RunConfig.from_yaml(bad)
    with pytest.raises(ConfigValidationError) as info:
        RunConfig.from_mapping({"apparatus": {"beam_diameter": -1}})
    assert info.value.field == "apparatus.beam_diameter"


def test_alpha_range_defaults():
    run = RunConfig.from_mapping({"scan": {"alpha_min": 1.0}})
    assert run.alpha_range(10.0, 4.0) == (1.0, 14.0)
