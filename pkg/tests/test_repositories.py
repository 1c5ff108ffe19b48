import math

import numpy as np
import pytest

from app.core.errors import PersistenceError
from app.interferometer import chirp_scan, phase_scan
from app.ladder import ladder_evolve
from app.models.pulse import BraggPulse, LadderState
from app.models.species import TWO_PI
from app.repositories.fringe_repository import FRINGE_COLUMNS, FringeCsvRepository, FringeRecordRepository
from app.repositories.report_repository import (
    ModelRecordRepository,
    ReportRecordRepository,
    ReportTextRepository,
    TableCsvRepository,
)
from app.repositories.schedule_repository import ScheduleCsvRepository
from app.repositories.trajectory_repository import TrajectoryCsvRepository
from app.requirements import evaluate_requirements
from app.schemas.records import ResonanceRecord
from app.sequencer import build_schedule
from app.services.requirements_service import RequirementsService
from app.utils import config_hash, metadata_header


@pytest.fixture
def header(typical_config):
    return metadata_header(typical_config.species.name, config_hash(typical_config), {"seed": 7})


def _assert_same_scan(a, b):
    assert a.scan_kind is b.scan_kind
    assert a.metadata == b.metadata
    assert np.array_equal(a.x, b.x)
    assert np.array_equal(a.p1, b.p1)
    assert np.array_equal(a.p2, b.p2)


def test_fringe_csv_keeps_full_precision_and_metadata(tmp_path, typical_config, header):
    scan = chirp_scan(typical_config, [50e-3], (25.0e6, 25.2e6), samples=57, contrast=0.9)[0]
    repository = FringeCsvRepository(tmp_path)
    path = repository.save(scan, "fringe", header)
    text = path.read_text()
    assert "# config_sha256: " in text
    assert ",".join(FRINGE_COLUMNS) in text
    _assert_same_scan(repository.load(path), scan)


def test_fringe_record(tmp_path, typical_config, header):
    scan = phase_scan(typical_config, 25.12e6, noise=0.01, seed=3)
    repository = FringeRecordRepository(tmp_path)
    _assert_same_scan(repository.load(repository.save(scan, "phase", header)), scan)


def test_fringe_csv_with_wrong_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# scan_kind: chirp_rate\na,b\n1,2\n")
    with pytest.raises(PersistenceError):
        FringeCsvRepository(tmp_path).load(path)


def test_missing_file(tmp_path):
    with pytest.raises(PersistenceError) as info:
        FringeRecordRepository(tmp_path).load(tmp_path / "absent.json")
    assert "absent.json" in str(info.value)


def test_report_text_and_record(tmp_path, typical_config, header):
    report = evaluate_requirements(typical_config)
    service = RequirementsService()
    text_path = ReportTextRepository(tmp_path).save(service.render(report), "requirements", header)
    assert text_path.read_text().startswith("# toolkit: ")
    assert ReportTextRepository(tmp_path).load(text_path) == service.render(report)

    records = ReportRecordRepository(tmp_path)
    assert records.load(records.save(report, "requirements", header)) == report


def test_table_csv(tmp_path, rb87, header):
    rows = RequirementsService().table(rb87)
    repository = TableCsvRepository(tmp_path)
    loaded = repository.load(repository.save(rows, "table1", header))
    assert [r.order for r in loaded] == [1, 5, 10, 15, 20, 25]
    for a, b in zip(loaded, rows):
        assert a.intensity == pytest.approx(b.intensity, rel=1e-12)
        assert a.power_bec == pytest.approx(b.power_bec, rel=1e-12)
    first_line = repository.path_for("table1").read_text().splitlines()
    assert any(line.startswith("order,pulse_duration_per_wr") for line in first_line)


def test_model_record(tmp_path, header):
    record = ResonanceRecord(chirp_rate=25.12e6, residual_variance=1e-20, aliases=[25.13e6],
                             candidates=3, gravity=9.8)
    repository = ModelRecordRepository(tmp_path, ResonanceRecord)
    assert repository.load(repository.save(record, "resonance", header)) == record


def test_trajectory_csv(tmp_path, rb87, wr, header):
    rabi = 0.2 * wr
    pulse = BraggPulse(order=1, two_photon_rabi=rabi, single_photon_detuning=TWO_PI * 1e9,
                       duration=math.pi / rabi)
    trajectory = ladder_evolve(LadderState.at_rest(-2, 2), pulse, 4 * wr, rb87, samples=21)
    repository = TrajectoryCsvRepository(tmp_path)
    loaded = repository.load(repository.save(trajectory, "ladder_trajectory", header))
    assert loaded.m_min == trajectory.m_min and loaded.m_max == trajectory.m_max
    assert loaded.steps == trajectory.steps
    assert np.array_equal(loaded.times, trajectory.times)
    assert np.allclose(loaded.amplitudes, trajectory.amplitudes, rtol=0.0, atol=1e-15)


def test_schedule_csv_is_write_only(tmp_path, typical_config, header):
    schedule = build_schedule(typical_config, math.pi / 100e-6)
    repository = ScheduleCsvRepository(tmp_path)
    path = repository.save(schedule, "schedule", header)
    assert "# order: 1" in path.read_text()
    with pytest.raises(PersistenceError):
        repository.load(path)
