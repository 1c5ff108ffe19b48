import math

import numpy as np
import pytest

from app.atoms import resonant_chirp_rate
from app.core.errors import DomainError, FitError, ResonanceNotFoundError
from app.interferometer import (
    chirp_scan,
    find_resonant_chirp,
    gravity_from_chirp,
    gravity_resolution,
    interferometer_phase,
    output_populations,
    phase_scan,
    phase_scan_fit,
    refine_gravity,
    scale_factor,
    thermal_contrast,
)
from app.models.apparatus import CloudSpec
from app.models.fringe import FringeScan, ScanKind
from app.requirements import longitudinal_temperature_limit

T_VALUES = [40e-3, 50e-3, 60e-3]


def _alpha_window(rb87, g=9.8, half=4e3):
    centre = resonant_chirp_rate(rb87, g)
    return centre - half, centre + half


class TestPhaseAndPopulations:
    def test_phase_vanishes_at_resonant_chirp(self, rb87):
        alpha0 = resonant_chirp_rate(rb87, 9.8)
        for T in T_VALUES:
            assert interferometer_phase(1, rb87, 9.8, alpha0, T) == pytest.approx(0.0, abs=1e-6)

    def test_phase_linear_in_order(self, rb87):
        one = interferometer_phase(1, rb87, 9.8, 25.0e6, 50e-3)
        assert interferometer_phase(5, rb87, 9.8, 25.0e6, 50e-3) == pytest.approx(5 * one, rel=1e-12)

    def test_phase_offset_added(self, rb87):
        alpha0 = resonant_chirp_rate(rb87, 9.8)
        assert interferometer_phase(1, rb87, 9.8, alpha0, 50e-3, 0.3) == pytest.approx(0.3, abs=1e-6)

    def test_phase_needs_positive_time(self, rb87):
        with pytest.raises(DomainError):
            interferometer_phase(1, rb87, 9.8, 25e6, 0.0)

    def test_populations(self):
        assert output_populations(0.0) == (1.0, 0.0)
        p1, p2 = output_populations(math.pi / 2)
        assert p1 == pytest.approx(0.5) and p2 == pytest.approx(0.5)
        p1, p2 = output_populations(np.linspace(0, 10, 50), contrast=0.7)
        assert np.allclose(p1 + p2, 1.0)
        assert p1.min() >= 0.15 - 1e-12 and p1.max() <= 0.85 + 1e-12

    @pytest.mark.parametrize("contrast", [0.0, 0.37, 1.0])
    def test_populations_conserved_over_random_phases(self, contrast):
        rng = np.random.default_rng(10)
        p1, p2 = output_populations(rng.uniform(-1e3, 1e3, 10_000), contrast=contrast)
        assert np.max(np.abs(p1 + p2 - 1.0)) <= 1e-12
        assert p1.min() >= 0.0 and p2.min() >= 0.0

    def test_doubling_interrogation_time_quadruples_phase(self, rb87):
        alpha = resonant_chirp_rate(rb87, 9.8) + 7.5
        for n in (1, 3):
            short = interferometer_phase(n, rb87, 9.8, alpha, 25e-3)
            assert interferometer_phase(n, rb87, 9.8, alpha, 50e-3) == pytest.approx(4 * short, rel=1e-9)

    @pytest.mark.parametrize("contrast", [-0.1, 1.1])
    def test_contrast_domain(self, contrast):
        with pytest.raises(DomainError):
            output_populations(0.0, contrast)


class TestGravityFromChirp:
    def test_published_chirp(self, rb87):
        assert gravity_from_chirp(25.09e6, rb87) == pytest.approx(9.788, rel=1e-3)

    def test_inverse_of_resonant_chirp(self, rb87):
        assert gravity_from_chirp(resonant_chirp_rate(rb87, 9.80665), rb87) == pytest.approx(9.80665, rel=1e-14)

    def test_domain(self, rb87):
        with pytest.raises(DomainError):
            gravity_from_chirp(0.0, rb87)

    def test_scale_factor_and_resolution(self, rb87):
        assert scale_factor(5, rb87, 50e-3) == pytest.approx(5 * scale_factor(1, rb87, 50e-3), rel=1e-12)
        assert gravity_resolution(1e-3, 1, rb87, 50e-3) == pytest.approx(
            1e-3 / (2 * rb87.wavenumber * 2.5e-3), rel=1e-12)
        assert gravity_resolution(1e-3, 10, rb87, 50e-3) == pytest.approx(
            gravity_resolution(1e-3, 1, rb87, 50e-3) / 10, rel=1e-12)


class TestChirpScan:
    def test_scan_shape_and_metadata(self, typical_config, rb87):
        scans = chirp_scan(typical_config, T_VALUES, _alpha_window(rb87), samples=101)
        assert len(scans) == 3
        for scan, T in zip(scans, T_VALUES):
            assert scan.scan_kind is ScanKind.CHIRP_RATE
            assert len(scan) == 101
            assert scan.metadata.interrogation_time == T
            assert scan.metadata.g_true == 9.8
            assert np.allclose(scan.p1 + scan.p2, 1.0)

    def test_common_maximum_at_resonance(self, typical_config, rb87):
        scans = chirp_scan(typical_config, T_VALUES, _alpha_window(rb87), samples=4001)
        centre = 2000
        assert all(scan.p1[centre] == pytest.approx(1.0, abs=1e-6) for scan in scans)

    def test_domain(self, typical_config, rb87):
        with pytest.raises(DomainError):
            chirp_scan(typical_config, [], _alpha_window(rb87))
        lo, hi = _alpha_window(rb87)
        with pytest.raises(DomainError):
            chirp_scan(typical_config, T_VALUES, (hi, lo))


class TestFindResonantChirp:
    @pytest.mark.parametrize("g", [9.8, 9.7882, 9.81])
    def test_recovers_gravity(self, typical_config, rb87, g):
        config = typical_config.with_updates(gravity=g)
        scans = chirp_scan(config, T_VALUES, _alpha_window(rb87, g), samples=4001)
        result = find_resonant_chirp(scans)
        assert result.chirp_rate == pytest.approx(resonant_chirp_rate(rb87, g), abs=1e-2)
        assert gravity_from_chirp(result.chirp_rate, rb87) == pytest.approx(g, rel=1e-9)
        assert result.aliases == []

    def test_offset_window_still_finds_resonance(self, typical_config, rb87):
        lo, hi = _alpha_window(rb87)
        scans = chirp_scan(typical_config, T_VALUES, (lo + 1.3e3, hi + 1.3e3), samples=4001)
        result = find_resonant_chirp(scans)
        assert result.chirp_rate == pytest.approx(resonant_chirp_rate(rb87, 9.8), abs=1e-2)

    def test_wide_scan_reports_aliases(self, typical_config, rb87):
        scans = chirp_scan(typical_config, T_VALUES, _alpha_window(rb87, half=12e3), samples=12001)
        result = find_resonant_chirp(scans)
        assert result.aliases
        alpha0 = resonant_chirp_rate(rb87, 9.8)
        candidates = [result.chirp_rate, *result.aliases]
        assert min(abs(a - alpha0) for a in candidates) < 1e-2

    def test_single_interrogation_time_is_ambiguous(self, typical_config, rb87):
        scans = chirp_scan(typical_config, [50e-3, 50e-3], _alpha_window(rb87), samples=401)
        with pytest.raises(ResonanceNotFoundError):
            find_resonant_chirp(scans)

    def test_needs_two_scans(self, typical_config, rb87):
        scans = chirp_scan(typical_config, [50e-3], _alpha_window(rb87), samples=401)
        with pytest.raises(DomainError):
            find_resonant_chirp(scans)

    def test_grids_must_match(self, typical_config, rb87):
        lo, hi = _alpha_window(rb87)
        a = chirp_scan(typical_config, [40e-3], (lo, hi), samples=401)
        b = chirp_scan(typical_config, [50e-3], (lo, hi), samples=403)
        with pytest.raises(DomainError):
            find_resonant_chirp(a + b)

    def test_flat_fringes_have_no_common_extremum(self, typical_config, rb87):
        x = np.linspace(*_alpha_window(rb87), 201)
        scans = [
            FringeScan(ScanKind.CHIRP_RATE, x, np.full_like(x, 0.5), np.full_like(x, 0.5), s.metadata)
            for s in chirp_scan(typical_config, [40e-3, 60e-3], _alpha_window(rb87), samples=201)
        ]
        with pytest.raises(ResonanceNotFoundError):
            find_resonant_chirp(scans)


class TestPhaseScanFit:
    def test_noiseless_fit_is_exact(self, typical_config, rb87):
        alpha = resonant_chirp_rate(rb87, 9.8) + 3.0
        scan = phase_scan(typical_config, alpha, contrast=0.8)
        fit = phase_scan_fit(scan)
        expected_phase = interferometer_phase(1, rb87, 9.8, alpha, 50e-3)
        assert fit.contrast == pytest.approx(0.8, abs=1e-9)
        assert fit.offset == pytest.approx(0.5, abs=1e-9)
        assert fit.phase == pytest.approx(expected_phase, abs=1e-9)
        assert fit.residual_rms < 1e-9

    @pytest.mark.parametrize("contrast", [1.0, 0.8])
    def test_noiseless_fit_at_resonant_chirp(self, typical_config, rb87, contrast):
        scan = phase_scan(typical_config, resonant_chirp_rate(rb87, 9.8), contrast=contrast)
        fit = phase_scan_fit(scan)
        assert fit.contrast == pytest.approx(contrast, abs=1e-9)
        assert fit.phase == pytest.approx(0.0, abs=1e-6)
        assert fit.residual_rms < 1e-12
        assert max(fit.amplitude_error, fit.offset_error, fit.phase_error) < 1e-12

    def test_refined_gravity(self, typical_config, rb87):
        alpha = resonant_chirp_rate(rb87, 9.8) - 2.0
        fit = phase_scan_fit(phase_scan(typical_config, alpha))
        assert refine_gravity(fit, alpha, 1, 50e-3, rb87) == pytest.approx(9.8, rel=1e-12)

    def test_phase_wrapped(self, typical_config, rb87):
        scan = phase_scan(typical_config, resonant_chirp_rate(rb87, 9.8), phases=np.linspace(0, 2 * np.pi, 64, endpoint=False) + 3.0)
        fit = phase_scan_fit(scan)
        assert -math.pi < fit.phase <= math.pi

    def test_noise_is_seeded(self, typical_config, rb87):
        alpha = resonant_chirp_rate(rb87, 9.8)
        a = phase_scan(typical_config, alpha, noise=0.02, seed=11)
        b = phase_scan(typical_config, alpha, noise=0.02, seed=11)
        c = phase_scan(typical_config, alpha, noise=0.02, seed=12)
        assert np.array_equal(a.p1, b.p1)
        assert not np.array_equal(a.p1, c.p1)
        assert a.metadata.seed == 11

    def test_error_bars_cover_truth(self, typical_config, rb87):
        alpha = resonant_chirp_rate(rb87, 9.8) + 1.0
        truth = interferometer_phase(1, rb87, 9.8, alpha, 50e-3)
        seeds = np.random.SeedSequence(2016).generate_state(1000)
        covered = 0
        for seed in seeds:
            fit = phase_scan_fit(phase_scan(typical_config, alpha, contrast=0.9, noise=0.01, seed=int(seed)))
            covered += abs(fit.phase - truth) <= 2 * fit.phase_error
        assert 0.93 <= covered / len(seeds) <= 0.97

    def test_flat_fringe_has_no_phase(self, typical_config, rb87):
        scan = phase_scan(typical_config, resonant_chirp_rate(rb87, 9.8))
        flat = FringeScan(ScanKind.LASER_PHASE, scan.x, np.full_like(scan.x, 0.5), np.full_like(scan.x, 0.5), scan.metadata)
        with pytest.raises(FitError):
            phase_scan_fit(flat)

    def test_too_few_points(self, typical_config, rb87):
        scan = phase_scan(typical_config, 25e6, phases=np.linspace(0, 2 * np.pi, 4, endpoint=False))
        with pytest.raises(DomainError):
            phase_scan_fit(scan)

    def test_must_span_a_period(self, typical_config, rb87):
        scan = phase_scan(typical_config, 25e6, phases=np.linspace(0, np.pi, 20))
        with pytest.raises(DomainError):
            phase_scan_fit(scan)


class TestClosedLoop:
    @pytest.mark.parametrize("contrast", [1.0, 0.5])
    def test_chirp_then_phase_recovers_gravity(self, typical_config, rb87, contrast):
        g = 9.7953
        config = typical_config.with_updates(gravity=g)
        lo, hi = _alpha_window(rb87, g)
        scans = chirp_scan(config, T_VALUES, (lo + 0.7, hi + 0.7), samples=4001, contrast=contrast)
        alpha0 = find_resonant_chirp(scans).chirp_rate
        fit = phase_scan_fit(phase_scan(config, alpha0, contrast=contrast))
        refined = refine_gravity(fit, alpha0, config.order, config.interrogation_time, rb87)
        assert gravity_from_chirp(alpha0, rb87) == pytest.approx(g, rel=1e-8)
        assert refined == pytest.approx(g, rel=1e-12)


class TestThermalContrast:
    def test_cold_cloud_keeps_full_contrast(self, typical_config):
        cold = typical_config.with_updates(
            cloud=CloudSpec(1.5e-3, 5e-6, 1e-12))
        estimate = thermal_contrast(cold, n_atoms=20000, seed=3)
        assert estimate.contrast > 0.999
        splitter, mirror, _ = estimate.transfer_efficiencies
        assert splitter == pytest.approx(0.5, abs=1e-3)
        assert mirror == pytest.approx(1.0, abs=1e-3)

    def test_hot_cloud_loses_contrast(self, typical_config, rb87):
        hot = typical_config.with_updates(
            cloud=CloudSpec(1.5e-3, 5e-6, longitudinal_temperature_limit(rb87)))
        assert thermal_contrast(hot, n_atoms=20000, seed=3).contrast < 0.5

    def test_contrast_decreases_with_temperature(self, typical_config, rb87):
        limit = longitudinal_temperature_limit(rb87)
        values = [
            thermal_contrast(typical_config.with_updates(
                cloud=CloudSpec(1.5e-3, 5e-6, f * limit)), n_atoms=20000, seed=5).contrast
            for f in (1e-4, 1e-3, 1e-2, 1e-1)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_reproducible_for_a_seed(self, typical_config):
        a = thermal_contrast(typical_config, n_atoms=5000, seed=42)
        b = thermal_contrast(typical_config, n_atoms=5000, seed=42)
        assert a == b
        assert a.seed == 42 and a.n_atoms == 5000

    def test_needs_atoms(self, typical_config):
        with pytest.raises(DomainError):
            thermal_contrast(typical_config, n_atoms=0)
