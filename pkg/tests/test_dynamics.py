import math

import numpy as np
import pytest

from app.atoms import bragg_bandwidth, recoil_frequency
from app.core.errors import DomainError
from app.dynamics import (
    TransitionMode,
    effective_rabi,
    effective_rabi_product,
    intermediate_detuning,
    intermediate_detuning_general,
    min_detuning,
    off_resonant_transfer,
    pulse_durations,
    resonance_frequency,
    spontaneous_loss,
    transfer_population,
    transition_frequency,
    two_photon_detuning,
    two_photon_rabi_for,
)
from app.models.pulse import BraggPulse, Envelope
from app.models.species import TWO_PI
from app.presets import TABLE_ORDERS, TABLE_PULSE_DURATIONS

DELTA_1GHZ = TWO_PI * 1e9


def _pulse(order=1, rabi=1e5, detuning=DELTA_1GHZ, duration=1e-4):
    return BraggPulse(order=order, two_photon_rabi=rabi, single_photon_detuning=detuning, duration=duration)


class TestTransitionFrequency:
    def test_bragg_is_four_recoils(self, rb87):
        assert transition_frequency("bragg", rb87) == pytest.approx(4 * recoil_frequency(rb87), rel=1e-12)
        assert transition_frequency(TransitionMode.BRAGG, rb87) / TWO_PI == pytest.approx(15.08e3, rel=1e-3)

    def test_raman_adds_hyperfine_splitting(self, rb87):
        raman = transition_frequency(TransitionMode.RAMAN, rb87)
        bragg = transition_frequency(TransitionMode.BRAGG, rb87)
        assert raman - bragg == pytest.approx(rb87.hyperfine_splitting, rel=1e-12)
        assert raman / TWO_PI == pytest.approx(6.834682610904e9 + 15.08e3, rel=1e-8)
        # five orders of magnitude lower for Bragg
        assert raman / bragg > 1e5


class TestTwoPhotonDetuning:
    def test_bragg_on_resonance(self, rb87, wr):
        assert two_photon_detuning(TransitionMode.BRAGG, 4 * wr, rb87) == pytest.approx(0.0, abs=1e-9)

    def test_raman_on_resonance(self, rb87, wr):
        omega = rb87.hyperfine_splitting + 4 * wr
        assert two_photon_detuning(TransitionMode.RAMAN, omega, rb87) == pytest.approx(0.0, abs=1e-3)

    def test_doppler_shift(self, rb87, wr):
        assert two_photon_detuning("bragg", 4 * wr, rb87, velocity=1e-3) == pytest.approx(-1.611e4, rel=1e-3)


class TestIntermediateDetuning:
    @pytest.mark.parametrize("order", [1, 2, 5, 25])
    def test_last_rung_is_resonant(self, rb87, order):
        assert intermediate_detuning(2 * order, _pulse(order=order), rb87) == 0.0

    def test_first_rung_first_order(self, rb87, wr):
        assert intermediate_detuning(1, _pulse(), rb87) == pytest.approx(DELTA_1GHZ + wr, rel=1e-15)

    def test_even_rung_second_order(self, rb87, wr):
        assert intermediate_detuning(2, _pulse(order=2), rb87) == pytest.approx(4 * wr, rel=1e-15)

    @pytest.mark.parametrize("m", [0, 3])
    def test_out_of_range(self, rb87, m):
        with pytest.raises(DomainError):
            intermediate_detuning(m, _pulse(), rb87)

    @pytest.mark.parametrize("m", range(1, 11))
    def test_general_form_reduces_at_resonance(self, rb87, wr, m):
        pulse = _pulse(order=5)
        general = intermediate_detuning_general(m, 5, DELTA_1GHZ, 20 * wr, rb87)
        assert general == pytest.approx(intermediate_detuning(m, pulse, rb87), rel=1e-12, abs=1e-6)


class TestEffectiveRabi:
    def test_first_order_is_identity(self, rb87):
        assert effective_rabi(1, 12345.678, rb87) == 12345.678

    def test_recurrence(self, rb87, wr):
        rabi = 50 * wr
        for n in range(1, 30):
            ratio = effective_rabi(n + 1, rabi, rb87) / effective_rabi(n, rabi, rb87)
            assert ratio == pytest.approx(rabi / (8 * wr * n * n), rel=1e-11)

    def test_strictly_increasing_in_rabi(self, rb87, wr):
        values = [effective_rabi(10, x * wr, rb87) for x in np.linspace(50, 200, 20)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_fifth_order_example(self, rb87, wr):
        assert effective_rabi(5, 38.7 * wr, rb87) / wr == pytest.approx(36.5, rel=1.5e-2)

    def test_tenth_order_pi_pulse(self, rb87, wr):
        omega = effective_rabi(10, 118.1 * wr, rb87)
        assert omega / wr == pytest.approx(29.9, rel=1e-2)
        assert omega * 0.105 / wr == pytest.approx(math.pi, rel=1e-2)

    @pytest.mark.parametrize("order,tau,expected", [
        (1, 0.192, 16.36),
        (5, 0.086, 38.64),
        (10, 0.105, 118.11),
        (25, 0.072, 685.6),
    ])
    def test_inverse_reproduces_published_rabi(self, rb87, wr, order, tau, expected):
        rabi = two_photon_rabi_for(order, math.pi * wr / tau, rb87)
        assert rabi / wr == pytest.approx(expected, rel=1e-2)

    @pytest.mark.parametrize("order,tau", list(zip(TABLE_ORDERS, TABLE_PULSE_DURATIONS)))
    def test_round_trip_gives_pi(self, rb87, wr, order, tau):
        rabi = two_photon_rabi_for(order, math.pi * wr / tau, rb87)
        assert effective_rabi(order, rabi, rb87) * tau / wr == pytest.approx(math.pi, rel=1e-12)

    def test_large_order_does_not_overflow(self, rb87, wr):
        assert math.isfinite(effective_rabi(60, 2000 * wr, rb87))

    @pytest.mark.parametrize("order,rabi", [(0, 1.0), (1, 0.0), (3, -1.0)])
    def test_domain(self, rb87, order, rabi):
        with pytest.raises(DomainError):
            effective_rabi(order, rabi, rb87)

    def test_product_form_close_to_closed_form(self, rb87, wr):
        rabi = 38.64 * wr
        product = effective_rabi_product(5, rabi, DELTA_1GHZ, rb87)
        assert product == pytest.approx(effective_rabi(5, rabi, rb87), rel=1e-3)


class TestPopulations:
    def test_transfer_examples(self):
        assert transfer_population(3.0, 0.0) == 0.0
        assert transfer_population(math.pi, 1.0) == pytest.approx(1.0, abs=1e-15)
        assert transfer_population(math.pi, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_transfer_bounded_and_periodic(self):
        omega = 2.7e3
        t = np.linspace(0, 0.02, 501)
        values = np.array([transfer_population(omega, x) for x in t])
        assert values.min() >= 0.0 and values.max() <= 1.0
        shifted = np.array([transfer_population(omega, x + TWO_PI / omega) for x in t])
        assert np.allclose(values, shifted, atol=1e-9)

    def test_off_resonant_reduces_to_resonant(self):
        assert off_resonant_transfer(1e4, 0.0, 2e-4) == pytest.approx(transfer_population(1e4, 2e-4), abs=1e-12)

    def test_off_resonant_far_detuned(self):
        assert off_resonant_transfer(1e4, 1e9, 2e-4) < 1e-9

    def test_off_resonant_half_envelope(self):
        omega = 1e4
        t = math.pi / (math.sqrt(2) * omega)
        assert off_resonant_transfer(omega, omega, t) == pytest.approx(0.5, abs=1e-12)

    def test_off_resonant_vectorised(self):
        values = off_resonant_transfer(1e4, np.array([0.0, 1e4, 1e9]), math.pi / 1e4)
        assert values.shape == (3,)
        assert values[0] == pytest.approx(1.0)


class TestPulseDurations:
    def test_examples(self, wr):
        assert pulse_durations(math.pi) == pytest.approx((1.0, 0.5))
        tau_pi, tau_half = pulse_durations(16.4 * wr)
        assert tau_pi * wr == pytest.approx(0.192, rel=1e-2)
        assert tau_half / tau_pi == 0.5

    def test_domain(self):
        with pytest.raises(DomainError):
            pulse_durations(0.0)


class TestSpontaneousLoss:
    def test_pi_pulse_at_one_gigahertz(self, rb87):
        loss = spontaneous_loss(_pulse(rabi=math.pi / 1e-4, duration=1e-4), rb87)
        assert loss.probability == pytest.approx(0.00952, rel=1e-3)
        assert not loss.overflow and not loss.small_detuning

    def test_short_pulse_tends_to_zero(self, rb87):
        assert spontaneous_loss(_pulse(rabi=1e4, duration=1e-15), rb87).probability < 1e-12

    def test_doubling_detuning_halves_loss(self, rb87):
        one = spontaneous_loss(_pulse(), rb87).probability
        two = spontaneous_loss(_pulse(detuning=2 * DELTA_1GHZ), rb87).probability
        assert two == pytest.approx(one / 2, rel=1e-12)

    def test_clamped_with_overflow_flag(self, rb87):
        loss = spontaneous_loss(_pulse(rabi=1e9, duration=1.0), rb87)
        assert loss.probability == 1.0
        assert loss.overflow and loss.unclamped > 1.0

    def test_small_detuning_flagged(self, rb87, wr, caplog):
        loss = spontaneous_loss(_pulse(detuning=10 * wr), rb87)
        assert loss.small_detuning
        assert "unreliable" in caplog.text


class TestMinDetuning:
    def test_pi_pulse_one_percent(self, rb87):
        assert min_detuning(math.pi, 0.01, rb87) / TWO_PI == pytest.approx(0.9519e9, rel=1e-3)

    def test_scaling(self, rb87):
        base = min_detuning(math.pi, 0.01, rb87)
        assert min_detuning(math.pi, 0.005, rb87) == pytest.approx(2 * base, rel=1e-12)
        assert min_detuning(2 * math.pi, 0.01, rb87) == pytest.approx(2 * base, rel=1e-12)

    @pytest.mark.parametrize("budget", [0.0, 1.0, -0.1])
    def test_budget_domain(self, rb87, budget):
        with pytest.raises(DomainError):
            min_detuning(math.pi, budget, rb87)


class TestResonanceFrequency:
    def test_static_orders(self, rb87):
        assert resonance_frequency(1, 0.0, rb87, 9.8) / TWO_PI == pytest.approx(15.08e3, rel=1e-3)
        assert resonance_frequency(7, 0.0, rb87, 9.8) == pytest.approx(7 * bragg_bandwidth(rb87), rel=1e-15)

    def test_slope(self, rb87):
        slope = resonance_frequency(1, 1e-3, rb87, 9.8) - resonance_frequency(1, 0.0, rb87, 9.8)
        assert slope / 1e-3 / TWO_PI == pytest.approx(25.12e6, rel=1e-3)

    def test_negative_time(self, rb87):
        with pytest.raises(DomainError):
            resonance_frequency(1, -1e-3, rb87, 9.8)


def test_gaussian_envelope_profile():
    pulse = BraggPulse(order=1, two_photon_rabi=1e4, single_photon_detuning=DELTA_1GHZ,
                       duration=1e-4, envelope=Envelope.GAUSSIAN, sigma=2e-5)
    assert pulse.rabi_at(5e-5) == pytest.approx(1e4)
    assert pulse.rabi_at(0.0) < 1e-2 * 1e4
    assert pulse.rabi_at(2e-4) == 0.0


def test_gaussian_needs_sigma():
    with pytest.raises(DomainError):
        BraggPulse(order=1, two_photon_rabi=1.0, single_photon_detuning=1.0, duration=1.0,
                   envelope=Envelope.GAUSSIAN)
