"""
Numerical momentum-ladder model of a Bragg pulse.

The excited state is adiabatically eliminated, leaving the ground-state rungs
|g, 2mħk> coupled to their neighbours by Ω₂(t)/2:

    i dc_m/dt = [4m²ω_r + 2mk·v(t) − m·ω_eff(t)] c_m + Ω₂(t)/2 (c_(m−1) + c_(m+1))

in the frame co-moving with the lattice. The Hamiltonian is real symmetric and
tridiagonal, so each step applies an exact exponential of the midpoint
Hamiltonian; the norm is conserved to rounding. Step size is controlled by
step doubling.
"""
from __future__ import annotations

import logging
import math
from typing import Callable, Optional, Union

import numpy as np
import pandas as pd
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import curve_fit

from app.atoms import recoil_frequency
from app.core.config import settings
from app.core.errors import FitError, IntegrationError
from app.models.pulse import BraggPulse, LadderState, LadderTrajectory
from app.models.species import AtomSpecies

logger = logging.getLogger(__name__)

FrequencyProfile = Union[float, Callable[[float], float]]

_WIDEN_BY = 2


def _as_profile(value: FrequencyProfile) -> Callable[[float], float]:
    if callable(value):
        return value
    constant = float(value)
    return lambda t: constant


class LadderPropagator:
    """Midpoint-exponential propagator on a fixed ladder m_min..m_max."""

    def __init__(
        self,
        m_min: int,
        m_max: int,
        species: AtomSpecies,
        rabi: Callable[[float], float],
        omega_eff: Callable[[float], float],
        velocity: float = 0.0,
        gravity: float = 0.0,
    ):
        self.m = np.arange(m_min, m_max + 1, dtype=float)
        self.wr = recoil_frequency(species)
        self.k = species.wavenumber
        self.rabi = rabi
        self.omega_eff = omega_eff
        self.velocity = velocity
        self.gravity = gravity

    def hamiltonian(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal and off-diagonal of H(t) [rad/s]."""
        v = self.velocity + self.gravity * t
        diagonal = 4.0 * self.m ** 2 * self.wr + 2.0 * self.m * self.k * v - self.m * self.omega_eff(t)
        coupling = np.full(len(self.m) - 1, 0.5 * self.rabi(t))
        return diagonal, coupling

    def step(self, state: np.ndarray, t: float, dt: float) -> np.ndarray:
        diagonal, coupling = self.hamiltonian(t + 0.5 * dt)
        if len(diagonal) == 1:
            return state * np.exp(-1j * diagonal[0] * dt)
        if not np.any(coupling):
            return state * np.exp(-1j * diagonal * dt)
        eigenvalues, vectors = eigh_tridiagonal(diagonal, coupling)
        return vectors @ (np.exp(-1j * eigenvalues * dt) * (vectors.T @ state))


def _integrate(
    propagator: LadderPropagator,
    initial: np.ndarray,
    times: np.ndarray,
    tolerance: float,
    max_steps: int,
) -> tuple[np.ndarray, int]:
    samples = np.empty((len(times), len(initial)), dtype=complex)
    samples[0] = initial
    state = initial.copy()
    t = float(times[0])
    span = float(times[-1] - times[0])
    dt = span / max(len(times) - 1, 1)
    min_dt = span * 1e-14
    steps = 0
    for i in range(1, len(times)):
        target = float(times[i])
        while t < target:
            reaches_target = dt >= target - t
            if reaches_target:
                dt = target - t
            full = propagator.step(state, t, dt)
            half = propagator.step(propagator.step(state, t, 0.5 * dt), t + 0.5 * dt, 0.5 * dt)
            error = float(np.max(np.abs(full - half)))
            steps += 1
            if steps > max_steps:
                raise IntegrationError(
                    "ladder integration exceeded the step budget",
                    {"t": t, "dt": dt, "steps": steps, "error": error},
                )
            if error <= tolerance:
                state = half
                t = target if reaches_target else t + dt
                growth = 2.0 if error == 0 else min(2.0, 0.9 * (tolerance / error) ** (1.0 / 3.0))
                dt = max(dt * growth, dt)
            else:
                dt *= max(0.1, 0.9 * (tolerance / error) ** (1.0 / 3.0))
                if dt < min_dt:
                    raise IntegrationError(
                        "ladder step size underflow",
                        {"t": t, "dt": dt, "steps": steps, "error": error},
                    )
        samples[i] = state
    return samples, steps


def ladder_evolve(
    initial: LadderState,
    pulse: BraggPulse,
    omega_eff: FrequencyProfile,
    species: AtomSpecies,
    *,
    samples: int = 201,
    velocity: float = 0.0,
    gravity: float = 0.0,
    rabi: Optional[Callable[[float], float]] = None,
    auto_widen: bool = True,
    tolerance: Optional[float] = None,
) -> LadderTrajectory:
    """Integrate the ladder over the pulse and return the sampled trajectory.

    `omega_eff` is a constant or a function of the time since the pulse
    started. `rabi` overrides the pulse envelope Ω₂(t). With `auto_widen`,
    the ladder grows whenever an edge rung exceeds the edge-population limit.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    tolerance = tolerance or settings.ladder_step_tolerance
    rabi_profile = rabi or pulse.rabi_at
    frequency = _as_profile(omega_eff)
    times = np.linspace(0.0, pulse.duration, samples)
    state = initial

    while True:
        propagator = LadderPropagator(
            state.m_min, state.m_max, species, rabi_profile, frequency, velocity, gravity
        )
        amplitudes, steps = _integrate(
            propagator, state.amplitudes, times, tolerance, settings.ladder_max_steps
        )
        populations = np.abs(amplitudes) ** 2
        edge = float(max(populations[:, 0].max(), populations[:, -1].max()))
        if not auto_widen or edge < settings.ladder_edge_population:
            break
        half_width = max(-state.m_min, state.m_max) + _WIDEN_BY
        if half_width > settings.ladder_max_half_width:
            raise IntegrationError(
                "momentum ladder saturated at its maximum width",
                {"m_min": state.m_min, "m_max": state.m_max, "edge_population": edge},
            )
        logger.debug("edge population %.3g; widening ladder to ±%d", edge, half_width)
        state = state.widened(_WIDEN_BY)

    norms = np.sum(populations, axis=1)
    norm_error = float(np.max(np.abs(norms - norms[0])))
    if norm_error > settings.ladder_norm_tolerance:
        raise IntegrationError(
            "norm not conserved",
            {"norm_error": norm_error, "steps": steps, "m_min": state.m_min, "m_max": state.m_max},
        )
    logger.debug("ladder %d..%d integrated in %d steps, norm error %.2e",
                 state.m_min, state.m_max, steps, norm_error)
    return LadderTrajectory(
        times=times + initial.time,
        amplitudes=amplitudes,
        m_min=state.m_min,
        max_norm_error=norm_error,
        steps=steps,
    )


def _rabi_model(t: np.ndarray, amplitude: float, frequency: float) -> np.ndarray:
    return 0.5 * amplitude * (1.0 - np.cos(frequency * t))


def fit_rabi_frequency(trajectory: LadderTrajectory, m: int) -> tuple[float, float]:
    """Fit a/2·(1 − cos Ωt) to the population of rung m; returns (Ω, a)."""
    t = trajectory.times - trajectory.times[0]
    population = trajectory.population(m)
    peak = int(np.argmax(population))
    if peak == 0 or population[peak] <= 0:
        raise FitError("rung never populated; cannot estimate a Rabi frequency",
                       residuals=population.tolist())
    guess = (2.0 * population[peak], math.pi / t[peak])
    try:
        params, _ = curve_fit(_rabi_model, t, population, p0=guess, maxfev=10000)
    except RuntimeError as e:
        raise FitError(f"Rabi fit did not converge: {e}",
                       residuals=(population - _rabi_model(t, *guess)).tolist()) from e
    amplitude, frequency = params
    return abs(float(frequency)), float(amplitude)


TRAJECTORY_COLUMNS = ["t", "m", "re_c", "im_c", "population"]


def trajectory_frame(trajectory: LadderTrajectory) -> pd.DataFrame:
    """Long-format table: one row per (sample time, rung)."""
    times = np.repeat(trajectory.times, trajectory.amplitudes.shape[1])
    rungs = np.tile(np.arange(trajectory.m_min, trajectory.m_max + 1), len(trajectory.times))
    amplitudes = trajectory.amplitudes.ravel()
    return pd.DataFrame(
        {
            "t": times,
            "m": rungs,
            "re_c": amplitudes.real,
            "im_c": amplitudes.imag,
            "population": np.abs(amplitudes) ** 2,
        },
        columns=TRAJECTORY_COLUMNS,
    )
