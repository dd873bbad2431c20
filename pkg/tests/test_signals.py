import math

import numpy as np
import pytest

from tcpsync.signals import (
    analytic_phase,
    dominant_frequency,
    fit_frequency,
    local_maxima,
    moving_average,
    spectral_concentration,
)


def test_dominant_frequency_pure_tone_within_one_bin():
    dt = 0.002
    n = 4000
    t = dt * np.arange(n)
    omega = 37.3
    x = 1.7 * np.sin(omega * t)
    bin_width = 2 * math.pi / (n * dt)
    assert abs(dominant_frequency(x, dt) - omega) <= bin_width


def test_dominant_frequency_flat_input():
    assert dominant_frequency(np.ones(100), 0.01) == 0.0


def test_analytic_phase_slope_recovers_frequency():
    dt = 0.001
    t = dt * np.arange(20000)
    x = np.sin(52.0 * t + 0.3)
    ph = analytic_phase(x, dt)
    # ignore the transform's edge artefacts
    k = len(ph) // 10
    assert fit_frequency(ph[k:-k], dt) == pytest.approx(52.0, rel=1e-3)


def test_spectral_concentration_separates_tone_from_noise():
    rng = np.random.default_rng(2)
    dt = 0.01
    t = dt * np.arange(8192)
    tone = np.sin(12.0 * t)
    noise = rng.standard_normal(len(t))
    assert spectral_concentration(tone, dt) > 0.8
    assert spectral_concentration(noise, dt) < 0.2


def test_moving_average_and_local_maxima():
    x = np.array([0.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0])
    idx = local_maxima(x)
    assert list(idx) == [1, 3, 5]
    sm = moving_average(np.ones(10), 4)
    assert np.allclose(sm[2:-2], 1.0)
