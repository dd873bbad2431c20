"""Phase and frequency extraction from oscillating traces.

Limit cycles produced by the fluid and packet simulators are close to
harmonic, so instantaneous phase is taken from the analytic signal (spectral
Hilbert transform) of the mean-removed series and then unwrapped; lock
frequencies come from a straight-line fit to that phase.  Dominant
frequencies use a Hann-windowed spectrum with parabolic refinement of the
peak bin.
"""

import math

import numpy as np
from scipy.signal import hilbert


def analytic_phase(x, dt):
    """Unwrapped instantaneous phase of the mean-removed analytic signal."""
    x = np.asarray(x, dtype=float)
    return np.unwrap(np.angle(hilbert(x - x.mean())))


def fit_frequency(phase, dt):
    """Mean angular speed (rad/s) of an unwrapped phase via linear fit."""
    phase = np.asarray(phase, dtype=float)
    t = dt * np.arange(len(phase))
    slope = np.polyfit(t, phase, 1)[0]
    return float(slope)


def dominant_frequency(x, dt):
    """Dominant angular frequency (rad/s) of a series; 0 for flat input.

    Hann-windowed magnitude spectrum, DC excluded; the peak bin is refined
    parabolically when it has two interior neighbours.
    """
    x = np.asarray(x, dtype=float)
    x = x - x.mean()
    if len(x) < 4 or not np.any(x):
        return 0.0
    win = np.hanning(len(x))
    mag = np.abs(np.fft.rfft(x * win))
    if len(mag) < 3:
        return 0.0
    k = 1 + int(np.argmax(mag[1:]))
    df = 2.0 * math.pi / (len(x) * dt)
    if 1 <= k - 1 and k + 1 < len(mag) and mag[k] > 0:
        with np.errstate(divide="ignore"):
            la, lb, lc = np.log(mag[k - 1 : k + 2])
        denom = la - 2.0 * lb + lc
        if np.isfinite(denom) and denom < 0:
            k = k - 0.5 * (lc - la) / denom
    return float(k * df)


def spectral_concentration(x, dt, band=0.1):
    """Fraction of (DC-free) power within +-band around the dominant peak.

    A coherent oscillation concentrates its power in a narrow band; broadband
    fluctuation spreads it out.  Returns 0 for flat input.
    """
    x = np.asarray(x, dtype=float)
    x = x - x.mean()
    if len(x) < 8 or not np.any(x):
        return 0.0
    win = np.hanning(len(x))
    power = np.abs(np.fft.rfft(x * win)) ** 2
    power[0] = 0.0
    total = power.sum()
    if total <= 0:
        return 0.0
    k = int(np.argmax(power))
    half = max(1, int(round(band * k)))
    lo, hi = max(1, k - half), min(len(power), k + half + 1)
    return float(power[lo:hi].sum() / total)


def bandpass(x, dt, w_lo, w_hi):
    """Zero-phase band-pass by FFT masking; band edges in rad/s."""
    x = np.asarray(x, dtype=float)
    spec = np.fft.rfft(x - x.mean())
    w = 2.0 * math.pi * np.fft.rfftfreq(len(x), dt)
    spec[(w < w_lo) | (w > w_hi)] = 0.0
    return np.fft.irfft(spec, n=len(x))


def autocorr_period(x, dt, w_lo, w_hi):
    """Cycle period from the first autocorrelation peak of the band-passed
    signal, searched between the band's own period limits.  Returns
    (period_s, peak_correlation); (nan, 0) when no interior peak exists."""
    y = bandpass(x, dt, w_lo, w_hi)
    if not np.any(y):
        return float("nan"), 0.0
    ac = np.correlate(y, y, "full")[len(y) - 1 :]
    if ac[0] <= 0:
        return float("nan"), 0.0
    ac = ac / ac[0]
    lag_lo = max(1, int(2.0 * math.pi / w_hi / dt))
    lag_hi = min(len(ac) - 2, int(2.0 * math.pi / w_lo / dt))
    if lag_hi <= lag_lo:
        return float("nan"), 0.0
    seg = ac[lag_lo : lag_hi + 1]
    peaks = local_maxima(seg)
    if len(peaks) == 0:
        k = int(np.argmax(seg))
    else:
        k = int(peaks[np.argmax(seg[peaks])])
    return (lag_lo + k) * dt, float(seg[k])


def moving_average(x, n):
    """Centred moving average with window of n samples (n >= 1)."""
    x = np.asarray(x, dtype=float)
    if n <= 1:
        return x.copy()
    kernel = np.ones(n) / n
    return np.convolve(x, kernel, mode="same")


def local_maxima(x):
    """Indices of strict interior local maxima."""
    x = np.asarray(x, dtype=float)
    idx = np.nonzero((x[1:-1] > x[:-2]) & (x[1:-1] > x[2:]))[0] + 1
    return idx
