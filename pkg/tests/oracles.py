"""Independent oracles used by the test suite.

Everything here is deliberately written from first principles, separate from
the package's own numerics: plain bisection, brute-force grid searches, an
argument-principle root counter for delay characteristic functions, and
symbolic differentiation.  Tests compare package results against these.
"""

import cmath
import math

import numpy as np


def plain_bisect(f, lo, hi, iters=200):
    """Textbook bisection; assumes a sign change on [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    assert flo * fhi <= 0, "oracle bisection needs a bracketing interval"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def symbolic_g(variant, w_value, p_value, params):
    """g = (w d'/d - w i'/i) * d/(i+d) via sympy, with d/(i+d) -> (1-p)."""
    import sympy as sp

    w = sp.Symbol("w", positive=True)
    if variant == "compound":
        i = params["alpha"] * w ** (params["k"] - 1)
        d = params["beta"] * w
    elif variant == "reno":
        i = 1 / w
        d = w / 2
    else:
        i = params["alpha_max"] / w
        d = params["beta_min"] * w
    elas = w * sp.diff(d, w) / d - w * sp.diff(i, w) / i
    expr = elas * (1 - sp.Symbol("p"))
    val = expr.subs({w: w_value, sp.Symbol("p"): p_value})
    return float(val)


def char_function(a, c, tau):
    """Characteristic function of u' = -a u - c u(t - tau)."""

    def f(lam):
        return lam + a + c * cmath.exp(-lam * tau)

    return f


def count_rhp_roots(a, c, tau, radius=None, n_pts=40000):
    """Number of zeros of the characteristic function with Re(lambda) > 0.

    Winding number of f over a D-shaped contour (imaginary axis segment
    closed by a right half-circle), computed by tracking the continuous
    argument.  The radius default encloses every possible RHP root, which
    satisfies |lambda| <= a + c (since Re >= 0 implies |e^{-lam tau}| <= 1).
    """
    f = char_function(a, c, tau)
    if radius is None:
        radius = 2.0 * (a + c) + 1.0
    pts = []
    ts = np.linspace(radius, -radius, n_pts)
    pts.extend(complex(1e-9, t) for t in ts)  # down the (shifted) imaginary axis
    angles = np.linspace(-math.pi / 2, math.pi / 2, n_pts)
    pts.extend(radius * complex(math.cos(an), math.sin(an)) for an in angles)
    vals = [f(z) for z in pts]
    total = 0.0
    prev = cmath.phase(vals[0])
    for v in vals[1:]:
        cur = cmath.phase(v)
        d = cur - prev
        while d > math.pi:
            d -= 2 * math.pi
        while d < -math.pi:
            d += 2 * math.pi
        total += d
        prev = cur
    # close the contour back to the start
    d = cmath.phase(vals[0]) - prev
    while d > math.pi:
        d -= 2 * math.pi
    while d < -math.pi:
        d += 2 * math.pi
    total += d
    return int(round(total / (2 * math.pi)))


def rightmost_crossing_frequency(a, c, tau, omega_hi=None, n=200001):
    """Imaginary parts where the characteristic function nearly vanishes on
    the imaginary axis (for marginal cases); brute scan refinement."""
    f = char_function(a, c, tau)
    if omega_hi is None:
        omega_hi = 2.0 * (a + c) + 1.0
    omegas = np.linspace(0.0, omega_hi, n)
    mags = np.array([abs(f(1j * om)) for om in omegas])
    k = int(np.argmin(mags))
    return omegas[k]


def brute_sync_roots(omega1, omega2, d_gain, s_gain, tau, omega_max, n_om=2500, n_ph=1500):
    """Brute-force locked-state search for the two-oscillator pair.

    Marching-squares style: a grid cell is a root candidate when both
    steady-state relations change sign across it (both zero-level curves pass
    through).  Candidates are clustered and refined by a local 2-D Newton so
    each returned (Omega, phi0) is an actual intersection, independent of the
    package's branch-following solver.
    """
    om = np.linspace(1e-6, omega_max, n_om)
    ph = np.linspace(-math.pi, math.pi, n_ph)
    omg, phg = np.meshgrid(om, ph, indexing="ij")
    ot = omg * tau
    f1 = omega1 + d_gain * np.sin(ot) + s_gain * np.sin(ot + phg) - omg
    f2 = omega2 + d_gain * np.sin(ot) + s_gain * np.sin(ot - phg) - omg

    def straddles(f):
        blocks = np.stack([f[:-1, :-1], f[1:, :-1], f[:-1, 1:], f[1:, 1:]])
        return (blocks.min(axis=0) < 0) & (blocks.max(axis=0) > 0)

    cand = np.argwhere(straddles(f1) & straddles(f2))

    def residuals(o, p):
        t = o * tau
        return (
            omega1 + d_gain * math.sin(t) + s_gain * math.sin(t + p) - o,
            omega2 + d_gain * math.sin(t) + s_gain * math.sin(t - p) - o,
        )

    roots = []
    for i, j in cand:
        o, p = 0.5 * (om[i] + om[i + 1]), 0.5 * (ph[j] + ph[j + 1])
        ok = True
        for _ in range(80):
            g1, g2 = residuals(o, p)
            if abs(g1) + abs(g2) < 1e-11 * max(1.0, abs(o)):
                break
            t = o * tau
            j11 = d_gain * tau * math.cos(t) + s_gain * tau * math.cos(t + p) - 1.0
            j12 = s_gain * math.cos(t + p)
            j21 = d_gain * tau * math.cos(t) + s_gain * tau * math.cos(t - p) - 1.0
            j22 = -s_gain * math.cos(t - p)
            det = j11 * j22 - j12 * j21
            if det == 0.0:
                ok = False
                break
            o -= (g1 * j22 - g2 * j12) / det
            p -= (j11 * g2 - j21 * g1) / det
        else:
            ok = False
        # keep only refinements that stayed near their seed cell
        if not ok or abs(o - om[i]) > 4 * (om[1] - om[0]) or o <= 0 or o > omega_max:
            continue
        p = (p + math.pi) % (2 * math.pi) - math.pi
        if p == -math.pi:
            p = math.pi
        if not any(abs(o - ro) < 1e-6 * (1 + abs(ro)) and abs(p - rp) < 1e-5 for ro, rp in roots):
            roots.append((o, p))
    roots.sort()
    return roots


def aimd_sawtooth_period(capacity, buffer_pkts, base_rtt):
    """Deterministic single-flow additive-increase/halving cycle oracle.

    The window grows by one packet per round-trip (round-trip includes the
    queueing delay once the pipe is full) until capacity*rtt + buffer
    overflows, then halves.  Returns (period_seconds, w_max_packets).
    """
    bdp = capacity * base_rtt
    w_max = bdp + buffer_pkts + 1.0
    w = w_max / 2.0
    t = 0.0
    while w < w_max:
        q = max(0.0, w - bdp)
        rtt = base_rtt + q / capacity
        t += rtt
        w += 1.0
    return t, w_max
