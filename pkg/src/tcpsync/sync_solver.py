"""Synchronised states of two delay-coupled TCP limit-cycle oscillators.

The linearised coupled dynamics reduce to two phase oscillators whose
locked states (common frequency Omega, constant phase difference phi0,
with set 1 leading: theta1 = Omega*t, theta2 = Omega*t - phi0) satisfy the
steady-state pair

    Omega = omega_1 + D sin(Omega tau) + S sin(Omega tau + phi0)
    Omega = omega_2 + D sin(Omega tau) + S sin(Omega tau - phi0)

where the gains depend on the buffer regime:

    small buffers:        S = K_s B/(2 n_c),  D = K_s (B/(2 n_c) - b/n_e)
    intermediate buffers: S = K_i,            D = K_i.

Differencing the pair gives the phase-balance relation
2 S sin(phi0) cos(Omega tau) = omega_2 - omega_1, which is how the solver
parameterises phi0 while scanning Omega.  Solving the pair (rather than the
averaged relation) keeps the exact exchange symmetry: swapping omega_1 and
omega_2 negates phi0 and preserves Omega.

A locked state is locally stable iff

    small buffers:        K_s (B/n_c - b/n_e) cos(Omega tau) < 0
    intermediate buffers: 2 K_i cos(Omega tau) < 0

(strict; equality is reported as marginal, not stable).  An empty root list
is a valid answer: below the critical coupling no locked state exists.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .loss_models import INTERMEDIATE, SMALL_BUFFER

#: number of points in the frequency scan grid
SCAN_POINTS = 10_000
#: tolerance on the polished steady-state pair, relative to the frequency scale
POLISH_RTOL = 1e-13
#: polished roots worse than this (relative) are discarded as spurious
ACCEPT_RTOL = 1e-9

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SyncProblem:
    """Inputs of a synchronisation problem.

    Intrinsic frequencies must be weakly detuned (the reduction assumes the
    two round-trip times are nearly equal, with ``tau`` their common value).
    Small-buffer problems also carry the core/edge buffer-per-batch ratios.
    """

    omega1: float
    omega2: float
    K: float
    tau: float
    regime: str
    B: float = None
    b: float = None
    n_c: float = 1.0
    n_e: float = 1.0

    def gains(self):
        """(D, S): net self-interaction and cross-interaction gains."""
        if self.regime == SMALL_BUFFER:
            if self.B is None or self.b is None:
                raise ValueError("small-buffer sync problem needs B and b")
            s = self.K * self.B / (2.0 * self.n_c)
            d = self.K * (self.B / (2.0 * self.n_c) - self.b / self.n_e)
            return d, s
        if self.regime == INTERMEDIATE:
            return self.K, self.K
        raise ValueError(f"unknown buffer regime {self.regime!r}")

    def stability_factor(self, Omega):
        if self.regime == SMALL_BUFFER:
            gain = self.K * (self.B / self.n_c - self.b / self.n_e)
        else:
            gain = 2.0 * self.K
        return gain * math.cos(Omega * self.tau)


@dataclass(frozen=True)
class SyncState:
    """One locked state.  ``order_r`` is the phase coherence cos(phi0/2)."""

    Omega: float
    phi0: float
    stable: bool
    marginal: bool
    residual_freq: float
    residual_phase: float
    order_r: float


def _wrap(angle):
    """Wrap to (-pi, pi]."""
    a = (angle + math.pi) % TWO_PI - math.pi
    return math.pi if a == -math.pi else a


def _pair_residuals(problem, Omega, phi):
    d, s = problem.gains()
    ot = Omega * problem.tau
    f1 = problem.omega1 + d * math.sin(ot) + s * math.sin(ot + phi) - Omega
    f2 = problem.omega2 + d * math.sin(ot) + s * math.sin(ot - phi) - Omega
    return f1, f2


def _newton_polish(problem, Omega, phi, scale):
    d, s = problem.gains()
    tau = problem.tau
    for _ in range(60):
        f1, f2 = _pair_residuals(problem, Omega, phi)
        err = max(abs(f1), abs(f2))
        if err <= POLISH_RTOL * scale:
            break
        ot = Omega * tau
        c, cp, cm = math.cos(ot), math.cos(ot + phi), math.cos(ot - phi)
        j11 = d * tau * c + s * tau * cp - 1.0
        j12 = s * cp
        j21 = d * tau * c + s * tau * cm - 1.0
        j22 = -s * cm
        det = j11 * j22 - j12 * j21
        if det == 0.0:
            return None
        d_om = (f1 * j22 - f2 * j12) / det
        d_ph = (j11 * f2 - j21 * f1) / det
        # damped step: halve until the residual does not grow
        step = 1.0
        for _ in range(25):
            om_n, ph_n = Omega - step * d_om, phi - step * d_ph
            g1, g2 = _pair_residuals(problem, om_n, ph_n)
            if max(abs(g1), abs(g2)) <= err:
                break
            step *= 0.5
        Omega, phi = om_n, ph_n
    f1, f2 = _pair_residuals(problem, Omega, phi)
    if max(abs(f1), abs(f2)) > ACCEPT_RTOL * scale:
        return None
    return Omega, _wrap(phi)


def _make_state(problem, Omega, phi):
    f1, f2 = _pair_residuals(problem, Omega, phi)
    detuning = problem.omega2 - problem.omega1
    _, s = problem.gains()
    phase_res = 2.0 * s * math.sin(phi) * math.cos(Omega * problem.tau) - detuning
    norm = 1.0 + abs(Omega)
    factor = problem.stability_factor(Omega)
    return SyncState(
        Omega=Omega,
        phi0=phi,
        stable=factor < 0.0,
        marginal=factor == 0.0,
        residual_freq=abs(f1) / norm,
        residual_phase=abs(phase_res) / norm,
        order_r=math.cos(phi / 2.0),
    )


def _scan_roots(problem, omega_max, n_grid):
    """Grid-scan both arcsin branches of phi0(Omega), then polish.

    Within each contiguous feasible run of the grid the averaged relation
    G(Omega) = mean(omega) + D sin + S sin cos(phi0) - Omega is sign-scanned;
    each crossing is bisected and handed to a joint Newton polish of the full
    steady-state pair.
    """
    d, s = problem.gains()
    detuning = problem.omega2 - problem.omega1
    omega_bar = 0.5 * (problem.omega1 + problem.omega2)
    tau = problem.tau
    scale = max(1.0, abs(problem.omega1), abs(problem.omega2), abs(s), abs(d))

    grid = np.linspace(0.0, omega_max, n_grid + 1)[1:]
    cos_ot = np.cos(grid * tau)
    sin_ot = np.sin(grid * tau)
    with np.errstate(divide="ignore", invalid="ignore"):
        sin_phi = detuning / (2.0 * s * cos_ot)
    feasible = np.isfinite(sin_phi) & (np.abs(sin_phi) <= 1.0)
    # clamping continues the scan function smoothly onto the feasibility
    # boundary |sin phi0| = 1, where saddle-node root pairs sit; crossings
    # found on half-feasible segments are validated by the Newton polish
    sin_phi_cl = np.clip(np.nan_to_num(sin_phi, nan=2.0), -1.0, 1.0)
    cos_phi_mag = np.sqrt(1.0 - sin_phi_cl**2)

    candidates = []
    for sign in (+1.0, -1.0):  # cos(phi0) > 0 branch, then the pi-complement
        g = omega_bar + d * sin_ot + sign * s * sin_ot * cos_phi_mag - grid

        def g_at(om):
            sp = detuning / (2.0 * s * math.cos(om * tau))
            if not math.isfinite(sp):
                sp = 2.0
            sp = min(1.0, max(-1.0, sp))
            cp = sign * math.sqrt(max(0.0, 1.0 - sp * sp))
            return omega_bar + d * math.sin(om * tau) + s * math.sin(om * tau) * cp - om

        ok = feasible[:-1] | feasible[1:]
        flip = ok & (np.sign(g[:-1]) != np.sign(g[1:]))
        for idx in np.nonzero(flip)[0]:
            lo, hi = grid[idx], grid[idx + 1]
            glo = g[idx]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                gm = g_at(mid)
                if (gm > 0.0) == (glo > 0.0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            om = 0.5 * (lo + hi)
            sp = detuning / (2.0 * s * math.cos(om * tau))
            if not math.isfinite(sp):
                sp = 2.0
            sp = min(1.0, max(-1.0, sp))
            phi = math.asin(sp) if sign > 0 else _wrap(math.pi - math.asin(sp))
            candidates.append((om, phi))
    roots = []
    for om, phi in candidates:
        polished = _newton_polish(problem, om, phi, scale)
        if polished is None:
            continue
        om, phi = polished
        if om <= 0.0 or om > omega_max * (1.0 + 1e-9):
            continue
        if any(abs(om - o) <= 1e-7 * (1.0 + abs(o)) and abs(phi - p) <= 1e-6 for o, p in roots):
            continue
        roots.append((om, phi))
    roots.sort()
    return [_make_state(problem, om, phi) for om, phi in roots]


def _solve(problem, omega_max, n_grid):
    if problem.K < 0:
        raise ValueError("coupling strength must be non-negative")
    omega_bar = 0.5 * (problem.omega1 + problem.omega2)
    if omega_max is None:
        omega_max = max(4.0 * omega_bar, 4.0 * math.pi / problem.tau)
    if problem.K == 0.0:
        # uncoupled: a common frequency exists only without detuning, and the
        # phase difference is then undetermined; report the zero representative
        if problem.omega1 == problem.omega2:
            return [_make_state(problem, problem.omega1, 0.0)]
        return []
    return _scan_roots(problem, omega_max, n_grid)


def solve_sync_small(problem, omega_max=None, n_grid=SCAN_POINTS):
    """All locked states of the small-buffer oscillator pair, sorted by Omega."""
    if problem.regime != SMALL_BUFFER:
        raise ValueError("problem regime is not small-buffer")
    return _solve(problem, omega_max, n_grid)


def solve_sync_intermediate(problem, omega_max=None, n_grid=SCAN_POINTS):
    """All locked states of the intermediate-buffer oscillator pair, sorted by Omega."""
    if problem.regime != INTERMEDIATE:
        raise ValueError("problem regime is not intermediate")
    return _solve(problem, omega_max, n_grid)


def solve_sync(problem, omega_max=None, n_grid=SCAN_POINTS):
    if problem.regime == SMALL_BUFFER:
        return solve_sync_small(problem, omega_max, n_grid)
    return solve_sync_intermediate(problem, omega_max, n_grid)


def select_state(states):
    """Reporting convention: the smallest-frequency stable state, if any."""
    for st in states:  # already sorted by Omega
        if st.stable:
            return st
    return None


def coupling_range(problem, k_values, refine_iters=40):
    """Locate the coupling window (K_c, K_u) over a monotone K sweep.

    K_c is the smallest coupling at which any locked state exists; K_u the
    smallest above K_c at which locked states exist but none is stable.
    Endpoints not resolved inside the sweep are returned as None (open).
    Transitions between adjacent sweep points are sharpened by bisection.
    """
    ks = sorted(float(k) for k in k_values)
    if not ks:
        raise ValueError("empty coupling sweep")

    def roots_at(k):
        return solve_sync(replace(problem, K=k))

    def refine(lo, hi, pred):
        # pred flips from False at lo to True at hi
        for _ in range(refine_iters):
            mid = 0.5 * (lo + hi)
            if pred(mid):
                hi = mid
            else:
                lo = mid
        return hi

    k_c = None
    k_u = None
    prev_k = None
    prev_any = None
    prev_all_unstable = None
    for k in ks:
        states = roots_at(k)
        any_root = bool(states)
        all_unstable = bool(states) and not any(st.stable for st in states)
        if k_c is None and any_root:
            if prev_k is None or prev_any:
                k_c = k
            else:
                k_c = refine(prev_k, k, lambda kk: bool(roots_at(kk)))
        if k_c is not None and k > k_c and k_u is None and all_unstable:
            if prev_all_unstable or prev_k is None or prev_k < k_c:
                k_u = k
            else:
                k_u = refine(
                    prev_k, k,
                    lambda kk: bool(roots_at(kk)) and not any(st.stable for st in roots_at(kk)),
                )
        prev_k, prev_any, prev_all_unstable = k, any_root, all_unstable
        if k_c is not None and k_u is not None:
            break
    return k_c, k_u


def order_parameter(theta1, theta2):
    """Complex-order-parameter magnitude and mean phase of two oscillators.

    r is |(e^{j theta1} + e^{j theta2})/2| = |cos((theta1-theta2)/2)|; the
    mean phase psi is reported as NaN when r vanishes (antiphase), where it
    is undefined.  Accepts scalars or arrays.
    """
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    z = 0.5 * (np.exp(1j * t1) + np.exp(1j * t2))
    r = np.abs(z)
    psi = np.where(r > 1e-12, np.angle(z), np.nan)
    if t1.ndim == 0 and t2.ndim == 0:
        return float(r), float(psi)
    return r, psi
