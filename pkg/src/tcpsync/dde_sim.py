"""Fixed-step integration of the delayed fluid and phase-oscillator models.

The integrator is explicit second-order Heun with a constant step and a
stored sample history; delayed state is read by linear interpolation between
stored samples (exact when the delay is an integer number of steps).  The
right-hand sides have kinks where loss terms switch on, so higher-order
methods would buy nothing, and the constant step keeps every delayed lookup
O(1).

Systems covered, all with one delayed read per variable (variable i is read
back at t - tau_i):

* the nonlinear window model of a single set, and of two sets coupled
  through the shared core queue;
* the linearised single-set model (for stability-boundary checks);
* phase-oscillator reductions, both the general two-set forms and the
  equally-coupled forms whose locked states ``sync_solver`` predicts.

Default initial data: fluid models start on a constant history at the
solved equilibrium, optionally scaled by a multiplicative ``kick``; phase
models start on the free-running ramp theta_m(t) = omega_m * t.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import linear_analysis
from .equilibrium import solve_coupled, solve_single
from .errors import SimulationError
from .loss_models import INTERMEDIATE, SMALL_BUFFER, core_loss, edge_loss
from .protocols import COMPOUND, RENO
from .signals import analytic_phase, dominant_frequency, fit_frequency
from .sync_solver import order_parameter
from .trace import Trace

#: default steps per (smallest) delay
STEPS_PER_DELAY = 500
#: fluid windows at or below this many packets abort the run
W_FLOOR = 1e-9


@dataclass(frozen=True)
class DdeConfig:
    """Integration settings.

    ``dt`` of None picks min(delay)/STEPS_PER_DELAY.  ``history`` may be a
    constant (scalar or per-variable tuple) or a callable t -> state tuple on
    t <= 0; None selects the model's default.  ``kick`` scales the default
    fluid equilibrium history (scalar or per-set tuple) to inject a
    perturbation; it is ignored when an explicit history is given.
    """

    horizon: float
    dt: float = None
    history: object = None
    kick: object = 1.0
    transient_fraction: float = 0.25

    def __post_init__(self):
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if not 0.0 <= self.transient_fraction < 1.0:
            raise ValueError("transient fraction must lie in [0, 1)")

    def resolve_dt(self, delays):
        return min(delays) / STEPS_PER_DELAY if self.dt is None else self.dt


def _history_fn(cfg, default_fn, n_var):
    h = cfg.history
    if h is None:
        return default_fn
    if callable(h):
        return h
    if np.ndim(h) == 0:
        vals = (float(h),) * n_var
    else:
        vals = tuple(float(v) for v in h)
        if len(vals) != n_var:
            raise ValueError(f"history tuple must have {n_var} entries")
    return lambda t: vals


def _kick_tuple(kick, n_var):
    if np.ndim(kick) == 0:
        return (float(kick),) * n_var
    vals = tuple(float(v) for v in kick)
    if len(vals) != n_var:
        raise ValueError(f"kick tuple must have {n_var} entries")
    return vals


def integrate_dde(rhs, delays, history, horizon, dt, floor=None):
    """Heun integration of y_i' = rhs(t, y, ylag)_i with ylag_i = y_i(t - tau_i).

    ``history`` is a callable t -> tuple for t <= 0.  Requires dt <= min(tau).
    Returns an array of shape (n_var, n_steps + 1) sampled on t = 0 .. horizon.
    """
    n_var = len(delays)
    offs = [tau / dt for tau in delays]
    if min(offs) < 1.0:
        raise SimulationError(
            f"step dt={dt:g} exceeds the smallest delay {min(delays):g}; "
            "delayed reads would need extrapolation"
        )
    joffs = [int(math.floor(off)) for off in offs]
    fracs = [off - j for off, j in zip(offs, joffs)]
    n_hist = max(joffs) + 2
    n_steps = int(round(horizon / dt))
    cols = [[0.0] * (n_hist + 1 + n_steps) for _ in range(n_var)]
    for k in range(n_hist + 1):
        vals = history((k - n_hist) * dt)
        for i in range(n_var):
            cols[i][k] = float(vals[i])

    base = n_hist
    idx_rng = range(n_var)
    y = tuple(cols[i][base] for i in idx_rng)
    half = 0.5 * dt
    for n in range(n_steps):
        t = n * dt
        idx = base + n
        lag1 = tuple(
            cols[i][idx - joffs[i]]
            if fracs[i] == 0.0
            else cols[i][idx - joffs[i]] * (1.0 - fracs[i]) + cols[i][idx - joffs[i] - 1] * fracs[i]
            for i in idx_rng
        )
        k1 = rhs(t, y, lag1)
        pred = tuple(y[i] + dt * k1[i] for i in idx_rng)
        lag2 = tuple(
            cols[i][idx + 1 - joffs[i]]
            if fracs[i] == 0.0
            else cols[i][idx + 1 - joffs[i]] * (1.0 - fracs[i]) + cols[i][idx - joffs[i]] * fracs[i]
            for i in idx_rng
        )
        k2 = rhs(t + dt, pred, lag2)
        y = tuple(y[i] + half * (k1[i] + k2[i]) for i in idx_rng)
        if floor is not None:
            for i in idx_rng:
                if y[i] <= floor:
                    raise SimulationError(
                        f"variable {i} hit the positivity floor at t={t + dt:.6g}; "
                        f"the step dt={dt:g} is too large for this trajectory"
                    )
        for i in idx_rng:
            cols[i][idx + 1] = y[i]
    return np.array([col[base:] for col in cols])


def _edge_loss_fn(regime, c_prime, tau, b, n):
    cap = c_prime * tau
    if regime == SMALL_BUFFER:
        exp = b / n
        return lambda w: min(1.0, (w / cap) ** exp / n) if w > 0.0 else 0.0
    if regime == INTERMEDIATE:
        capn = cap**n
        return lambda w: ((w**n - capn) / w**n) / n if w > cap else 0.0
    raise ValueError(f"unknown buffer regime {regime!r}")


def _gain_fn(spec):
    """i(w)(1-p) - d(w)p as a fast closure."""
    if spec.variant == COMPOUND:
        alpha, beta, km1 = spec.alpha, spec.beta, spec.k - 1.0

        def gain(w, p):
            return alpha * w**km1 * (1.0 - p) - beta * w * p

    elif spec.variant == RENO:

        def gain(w, p):
            return (1.0 - p) / w - 0.5 * w * p

    else:
        amax, bmin = spec.alpha_max, spec.beta_min

        def gain(w, p):
            return amax * (1.0 - p) / w - bmin * w * p

    return gain


def simulate_fluid_single(spec, regime, net, cfg):
    """Window trajectory of one set of flows behind its edge queue."""
    eq = solve_single(spec, regime, net)
    dt = cfg.resolve_dt([net.tau])
    kick = _kick_tuple(cfg.kick, 1)
    history = _history_fn(cfg, lambda t: (eq.w_star * kick[0],), 1)
    loss = _edge_loss_fn(regime, net.c_prime, net.tau, net.b, net.n_e)
    gain = _gain_fn(spec)
    inv_tau = 1.0 / net.tau

    def rhs(t, y, ylag):
        if y[0] <= W_FLOOR:
            raise SimulationError(f"window left the model domain at t={t:.6g}")
        wl = ylag[0]
        return ((wl * inv_tau) * gain(y[0], loss(wl)),)

    ys = integrate_dde(rhs, [net.tau], history, cfg.horizon, dt, floor=W_FLOOR)
    w = ys[0]
    p = edge_loss(regime, w, net).p
    meta = {
        "model": f"fluid-single-{regime}",
        "protocol": asdict(spec),
        "network": asdict(net),
        "w_star": eq.w_star,
        "dt": dt,
        "horizon": cfg.horizon,
        "transient_fraction": cfg.transient_fraction,
    }
    return Trace(0.0, dt, {"w": w, "p": p}, meta)


def simulate_fluid_linearized(spec, regime, net, cfg, eq=None):
    """Perturbation trajectory of the linearised single-set model."""
    if eq is None:
        eq = solve_single(spec, regime, net)
    a, c = linear_analysis.delay_coefficients(spec, regime, net, eq)
    dt = cfg.resolve_dt([net.tau])
    kick = _kick_tuple(cfg.kick, 1)
    u0 = (kick[0] - 1.0) * eq.w_star
    if cfg.history is None and u0 == 0.0:
        u0 = 0.01 * eq.w_star  # a flat zero history would stay identically zero
    history = _history_fn(cfg, lambda t: (u0,), 1)

    def rhs(t, y, ylag):
        return (-a * y[0] - c * ylag[0],)

    ys = integrate_dde(rhs, [net.tau], history, cfg.horizon, dt)
    meta = {
        "model": f"fluid-linearized-{regime}",
        "protocol": asdict(spec),
        "network": asdict(net),
        "a": a,
        "c": c,
        "w_star": eq.w_star,
        "dt": dt,
        "horizon": cfg.horizon,
        "transient_fraction": cfg.transient_fraction,
    }
    return Trace(0.0, dt, {"dw": ys[0]}, meta)


def simulate_fluid_coupled(spec, regime, net, tau1, tau2, cfg):
    """Window trajectories of two sets sharing the core queue."""
    eq1, eq2 = solve_coupled(spec, regime, net, tau1, tau2)
    dt = cfg.resolve_dt([tau1, tau2])
    kick = _kick_tuple(cfg.kick, 2)
    history = _history_fn(
        cfg, lambda t: (eq1.w_star * kick[0], eq2.w_star * kick[1]), 2
    )
    net.require_core()
    loss1 = _edge_loss_fn(regime, net.c_prime, tau1, net.b, net.n_e)
    loss2 = _edge_loss_fn(regime, net.c_prime, tau2, net.b, net.n_e)
    gain = _gain_fn(spec)
    ctilde, nc = net.C_tilde, net.n_c
    if regime == SMALL_BUFFER:
        bexp = net.B / nc

        def core(rate):
            return min(1.0, (rate / ctilde) ** bexp / nc)

    else:
        ctn = ctilde**nc

        def core(rate):
            return ((rate**nc - ctn) / rate**nc) / nc if rate > ctilde else 0.0

    inv1, inv2 = 1.0 / tau1, 1.0 / tau2

    def rhs(t, y, ylag):
        w1, w2 = y
        if w1 <= W_FLOOR or w2 <= W_FLOOR:
            raise SimulationError(f"window left the model domain at t={t:.6g}")
        w1l, w2l = ylag
        pc = core(w1l * inv1 + w2l * inv2)
        p1 = min(1.0, loss1(w1l) + pc)
        p2 = min(1.0, loss2(w2l) + pc)
        return ((w1l * inv1) * gain(w1, p1), (w2l * inv2) * gain(w2, p2))

    ys = integrate_dde(rhs, [tau1, tau2], history, cfg.horizon, dt, floor=W_FLOOR)
    w1, w2 = ys
    p1 = edge_loss(regime, w1, net, tau=tau1).p
    p2 = edge_loss(regime, w2, net, tau=tau2).p
    pc = core_loss(regime, w1, w2, net, tau1, tau2).p
    meta = {
        "model": f"fluid-coupled-{regime}",
        "protocol": asdict(spec),
        "network": asdict(net),
        "tau1": tau1,
        "tau2": tau2,
        "w_star": [eq1.w_star, eq2.w_star],
        "dt": dt,
        "horizon": cfg.horizon,
        "transient_fraction": cfg.transient_fraction,
    }
    return Trace(0.0, dt, {"w1": w1, "w2": w2, "p1": p1, "p2": p2, "p_core": pc}, meta)


# --------------------------------------------------------------------------
# phase-oscillator reductions


@dataclass(frozen=True)
class PhaseParams:
    """Two delay-coupled phase oscillators.

    d theta_m/dt = omega_m + sum_i coupling[m][i] * sin(theta_i(t - tau_i) - theta_m(t)).
    """

    model: str
    omega: tuple
    tau: tuple
    coupling: tuple  # 2x2, row-major

    def as_meta(self):
        return {
            "model": self.model,
            "omega": list(self.omega),
            "tau": list(self.tau),
            "coupling": [list(row) for row in self.coupling],
        }


def phase_model_small_equal(omega1, omega2, K, tau, B, b, n_c=1.0, n_e=1.0, tau2=None):
    """Equally-coupled small-buffer reduction: cross gain K*B/(2 n_c) plus a
    delayed self-interaction b/n_e * K from the set's own edge queue."""
    cross = -K * B / (2.0 * n_c)
    self_extra = K * b / n_e
    m = ((cross + self_extra, cross), (cross, cross + self_extra))
    t2 = tau if tau2 is None else tau2
    return PhaseParams("phase-small-equal", (omega1, omega2), (tau, t2), m)


def phase_model_intermediate_equal(omega1, omega2, K, tau, tau2=None):
    """Equally-coupled intermediate-buffer reduction: pure -K sin coupling."""
    m = ((-K, -K), (-K, -K))
    t2 = tau if tau2 is None else tau2
    return PhaseParams("phase-intermediate-equal", (omega1, omega2), (tau, t2), m)


def phase_model_small_general(spec, net, eq1, eq2, tau1, tau2, omega1, omega2,
                              r1=1.0, r2=1.0):
    """General (unequal sets) small-buffer reduction."""
    from .protocols import increase_fn

    net.require_core()
    ws = (eq1.w_star, eq2.w_star)
    taus = (tau1, tau2)
    rs = (r1, r2)
    rate_sum = ws[0] / tau1 + ws[1] / tau2
    p_core = core_loss(SMALL_BUFFER, ws[0], ws[1], net, tau1, tau2).p
    rows = []
    for mdx in (0, 1):
        p_edge = edge_loss(SMALL_BUFFER, ws[mdx], net, tau=taus[mdx]).p
        atten = increase_fn(spec, ws[mdx]) / (1.0 + p_edge / p_core)
        q = net.B * (ws[mdx] / taus[mdx]) / (net.n_c * rate_sum)
        row = [-atten * q * rs[i] / (taus[i] * rs[mdx]) for i in (0, 1)]
        row[mdx] += atten * (net.b / net.n_e) / taus[mdx]
        rows.append(tuple(row))
    return PhaseParams("phase-small-general", (omega1, omega2), taus, tuple(rows))


def phase_model_intermediate_general(spec, net, eq1, eq2, tau1, tau2, omega1, omega2,
                                     r1=1.0, r2=1.0):
    """General (unequal sets) intermediate-buffer reduction."""
    from .protocols import decrease_fn, increase_fn

    net.require_core()
    ws = (eq1.w_star, eq2.w_star)
    taus = (tau1, tau2)
    rs = (r1, r2)
    rate_sum = ws[0] / tau1 + ws[1] / tau2
    rows = []
    for mdx in (0, 1):
        i_d = increase_fn(spec, ws[mdx]) + decrease_fn(spec, ws[mdx])
        amp = i_d * net.C_tilde**net.n_c * (ws[mdx] / taus[mdx]) / rate_sum ** (net.n_c + 1.0)
        rows.append(tuple(-amp * rs[i] / (taus[i] * rs[mdx]) for i in (0, 1)))
    return PhaseParams("phase-intermediate-general", (omega1, omega2), taus, tuple(rows))


def simulate_phase_oscillators(params, cfg):
    """Integrate a two-oscillator phase model; returns unwrapped phases plus
    the order-parameter series r(t), psi(t)."""
    om1, om2 = params.omega
    dt = cfg.resolve_dt(params.tau)
    history = _history_fn(cfg, lambda t: (om1 * t, om2 * t), 2)
    (m11, m12), (m21, m22) = params.coupling

    def rhs(t, y, ylag):
        th1, th2 = y
        l1, l2 = ylag
        return (
            om1 + m11 * math.sin(l1 - th1) + m12 * math.sin(l2 - th1),
            om2 + m21 * math.sin(l1 - th2) + m22 * math.sin(l2 - th2),
        )

    ys = integrate_dde(rhs, list(params.tau), history, cfg.horizon, dt)
    th1, th2 = ys
    r, psi = order_parameter(th1, th2)
    meta = params.as_meta() | {
        "dt": dt,
        "horizon": cfg.horizon,
        "transient_fraction": cfg.transient_fraction,
    }
    return Trace(0.0, dt, {"theta1": th1, "theta2": th2, "r": r, "psi": psi}, meta)


def measure_lock(trace, tail_fraction=0.25):
    """Lock metrics of a phase trace over its trailing window.

    Returns dict with the fitted common frequency ``Omega``, circular-mean
    phase difference ``phi0`` (theta1 leading), mean order parameter
    ``r_mean``, the residual phase drift rate, and a ``locked`` verdict
    (drift below 1e-3 of Omega and phase-difference spread below 0.01 rad).
    """
    tail = trace.tail(1.0 - tail_fraction)
    th1, th2 = tail["theta1"], tail["theta2"]
    dt = trace.dt
    phi = th1 - th2
    omega = fit_frequency(0.5 * (th1 + th2), dt)
    drift = fit_frequency(phi, dt)
    phi0 = float(np.angle(np.mean(np.exp(1j * phi))))
    spread = float(np.std(phi - drift * dt * np.arange(len(phi))))
    r_mean = float(np.mean(tail["r"])) if "r" in tail else float("nan")
    locked = abs(drift) < 1e-3 * max(abs(omega), 1e-12) and spread < 0.01
    return {
        "Omega": omega,
        "phi0": phi0,
        "r_mean": r_mean,
        "drift": drift,
        "spread": spread,
        "locked": locked,
    }


_PARTNERS = {"w1": "w2", "w2": "w1", "theta1": "theta2", "theta2": "theta1"}


def estimate_limit_cycle(trace, variable, min_periods=20):
    """Amplitude/frequency of a (near-)periodic channel, plus a lock verdict.

    The leading ``transient_fraction`` of the trace (from its metadata,
    default 0.25) is discarded.  ``locked`` is True only when the channel has
    a partner set (w1/w2 or theta1/theta2) whose dominant frequency agrees
    within 1% and the mean order parameter of the pair exceeds 0.95.
    Raises ValueError when the trace is too short to cover ``min_periods`` of
    the detected cycle, naming the horizon that would suffice.
    """
    frac = float(trace.meta.get("transient_fraction", 0.25))
    tail = trace.tail(frac)
    x = tail[variable]
    scale = max(1.0, float(np.max(np.abs(x))))
    amplitude = float(np.ptp(x))
    if amplitude <= 1e-12 * scale:
        return {"amplitude": 0.0, "frequency": 0.0, "locked": False}
    freq = dominant_frequency(x, trace.dt)
    tail_duration = trace.dt * (len(x) - 1)
    if freq <= 0.0 or tail_duration * freq < min_periods * 2.0 * math.pi:
        period = float("inf") if freq <= 0.0 else 2.0 * math.pi / freq
        needed = min_periods * period / max(1.0 - frac, 1e-9)
        raise ValueError(
            f"trace covers too few cycles of {variable} for a limit-cycle "
            f"estimate; need a horizon of at least {needed:.3g} s"
        )
    locked = False
    partner = _PARTNERS.get(variable)
    if partner is not None and partner in tail:
        freq2 = dominant_frequency(tail[partner], trace.dt)
        if freq2 > 0.0 and abs(freq - freq2) <= 0.01 * max(freq, freq2):
            if "r" in tail:
                r_mean = float(np.mean(tail["r"]))
            else:
                ph1 = analytic_phase(x, trace.dt)
                ph2 = analytic_phase(tail[partner], trace.dt)
                r_mean = float(np.mean(order_parameter(ph1, ph2)[0]))
            locked = r_mean > 0.95
    return {"amplitude": amplitude, "frequency": freq, "locked": locked}
