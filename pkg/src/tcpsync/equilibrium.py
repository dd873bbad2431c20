"""Equilibrium window solvers for single-edge and coupled systems.

A set of flows is at equilibrium when per-ack growth balances per-loss
backoff:

    i(w*) * (1 - p_total) = d(w*) * p_total,

with p_total the edge loss alone (single system) or edge plus core loss
(coupled system).  The balance residual is strictly decreasing in w for all
three protocols in both regimes (i non-increasing, d increasing, p
non-decreasing), so bracketed bisection is unconditionally safe; speed is
irrelevant at this scale.
"""

from dataclasses import dataclass

from .errors import NoConvergenceError, NoRootError
from .loss_models import INTERMEDIATE, SMALL_BUFFER, core_loss, edge_loss
from .protocols import decrease_fn, increase_fn

#: relative bracket width at which bisection stops
BISECT_RTOL = 1e-13
#: cap on attempts to bracket the coupled core loss
COUPLED_MAX_ITER = 200


@dataclass(frozen=True)
class EquilibriumState:
    """Equilibrium of one set of flows.

    ``residual`` is the balance i(w*)(1-p) - d(w*)p left after solving (the
    bracketed term of the fluid model, packets per ack-interval); it should
    be at the bisection noise floor, far below 1e-10.
    """

    w_star: float
    p_edge_star: float
    p_core_star: float
    residual: float

    @property
    def p_total(self):
        return self.p_edge_star + self.p_core_star


def balance_residual(spec, w, p_total):
    """i(w)(1-p) - d(w)p; positive when the window still wants to grow."""
    return increase_fn(spec, w) * (1.0 - p_total) - decrease_fn(spec, w) * p_total


def _bisect(f, lo, hi, rtol=BISECT_RTOL):
    """Bisection on a decreasing residual; assumes f(lo) > 0 > f(hi)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo < 0.0 or fhi > 0.0:
        raise NoRootError(
            f"residual does not change sign on ({lo:g}, {hi:g}): "
            f"f(lo)={flo:g}, f(hi)={fhi:g}",
            bracket=(lo, hi),
        )
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # bracket at floating-point resolution
            break
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bracket(regime, net):
    cap = net.c_prime * net.tau
    if regime == SMALL_BUFFER:
        return 1e-6, 10.0 * cap
    if regime == INTERMEDIATE:
        # below capacity the edge loss is identically zero, so a purely
        # edge-driven system has no interior root there
        return cap * (1.0 + 1e-9), 10.0 * cap
    raise ValueError(f"unknown buffer regime {regime!r}")


def solve_single(spec, regime, net):
    """Equilibrium of one edge set in isolation (no core loss)."""

    def f(w):
        return balance_residual(spec, w, edge_loss(regime, w, net).p)

    lo, hi = _bracket(regime, net)
    w = _bisect(f, lo, hi)
    p = edge_loss(regime, w, net).p
    return EquilibriumState(w, p, 0.0, balance_residual(spec, w, p))


def solve_coupled(spec, regime, net, tau1, tau2):
    """Simultaneous equilibrium of two sets sharing the core queue.

    The core loss is the only quantity linking the two balance equations, so
    the solver bisects on it: for a trial core loss q each set's window
    w_m(q) comes from its own bracketed bisection, and the residual
    core_loss(w_1(q), w_2(q)) - q is strictly decreasing in q (windows fall,
    the aggregate rate falls, the implied core loss falls).  This stays
    robust even when the core dominates the edge losses, where a damped
    alternating update diverges.
    """
    net.require_core()
    taus = (tau1, tau2)

    def f(w, tau, p_core):
        p_edge = edge_loss(regime, w, net, tau=tau).p
        return balance_residual(spec, w, p_edge + p_core)

    def solve_set(tau, p_core):
        # with core loss in play an equilibrium below the edge capacity point
        # is possible even in the intermediate regime, so bracket from near 0
        return _bisect(lambda w: f(w, tau, p_core), 1e-6, 10.0 * net.c_prime * tau)

    def implied(p_core):
        ws = [solve_set(taus[m], p_core) for m in (0, 1)]
        return core_loss(regime, ws[0], ws[1], net, tau1, tau2).p, ws

    p0, ws = implied(0.0)
    if p0 == 0.0:
        p_core = 0.0
    else:
        hi = min(1.0 - 1e-9, 2.0 * p0)
        for _ in range(COUPLED_MAX_ITER):
            p_hi, _ = implied(hi)
            if p_hi <= hi:
                break
            hi = 0.5 * (1.0 + hi)
        else:
            raise NoConvergenceError(
                "could not bracket the coupled core loss",
                last_iterate=(ws[0], ws[1], hi),
            )
        lo = 0.0
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            p_mid, ws = implied(mid)
            if p_mid > mid:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-16 * max(hi, 1e-300):
                break
        p_core = 0.5 * (lo + hi)
        ws = [solve_set(taus[m], p_core) for m in (0, 1)]
        # report the core loss the solved windows actually produce
        p_core = core_loss(regime, ws[0], ws[1], net, tau1, tau2).p
        ws = [solve_set(taus[m], p_core) for m in (0, 1)]

    states = []
    for m in (0, 1):
        p_edge = edge_loss(regime, ws[m], net, tau=taus[m]).p
        res = balance_residual(spec, ws[m], p_edge + p_core)
        states.append(EquilibriumState(ws[m], p_edge, p_core, res))
    return states[0], states[1]
