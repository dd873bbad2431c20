"""Window increase/decrease laws for Compound, Reno and Illinois TCP.

Each protocol is reduced to a pair of functions of the current window ``w``
(in packets): the per-ack increment ``i(w)`` and the per-loss decrement
``d(w)``:

    Compound:  i(w) = alpha * w**(k-1),   d(w) = beta * w
    Reno:      i(w) = 1/w,                d(w) = w/2
    Illinois:  i(w) = alpha_max/w,        d(w) = beta_min * w

Illinois is modelled in its negligible-queueing-delay regime, where its
delay-adaptive gains sit at alpha_max / beta_min.  The generalised fluid
model advances the mean window of a set of flows at rate

    dw/dt = (w(t-tau)/tau) * [ i(w(t)) * (1 - p) - d(w(t)) * p ]

where ``p`` is the (delayed) packet loss probability seen by the set.
"""

from dataclasses import dataclass

COMPOUND = "compound"
RENO = "reno"
ILLINOIS = "illinois"
VARIANTS = (COMPOUND, RENO, ILLINOIS)


@dataclass(frozen=True)
class ProtocolSpec:
    """A TCP variant plus its parameters.

    ``gamma`` (queue-backlog threshold, packets) and ``zeta`` (backlog drain
    gain) only matter to the packet-level Compound implementation; the fluid
    model never sees them.
    """

    variant: str
    alpha: float = 0.125
    beta: float = 0.5
    k: float = 0.75
    gamma: float = 30.0
    zeta: float = 0.5
    alpha_max: float = 10.0
    beta_min: float = 0.125

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown TCP variant {self.variant!r}")
        if self.variant == COMPOUND:
            if not self.alpha > 0:
                raise ValueError("Compound requires alpha > 0")
            if not 0 < self.beta < 1:
                raise ValueError("Compound requires 0 < beta < 1")
            if not 0 <= self.k <= 1:
                raise ValueError("Compound requires 0 <= k <= 1")
        if self.variant == ILLINOIS:
            if not self.alpha_max > 0:
                raise ValueError("Illinois requires alpha_max > 0")
            if not 0 < self.beta_min < 1:
                raise ValueError("Illinois requires 0 < beta_min < 1")

    @classmethod
    def compound(cls, alpha=0.125, beta=0.5, k=0.75, gamma=30.0, zeta=0.5):
        return cls(COMPOUND, alpha=alpha, beta=beta, k=k, gamma=gamma, zeta=zeta)

    @classmethod
    def reno(cls):
        return cls(RENO)

    @classmethod
    def illinois(cls, alpha_max=10.0, beta_min=0.125):
        return cls(ILLINOIS, alpha_max=alpha_max, beta_min=beta_min)


def increase_fn(spec, w):
    """Per-ack window increment i(w), packets.  Requires w > 0."""
    if not w > 0:
        raise ValueError(f"window must be positive, got {w}")
    if spec.variant == COMPOUND:
        # k = 1 degenerates to the constant alpha, k = 0 to alpha/w.
        return spec.alpha * w ** (spec.k - 1.0)
    if spec.variant == RENO:
        return 1.0 / w
    return spec.alpha_max / w


def decrease_fn(spec, w):
    """Per-loss window decrement d(w), packets.  Requires w > 0."""
    if not w > 0:
        raise ValueError(f"window must be positive, got {w}")
    if spec.variant == COMPOUND:
        return spec.beta * w
    if spec.variant == RENO:
        return w / 2.0
    return spec.beta_min * w


def elasticity_gap(spec):
    """w*d'(w)/d(w) - w*i'(w)/i(w), a constant for all three variants."""
    if spec.variant == COMPOUND:
        return 2.0 - spec.k
    return 2.0


def g_factor(spec, w_star, p_star):
    """Damping factor of the linearised window dynamics at an equilibrium.

    Defined as (w d'/d - w i'/i) * d/(i+d) at w = w_star.  At an equilibrium
    the loss probability satisfies p* = i/(i+d), so d/(i+d) = 1 - p* and the
    factor reduces to (2-k)(1-p*) for Compound and 2(1-p*) for Reno and
    Illinois.  Taking p* as an input lets the same routine serve both buffer
    regimes.
    """
    if not w_star > 0:
        raise ValueError(f"window must be positive, got {w_star}")
    if not 0.0 < p_star < 1.0:
        raise ValueError(f"equilibrium loss probability must lie in (0, 1), got {p_star}")
    return elasticity_gap(spec) * (1.0 - p_star)


def window_derivative(spec, w_now, w_lag, p_lag, tau):
    """Right-hand side of the fluid window model, packets/second.

    ``w_now`` is the current mean window, ``w_lag`` the window one round-trip
    ago and ``p_lag`` the loss probability fed back with that delay.
    """
    if not w_now > 0:
        raise ValueError(f"current window must be positive, got {w_now}")
    if w_lag < 0:
        raise ValueError(f"lagged window must be non-negative, got {w_lag}")
    if not 0.0 <= p_lag <= 1.0:
        raise ValueError(f"loss probability must lie in [0, 1], got {p_lag}")
    if not tau > 0:
        raise ValueError(f"round-trip time must be positive, got {tau}")
    gain = increase_fn(spec, w_now) * (1.0 - p_lag) - decrease_fn(spec, w_now) * p_lag
    return (w_lag / tau) * gain
