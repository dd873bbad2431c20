"""Desk-scale discrete-event simulator of two TCP aggregates merging at a core.

Topology: per set, flows feed through their own access links into one of two
Drop-Tail edge routers; both edges feed a common Drop-Tail core router, whose
output reaches the destination after the set's one-way propagation delay, at
which point the ack returns to the sender (the reverse path is uncongested).
Optional cross-traffic flows bypass the edges and enter the core directly.

Modelling choices:

* windows are fractional (w += 1/w per ack and so on); a flow may transmit
  while the number of packets in flight is below floor(w);
* a dropped packet is detected by its sender once three later packets of the
  same flow have been delivered (triple-duplicate-ack abstraction); there are
  no retransmissions, no timeouts and no slow start - flows start in
  congestion avoidance at w = 2;
* at most one multiplicative backoff per window of data: detections whose
  sequence number falls inside the current recovery window only clear the
  bookkeeping;
* service is FIFO, one packet per completion, deterministic service time
  1/capacity; Drop-Tail drops arrivals when occupancy equals the buffer;
* burstiness is controlled by the per-flow access-link speed: faster access
  links release back-to-back packets into the edge queue.

Everything is deterministic given the seed, which only randomises flow start
times within one round-trip.
"""

import heapq
import math
import warnings
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .protocols import COMPOUND, ILLINOIS, RENO, ProtocolSpec
from .signals import autocorr_period, bandpass
from .trace import Trace

#: dupack threshold: later deliveries needed to detect a drop
DUPACK_DETECT = 3


@dataclass(frozen=True)
class Topology:
    """Capacities in packets/s, buffers in packets, delays in seconds.

    ``prop_delay`` records the nominal one-way propagation per set.  The
    effective per-flow propagation is derived from each flow group's base
    round-trip time minus the serialisation chain, so groups with different
    round-trip times can share an edge; keep ``prop_delay`` consistent with
    the groups routed through each set.  ``packet_bytes`` is carried for
    unit conversions at the configuration boundary only.
    """

    edge_capacity: tuple
    core_capacity: float
    edge_buffer: tuple
    core_buffer: float
    prop_delay: tuple
    packet_bytes: int = 1500

    def __post_init__(self):
        if min(self.edge_capacity) <= 0 or self.core_capacity <= 0:
            raise ValueError("capacities must be positive")
        if min(self.edge_buffer) < 1 or self.core_buffer < 1:
            raise ValueError("buffers must be at least one packet")
        if self.core_capacity >= sum(self.edge_capacity):
            warnings.warn(
                "core capacity is not a bottleneck for the edge aggregate",
                stacklevel=2,
            )


@dataclass(frozen=True)
class FlowGroup:
    """A homogeneous group of flows: count, protocol, base round-trip time,
    which edge they traverse (None = cross traffic straight into the core)
    and the per-flow access-link rate (packets/s)."""

    count: int
    protocol: ProtocolSpec
    rtt: float
    edge: int = 0
    access_rate: float = 200.0
    awnd: float = 1e12

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("group needs at least one flow")
        if self.rtt <= 0 or self.access_rate <= 0:
            raise ValueError("rtt and access rate must be positive")


class _Flow:
    __slots__ = (
        "spec", "variant", "edge", "prop", "access_rate", "awnd", "set_id",
        "cwnd", "dwnd", "base_rtt", "last_rtt", "next_seq", "in_flight",
        "sent", "delivered", "dropped", "detected", "dropped_pending",
        "recovery_until", "acks_in_round", "round_size", "access_free",
        "start_time",
    )

    def __init__(self, spec, edge, prop, access_rate, awnd, set_id, start_time):
        self.spec = spec
        self.variant = spec.variant
        self.edge = edge
        self.prop = prop
        self.access_rate = access_rate
        self.awnd = awnd
        self.set_id = set_id
        self.cwnd = 2.0
        self.dwnd = 0.0
        self.base_rtt = math.inf
        self.last_rtt = math.inf
        self.next_seq = 0
        self.in_flight = 0
        self.sent = 0
        self.delivered = 0
        self.dropped = 0
        self.detected = 0
        self.dropped_pending = deque()
        self.recovery_until = -1
        self.acks_in_round = 0
        self.round_size = 2
        self.access_free = start_time
        self.start_time = start_time

    @property
    def window(self):
        if self.variant == COMPOUND:
            return min(self.cwnd + self.dwnd, self.awnd)
        return min(self.cwnd, self.awnd)


def _on_ack(flow):
    """Per-ack window growth (flow.last_rtt/base_rtt already updated)."""
    if flow.variant == RENO:
        flow.cwnd += 1.0 / flow.cwnd
    elif flow.variant == ILLINOIS:
        flow.cwnd += flow.spec.alpha_max / flow.cwnd
    else:
        flow.cwnd += 1.0 / flow.cwnd
        flow.acks_in_round += 1
        if flow.acks_in_round >= flow.round_size:
            w = flow.window
            if math.isfinite(flow.last_rtt) and flow.last_rtt > 0:
                diff = (w / flow.base_rtt - w / flow.last_rtt) * flow.base_rtt
            else:
                diff = 0.0
            if diff < flow.spec.gamma:
                flow.dwnd += max(flow.spec.alpha * w**flow.spec.k - 1.0, 0.0)
            else:
                flow.dwnd = max(flow.dwnd - flow.spec.zeta * diff, 0.0)
            flow.acks_in_round = 0
            flow.round_size = max(int(flow.window), 1)


def _on_loss(flow):
    """Multiplicative backoff after a detected drop."""
    if flow.variant == RENO:
        flow.cwnd = max(flow.cwnd / 2.0, 1.0)
    elif flow.variant == ILLINOIS:
        flow.cwnd = max((1.0 - flow.spec.beta_min) * flow.cwnd, 1.0)
    else:
        w = flow.window
        flow.dwnd = max(w * (1.0 - flow.spec.beta) - flow.cwnd / 2.0, 0.0)
        flow.cwnd = max(flow.cwnd / 2.0, 1.0)


def compound_window_update(flow, event):
    """Apply one ack or loss event to a Compound flow state."""
    if flow.variant != COMPOUND:
        raise ValueError("flow is not Compound")
    _on_ack(flow) if event == "ack" else _on_loss(flow)
    return flow


def reno_window_update(flow, event):
    if flow.variant != RENO:
        raise ValueError("flow is not Reno")
    _on_ack(flow) if event == "ack" else _on_loss(flow)
    return flow


def illinois_window_update(flow, event):
    if flow.variant != ILLINOIS:
        raise ValueError("flow is not Illinois")
    _on_ack(flow) if event == "ack" else _on_loss(flow)
    return flow


class _Router:
    __slots__ = ("name", "rate", "buffer", "queue", "count", "busy",
                 "drops", "served", "busy_time")

    def __init__(self, name, rate, buffer):
        self.name = name
        self.rate = rate
        self.buffer = buffer
        self.queue = deque()
        self.count = 0
        self.busy = False
        self.drops = 0
        self.served = 0
        self.busy_time = 0.0


@dataclass
class ScenarioResult:
    queue_traces: dict
    window_traces: dict
    utilization: dict
    drops: dict
    counters: dict
    conservation: dict
    meta: dict = field(default_factory=dict)


def run_scenario(topology, groups, duration, seed=0, sample_dt=0.02):
    """Run the event loop and return sampled traces plus counters.

    Queue occupancy is sampled every ``sample_dt``; each set's mean window is
    sampled once per its base round-trip time.  Deterministic given the seed.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    rng = np.random.default_rng(seed)

    edges = [
        _Router("edge1", topology.edge_capacity[0], topology.edge_buffer[0]),
        _Router("edge2", topology.edge_capacity[1], topology.edge_buffer[1]),
    ]
    core = _Router("core", topology.core_capacity, topology.core_buffer)
    routers = edges + [core]

    flows = []
    set_rtts = {}
    for gi, grp in enumerate(groups):
        set_id = grp.edge if grp.edge is not None else f"cross{gi}"
        serial = 1.0 / grp.access_rate + 1.0 / topology.core_capacity
        if grp.edge is not None:
            serial += 1.0 / topology.edge_capacity[grp.edge]
            set_rtts.setdefault(grp.edge, grp.rtt)
        prop = max(grp.rtt - serial, 1e-6)
        for _ in range(grp.count):
            start = float(rng.uniform(0.0, grp.rtt))
            flows.append(
                _Flow(grp.protocol, grp.edge, prop, grp.access_rate, grp.awnd,
                      set_id, start)
            )

    heap = []
    counter = 0

    def push(t, kind, payload):
        nonlocal counter
        heapq.heappush(heap, (t, counter, kind, payload))
        counter += 1

    in_network = 0

    def maybe_send(flow, now):
        nonlocal in_network
        while flow.in_flight < int(flow.window):
            dep = max(now, flow.access_free) + 1.0 / flow.access_rate
            flow.access_free = dep
            push(dep, "arrive", (flow, flow.next_seq, now))
            flow.next_seq += 1
            flow.in_flight += 1
            flow.sent += 1
            in_network += 1

    def start_service(router, t):
        push(t + 1.0 / router.rate, "service", router)
        router.busy = True

    def arrive(router, pkt, t):
        nonlocal in_network
        if router.count >= router.buffer:
            router.drops += 1
            flow = pkt[0]
            flow.dropped += 1
            flow.dropped_pending.append([pkt[1], 0])
            in_network -= 1
            return
        router.count += 1
        router.queue.append(pkt)
        if not router.busy:
            start_service(router, t)

    def detect_losses(flow, acked_seq, now):
        """Count this delivery against older outstanding drops; apply at most
        one backoff per recovery window."""
        remaining = deque()
        for entry in flow.dropped_pending:
            seq, hits = entry
            if seq < acked_seq:
                hits += 1
                entry[1] = hits
            if hits >= DUPACK_DETECT:
                flow.in_flight -= 1
                flow.detected += 1
                if seq > flow.recovery_until:
                    _on_loss(flow)
                    flow.recovery_until = flow.next_seq - 1
            else:
                remaining.append(entry)
        flow.dropped_pending = remaining

    # sampling machinery
    n_qsamples = int(duration / sample_dt) + 1
    qseries = {r.name: np.zeros(n_qsamples) for r in routers}
    conservation = {
        "t": [], "sent": [], "delivered": [], "dropped": [], "in_network": [],
        "base_rtt": [],
    }
    for k in range(n_qsamples):
        push(k * sample_dt, "qsample", k)

    wseries = {}
    for set_id, rtt in set_rtts.items():
        n = int(duration / rtt) + 1
        wseries[set_id] = np.zeros(n)
        for k in range(n):
            push(k * rtt, "wsample", (set_id, k))

    for flow in flows:
        push(flow.start_time, "start", flow)

    while heap:
        t, _, kind, payload = heapq.heappop(heap)
        if t > duration:
            break
        if kind == "arrive":
            flow, seq, sent_t = payload
            router = core if flow.edge is None else edges[flow.edge]
            arrive(router, (flow, seq, sent_t), t)
        elif kind == "service":
            router = payload
            pkt = router.queue.popleft()
            router.count -= 1
            router.served += 1
            router.busy_time += 1.0 / router.rate
            if router.queue:
                push(t + 1.0 / router.rate, "service", router)
            else:
                router.busy = False
            if router is core:
                push(t + pkt[0].prop, "ack", pkt)
            else:
                arrive(core, pkt, t)
        elif kind == "ack":
            flow, seq, sent_t = payload
            in_network -= 1
            flow.delivered += 1
            flow.in_flight -= 1
            rtt = t - sent_t
            flow.last_rtt = rtt
            if rtt < flow.base_rtt:
                flow.base_rtt = rtt
            detect_losses(flow, seq, t)
            _on_ack(flow)
            maybe_send(flow, t)
        elif kind == "start":
            maybe_send(payload, t)
        elif kind == "qsample":
            for r in routers:
                qseries[r.name][payload] = r.count
            conservation["t"].append(t)
            conservation["sent"].append(sum(f.sent for f in flows))
            conservation["delivered"].append(sum(f.delivered for f in flows))
            conservation["dropped"].append(sum(f.dropped for f in flows))
            conservation["in_network"].append(in_network)
            conservation["base_rtt"].append([f.base_rtt for f in flows])
        elif kind == "wsample":
            set_id, k = payload
            members = [f.window for f in flows if f.set_id == set_id]
            wseries[set_id][k] = sum(members) / len(members)
        if not heap:
            # every flow stalled on undetected drops: without timeouts the
            # system would deadlock, so declare the oldest drop of each
            # stalled flow detected and resume
            progressed = False
            for flow in flows:
                if flow.dropped_pending and flow.in_flight >= int(flow.window):
                    seq, _ = flow.dropped_pending.popleft()
                    flow.in_flight -= 1
                    flow.detected += 1
                    if seq > flow.recovery_until:
                        _on_loss(flow)
                        flow.recovery_until = flow.next_seq - 1
                    maybe_send(flow, t)
                    progressed = True
            if not progressed:
                break

    meta = {
        "duration": duration,
        "seed": seed,
        "sample_dt": sample_dt,
        "n_flows": len(flows),
    }
    queue_traces = {
        name: Trace(0.0, sample_dt, {"occupancy": arr}, {**meta, "router": name})
        for name, arr in qseries.items()
    }
    window_traces = {
        f"set{set_id + 1}": Trace(
            0.0, set_rtts[set_id], {"w_mean": arr}, {**meta, "set": set_id + 1}
        )
        for set_id, arr in wseries.items()
    }
    utilization = {r.name: r.busy_time / duration for r in routers}
    drops = {r.name: r.drops for r in routers}
    counters = {
        "sent": sum(f.sent for f in flows),
        "delivered": sum(f.delivered for f in flows),
        "dropped": sum(f.dropped for f in flows),
        "in_network": in_network,
        "detected_losses": sum(f.detected for f in flows),
        "served": {r.name: r.served for r in routers},
        "min_base_rtt": min((f.base_rtt for f in flows), default=math.nan),
    }
    conservation = {k: np.asarray(v) for k, v in conservation.items()}
    return ScenarioResult(queue_traces, window_traces, utilization, drops,
                          counters, conservation, meta)


def queue_oscillation(trace, rtt_mean, buffer_pkts, transient=0.25,
                      min_amplitude=25.0, buffer_fraction=0.2):
    """Classify a queue-occupancy trace as limit cycle or fluctuation.

    The occupancy is band-passed to the decade around the expected
    limit-cycle frequencies (pi/(10 rtt) .. 10 pi/rtt): sub-round-trip
    service ripple and slow drift both fall outside.  A sustained cycle must
    swing by at least ``min_amplitude`` packets and ``buffer_fraction`` of
    the buffer (a small buffer bounds the queue excursion to irrelevance by
    design), keep at least half its amplitude in the trailing half of the
    trace, and show a repeating autocorrelation peak.  The default absolute
    floor is calibrated to the desk-scale presets (core ~2700 packets/s).
    """
    occ = trace.tail(transient)["occupancy"]
    dt = trace.dt
    w_lo = math.pi / (10.0 * rtt_mean)
    w_hi = min(10.0 * math.pi / rtt_mean, math.pi / dt * 0.9)
    y = bandpass(occ, dt, w_lo, w_hi)
    amplitude = float(np.ptp(y))
    half = len(y) // 2
    first, second = float(np.ptp(y[:half])), float(np.ptp(y[half:]))
    persistence = second / first if first > 0 else 0.0
    period, coherence = autocorr_period(occ, dt, w_lo, w_hi)
    sustained = (
        amplitude >= max(min_amplitude, buffer_fraction * buffer_pkts)
        and persistence >= 0.5
        and math.isfinite(period)
        and coherence > 0.05
    )
    return {
        "amplitude": amplitude,
        "period": period,
        "coherence": coherence,
        "persistence": persistence,
        "sustained": bool(sustained),
    }
