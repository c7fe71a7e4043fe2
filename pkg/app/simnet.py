"""This module contains the network a simulation runs: routers, radio
ranges, in-flight transmissions and the global clock.

Each tick delivers due transmissions into the receivers' queues, steps
every router that is not busy transmitting, applies scheduled topology
events and finally advances every clock by one. Every random draw comes
from a per-node stream derived from the run seed, so a run depends on
(scenario, seed) only, whatever order the routers are stepped in.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple
from app.engines import (MICRO_STEP_CAP, QueueState, RouterConfig,
                         RouterState, TickContext, init_router, queue_step,
                         step_main)
from app.errors import TopologyEventError
from app.messages import NodeId, Packet, render_packet
from app.neighborhood import link_status
from app.trace import EventKind, TraceEvent
from app.utils import render_ids


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NetworkParams:
    """Network-wide parameters

    Attributes:
        lb (int): minimum broadcast duration in ticks
        delta_b (int): spread of the broadcast duration in ticks
        node_count (int): number of routers
        seed (int): run seed
        metric_noise (int): measured metrics get a uniform draw from
            {0..metric_noise} added

    """

    lb: int
    delta_b: int
    node_count: int
    seed: int = 0
    metric_noise: int = 0


@dataclass
class GroundTruth:
    """Who hears whom, and the directed metric of every such link"""
    nodes: FrozenSet[NodeId]
    range: Dict[NodeId, set] = field(default_factory=dict)
    metric: Dict[Tuple[NodeId, NodeId], int] = field(default_factory=dict)

    @classmethod
    def from_links(cls, nodes, links):
        truth = cls(frozenset(nodes), {node: set() for node in nodes})
        for src, dst, metric in links:
            truth.link_up(src, dst, metric)
        return truth

    def link_up(self, src, dst, metric):
        self.range[src].add(dst)
        self.metric[(src, dst)] = metric

    def link_down(self, src, dst):
        self.range[src].discard(dst)
        self.metric.pop((src, dst), None)

    def links(self):
        return sorted((src, dst, metric)
                      for (src, dst), metric in self.metric.items())


@dataclass(frozen=True)
class TopologyEvent:
    """A scheduled change of the ground truth

    Attributes:
        kind (str): `linkup`, `linkdown` or `metric`
        metric (int): the new metric for `linkup` and `metric`
        bidi (bool): apply to the reverse link as well
        reverse_metric (int): the reverse metric when it differs

    """

    tick: int
    kind: str
    src: NodeId
    dst: NodeId
    metric: Optional[int] = None
    bidi: bool = False
    reverse_metric: Optional[int] = None

    def render(self):
        text = f'{self.kind} {self.src} {self.dst}'
        if self.metric is not None:
            text += f' {self.metric}'
        if self.bidi:
            text += ' bidi'
            if self.reverse_metric is not None:
                text += f' {self.reverse_metric}'
        return text


@dataclass(frozen=True)
class InFlight:
    sender: NodeId
    packet: Packet
    deliver_at: int
    recipients: FrozenSet[NodeId]


@dataclass
class Node:
    """One router with its queue and its random streams"""
    config: RouterConfig
    state: RouterState
    queue: QueueState = field(default_factory=QueueState)
    durations: random.Random = field(default_factory=random.Random)
    noise: random.Random = field(default_factory=random.Random)


@dataclass
class Network:
    params: NetworkParams
    truth: GroundTruth
    nodes: Dict[NodeId, Node]
    schedule: Dict[int, List[TopologyEvent]] = field(default_factory=dict)
    in_flight: List[InFlight] = field(default_factory=list)
    clock: int = 0
    trace: List[TraceEvent] = field(default_factory=list)
    state_changes: List[int] = field(default_factory=list)
    fingerprint: Optional[tuple] = None
    micro_step_cap: int = MICRO_STEP_CAP
    last_metric: Dict[Tuple[NodeId, NodeId], int] = field(default_factory=dict)


def build_network(scenario, debug_checks=False, micro_step_cap=MICRO_STEP_CAP):
    """Builds the network a scenario describes, at tick 0

    Parameters:
        scenario (Scenario): a validated scenario
        debug_checks (bool): verify router consistency after every update
        micro_step_cap (int): per-router, per-tick processing limit

    Returns:
        Network: the initial network

    """

    params = scenario.network_params()
    truth = GroundTruth.from_links(scenario.nodes, scenario.links)
    nodes = {}
    for ip in sorted(scenario.nodes):
        config = scenario.router_config(ip, debug_checks=debug_checks)
        state = init_router(config, params, params.seed,
                            scenario.offsets.get(ip))
        nodes[ip] = Node(config, state,
                         durations=random.Random(f'{params.seed}:{ip}:duration'),
                         noise=random.Random(f'{params.seed}:{ip}:metric'))

    schedule = {}
    for event in scenario.events:
        schedule.setdefault(event.tick, []).append(event)

    network = Network(params, truth, nodes, schedule,
                      micro_step_cap=micro_step_cap,
                      last_metric=dict(truth.metric))
    network.fingerprint = state_fingerprint(network)
    logger.debug('built network of %s nodes, seed %s', len(nodes), params.seed)
    return network

def _measure(network, receiver):
    node = network.nodes[receiver]

    def measure(sender):
        pair = (sender, receiver)
        metric = network.truth.metric.get(pair, network.last_metric.get(pair))
        if network.params.metric_noise:
            metric += node.noise.randint(0, network.params.metric_noise)
        return metric
    return measure

def apply_topology_event(network, event):
    """Applies a link-up, link-down or metric change to the ground truth"""
    for node in (event.src, event.dst):
        if node not in network.truth.nodes:
            raise TopologyEventError('topology_event', node=node)

    pairs = [(event.src, event.dst, event.metric)]
    if event.bidi:
        reverse = event.reverse_metric if event.reverse_metric is not None \
            else event.metric
        pairs.append((event.dst, event.src, reverse))

    for src, dst, metric in pairs:
        if event.kind == 'linkdown':
            network.truth.link_down(src, dst)
        elif event.kind == 'linkup':
            network.truth.link_up(src, dst, metric)
        elif (src, dst) in network.truth.metric:
            network.truth.metric[(src, dst)] = metric
        if metric is not None:
            network.last_metric[(src, dst)] = metric
    return network

def state_fingerprint(network):
    """A timer-free digest of every router's information bases"""
    digest = []
    for ip in sorted(network.nodes):
        state = network.nodes[ip].state
        links = frozenset((lt.oip, link_status(lt, state.now), lt.fmpr,
                           lt.rmpr, lt.fmpr_selector, lt.rmpr_selector,
                           lt.in_metric, lt.out_metric) for lt in state.ls)
        twohop = frozenset((n2.one_hop_oip, n2.two_hop_oip, n2.in_metric,
                            n2.out_metric) for n2 in state.twohop)
        topology = frozenset((tr.from_oip, tr.dest_oip, tr.metric)
                             for tr in state.rts)
        digest.append((ip, links, twohop, topology, state.rs, state.ansn))
    return tuple(digest)

def tick(network, order=None):
    """Advances the network by one tick

    Parameters:
        network (Network): the network, updated in place
        order (list): the order to step routers in, ascending NodeId when
            None; the outcome does not depend on it

    Returns:
        list: the trace events of this tick

    """

    clock = network.clock
    events = []

    due = sorted((flight for flight in network.in_flight
                  if flight.deliver_at == clock),
                 key=lambda flight: flight.sender)
    network.in_flight = [flight for flight in network.in_flight
                         if flight.deliver_at != clock]
    for flight in due:
        rendered = render_packet(flight.packet)
        for receiver in sorted(flight.recipients):
            node = network.nodes[receiver]
            node.queue, _ = queue_step_arrival(node.queue, flight.packet)
            events.append(TraceEvent(clock, receiver, EventKind.DELIVER,
                                     f'from={flight.sender} pkt={rendered}',
                                     flight.packet))

    busy = {flight.sender for flight in network.in_flight}
    for ip in order if order is not None else sorted(network.nodes):
        if ip in busy:
            continue
        node = network.nodes[ip]
        context = TickContext(_measure(network, ip), network.micro_step_cap,
                              clock)
        outcome = step_main(node.state, node.config, node.queue, context)
        node.queue = outcome.queue
        for emission in outcome.events:
            events.append(TraceEvent(clock, ip, emission.kind,
                                     emission.detail, emission.packet))
        if outcome.packet:
            events.append(_broadcast(network, ip, outcome.packet))

    for event in network.schedule.get(clock, ()):
        apply_topology_event(network, event)
        events.append(TraceEvent(clock, event.src, EventKind.LINK_EVENT,
                                 event.render()))

    network.clock += 1
    for node in network.nodes.values():
        node.state.now = network.clock

    fingerprint = state_fingerprint(network)
    if fingerprint != network.fingerprint:
        network.state_changes.append(clock)
        network.fingerprint = fingerprint

    events.sort(key=lambda event: event.node)
    network.trace.extend(events)
    return events

def queue_step_arrival(queue, packet):
    """Appends a packet delivered by the radio to a router's queue"""
    return queue_step(queue, [packet], deliver=False)

def _broadcast(network, ip, packet):
    node = network.nodes[ip]
    duration = network.params.lb + node.durations.randint(
        0, network.params.delta_b)
    recipients = frozenset(network.truth.range[ip])
    network.in_flight.append(InFlight(ip, packet, network.clock + duration,
                                      recipients))
    logger.debug('%s broadcasts %s messages at %s for %s ticks', ip,
                 len(packet), network.clock, duration)
    return TraceEvent(network.clock, ip, EventKind.BROADCAST,
                      f'D={duration} to={render_ids(recipients)} '
                      f'pkt={render_packet(packet)}', packet)

def run_network(network, ticks, order=None):
    """Advances a network by `ticks` ticks and returns their events"""
    events = []
    for _ in range(ticks):
        events.extend(tick(network, order))
    return events

def run(scenario, ticks=None, debug_checks=False, order=None):
    """Builds and runs a scenario

    Parameters:
        ticks (int): how many ticks to run, the scenario's own when None

    Returns:
        tuple: the final Network and its trace

    """

    network = build_network(scenario, debug_checks=debug_checks)
    run_network(network, scenario.ticks if ticks is None else ticks, order)
    return network, network.trace

def render_information_bases(network):
    """Renders every router's link, 2-hop, advertising router, topology
    and routing sets, one tuple per line under a `== <node> ==` header"""
    lines = []
    for ip in sorted(network.nodes):
        state = network.nodes[ip].state
        lines.append(f'== {ip} == t={state.now} ansn={state.ansn} '
                     f'sqn={state.sqn}')
        for tuples in (state.ls, state.twohop, state.arrs, state.rts,
                       state.rs):
            lines += sorted(entry.render() for entry in tuples)
    return '\n'.join(lines) + '\n'
