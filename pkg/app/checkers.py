"""This module contains the oracles and property checks run against
simulations.

- ground_truth_shortest_paths: shortest distances over the real network
- check_route_optimality: compares every routing set with that oracle
- count_tc_broadcasts: how many routers rebroadcast one TC, and who got it
- detect_convergence / run_to_convergence: when a run stopped changing
- track_symmetric_regressions: symmetric links that fell back
"""

import heapq
import logging
from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple
from app.messages import NodeId, Status, Tc
from app.simnet import tick
from app.trace import EventKind, TraceEvent
from app.utils import render_ids


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimalityReport:
    """How one router's routing set compares with the true shortest paths

    Attributes:
        missing (frozenset): reachable destinations without a route
        suboptimal (frozenset): (dest, found_metric, optimal_metric) for
            routes whose metric is not the shortest distance

    """

    node: NodeId
    missing: FrozenSet[NodeId] = frozenset()
    suboptimal: FrozenSet[Tuple[NodeId, int, int]] = frozenset()

    @property
    def verdict(self):
        return not self.missing and not self.suboptimal

    def render(self):
        subopt = ','.join(f'({dest},{found},{optimal})' for dest, found, optimal
                          in sorted(self.suboptimal))
        return (f'OPT n={self.node} verdict={str(self.verdict).lower()} '
                f'missing={render_ids(self.missing)} subopt={{{subopt}}}')


@dataclass(frozen=True)
class ConvergenceReport:
    converged_at: Optional[int]
    window: int

    @property
    def converged(self):
        return self.converged_at is not None


def symmetric_links(truth):
    """Returns the ground-truth links whose reverse link also exists"""
    return [(src, dst, metric) for src, dst, metric in truth.links()
            if (dst, src) in truth.metric]

def ground_truth_shortest_paths(truth, src):
    """Shortest distances from `src` over the symmetric ground-truth links

    Returns:
        dict: NodeId -> distance for every reachable node, `src` included
            with distance 0

    """

    adjacency = {}
    for a, b, metric in symmetric_links(truth):
        adjacency.setdefault(a, []).append((b, metric))

    dist = {src: 0}
    heap = [(0, src)]
    while heap:
        cost, node = heapq.heappop(heap)
        if cost > dist[node]:
            continue
        for neighbor, metric in adjacency.get(node, ()):
            candidate = cost + metric
            if candidate < dist.get(neighbor, candidate + 1):
                dist[neighbor] = candidate
                heapq.heappush(heap, (candidate, neighbor))
    return dist

def check_route_optimality(network, truth=None):
    """Compares every router's routing set with the ground truth

    Parameters:
        network (Network): typically a converged network
        truth (GroundTruth): the network's own ground truth when None

    Returns:
        dict: NodeId -> OptimalityReport

    """

    truth = truth or network.truth
    reports = {}
    for ip in sorted(network.nodes):
        optimal = ground_truth_shortest_paths(truth, ip)
        routes = {route.dest: route.metric
                  for route in network.nodes[ip].state.rs}
        missing = frozenset(dest for dest in optimal
                            if dest != ip and dest not in routes)
        suboptimal = frozenset((dest, found, optimal[dest])
                               for dest, found in routes.items()
                               if dest in optimal and found != optimal[dest])
        reports[ip] = OptimalityReport(ip, missing, suboptimal)
    return reports

def _carries_tc(packet, originator, sqn):
    return any(isinstance(msg, Tc) and msg.originator == originator
               and msg.seq == sqn for msg in packet or ())

def count_tc_broadcasts(trace, originator, sqn):
    """Counts the broadcasts of one TC and the routers that received it

    Returns:
        tuple: (number of BROADCAST events carrying the TC, frozenset of
            nodes with a DELIVER event carrying it)

    """

    count = 0
    coverage = set()
    for event in trace:
        if not _carries_tc(event.packet, originator, sqn):
            continue
        if event.kind is EventKind.BROADCAST:
            count += 1
        elif event.kind is EventKind.DELIVER:
            coverage.add(event.node)
    return count, frozenset(coverage)

def route_change_ticks(trace):
    """Lists the ticks at which some routing set changed"""
    return [event.tick for event in trace
            if event.kind is EventKind.ROUTE_CHANGE]

def detect_convergence(changes, window, horizon, start=0):
    """Finds the tick from which nothing changed for at least `window` ticks

    Parameters:
        changes (list): a trace (its ROUTE_CHANGE events are used) or the
            ticks at which the observed state changed
        window (int): how long the state must stay unchanged, positive
        horizon (int): the number of ticks that were observed
        start (int): the first observed tick

    Returns:
        ConvergenceReport: converged_at is None when the last change is
            less than `window` ticks before the horizon

    """

    changes = list(changes)
    if changes and isinstance(changes[0], TraceEvent):
        changes = route_change_ticks(changes)
    converged_at = max(changes) + 1 if changes else start
    if horizon - converged_at < window:
        return ConvergenceReport(None, window)
    return ConvergenceReport(converged_at, window)

def default_window(network):
    """The convergence window for a network's slowest router

    At least tc_interval + tp_maxjitter, and longer than the gap that can
    separate a change from its next visible consequence: a full message
    interval plus one send tick and two worst-case transmissions.

    """

    transmission = network.params.lb + network.params.delta_b
    window = 1
    for node in network.nodes.values():
        config = node.config
        window = max(window, config.tc_interval + config.tp_maxjitter,
                     max(config.hello_interval, config.tc_interval)
                     + 2 * transmission + 2)
    return window

def run_to_convergence(network, window=None, budget=None, order=None):
    """Runs a network until its state has been stable for `window` ticks

    Stability is judged on the timer-free fingerprint the network keeps
    of every router's information bases.

    Parameters:
        budget (int): the most ticks to run; a ConvergenceReport without a
            tick is returned when it runs out

    """

    window = window or default_window(network)
    budget = network.params.node_count * 100 if budget is None else budget
    start = network.clock
    while network.clock - start < budget:
        tick(network, order)
        report = detect_convergence(network.state_changes, window,
                                    network.clock, start)
        if report.converged:
            logger.debug('converged at %s', report.converged_at)
            return report
    logger.warning('no convergence within %s ticks', budget)
    return ConvergenceReport(None, window)

def track_symmetric_regressions(network, ticks):
    """Runs a network and records every symmetric link that fell back

    Returns:
        list: (tick, node, neighbor, status) for each link tuple that was
            SYMMETRIC and later was HEARD, LOST or gone

    """

    seen = {ip: set() for ip in network.nodes}
    regressions = []
    for _ in range(ticks):
        tick(network)
        for ip, node in network.nodes.items():
            now = node.state.now
            statuses = {lt.oip: lt.status(now) for lt in node.state.ls}
            for neighbor in sorted(seen[ip]):
                status = statuses.get(neighbor, Status.LOST)
                if status is not Status.SYMMETRIC:
                    regressions.append((network.clock, ip, neighbor, status))
            seen[ip] |= {oip for oip, status in statuses.items()
                         if status is Status.SYMMETRIC}
    return regressions
