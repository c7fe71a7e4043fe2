"""This module contains the three demo runs shipped with the simulator.

- flooding_demo: one TC from the centre of a 3x3 grid, with minimal
  flooding MPRs or with every router forwarding
- hello_exchange_demo: the HELLO exchange that makes a 3-node chain
  symmetric, reported panel by panel
- counterexample_demo: the 5-node topology on which RFC 7181 routing MPR
  selection hides the shortest path

Each demo takes the app Config for its debug checks and processing cap.
"""

from dataclasses import dataclass
from typing import FrozenSet, List, Optional
from app.checkers import (OptimalityReport, check_route_optimality,
                          count_tc_broadcasts, run_to_convergence)
from app.messages import Status
from app.neighborhood import find_link, flagged_fmprs, flagged_rmprs
from app.scenarios import (FIG1_SCENARIO, FIG2_SCENARIO, FIG3_SCENARIO,
                           parse_scenario)
from app.simnet import build_network, tick
from app.trace import EventKind
from app.utils import render_ids


@dataclass(frozen=True)
class FloodingResult:
    flood_all: bool
    originator: str
    sqn: Optional[int]
    broadcasts: int
    coverage: FrozenSet[str]
    fmprs: FrozenSet[str]

    def render(self):
        mode = 'flood-all' if self.flood_all else 'flooding MPRs'
        return (f'{mode}: TC o={self.originator} sqn={self.sqn} '
                f'broadcasts={self.broadcasts} '
                f'coverage={render_ids(self.coverage)} '
                f'mprs({self.originator})={render_ids(self.fmprs)}')


@dataclass(frozen=True)
class Panel:
    label: str
    tick: Optional[int]
    description: str

    def render(self):
        return f'panel {self.label} t={self.tick}: {self.description}'


@dataclass(frozen=True)
class CounterexampleResult:
    bug_mode: bool
    converged_at: Optional[int]
    d_rmprs: FrozenSet[str]
    s_to_d: Optional[int]
    report: OptimalityReport


def _network(text, config, **flags):
    scenario = parse_scenario(text).with_overrides(**flags)
    return build_network(scenario, debug_checks=config.DEBUG_CHECKS,
                         micro_step_cap=config.MICRO_STEP_CAP)

def flooding_demo(config, flood_all=False, originator='E'):
    """Floods one TC from `originator` once the grid has converged

    The TC counted is the first one the originator generates after
    convergence, and the run continues until every router could have
    rebroadcast it.

    """

    network = _network(FIG1_SCENARIO, config, flood_all=flood_all)
    convergence = run_to_convergence(network)
    start = convergence.converged_at or 0
    node = network.nodes[originator]
    limit = network.clock + 2 * node.config.tc_interval

    generated = None
    while generated is None and network.clock <= limit:
        generated = next((event for event in network.trace
                          if event.kind is EventKind.TC_GEN
                          and event.node == originator
                          and event.tick >= start), None)
        if generated is None:
            tick(network)

    sqn = generated.packet[0].seq if generated else None
    params = network.params
    settle = generated.tick + params.node_count * (
        2 * (params.lb + params.delta_b) + 2) if generated else network.clock
    while network.clock <= settle:
        tick(network)

    broadcasts, coverage = count_tc_broadcasts(network.trace, originator, sqn)
    fmprs = frozenset(lt.oip for lt in flagged_fmprs(node.state.ls))
    return FloodingResult(flood_all, originator, sqn, broadcasts, coverage,
                          fmprs)

def _status(network, ip, neighbor):
    state = network.nodes[ip].state
    lt = find_link(state.ls, neighbor)
    return lt.status(state.now) if lt else Status.LOST

def _has_2hop(network, ip, one_hop, two_hop):
    return any(n2.one_hop_oip == one_hop and n2.two_hop_oip == two_hop
               for n2 in network.nodes[ip].state.twohop)


HELLO_PANELS = [
    ('b', 'B holds a HEARD tuple for A',
     lambda net: _status(net, 'B', 'A') is Status.HEARD),
    ('c', 'A holds a SYMMETRIC tuple for B, C a HEARD tuple for B',
     lambda net: _status(net, 'A', 'B') is Status.SYMMETRIC
     and _status(net, 'C', 'B') is Status.HEARD),
    ('d', 'B holds a SYMMETRIC tuple for C',
     lambda net: _status(net, 'B', 'C') is Status.SYMMETRIC),
    ('e', 'B holds a SYMMETRIC tuple for A',
     lambda net: _status(net, 'B', 'A') is Status.SYMMETRIC),
    ('f', 'C holds a SYMMETRIC tuple for B; A and C hold 2-hop tuples '
          'for each other via B',
     lambda net: _status(net, 'C', 'B') is Status.SYMMETRIC
     and _has_2hop(net, 'A', 'B', 'C') and _has_2hop(net, 'C', 'B', 'A')),
]


def hello_exchange_demo(config):
    """Runs the chain and reports the tick at which each panel first holds

    Panels are checked in order; a panel is only looked for once the one
    before it has been seen. State is inspected at the end of each tick.

    Returns:
        list: one Panel per entry of HELLO_PANELS, tick None if never seen

    """

    network = _network(FIG2_SCENARIO, config)
    seen: List[Panel] = []
    pending = list(HELLO_PANELS)
    for _ in range(network.nodes['A'].config.hello_interval * 4):
        tick(network)
        while pending and pending[0][2](network):
            label, description, _ = pending.pop(0)
            seen.append(Panel(label, network.clock - 1, description))
    seen += [Panel(label, None, description)
             for label, description, _ in pending]
    return seen

def counterexample_demo(config, bug_mode):
    """Runs the counterexample to convergence with or without the RFC bug"""
    network = _network(FIG3_SCENARIO, config, bug_rfc7181=bug_mode)
    convergence = run_to_convergence(network)
    report = check_route_optimality(network)['S']
    d_state = network.nodes['D'].state
    route = next((route for route in network.nodes['S'].state.rs
                  if route.dest == 'D'), None)
    return CounterexampleResult(
        bug_mode, convergence.converged_at,
        frozenset(lt.oip for lt in flagged_rmprs(d_state.ls)),
        route.metric if route else None, report)

def render_counterexample_table(results):
    """Renders the side by side comparison of counterexample runs"""
    lines = [f'{"mode":<11}{"D rmprs":<9}{"S->D":<6}verdict']
    for result in results:
        mode = 'rfc7181' if result.bug_mode else 'corrected'
        metric = '-' if result.s_to_d is None else str(result.s_to_d)
        lines.append(f'{mode:<11}{render_ids(result.d_rmprs):<9}{metric:<6}'
                     f'{str(result.report.verdict).lower()}')
    lines += [result.report.render() for result in results]
    return '\n'.join(lines)
