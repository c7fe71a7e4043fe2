"""This module contains the engine that runs one OLSRv2 router.

- init_router: builds a router's initial state after checking the timing
  constraints between its parameters
- updates_pending / run_update_info: information base maintenance
- process_hello / process_tc / forward_tc: message handling
- queue_step: the packet queue between the radio and the router
- step_main: everything a router does in one tick

RouterState is the router's mutable protocol state. The message handlers
assign new values to its fields and return the same object; the values
themselves (link sets, routes, ...) are immutable.
"""

import functools
import logging
import random
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, List, Optional, Tuple
from app.errors import (ConfigurationError, ContractError, InvariantError,
                        LivelockError)
from app.message_logs import (add_processed_tuple, add_received_tuple,
                              was_processed, was_received)
from app.messages import (Hello, Message, NodeId, Packet, Tc, make_hello,
                          make_tc, forward_tc_message, render_message)
from app.neighborhood import (add_2hop_tuples, add_link_tuple, choose_fmprs,
                              choose_rmprs, find_link, flagged_fmprs,
                              flagged_rmprs, is_symmetric_neighbor,
                              is_valid_fmpr_set, is_valid_rmpr_set,
                              purge_2hop_set, purge_link_set,
                              update_2hop_in_metrics, update_2hop_out_metrics,
                              update_2hop_time, update_fmpr_selectors,
                              update_fmprs, update_heard_time,
                              update_link_out_metrics, update_rmpr_selectors,
                              update_rmprs, update_symmetric_time,
                              update_validity_time)
from app.topology import (choose_optimal, increment_ansn, is_optimal,
                          purge_advertising_routers, purge_router_topology,
                          render_routes, update_advertising_routers,
                          update_router_topology, update_routing_set)
from app.trace import EventKind
from app.utils import INF


logger = logging.getLogger(__name__)

MICRO_STEP_CAP = 10 ** 6


@dataclass(frozen=True)
class RouterConfig:
    """The administrator parameters of one router, plus behavior flags

    Attributes:
        bug_rfc7181 (bool): select routing MPRs the way RFC 7181 section
            18.5 reads, costing the 2-hop leg with the outgoing metric
        flood_all (bool): forward every first-seen TC from a symmetric
            neighbor, not only those from flooding MPR selectors
        process_tc_from_unknown (bool): process TCs whose sender is not a
            symmetric neighbor instead of only considering them for
            forwarding
        debug_checks (bool): verify after every update that no further
            update is pending

    """

    ip: NodeId
    hp_maxjitter: int
    tp_maxjitter: int
    h_hold_time: int
    t_hold_time: int
    l_hold_time: int
    hello_interval: int
    tc_interval: int
    bug_rfc7181: bool = False
    flood_all: bool = False
    process_tc_from_unknown: bool = False
    debug_checks: bool = False


@dataclass
class RouterState:
    """The protocol variables of one router

    `hello_fire`, `tc_fire`, `jitter_floor` and `jitter` are scheduling
    state: the tick inside each jitter window at which the next message is
    generated, and the random stream the window offsets are drawn from.

    """

    now: int
    hello_time: int
    tc_time: int
    ls: FrozenSet = frozenset()
    twohop: FrozenSet = frozenset()
    arrs: FrozenSet = frozenset()
    rts: FrozenSet = frozenset()
    rs: FrozenSet = frozenset()
    ps: FrozenSet = frozenset()
    rxs: FrozenSet = frozenset()
    pkt: List[Message] = field(default_factory=list)
    send_time: float = INF
    mqueue: List[Message] = field(default_factory=list)
    sqn: int = 0
    ansn: int = 0
    prev_ls: FrozenSet = frozenset()
    hello_fire: int = 0
    tc_fire: int = 0
    jitter_floor: int = 0
    jitter: random.Random = field(default_factory=random.Random,
                                  compare=False, repr=False)


@dataclass
class QueueState:
    queue: Tuple[Packet, ...] = ()


@dataclass(frozen=True)
class TickContext:
    """What the network lends a router for one step

    Attributes:
        measure (callable): NodeId -> metric of the link from that node to
            this router, as measured now
        micro_step_cap (int): maximum update/process iterations per tick
        tick (int): the global clock, for diagnostics

    """

    measure: Callable[[NodeId], int]
    micro_step_cap: int = MICRO_STEP_CAP
    tick: int = 0


Emission = namedtuple('Emission', ['kind', 'detail', 'packet'])
StepOutcome = namedtuple('StepOutcome', ['queue', 'packet', 'events'])


def constraint_violations(config, params):
    """Lists the timing inequalities a router configuration breaks

    Parameters:
        config (RouterConfig): the router's parameters
        params (NetworkParams): LB, delta B and the node count

    Returns:
        list: the names of the violated inequalities, in checking order

    """

    lb, delta_b, count = params.lb, params.delta_b, params.node_count
    checks = [
        ('0 < LB', 0 < lb),
        ('0 ≤ ΔB', 0 <= delta_b),
        ('LB + ΔB < hp_maxjitter', lb + delta_b < config.hp_maxjitter),
        ('hp_maxjitter < hello_interval',
         config.hp_maxjitter < config.hello_interval),
        ('LB + 2ΔB + hello_interval < h_hold_time',
         lb + 2 * delta_b + config.hello_interval < config.h_hold_time),
        ('LB + ΔB < tp_maxjitter', lb + delta_b < config.tp_maxjitter),
        ('tp_maxjitter < tc_interval',
         config.tp_maxjitter < config.tc_interval),
        ('(2(LB+ΔB)+1)(|IP|−1) − (LB+1) + tc_interval < t_hold_time',
         t_hold_lower_bound(lb, delta_b, count, config.tc_interval)
         < config.t_hold_time),
        ('0 ≤ l_hold_time', 0 <= config.l_hold_time),
    ]
    return [name for name, holds in checks if not holds]

def t_hold_lower_bound(lb, delta_b, node_count, tc_interval):
    """The value t_hold_time must exceed for a network of `node_count`"""
    return (2 * (lb + delta_b) + 1) * (node_count - 1) - (lb + 1) + tc_interval

def check_constraints(config, params):
    """Raises ConfigurationError naming the first violated inequality"""
    violations = constraint_violations(config, params)
    if violations:
        raise ConfigurationError('constraint_violation', node=config.ip,
                                 inequality=violations[0])

def _fire_tick(state, deadline, maxjitter):
    """Picks a fire tick jitter_floor to maxjitter-1 ticks before the deadline

    The floor is LB+ΔB rather than 0 so a router blocked by its own
    transmission still fires before the deadline.
    """
    offset = state.jitter.randint(state.jitter_floor, maxjitter - 1)
    return max(state.now, deadline - offset)

def init_router(config, params, seed, start_offsets=None, now=0):
    """Builds the initial state of a router

    The jitter window offset is drawn from {LB+ΔB, ..., maxjitter-1}: a
    router may be blocked by its own transmission for up to LB+ΔB ticks,
    and the window must outlast that so no deadline is ever missed.

    Parameters:
        config (RouterConfig): the router's parameters
        params (NetworkParams): the network the router runs in
        seed (int): the run seed; the router draws from its own stream
        start_offsets (tuple): (hello, tc) offsets from `now` of the first
            deadlines, drawn from the stream when None

    Returns:
        RouterState: the initial state

    """

    check_constraints(config, params)
    jitter = random.Random(f'{seed}:{config.ip}:jitter')
    if start_offsets is None:
        start_offsets = (jitter.randint(0, config.hello_interval),
                         jitter.randint(0, config.tc_interval))
    hello_offset, tc_offset = start_offsets
    for timer, value, interval in (('hello', hello_offset,
                                    config.hello_interval),
                                   ('tc', tc_offset, config.tc_interval)):
        if not 0 <= value <= interval:
            raise ConfigurationError('offset_window', node=config.ip,
                                     timer=timer, value=value,
                                     interval=interval)

    state = RouterState(now=now, hello_time=now + hello_offset,
                        tc_time=now + tc_offset,
                        jitter_floor=params.lb + params.delta_b, jitter=jitter)
    state.hello_fire = _fire_tick(state, state.hello_time, config.hp_maxjitter)
    state.tc_fire = _fire_tick(state, state.tc_time, config.tp_maxjitter)
    return state

@functools.lru_cache(maxsize=8192)
def _updates_pending(ip, ls, twohop, arrs, rts, rs, ansn, prev_ls, now,
                     bug_mode):
    return (ls != purge_link_set(ls, now)
            or twohop != purge_2hop_set(ls, twohop, now)
            or arrs != purge_advertising_routers(arrs, now)
            or rts != purge_router_topology(rts, now)
            or not is_valid_fmpr_set(ls, twohop, now, flagged_fmprs(ls))
            or not is_valid_rmpr_set(ls, twohop, now, flagged_rmprs(ls),
                                     bug_mode)
            or ansn != increment_ansn(ls, prev_ls, ansn)
            or not is_optimal(ip, ls, rts, now, rs))

def updates_pending(state, config):
    """Returns True when information base maintenance would change anything

    The router is Updated exactly when this is False.

    """

    return _updates_pending(config.ip, state.ls, state.twohop, state.arrs,
                            state.rts, state.rs, state.ansn, state.prev_ls,
                            state.now, config.bug_rfc7181)

def run_update_info(state, config):
    """Brings every information base up to date, in protocol order"""
    now, bug_mode = state.now, config.bug_rfc7181

    state.ls = purge_link_set(state.ls, now)
    state.twohop = purge_2hop_set(state.ls, state.twohop, now)
    state.arrs = purge_advertising_routers(state.arrs, now)
    state.rts = purge_router_topology(state.rts, now)

    state.ls = update_fmprs(state.ls, state.twohop, now,
                            choose_fmprs(state.ls, state.twohop, now))
    state.ls = update_rmprs(state.ls, state.twohop, now,
                            choose_rmprs(state.ls, state.twohop, now,
                                         bug_mode), bug_mode)

    state.ansn = increment_ansn(state.ls, state.prev_ls, state.ansn)
    state.prev_ls = state.ls

    state.rs = update_routing_set(
        config.ip, state.ls, state.rts, now, state.rs,
        choose_optimal(config.ip, state.ls, state.rts, now))

    if config.debug_checks and updates_pending(state, config):
        raise InvariantError('invariant', node=config.ip, tick=now,
                             detail='updates still pending after an update')
    return state

def process_hello(state, config, msg, in_metric):
    """Applies a HELLO to the link set and the 2-hop set

    Parameters:
        msg (Hello): the received message
        in_metric (int): the measured metric of the link from the
            originator to this router

    """

    if not isinstance(msg, Hello):
        raise ContractError('undefined_input', operation='process_hello',
                            variant=type(msg).__name__)

    ip, now = config.ip, state.now
    moip, vtime = msg.originator, msg.validity
    htime = config.l_hold_time

    ls = add_link_tuple(state.ls, moip, vtime, in_metric, now)
    ls = update_link_out_metrics(ip, ls, moip, msg.in_metrics)
    ls = update_symmetric_time(ip, ls, moip, vtime, msg.statuses, htime, now)
    ls = update_heard_time(ls, moip, vtime, now)
    ls = update_validity_time(ls, moip, htime, now)
    ls = update_fmpr_selectors(ip, ls, moip, msg.statuses, msg.mprs, now)
    ls = update_rmpr_selectors(ip, ls, moip, msg.statuses, msg.mprs, now)

    twohop = add_2hop_tuples(ip, ls, state.twohop, moip, msg.statuses, now)
    twohop = update_2hop_in_metrics(ls, twohop, moip, msg.in_metrics, now)
    twohop = update_2hop_out_metrics(ls, twohop, moip, msg.out_metrics, now)
    twohop = update_2hop_time(ip, ls, twohop, moip, vtime, msg.statuses, now)

    state.ls, state.twohop = ls, twohop
    return state

def process_tc(state, config, msg):
    """Processes a TC and then considers it for forwarding

    TCs originated by this router are dropped without forwarding. TCs
    from a sender that is not a symmetric neighbor skip processing unless
    `process_tc_from_unknown` is set.

    """

    if not isinstance(msg, Tc):
        raise ContractError('undefined_input', operation='process_tc',
                            variant=type(msg).__name__)

    if msg.originator == config.ip:
        return state
    if (not is_symmetric_neighbor(state.ls, msg.sender, state.now)
            and not config.process_tc_from_unknown):
        return forward_tc(state, config, msg)
    if was_processed(state.ps, msg.originator, msg.seq):
        return forward_tc(state, config, msg)

    state.ps = add_processed_tuple(state.ps, msg.originator, msg.seq)
    out_of_date = any(ar.oip == msg.originator and ar.ansn > msg.ansn
                      for ar in state.arrs)
    if not out_of_date:
        state.arrs = update_advertising_routers(
            state.arrs, msg.originator, msg.ansn, msg.validity, state.now)
        state.rts = update_router_topology(
            config.ip, state.rts, msg.originator, msg.validity, msg.dests,
            state.now)
    return forward_tc(state, config, msg)

def forward_tc(state, config, msg):
    """Forwards a first-seen TC received from a flooding MPR selector"""
    if not is_symmetric_neighbor(state.ls, msg.sender, state.now):
        return state
    if was_received(state.rxs, msg.originator, msg.seq):
        return state

    state.rxs = add_received_tuple(state.rxs, msg.originator, msg.seq)
    sender = find_link(state.ls, msg.sender)
    if sender.fmpr_selector or config.flood_all:
        state.pkt.append(forward_tc_message(config.ip, msg))
        state.send_time = state.now + 1
    return state

def queue_step(queue_state, arrivals, deliver=True):
    """Appends arriving packets and hands the head packet to the router

    Parameters:
        queue_state (QueueState): the queue before this step
        arrivals (list): packets received from the radio, in order
        deliver (bool): whether the router can take a packet now

    Returns:
        tuple: the new QueueState and the delivered packet or None

    """

    queue = queue_state.queue + tuple(arrivals)
    if deliver and queue:
        return QueueState(queue[1:]), queue[0]
    return QueueState(queue), None

def _drain(queue):
    packets = []
    queue, packet = queue_step(queue, ())
    while packet is not None:
        packets.append(packet)
        queue, packet = queue_step(queue, ())
    return queue, packets

def _check_deadlines(state, config, tick):
    for timer, deadline in (('hello', state.hello_time),
                            ('tc', state.tc_time)):
        if state.now > deadline:
            raise InvariantError('invariant', node=config.ip, tick=tick,
                                 detail=f'{timer} deadline {deadline} missed')

def _generate(state, config):
    emissions = []
    now = state.now

    if state.hello_fire <= now:
        hello = make_hello(config.ip, config.h_hold_time, state.ls, now)
        state.pkt.append(hello)
        state.hello_time = now + config.hello_interval
        state.hello_fire = _fire_tick(state, state.hello_time,
                                      config.hp_maxjitter)
        state.send_time = now + 1
        emissions.append(Emission(EventKind.HELLO_GEN, render_message(hello),
                                  (hello,)))

    if state.tc_fire <= now:
        tc = make_tc(config.ip, config.t_hold_time, state.sqn, state.ansn,
                     state.ls, now)
        state.pkt.append(tc)
        state.sqn += 1
        state.tc_time = now + config.tc_interval
        state.tc_fire = _fire_tick(state, state.tc_time, config.tp_maxjitter)
        state.send_time = now + 1
        emissions.append(Emission(EventKind.TC_GEN, render_message(tc), (tc,)))

    return emissions

def step_main(state, config, queue, context):
    """Runs one tick of the main router process

    In order: broadcast the accumulated packet if it is due (which ends
    the router's tick, as the radio is now busy); take every queued packet;
    alternate information base updates and message processing until the
    router is Updated with nothing left to process; generate a HELLO
    and/or a TC when their jitter windows have opened.

    Parameters:
        state (RouterState): the router's state, updated in place
        config (RouterConfig): the router's parameters
        queue (QueueState): packets received but not yet taken
        context (TickContext): measurement and limits for this tick

    Returns:
        StepOutcome: the new queue, the packet to broadcast (or None) and
            the emissions for the trace

    """

    routes_before = state.rs
    emissions = []

    if state.send_time == state.now:
        if updates_pending(state, config):
            run_update_info(state, config)
        packet = tuple(state.pkt)
        state.pkt = []
        state.send_time = INF
        _note_route_change(routes_before, state, emissions)
        return StepOutcome(queue, packet, emissions)

    queue, packets = _drain(queue)
    for packet in packets:
        state.mqueue.extend(packet)

    steps = 0
    while True:
        steps += 1
        if steps > context.micro_step_cap:
            logger.warning('router %s livelocked at tick %s', config.ip,
                           context.tick)
            raise LivelockError('livelock', node=config.ip,
                                tick=context.tick, cap=context.micro_step_cap)
        if updates_pending(state, config):
            run_update_info(state, config)
        elif state.mqueue and state.send_time != state.now:
            msg = state.mqueue.pop(0)
            if isinstance(msg, Hello):
                process_hello(state, config, msg,
                              context.measure(msg.originator))
            else:
                queued = len(state.pkt)
                process_tc(state, config, msg)
                if len(state.pkt) > queued:
                    forwarded = state.pkt[-1]
                    emissions.append(Emission(
                        EventKind.TC_FWD, render_message(forwarded),
                        (forwarded,)))
        else:
            break

    _check_deadlines(state, config, context.tick)
    emissions.extend(_generate(state, config))
    _note_route_change(routes_before, state, emissions)
    return StepOutcome(queue, None, emissions)

def _note_route_change(routes_before, state, emissions):
    if state.rs != routes_before:
        logger.debug('routes changed at %s: %s', state.now,
                     render_routes(state.rs))
        emissions.append(Emission(EventKind.ROUTE_CHANGE,
                                  'rs=' + render_routes(state.rs), None))
