"""This module contains the protocol messages exchanged between routers.

- Hello: one-hop neighborhood advertisement, never forwarded
- Tc: topology control advertisement, flooded through flooding MPRs
- make_hello / make_tc: build a router's next message from its link set
- forward_tc_message: rewrite the sender of a TC for forwarding

Messages are immutable. Their key/value sets are read-only maps keyed by
NodeId, which makes key uniqueness hold by construction.
"""

import enum
from dataclasses import dataclass, replace
from typing import Mapping, Tuple, Union
from app.errors import ContractError
from app.utils import frozen_map, render_map, render_value


NodeId = str


class Status(enum.Enum):
    """The status of a link as seen from one end"""
    SYMMETRIC = 'SYMMETRIC'
    HEARD = 'HEARD'
    LOST = 'LOST'

    def __str__(self):
        return self.value


class MprRole(enum.Enum):
    """The MPR duties a router delegates to a neighbor"""
    FLOODING = 'FLOODING'
    ROUTING = 'ROUTING'
    FLOOD_ROUTE = 'FLOOD_ROUTE'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Hello:
    """A HELLO message

    Attributes:
        originator (NodeId): the router that generated the message
        validity (int): how long receivers keep the information
        statuses (Mapping): neighbor -> Status
        mprs (Mapping): neighbor -> MprRole
        in_metrics (Mapping): neighbor -> metric of the neighbor's link to us
        out_metrics (Mapping): neighbor -> metric of our link to the neighbor

    """

    originator: NodeId
    validity: int
    statuses: Mapping
    mprs: Mapping
    in_metrics: Mapping
    out_metrics: Mapping


@dataclass(frozen=True)
class Tc:
    """A TC message

    Attributes:
        originator (NodeId): the router that generated the message
        sender (NodeId): the router that last broadcast the message
        validity (int): how long receivers keep the information
        seq (int): the originator's message sequence number
        ansn (int): the originator's advertised neighbor sequence number
        dests (Mapping): advertised neighbor -> metric of the link to it

    """

    originator: NodeId
    sender: NodeId
    validity: int
    seq: int
    ansn: int
    dests: Mapping


Message = Union[Hello, Tc]
Packet = Tuple[Message, ...]


def _mpr_role(lt):
    if lt.fmpr and lt.rmpr:
        return MprRole.FLOOD_ROUTE
    if lt.fmpr:
        return MprRole.FLOODING
    if lt.rmpr:
        return MprRole.ROUTING
    return None

def make_hello(ip, vtime, ls, now):
    """Builds the HELLO a router would send now

    Parameters:
        ip (NodeId): the generating router
        vtime (int): the validity time to advertise, must be positive
        ls (frozenset): the router's link set
        now (int): the router's clock

    Returns:
        Hello: the message

    """

    if not vtime > 0:
        raise ContractError('contract', operation='make_hello',
                            detail=f'validity {vtime} is not positive')

    statuses, mprs, in_metrics, out_metrics = {}, {}, {}, {}
    for lt in ls:
        status = lt.status(now)
        statuses[lt.oip] = status
        role = _mpr_role(lt)
        if role is not None:
            mprs[lt.oip] = role
        if status is not Status.LOST:
            in_metrics[lt.oip] = lt.in_metric
        if status is Status.SYMMETRIC:
            out_metrics[lt.oip] = lt.out_metric

    return Hello(ip, vtime, frozen_map(statuses), frozen_map(mprs),
                 frozen_map(in_metrics), frozen_map(out_metrics))

def make_tc(ip, vtime, sqn, ansn, ls, now):
    """Builds the TC a router would send now

    The advertised destinations are the router's symmetric routing MPR
    selectors, each with the metric of the link towards it.

    Returns:
        Tc: a message whose originator and sender are both `ip`

    """

    if not vtime > 0:
        raise ContractError('contract', operation='make_tc',
                            detail=f'validity {vtime} is not positive')

    dests = {lt.oip: lt.out_metric for lt in ls
             if lt.rmpr_selector and lt.status(now) is Status.SYMMETRIC}
    return Tc(ip, ip, vtime, sqn, ansn, frozen_map(dests))

def forward_tc_message(ip, msg):
    """Returns the TC with its sender replaced by the forwarding router"""
    if not isinstance(msg, Tc):
        raise ContractError('undefined_input', operation='forward_tc_message',
                            variant=type(msg).__name__)
    return replace(msg, sender=ip)

def render_message(msg):
    """Renders a message as a single trace line"""
    if isinstance(msg, Hello):
        return (f'HELLO o={msg.originator} vt={render_value(msg.validity)} '
                f'st={render_map(msg.statuses)} mpr={render_map(msg.mprs)} '
                f'in={render_map(msg.in_metrics, render_value)} '
                f'out={render_map(msg.out_metrics, render_value)}')
    return (f'TC o={msg.originator} s={msg.sender} '
            f'vt={render_value(msg.validity)} sqn={msg.seq} ansn={msg.ansn} '
            f'd={render_map(msg.dests, render_value)}')

def render_packet(packet):
    """Renders a packet as `[msg; msg; ...]`"""
    return '[' + '; '.join(render_message(msg) for msg in packet) + ']'
