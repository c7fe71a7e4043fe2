"""This module contains the trace events a simulation run emits.

A trace line reads `t=<tick> n=<node> ev=<KIND> <detail>`. Events carry
the packet they describe (when there is one) so checkers can inspect
messages without reparsing the rendered detail.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional
from app.messages import NodeId, Packet


class EventKind(enum.Enum):
    BROADCAST = 'BROADCAST'
    DELIVER = 'DELIVER'
    HELLO_GEN = 'HELLO_GEN'
    TC_GEN = 'TC_GEN'
    TC_FWD = 'TC_FWD'
    LINK_EVENT = 'LINK_EVENT'
    ROUTE_CHANGE = 'ROUTE_CHANGE'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    node: NodeId
    kind: EventKind
    detail: str
    packet: Optional[Packet] = field(default=None, compare=False, repr=False)

    def render(self):
        return f't={self.tick} n={self.node} ev={self.kind} {self.detail}'


def render_trace(trace):
    """Renders a trace as UTF-8 text, one event per line"""
    return ''.join(event.render() + '\n' for event in trace)
