"""This module contains the received message information base.

The processed set remembers which TC messages were already processed and
the received set which ones were already considered for forwarding. Neither
set ever expires: sequence numbers are unbounded, so a (originator, sqn)
pair is never reused.
"""

from dataclasses import dataclass
from app.messages import NodeId


@dataclass(frozen=True)
class ProcessedTuple:
    oip: NodeId
    sqn: int


@dataclass(frozen=True)
class ReceivedTuple:
    oip: NodeId
    sqn: int


def add_processed_tuple(ps, moip, msqn):
    """Marks the TC `(moip, msqn)` as processed"""
    return ps | {ProcessedTuple(moip, msqn)}

def add_received_tuple(rxs, moip, msqn):
    """Marks the TC `(moip, msqn)` as considered for forwarding"""
    return rxs | {ReceivedTuple(moip, msqn)}

def was_processed(ps, moip, msqn):
    """Tells whether the TC was already processed"""
    return ProcessedTuple(moip, msqn) in ps

def was_received(rxs, moip, msqn):
    """Tells whether the TC was already considered for forwarding"""
    return ReceivedTuple(moip, msqn) in rxs
