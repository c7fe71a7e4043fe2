"""This unit test suite tests the received message information base."""

import pytest
from app.message_logs import (ProcessedTuple, ReceivedTuple,
                              add_processed_tuple, add_received_tuple,
                              was_processed, was_received)


@pytest.mark.message_logs
def test_processed_set_remembers_pairs():
    """a processed (originator, sqn) pair is recognized afterwards"""
    ps = add_processed_tuple(frozenset(), 'B', 3)
    assert ps == {ProcessedTuple('B', 3)}
    assert was_processed(ps, 'B', 3)
    assert not was_processed(ps, 'B', 4)
    assert not was_processed(ps, 'C', 3)

@pytest.mark.message_logs
def test_received_set_remembers_pairs():
    """a received pair is recognized, adding it twice changes nothing"""
    rxs = add_received_tuple(frozenset(), 'B', 3)
    assert add_received_tuple(rxs, 'B', 3) == rxs == {ReceivedTuple('B', 3)}
    assert was_received(rxs, 'B', 3)

@pytest.mark.message_logs
def test_logs_are_independent():
    """processing a message does not mark it as received"""
    ps = add_processed_tuple(frozenset(), 'B', 3)
    assert not was_received(frozenset(), 'B', 3)
    assert was_processed(ps, 'B', 3)
