"""This unit test suite tests the topology information base and routing."""

import pytest
from app.errors import ContractError
from app.topology import (AdvertisingRouterTuple, Route, TopologyTuple,
                          choose_optimal, increment_ansn, is_optimal,
                          link_universe, optimal_routing_sets,
                          purge_advertising_routers, purge_router_topology,
                          render_routes, shortest_paths,
                          update_advertising_routers, update_router_topology,
                          update_routing_set)
from app.utils import INF
from tests.unit.helpers import link


@pytest.fixture
def diamond():
    """A reaches D through B (1 + 1) or C (1 + 1); E hangs off D"""
    ls = frozenset([link('B', out_metric=1), link('C', out_metric=1)])
    rts = frozenset([TopologyTuple('B', 'D', INF, 1),
                     TopologyTuple('C', 'D', INF, 1),
                     TopologyTuple('D', 'E', INF, 3)])
    return ls, rts

@pytest.mark.topology
def test_update_advertising_routers_replaces_entry():
    """one tuple per originator, with the latest ANSN"""
    arrs = update_advertising_routers(frozenset(), 'B', 1, 30, 0)
    arrs = update_advertising_routers(arrs, 'B', 2, 30, 5)
    assert arrs == {AdvertisingRouterTuple('B', 2, 35)}

@pytest.mark.topology
def test_update_router_topology_replaces_originator_links():
    """links from an originator are replaced, the router itself skipped"""
    rts = frozenset([TopologyTuple('B', 'C', 10, 1),
                     TopologyTuple('D', 'C', 10, 1)])
    rts = update_router_topology('A', rts, 'B', 30, {'E': 2, 'A': 1}, 0)
    assert rts == {TopologyTuple('B', 'E', 30, 2),
                   TopologyTuple('D', 'C', 10, 1)}

@pytest.mark.topology
def test_purge_topology_sets():
    """tuples whose validity time has come are dropped"""
    arrs = frozenset([AdvertisingRouterTuple('B', 1, 5),
                      AdvertisingRouterTuple('C', 1, 6)])
    rts = frozenset([TopologyTuple('B', 'C', 5, 1)])
    assert purge_advertising_routers(arrs, 5) == \
        {AdvertisingRouterTuple('C', 1, 6)}
    assert purge_router_topology(rts, 5) == frozenset()

@pytest.mark.topology
def test_increment_ansn_on_selector_change():
    """the ANSN moves only when the routing MPR selectors change"""
    before = frozenset([link('B', rmpr_selector=True)])
    same = frozenset([link('B', rmpr_selector=True, in_metric=5)])
    after = frozenset([link('B'), link('C', rmpr_selector=True)])
    assert increment_ansn(same, before, 3) == 3
    assert increment_ansn(after, before, 3) == 4

@pytest.mark.topology
def test_link_universe_skips_unknown_metrics():
    """own symmetric links and learned links, finite metrics only"""
    ls = frozenset([link('B', out_metric=2), link('C', out_metric=INF),
                    link('D', symmetric=False)])
    rts = frozenset([TopologyTuple('B', 'E', INF, 4),
                     TopologyTuple('E', 'F', INF, INF)])
    assert sorted(link_universe('A', ls, rts, 0)) == \
        [('A', 'B', 2), ('B', 'E', 4)]

@pytest.mark.topology
def test_shortest_paths_canonical_predecessor(diamond):
    """ties keep the smallest predecessor whatever the link order"""
    ls, rts = diamond
    links = link_universe('A', ls, rts, 0)
    for ordering in (links, list(reversed(links))):
        dist, pred = shortest_paths('A', ordering)
        assert dist == {'A': 0, 'B': 1, 'C': 1, 'D': 2, 'E': 5}
        assert pred['D'] == 'B'

@pytest.mark.topology
def test_choose_optimal_builds_routes(diamond):
    """every reachable destination gets its shortest metric"""
    ls, rts = diamond
    assert choose_optimal('A', ls, rts, 0) == {
        Route('B', 'B', 1), Route('C', 'C', 1), Route('D', 'B', 2),
        Route('E', 'B', 5)}

@pytest.mark.topology
def test_optimal_routing_sets_enumerates_next_hop_choices(diamond):
    """both first hops towards D and E are optimal"""
    ls, rts = diamond
    sets = list(optimal_routing_sets('A', ls, rts, 0))

    assert len(sets) == 4
    assert all(is_optimal('A', ls, rts, 0, rs) for rs in sets)
    assert choose_optimal('A', ls, rts, 0) in sets

@pytest.mark.topology
def test_is_optimal_rejects_wrong_sets(diamond):
    """a missing route, a wrong metric or a wrong next hop is not optimal"""
    ls, rts = diamond
    best = choose_optimal('A', ls, rts, 0)
    assert not is_optimal('A', ls, rts, 0, best - {Route('E', 'B', 5)})
    assert not is_optimal('A', ls, rts, 0, (best - {Route('E', 'B', 5)})
                          | {Route('E', 'B', 6)})
    assert not is_optimal('A', ls, rts, 0, (best - {Route('D', 'B', 2)})
                          | {Route('D', 'D', 2)})

@pytest.mark.topology
def test_empty_universe_has_empty_routing_set():
    """a router without symmetric links routes nowhere"""
    assert choose_optimal('A', frozenset(), frozenset(), 0) == frozenset()
    assert is_optimal('A', frozenset(), frozenset(), 0, frozenset())

@pytest.mark.topology
def test_update_routing_set_keeps_an_optimal_set(diamond):
    """an optimal routing set survives, an outdated one is replaced"""
    ls, rts = diamond
    sets = list(optimal_routing_sets('A', ls, rts, 0))
    other = next(rs for rs in sets if rs != choose_optimal('A', ls, rts, 0))
    candidate = choose_optimal('A', ls, rts, 0)

    assert update_routing_set('A', ls, rts, 0, other, candidate) == other
    assert update_routing_set('A', ls, rts, 0, frozenset(),
                              candidate) == candidate

@pytest.mark.topology
def test_update_routing_set_rejects_bad_candidate(diamond):
    """a candidate that is not optimal violates the contract"""
    ls, rts = diamond
    with pytest.raises(ContractError):
        update_routing_set('A', ls, rts, 0, frozenset(), frozenset())

@pytest.mark.topology
def test_render_routes():
    """routes render in destination order"""
    rs = frozenset([Route('C', 'B', 2), Route('B', 'B', 1)])
    assert render_routes(rs) == '{ROUTE B via B m=1; ROUTE C via B m=2}'

@pytest.mark.topology
@pytest.mark.parametrize('now', [0, 5, 6, 40])
def test_topology_purges_are_idempotent(now):
    """purging twice leaves what purging once left"""
    arrs = frozenset([AdvertisingRouterTuple('B', 1, 5),
                      AdvertisingRouterTuple('C', 1, 6)])
    rts = frozenset([TopologyTuple('B', 'C', 5, 1),
                     TopologyTuple('C', 'D', 30, 2)])

    arrs_once = purge_advertising_routers(arrs, now)
    rts_once = purge_router_topology(rts, now)
    assert purge_advertising_routers(arrs_once, now) == arrs_once
    assert purge_router_topology(rts_once, now) == rts_once

@pytest.mark.topology
def test_router_topology_does_not_depend_on_arrival_order():
    """TCs from different originators commute, dests in any order"""
    dests = {'D': 2, 'E': 1}
    reordered = {'E': 1, 'D': 2}

    first = update_router_topology('A', frozenset(), 'B', 30, dests, 0)
    first = update_router_topology('A', first, 'C', 20, {'D': 4}, 0)
    second = update_router_topology('A', frozenset(), 'C', 20, {'D': 4}, 0)
    second = update_router_topology('A', second, 'B', 30, reordered, 0)

    assert first == second
    assert purge_router_topology(first, 25) == \
        purge_router_topology(second, 25) == \
        {TopologyTuple('B', 'D', 30, 2), TopologyTuple('B', 'E', 30, 1)}
