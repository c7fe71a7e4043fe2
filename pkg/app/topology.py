"""This module contains the topology information base of a router.

It covers the advertising remote router set (latest ANSN per originator),
the router topology set (links learned from TC messages), ANSN
maintenance and the routing set.

A routing set is optimal when it holds exactly one shortest route to
every destination reachable over the router's link universe: its own
symmetric links plus every learned topology tuple. `choose_optimal`
builds the canonical optimal set and `is_optimal` recognizes any of them.
"""

import heapq
from dataclasses import dataclass
from itertools import product
from typing import FrozenSet
from app.errors import ContractError
from app.messages import NodeId
from app.neighborhood import symmetric_links
from app.utils import INF, render_value


@dataclass(frozen=True)
class AdvertisingRouterTuple:
    oip: NodeId
    ansn: int
    validity_time: float

    def render(self):
        return (f'AR {self.oip} ansn={self.ansn} '
                f'vt={render_value(self.validity_time)}')


@dataclass(frozen=True)
class TopologyTuple:
    """A link from `from_oip` to `dest_oip` learned from a TC"""
    from_oip: NodeId
    dest_oip: NodeId
    validity_time: float
    metric: float

    def render(self):
        return (f'RT {self.from_oip} -> {self.dest_oip} '
                f'm={render_value(self.metric)} '
                f'vt={render_value(self.validity_time)}')


@dataclass(frozen=True)
class Route:
    dest: NodeId
    next_hop: NodeId
    metric: float

    def render(self):
        return f'ROUTE {self.dest} via {self.next_hop} m={render_value(self.metric)}'


RoutingSet = FrozenSet[Route]


def update_advertising_routers(arrs, moip, mansn, vtime, now):
    """Records the latest ANSN from `moip`, valid until now + vtime"""
    kept = frozenset(ar for ar in arrs if ar.oip != moip)
    return kept | {AdvertisingRouterTuple(moip, mansn, now + vtime)}

def update_router_topology(ip, rts, moip, vtime, dests, now):
    """Replaces everything learned from `moip` with its latest dests"""
    kept = frozenset(tr for tr in rts if tr.from_oip != moip)
    return kept | {TopologyTuple(moip, dest, now + vtime, metric)
                   for dest, metric in dests.items() if dest != ip}

def purge_advertising_routers(arrs, now):
    """Drops the advertising routers whose validity has run out"""
    return frozenset(ar for ar in arrs if ar.validity_time > now)

def purge_router_topology(rts, now):
    """Drops the topology tuples whose validity has run out"""
    return frozenset(tr for tr in rts if tr.validity_time > now)

def increment_ansn(ls, prev_ls, ansn):
    """Bumps the ANSN when the set of routing MPR selectors has changed"""
    current = {lt.oip for lt in ls if lt.rmpr_selector}
    previous = {lt.oip for lt in prev_ls if lt.rmpr_selector}
    return ansn + 1 if current != previous else ansn

def link_universe(ip, ls, rts, now):
    """Returns the finite-cost links a router can route over

    Returns:
        list: (from, to, metric) triples, own links first

    """

    links = [(ip, lt.oip, lt.out_metric) for lt in symmetric_links(ls, now)]
    links.extend((tr.from_oip, tr.dest_oip, tr.metric) for tr in rts)
    return [link for link in links if link[2] != INF]

def shortest_paths(source, links):
    """Dijkstra over directed links with canonical predecessors

    Among the predecessors that give a node its shortest distance, the
    smallest NodeId is kept, so the result does not depend on the order of
    `links`.

    Returns:
        tuple: (dist, pred) maps; `source` has distance 0 and no predecessor

    """

    adjacency = {}
    for src, dst, metric in links:
        adjacency.setdefault(src, []).append((dst, metric))

    dist = {source: 0}
    pred = {}
    done = set()
    heap = [(0, source)]
    while heap:
        cost, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        for neighbor, metric in adjacency.get(node, ()):
            if neighbor in done:
                continue
            candidate = cost + metric
            best = dist.get(neighbor, INF)
            if candidate < best:
                dist[neighbor] = candidate
                pred[neighbor] = node
                heapq.heappush(heap, (candidate, neighbor))
            elif candidate == best and node < pred.get(neighbor, node):
                pred[neighbor] = node
    return dist, pred

def _first_hops(source, links, dist):
    """Maps every reachable node to the first hops of its shortest paths"""
    hops = {}
    incoming = {}
    for src, dst, metric in links:
        if src in dist and dst in dist and dist[src] + metric == dist[dst]:
            incoming.setdefault(dst, []).append(src)
    for node in sorted(dist, key=lambda node: (dist[node], node)):
        if node == source:
            continue
        hops[node] = set()
        for src in incoming.get(node, ()):
            hops[node] |= {node} if src == source else hops.get(src, set())
    return hops

def choose_optimal(ip, ls, rts, now):
    """Builds the canonical optimal routing set"""
    dist, pred = shortest_paths(ip, link_universe(ip, ls, rts, now))
    routes = set()
    next_hops = {}
    for node in sorted(dist, key=lambda node: (dist[node], node)):
        if node == ip:
            continue
        parent = pred[node]
        next_hops[node] = node if parent == ip else next_hops[parent]
        routes.add(Route(node, next_hops[node], dist[node]))
    return frozenset(routes)

def is_optimal(ip, ls, rts, now, rs):
    """Returns True when `rs` is one of the optimal routing sets"""
    links = link_universe(ip, ls, rts, now)
    dist, _ = shortest_paths(ip, links)
    hops = _first_hops(ip, links, dist)
    if {route.dest for route in rs} != set(hops) or len(rs) != len(hops):
        return False
    return all(route.metric == dist[route.dest]
               and route.next_hop in hops[route.dest] for route in rs)

def optimal_routing_sets(ip, ls, rts, now):
    """Yields every optimal routing set

    The number of sets is the product of the first-hop choices per
    destination, so this is meant for small test topologies.

    """

    links = link_universe(ip, ls, rts, now)
    dist, _ = shortest_paths(ip, links)
    hops = _first_hops(ip, links, dist)
    dests = sorted(hops)
    for choice in product(*(sorted(hops[dest]) for dest in dests)):
        yield frozenset(Route(dest, hop, dist[dest])
                        for dest, hop in zip(dests, choice))

def update_routing_set(ip, ls, rts, now, rs, rs_candidate):
    """Keeps `rs` if it is still optimal, otherwise takes `rs_candidate`"""
    if not is_optimal(ip, ls, rts, now, rs_candidate):
        raise ContractError('contract', operation='update_routing_set',
                            detail='the candidate routing set is not optimal')
    if is_optimal(ip, ls, rts, now, rs):
        return rs
    return rs_candidate

def render_routes(rs):
    """Renders a routing set sorted by destination"""
    return '{' + '; '.join(route.render() for route in
                           sorted(rs, key=lambda route: route.dest)) + '}'
