"""This module contains the interface information base of a router.

A router's link set records its 1-hop neighbors with their timers, MPR
flags and metrics; its 2-hop set records the symmetric neighbors of its
symmetric neighbors. Both are frozensets of frozen tuples and every
function here returns a new set rather than changing its argument.

Flooding and routing MPR selection is also done here:

- valid_fmprs / valid_rmprs enumerate every valid MPR set (test oracle)
- is_valid_fmpr_set / is_valid_rmpr_set check one candidate
- choose_fmprs / choose_rmprs pick one valid set deterministically
"""

from dataclasses import dataclass, replace
from itertools import combinations
from typing import FrozenSet
from app.errors import ContractError
from app.messages import MprRole, NodeId, Status
from app.utils import INF, NEG_INF, render_value


FLOODING_ROLES = (MprRole.FLOODING, MprRole.FLOOD_ROUTE)
ROUTING_ROLES = (MprRole.ROUTING, MprRole.FLOOD_ROUTE)


@dataclass(frozen=True)
class LinkTuple:
    """A router's record of one 1-hop neighbor"""
    oip: NodeId
    symmetric_time: float
    heard_time: float
    validity_time: float
    fmpr: bool
    rmpr: bool
    fmpr_selector: bool
    rmpr_selector: bool
    in_metric: float
    out_metric: float

    def status(self, now):
        """Returns the Status of the link at time `now`"""
        if self.symmetric_time > now:
            return Status.SYMMETRIC
        if self.heard_time > now:
            return Status.HEARD
        return Status.LOST

    def render(self):
        flags = ','.join('T' if flag else 'F' for flag in (
            self.fmpr, self.rmpr, self.fmpr_selector, self.rmpr_selector))
        times = ','.join(render_value(value) for value in (
            self.symmetric_time, self.heard_time, self.validity_time))
        return (f'L ({self.oip},{times},{flags},'
                f'{render_value(self.in_metric)},'
                f'{render_value(self.out_metric)})')


@dataclass(frozen=True)
class TwoHopTuple:
    """A router's record of one 2-hop neighbor reached via a 1-hop one"""
    one_hop_oip: NodeId
    two_hop_oip: NodeId
    validity_time: float
    in_metric: float
    out_metric: float

    def render(self):
        return (f'N2 ({self.one_hop_oip},{self.two_hop_oip},'
                f'{render_value(self.validity_time)},'
                f'{render_value(self.in_metric)},'
                f'{render_value(self.out_metric)})')


LinkSet = FrozenSet[LinkTuple]
TwoHopSet = FrozenSet[TwoHopTuple]


def link_status(lt, now):
    """Returns the Status of a link tuple at time `now`"""
    return lt.status(now)

def find_link(ls, oip):
    """Returns the link tuple for `oip`, or None"""
    for lt in ls:
        if lt.oip == oip:
            return lt
    return None

def is_symmetric_neighbor(ls, oip, now):
    """Returns True when `oip` has a SYMMETRIC link tuple"""
    lt = find_link(ls, oip)
    return lt is not None and lt.status(now) is Status.SYMMETRIC

def symmetric_links(ls, now):
    """Returns the symmetric 1-hop neighborhood N1"""
    return frozenset(lt for lt in ls if lt.status(now) is Status.SYMMETRIC)

def _update_link(ls, moip, **changes):
    return frozenset(replace(lt, **changes) if lt.oip == moip else lt
                     for lt in ls)

def add_link_tuple(ls, moip, vtime, in_metric, now):
    """Adds a fresh, not yet heard, link tuple for `moip`

    An existing tuple for `moip` is left as it is, including its in_metric.

    """

    if in_metric == INF:
        raise ContractError('contract', operation='add_link_tuple',
                            detail='in_metric must be finite')
    if find_link(ls, moip) is not None:
        return ls
    return ls | {LinkTuple(moip, NEG_INF, NEG_INF, now + vtime,
                           False, False, False, False, in_metric, INF)}

def update_link_out_metrics(ip, ls, moip, in_metrics):
    """Copies the metric `moip` measured for its link from us"""
    if ip not in in_metrics:
        return ls
    return _update_link(ls, moip, out_metric=in_metrics[ip])

def update_symmetric_time(ip, ls, moip, vtime, statuses, htime, now):
    """Extends or revokes symmetry with `moip` based on its HELLO

    Parameters:
        statuses (Mapping): the statuses listed in the HELLO of `moip`
        htime (int): the l_hold_time parameter

    """

    if ip not in statuses:
        return ls
    if statuses[ip] is not Status.LOST:
        return _update_link(ls, moip, symmetric_time=now + vtime)
    if is_symmetric_neighbor(ls, moip, now):
        return _update_link(ls, moip, symmetric_time=NEG_INF,
                            validity_time=now + htime)
    return ls

def update_heard_time(ls, moip, vtime, now):
    """Extends how long `moip` counts as heard"""
    lt = find_link(ls, moip)
    if lt is None:
        return ls
    return _update_link(ls, moip,
                        heard_time=max(now + vtime, lt.symmetric_time))

def update_validity_time(ls, moip, htime, now):
    """Keeps the link tuple of `moip` for htime past its heard time"""
    lt = find_link(ls, moip)
    if lt is None:
        return ls
    return _update_link(ls, moip, validity_time=max(lt.heard_time + htime,
                                                    lt.validity_time))

def _update_selector(ip, ls, moip, statuses, mprs, roles, field):
    if mprs.get(ip) in roles:
        return _update_link(ls, moip, **{field: True})
    if statuses.get(ip) is Status.SYMMETRIC:
        return _update_link(ls, moip, **{field: False})
    return ls

def update_fmpr_selectors(ip, ls, moip, statuses, mprs, now):
    """Records whether `moip` has chosen us as a flooding MPR"""
    return _update_selector(ip, ls, moip, statuses, mprs, FLOODING_ROLES,
                            'fmpr_selector')

def update_rmpr_selectors(ip, ls, moip, statuses, mprs, now):
    """Records whether `moip` has chosen us as a routing MPR"""
    return _update_selector(ip, ls, moip, statuses, mprs, ROUTING_ROLES,
                            'rmpr_selector')

def add_2hop_tuples(ip, ls, twohop_set, moip, statuses, now):
    """Adds a 2-hop tuple for every new symmetric neighbor of `moip`

    Metrics start unknown and the validity time starts expired; the
    update_2hop_* functions fill them in from the same HELLO.

    """

    if not is_symmetric_neighbor(ls, moip, now):
        return twohop_set
    known = {n2.two_hop_oip for n2 in twohop_set if n2.one_hop_oip == moip}
    fresh = {TwoHopTuple(moip, oip, NEG_INF, INF, INF)
             for oip, status in statuses.items()
             if status is Status.SYMMETRIC and oip != ip and oip not in known}
    return twohop_set | fresh

def _update_2hop(ls, twohop_set, moip, now, values, field):
    if not is_symmetric_neighbor(ls, moip, now):
        return twohop_set
    return frozenset(
        replace(n2, **{field: values[n2.two_hop_oip]})
        if n2.one_hop_oip == moip and n2.two_hop_oip in values else n2
        for n2 in twohop_set)

def update_2hop_in_metrics(ls, twohop_set, moip, in_metrics, now):
    """Copies the in metrics `moip` reports onto its 2-hop tuples"""
    return _update_2hop(ls, twohop_set, moip, now, in_metrics, 'in_metric')

def update_2hop_out_metrics(ls, twohop_set, moip, out_metrics, now):
    """Copies the out metrics `moip` reports onto its 2-hop tuples"""
    return _update_2hop(ls, twohop_set, moip, now, out_metrics, 'out_metric')

def update_2hop_time(ip, ls, twohop_set, moip, vtime, statuses, now):
    """Refreshes the 2-hop tuples `moip` still reports as symmetric"""
    refreshed = {oip: now + vtime for oip, status in statuses.items()
                 if status is Status.SYMMETRIC and oip != ip}
    return _update_2hop(ls, twohop_set, moip, now, refreshed, 'validity_time')

def purge_link_set(ls, now):
    """Drops expired link tuples and clears the flags of non-symmetric ones"""
    kept = set()
    for lt in ls:
        if lt.validity_time <= now:
            continue
        if lt.status(now) is not Status.SYMMETRIC:
            lt = replace(lt, fmpr=False, rmpr=False, fmpr_selector=False,
                         rmpr_selector=False)
        kept.add(lt)
    return frozenset(kept)

def purge_2hop_set(ls, twohop_set, now):
    """Keeps unexpired 2-hop tuples anchored at a symmetric neighbor"""
    anchors = {lt.oip for lt in symmetric_links(ls, now)}
    return frozenset(n2 for n2 in twohop_set
                     if n2.validity_time > now and n2.one_hop_oip in anchors)


class _Coverage:
    """Distances from every 2-hop target to a router through N1

    `best` maps each target to its distance over the whole of N1 and
    `covers` maps each N1 member to the targets it alone reaches at that
    best distance. A subset M of N1 keeps every distance exactly when each
    target with a finite best distance is covered by some member of M.

    """

    def __init__(self, ls, twohop_set, now, one_hop, two_hop):
        self.n1 = {lt.oip: lt for lt in symmetric_links(ls, now)}
        n2 = [y for y in twohop_set if y.one_hop_oip in self.n1]
        self.targets = sorted({y.two_hop_oip for y in n2})

        reach = {oip: {} for oip in self.n1}
        for oip, lt in self.n1.items():
            if oip in self.targets:
                reach[oip][oip] = one_hop(lt)
        for y in n2:
            x = self.n1[y.one_hop_oip]
            cost = one_hop(x) + two_hop(y)
            current = reach[x.oip].get(y.two_hop_oip, INF)
            reach[x.oip][y.two_hop_oip] = min(current, cost)
        self.reach = reach

        self.best = {target: min([INF] + [reach[oip].get(target, INF)
                                          for oip in self.n1])
                     for target in self.targets}
        self.covers = {
            oip: frozenset(target for target in self.targets
                           if self.best[target] != INF
                           and reach[oip].get(target, INF) == self.best[target])
            for oip in self.n1}

    def required(self):
        return frozenset(target for target in self.targets
                         if self.best[target] != INF)

    def distance(self, target, members):
        return min([INF] + [self.reach[oip].get(target, INF)
                            for oip in members])

    def is_valid(self, members):
        members = set(members)
        if not members <= set(self.n1):
            return False
        return all(self.distance(target, members) == self.best[target]
                   for target in self.targets)

    def enumerate(self):
        oips = sorted(self.n1)
        for size in range(len(oips) + 1):
            for members in combinations(oips, size):
                if self.is_valid(members):
                    yield frozenset(self.n1[oip] for oip in members)

    def choose(self):
        """Greedy set cover, seeded with the members no target can avoid"""
        uncovered = set(self.required())
        chosen = set()
        for target in sorted(uncovered):
            coverers = [oip for oip in self.n1 if target in self.covers[oip]]
            if len(coverers) == 1:
                chosen.add(coverers[0])
        for oip in chosen:
            uncovered -= self.covers[oip]

        while uncovered:
            pick = min(self.n1, key=lambda oip: (
                -len(self.covers[oip] & uncovered), oip))
            chosen.add(pick)
            uncovered -= self.covers[pick]

        for oip in sorted(chosen, reverse=True):
            if self.is_valid(chosen - {oip}):
                chosen.discard(oip)
        return frozenset(self.n1[oip] for oip in chosen)


def _hop(lt):
    return 1

def _two_hops(y):
    return 1

def _flooding_coverage(ls, twohop_set, now):
    return _Coverage(ls, twohop_set, now, _hop, _two_hops)

def _routing_coverage(ls, twohop_set, now, bug_mode):
    if bug_mode:
        return _Coverage(ls, twohop_set, now, lambda lt: lt.in_metric,
                         lambda y: y.out_metric)
    return _Coverage(ls, twohop_set, now, lambda lt: lt.in_metric,
                     lambda y: y.in_metric)

def valid_fmprs(ls, twohop_set, now):
    """Enumerates every flooding MPR set preserving hop distances

    Exponential in |N1|; the engine uses choose_fmprs instead.

    Returns:
        list: frozensets of link tuples

    """

    return list(_flooding_coverage(ls, twohop_set, now).enumerate())

def is_valid_fmpr_set(ls, twohop_set, now, members):
    """Tells whether `members` reach every 2-hop node in two hops"""
    return _flooding_coverage(ls, twohop_set, now).is_valid(
        lt.oip for lt in members)

def choose_fmprs(ls, twohop_set, now):
    """Greedily picks a small valid flooding MPR set"""
    return _flooding_coverage(ls, twohop_set, now).choose()

def valid_rmprs(ls, twohop_set, now, bug_mode=False):
    """Enumerates every routing MPR set preserving metric distances

    With `bug_mode` the 2-hop leg is costed with the outgoing metric of
    the 1-hop neighbor, which is how RFC 7181 section 18.5 reads.

    """

    return list(_routing_coverage(ls, twohop_set, now, bug_mode).enumerate())

def is_valid_rmpr_set(ls, twohop_set, now, members, bug_mode=False):
    """Tells whether `members` keep every 2-hop metric distance"""
    return _routing_coverage(ls, twohop_set, now, bug_mode).is_valid(
        lt.oip for lt in members)

def choose_rmprs(ls, twohop_set, now, bug_mode=False):
    """Greedily picks a small valid routing MPR set"""
    return _routing_coverage(ls, twohop_set, now, bug_mode).choose()

def _flagged(ls, field):
    return frozenset(lt for lt in ls if getattr(lt, field))

def _apply_mprs(ls, coverage, chosen, field, operation):
    if not coverage.is_valid(lt.oip for lt in chosen):
        raise ContractError('contract', operation=operation,
                            detail='the proposed MPR set is not valid')
    if coverage.is_valid(lt.oip for lt in _flagged(ls, field)):
        return ls
    members = {lt.oip for lt in chosen}
    return frozenset(replace(lt, **{field: lt.oip in members}) for lt in ls)

def update_fmprs(ls, twohop_set, now, fmprs):
    """Replaces the flooding MPR flags with `fmprs` if they are invalid"""
    return _apply_mprs(ls, _flooding_coverage(ls, twohop_set, now), fmprs,
                       'fmpr', 'update_fmprs')

def update_rmprs(ls, twohop_set, now, rmprs, bug_mode=False):
    """Replaces the routing MPR flags with `rmprs` if they are invalid"""
    return _apply_mprs(ls, _routing_coverage(ls, twohop_set, now, bug_mode),
                       rmprs, 'rmpr', 'update_rmprs')

def flagged_fmprs(ls):
    """Returns the link tuples flagged as flooding MPRs"""
    return _flagged(ls, 'fmpr')

def flagged_rmprs(ls):
    """Returns the link tuples flagged as routing MPRs"""
    return _flagged(ls, 'rmpr')
