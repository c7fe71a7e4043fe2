"""Builders, brute-force oracles and hypothesis strategies shared by the
unit tests"""

from itertools import combinations
from hypothesis import strategies as st
from app.neighborhood import LinkTuple, TwoHopTuple
from app.utils import INF, NEG_INF


ROUTER = 'r'


def link(oip, symmetric=True, heard=True, validity=INF, in_metric=1,
         out_metric=1, **flags):
    """A link tuple whose timers are either unbounded or long expired"""
    return LinkTuple(oip, INF if symmetric else NEG_INF,
                     INF if heard or symmetric else NEG_INF, validity,
                     flags.get('fmpr', False), flags.get('rmpr', False),
                     flags.get('fmpr_selector', False),
                     flags.get('rmpr_selector', False), in_metric, out_metric)

def two_hop(one_hop_oip, two_hop_oip, in_metric=1, out_metric=1,
            validity=INF):
    return TwoHopTuple(one_hop_oip, two_hop_oip, validity, in_metric,
                       out_metric)

def scratch_distances(ls, twohop, now, members, one, two):
    """Distance of every 2-hop target through `members`, recomputed from
    the tuples without any shared code"""
    n1 = {lt.oip: lt for lt in ls if lt.symmetric_time > now}
    targets = {y.two_hop_oip for y in twohop if y.one_hop_oip in n1}
    distances = {}
    for target in targets:
        costs = [one(n1[x]) for x in members if x == target]
        costs += [one(n1[y.one_hop_oip]) + two(y) for y in twohop
                  if y.one_hop_oip in members and y.two_hop_oip == target]
        distances[target] = min(costs, default=INF)
    return distances

def scratch_valid_sets(ls, twohop, now, one, two):
    """Every subset of N1 that keeps all 2-hop distances, by brute force"""
    n1 = sorted(lt.oip for lt in ls if lt.symmetric_time > now)
    full = scratch_distances(ls, twohop, now, n1, one, two)
    return {frozenset(members)
            for size in range(len(n1) + 1)
            for members in combinations(n1, size)
            if scratch_distances(ls, twohop, now, members, one, two) == full}

def brute_force_distances(links, source):
    """Shortest distances by enumerating every simple path"""
    adjacency = {}
    for src, dst, metric in links:
        adjacency.setdefault(src, []).append((dst, metric))

    best = {source: 0}
    stack = [(source, 0, frozenset([source]))]
    while stack:
        node, cost, visited = stack.pop()
        for neighbor, metric in adjacency.get(node, ()):
            if neighbor in visited:
                continue
            total = cost + metric
            if total < best.get(neighbor, INF):
                best[neighbor] = total
            stack.append((neighbor, total, visited | {neighbor}))
    return best

def brute_force_routes(links, source):
    """The shortest distance to every destination and the first hops of
    all paths that reach it at that distance, by enumerating every simple
    path"""
    adjacency = {}
    for src, dst, metric in links:
        adjacency.setdefault(src, []).append((dst, metric))

    best = {}
    stack = [(source, 0, None, frozenset([source]))]
    while stack:
        node, cost, first, visited = stack.pop()
        for neighbor, metric in adjacency.get(node, ()):
            if neighbor in visited:
                continue
            hop, total = first or neighbor, cost + metric
            known = best.get(neighbor)
            if known is None or total < known[0]:
                best[neighbor] = (total, {hop})
            elif total == known[0]:
                known[1].add(hop)
            stack.append((neighbor, total, hop, visited | {neighbor}))
    return {dest: (cost, frozenset(hops))
            for dest, (cost, hops) in best.items()}


metrics = st.integers(min_value=1, max_value=8)


@st.composite
def neighborhoods(draw, max_n1=6):
    """A router's link set and 2-hop set, with timers that never expire

    Some link tuples are only HEARD and some 2-hop metrics unknown; 2-hop
    targets may also be 1-hop neighbors.

    """

    names = [f'n{index}' for index in range(max_n1)]
    n1 = draw(st.lists(st.sampled_from(names), max_size=max_n1, unique=True))
    ls = frozenset(link(oip, symmetric=draw(st.booleans()) or index == 0,
                        in_metric=draw(metrics), out_metric=draw(metrics))
                   for index, oip in enumerate(n1))

    pool = names + [f'x{index}' for index in range(5)]
    pairs = draw(st.lists(st.tuples(st.sampled_from(n1 or ['n0']),
                                    st.sampled_from(pool)),
                          max_size=14, unique=True))
    unknown = st.one_of(metrics, st.just(INF))
    twohop = frozenset(two_hop(x, y, draw(unknown), draw(unknown))
                       for x, y in pairs if x != y)
    return ls, twohop

@st.composite
def connected_scenarios(draw, min_nodes=4, max_nodes=10, one_way=True,
                        symmetric_metrics=False):
    """Scenario text for a random connected network with valid timing

    Every node joins through a bidirectional link with independent
    metrics per direction; a few extra links, some of them one-way, are
    added on top. With `symmetric_metrics` every link is bidirectional
    with the same metric both ways.

    """

    count = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    nodes = [f'n{index}' for index in range(count)]
    links = {}
    for index in range(1, count):
        parent = nodes[draw(st.integers(min_value=0, max_value=index - 1))]
        metric = draw(metrics)
        links[(parent, nodes[index])] = metric
        links[(nodes[index], parent)] = \
            metric if symmetric_metrics else draw(metrics)

    extras = draw(st.lists(st.tuples(st.sampled_from(nodes),
                                     st.sampled_from(nodes), st.booleans()),
                           max_size=count))
    for src, dst, bidi in extras:
        if src == dst or (src, dst) in links:
            continue
        metric = draw(metrics)
        if symmetric_metrics:
            links[(dst, src)] = metric
        elif bidi or not one_way:
            links[(dst, src)] = draw(metrics)
        links[(src, dst)] = metric

    lb = draw(st.integers(min_value=1, max_value=2))
    delta_b = draw(st.integers(min_value=0, max_value=1))
    slack = st.integers(min_value=0, max_value=3)
    hp_maxjitter = lb + delta_b + 1 + draw(slack)
    hello_interval = hp_maxjitter + 1 + draw(slack)
    h_hold_time = lb + 2 * delta_b + hello_interval + 1 + draw(slack)
    tp_maxjitter = lb + delta_b + 1 + draw(slack)
    tc_interval = tp_maxjitter + 1 + draw(slack)
    seed = draw(st.integers(min_value=0, max_value=10 ** 6))

    lines = [f'node {node}' for node in nodes]
    lines += [f'link {src} {dst} {metric}'
              for (src, dst), metric in sorted(links.items())]
    lines += [f'param lb {lb}', f'param delta_b {delta_b}',
              f'param hp_maxjitter {hp_maxjitter}',
              f'param hello_interval {hello_interval}',
              f'param h_hold_time {h_hold_time}',
              f'param tp_maxjitter {tp_maxjitter}',
              f'param tc_interval {tc_interval}', f'param seed {seed}']
    return '\n'.join(lines) + '\n'
