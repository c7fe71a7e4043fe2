"""This module contains the scenario format and the built-in demo scenarios.

A scenario is a line-oriented text file:

    node <id>
    param <name> <int> [node <id>]
    link <src> <dst> <metric> [bidi <metric>]
    at <tick> linkup <src> <dst> <metric> [bidi [<metric>]]
    at <tick> linkdown <src> <dst> [bidi]
    at <tick> metric <src> <dst> <metric> [bidi [<metric>]]
    flag <name> on|off
    offset <id> hello <t> tc <t>

Everything after `#` is a comment. Parameters left out take their values
from Config.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Tuple
from app import Config
from app.engines import RouterConfig, constraint_violations, t_hold_lower_bound
from app.errors import ConfigurationError, ScenarioError
from app.messages import NodeId
from app.simnet import NetworkParams, TopologyEvent


NETWORK_PARAMS = ('lb', 'delta_b', 'metric_noise', 'seed', 'ticks')
ROUTER_PARAMS = ('hp_maxjitter', 'tp_maxjitter', 'h_hold_time', 't_hold_time',
                 'l_hold_time', 'hello_interval', 'tc_interval')
FLAGS = ('bug_rfc7181', 'flood_all', 'process_tc_from_unknown')
EVENT_KINDS = ('linkup', 'linkdown', 'metric')


@dataclass
class Scenario:
    """A parsed scenario

    Attributes:
        params (dict): network and router parameters set for every node
        node_params (dict): NodeId -> router parameters set for that node
        offsets (dict): NodeId -> (hello, tc) offsets of the first deadlines

    """

    nodes: List[NodeId] = field(default_factory=list)
    links: List[Tuple[NodeId, NodeId, int]] = field(default_factory=list)
    params: Dict[str, int] = field(default_factory=dict)
    node_params: Dict[NodeId, Dict[str, int]] = field(default_factory=dict)
    events: List[TopologyEvent] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)
    offsets: Dict[NodeId, Tuple[int, int]] = field(default_factory=dict)

    def _network_value(self, name):
        return self.params.get(name, Config.NETWORK_DEFAULTS[name])

    @property
    def seed(self):
        return self._network_value('seed')

    @property
    def ticks(self):
        return self._network_value('ticks')

    def network_params(self):
        return NetworkParams(lb=self._network_value('lb'),
                             delta_b=self._network_value('delta_b'),
                             node_count=len(self.nodes), seed=self.seed,
                             metric_noise=self._network_value('metric_noise'))

    def router_values(self, ip):
        """Returns the resolved router parameters of one node"""
        values = dict(Config.ROUTER_DEFAULTS)
        values.update((name, value) for name, value in self.params.items()
                      if name in ROUTER_PARAMS)
        values.update(self.node_params.get(ip, {}))
        if 't_hold_time' not in values:
            lb, delta_b = self._network_value('lb'), self._network_value('delta_b')
            bound = t_hold_lower_bound(lb, delta_b, len(self.nodes),
                                       values['tc_interval'])
            values['t_hold_time'] = max(3 * values['tc_interval'], bound + 1)
        return values

    def router_config(self, ip, debug_checks=False):
        flags = {name: self.flags.get(name, False) for name in FLAGS}
        return RouterConfig(ip=ip, debug_checks=debug_checks,
                            **self.router_values(ip), **flags)

    def with_overrides(self, seed=None, **flags):
        """Returns a copy with the seed replaced and the given flags set on"""
        params = dict(self.params)
        if seed is not None:
            params['seed'] = seed
        merged = dict(self.flags)
        merged.update((name, True) for name, value in flags.items() if value)
        return replace(self, params=params, flags=merged)


class _Parser:
    """Parses scenario text one directive at a time"""

    def __init__(self):
        self.scenario = Scenario()
        self.lines = {}

    def integer(self, token, line, minimum=0):
        expected = 'a positive integer' if minimum > 0 \
            else 'a non-negative integer'
        if not (token.isascii() and token.isdigit()) or int(token) < minimum:
            raise ScenarioError('malformed_value', line=line, value=token,
                                expected=expected)
        return int(token)

    def malformed(self, tokens, line):
        raise ScenarioError('malformed_value', line=line,
                            value=' '.join(tokens),
                            expected=f'a valid `{tokens[0]}` directive')

    def parse(self, text):
        for number, raw in enumerate(text.splitlines(), start=1):
            tokens = raw.split('#', 1)[0].split()
            if not tokens:
                continue
            handler = getattr(self, f'directive_{tokens[0]}', None)
            if handler is None:
                raise ScenarioError('unknown_directive', line=number,
                                    directive=tokens[0])
            handler(tokens, number)
        self.validate()
        return self.scenario

    def directive_node(self, tokens, line):
        if len(tokens) != 2:
            self.malformed(tokens, line)
        if tokens[1] in self.scenario.nodes:
            raise ScenarioError('duplicate_node', line=line, node=tokens[1])
        self.scenario.nodes.append(tokens[1])

    def directive_param(self, tokens, line):
        if len(tokens) not in (3, 5) or (len(tokens) == 5
                                         and tokens[3] != 'node'):
            self.malformed(tokens, line)
        name = tokens[1]
        if name not in NETWORK_PARAMS + ROUTER_PARAMS:
            raise ScenarioError('unknown_param', line=line, name=name)
        value = self.integer(tokens[2], line)
        if len(tokens) == 3:
            self.scenario.params[name] = value
            return
        if name not in ROUTER_PARAMS:
            self.malformed(tokens, line)
        self.lines.setdefault('node_params', []).append((tokens[4], line))
        self.scenario.node_params.setdefault(tokens[4], {})[name] = value

    def directive_link(self, tokens, line):
        if len(tokens) not in (4, 6) or (len(tokens) == 6
                                         and tokens[4] != 'bidi'):
            self.malformed(tokens, line)
        src, dst = tokens[1], tokens[2]
        pairs = [(src, dst, self.integer(tokens[3], line, 1))]
        if len(tokens) == 6:
            pairs.append((dst, src, self.integer(tokens[5], line, 1)))
        for pair in pairs:
            if any(link[:2] == pair[:2] for link in self.scenario.links):
                raise ScenarioError('duplicate_link', line=line,
                                    src=pair[0], dst=pair[1])
            self.scenario.links.append(pair)
            self.lines.setdefault('links', []).append((pair[0], line))
            self.lines['links'].append((pair[1], line))

    def directive_at(self, tokens, line):
        if len(tokens) < 5 or tokens[2] not in EVENT_KINDS:
            self.malformed(tokens, line)
        at, kind, src, dst = self.integer(tokens[1], line), tokens[2], \
            tokens[3], tokens[4]
        rest = tokens[5:]
        metric = None
        if kind != 'linkdown':
            if not rest:
                self.malformed(tokens, line)
            metric, rest = self.integer(rest[0], line, 1), rest[1:]
        bidi, reverse = False, None
        if rest:
            if rest[0] != 'bidi' or len(rest) > 2 or (
                    kind == 'linkdown' and len(rest) > 1):
                self.malformed(tokens, line)
            bidi = True
            if len(rest) == 2:
                reverse = self.integer(rest[1], line, 1)
        self.scenario.events.append(
            TopologyEvent(at, kind, src, dst, metric, bidi, reverse))
        self.lines.setdefault('events', []).extend([(src, line), (dst, line)])

    def directive_flag(self, tokens, line):
        if len(tokens) != 3 or tokens[2] not in ('on', 'off'):
            self.malformed(tokens, line)
        if tokens[1] not in FLAGS:
            raise ScenarioError('unknown_flag', line=line, name=tokens[1])
        self.scenario.flags[tokens[1]] = tokens[2] == 'on'

    def directive_offset(self, tokens, line):
        if len(tokens) != 6 or tokens[2] != 'hello' or tokens[4] != 'tc':
            self.malformed(tokens, line)
        self.scenario.offsets[tokens[1]] = (self.integer(tokens[3], line),
                                            self.integer(tokens[5], line))
        self.lines.setdefault('offsets', []).append((tokens[1], line))

    def validate(self):
        declared = set(self.scenario.nodes)
        for references in self.lines.values():
            for node, line in references:
                if node not in declared:
                    raise ScenarioError('unknown_node', line=line, node=node)
        validate_constraints(self.scenario)


def validate_constraints(scenario):
    """Raises ConfigurationError when any router's parameters break a
    timing constraint or a start offset lies outside its window"""
    params = scenario.network_params()
    for ip in scenario.nodes:
        config = scenario.router_config(ip)
        violations = constraint_violations(config, params)
        if violations:
            raise ConfigurationError('constraint_violation', node=ip,
                                     inequality=violations[0])
        hello, tc = scenario.offsets.get(ip, (0, 0))
        for timer, value, interval in (('hello', hello, config.hello_interval),
                                       ('tc', tc, config.tc_interval)):
            if value > interval:
                raise ConfigurationError('offset_window', node=ip,
                                         timer=timer, value=value,
                                         interval=interval)

def parse_scenario(text):
    """Parses scenario text

    Returns:
        Scenario: the validated scenario

    Raises:
        ScenarioError: on a syntax error, with the line number
        ConfigurationError: when parameters break a timing constraint

    """

    return _Parser().parse(text)

def render_scenario(scenario):
    """Renders a scenario so that parsing the text gives it back"""
    lines = [f'node {node}' for node in scenario.nodes]
    lines += [f'param {name} {value}' for name, value in scenario.params.items()]
    for node, overrides in scenario.node_params.items():
        lines += [f'param {name} {value} node {node}'
                  for name, value in overrides.items()]
    lines += [f'flag {name} {"on" if value else "off"}'
              for name, value in scenario.flags.items()]
    lines += [f'link {src} {dst} {metric}'
              for src, dst, metric in scenario.links]
    lines += [f'offset {node} hello {hello} tc {tc}'
              for node, (hello, tc) in scenario.offsets.items()]
    lines += [f'at {event.tick} {event.render()}' for event in scenario.events]
    return '\n'.join(lines) + '\n'


FIG1_SCENARIO = """\
# 3x3 grid, row by row:
#   A B C
#   D E F
#   G H I
node A
node B
node C
node D
node E
node F
node G
node H
node I
link A B 1 bidi 1
link B C 1 bidi 1
link D E 1 bidi 1
link E F 1 bidi 1
link G H 1 bidi 1
link H I 1 bidi 1
link A D 1 bidi 1
link D G 1 bidi 1
link B E 1 bidi 1
link E H 1 bidi 1
link C F 1 bidi 1
link F I 1 bidi 1
param seed 1
"""

FIG2_SCENARIO = """\
# chain A - B - C; HELLOs staggered so that A, B and C each send once,
# then A and B send again. A single-value jitter window keeps the
# schedule exact.
node A
node B
node C
link A B 1 bidi 1
link B C 1 bidi 1
param lb 1
param delta_b 0
param hp_maxjitter 2
param hello_interval 9
param h_hold_time 27
param tp_maxjitter 2
param tc_interval 30
offset A hello 1 tc 30
offset B hello 4 tc 30
offset C hello 7 tc 30
param ticks 20
"""

FIG3_SCENARIO = """\
# route optimality counterexample; metrics differ per direction
#
#   S --1/1-- A --1/3-- B
#             |         |
#            5/5       4/1
#             |         |
#             C --1/6-- D
#
node S
node A
node B
node C
node D
link S A 1 bidi 1
link A B 1 bidi 3
link C D 1 bidi 6
link A C 5 bidi 5
link D B 1 bidi 4
param seed 1
"""

DEMO_SCENARIOS = {'fig1': FIG1_SCENARIO, 'fig2': FIG2_SCENARIO,
                  'fig3': FIG3_SCENARIO}
