"""This unit test suite tests the scenario format."""

import pytest
from hypothesis import given, settings
from app import Config
from app.errors import ConfigurationError, ScenarioError
from app.scenarios import (DEMO_SCENARIOS, FIG3_SCENARIO, parse_scenario,
                           render_scenario)
from app.simnet import TopologyEvent
from tests.unit.helpers import connected_scenarios


MINIMAL = """\
node A
node B   # trailing comment
link A B 1 bidi 2
"""


@pytest.mark.scenarios
def test_minimal_scenario():
    """two nodes and two directed links"""
    scenario = parse_scenario(MINIMAL)
    assert scenario.nodes == ['A', 'B']
    assert scenario.links == [('A', 'B', 1), ('B', 'A', 2)]
    assert scenario.seed == Config.NETWORK_DEFAULTS['seed']
    assert scenario.ticks == Config.NETWORK_DEFAULTS['ticks']

@pytest.mark.scenarios
def test_counterexample_scenario():
    """five nodes and ten directed links with their metrics"""
    scenario = parse_scenario(FIG3_SCENARIO)
    assert len(scenario.nodes) == 5
    assert [metric for _, _, metric in scenario.links] == \
        [1, 1, 1, 3, 1, 6, 5, 5, 1, 4]

@pytest.mark.scenarios
@pytest.mark.parametrize('line, error_type', [
    ('nodes A', 'unknown_directive'),
    ('link A B x', 'malformed_value'),
    ('link A B 0', 'malformed_value'),
    ('node A', 'duplicate_node'),
    ('link A C 1', 'unknown_node'),
    ('link A B 3', 'duplicate_link'),
    ('param speed 3', 'unknown_param'),
    ('flag turbo on', 'unknown_flag'),
    ('flag flood_all maybe', 'malformed_value'),
    ('at 3 linkup A B', 'malformed_value'),
    ('offset A hello 1', 'malformed_value'),
    ('param seed ²', 'malformed_value'),
    ('link A B ¹', 'malformed_value'),
    ('at ٣ linkdown A B', 'malformed_value'),
])
def test_parse_errors_name_the_line(line, error_type):
    """syntax errors are reported with their line number"""
    with pytest.raises(ScenarioError) as err:
        parse_scenario(MINIMAL + line + '\n')
    assert err.value.notice.error_type == error_type
    assert str(err.value).startswith('line 4:')

@pytest.mark.scenarios
def test_constraint_violation_names_the_inequality():
    """hp_maxjitter 2 with LB 2 and delta B 1 is rejected"""
    with pytest.raises(ConfigurationError) as err:
        parse_scenario(MINIMAL + 'param lb 2\nparam hp_maxjitter 2\n')
    assert err.value.inequality == 'LB + ÎB < hp_maxjitter'

@pytest.mark.scenarios
def test_zero_lb_is_a_constraint_violation():
    """a zero broadcast duration breaks the first inequality"""
    with pytest.raises(ConfigurationError) as err:
        parse_scenario(MINIMAL + 'param lb 0\n')
    assert err.value.inequality == '0 < LB'

@pytest.mark.scenarios
def test_offset_outside_window():
    """a start offset past its interval is rejected"""
    with pytest.raises(ConfigurationError):
        parse_scenario(MINIMAL + 'offset A hello 7 tc 0\n')

@pytest.mark.scenarios
def test_directives_fill_the_scenario():
    """params, per-node params, flags, offsets and events are kept"""
    scenario = parse_scenario(MINIMAL + '\n'.join([
        'param seed 9', 'param hello_interval 7 node B', 'flag flood_all on',
        'offset A hello 2 tc 3', 'at 5 metric A B 4 bidi 6',
        'at 8 linkdown A B']) + '\n')

    assert scenario.seed == 9
    assert scenario.router_values('B')['hello_interval'] == 7
    assert scenario.router_values('A')['hello_interval'] == \
        Config.ROUTER_DEFAULTS['hello_interval']
    assert scenario.router_config('A').flood_all
    assert scenario.offsets == {'A': (2, 3)}
    assert scenario.events == [TopologyEvent(5, 'metric', 'A', 'B', 4, True, 6),
                               TopologyEvent(8, 'linkdown', 'A', 'B')]

@pytest.mark.scenarios
def test_t_hold_time_is_derived_from_the_node_count():
    """without a t_hold_time the derived value satisfies its bound"""
    values = parse_scenario(MINIMAL).router_values('A')
    assert values['t_hold_time'] == 3 * values['tc_interval']

@pytest.mark.scenarios
def test_with_overrides_leaves_the_original():
    """overrides produce a new scenario"""
    scenario = parse_scenario(MINIMAL)
    changed = scenario.with_overrides(seed=3, bug_rfc7181=True,
                                      flood_all=False)
    assert changed.seed == 3 and changed.flags == {'bug_rfc7181': True}
    assert scenario.flags == {} and scenario.seed == 0

@pytest.mark.scenarios
@pytest.mark.parametrize('name', sorted(DEMO_SCENARIOS))
def test_demo_scenarios_round_trip(name):
    """rendering a demo and parsing it back gives the same scenario"""
    scenario = parse_scenario(DEMO_SCENARIOS[name])
    assert parse_scenario(render_scenario(scenario)) == scenario

@pytest.mark.scenarios
@pytest.mark.property
@settings(max_examples=50, deadline=None)
@given(connected_scenarios())
def test_random_scenarios_round_trip(text):
    """rendering any parsed scenario and parsing it back is lossless"""
    scenario = parse_scenario(text)
    assert parse_scenario(render_scenario(scenario)) == scenario
