"""This integration suite runs the built-in demos end to end."""

import pytest
from app.demos import (HELLO_PANELS, counterexample_demo, flooding_demo,
                       hello_exchange_demo, render_counterexample_table)
from app.scenarios import FIG1_SCENARIO, parse_scenario


@pytest.mark.acceptance
def test_counterexample_with_rfc_selection(test_config):
    """D picks C as routing MPR and S ends up with a route of 7"""
    result = counterexample_demo(test_config, bug_mode=True)

    assert result.converged_at is not None
    assert 'C' in result.d_rmprs and 'B' not in result.d_rmprs
    assert result.s_to_d == 7
    assert not result.report.verdict
    assert ('D', 7, 6) in result.report.suboptimal

@pytest.mark.acceptance
def test_counterexample_with_corrected_selection(test_config):
    """D picks B as routing MPR and S reaches D at cost 6"""
    result = counterexample_demo(test_config, bug_mode=False)

    assert 'B' in result.d_rmprs
    assert result.s_to_d == 6
    assert result.report.verdict

@pytest.mark.acceptance
def test_counterexample_table(test_config):
    """the table lists the RFC row first"""
    table = render_counterexample_table(
        [counterexample_demo(test_config, bug_mode)
         for bug_mode in (True, False)])
    assert table.splitlines()[0].split() == ['mode', 'D', 'rmprs', 'S->D',
                                            'verdict']
    assert 'OPT n=S verdict=false missing={} subopt={(D,7,6)}' in table

@pytest.mark.acceptance
def test_flooding_with_mprs(test_config):
    """three broadcasts carry E's TC to all nine routers"""
    result = flooding_demo(test_config)

    assert result.sqn is not None
    assert result.fmprs == {'B', 'H'}
    assert result.broadcasts == 3
    assert result.coverage == frozenset(parse_scenario(FIG1_SCENARIO).nodes)

@pytest.mark.acceptance
def test_flooding_to_everyone(test_config):
    """without MPRs every router broadcasts the TC once"""
    result = flooding_demo(test_config, flood_all=True)

    assert result.broadcasts == 9
    assert len(result.coverage) == 9

@pytest.mark.acceptance
def test_hello_exchange_panels(test_config):
    """each panel of the HELLO exchange is reached at its tick"""
    panels = hello_exchange_demo(test_config)

    assert [panel.label for panel in panels] == \
        [label for label, _, _ in HELLO_PANELS]
    assert [panel.tick for panel in panels] == [2, 5, 8, 10, 13]
