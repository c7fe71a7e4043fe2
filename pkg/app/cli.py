"""
The olsrv2-sim commands: run a scenario, check its routes, replay a demo

Attributes:
    CONTEXT_SETTINGS (dict): lets -h stand in for --help on every command
    EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_NON_CONVERGENCE (int): the exit
        codes of `run` and `check`
"""

import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
import click
from app import Config
from app.checkers import check_route_optimality, run_to_convergence
from app.demos import (counterexample_demo, flooding_demo,
                       hello_exchange_demo, render_counterexample_table)
from app.errors import SimulationError
from app.notices import ErrorNotice, InfoNotice
from app.scenarios import DEMO_SCENARIOS, parse_scenario
from app.simnet import build_network, render_information_bases, run_network
from app.trace import render_trace
from app.utils import read_text_file, write_text_file


CONTEXT_SETTINGS = dict(help_option_names=['-h', '--help'])

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_NON_CONVERGENCE = 3

logger = logging.getLogger(__name__)


def parse_seed_range(ctx, param, value):
    """Turns `a..b` into the inclusive range of seeds it names"""
    if value is None:
        return None
    match = re.fullmatch(r'(\d+)\.\.(\d+)', value, re.ASCII)
    if not match or int(match.group(1)) > int(match.group(2)):
        raise click.BadParameter(
            ErrorNotice('seed_range', value=value).get_message())
    return range(int(match.group(1)), int(match.group(2)) + 1)

def scenario_option(func):
    """Adds the required --scenario option"""
    return click.option('--scenario', '-s', required=True,
                        type=click.Path(dir_okay=False),
                        help='The scenario file to simulate.')(func)

def flag_options(func):
    """Adds the --bug-rfc7181 and --flood-all switches"""
    func = click.option('--flood-all', is_flag=True, default=False,
                        help='Every router forwards every first-seen TC.')(
                            func)
    return click.option('--bug-rfc7181', is_flag=True, default=False,
                        help='Select routing MPRs as RFC 7181 reads.')(func)

def _fail(ctx, message):
    click.echo(message, err=True)
    ctx.exit(EXIT_USAGE)

def _load_scenario(ctx, path, seed=None, **flags):
    """Returns the parsed scenario and the text it was parsed from"""
    status = read_text_file(path)
    if not status['is_successful']:
        _fail(ctx, status['msg'])
    text = status['content']
    try:
        return parse_scenario(text).with_overrides(seed=seed, **flags), text
    except SimulationError as exc:
        _fail(ctx, str(exc))

def check_scenario(scenario, window=None, budget=None, debug_checks=False,
                   micro_step_cap=Config.MICRO_STEP_CAP):
    """Runs a scenario to convergence and checks every routing set

    Returns:
        tuple: the exit code, the report lines and the network

    """

    network = build_network(scenario, debug_checks=debug_checks,
                            micro_step_cap=micro_step_cap)
    budget = scenario.ticks if budget is None else budget
    convergence = run_to_convergence(network, window, budget)
    if not convergence.converged:
        notice = ErrorNotice('non_convergence', budget=budget,
                             window=convergence.window)
        return EXIT_NON_CONVERGENCE, [notice.get_message()], network

    reports = check_route_optimality(network)
    lines = [InfoNotice('converged', tick=convergence.converged_at,
                        window=convergence.window).get_message()]
    lines += [report.render() for report in reports.values()]
    code = EXIT_OK if all(report.verdict for report in reports.values()) \
        else EXIT_VERDICT
    return code, lines, network

def check_seed(text, flags, window, budget, debug_checks, micro_step_cap,
               seed):
    """Checks one seed of a sweep; runs in a worker process"""
    try:
        scenario = parse_scenario(text).with_overrides(seed=seed, **flags)
        code, lines, _ = check_scenario(scenario, window, budget,
                                        debug_checks, micro_step_cap)
    except SimulationError as exc:
        return seed, EXIT_USAGE, [str(exc)]
    return seed, code, lines


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option('--verbose', '-v', is_flag=True, default=False,
              help='Log debug records to stderr.')
@click.pass_context
def interface(ctx, verbose):
    """olsrv2-sim: A deterministic OLSRv2 network simulator"""
    ctx.ensure_object(Config)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.DEBUG if verbose else ctx.obj.LOG_LEVEL,
                        format='%(levelname)s %(name)s: %(message)s')

@click.command(short_help='Runs a scenario and writes its trace.')
@scenario_option
@click.option('--ticks', '-t', type=click.IntRange(min=0),
              help='The number of ticks to run, the scenario\'s own by '
                   'default.')
@click.option('--seed', type=click.IntRange(min=0),
              help='Replaces the scenario\'s seed.')
@click.option('--trace', type=click.Path(dir_okay=False),
              help='Writes the trace to this file instead of stdout.')
@flag_options
@click.option('--dump', is_flag=True, default=False,
              help='Prints every router\'s information bases at the end.')
@click.pass_context
def run(ctx, scenario, ticks, seed, trace, bug_rfc7181, flood_all, dump):
    """Runs a scenario for a number of ticks.

    \b
    - The trace goes to stdout unless --trace names a file.
    - With --dump the final information bases follow the trace.
    """

    config = ctx.obj
    loaded, _ = _load_scenario(ctx, scenario, seed, bug_rfc7181=bug_rfc7181,
                               flood_all=flood_all)
    try:
        network = build_network(loaded, debug_checks=config.DEBUG_CHECKS,
                                micro_step_cap=config.MICRO_STEP_CAP)
        run_network(network, loaded.ticks if ticks is None else ticks)
    except SimulationError as exc:
        _fail(ctx, str(exc))

    text = render_trace(network.trace)
    if trace:
        status = write_text_file(trace, text)
        if not status['is_successful']:
            _fail(ctx, status['msg'])
        click.echo(InfoNotice('trace_written', count=len(network.trace),
                              path=trace).get_message())
    else:
        click.echo(text, nl=False)

    if dump:
        click.echo(render_information_bases(network), nl=False)

@click.command(short_help='Checks that a scenario converges to optimal '
                          'routes.')
@scenario_option
@click.option('--ticks', '-t', type=click.IntRange(min=1),
              help='The tick budget for convergence, the scenario\'s own by '
                   'default.')
@click.option('--seed', type=click.IntRange(min=0),
              help='Replaces the scenario\'s seed.')
@click.option('--seeds', callback=parse_seed_range,
              help='Checks every seed of the range a..b instead.')
@click.option('--jobs', '-j', type=click.IntRange(min=1), default=1,
              help='Worker processes for a seed sweep.')
@click.option('--window', '-w', type=click.IntRange(min=1),
              help='Ticks without a state change that count as converged.')
@click.option('--trace', type=click.Path(dir_okay=False),
              help='Writes the trace of a single check to this file.')
@flag_options
@click.pass_context
def check(ctx, scenario, ticks, seed, seeds, jobs, window, trace, bug_rfc7181,
          flood_all):
    """Runs a scenario to convergence and checks route optimality.

    \b
    - Exits 0 when every routing set is optimal, 1 when one is not and 3
      when the state did not settle within the tick budget.
    - With --seeds every seed is checked and the worst exit code wins.
    """

    config = ctx.obj
    flags = dict(bug_rfc7181=bug_rfc7181, flood_all=flood_all)
    loaded, text = _load_scenario(ctx, scenario, seed, **flags)

    if seeds is not None:
        worker = partial(check_seed, text, flags, window, ticks,
                         config.DEBUG_CHECKS, config.MICRO_STEP_CAP)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(worker, seeds))
        else:
            results = [worker(seed) for seed in seeds]

        for seed_, code, lines in results:
            click.echo(InfoNotice('sweep_result', seed=seed_,
                                  code=code).get_message())
            for line in lines:
                click.echo(f'  {line}')
        ctx.exit(max(code for _, code, _ in results))

    try:
        code, lines, network = check_scenario(loaded, window, ticks,
                                              config.DEBUG_CHECKS,
                                              config.MICRO_STEP_CAP)
    except SimulationError as exc:
        _fail(ctx, str(exc))

    for line in lines:
        click.echo(line, err=code == EXIT_NON_CONVERGENCE)
    if trace:
        status = write_text_file(trace, render_trace(network.trace))
        if not status['is_successful']:
            _fail(ctx, status['msg'])
    ctx.exit(code)

@click.command(short_help='Runs one of the built-in demos.')
@click.argument('name', type=click.Choice(sorted(DEMO_SCENARIOS)))
@click.option('--print-scenario', is_flag=True, default=False,
              help='Prints the demo\'s scenario text instead of running it.')
@click.pass_context
def demo(ctx, name, print_scenario):
    """Runs a built-in demo.

    \b
    - fig1: one TC flooded across a 3x3 grid, with and without flooding MPRs
    - fig2: the HELLO exchange on a 3-node chain, panel by panel
    - fig3: the route optimality counterexample, with and without the
      RFC 7181 routing MPR bug
    """

    if print_scenario:
        click.echo(DEMO_SCENARIOS[name], nl=False)
        return

    config = ctx.obj
    try:
        if name == 'fig1':
            for flood_all in (False, True):
                click.echo(flooding_demo(config, flood_all).render())
        elif name == 'fig2':
            for panel in hello_exchange_demo(config):
                click.echo(panel.render())
        else:
            results = [counterexample_demo(config, bug_mode)
                       for bug_mode in (True, False)]
            click.echo(render_counterexample_table(results))
    except SimulationError as exc:
        _fail(ctx, str(exc))

interface.add_command(run)
interface.add_command(check)
interface.add_command(demo)
