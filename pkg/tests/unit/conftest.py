"""Houses all of the fixtures for the application's unit tests"""

import pytest
from click.testing import CliRunner
from app import TestConfig
from app.scenarios import parse_scenario
from app.simnet import build_network


@pytest.fixture
def test_config():
    """Returns a test configuration with consistency checks switched on"""
    return TestConfig()

@pytest.fixture
def click_runner(test_config):
    """Returns a curried runner for click tests

    The runner must be called with the command first and the arguments second.
    """
    runner = CliRunner(mix_stderr=False)

    def setup_config(cmd):
        """Function to initialize the context object

        Arguments:
            cmd (click.core.Command): The command line command to test
        """

        def arguments(args):
            """Function to load the arguments supplied to the runner

            Arguments:
                args (list): A list of arguments to pass to the cli interface

            Returns:
                click.testing.Result: Invoking the command with the
                    supplied arguments and config

            """

            return runner.invoke(cmd, args, obj=test_config)
        return arguments
    return setup_config

@pytest.fixture
def network_from(test_config):
    """Returns a builder of debug-checked networks from scenario text"""

    def build(text, **flags):
        scenario = parse_scenario(text).with_overrides(**flags)
        return build_network(scenario, debug_checks=True,
                             micro_step_cap=test_config.MICRO_STEP_CAP)
    return build

@pytest.fixture
def scenario_file(tmp_path):
    """Writes scenario text to a temporary file and returns its path"""

    def write(text, name='scenario.txt'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return write
