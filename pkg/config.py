"""
This module contains the testing and production configurations for this app

Attributes:
    BASE_DIR (str): The path that represents the app's root directory

"""

import os


BASE_DIR = os.path.abspath(os.path.dirname(__file__))


class Config:
    """The configuration object for the production environment

    Attributes:
        NETWORK_DEFAULTS (dict): values for network-wide scenario
            parameters a scenario leaves out
        ROUTER_DEFAULTS (dict): values for router parameters a scenario
            leaves out; t_hold_time is derived from the node count when
            absent
        DEBUG_CHECKS (bool): verify after every information base update
            that no further update is pending
        MICRO_STEP_CAP (int): per-router, per-tick processing limit

    """

    ENVIRONMENT = 'PRODUCTION'
    LOG_LEVEL = 'WARNING'
    DEBUG_CHECKS = False
    MICRO_STEP_CAP = 10 ** 6
    NETWORK_DEFAULTS = dict(lb=1, delta_b=1, metric_noise=0, seed=0,
                            ticks=400)
    ROUTER_DEFAULTS = dict(hp_maxjitter=3, hello_interval=6, h_hold_time=18,
                           tp_maxjitter=3, tc_interval=10, l_hold_time=6)


class TestConfig(Config):
    """The configuration object for the test environment

    Arguments
        debug_checks (bool): whether routers verify their consistency after
            every update
        micro_step_cap (int): the per-tick processing limit to use

    """

    ENVIRONMENT = 'TESTING'
    LOG_LEVEL = 'DEBUG'
    DEBUG_CHECKS = True

    def __init__(self, debug_checks=True, micro_step_cap=Config.MICRO_STEP_CAP):
        super(TestConfig, self).__init__()
        self.DEBUG_CHECKS = debug_checks
        self.MICRO_STEP_CAP = micro_step_cap
