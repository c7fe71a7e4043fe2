"""This module contains the exceptions raised by the simulator.

Every exception wraps an ErrorNotice, so `str(exc)` is the catalog wording
and `exc.notice.error_type` identifies the failure for callers that need to
branch on it.
"""

from app.notices import ErrorNotice


class SimulationError(Exception):
    """Base class for every error raised by the simulator

    Arguments:
        error_type (str): an ErrorNotice error type
        **kwargs: the fields of the notice template

    """

    def __init__(self, error_type, **kwargs):
        self.notice = ErrorNotice(error_type, **kwargs)
        super(SimulationError, self).__init__(self.notice.get_message())


class ScenarioError(SimulationError):
    """A scenario file could not be parsed or failed validation"""


class ConfigurationError(SimulationError):
    """Router or network parameters violate a timing constraint"""

    def __init__(self, error_type, **kwargs):
        self.inequality = kwargs.get('inequality')
        super(ConfigurationError, self).__init__(error_type, **kwargs)


class ContractError(SimulationError):
    """A function was called outside its precondition"""


class TopologyEventError(SimulationError):
    """A topology event names a node the network does not have"""


class LivelockError(SimulationError):
    """A router kept working past the per-tick micro-step cap"""


class InvariantError(SimulationError):
    """A runtime consistency check failed"""
