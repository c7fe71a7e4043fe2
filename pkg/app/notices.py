"""This module contains the Notice classes that word every user-facing message.

Library errors and CLI output both draw their text from here, so a given
failure always reads the same whether it surfaces as an exception or as a
line printed by a command.
"""


class Notice():
    """The base class for the application notices

    Attributes:
        notice_types (list): the supported notice types, unsupported types
            will raise a ValueError

    Arguments:
        notice_type (str): the type of notice specified
        message (str): the supplied message

    """

    notice_types = ['error', 'notification']

    def __init__(self, notice_type, message):

        if notice_type not in self.notice_types:
            raise ValueError(f'{notice_type} is not a valid notice type.')
        self.message = message

    def __repr__(self):
        return f'Notice: {self.message}'

    def get_message(self):
        """Returns the instance's message"""
        return self.message


class ErrorNotice(Notice):
    """Class for generating error messages

    Attributes:
        error_templates (dict): the supported error types and their wording;
            the keyword arguments given to the constructor fill the
            template's fields

    Arguments:
        error_type (str): the type of error specified

    """

    error_templates = {
        'unknown_directive': 'line {line}: unknown directive `{directive}`.',
        'malformed_value': 'line {line}: `{value}` is not {expected}.',
        'duplicate_node': 'line {line}: node `{node}` is declared twice.',
        'unknown_node': 'line {line}: node `{node}` is not declared.',
        'duplicate_link': 'line {line}: link `{src}` -> `{dst}` is '
                          'declared twice.',
        'unknown_param': 'line {line}: unknown parameter `{name}`.',
        'unknown_flag': 'line {line}: unknown flag `{name}`.',
        'constraint_violation': 'Router `{node}` violates the timing '
                                'constraint `{inequality}`.',
        'offset_window': 'Router `{node}`: {timer} offset {value} lies '
                         'outside [0, {interval}].',
        'contract': 'Contract violated in `{operation}`: {detail}.',
        'undefined_input': '`{operation}` is undefined for a {variant} '
                           'message.',
        'livelock': 'Router `{node}` exceeded {cap} micro-steps in tick '
                    '{tick}.',
        'invariant': 'Router `{node}` broke an invariant at tick {tick}: '
                     '{detail}.',
        'topology_event': 'Topology event references unknown node `{node}`.',
        'scenario_missing': 'Scenario `{path}` could not be read.',
        'trace_write': 'Output `{path}` could not be written.',
        'non_convergence': 'No convergence within {budget} ticks '
                           '(window {window}).',
        'seed_range': '`{value}` is not a seed range of the form a..b.',
    }

    def __init__(self, error_type, **kwargs):

        if error_type not in self.error_templates:
            raise ValueError(f'{error_type} is not a valid error type.')

        self.error_type = error_type
        super(ErrorNotice, self).__init__(
            'error', self.error_templates[error_type].format(**kwargs))


class InfoNotice(Notice):
    """Class for generating informational messages

    Attributes:
        info_templates (dict): the supported message types and their wording

    Arguments:
        info_type (str): the type of message specified

    """

    info_templates = {
        'trace_written': '{count} trace events written to `{path}`.',
        'converged': 'Converged at tick {tick} (window {window}).',
        'sweep_result': 'seed={seed} exit={code}',
    }

    def __init__(self, info_type, **kwargs):

        if info_type not in self.info_templates:
            raise ValueError(f'{info_type} is not a valid message type.')

        super(InfoNotice, self).__init__(
            'notification', self.info_templates[info_type].format(**kwargs))
