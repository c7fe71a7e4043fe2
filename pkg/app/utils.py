"""This module contains the utilities used throughout the application

Time values and metrics are extended integers: plain ints plus the two
float infinities below. Python's own arithmetic already follows the
extended-integer rules for every combination the protocol produces
(x + inf = inf, max(x, -inf) = x), so no wrapper type is needed.

Attributes:
    INF (float): positive infinity, used for "never" and unknown metrics
    NEG_INF (float): negative infinity, used for "already expired"

"""

import math
from types import MappingProxyType
from app.notices import ErrorNotice


INF = math.inf
NEG_INF = -math.inf


def is_finite(value):
    """Returns True when the extended integer is neither inf nor -inf"""
    return value not in (INF, NEG_INF)

def render_value(value):
    """Renders an extended integer the way traces and reports print it

    Returns:
        str: `inf`, `-inf` or the decimal integer

    """

    if value == INF:
        return 'inf'
    if value == NEG_INF:
        return '-inf'
    return str(int(value))

def render_map(mapping, render=str):
    """Renders a NodeId keyed map as `{(k,v),...}` in key order"""
    pairs = ','.join(f'({key},{render(mapping[key])})'
                     for key in sorted(mapping))
    return '{' + pairs + '}'

def render_ids(ids):
    """Renders a collection of NodeIds as `{a,b,...}` in NodeId order"""
    return '{' + ','.join(sorted(ids)) + '}'

def frozen_map(pairs=()):
    """Builds a read-only map from a mapping or an iterable of pairs

    Messages carry their key/value sets as these maps so a message can be
    shared between routers without any of them mutating it.

    """

    return MappingProxyType(dict(pairs))

def read_text_file(path):
    """Reads a UTF-8 text file

    Returns:
        dict: indicates whether the read succeeded, with the content or an
            error message

    """

    try:
        with open(path, encoding='utf-8') as handle:
            return {'is_successful': True, 'content': handle.read()}

    except OSError:
        return {'is_successful': False,
                'msg': ErrorNotice('scenario_missing', path=path).get_message()}

def write_text_file(path, text):
    """Writes text to a UTF-8 file, replacing any previous content

    Returns:
        dict: indicates whether the write operation threw an error

    """

    try:
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return {'is_successful': True}

    except OSError:
        return {'is_successful': False,
                'msg': ErrorNotice('trace_write', path=path).get_message()}
