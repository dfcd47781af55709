# Copyright (c) IWE contributors.
# SPDX-License-Identifier: Apache-2.0
"""Python front end for the iwe engine.

Programs are pGCL source text or ``corpus:NAME``. States are dicts of integers.
Rationals come back as strings such as ``"-5/4"``; use :func:`to_fraction`.
"""

import json
from fractions import Fraction

from ._iwe import (  # noqa: F401
    DomainError,
    EvalError,
    IWEError,
    LimitUndetected,
    ParseError,
    corpus_names,
    corpus_source,
    format_expression,
    format_program,
)
from . import _iwe

__all__ = [
    "DomainError", "EvalError", "IWEError", "LimitUndetected", "ParseError",
    "corpus_names", "corpus_source", "format_expression", "format_program",
    "oracle", "to_fraction", "wp", "wpt",
]


def to_fraction(text):
    """Decode a rational string; ``"inf"`` becomes ``float("inf")``."""
    return float("inf") if text == "inf" else Fraction(text)


def wpt(program, post, witness=None, state=None, trace=False):
    """Mixed-sign expected value as a report dict with ``value.first`` and ``value.witness``."""
    return json.loads(_iwe.wpt_json(program, post, witness, state or {}, trace))


def wp(program, post, state=None):
    """Expected value of a non-negative post."""
    return json.loads(_iwe.wp_json(program, post, state or {}))


def oracle(program, post, state=None, depth=40):
    """Bounded enumeration of the output distribution plus the Jordan expectation of ``post``."""
    return json.loads(_iwe.oracle_json(program, post, state or {}, depth))
