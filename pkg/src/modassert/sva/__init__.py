"""Assertion grammar: parsing, printing and validation."""

from .nodes import (
    Clocking, PropAnd, PropImpl, PropNode, PropNot, PropOr, PropSeq, SeqBool,
    SeqDelay, SeqNode, SeqRepeat, SvaAssertion, bool_leaves, referenced_signals,
)
from .parser import SvaSyntaxError, parse_sva
from .printer import pretty_print
from .validate import AssertionView, ValidationVerdict, is_trivial, validate

__all__ = [
    "AssertionView", "Clocking", "PropAnd", "PropImpl", "PropNode", "PropNot",
    "PropOr", "PropSeq", "SeqBool", "SeqDelay", "SeqNode", "SeqRepeat",
    "SvaAssertion", "SvaSyntaxError", "ValidationVerdict", "bool_leaves",
    "is_trivial", "parse_sva", "pretty_print", "referenced_signals", "validate",
]
