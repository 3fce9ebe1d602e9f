"""Canonical text for assertion ASTs.

`parse_sva(pretty_print(a))` reproduces `a` structurally (printer round-trip).
"""

from __future__ import annotations

from ..rtl.emit import emit_expr
from .nodes import (
    PropAnd, PropImpl, PropNode, PropNot, PropOr, PropSeq, SeqBool, SeqDelay,
    SeqNode, SeqRepeat, SvaAssertion,
)


def _seq_text(seq: SeqNode) -> str:
    if isinstance(seq, SeqBool):
        return emit_expr(seq.expr)
    if isinstance(seq, SeqDelay):
        dly = f"##{seq.lo}" if seq.lo == seq.hi else f"##[{seq.lo}:{seq.hi}]"
        rhs = _seq_operand(seq.rhs)
        if seq.lhs is None:
            return f"{dly} {rhs}"
        return f"{_seq_operand(seq.lhs)} {dly} {rhs}"
    if isinstance(seq, SeqRepeat):
        rep = f"[*{seq.lo}]" if seq.lo == seq.hi else f"[*{seq.lo}:{seq.hi}]"
        return f"{_seq_operand(seq.base)} {rep}"
    raise TypeError(f"cannot print sequence {seq!r}")


def _seq_operand(seq: SeqNode) -> str:
    if isinstance(seq, SeqBool):
        return emit_expr(seq.expr)
    return f"({_seq_text(seq)})"


def _prop_text(prop: PropNode) -> str:
    if isinstance(prop, PropSeq):
        return _seq_text(prop.seq)
    if isinstance(prop, PropImpl):
        return f"{_seq_operand_for_impl(prop.antecedent)} {prop.op} {_prop_text(prop.consequent)}"
    if isinstance(prop, PropNot):
        return f"not {_prop_operand(prop.operand)}"
    if isinstance(prop, PropAnd):
        return f"{_prop_operand(prop.lhs)} and {_prop_operand(prop.rhs)}"
    if isinstance(prop, PropOr):
        return f"{_prop_operand(prop.lhs)} or {_prop_operand(prop.rhs)}"
    raise TypeError(f"cannot print property {prop!r}")


def _seq_operand_for_impl(seq: SeqNode) -> str:
    if isinstance(seq, SeqBool):
        return emit_expr(seq.expr)
    return f"({_seq_text(seq)})"


def _prop_operand(prop: PropNode) -> str:
    if isinstance(prop, PropSeq):
        return _seq_operand(prop.seq)
    return f"({_prop_text(prop)})"


def pretty_print(assertion: SvaAssertion, wrap: bool = True) -> str:
    parts = []
    if assertion.clock is not None:
        parts.append(f"@({assertion.clock.edge} {emit_expr(assertion.clock.signal)})")
    if assertion.disable is not None:
        parts.append(f"disable iff ({emit_expr(assertion.disable)})")
    parts.append(_prop_text(assertion.body))
    spec = " ".join(parts)
    label = f"{assertion.label} : " if assertion.label else ""
    if wrap:
        return f"{label}assert property ({spec});"
    return f"{label}{spec}"
