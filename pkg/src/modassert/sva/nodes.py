"""AST for the supported assertion-property grammar.

Boolean leaves reuse the RTL expression nodes; on top of them sit sequences
(delays `##n`/`##[n:m]` and consecutive repetition `[*n]`/`[*n:m]`) and
properties (implication, and/or/not).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..rtl.nodes import Expr, Ident, Index, RangeSelect, SysCall

__all__ = [
    "Clocking", "SvaAssertion",
    "PropNode", "PropSeq", "PropNot", "PropAnd", "PropOr", "PropImpl",
    "SeqNode", "SeqBool", "SeqDelay", "SeqRepeat",
    "bool_leaves", "referenced_signals",
]


class SeqNode:
    pass


@dataclass
class SeqBool(SeqNode):
    expr: Expr


@dataclass
class SeqDelay(SeqNode):
    lhs: SeqNode | None          # None => leading delay from the start point
    lo: int
    hi: int
    rhs: SeqNode


@dataclass
class SeqRepeat(SeqNode):
    base: SeqNode
    lo: int
    hi: int


class PropNode:
    pass


@dataclass
class PropSeq(PropNode):
    seq: SeqNode


@dataclass
class PropNot(PropNode):
    operand: PropNode


@dataclass
class PropAnd(PropNode):
    lhs: PropNode
    rhs: PropNode


@dataclass
class PropOr(PropNode):
    lhs: PropNode
    rhs: PropNode


@dataclass
class PropImpl(PropNode):
    antecedent: SeqNode
    op: str                      # "|->" or "|=>"
    consequent: PropNode


@dataclass
class Clocking:
    edge: str                    # posedge | negedge
    signal: Expr


@dataclass
class SvaAssertion:
    body: PropNode
    clock: Clocking | None = None
    disable: Expr | None = None
    label: str | None = None
    src_text: str = field(default="", compare=False)


def _seq_bools(seq: SeqNode, out: list[Expr]) -> None:
    if isinstance(seq, SeqBool):
        out.append(seq.expr)
    elif isinstance(seq, SeqDelay):
        if seq.lhs is not None:
            _seq_bools(seq.lhs, out)
        _seq_bools(seq.rhs, out)
    elif isinstance(seq, SeqRepeat):
        _seq_bools(seq.base, out)


def bool_leaves(prop: PropNode) -> list[Expr]:
    """All boolean leaf expressions of a property, in syntactic order."""
    out: list[Expr] = []

    def walk(p: PropNode) -> None:
        if isinstance(p, PropSeq):
            _seq_bools(p.seq, out)
        elif isinstance(p, PropNot):
            walk(p.operand)
        elif isinstance(p, (PropAnd, PropOr)):
            walk(p.lhs)
            walk(p.rhs)
        elif isinstance(p, PropImpl):
            _seq_bools(p.antecedent, out)
            walk(p.consequent)

    walk(prop)
    return out


def _expr_signals(e: Expr, out: list[str]) -> None:
    if isinstance(e, Ident):
        if e.name not in out:
            out.append(e.name)
    elif isinstance(e, SysCall):
        for a in e.args:
            _expr_signals(a, out)
    elif isinstance(e, (Index, RangeSelect)):
        _expr_signals(e.base, out)
        # select bounds are constants in this grammar; still scan for names
        for sub in ([e.index] if isinstance(e, Index) else [e.msb, e.lsb]):
            _expr_signals(sub, out)
    else:
        for attr in ("lhs", "rhs", "operand", "cond", "then", "other",
                     "count", "value"):
            sub = getattr(e, attr, None)
            if sub is not None and isinstance(sub, Expr):
                _expr_signals(sub, out)
        for part in getattr(e, "parts", []) or []:
            _expr_signals(part, out)


def referenced_signals(assertion: SvaAssertion) -> list[str]:
    """Signal names (possibly dotted) used anywhere in the assertion,
    including clock and disable expressions; first occurrence order."""
    out: list[str] = []
    for leaf in bool_leaves(assertion.body):
        _expr_signals(leaf, out)
    if assertion.clock is not None:
        _expr_signals(assertion.clock.signal, out)
    if assertion.disable is not None:
        _expr_signals(assertion.disable, out)
    return out
