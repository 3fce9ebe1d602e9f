"""Assertion validation: syntax, naming-template conformance, signal
resolution against the design graph, and triviality flagging.

Hierarchical references must use module-type-qualified names,
"<module>.<signal>"; instance-qualified names are template violations.
Bare names resolve against the assertion's binding module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graph import DesignGraph
from ..rtl.nodes import BinOp, Expr, Ident, Index, Number, RangeSelect, SysCall, Ternary, UnaryOp
from .nodes import PropImpl, PropNode, SvaAssertion, bool_leaves, referenced_signals
from .parser import SvaSyntaxError, parse_sva


@dataclass
class AssertionView:
    """Minimal assertion record accepted by validate()."""
    id: str
    module: str | None
    sva_text: str


@dataclass
class ValidationVerdict:
    assertion_id: str
    syntax: bool
    syntax_message: str | None = None
    template: bool = True
    template_violations: list[str] = field(default_factory=list)
    resolution: bool = True
    unresolved: list[str] = field(default_factory=list)
    trivial: bool = False

    @property
    def ok(self) -> bool:
        return self.syntax and self.template and self.resolution


def _is_static(e: Expr) -> bool:
    """True when the expression reads no signal value ($bits of a signal is
    a static width query, not a value read)."""
    if isinstance(e, Ident):
        return False
    if isinstance(e, Number):
        return True
    if isinstance(e, SysCall):
        return e.name == "bits"
    if isinstance(e, BinOp):
        return _is_static(e.lhs) and _is_static(e.rhs)
    if isinstance(e, UnaryOp):
        return _is_static(e.operand)
    if isinstance(e, Ternary):
        return all(_is_static(x) for x in (e.cond, e.then, e.other))
    if isinstance(e, (Index, RangeSelect)):
        return False
    return False


def _eval_static(e: Expr, graph: DesignGraph | None) -> int | None:
    if isinstance(e, Number):
        return e.int_value()
    if isinstance(e, SysCall) and e.name == "bits" and graph is not None:
        if len(e.args) == 1 and isinstance(e.args[0], Ident):
            name = e.args[0].name
            if "." in name:
                mod, sig = name.rsplit(".", 1)
                for p in graph.port_table.get(mod, []):
                    if p.name == sig:
                        return p.width_bits
        return None
    if isinstance(e, BinOp):
        a = _eval_static(e.lhs, graph)
        b = _eval_static(e.rhs, graph)
        if a is None or b is None:
            return None
        ops = {"==": lambda: int(a == b), "!=": lambda: int(a != b),
               "<": lambda: int(a < b), "<=": lambda: int(a <= b),
               ">": lambda: int(a > b), ">=": lambda: int(a >= b),
               "&&": lambda: int(bool(a) and bool(b)),
               "||": lambda: int(bool(a) or bool(b)),
               "+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b}
        fn = ops.get(e.op)
        return fn() if fn else None
    if isinstance(e, UnaryOp):
        v = _eval_static(e.operand, graph)
        if v is None:
            return None
        if e.op == "!":
            return int(not v)
        if e.op == "-":
            return -v
        return None
    return None


def is_trivial(assertion: SvaAssertion, graph: DesignGraph | None = None) -> bool:
    """An assertion is trivial when it checks nothing about signal behavior:
    every boolean leaf is static (bit-width queries, constant comparisons), or
    it is an implication whose consequent is statically true."""
    leaves = bool_leaves(assertion.body)
    if leaves and all(_is_static(l) for l in leaves):
        return True
    body = assertion.body
    if isinstance(body, PropImpl):
        cons = bool_leaves(body.consequent)
        if cons and all(_is_static(l) for l in cons):
            vals = [_eval_static(l, graph) for l in cons]
            if all(v is not None and v != 0 for v in vals):
                return True
    return False


def validate(assertions, graph: DesignGraph) -> list[ValidationVerdict]:
    """Validate each assertion-like record (attributes: id, module, sva_text).

    Pure: identical inputs produce identical verdicts.  Resolution is only
    checked when syntax passes.
    """
    verdicts: list[ValidationVerdict] = []
    for a in assertions:
        verdicts.append(_validate_one(a.id, a.module, a.sva_text, graph))
    return verdicts


def _validate_one(aid: str, module: str | None, text: str,
                  graph: DesignGraph) -> ValidationVerdict:
    try:
        ast = parse_sva(text)
    except SvaSyntaxError as exc:
        return ValidationVerdict(aid, syntax=False, syntax_message=str(exc),
                                 template=False, resolution=False)
    binding = module or graph.root
    template_bad: list[str] = []
    unresolved: list[str] = []
    for name in referenced_signals(ast):
        if "." in name:
            parts = name.split(".")
            if len(parts) != 2 or parts[0] not in graph.port_table:
                template_bad.append(name)
                continue
            mod, sig = parts
            if sig not in graph.module_signals(mod):
                unresolved.append(name)
        else:
            if name not in graph.module_signals(binding):
                unresolved.append(name)
    return ValidationVerdict(
        aid,
        syntax=True,
        template=not template_bad,
        template_violations=template_bad,
        resolution=not unresolved and not template_bad,
        unresolved=unresolved,
        trivial=is_trivial(ast, graph),
    )
