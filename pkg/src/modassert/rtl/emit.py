"""Verilog emission.

Two modes:

* verbatim (default): each file's preprocessed text is reproduced exactly,
  including opaque spans and passthrough directives.  Edits made through
  `splice_edit` are reflected as minimal textual changes.
* canonical: every module is regenerated from its AST by the pretty
  printer.  Re-parsing canonical output yields a structurally identical
  AST (the round-trip property).
"""

from __future__ import annotations

from .nodes import (
    AlwaysBlock, BinOp, Block, BlockingAssign, Case, CaseItem, Concat,
    ContAssign, DirectiveItem, Expr, Ident, If, Index, InstanceDecl,
    ModuleDecl, NetDecl, NonblockingAssign, Number, OpaqueSpan, ParamDecl,
    PortDecl, RangeSelect, Repl, SourceUnit, Stmt, SysCall, Ternary, UnaryOp,
)
from .parser import parse_verilog

_IND = "  "


def emit_verilog(unit: SourceUnit, canonical: bool = False) -> list[tuple[str, str]]:
    if not canonical:
        return [(path, text) for path, text in unit.files]
    out: list[tuple[str, str]] = []
    by_file: dict[str, list[ModuleDecl]] = {}
    for mod in unit.modules:
        by_file.setdefault(mod.file, []).append(mod)
    for path, _ in unit.files:
        mods = by_file.get(path, [])
        text = "\n".join(emit_module(m) for m in mods)
        out.append((path, text + ("\n" if text else "")))
    return out


def splice_edit(unit: SourceUnit, path: str, span: tuple[int, int],
                new_text: str) -> SourceUnit:
    """Replace `span` of one file's text and re-parse the whole unit.

    This is the AST-edit primitive: the original unit is untouched and the
    edited unit differs textually by exactly the spliced span.
    """
    files = []
    for p, t in unit.files:
        if p == path:
            t = t[:span[0]] + new_text + t[span[1]:]
        files.append((p, t))
    return parse_verilog(files)


# ------------------------------------------------------------ pretty printer

def emit_module(mod: ModuleDecl) -> str:
    lines: list[str] = []
    header = f"module {mod.name}"
    body_ids = {id(i) for i in mod.body_items}
    header_params = [p for p in mod.params if not p.is_local and id(p) not in body_ids]
    if header_params:
        plist = ", ".join(f"parameter {p.name} = {emit_expr(p.value)}"
                          for p in header_params)
        header += f" #({plist})"
    if mod.ports:
        header += " (" + ", ".join(_ident_text(p.name, p.escaped) for p in mod.ports) + ")"
    lines.append(header + ";")
    for p in mod.ports:
        lines.append(_IND + _port_decl_text(p))
    emitted_nets = {p.name for p in mod.ports if p.is_reg}
    for item in mod.body_items:
        if isinstance(item, NetDecl):
            if item.name in emitted_nets:
                continue
            emitted_nets.add(item.name)
            lines.append(_IND + _net_decl_text(item))
        elif isinstance(item, ParamDecl):
            kw = "localparam" if item.is_local else "parameter"
            lines.append(f"{_IND}{kw} {item.name} = {emit_expr(item.value)};")
        elif isinstance(item, ContAssign):
            lines.append(f"{_IND}assign {emit_expr(item.target)} = {emit_expr(item.value)};")
        elif isinstance(item, AlwaysBlock):
            lines.extend(_always_lines(item))
        elif isinstance(item, InstanceDecl):
            lines.append(_IND + _instance_text(item))
        elif isinstance(item, (OpaqueSpan, DirectiveItem)):
            # indent only the first line: interior bytes must survive re-parse
            chunk = item.text.splitlines() or [""]
            lines.append(_IND + chunk[0])
            lines.extend(chunk[1:])
    lines.append("endmodule")
    return "\n".join(lines)


def _ident_text(name: str, escaped: bool) -> str:
    return f"\\{name} " if escaped else name


def _range_text(msb: Expr | None, lsb: Expr | None) -> str:
    if msb is None:
        return ""
    return f"[{emit_expr(msb)}:{emit_expr(lsb)}] "


def _port_decl_text(p: PortDecl) -> str:
    kw = p.direction
    reg = "reg " if p.is_reg else ""
    signed = "signed " if p.is_signed else ""
    return f"{kw} {reg}{signed}{_range_text(p.msb, p.lsb)}{_ident_text(p.name, p.escaped)};"


def _net_decl_text(n: NetDecl) -> str:
    signed = "signed " if n.is_signed else ""
    rng = "" if n.kind == "integer" else _range_text(n.msb, n.lsb)
    return f"{n.kind} {signed}{rng}{_ident_text(n.name, n.escaped)};"


def _instance_text(inst: InstanceDecl) -> str:
    text = inst.child_module
    if inst.param_overrides:
        ov = ", ".join(f".{n}({emit_expr(v)})" for n, v in inst.param_overrides)
        text += f" #({ov})"
    conns = ", ".join(
        f".{f}({emit_expr(a) if a is not None else ''})" for f, a in inst.connections)
    return f"{text} {inst.instance_name} ({conns});"


def _always_lines(blk: AlwaysBlock) -> list[str]:
    if blk.sensitivity and blk.sensitivity[0][0] == "star":
        sens = "@(*)"
    else:
        parts = []
        for edge, sig in blk.sensitivity:
            parts.append(sig if edge == "level" else f"{edge} {sig}")
        sens = "@(" + " or ".join(parts) + ")"
    lines = [f"{_IND}always {sens}"]
    lines.extend(_stmt_lines(blk.body, 2))
    return lines


def _stmt_lines(stmt: Stmt | None, depth: int) -> list[str]:
    ind = _IND * depth
    if stmt is None:
        return [ind + ";"]
    if isinstance(stmt, Block):
        head = "begin" if stmt.name is None else f"begin : {stmt.name}"
        lines = [ind + head]
        for s in stmt.stmts:
            lines.extend(_stmt_lines(s, depth + 1))
        lines.append(ind + "end")
        return lines
    if isinstance(stmt, If):
        lines = [f"{ind}if ({emit_expr(stmt.cond)})"]
        lines.extend(_stmt_lines(stmt.then, depth + 1))
        if stmt.else_ is not None:
            lines.append(ind + "else")
            lines.extend(_stmt_lines(stmt.else_, depth + 1))
        return lines
    if isinstance(stmt, Case):
        lines = [f"{ind}{stmt.kind} ({emit_expr(stmt.subject)})"]
        for item in stmt.items:
            label = "default" if not item.labels else \
                ", ".join(emit_expr(e) for e in item.labels)
            lines.append(f"{ind}{_IND}{label}:")
            lines.extend(_stmt_lines(item.body, depth + 2))
        lines.append(ind + "endcase")
        return lines
    if isinstance(stmt, NonblockingAssign):
        return [f"{ind}{emit_expr(stmt.target)} <= {emit_expr(stmt.value)};"]
    if isinstance(stmt, BlockingAssign):
        return [f"{ind}{emit_expr(stmt.target)} = {emit_expr(stmt.value)};"]
    raise TypeError(f"cannot emit statement {stmt!r}")


def emit_expr(e: Expr) -> str:
    """Fully parenthesized canonical expression text (safe for any context)."""
    if isinstance(e, Ident):
        return _ident_text(e.name, e.escaped)
    if isinstance(e, Number):
        return e.raw
    if isinstance(e, BinOp):
        return f"({emit_expr(e.lhs)} {e.op} {emit_expr(e.rhs)})"
    if isinstance(e, UnaryOp):
        return f"({e.op}{emit_expr(e.operand)})"
    if isinstance(e, Ternary):
        return f"({emit_expr(e.cond)} ? {emit_expr(e.then)} : {emit_expr(e.other)})"
    if isinstance(e, Index):
        return f"{emit_expr(e.base)}[{emit_expr(e.index)}]"
    if isinstance(e, RangeSelect):
        return f"{emit_expr(e.base)}[{emit_expr(e.msb)}:{emit_expr(e.lsb)}]"
    if isinstance(e, Concat):
        return "{" + ", ".join(emit_expr(p) for p in e.parts) + "}"
    if isinstance(e, Repl):
        return "{" + emit_expr(e.count) + emit_expr(e.value) + "}"
    if isinstance(e, SysCall):
        return f"${e.name}(" + ", ".join(emit_expr(a) for a in e.args) + ")"
    raise TypeError(f"cannot emit expression {e!r}")
