"""Verilog frontend: lexing, parsing, width resolution and emission."""

from .emit import emit_expr, emit_module, emit_verilog, splice_edit
from .nodes import (
    AlwaysBlock, BinOp, Block, BlockingAssign, Case, CaseItem, Concat,
    ContAssign, Diagnostic, DirectiveItem, Expr, Ident, If, Index,
    InstanceDecl, ModuleDecl, NetDecl, NonblockingAssign, Number, OpaqueSpan,
    ParamDecl, PortDecl, RangeSelect, Repl, SourceUnit, Stmt, SysCall,
    Ternary, UnaryOp, UNKNOWN_WIDTH, expr_idents,
)
from .parser import FileUnreadable, ParseError, parse_verilog
from .widths import eval_const, param_env, resolve_widths

__all__ = [
    "AlwaysBlock", "BinOp", "Block", "BlockingAssign", "Case", "CaseItem",
    "Concat", "ContAssign", "Diagnostic", "DirectiveItem", "Expr",
    "FileUnreadable", "Ident", "If", "Index", "InstanceDecl", "ModuleDecl",
    "NetDecl", "NonblockingAssign", "Number", "OpaqueSpan", "ParamDecl",
    "ParseError", "PortDecl", "RangeSelect", "Repl", "SourceUnit", "Stmt",
    "SysCall", "Ternary", "UnaryOp", "UNKNOWN_WIDTH",
    "emit_expr", "emit_module", "emit_verilog", "eval_const", "expr_idents",
    "param_env", "parse_verilog", "resolve_widths", "splice_edit",
]
