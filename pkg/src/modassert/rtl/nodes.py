"""AST node types for the Verilog subset.

Equality on these nodes is structural: source positions and span offsets
carry compare=False so that parse -> emit -> parse round-trips compare equal.
Expression nodes are shared with the assertion-language AST.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .preprocess import Diagnostic

__all__ = [
    "Diagnostic",
    "Expr", "Ident", "Number", "BinOp", "UnaryOp", "Ternary", "Index",
    "RangeSelect", "Concat", "Repl", "SysCall",
    "Stmt", "BlockingAssign", "NonblockingAssign", "If", "CaseItem", "Case",
    "Block",
    "ParamDecl", "PortDecl", "NetDecl", "ContAssign", "AlwaysBlock",
    "InstanceDecl", "OpaqueSpan", "DirectiveItem", "ModuleDecl", "SourceUnit",
    "UNKNOWN_WIDTH", "expr_idents",
]

# sentinel for a width that could not be resolved to constants
UNKNOWN_WIDTH = ("unknown", "unknown")


# ---------------------------------------------------------------- expressions

class Expr:
    pass


@dataclass
class Ident(Expr):
    name: str
    escaped: bool = False
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Number(Expr):
    raw: str                         # literal as written, e.g. "8'hFF"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    def parse(self) -> tuple[str, int | None]:
        """Return (bits, width): bits is an msb-first string over 01xz,
        width None for unsized decimals."""
        raw = self.raw.replace("_", "")
        if "'" not in raw:
            v = int(raw)
            return (bin(v)[2:] if v else "0", None)
        size_str, rest = raw.split("'", 1)
        if rest and rest[0] in "sS":
            rest = rest[1:]
        base_char = rest[0].lower() if rest else "d"
        digits = rest[1:] if len(rest) > 1 else "0"
        width = int(size_str) if size_str else None
        if base_char == "d":
            v = int(digits.replace("?", "0").replace("x", "0").replace("z", "0") or "0")
            bits = bin(v)[2:] if v else "0"
        else:
            per = {"b": 1, "o": 3, "h": 4}[base_char]
            bits = ""
            for d in digits:
                if d in "xX":
                    bits += "x" * per
                elif d in "zZ?":
                    bits += "z" * per
                else:
                    bits += bin(int(d, 16))[2:].zfill(per)
            bits = bits or "0"
        if width is not None:
            bits = bits[-width:].rjust(width, bits[0] if bits[0] in "xz" else "0")
        return (bits, width)

    def int_value(self) -> int | None:
        """Two-state integer value, or None if the literal contains x/z."""
        bits, _ = self.parse()
        if any(b in "xz" for b in bits):
            return None
        return int(bits, 2) if bits else 0


@dataclass
class BinOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr
    op_line: int = field(default=0, compare=False)
    op_col: int = field(default=0, compare=False)
    op_span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class UnaryOp(Expr):
    op: str                          # ! ~ & | ^ ~& ~| ~^ + -
    operand: Expr


@dataclass
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass
class Index(Expr):
    base: Expr
    index: Expr


@dataclass
class RangeSelect(Expr):
    base: Expr
    msb: Expr
    lsb: Expr


@dataclass
class Concat(Expr):
    parts: list[Expr]


@dataclass
class Repl(Expr):
    count: Expr
    value: Concat


@dataclass
class SysCall(Expr):
    name: str                        # without the $
    args: list[Expr]


def expr_idents(expr: Expr) -> list[str]:
    """All identifier names read by `expr`, in syntactic order (with repeats
    removed, first occurrence kept)."""
    seen: list[str] = []

    def walk(e: Expr) -> None:
        if isinstance(e, Ident):
            if e.name not in seen:
                seen.append(e.name)
        elif isinstance(e, BinOp):
            walk(e.lhs)
            walk(e.rhs)
        elif isinstance(e, UnaryOp):
            walk(e.operand)
        elif isinstance(e, Ternary):
            walk(e.cond)
            walk(e.then)
            walk(e.other)
        elif isinstance(e, Index):
            walk(e.base)
            walk(e.index)
        elif isinstance(e, RangeSelect):
            walk(e.base)
            walk(e.msb)
            walk(e.lsb)
        elif isinstance(e, Concat):
            for p in e.parts:
                walk(p)
        elif isinstance(e, Repl):
            walk(e.count)
            walk(e.value)
        elif isinstance(e, SysCall):
            for a in e.args:
                walk(a)

    walk(expr)
    return seen


# ----------------------------------------------------------------- statements

class Stmt:
    pass


@dataclass
class BlockingAssign(Stmt):
    target: Expr
    value: Expr


@dataclass
class NonblockingAssign(Stmt):
    target: Expr
    value: Expr


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt | None
    else_: Stmt | None = None
    cond_pos: tuple[int, int] = field(default=(0, 0), compare=False)  # span of cond text


@dataclass
class CaseItem:
    labels: list[Expr]               # empty => default
    body: Stmt | None


@dataclass
class Case(Stmt):
    kind: str                        # case | casex | casez
    subject: Expr
    items: list[CaseItem]


@dataclass
class Block(Stmt):
    name: str | None
    stmts: list[Stmt]


# --------------------------------------------------------------- module items

@dataclass
class ParamDecl:
    name: str
    value: Expr
    is_local: bool = False
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class PortDecl:
    name: str
    direction: str                   # input | output | inout
    msb: Expr | None = None          # None => scalar
    lsb: Expr | None = None
    is_signed: bool = False
    is_reg: bool = False
    escaped: bool = False
    resolved_width: tuple[int, int] | None = None   # (msb, lsb) or UNKNOWN_WIDTH
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def width_bits(self) -> int | None:
        if self.resolved_width is None or self.resolved_width == UNKNOWN_WIDTH:
            return 1 if self.msb is None else None
        msb, lsb = self.resolved_width
        return abs(msb - lsb) + 1


@dataclass
class NetDecl:
    name: str
    kind: str                        # wire | reg | integer
    msb: Expr | None = None
    lsb: Expr | None = None
    is_signed: bool = False
    escaped: bool = False
    resolved_width: tuple[int, int] | None = None
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def width_bits(self) -> int | None:
        if self.kind == "integer":
            return 32
        if self.resolved_width is None or self.resolved_width == UNKNOWN_WIDTH:
            return 1 if self.msb is None else None
        msb, lsb = self.resolved_width
        return abs(msb - lsb) + 1


@dataclass
class ContAssign:
    target: Expr
    value: Expr
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class AlwaysBlock:
    # sensitivity: list of (edge, signal) with edge in {"posedge","negedge","level"},
    # or the single entry ("star", "*") for always @*
    sensitivity: list[tuple[str, str]]
    body: Stmt
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def is_sequential(self) -> bool:
        return any(edge in ("posedge", "negedge") for edge, _ in self.sensitivity)


@dataclass
class InstanceDecl:
    child_module: str
    instance_name: str
    connections: list[tuple[str, Expr | None]]    # (formal port, actual) after normalization
    param_overrides: list[tuple[str, Expr]] = field(default_factory=list)
    positional: bool = False                      # True until normalized
    port_widths: dict[str, tuple[int, int]] = field(default_factory=dict, compare=False)
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class OpaqueSpan:
    text: str
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class DirectiveItem:
    text: str
    line: int = field(default=0, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


BodyItem = object  # ParamDecl | PortDecl | NetDecl | ContAssign | AlwaysBlock | InstanceDecl | OpaqueSpan | DirectiveItem


@dataclass
class ModuleDecl:
    name: str
    params: list[ParamDecl] = field(default_factory=list)
    ports: list[PortDecl] = field(default_factory=list)
    nets: list[NetDecl] = field(default_factory=list)
    instances: list[InstanceDecl] = field(default_factory=list)
    body_items: list = field(default_factory=list)   # all items in source order
    file: str = field(default="", compare=False)
    line_span: tuple[int, int] = field(default=(0, 0), compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)

    @property
    def assigns(self) -> list[ContAssign]:
        return [i for i in self.body_items if isinstance(i, ContAssign)]

    @property
    def always_blocks(self) -> list[AlwaysBlock]:
        return [i for i in self.body_items if isinstance(i, AlwaysBlock)]

    @property
    def opaque_spans(self) -> list[OpaqueSpan]:
        return [i for i in self.body_items if isinstance(i, OpaqueSpan)]

    def port(self, name: str) -> PortDecl | None:
        for p in self.ports:
            if p.name == name:
                return p
        return None

    def net(self, name: str) -> NetDecl | None:
        for n in self.nets:
            if n.name == name:
                return n
        return None

    def signal_names(self) -> set[str]:
        return {p.name for p in self.ports} | {n.name for n in self.nets}


@dataclass
class SourceUnit:
    # (path, text) after preprocessing; spans in the AST index into these texts
    files: list[tuple[str, str]] = field(default_factory=list)
    modules: list[ModuleDecl] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list, compare=False)

    def module(self, name: str) -> ModuleDecl | None:
        for m in self.modules:
            if m.name == name:
                return m
        return None

    def file_text(self, path: str) -> str:
        for p, t in self.files:
            if p == path:
                return t
        raise KeyError(path)
