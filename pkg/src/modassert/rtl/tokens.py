"""Token definitions for the Verilog lexer.

The same lexer serves two grammars: plain Verilog module sources and the
assertion property language.  Assertion-only operators (`|->`, `|=>`, `##`)
are produced only when the lexer runs in sva mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, auto


class TokenType(Enum):
    NUMBER = auto()         # 42, 8'hFF, 4'b10x0
    STRING = auto()         # "text"
    IDENT = auto()          # plain or escaped identifier
    SYSID = auto()          # $bits, $past, ...
    DIRECTIVE = auto()      # passthrough compiler directive line (`timescale ...)

    # keywords
    MODULE = auto()
    ENDMODULE = auto()
    INPUT = auto()
    OUTPUT = auto()
    INOUT = auto()
    WIRE = auto()
    REG = auto()
    INTEGER = auto()
    PARAMETER = auto()
    LOCALPARAM = auto()
    ASSIGN = auto()
    ALWAYS = auto()
    BEGIN = auto()
    END = auto()
    IF = auto()
    ELSE = auto()
    CASE = auto()
    CASEX = auto()
    CASEZ = auto()
    ENDCASE = auto()
    DEFAULT = auto()
    POSEDGE = auto()
    NEGEDGE = auto()
    SIGNED = auto()
    OR = auto()
    AND = auto()
    NOT = auto()
    # sva-only keywords
    ASSERT = auto()
    PROPERTY = auto()
    DISABLE = auto()
    IFF = auto()

    # operators / punctuation
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    SLASH = auto()
    PERCENT = auto()
    AMP = auto()            # &
    PIPE = auto()           # |
    CARET = auto()          # ^
    TILDE = auto()          # ~
    NAND = auto()           # ~&
    NOR = auto()            # ~|
    XNOR = auto()           # ~^ or ^~
    BANG = auto()           # !
    LAND = auto()           # &&
    LOR = auto()            # ||
    LSHIFT = auto()         # <<
    RSHIFT = auto()         # >>
    ARSHIFT = auto()        # >>>
    EQ = auto()             # ==
    NEQ = auto()            # !=
    CASEEQ = auto()         # ===
    CASENEQ = auto()        # !==
    LT = auto()
    LE = auto()             # <= (also nonblocking assign)
    GT = auto()
    GE = auto()
    QUESTION = auto()
    COLON = auto()
    AT = auto()
    HASH = auto()
    LPAREN = auto()
    RPAREN = auto()
    LBRACKET = auto()
    RBRACKET = auto()
    LBRACE = auto()
    RBRACE = auto()
    SEMICOLON = auto()
    COMMA = auto()
    DOT = auto()
    ASSIGN_OP = auto()      # =

    # sva mode only
    OVL_IMPL = auto()       # |->
    NOVL_IMPL = auto()      # |=>
    DLY = auto()            # ##

    EOF = auto()


@dataclass
class Token:
    type: TokenType
    value: str
    line: int
    col: int
    pos: int = field(default=0, compare=False)   # char offset into source text
    end: int = field(default=0, compare=False)
    escaped: bool = False                        # escaped identifier

    def __repr__(self) -> str:
        return f"Token({self.type.name}, {self.value!r}, L{self.line}:{self.col})"


KEYWORDS: dict[str, TokenType] = {
    "module": TokenType.MODULE,
    "endmodule": TokenType.ENDMODULE,
    "input": TokenType.INPUT,
    "output": TokenType.OUTPUT,
    "inout": TokenType.INOUT,
    "wire": TokenType.WIRE,
    "reg": TokenType.REG,
    "integer": TokenType.INTEGER,
    "parameter": TokenType.PARAMETER,
    "localparam": TokenType.LOCALPARAM,
    "assign": TokenType.ASSIGN,
    "always": TokenType.ALWAYS,
    "begin": TokenType.BEGIN,
    "end": TokenType.END,
    "if": TokenType.IF,
    "else": TokenType.ELSE,
    "case": TokenType.CASE,
    "casex": TokenType.CASEX,
    "casez": TokenType.CASEZ,
    "endcase": TokenType.ENDCASE,
    "default": TokenType.DEFAULT,
    "posedge": TokenType.POSEDGE,
    "negedge": TokenType.NEGEDGE,
    "signed": TokenType.SIGNED,
    "or": TokenType.OR,
    "and": TokenType.AND,
    "not": TokenType.NOT,
}

SVA_KEYWORDS: dict[str, TokenType] = {
    "assert": TokenType.ASSERT,
    "property": TokenType.PROPERTY,
    "disable": TokenType.DISABLE,
    "iff": TokenType.IFF,
}
