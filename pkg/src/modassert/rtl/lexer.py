"""Hand-rolled lexer for the Verilog subset and the assertion language."""

from __future__ import annotations

from .tokens import KEYWORDS, SVA_KEYWORDS, Token, TokenType


class LexError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"lex error at L{line}:{col}: {msg}")
        self.line = line
        self.col = col


_SIMPLE = {
    "+": TokenType.PLUS,
    "-": TokenType.MINUS,
    "*": TokenType.STAR,
    "/": TokenType.SLASH,
    "%": TokenType.PERCENT,
    "?": TokenType.QUESTION,
    ":": TokenType.COLON,
    "@": TokenType.AT,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    "[": TokenType.LBRACKET,
    "]": TokenType.RBRACKET,
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    ";": TokenType.SEMICOLON,
    ",": TokenType.COMMA,
    ".": TokenType.DOT,
}


def lex(text: str, sva: bool = False) -> list[Token]:
    """Tokenize `text`.  Comments and whitespace are skipped; unknown
    compiler directives become DIRECTIVE tokens covering the rest of the line."""
    toks: list[Token] = []
    i = 0
    n = len(text)
    line = 1
    line_start = 0

    def col(p: int) -> int:
        return p - line_start + 1

    def push(tt: TokenType, start: int, end: int, value: str | None = None,
             escaped: bool = False) -> None:
        toks.append(Token(tt, text[start:end] if value is None else value,
                          line, col(start), start, end, escaped))

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if c in " \t\r":
            i += 1
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "/" and i + 1 < n and text[i + 1] == "*":
            start = i
            i += 2
            while i + 1 < n and not (text[i] == "*" and text[i + 1] == "/"):
                if text[i] == "\n":
                    line += 1
                    line_start = i + 1
                i += 1
            if i + 1 >= n:
                raise LexError("unterminated block comment", line, col(start))
            i += 2
            continue
        if c == "`":
            # remaining directives after preprocessing pass through verbatim
            start = i
            while i < n and text[i] != "\n":
                i += 1
            push(TokenType.DIRECTIVE, start, i)
            continue
        if c == '"':
            start = i
            i += 1
            while i < n and text[i] != '"':
                if text[i] == "\\":
                    i += 1
                i += 1
            if i >= n:
                raise LexError("unterminated string", line, col(start))
            i += 1
            push(TokenType.STRING, start, i)
            continue
        if c == "\\":
            # escaped identifier: up to next whitespace
            start = i
            i += 1
            while i < n and text[i] not in " \t\r\n":
                i += 1
            if i == start + 1:
                raise LexError("empty escaped identifier", line, col(start))
            push(TokenType.IDENT, start, i, value=text[start + 1:i], escaped=True)
            continue
        if c == "$":
            start = i
            i += 1
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            push(TokenType.SYSID, start, i)
            continue
        if c.isdigit() or (c == "'" and i + 1 < n and text[i + 1] in "bBoOdDhHsS"):
            start = i
            while i < n and (text[i].isdigit() or text[i] == "_"):
                i += 1
            if i < n and text[i] == "'":
                i += 1
                if i < n and text[i] in "sS":
                    i += 1
                if i < n and text[i] in "bBoOdDhH":
                    i += 1
                while i < n and (text[i].isalnum() or text[i] in "_?"):
                    i += 1
            push(TokenType.NUMBER, start, i)
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] in "_$"):
                i += 1
            word = text[start:i]
            tt = KEYWORDS.get(word)
            if tt is None and sva:
                tt = SVA_KEYWORDS.get(word)
            push(tt or TokenType.IDENT, start, i, value=word)
            continue

        start = i
        three = text[i:i + 3]
        two = text[i:i + 2]
        if sva and three == "|->":
            push(TokenType.OVL_IMPL, start, i + 3)
            i += 3
            continue
        if sva and three == "|=>":
            push(TokenType.NOVL_IMPL, start, i + 3)
            i += 3
            continue
        if three == ">>>":
            push(TokenType.ARSHIFT, start, i + 3)
            i += 3
            continue
        if three == "===":
            push(TokenType.CASEEQ, start, i + 3)
            i += 3
            continue
        if three == "!==":
            push(TokenType.CASENEQ, start, i + 3)
            i += 3
            continue
        two_map = {
            "&&": TokenType.LAND,
            "||": TokenType.LOR,
            "<<": TokenType.LSHIFT,
            ">>": TokenType.RSHIFT,
            "==": TokenType.EQ,
            "!=": TokenType.NEQ,
            "<=": TokenType.LE,
            ">=": TokenType.GE,
            "~&": TokenType.NAND,
            "~|": TokenType.NOR,
            "~^": TokenType.XNOR,
            "^~": TokenType.XNOR,
        }
        if sva and two == "##":
            push(TokenType.DLY, start, i + 2)
            i += 2
            continue
        if two in two_map:
            push(two_map[two], start, i + 2)
            i += 2
            continue
        one_map = {
            "&": TokenType.AMP,
            "|": TokenType.PIPE,
            "^": TokenType.CARET,
            "~": TokenType.TILDE,
            "!": TokenType.BANG,
            "<": TokenType.LT,
            ">": TokenType.GT,
            "=": TokenType.ASSIGN_OP,
            "#": TokenType.HASH,
        }
        if c in one_map:
            push(one_map[c], start, i + 1)
            i += 1
            continue
        if c in _SIMPLE:
            push(_SIMPLE[c], start, i + 1)
            i += 1
            continue
        raise LexError(f"unexpected character {c!r}", line, col(i))

    toks.append(Token(TokenType.EOF, "", line, col(i), i, i))
    return toks
