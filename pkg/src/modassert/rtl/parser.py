"""Recursive-descent parser for the Verilog subset.

Supported: module/port/parameter declarations, wire/reg/integer nets,
continuous assigns, always blocks with if/case and blocking/nonblocking
assignment, and module instantiation (named and positional).  Anything else
inside a module body is preserved verbatim as an opaque span and flagged
with a warning diagnostic, so emission never loses input text.
"""

from __future__ import annotations

from .lexer import LexError, lex
from .nodes import (
    AlwaysBlock, BinOp, Block, BlockingAssign, Case, CaseItem, Concat,
    ContAssign, Diagnostic, DirectiveItem, Expr, Ident, If, Index,
    InstanceDecl, ModuleDecl, NetDecl, NonblockingAssign, Number, OpaqueSpan,
    ParamDecl, PortDecl, RangeSelect, Repl, SourceUnit, Stmt, SysCall,
    Ternary, UnaryOp,
)
from .preprocess import preprocess
from .tokens import Token, TokenType as T


class ParseError(Exception):
    def __init__(self, msg: str, token: Token):
        super().__init__(f"L{token.line}:{token.col}: {msg} (got {token.value!r})")
        self.msg = msg
        self.token = token


class FileUnreadable(Exception):
    pass


# keywords that open a construct outside the subset, with their closer
_OPAQUE_PAIRS = {
    "generate": "endgenerate",
    "function": "endfunction",
    "task": "endtask",
    "specify": "endspecify",
    "primitive": "endprimitive",
}
_OPAQUE_STARTERS = set(_OPAQUE_PAIRS) | {"initial", "genvar", "defparam", "real", "time", "event"}

# binary operator precedence (higher binds tighter)
_BINOP_PREC = {
    T.LOR: (1, "||"),
    T.LAND: (2, "&&"),
    T.PIPE: (3, "|"),
    T.CARET: (4, "^"),
    T.XNOR: (4, "~^"),
    T.AMP: (5, "&"),
    T.EQ: (6, "=="),
    T.NEQ: (6, "!="),
    T.CASEEQ: (6, "==="),
    T.CASENEQ: (6, "!=="),
    T.LT: (7, "<"),
    T.LE: (7, "<="),
    T.GT: (7, ">"),
    T.GE: (7, ">="),
    T.LSHIFT: (8, "<<"),
    T.RSHIFT: (8, ">>"),
    T.ARSHIFT: (8, ">>>"),
    T.PLUS: (9, "+"),
    T.MINUS: (9, "-"),
    T.STAR: (10, "*"),
    T.SLASH: (10, "/"),
    T.PERCENT: (10, "%"),
}

_UNARY_TOKENS = {
    T.BANG: "!", T.TILDE: "~", T.AMP: "&", T.PIPE: "|", T.CARET: "^",
    T.NAND: "~&", T.NOR: "~|", T.XNOR: "~^", T.PLUS: "+", T.MINUS: "-",
}


class ExprParser:
    """Pratt-style expression parser over a token list; shared by the module
    parser and (via subclassing) the assertion parser."""

    def __init__(self, tokens: list[Token], text: str = ""):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def cur(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, off: int = 1) -> Token:
        p = self.pos + off
        return self.tokens[p] if p < len(self.tokens) else self.tokens[-1]

    def at(self, *types: T) -> bool:
        return self.cur().type in types

    def eat(self, tt: T, what: str | None = None) -> Token:
        tok = self.cur()
        if tok.type != tt:
            raise ParseError(what or f"expected {tt.name}", tok)
        self.pos += 1
        return tok

    def eat_if(self, tt: T) -> Token | None:
        if self.cur().type == tt:
            tok = self.cur()
            self.pos += 1
            return tok
        return None

    # -- expressions ---------------------------------------------------------

    def parse_expr(self, min_prec: int = 0) -> Expr:
        lhs = self.parse_unary()
        while True:
            tok = self.cur()
            info = _BINOP_PREC.get(tok.type)
            if info is None or info[0] < min_prec:
                break
            prec, op = info
            self.pos += 1
            rhs = self.parse_expr(prec + 1)
            lhs = BinOp(op, lhs, rhs, op_line=tok.line, op_col=tok.col,
                        op_span=(tok.pos, tok.end))
        if min_prec == 0 and self.at(T.QUESTION):
            self.pos += 1
            then = self.parse_expr()
            self.eat(T.COLON, "expected ':' in ternary")
            other = self.parse_expr()
            return Ternary(lhs, then, other)
        return lhs

    def parse_unary(self) -> Expr:
        tok = self.cur()
        if tok.type in _UNARY_TOKENS:
            self.pos += 1
            return UnaryOp(_UNARY_TOKENS[tok.type], self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.cur()
        if tok.type == T.NUMBER:
            self.pos += 1
            return Number(tok.value, line=tok.line, col=tok.col, span=(tok.pos, tok.end))
        if tok.type == T.IDENT:
            return self.parse_ident_expr()
        if tok.type == T.SYSID:
            self.pos += 1
            args: list[Expr] = []
            if self.eat_if(T.LPAREN):
                if not self.at(T.RPAREN):
                    args.append(self.parse_expr())
                    while self.eat_if(T.COMMA):
                        args.append(self.parse_expr())
                self.eat(T.RPAREN, "expected ')' after system call arguments")
            return SysCall(tok.value[1:], args)
        if tok.type == T.LPAREN:
            self.pos += 1
            inner = self.parse_expr()
            self.eat(T.RPAREN, "expected ')'")
            return self.parse_postfix(inner)
        if tok.type == T.LBRACE:
            return self.parse_concat()
        raise ParseError("expected expression", tok)

    def parse_ident_expr(self) -> Expr:
        tok = self.eat(T.IDENT)
        expr: Expr = Ident(tok.value, escaped=tok.escaped, line=tok.line,
                           col=tok.col, span=(tok.pos, tok.end))
        return self.parse_postfix(expr)

    def parse_postfix(self, expr: Expr) -> Expr:
        while self.at(T.LBRACKET):
            if self.peek().type == T.STAR:
                break   # sva repetition marker, not a select
            save = self.pos
            self.pos += 1
            first = self.parse_expr()
            if self.eat_if(T.COLON):
                lsb = self.parse_expr()
                self.eat(T.RBRACKET, "expected ']'")
                expr = RangeSelect(expr, first, lsb)
            elif self.at(T.RBRACKET):
                self.pos += 1
                expr = Index(expr, first)
            else:
                # not a select (e.g. sva repetition); rewind for the caller
                self.pos = save
                break
        return expr

    def parse_concat(self) -> Expr:
        self.eat(T.LBRACE)
        first = self.parse_expr()
        if self.at(T.LBRACE):
            # replication {N{expr,...}}
            inner = self.parse_concat()
            self.eat(T.RBRACE, "expected '}' after replication")
            if not isinstance(inner, Concat):
                inner = Concat([inner])
            return Repl(first, inner)
        parts = [first]
        while self.eat_if(T.COMMA):
            parts.append(self.parse_expr())
        self.eat(T.RBRACE, "expected '}'")
        return Concat(parts)


class ModuleParser(ExprParser):
    def __init__(self, tokens: list[Token], text: str, path: str,
                 diagnostics: list[Diagnostic], line_of):
        super().__init__(tokens, text)
        self.path = path
        self.diags = diagnostics
        self.line_of = line_of   # maps preprocessed line -> (origin file, line)

    def diag(self, severity: str, tok: Token, message: str) -> None:
        f, ln = self.line_of(tok.line)
        self.diags.append(Diagnostic(severity, f, ln, tok.col, message))

    # -- file level ----------------------------------------------------------

    def parse_file(self) -> list[ModuleDecl]:
        modules: list[ModuleDecl] = []
        while not self.at(T.EOF):
            if self.at(T.DIRECTIVE):
                self.pos += 1   # file-level passthrough directive, kept via spans
                continue
            if self.at(T.MODULE):
                start = self.pos
                try:
                    modules.append(self.parse_module())
                except ParseError as exc:
                    self.diag("error", exc.token, f"module dropped: {exc.msg}")
                    self.pos = start
                    self.skip_past_endmodule()
                continue
            self.diag("warning", self.cur(), "skipping non-module construct at file level")
            self.skip_past_endmodule_or_any()
        return modules

    def skip_past_endmodule(self) -> None:
        depth = 0
        while not self.at(T.EOF):
            if self.at(T.MODULE):
                depth += 1
            elif self.at(T.ENDMODULE):
                depth -= 1
                self.pos += 1
                if depth <= 0:
                    return
                continue
            self.pos += 1

    def skip_past_endmodule_or_any(self) -> None:
        while not self.at(T.EOF) and not self.at(T.MODULE):
            self.pos += 1

    # -- module --------------------------------------------------------------

    def parse_module(self) -> ModuleDecl:
        mod_tok = self.eat(T.MODULE)
        name_tok = self.eat(T.IDENT, "expected module name")
        mod = ModuleDecl(name_tok.value, file=self.path)
        header_ports: list[str] = []
        ansi = False

        if self.eat_if(T.HASH):
            self.eat(T.LPAREN, "expected '(' after '#'")
            while not self.at(T.RPAREN):
                self.eat_if(T.PARAMETER)
                ptok = self.eat(T.IDENT, "expected parameter name")
                self.eat(T.ASSIGN_OP, "expected '=' in parameter")
                val = self.parse_expr()
                mod.params.append(ParamDecl(ptok.value, val, line=ptok.line))
                if not self.eat_if(T.COMMA):
                    break
            self.eat(T.RPAREN, "expected ')' after parameter list")

        if self.eat_if(T.LPAREN):
            if not self.at(T.RPAREN):
                while True:
                    if self.at(T.INPUT, T.OUTPUT, T.INOUT):
                        ansi = True
                        self.parse_ansi_port(mod)
                    else:
                        ptok = self.eat(T.IDENT, "expected port name")
                        header_ports.append(ptok.value)
                    if not self.eat_if(T.COMMA):
                        break
            self.eat(T.RPAREN, "expected ')' after port list")
        self.eat(T.SEMICOLON, "expected ';' after module header")

        while not self.at(T.ENDMODULE):
            if self.at(T.EOF):
                raise ParseError("missing endmodule", self.cur())
            self.parse_module_item(mod)

        end_tok = self.eat(T.ENDMODULE)
        mod.span = (mod_tok.pos, end_tok.end)
        f0, l0 = self.line_of(mod_tok.line)
        _, l1 = self.line_of(end_tok.line)
        mod.file = f0
        mod.line_span = (l0, l1)

        if not ansi:
            # non-ANSI: keep header order for ports declared in the body
            order = {n: i for i, n in enumerate(header_ports)}
            declared = {p.name for p in mod.ports}
            for n in header_ports:
                if n not in declared:
                    self.diags.append(Diagnostic(
                        "warning", mod.file, mod.line_span[0], 1,
                        f"port '{n}' listed in header of {mod.name} but never declared"))
            mod.ports.sort(key=lambda p: order.get(p.name, len(order)))
        self.check_unique(mod)
        return mod

    def check_unique(self, mod: ModuleDecl) -> None:
        seen: set[str] = set()
        for p in mod.ports:
            if p.name in seen:
                self.diags.append(Diagnostic("error", mod.file, p.line, 1,
                                             f"duplicate port '{p.name}' in {mod.name}"))
            seen.add(p.name)

    def parse_ansi_port(self, mod: ModuleDecl) -> None:
        dir_tok = self.cur()
        direction = {T.INPUT: "input", T.OUTPUT: "output", T.INOUT: "inout"}[dir_tok.type]
        self.pos += 1
        is_reg = bool(self.eat_if(T.REG))
        is_signed = bool(self.eat_if(T.SIGNED))
        msb = lsb = None
        if self.eat_if(T.LBRACKET):
            msb = self.parse_expr()
            self.eat(T.COLON, "expected ':' in range")
            lsb = self.parse_expr()
            self.eat(T.RBRACKET, "expected ']' after range")
        ptok = self.eat(T.IDENT, "expected port name")
        mod.ports.append(PortDecl(ptok.value, direction, msb, lsb, is_signed,
                                  is_reg, ptok.escaped, line=ptok.line))
        if is_reg:
            mod.nets.append(NetDecl(ptok.value, "reg", msb, lsb, is_signed,
                                    ptok.escaped, line=ptok.line))

    # -- module items --------------------------------------------------------

    def parse_module_item(self, mod: ModuleDecl) -> None:
        start_tok = self.cur()
        start = self.pos
        try:
            self.parse_module_item_inner(mod)
        except ParseError as exc:
            self.pos = start
            self.consume_opaque(mod, start_tok, reason=exc.msg)

    def parse_module_item_inner(self, mod: ModuleDecl) -> None:
        tok = self.cur()
        if tok.type == T.DIRECTIVE:
            self.pos += 1
            mod.body_items.append(DirectiveItem(tok.value, line=tok.line,
                                                span=(tok.pos, tok.end)))
            return
        if tok.type in (T.INPUT, T.OUTPUT, T.INOUT):
            self.parse_port_item(mod)
            return
        if tok.type in (T.WIRE, T.REG, T.INTEGER):
            self.parse_net_item(mod)
            return
        if tok.type in (T.PARAMETER, T.LOCALPARAM):
            self.parse_param_item(mod, is_local=tok.type == T.LOCALPARAM)
            return
        if tok.type == T.ASSIGN:
            self.parse_assign_item(mod)
            return
        if tok.type == T.ALWAYS:
            self.parse_always_item(mod)
            return
        if tok.type == T.IDENT and tok.value not in _OPAQUE_STARTERS:
            self.parse_instance_item(mod)
            return
        raise ParseError(f"construct outside subset: {tok.value!r}", tok)

    def parse_port_item(self, mod: ModuleDecl) -> None:
        dir_tok = self.cur()
        direction = {T.INPUT: "input", T.OUTPUT: "output", T.INOUT: "inout"}[dir_tok.type]
        self.pos += 1
        is_reg = bool(self.eat_if(T.REG))
        is_signed = bool(self.eat_if(T.SIGNED))
        msb = lsb = None
        if self.eat_if(T.LBRACKET):
            msb = self.parse_expr()
            self.eat(T.COLON, "expected ':'")
            lsb = self.parse_expr()
            self.eat(T.RBRACKET, "expected ']'")
        while True:
            ptok = self.eat(T.IDENT, "expected port name")
            span = (dir_tok.pos, ptok.end)
            mod.ports.append(PortDecl(ptok.value, direction, msb, lsb, is_signed,
                                      is_reg, ptok.escaped, line=ptok.line, span=span))
            if is_reg:
                mod.nets.append(NetDecl(ptok.value, "reg", msb, lsb, is_signed,
                                        ptok.escaped, line=ptok.line))
            if not self.eat_if(T.COMMA):
                break
        self.eat(T.SEMICOLON, "expected ';' after port declaration")

    def parse_net_item(self, mod: ModuleDecl) -> None:
        kind_tok = self.cur()
        kind = {T.WIRE: "wire", T.REG: "reg", T.INTEGER: "integer"}[kind_tok.type]
        self.pos += 1
        is_signed = bool(self.eat_if(T.SIGNED))
        msb = lsb = None
        if kind != "integer" and self.eat_if(T.LBRACKET):
            msb = self.parse_expr()
            self.eat(T.COLON, "expected ':'")
            lsb = self.parse_expr()
            self.eat(T.RBRACKET, "expected ']'")
        while True:
            ntok = self.eat(T.IDENT, "expected net name")
            decl = NetDecl(ntok.value, kind, msb, lsb, is_signed, ntok.escaped,
                           line=ntok.line, span=(kind_tok.pos, ntok.end))
            if mod.net(ntok.value) is None:
                mod.nets.append(decl)
            mod.body_items.append(decl)
            if self.eat_if(T.ASSIGN_OP):
                # net declaration assignment: wire x = expr;
                value = self.parse_expr()
                target = Ident(ntok.value, escaped=ntok.escaped, line=ntok.line,
                               col=ntok.col, span=(ntok.pos, ntok.end))
                mod.body_items.append(ContAssign(target, value, line=ntok.line,
                                                 span=(ntok.pos, self.peek(-1).end)))
            if not self.eat_if(T.COMMA):
                break
        self.eat(T.SEMICOLON, "expected ';' after net declaration")

    def parse_param_item(self, mod: ModuleDecl, is_local: bool) -> None:
        first = self.cur()
        self.pos += 1
        if self.eat_if(T.LBRACKET):   # parameter [3:0] P = ... (range ignored)
            self.parse_expr()
            self.eat(T.COLON, "expected ':'")
            self.parse_expr()
            self.eat(T.RBRACKET, "expected ']'")
        while True:
            ptok = self.eat(T.IDENT, "expected parameter name")
            self.eat(T.ASSIGN_OP, "expected '='")
            val = self.parse_expr()
            decl = ParamDecl(ptok.value, val, is_local, line=ptok.line,
                             span=(first.pos, self.peek(-1).end))
            mod.params.append(decl)
            mod.body_items.append(decl)
            if not self.eat_if(T.COMMA):
                break
        self.eat(T.SEMICOLON, "expected ';' after parameter")

    def parse_assign_item(self, mod: ModuleDecl) -> None:
        a_tok = self.eat(T.ASSIGN)
        if self.at(T.HASH):   # delayed assigns are outside the subset
            raise ParseError("assign with delay", self.cur())
        target = self.parse_lvalue()
        self.eat(T.ASSIGN_OP, "expected '=' in assign")
        value = self.parse_expr()
        semi = self.eat(T.SEMICOLON, "expected ';' after assign")
        mod.body_items.append(ContAssign(target, value, line=a_tok.line,
                                         span=(a_tok.pos, semi.end)))

    def parse_lvalue(self) -> Expr:
        if self.at(T.LBRACE):
            return self.parse_concat()
        tok = self.eat(T.IDENT, "expected assignment target")
        expr: Expr = Ident(tok.value, escaped=tok.escaped, line=tok.line,
                           col=tok.col, span=(tok.pos, tok.end))
        while self.at(T.LBRACKET):
            self.pos += 1
            first = self.parse_expr()
            if self.eat_if(T.COLON):
                lsb = self.parse_expr()
                self.eat(T.RBRACKET, "expected ']'")
                expr = RangeSelect(expr, first, lsb)
            else:
                self.eat(T.RBRACKET, "expected ']'")
                expr = Index(expr, first)
        return expr

    def parse_always_item(self, mod: ModuleDecl) -> None:
        a_tok = self.eat(T.ALWAYS)
        self.eat(T.AT, "expected '@' after always")
        sens: list[tuple[str, str]] = []
        if self.eat_if(T.STAR):
            sens.append(("star", "*"))
        else:
            self.eat(T.LPAREN, "expected '(' in sensitivity list")
            if self.eat_if(T.STAR):
                sens.append(("star", "*"))
            else:
                while True:
                    edge = "level"
                    if self.eat_if(T.POSEDGE):
                        edge = "posedge"
                    elif self.eat_if(T.NEGEDGE):
                        edge = "negedge"
                    stok = self.eat(T.IDENT, "expected signal in sensitivity list")
                    sens.append((edge, stok.value))
                    if not (self.eat_if(T.OR) or self.eat_if(T.COMMA)):
                        break
            self.eat(T.RPAREN, "expected ')' after sensitivity list")
        body = self.parse_statement()
        end = self.peek(-1)
        mod.body_items.append(AlwaysBlock(sens, body, line=a_tok.line,
                                          span=(a_tok.pos, end.end)))

    def parse_statement(self) -> Stmt:
        tok = self.cur()
        if tok.type == T.BEGIN:
            self.pos += 1
            name = None
            if self.eat_if(T.COLON):
                name = self.eat(T.IDENT, "expected block name").value
            stmts: list[Stmt] = []
            while not self.at(T.END):
                if self.at(T.EOF, T.ENDMODULE):
                    raise ParseError("unterminated begin/end block", self.cur())
                stmts.append(self.parse_statement())
            self.eat(T.END)
            return Block(name, stmts)
        if tok.type == T.IF:
            self.pos += 1
            lp = self.eat(T.LPAREN, "expected '(' after if")
            cond = self.parse_expr()
            rp = self.eat(T.RPAREN, "expected ')' after if condition")
            cond_pos = (lp.end, rp.pos)
            then: Stmt | None
            if self.eat_if(T.SEMICOLON):
                then = None
            else:
                then = self.parse_statement()
            els = None
            if self.eat_if(T.ELSE):
                els = None if self.eat_if(T.SEMICOLON) else self.parse_statement()
            return If(cond, then, els, cond_pos=cond_pos)
        if tok.type in (T.CASE, T.CASEX, T.CASEZ):
            kind = {T.CASE: "case", T.CASEX: "casex", T.CASEZ: "casez"}[tok.type]
            self.pos += 1
            self.eat(T.LPAREN, "expected '(' after case")
            subject = self.parse_expr()
            self.eat(T.RPAREN, "expected ')' after case subject")
            items: list[CaseItem] = []
            while not self.at(T.ENDCASE):
                if self.at(T.EOF, T.ENDMODULE):
                    raise ParseError("unterminated case", self.cur())
                labels: list[Expr] = []
                if self.eat_if(T.DEFAULT):
                    self.eat_if(T.COLON)
                else:
                    labels.append(self.parse_expr())
                    while self.eat_if(T.COMMA):
                        labels.append(self.parse_expr())
                    self.eat(T.COLON, "expected ':' after case label")
                body = None if self.eat_if(T.SEMICOLON) else self.parse_statement()
                items.append(CaseItem(labels, body))
            self.eat(T.ENDCASE)
            return Case(kind, subject, items)
        # assignment statement
        target = self.parse_lvalue()
        if self.eat_if(T.LE):
            value = self.parse_expr()
            self.eat(T.SEMICOLON, "expected ';' after nonblocking assignment")
            return NonblockingAssign(target, value)
        self.eat(T.ASSIGN_OP, "expected '=' or '<=' in assignment")
        value = self.parse_expr()
        self.eat(T.SEMICOLON, "expected ';' after assignment")
        return BlockingAssign(target, value)

    def parse_instance_item(self, mod: ModuleDecl) -> None:
        child_tok = self.eat(T.IDENT)
        overrides: list[tuple[str, Expr]] = []
        if self.eat_if(T.HASH):
            self.eat(T.LPAREN, "expected '(' after '#'")
            if self.at(T.DOT):
                while self.eat_if(T.DOT):
                    nm = self.eat(T.IDENT, "expected parameter name").value
                    self.eat(T.LPAREN, "expected '('")
                    overrides.append((nm, self.parse_expr()))
                    self.eat(T.RPAREN, "expected ')'")
                    if not self.eat_if(T.COMMA):
                        break
            else:
                idx = 0
                while not self.at(T.RPAREN):
                    overrides.append((f"${idx}", self.parse_expr()))
                    idx += 1
                    if not self.eat_if(T.COMMA):
                        break
            self.eat(T.RPAREN, "expected ')' after parameter overrides")
        inst_tok = self.eat(T.IDENT, "expected instance name")
        self.eat(T.LPAREN, "expected '(' in instantiation")
        conns: list[tuple[str, Expr | None]] = []
        positional = False
        if not self.at(T.RPAREN):
            if self.at(T.DOT):
                while self.eat_if(T.DOT):
                    fm = self.eat(T.IDENT, "expected formal port name").value
                    self.eat(T.LPAREN, "expected '(' after port name")
                    actual = None if self.at(T.RPAREN) else self.parse_expr()
                    self.eat(T.RPAREN, "expected ')' after connection")
                    conns.append((fm, actual))
                    if not self.eat_if(T.COMMA):
                        break
            else:
                positional = True
                idx = 0
                while True:
                    actual = None if self.at(T.COMMA, T.RPAREN) else self.parse_expr()
                    conns.append((f"${idx}", actual))
                    idx += 1
                    if not self.eat_if(T.COMMA):
                        break
        self.eat(T.RPAREN, "expected ')' after connections")
        semi = self.eat(T.SEMICOLON, "expected ';' after instantiation")
        inst = InstanceDecl(child_tok.value, inst_tok.value, conns, overrides,
                            positional, line=child_tok.line,
                            span=(child_tok.pos, semi.end))
        mod.instances.append(inst)
        mod.body_items.append(inst)

    # -- opaque recovery -----------------------------------------------------

    def consume_opaque(self, mod: ModuleDecl, start_tok: Token, reason: str) -> None:
        closer = None
        if start_tok.type == T.IDENT and start_tok.value in _OPAQUE_PAIRS:
            closer = _OPAQUE_PAIRS[start_tok.value]
        depth = 0
        last = start_tok
        while not self.at(T.EOF, T.ENDMODULE):
            tok = self.cur()
            if closer is not None and tok.type == T.IDENT:
                if tok.value == start_tok.value:
                    depth += 1
                elif tok.value == closer:
                    depth -= 1
                    if depth <= 0:
                        last = tok
                        self.pos += 1
                        break
            if closer is None:
                if tok.type == T.SEMICOLON:
                    last = tok
                    self.pos += 1
                    break
                if tok.type == T.BEGIN:
                    # consume balanced begin/end then continue to ';' or take it as end
                    last = self.consume_balanced_begin()
                    break
            last = tok
            self.pos += 1
        text = self.text[start_tok.pos:last.end]
        mod.body_items.append(OpaqueSpan(text, line=start_tok.line,
                                         span=(start_tok.pos, last.end)))
        self.diag("warning", start_tok,
                  f"construct outside subset kept as opaque span ({reason})")

    def consume_balanced_begin(self) -> Token:
        depth = 0
        last = self.cur()
        while not self.at(T.EOF, T.ENDMODULE):
            tok = self.cur()
            if tok.type == T.BEGIN:
                depth += 1
            elif tok.type == T.END:
                depth -= 1
                if depth <= 0:
                    self.pos += 1
                    return tok
            last = tok
            self.pos += 1
        return last


def parse_verilog(files: list[tuple[str, str]], include_dirs: tuple[str, ...] = (),
                  defines: dict[str, str] | None = None) -> SourceUnit:
    """Parse Verilog sources into a SourceUnit.

    `files` is a list of (path, text).  Macro definitions are shared across
    the whole list in order.  Parsing is deterministic; recoverable problems
    become diagnostics rather than exceptions.
    """
    unit = SourceUnit()
    macro_env = dict(defines) if defines else {}
    for path, text in files:
        pp = preprocess(path, text, include_dirs, macro_env, unit.diagnostics)
        unit.files.append((pp.path, pp.text))
        try:
            toks = lex(pp.text)
        except LexError as exc:
            unit.diagnostics.append(Diagnostic("error", path, exc.line, exc.col,
                                               f"file skipped: {exc}"))
            continue
        mp = ModuleParser(toks, pp.text, path, unit.diagnostics, pp.origin_of_line)
        for mod in mp.parse_file():
            if unit.module(mod.name) is not None:
                unit.diagnostics.append(Diagnostic(
                    "error", mod.file, mod.line_span[0], 1,
                    f"duplicate module '{mod.name}' dropped"))
                continue
            unit.modules.append(mod)
    _normalize_positional(unit)
    return unit


def _normalize_positional(unit: SourceUnit) -> None:
    for mod in unit.modules:
        for inst in mod.instances:
            if not inst.positional:
                continue
            child = unit.module(inst.child_module)
            if child is None:
                unit.diagnostics.append(Diagnostic(
                    "warning", mod.file, inst.line, 1,
                    f"cannot normalize positional connections of '{inst.instance_name}': "
                    f"unknown module '{inst.child_module}'"))
                continue
            if len(inst.connections) > len(child.ports):
                unit.diagnostics.append(Diagnostic(
                    "error", mod.file, inst.line, 1,
                    f"instance '{inst.instance_name}' has more connections "
                    f"than '{child.name}' has ports"))
                continue
            inst.connections = [
                (child.ports[i].name, actual)
                for i, (_, actual) in enumerate(inst.connections)
            ]
            inst.positional = False
