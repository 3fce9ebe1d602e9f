"""Parser for the supported assertion grammar.

Accepted form (label, wrapper, clocking, disable and trailing ';' optional):

    [label :] assert property ( [@(posedge clk)] [disable iff (expr)] P ) ;

with properties P built from boolean expressions, `##n` / `##[n:m]` delays,
consecutive repetition `[*n]` / `[*n:m]`, implication `|->` / `|=>`, and the
property connectives `and`, `or`, `not`.  Boolean leaves may use `$past`,
`$rose`, `$fell`, `$stable` and `$bits`.  Everything else is rejected with a
position-annotated error.

Operator precedence, loosest to tightest: implication, `or`, `and`, `not`,
sequence operators.  `and`/`or`/`not` are property-level connectives here;
sequence-level `and`/`or`/`intersect` are outside the subset.
"""

from __future__ import annotations

from ..rtl.lexer import LexError, lex
from ..rtl.nodes import Expr, Ident, Number, SysCall
from ..rtl.parser import ExprParser, ParseError
from ..rtl.tokens import Token, TokenType as T
from .nodes import (
    Clocking, PropAnd, PropImpl, PropNode, PropNot, PropOr, PropSeq, SeqBool,
    SeqDelay, SeqNode, SeqRepeat, SvaAssertion, bool_leaves,
)

_ALLOWED_SYSCALLS = {"past": (1, 2), "rose": (1, 1), "fell": (1, 1),
                     "stable": (1, 1), "bits": (1, 1)}

_PROP_MARKERS = {T.OVL_IMPL, T.NOVL_IMPL, T.OR, T.AND, T.NOT}


class SvaSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int,
                 expected: tuple[str, ...] = ()):
        loc = f"L{line}:{col}"
        exp = ""
        if expected and not message.startswith("expected"):
            exp = f" (expected {', '.join(expected)})"
        super().__init__(f"{loc}: {message}{exp}")
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected


class _SvaParser(ExprParser):
    def parse_ident_expr(self) -> Expr:
        tok = self.eat(T.IDENT)
        name = tok.value
        while self.at(T.DOT) and self.peek().type == T.IDENT:
            self.pos += 1
            name += "." + self.eat(T.IDENT).value
        expr: Expr = Ident(name, escaped=tok.escaped, line=tok.line,
                           col=tok.col, span=(tok.pos, tok.end))
        return self.parse_postfix(expr)

    # -- structure ------------------------------------------------------------

    def parse_assertion(self) -> SvaAssertion:
        label = None
        if self.at(T.IDENT) and self.peek().type == T.COLON:
            label = self.eat(T.IDENT).value
            self.eat(T.COLON)
        wrapped = False
        if self.eat_if(T.ASSERT):
            self.eat(T.PROPERTY, "expected 'property' after 'assert'")
            self.eat(T.LPAREN, "expected '(' after 'assert property'")
            wrapped = True
        clock = None
        if self.eat_if(T.AT):
            self.eat(T.LPAREN, "expected '(' after '@'")
            if self.eat_if(T.POSEDGE):
                edge = "posedge"
            elif self.eat_if(T.NEGEDGE):
                edge = "negedge"
            else:
                raise ParseError("expected posedge or negedge", self.cur())
            sig = self.parse_expr()
            self.eat(T.RPAREN, "expected ')' after clocking")
            clock = Clocking(edge, sig)
        disable = None
        if self.eat_if(T.DISABLE):
            self.eat(T.IFF, "expected 'iff' after 'disable'")
            self.eat(T.LPAREN, "expected '(' after 'disable iff'")
            disable = self.parse_expr()
            self.eat(T.RPAREN, "expected ')' after disable expression")
        body = self.parse_property()
        if wrapped:
            self.eat(T.RPAREN, "expected ')' closing 'assert property ('")
            self.eat_if(T.SEMICOLON)
        else:
            self.eat_if(T.SEMICOLON)
        if not self.at(T.EOF):
            raise ParseError("unexpected trailing input", self.cur())
        return SvaAssertion(body, clock, disable, label)

    # -- properties -----------------------------------------------------------

    def parse_property(self) -> PropNode:
        lhs = self.parse_prop_or()
        tok = self.cur()
        if tok.type in (T.OVL_IMPL, T.NOVL_IMPL):
            self.pos += 1
            if not isinstance(lhs, PropSeq):
                raise ParseError("implication antecedent must be a sequence", tok)
            rhs = self.parse_property()
            return PropImpl(lhs.seq, "|->" if tok.type == T.OVL_IMPL else "|=>", rhs)
        return lhs

    def parse_prop_or(self) -> PropNode:
        lhs = self.parse_prop_and()
        while self.at(T.OR):
            self.pos += 1
            lhs = PropOr(lhs, self.parse_prop_and())
        return lhs

    def parse_prop_and(self) -> PropNode:
        lhs = self.parse_prop_unary()
        while self.at(T.AND):
            self.pos += 1
            lhs = PropAnd(lhs, self.parse_prop_unary())
        return lhs

    def parse_prop_unary(self) -> PropNode:
        if self.eat_if(T.NOT):
            return PropNot(self.parse_prop_unary())
        return self.parse_seq_property()

    def parse_seq_property(self) -> PropNode:
        # a parenthesized property is allowed where a sequence would start,
        # as long as no sequence operator tries to extend it afterwards
        if self.at(T.LPAREN) and self._paren_kind() == "prop":
            self.eat(T.LPAREN)
            inner = self.parse_property()
            self.eat(T.RPAREN, "expected ')'")
            if self.at(T.DLY) or self._at_repeat():
                if not isinstance(inner, PropSeq):
                    raise ParseError(
                        "property operators cannot appear inside a sequence",
                        self.cur())
                return PropSeq(self._seq_tail(inner.seq))
            return inner
        return PropSeq(self.parse_sequence())

    # -- sequences -------------------------------------------------------------

    def parse_sequence(self) -> SeqNode:
        if self.at(T.DLY):
            lo, hi = self.parse_delay()
            node: SeqNode = SeqDelay(None, lo, hi, self.parse_seq_item())
        else:
            node = self.parse_seq_item()
        return self._seq_tail(node)

    def _seq_tail(self, node: SeqNode) -> SeqNode:
        while self.at(T.DLY):
            lo, hi = self.parse_delay()
            node = SeqDelay(node, lo, hi, self.parse_seq_item())
        return node

    def parse_delay(self) -> tuple[int, int]:
        self.eat(T.DLY)
        if self.eat_if(T.LBRACKET):
            lo_tok = self.eat(T.NUMBER, "expected delay bound")
            lo = self._bound(lo_tok)
            self.eat(T.COLON, "expected ':' in delay window")
            hi_tok = self.eat(T.NUMBER, "expected delay bound")
            hi = self._bound(hi_tok)
            self.eat(T.RBRACKET, "expected ']' after delay window")
            if hi < lo:
                raise ParseError(f"delay window [{lo}:{hi}] has inverted bounds",
                                 hi_tok)
            return lo, hi
        tok = self.eat(T.NUMBER, "expected delay amount after '##'")
        n = self._bound(tok)
        return n, n

    def parse_seq_item(self) -> SeqNode:
        node = self.parse_seq_primary()
        while self._at_repeat():
            self.eat(T.LBRACKET)
            self.eat(T.STAR)
            lo_tok = self.eat(T.NUMBER, "expected repetition count")
            lo = self._bound(lo_tok)
            hi = lo
            if self.eat_if(T.COLON):
                hi_tok = self.eat(T.NUMBER, "expected repetition bound")
                hi = self._bound(hi_tok)
                if hi < lo:
                    raise ParseError(
                        f"repetition [{lo}:{hi}] has inverted bounds", hi_tok)
            self.eat(T.RBRACKET, "expected ']' after repetition")
            if lo < 1:
                raise ParseError("repetition count must be at least 1", lo_tok)
            node = SeqRepeat(node, lo, hi)
        return node

    def parse_seq_primary(self) -> SeqNode:
        if self.at(T.LPAREN):
            kind = self._paren_kind()
            if kind == "prop":
                tok = self.cur()
                self.eat(T.LPAREN)
                inner = self.parse_property()
                self.eat(T.RPAREN, "expected ')'")
                if isinstance(inner, PropSeq):
                    return inner.seq
                raise ParseError(
                    "property operators cannot appear inside a sequence", tok)
            if kind == "seq":
                self.eat(T.LPAREN)
                inner_seq = self.parse_sequence()
                self.eat(T.RPAREN, "expected ')'")
                return inner_seq
        return SeqBool(self.parse_expr())

    def _at_repeat(self) -> bool:
        return self.at(T.LBRACKET) and self.peek().type == T.STAR

    def _bound(self, tok: Token) -> int:
        num = Number(tok.value)
        v = num.int_value()
        if v is None or v < 0:
            raise ParseError("bound must be a nonnegative constant", tok)
        return v

    def _paren_kind(self) -> str:
        """Classify the parenthesized group starting at the cursor:
        'prop' (property connectives inside), 'seq' (sequence operators
        inside) or 'expr'."""
        depth = 0
        i = self.pos
        kind = "expr"
        while i < len(self.tokens):
            t = self.tokens[i]
            if t.type == T.LPAREN:
                depth += 1
            elif t.type == T.RPAREN:
                depth -= 1
                if depth == 0:
                    break
            elif t.type in _PROP_MARKERS:
                return "prop"
            elif t.type == T.DLY:
                kind = "seq"
            elif (t.type == T.LBRACKET and i + 1 < len(self.tokens)
                  and self.tokens[i + 1].type == T.STAR):
                kind = "seq"
            i += 1
        return kind


def _check_syscalls(body: PropNode, clock: Clocking | None,
                    disable: Expr | None) -> None:
    exprs = list(bool_leaves(body))
    if clock is not None:
        exprs.append(clock.signal)
    if disable is not None:
        exprs.append(disable)

    def walk(e: Expr) -> None:
        if isinstance(e, SysCall):
            arity = _ALLOWED_SYSCALLS.get(e.name)
            if arity is None:
                raise SvaSyntaxError(f"unsupported system function ${e.name}", 0, 0,
                                     tuple(f"${n}" for n in sorted(_ALLOWED_SYSCALLS)))
            lo, hi = arity
            if not (lo <= len(e.args) <= hi):
                raise SvaSyntaxError(f"${e.name} takes {lo}"
                                     + (f"..{hi}" if hi != lo else "")
                                     + f" arguments, got {len(e.args)}", 0, 0)
            if e.name == "past" and len(e.args) == 2:
                depth = e.args[1]
                dv = depth.int_value() if isinstance(depth, Number) else None
                if dv is None or dv < 1:
                    raise SvaSyntaxError("$past depth must be a constant >= 1", 0, 0)
        for attr in ("lhs", "rhs", "operand", "cond", "then", "other",
                     "base", "index", "msb", "lsb", "count", "value"):
            sub = getattr(e, attr, None)
            if isinstance(sub, Expr):
                walk(sub)
        for part in getattr(e, "parts", []) or []:
            walk(part)
        for arg in getattr(e, "args", []) or []:
            walk(arg)

    for ex in exprs:
        walk(ex)


def parse_sva(text: str) -> SvaAssertion:
    """Parse one assertion.  Raises SvaSyntaxError on anything outside the
    grammar, annotated with line/column."""
    try:
        toks = lex(text, sva=True)
    except LexError as exc:
        raise SvaSyntaxError(str(exc), exc.line, exc.col) from exc
    parser = _SvaParser(toks, text)
    try:
        assertion = parser.parse_assertion()
    except ParseError as exc:
        expected = (exc.msg[len("expected "):],) if exc.msg.startswith("expected ") else ()
        raise SvaSyntaxError(exc.msg, exc.token.line, exc.token.col,
                             expected) from exc
    _check_syscalls(assertion.body, assertion.clock, assertion.disable)
    assertion.src_text = text
    return assertion
