# arith/parser.py
"""
Expression grammar for rational functions in t (whitespace-insensitive):

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := atom ('/' atom)?
    atom     := rational | 't' ('^' signed_int)? | '(' expr ')'
    rational := signed_int ('/' int)?
"""
import logging

import ply.lex as lex

from core.exceptions import DivisionByZero, ExpressionSyntaxError

from .ratfun import RatFun, rational

logger = logging.getLogger(__name__)


class ExpressionLexer:
    tokens = ("NUMBER", "T", "PLUS", "MINUS", "TIMES", "DIVIDE", "CARET", "LPAREN", "RPAREN")

    t_T = r"t"
    t_PLUS = r"\+"
    t_MINUS = r"-"
    t_TIMES = r"\*"
    t_DIVIDE = r"/"
    t_CARET = r"\^"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_ignore = " \t\r\n"

    def t_NUMBER(self, tok):
        r"\d+"
        tok.value = int(tok.value)
        return tok

    def t_error(self, tok):
        raise ExpressionSyntaxError(f"unexpected character {tok.value[0]!r}", tok.lexpos)


_LEXER = lex.lex(module=ExpressionLexer(), errorlog=lex.NullLogger())


class _Parser:
    def __init__(self, text):
        self.text = text
        lexer = _LEXER.clone()
        lexer.input(text)
        self.tokens = list(iter(lexer.token, None))
        self.index = 0

    def _peek(self, offset=0):
        i = self.index + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def _at(self, *types, offset=0):
        tok = self._peek(offset)
        return tok is not None and tok.type in types

    def _position(self):
        tok = self._peek()
        return tok.lexpos if tok is not None else len(self.text)

    def _advance(self):
        tok = self._peek()
        self.index += 1
        return tok

    def _expect(self, kind, what):
        if not self._at(kind):
            found = self._peek()
            label = repr(found.value) if found is not None else "end of input"
            raise ExpressionSyntaxError(f"expected {what}, found {label}", self._position())
        return self._advance()

    def parse(self):
        value = self.expr()
        if self._peek() is not None:
            raise ExpressionSyntaxError(f"unexpected {self._peek().value!r}", self._position())
        return value

    def expr(self):
        value = self.term()
        while self._at("PLUS", "MINUS"):
            op = self._advance()
            rhs = self.term()
            value = value + rhs if op.type == "PLUS" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self._at("TIMES"):
            self._advance()
            value = value * self.factor()
        return value

    def factor(self):
        value = self.atom()
        if self._at("DIVIDE"):
            position = self._advance().lexpos
            divisor = self.atom()
            if divisor.is_zero():
                raise DivisionByZero(f"denominator at position {position + 1} is zero")
            value = value / divisor
        return value

    def atom(self):
        if self._at("NUMBER", "MINUS"):
            return RatFun.const(self.rational())
        if self._at("T"):
            self._advance()
            if self._at("CARET"):
                self._advance()
                return RatFun.monomial(self.signed_int())
            return RatFun.t()
        if self._at("LPAREN"):
            self._advance()
            value = self.expr()
            self._expect("RPAREN", "')'")
            return value
        found = self._peek()
        label = repr(found.value) if found is not None else "end of input"
        raise ExpressionSyntaxError(f"expected a number, 't' or '(', found {label}", self._position())

    def signed_int(self):
        sign = 1
        if self._at("MINUS"):
            self._advance()
            sign = -1
        return sign * self._expect("NUMBER", "an integer").value

    def rational(self):
        numerator = self.signed_int()
        if self._at("DIVIDE") and self._at("NUMBER", offset=1):
            self._advance()
            denominator = self._advance()
            if denominator.value == 0:
                raise DivisionByZero(f"rational with zero denominator at position {denominator.lexpos}")
            return rational(numerator, denominator.value)
        return rational(numerator)


def parse_ratfun(text):
    """Parse ``text`` into a canonical RatFun."""
    value = _Parser(text).parse()
    logger.debug(f"Parsed {text!r} as {value}")
    return value
