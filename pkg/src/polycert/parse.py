"""Recursive-descent parser for the polynomial grammar.

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := var | rational | '(' expr ')'
    rational := int ('/' nat)?        (the '/' form only over Q)

Whitespace is insignificant.  Errors carry the offending position.
"""

from __future__ import annotations

from .fields import Field, FieldError
from .poly import ContextError, Poly, VarContext


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.take(ch):
            raise ParseError(f"expected {ch!r}", self.pos)

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected a number", start)
        return int(self.text[start : self.pos])

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (
            self.text[self.pos].isalpha() or self.text[self.pos] == "_"
        ):
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
        if self.pos == start:
            raise ParseError("expected a variable name", start)
        return self.text[start : self.pos]


class _Parser:
    def __init__(self, text: str, ctx: VarContext, field: Field):
        self.s = _Scanner(text)
        self.ctx = ctx
        self.field = field

    def parse(self) -> Poly:
        p = self.expr()
        self.s.skip_ws()
        if self.s.pos != len(self.s.text):
            raise ParseError("unexpected trailing input", self.s.pos)
        return p

    def expr(self) -> Poly:
        negate = False
        if self.s.peek() == "-":
            self.s.take("-")
            negate = True
        p = self.term()
        if negate:
            p = -p
        while True:
            c = self.s.peek()
            if c == "+":
                self.s.take("+")
                p = p + self.term()
            elif c == "-":
                self.s.take("-")
                p = p - self.term()
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while self.s.peek() == "*":
            self.s.take("*")
            p = p * self.factor()
        return p

    def factor(self) -> Poly:
        p = self.base()
        if self.s.peek() == "^":
            self.s.take("^")
            n = self.s.nat()
            p = p**n
        return p

    def base(self) -> Poly:
        c = self.s.peek()
        if c == "(":
            self.s.take("(")
            p = self.expr()
            self.s.expect(")")
            return p
        if c.isdigit():
            pos = self.s.pos
            num = self.s.nat()
            if self.s.peek() == "/":
                self.s.take("/")
                den_pos = self.s.pos
                den = self.s.nat()
                if den == 0:
                    raise ParseError("zero denominator", den_pos)
                try:
                    value = self.field.of_fraction(num, den)
                except FieldError as exc:
                    raise ParseError(str(exc), pos) from exc
                return Poly.const(self.ctx, self.field, value)
            return Poly.const(self.ctx, self.field, self.field.of_int(num))
        pos = self.s.pos
        name = self.s.name()
        if name not in self.ctx:
            raise ParseError(f"unknown variable {name!r}", pos)
        return Poly.var(self.ctx, self.field, name)


def parse_poly(text: str, ctx: VarContext, field: Field) -> Poly:
    """Parse canonical polynomial text into a Poly over (ctx, field)."""
    return _Parser(text, ctx, field).parse()
