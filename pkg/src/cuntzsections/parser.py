"""Text syntax for Elements.

Grammar (whitespace is insignificant)::

    element := ['+'|'-'] term (('+'|'-') term)*
    term    := [coeff '*'] factor+
    factor  := 'S' integer ['^*'] | 'I' | '(' element ')' ['^*']
    coeff   := real | '(' real ('+'|'-') real 'i' ')'

Juxtaposed factors multiply left to right and are reduced to normal form.
A parenthesised element followed by ``^*`` denotes its adjoint.
"""

from __future__ import annotations

import re

from .symbolic import Element

_REAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text[:pos]}>>>{text[pos:]}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str, N: int):
        self.text = text
        self.N = N
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, self.pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, s: str) -> bool:
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.take(s):
            self.error(f"expected {s!r}")

    def real(self) -> float:
        self.skip()
        m = _REAL.match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return float(m.group())

    # grammar

    def element(self) -> Element:
        sign = 1
        if self.take("-"):
            sign = -1
        else:
            self.take("+")
        result = self.term() * sign
        while True:
            if self.take("+"):
                result = result + self.term()
            elif self.take("-"):
                result = result - self.term()
            else:
                return result

    def try_coeff(self):
        start = self.pos
        self.skip()
        ch = self.peek()
        if ch.isdigit() or ch == ".":
            value = self.real()
            self.expect("*")
            return value
        if ch == "(":
            self.pos += 1
            try:
                re_part = self.real()
                op = self.peek()
                if op not in ("+", "-"):
                    raise ParseError("", self.pos, self.text)
                self.pos += 1
                im_part = self.real()
                self.expect("i")
                self.expect(")")
                self.expect("*")
            except ParseError:
                self.pos = start
                return None
            return complex(re_part, im_part if op == "+" else -im_part)
        self.pos = start
        return None

    def term(self) -> Element:
        coeff = self.try_coeff()
        factor = self.factor()
        if factor is None:
            self.error("expected a factor")
        result = factor
        while True:
            nxt = self.factor()
            if nxt is None:
                break
            result = result * nxt
        return result if coeff is None else result * coeff

    def factor(self):
        ch = self.peek()
        if ch == "S":
            self.pos += 1
            m = _INT.match(self.text, self.pos)
            if not m:
                self.error("expected a generator index after 'S'")
            i = int(m.group())
            if i >= self.N:
                self.error(f"generator index {i} >= N={self.N}")
            self.pos = m.end()
            gen = Element.generator(self.N, i)
            return gen.adjoint() if self.take("^*") else gen
        if ch == "I":
            self.pos += 1
            return Element.identity(self.N)
        if ch == "(":
            self.pos += 1
            inner = self.element()
            self.expect(")")
            return inner.adjoint() if self.take("^*") else inner
        return None


def parse_element(text: str, N: int) -> Element:
    """Parse ``text`` into a normal-form Element over ``N`` generators."""
    p = _Parser(text, N)
    if not p.peek():
        p.error("empty expression")
    result = p.element()
    if p.peek():
        p.error("unexpected trailing input")
    return result
