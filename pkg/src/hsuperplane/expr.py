"""Parsing and printing of algebra elements.

Grammar (whitespace between tokens is ignored):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ['^' ['-'] integer]
    base   := name | integer | '(' expr ')'

The product sign is mandatory between factors.  ``q`` and ``i`` always denote
the deformation parameter and the imaginary unit; every other name must be a
generator of the presentation in scope.  Negative powers and division are
only defined for scalar-valued subexpressions, so printed coefficients like
``q^-1`` read back in.  Parsing produces free elements; nothing is rewritten.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .algebra import Element, Presentation
from .scalar import I, ONE, Q, ScalarQ


class ExprSyntaxError(ValueError):
    """Malformed expression; ``position`` is the byte offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownSymbolError(ValueError):
    """Expression uses a name that is not a generator in scope."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown symbol {name!r} (at offset {position})")
        self.name = name
        self.position = position


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME, INT, OP, END
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], i))
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("OP", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, presentation: Optional[Presentation]):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.presentation = presentation

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept_op(self, *ops: str) -> Optional[_Token]:
        tok = self.peek()
        if tok.kind == "OP" and tok.text in ops:
            return self.advance()
        return None

    def parse(self) -> Element:
        tok = self.peek()
        if tok.kind == "END":
            raise ExprSyntaxError("empty expression", tok.pos)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.pos)
        return value

    def expr(self) -> Element:
        negate = self.accept_op("-") is not None
        value = self.term()
        if negate:
            value = -value
        while True:
            tok = self.accept_op("+", "-")
            if tok is None:
                return value
            rhs = self.term()
            value = value + rhs if tok.text == "+" else value - rhs

    def term(self) -> Element:
        value = self.factor()
        while True:
            tok = self.accept_op("*", "/")
            if tok is None:
                return value
            rhs = self.factor()
            if tok.text == "*":
                value = value * rhs
            else:
                if not rhs.is_scalar():
                    raise ExprSyntaxError("division by a non-scalar", tok.pos)
                divisor = rhs.scalar_part()
                if divisor.is_zero():
                    raise ExprSyntaxError("division by zero", tok.pos)
                value = value.scale(divisor ** -1)

    def factor(self) -> Element:
        value = self.base()
        caret = self.accept_op("^")
        if caret is None:
            return value
        sign = -1 if self.accept_op("-") else 1
        tok = self.peek()
        if tok.kind != "INT":
            raise ExprSyntaxError("expected an integer exponent", tok.pos)
        self.advance()
        exponent = sign * int(tok.text)
        if exponent < 0 and not value.is_scalar():
            raise ExprSyntaxError("negative power of a non-scalar", caret.pos)
        return value ** exponent

    def base(self) -> Element:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return Element.scalar(int(tok.text))
        if tok.kind == "NAME":
            self.advance()
            if tok.text == "q":
                return Element.scalar(Q)
            if tok.text == "i":
                return Element.scalar(I)
            if self.presentation is not None and self.presentation.has_generator(tok.text):
                return Element.generator(tok.text)
            raise UnknownSymbolError(tok.text, tok.pos)
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            value = self.expr()
            if not self.accept_op(")"):
                inner = self.peek()
                raise ExprSyntaxError("expected ')'", inner.pos)
            return value
        raise ExprSyntaxError(f"expected a name, number or '(', got {tok.text!r}", tok.pos)


def parse_element(text: str, presentation: Presentation) -> Element:
    """Parse an expression over the presentation's generators (free, unreduced)."""
    return _Parser(text, presentation).parse()


def parse_scalar(text: str) -> ScalarQ:
    """Parse a pure scalar expression in q and i."""
    value = _Parser(text, None).parse()
    if not value.is_scalar():
        raise ExprSyntaxError("expected a scalar expression", 0)
    return value.scalar_part()


# -- printing ------------------------------------------------------------------


def _scalar_product_str(c: ScalarQ) -> str:
    """String for a coefficient standing left of '*', parenthesised when the
    rendering has a top-level additive join."""
    s = str(c)
    depth = 0
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and idx > 0 and s[idx - 1] != "^":
            return f"({s})"
    return s


def _word_str(word) -> str:
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(word[i] if j - i == 1 else f"{word[i]}^{j - i}")
        i = j
    return "*".join(parts)


def format_element(element: Element, presentation: Optional[Presentation] = None) -> str:
    """Canonical rendering; ``parse_element`` reads the result back verbatim."""
    if element.is_zero():
        return "0"
    rendered = []
    for word, coeff in element.sorted_terms(presentation):
        if not word:
            rendered.append(str(coeff))
        elif coeff == ONE:
            rendered.append(_word_str(word))
        elif coeff == -ONE:
            rendered.append("-" + _word_str(word))
        else:
            rendered.append(f"{_scalar_product_str(coeff)}*{_word_str(word)}")
    out = rendered[0]
    for part in rendered[1:]:
        if part.startswith("-"):
            out += f" - {part[1:]}"
        else:
            out += f" + {part}"
    return out
