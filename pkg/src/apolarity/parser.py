"""Expression language for divided-power polynomials and operators.

Grammar (explicit '*' everywhere):

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | atom
    atom   := INT ['/' INT] | pvar | dvar | '(' expr ')'
    pvar   := 'x' INT ['^[' INT ']']      divided power, P side
    dvar   := 'dx' INT ['^' INT]          ordinary power, S side
"""
from __future__ import annotations

import re
from fractions import Fraction

from .dpring import DpPoly, Operator
from .errors import ParseError, PreconditionError
from .fields import QQ, FieldSpec

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<dvar>dx(?P<dvi>\d+))
  | (?P<pvar>x(?P<pvi>\d+))
  | (?P<int>\d+)
  | (?P<op>\^\[|\]|[-+*/^()])
    """,
    re.VERBOSE,
)


def _position(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            line, col = _position(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if not m.group("ws"):
            if m.group("dvar"):
                out.append(("dvar", int(m.group("dvi")), pos))
            elif m.group("pvar"):
                out.append(("pvar", int(m.group("pvi")), pos))
            elif m.group("int"):
                out.append(("int", int(m.group("int")), pos))
            else:
                out.append((m.group("op"), None, pos))
        pos = m.end()
    out.append(("eof", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int | None, field: FieldSpec, side: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.side = side  # "P" or "S"
        if n is None:
            idx = [v for k, v, _ in self.toks if k in ("pvar", "dvar")]
            n = max(idx, default=1)
        self.n = n
        self.cls = DpPoly if side == "P" else Operator

    # helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None, hint=None):
        tok = tok or self.peek()
        line, col = _position(self.text, tok[2])
        raise ParseError(msg, line, col, hint)

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(self.text[tok[2]:tok[2] + 3])
            self.error(f"expected {kind!r}, found {found}")
        return self.take()

    def const(self, c):
        return self.cls.constant(c, self.n, self.field)

    # grammar
    def parse(self):
        if self.peek()[0] == "eof":
            self.error("empty expression")
        val = self.expr()
        if self.peek()[0] != "eof":
            self.error("unexpected trailing input")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] == "*":
            self.take()
            val = val * self.unary()
        return val

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            value = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.take()
                den = self.expect("int")
                if den[1] == 0:
                    self.error("division by zero", den)
                value = Fraction(tok[1], den[1])
            try:
                c = self.field(value)
            except PreconditionError as exc:
                self.error(f"coefficient {value} is not in the field {self.field}: {exc}", tok)
            return self.const(c)
        if kind == "(":
            self.take()
            val = self.expr()
            self.expect(")")
            return val
        if kind == "pvar":
            return self.pvar()
        if kind == "dvar":
            return self.dvar()
        if kind == "eof":
            self.error("unexpected end of input")
        self.error(f"unexpected {self.text[tok[2]]!r}")

    def _index(self, tok):
        i = tok[1]
        if not 1 <= i <= self.n:
            self.error(f"unknown variable index {i} (ring has {self.n} variables)", tok)
        return i - 1

    def pvar(self):
        tok = self.take()
        if self.side != "P":
            self.error("divided-power variable in an operator expression", tok, "write dx1 for the operator")
        i = self._index(tok)
        k = 1
        if self.peek()[0] == "^[":
            self.take()
            k = self.expect("int")[1]
            self.expect("]")
        elif self.peek()[0] == "^":
            self.error("ordinary power on a divided-power variable", self.peek(),
                       "use ^[k] for divided powers")
        return DpPoly.var(i, self.n, self.field, power=k)

    def dvar(self):
        tok = self.take()
        if self.side != "S":
            self.error("operator variable in a polynomial expression", tok, "write x1 for the polynomial variable")
        i = self._index(tok)
        k = 1
        if self.peek()[0] == "^":
            self.take()
            k = self.expect("int")[1]
        elif self.peek()[0] == "^[":
            self.error("divided power on an operator variable", self.peek(), "use ^k on the operator side")
        return Operator.var(i, self.n, self.field, power=k)


def parse_poly(text: str, n: int | None = None, field: FieldSpec = QQ) -> DpPoly:
    return _Parser(text, n, field, "P").parse()


def parse_operator(text: str, n: int | None = None, field: FieldSpec = QQ) -> Operator:
    return _Parser(text, n, field, "S").parse()
