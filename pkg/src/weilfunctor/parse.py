"""Infix expression text -> :class:`~weilfunctor.lift.ExprGraph`.

Grammar (LL(1)), with ``^`` binding tightest and right-associative::

    list    := expr (',' expr)*
    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' intexp)?
    intexp  := '-'? INT ('^' intexp)?
    atom    := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'

Variables are ``x1 .. xn``; functions are ``exp log sin cos sqrt``.
"""

from __future__ import annotations

import re

from . import lift
from .errors import ParseError
from .lift import ExprGraph, GraphBuilder, Sym

FUNCTIONS = {"exp": lift.exp, "log": lift.log, "sin": lift.sin, "cos": lift.cos, "sqrt": lift.sqrt}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, builder: GraphBuilder | None, arity: int | None):
        self.toks = tokenize(text)
        self.i = 0
        self.builder = builder
        self.arity = arity

    @property
    def tok(self):
        return self.toks[self.i]

    def accept(self, value: str) -> bool:
        if self.tok[0] == "op" and self.tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            kind, val, pos = self.tok
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse_list(self):
        out = [self.expr()]
        while self.accept(","):
            out.append(self.expr())
        if self.tok[0] != "end":
            raise ParseError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return out

    def expr(self):
        val = self.term()
        while True:
            if self.accept("+"):
                val = val + self.term()
            elif self.accept("-"):
                val = val - self.term()
            else:
                return val

    def term(self):
        val = self.unary()
        while True:
            if self.accept("*"):
                val = val * self.unary()
            elif self.accept("/"):
                val = val / self.unary()
            else:
                return val

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            return base ** self.intexp()
        return base

    def intexp(self) -> int:
        neg = self.accept("-")
        kind, val, pos = self.tok
        if kind != "num" or not val.isdigit():
            raise ParseError("exponent must be an integer literal", pos)
        self.i += 1
        k = int(val)
        if self.accept("^"):
            k = k ** self.intexp()
        return -k if neg else k

    def atom(self):
        kind, val, pos = self.tok
        if kind == "num":
            self.i += 1
            return self._const(float(val))
        if kind == "name":
            self.i += 1
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return FUNCTIONS[val](arg)
            m = re.fullmatch(r"x([1-9]\d*)", val)
            if not m:
                raise ParseError(f"unknown name {val!r}", pos)
            k = int(m.group(1))
            if self.arity is not None and k > self.arity:
                raise ParseError(f"variable {val} exceeds the number of inputs ({self.arity})", pos)
            return self.builder.inputs[k - 1]
        if self.accept("("):
            val = self.expr()
            self.expect(")")
            return val
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def _const(self, c: float) -> Sym:
        return self.builder.const(c)


def _max_variable(text: str) -> int:
    found = [int(m.group(1)) for m in re.finditer(r"(?<![\w.])x([1-9]\d*)\b", text)]
    return max(found, default=0)


def parse_expressions(text: str, arity: int | None = None) -> ExprGraph:
    """Parse a comma-separated list of expressions into one graph.

    Without ``arity`` the number of inputs is the largest variable index used.
    """
    n = _max_variable(text) if arity is None else arity
    builder = GraphBuilder(n)
    outs = _Parser(text, builder, n).parse_list()
    return builder.finish(outs)


def format_graph(g: ExprGraph) -> str:
    """Render a graph back to expression text (fully parenthesised)."""
    names: list[str] = []
    for nd in g.nodes:
        a = [names[i] for i in nd.args]
        if nd.op == "input":
            names.append(f"x{nd.param + 1}")
        elif nd.op == "const":
            names.append(repr(float(nd.param)) if nd.param >= 0 else f"({float(nd.param)!r})")
        elif nd.op == "add":
            names.append(f"({a[0]} + {a[1]})")
        elif nd.op == "mul":
            names.append(f"({a[0]} * {a[1]})")
        elif nd.op == "neg":
            names.append(f"(-{a[0]})")
        elif nd.op == "inv":
            names.append(f"(1 / {a[0]})")
        elif nd.op == "pow":
            names.append(f"({a[0]} ^ {nd.param})" if nd.param >= 0 else f"({a[0]} ^ -{-nd.param})")
        else:
            names.append(f"{nd.op}({a[0]})")
    return ", ".join(names[o] for o in g.outputs)
