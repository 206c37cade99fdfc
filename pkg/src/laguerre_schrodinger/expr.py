"""Potential specifications: arithmetic expressions in ``x`` or sample files.

Grammar (recursive descent, usual precedence, ``^`` right associative and
binding tighter than unary minus)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" unary)?
    primary := NUMBER | "x" | FUNC "(" expr ")" | "(" expr ")"

``str(tree)`` prints a fully parenthesised form that parses back to an equal
tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .spps import PotentialProfile

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "cosh": np.cosh,
    "sinh": np.sinh,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
BUILTINS = {"zero": 0.0, "one": 1.0}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self):
        return repr(float(self.value))

    def evaluate(self, x):
        return np.full_like(x, self.value, dtype=float)


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"

    def evaluate(self, x):
        return np.array(x, dtype=float)


@dataclass(frozen=True)
class Neg:
    operand: object

    def __str__(self):
        return f"(-{self.operand})"

    def evaluate(self, x):
        return -self.operand.evaluate(x)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"

    def evaluate(self, x):
        a = self.left.evaluate(x)
        b = self.right.evaluate(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            return a / b
        return np.power(a, b)


@dataclass(frozen=True)
class Call:
    func: str
    arg: object

    def __str__(self):
        return f"{self.func}({self.arg})"

    def evaluate(self, x):
        return FUNCTIONS[self.func](self.arg.evaluate(x))


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, value=None):
        kind, val, pos = self.tok
        if value is not None and val != value:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", pos)
        self.i += 1
        return val

    def parse(self):
        tree = self.expr()
        kind, val, pos = self.tok
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return tree

    def expr(self):
        left = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.take()
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.take()
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] in ("-", "+"):
            op = self.take()
            operand = self.unary()
            return Neg(operand) if op == "-" else operand
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        kind, val, pos = self.tok
        if kind == "num":
            self.take()
            return Num(float(val))
        if kind == "name":
            self.take()
            if val == "x":
                return Var()
            if val in FUNCTIONS:
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Call(val, arg)
            raise ParseError(f"unknown identifier {val!r}", pos)
        if val == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"syntax error: expected a value, found {found}", pos)


def parse_expression(text):
    """Parse an expression string into a tree."""
    return _Parser(text).parse()


def _has_var(node):
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _has_var(node.operand)
    if isinstance(node, Call):
        return _has_var(node.arg)
    return _has_var(node.left) or _has_var(node.right)


@dataclass(frozen=True)
class PotentialExpr:
    """A parsed potential ``q(x)``."""

    tree: object
    source: str

    @property
    def is_constant(self):
        return not _has_var(self.tree)

    def constant_value(self):
        return float(self.tree.evaluate(np.zeros(1))[0])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            vals = np.asarray(self.tree.evaluate(x), dtype=float)
        if not np.all(np.isfinite(vals)):
            bad = np.atleast_1d(x)[~np.isfinite(np.atleast_1d(vals))][0]
            raise ParseError(f"potential {self.source!r} is not finite at x = {bad}")
        return vals

    def profile(self, grid):
        return PotentialProfile.from_callable(grid, self, label=self.source)

    def __str__(self):
        return str(self.tree)


@dataclass(frozen=True, eq=False)
class SampledPotential:
    """Potential given as two-column ``x, q`` samples (``x`` from 0, increasing)."""

    x: np.ndarray
    q: np.ndarray
    source: str
    is_constant = False

    def __call__(self, x):
        from scipy.interpolate import CubicSpline

        return CubicSpline(self.x, self.q)(np.asarray(x, dtype=float))

    @property
    def d(self):
        return float(self.x[-1])

    def profile(self, grid):
        if grid.m == self.x.size and np.allclose(grid.nodes, self.x, rtol=0, atol=1e-13):
            return PotentialProfile(grid, self.q.copy(), func=self, label=self.source)
        return PotentialProfile.from_callable(grid, self, label=self.source)


def load_samples(path):
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    except ValueError:
        data = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1)
    if data.shape[1] != 2:
        raise ParseError(f"{path}: expected two columns (x, q)")
    x, q = data[:, 0], data[:, 1]
    if x[0] != 0 or np.any(np.diff(x) <= 0):
        raise ParseError(f"{path}: x must start at 0 and increase strictly")
    if not np.all(np.isfinite(q)):
        raise ParseError(f"{path}: non-finite potential samples")
    return SampledPotential(x, q, "@" + str(path))


def parse_potential(source):
    """Parse a potential specification.

    ``source`` is an expression in ``x``, a builtin name (``zero``, ``one``) or
    ``@path`` naming a two-column CSV of samples.
    """
    if not source or not source.strip():
        raise ParseError("empty potential specification", 0)
    text = source.strip()
    if text in BUILTINS:
        return PotentialExpr(Num(BUILTINS[text]), text)
    if text.startswith("@"):
        return load_samples(text[1:])
    return PotentialExpr(parse_expression(source), source)
