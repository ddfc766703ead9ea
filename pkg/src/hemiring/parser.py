"""Element literals and term expressions in the index variable ``n``.

Grammar (whitespace insensitive, integers unbounded)::

    expr  := expr ("+"|"-") expr | expr "*" expr | expr "/" expr | "-" expr | atom "^" exp | atom
    atom  := integer | "X" | "n" | "(" expr ")"
    exp   := affine form a*n + b with integers a, b >= 0

Precedence is ``^`` > unary ``-`` > ``* /`` > ``+ -``; ``^`` is right
associative.  An element literal is an expression without ``n``, evaluated
in the target structure, so ``(3*X^2+1)/(X-2)`` and ``(-7)/8`` both parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import gmpy2

from .errors import (
    DivisionByZero,
    NonAffineExponent,
    NonCanonicalizable,
    NotAUnit,
    ParseError,
    WrongStructure,
)
from .maxtimes import BOTTOM, MaxTimes

mpq = gmpy2.mpq


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Gen:
    """The indeterminate X of Z(X)."""


@dataclass(frozen=True)
class Index:
    """The index variable n."""


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Pow:
    base: object
    slope: int
    offset: int


@dataclass(frozen=True)
class TermExpression:
    """Parsed term formula; ``text`` is the source it came from."""

    root: object
    text: str

    @property
    def uses_index(self):
        return _uses(self.root, Index)

    @property
    def uses_generator(self):
        return _uses(self.root, Gen)

    def __str__(self):
        return render_expr(self.root)


def _uses(node, kind):
    if isinstance(node, kind):
        return True
    if isinstance(node, BinOp):
        return _uses(node.left, kind) or _uses(node.right, kind)
    if isinstance(node, Neg):
        return _uses(node.operand, kind)
    if isinstance(node, Pow):
        return _uses(node.base, kind) or (kind is Index and node.slope != 0)
    return False


# ---------------------------------------------------------------------------
# tokenizer and recursive descent

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            name = m.group(2)
            if name not in ("X", "n"):
                raise ParseError(f"unknown identifier {name!r}", start, text)
            tokens.append(("name", name, start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] != "op":
            raise ParseError(f"expected {value!r}", tok[2], self.text)

    def at_op(self, *ops):
        kind, value, _ = self.peek()
        return kind == "op" and value in ops

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        node = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", pos, self.text)
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.at_op("-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.at_op("^"):
            caret = self.take()
            exp_start = self.peek()[2]
            if self.at_op("-"):
                raise NonAffineExponent("negative exponent", exp_start, self.text)
            exponent = self.power()
            slope, offset = _affine(exponent, exp_start, self.text)
            return Pow(base, slope, offset)
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "int":
            return Const(value)
        if kind == "name":
            if self.at_op("("):
                raise ParseError("function application is not supported", self.peek()[2], self.text)
            return Gen() if value == "X" else Index()
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected token {value!r}", pos, self.text)


def _affine(node, pos, text):
    """Reduce an exponent to ``(a, b)`` meaning ``a*n + b`` with a, b >= 0."""

    def go(nd):
        if isinstance(nd, Const):
            return 0, nd.value
        if isinstance(nd, Index):
            return 1, 0
        if isinstance(nd, Neg):
            a, b = go(nd.operand)
            return -a, -b
        if isinstance(nd, Pow):
            a, b = go(nd.base)
            if nd.slope == 0 and a == 0:
                return 0, b**nd.offset
            if nd.slope == 0 and nd.offset == 1:
                return a, b
            if nd.slope == 0 and nd.offset == 0:
                return 0, 1
            raise NonAffineExponent("exponent is not affine in n", pos, text)
        if isinstance(nd, BinOp):
            a1, b1 = go(nd.left)
            a2, b2 = go(nd.right)
            if nd.op == "+":
                return a1 + a2, b1 + b2
            if nd.op == "-":
                return a1 - a2, b1 - b2
            if nd.op == "*":
                if a1 and a2:
                    raise NonAffineExponent("exponent is not affine in n", pos, text)
                return a1 * b2 + a2 * b1, b1 * b2
            if nd.op == "/":
                if a2 == 0 and b2 != 0 and a1 % b2 == 0 and b1 % b2 == 0:
                    return a1 // b2, b1 // b2
                raise NonAffineExponent("exponent is not affine in n", pos, text)
        if isinstance(nd, Gen):
            raise NonAffineExponent("X may not appear in an exponent", pos, text)
        raise NonAffineExponent("unsupported exponent", pos, text)

    a, b = go(node)
    if a < 0 or b < 0:
        raise NonAffineExponent("exponent must be a*n + b with a, b >= 0", pos, text)
    return a, b


def parse_term_expression(text):
    """Parse a term formula such as ``(1/X)^(2*n+1)``."""
    return TermExpression(_Parser(text).parse(), text)


# ---------------------------------------------------------------------------
# evaluation


def evaluate(node, n, S, power=None):
    """Evaluate an AST node at index ``n`` in structure ``S``.

    ``power(base, k)`` overrides exponentiation; sequences pass one that
    switches to enclosures when an exact power would be too large.
    """
    if isinstance(node, Const):
        return S.from_int(node.value)
    if isinstance(node, Index):
        if n is None:
            raise WrongStructure("the index variable n is not allowed in an element literal")
        return S.from_int(n)
    if isinstance(node, Gen):
        gen = S.params.get("generator")
        if gen is None:
            raise WrongStructure(f"X is not an element of {S.id}")
        return gen
    if isinstance(node, Neg):
        if S.neg is None:
            raise WrongStructure(f"{S.id} has no negatives")
        return -evaluate(node.operand, n, S, power)
    if isinstance(node, Pow):
        if node.slope and n is None:
            raise WrongStructure("the index variable n is not allowed in an element literal")
        k = node.slope * (n or 0) + node.offset
        base = evaluate(node.base, n, S, power)
        if power is not None:
            return power(base, k)
        return base**k
    if isinstance(node, BinOp):
        left = evaluate(node.left, n, S, power)
        right = evaluate(node.right, n, S, power)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == S.zero:
            raise DivisionByZero("division by zero" + (f" at n={n}" if n is not None else ""), index=n)
        if hasattr(right, "rad_exp") or hasattr(left, "rad_exp"):
            return left / right
        return S.div(left, right)
    raise TypeError(f"unknown node {node!r}")


def evaluate_term(expr, n, structure):
    """Exact value of ``expr`` at index ``n``."""
    from .structures import resolve

    S = resolve(structure)
    if isinstance(expr, str):
        expr = parse_term_expression(expr)
    try:
        return evaluate(expr.root, n, S)
    except NotAUnit as exc:
        raise WrongStructure(str(exc)) from None


# ---------------------------------------------------------------------------
# elements


def parse_element(text, structure):
    """Parse ``text`` as a canonical element of ``structure``."""
    from .structures import resolve

    S = resolve(structure)
    if not isinstance(text, str):
        raise ParseError("element literal must be text")
    root = _Parser(text).parse()
    if _uses(root, Index):
        raise WrongStructure("the index variable n is not allowed in an element literal")
    if S.carrier == "maxtimes":
        q = _eval_element(root, _rational())
        if q < 0:
            raise WrongStructure(f"{text!r} is negative; max-times elements are 0 or positive")
        return BOTTOM if q == 0 else MaxTimes(q)
    if S.carrier == "qvec":
        raise WrongStructure("vectors are written as JSON lists of rationals")
    value = _eval_element(root, S.base or S)
    if not S.contains(value):
        raise WrongStructure(f"{text!r} is not an element of {S.id}")
    return value


def _rational():
    from .structures import get_structure

    return get_structure("rational")


def _eval_element(root, S):
    try:
        return evaluate(root, None, S)
    except DivisionByZero as exc:
        raise NonCanonicalizable(str(exc)) from None
    except NotAUnit as exc:
        raise WrongStructure(str(exc)) from None


def render_element(value, structure):
    from .structures import resolve

    return resolve(structure).render(value)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def render_expr(node, parent=0):
    """Render an AST back to grammar text (fully parenthesised where needed)."""
    if isinstance(node, Const):
        return str(node.value)
    if isinstance(node, Gen):
        return "X"
    if isinstance(node, Index):
        return "n"
    if isinstance(node, Neg):
        s = "-" + render_expr(node.operand, 3)
        return f"({s})" if parent > 2 else s
    if isinstance(node, Pow):
        base = render_expr(node.base, 4)
        if node.slope == 0:
            exp = str(node.offset)
        else:
            exp = "n" if node.slope == 1 else f"{node.slope}*n"
            if node.offset:
                exp = f"({exp}+{node.offset})"
            elif node.slope != 1:
                exp = f"({exp})"
        s = f"{base}^{exp}"
        return f"({s})" if parent > 4 else s
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = render_expr(node.left, p)
        right = render_expr(node.right, p + 1)
        s = f"{left}{node.op}{right}"
        return f"({s})" if parent > p else s
    raise TypeError(node)
