"""Text grammar for polynomials and elements.

Polynomials use ``d`` for the derivation, ``u``, ``v``, ``w`` for the lambda
variables and ``a``, ``b``, ``c`` for parameters::

    poly    := term (("+"|"-") term)*
    term    := factor ("*" factor)*
    factor  := rational | var | "(" poly ")" | factor "^" int
    element := poly "*" atom (("+"|"-") poly "*" atom)*
    atom    := ("L"|"G"|"x"|"y") "(" int ")" | "x" | "y"

Multiplication is always explicit.  Loop superalgebra atoms take a weight and
a loop index, e.g. ``G(1/2, 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .elements import BasisId, Combination, GenId, LoopGenId, format_combination
from .poly import LAMBDA_VARS, Poly, PolyError, Var, format_poly

VARIABLES = {name: Var(i) for i, name in enumerate("duvwabc")}
ATOM_NAMES = ("L", "G", "x", "y")
CONTEXTS = ("poly", "algebra", "module", "loop")


class ExprError(ValueError):
    """Parse or validation error, optionally tagged with a source position."""

    def __init__(self, message: str, pos: Optional[tuple] = None):
        self.pos = pos
        self.message = message
        if pos is not None:
            message = f"line {pos[0]}, column {pos[1]}: {message}"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    pass


class UnknownIdentifier(ExprError):
    pass


class IllegalExponent(ExprError):
    pass


class WrongContext(ExprError):
    pass


class LambdaVariableForbidden(ExprError):
    pass


# -- tokens -------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "eof"
    text: str
    pos: tuple


def tokenize(text: str) -> list:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line, col = line + 1, 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        start = (line, col)
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], start))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], start))
            col += j - i
            i = j
        elif ch in "+-*/^(),":
            tokens.append(Token("op", ch, start))
            i += 1
            col += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r}", start)
    tokens.append(Token("eof", "", (line, col)))
    return tokens


# -- syntax tree ----------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: tuple


@dataclass(frozen=True)
class VarRef:
    var: Var
    pos: tuple


@dataclass(frozen=True)
class AtomRef:
    name: str
    args: tuple  # Fractions; empty for bare x / y
    pos: tuple


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: tuple


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "Node"
    right: "Node"
    pos: tuple


@dataclass(frozen=True)
class PowNode:
    base: "Node"
    exponent: int
    pos: tuple


Node = Union[Num, VarRef, AtomRef, Neg, BinOp, PowNode]


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ExprSyntaxError(f"expected {text!r}, found {self._describe()}", self.tok.pos)
        return self.advance()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "eof" else repr(self.tok.text)

    def parse(self) -> Node:
        node = self.poly()
        if self.tok.kind != "eof":
            raise ExprSyntaxError(f"unexpected {self._describe()}", self.tok.pos)
        return node

    def poly(self) -> Node:
        if self.at("-") or self.at("+"):
            sign = self.advance()
            node = self.term()
            if sign.text == "-":
                node = Neg(node, sign.pos)
        else:
            node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            node = BinOp(op.text, node, self.term(), op.pos)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.at("*"):
            op = self.advance()
            node = BinOp("*", node, self.factor(), op.pos)
        return node

    def factor(self) -> Node:
        node = self.primary()
        while self.at("^"):
            op = self.advance()
            node = PowNode(node, self.signed_int(), op.pos)
        return node

    def signed_int(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise ExprSyntaxError(f"expected an integer, found {self._describe()}", self.tok.pos)
        return sign * int(self.advance().text)

    def rational(self) -> Fraction:
        t = self.advance()
        value = Fraction(int(t.text))
        if self.at("/"):
            self.advance()
            if self.tok.kind != "int" or int(self.tok.text) == 0:
                raise ExprSyntaxError(
                    f"expected a positive denominator, found {self._describe()}", self.tok.pos)
            value /= int(self.advance().text)
        return value

    def signed_rational(self) -> Fraction:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise ExprSyntaxError(f"expected a number, found {self._describe()}", self.tok.pos)
        return sign * self.rational()

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "int":
            return Num(self.rational(), t.pos)
        if self.at("("):
            self.advance()
            node = self.poly()
            self.expect(")")
            return node
        if t.kind == "name":
            self.advance()
            if t.text in VARIABLES:
                return VarRef(VARIABLES[t.text], t.pos)
            if t.text in ATOM_NAMES:
                args = ()
                if self.at("("):
                    self.advance()
                    vals = [self.signed_rational()]
                    while self.at(","):
                        self.advance()
                        vals.append(self.signed_rational())
                    self.expect(")")
                    args = tuple(vals)
                return AtomRef(t.text, args, t.pos)
            raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.pos)
        raise ExprSyntaxError(f"unexpected {self._describe()}", t.pos)


def parse_tree(text: str) -> Node:
    return Parser(text).parse()


# -- evaluation ---------------------------------------------------------------

@dataclass
class _Linear:
    const: Poly
    atoms: dict

    def has_atoms(self) -> bool:
        return bool(self.atoms)


def _atom_key(node: AtomRef, context: str):
    name, args = node.name, node.args
    if context == "poly":
        raise UnknownIdentifier(f"unknown identifier {name!r}", node.pos)
    if name in ("L", "G"):
        if context == "module":
            raise WrongContext(f"algebra atom {name} in a module expression", node.pos)
        if context == "loop":
            if len(args) != 2 or args[1].denominator != 1:
                raise ExprSyntaxError(f"{name} needs (weight, loop index)", node.pos)
            try:
                return LoopGenId(name, args[0], int(args[1]))
            except ValueError as exc:
                raise ExprSyntaxError(str(exc), node.pos) from None
        if len(args) != 1 or args[0].denominator != 1:
            raise ExprSyntaxError(f"{name} needs one integer grade", node.pos)
        return GenId(name, int(args[0]))
    if context in ("algebra", "loop"):
        raise WrongContext(f"module atom {name} in an algebra expression", node.pos)
    if not args:
        return BasisId(name)
    if len(args) != 1 or args[0].denominator != 1:
        raise ExprSyntaxError(f"{name} takes one integer grade", node.pos)
    return BasisId(name, int(args[0]))


def _eval(node: Node, context: str) -> _Linear:
    if isinstance(node, Num):
        return _Linear(Poly.const(node.value), {})
    if isinstance(node, VarRef):
        return _Linear(Poly.var(node.var), {})
    if isinstance(node, AtomRef):
        return _Linear(Poly.const(0), {_atom_key(node, context): Poly.const(1)})
    if isinstance(node, Neg):
        inner = _eval(node.operand, context)
        return _Linear(-inner.const, {k: -v for k, v in inner.atoms.items()})
    if isinstance(node, BinOp):
        left, right = _eval(node.left, context), _eval(node.right, context)
        if node.op in "+-":
            sign = 1 if node.op == "+" else -1
            atoms = dict(left.atoms)
            for k, v in right.atoms.items():
                atoms[k] = atoms.get(k, Poly.const(0)) + sign * v
            return _Linear(left.const + sign * right.const, atoms)
        if left.has_atoms() and right.has_atoms():
            raise ExprSyntaxError("product of two basis atoms", node.pos)
        if right.has_atoms():
            left, right = right, left
        return _Linear(left.const * right.const,
                       {k: v * right.const for k, v in left.atoms.items()})
    if isinstance(node, PowNode):
        base = _eval(node.base, context)
        if base.has_atoms():
            raise ExprSyntaxError("basis atoms cannot be raised to a power", node.pos)
        try:
            return _Linear(base.const ** node.exponent, {})
        except PolyError:
            raise IllegalExponent(
                "negative exponents are only allowed on powers of c", node.pos) from None
    raise TypeError(f"unknown node {node!r}")


def parse_poly(text: str) -> Poly:
    """Parse a polynomial, e.g. ``"c^-2*(d + a*u + b)"``."""
    return _eval(parse_tree(text), "poly").const


def parse_element(text: str, context: str = "algebra") -> Combination:
    """Parse an algebra (``L(0) - 3*G(2)``), module (``(d+b)*x + y``) or loop element."""
    if context not in CONTEXTS[1:]:
        raise ValueError(f"unknown element context {context!r}")
    tree = parse_tree(text)
    lin = _eval(tree, context)
    if lin.const:
        raise ExprSyntaxError("term without a basis atom", _first_pos(tree))
    coeffs = {k: v for k, v in lin.atoms.items() if v}
    for key, coef in coeffs.items():
        if coef.variables() & set(LAMBDA_VARS):
            raise LambdaVariableForbidden(
                f"coefficient of {key} uses a lambda variable", _first_pos(tree))
    if context == "loop":
        for key, coef in coeffs.items():
            if not coef.is_constant():
                raise ExprSyntaxError(
                    f"loop element coefficients must be rational, got {coef}", _first_pos(tree))
        return Combination({k: v.constant_value() for k, v in coeffs.items()})
    if context == "module":
        graded = {k.grade is None for k in coeffs}
        if len(graded) > 1:
            raise ExprSyntaxError("graded and ungraded basis atoms mixed", _first_pos(tree))
    return Combination(coeffs)


def _first_pos(node: Node) -> tuple:
    while isinstance(node, BinOp):
        node = node.left
    return node.pos


def print_canonical(value) -> str:
    """Deterministic text form accepted back by the parsers."""
    if isinstance(value, Poly):
        return format_poly(value)
    if isinstance(value, Combination):
        return format_combination(value)
    if isinstance(value, (int, Fraction)):
        return format_poly(Poly.const(value))
    to_elements = getattr(value, "to_elements", None)
    if to_elements is not None:
        elems = to_elements()
        if not elems:
            return "0"
        return "{" + ", ".join(format_combination(e) for e in elems) + "}"
    raise TypeError(f"cannot print {type(value).__name__}")
