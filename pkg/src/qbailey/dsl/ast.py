"""Expression trees for q-series identity claims, plus the printer."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..bailey import FamilyParams
from .poly import Poly

ZERO = Poly.const(0)


@dataclass(frozen=True)
class Literal:
    value: int


@dataclass(frozen=True)
class Monomial:
    """``(-1)**sign_exp * a**a_exp * q**q_exp``."""

    a_exp: Poly = ZERO
    q_exp: Poly = ZERO
    sign_exp: Poly = ZERO


@dataclass(frozen=True)
class PochFactor:
    """``(sign * a**a_exp * q**q_exp ; q**step)_length``; ``length=None`` is infinite."""

    sign: int
    a_exp: int
    q_exp: Poly
    step: int
    length: Optional[Poly]


@dataclass(frozen=True)
class TripleProd:
    x: int
    P: int


@dataclass(frozen=True)
class Sum:
    bounds: Tuple[Tuple[str, int], ...]
    body: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Union[Literal, Monomial, PochFactor, TripleProd, Sum, Add, Sub, Mul, Div, Neg]


@dataclass(frozen=True)
class IdentityDoc:
    name: str
    lhs: Expr
    rhs: Expr
    modulus: Optional[int] = None
    params: Optional[FamilyParams] = None
    member: Optional[int] = None
    default_order: int = 50
    line: int = field(default=0, compare=False)

    @property
    def bivariate(self) -> bool:
        return uses_a(self.lhs) or uses_a(self.rhs)

    @property
    def q_scale(self) -> int:
        """Dilation relating this q-identity to the family's own q.

        Some families are displayed after ``q -> q**(1/2)``; then the family
        modulus is twice the stated one.
        """
        if self.params is None or self.modulus is None:
            return 1
        full = self.params.modulus
        if full % self.modulus:
            return 1
        return full // self.modulus


@dataclass(frozen=True)
class BaileyDoc:
    """Closed form of ``beta_n(a^e, 0, q^e)`` with free index ``var``."""

    name: str
    params: FamilyParams
    var: str
    beta: Expr
    line: int = field(default=0, compare=False)


def children(node):
    if isinstance(node, (Add, Sub, Mul, Div)):
        return (node.left, node.right)
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, Sum):
        return (node.body,)
    return ()


def walk(node):
    yield node
    for c in children(node):
        yield from walk(c)


def uses_a(node) -> bool:
    for n in walk(node):
        if isinstance(n, Monomial) and not n.a_exp.is_zero():
            return True
        if isinstance(n, PochFactor) and n.a_exp:
            return True
    return False


# -- printer ---------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2}


def format_expr(node) -> str:
    if isinstance(node, Literal):
        return str(node.value)
    if isinstance(node, Monomial):
        parts = []
        if not node.sign_exp.is_zero():
            parts.append(f"(-1)^({node.sign_exp})")
        if not node.a_exp.is_zero():
            parts.append("a" if node.a_exp == Poly.const(1) else f"a^({node.a_exp})")
        if not node.q_exp.is_zero() or not parts:
            parts.append(f"q^({node.q_exp})")
        return "*".join(parts)
    if isinstance(node, PochFactor):
        base = "-" if node.sign < 0 else ""
        if node.a_exp:
            base += "a" if node.a_exp == 1 else f"a^{node.a_exp}"
        if not node.q_exp.is_zero() or not node.a_exp:
            base += ("*" if node.a_exp else "") + f"q^({node.q_exp})"
        step = "q" if node.step == 1 else f"q^{node.step}"
        length = "inf" if node.length is None else str(node.length)
        return f"poch({base}; {step}; {length})"
    if isinstance(node, TripleProd):
        return f"triple({node.x}, {node.P})"
    if isinstance(node, Sum):
        bounds = ", ".join(f"{v}>={lo}" for v, lo in node.bounds)
        return f"sum({bounds}) {{ {format_expr(node.body)} }}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand, 3)}"
    prec = _PREC[type(node)]
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
    # left-associative: right operand of equal precedence needs parentheses
    return f"{_wrap(node.left, prec)} {op} {_wrap(node.right, prec + 1)}"


def _wrap(node, min_prec: int) -> str:
    txt = format_expr(node)
    p = _PREC.get(type(node))
    if p is not None and p < min_prec:
        return f"({txt})"
    if isinstance(node, Neg) and min_prec > 1:
        return f"({txt})"
    return txt


def format_doc(doc) -> str:
    if isinstance(doc, BaileyDoc):
        p = doc.params
        return (
            f"bailey {doc.name} family {p.d} {p.e} {p.k} {{\n"
            f"  beta({doc.var}) = {format_expr(doc.beta)};\n}}\n"
        )
    head = f"identity {doc.name}"
    if doc.modulus is not None:
        head += f" mod {doc.modulus}"
    if doc.params is not None:
        p = doc.params
        head += f" family {p.d} {p.e} {p.k} {doc.member}"
    if doc.default_order != 50:
        head += f" order {doc.default_order}"
    return (
        f"{head} {{\n"
        f"  lhs = {format_expr(doc.lhs)};\n"
        f"  rhs = {format_expr(doc.rhs)};\n}}\n"
    )
