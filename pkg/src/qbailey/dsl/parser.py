"""Recursive-descent parser for the identity corpus language.

File grammar::

    file     ::= item*
    item     ::= 'identity' NAME ['mod' INT] ['family' INT INT INT INT] ['order' INT]
                 '{' 'lhs' '=' EXPR ';' 'rhs' '=' EXPR ';' '}'
               | 'bailey' NAME 'family' INT INT INT '{' 'beta' '(' VAR ')' '=' EXPR ';' '}'
    EXPR     ::= term (('+' | '-') term)*
    term     ::= factor (('*' | '/') factor)*
    factor   ::= INT | 'a' ['^' EXP] | 'q' ['^' EXP] | '(' '-' '1' ')' '^' EXP
               | 'poch' '(' MONO ';' STEP ';' (POLY | 'inf') ')'
               | 'triple' '(' INT ',' INT ')'
               | 'sum' '(' VAR '>=' INT (',' VAR '>=' INT)* ')' '{' EXPR '}'
               | '(' EXPR ')' | '-' factor
    EXP      ::= INT | VAR | '(' POLY ')'
    MONO     ::= ['+' | '-'] ['a' ['^' INT]] ['*'] ['q' ['^' EXP]]
    STEP     ::= 'q' ['^' INT]

``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from ..bailey import FamilyParams
from ..errors import BadParameters, DSLSyntaxError, DuplicateName, UnboundVariable
from .ast import (
    Add,
    BaileyDoc,
    Div,
    IdentityDoc,
    Literal,
    Monomial,
    Mul,
    Neg,
    PochFactor,
    Sub,
    Sum,
    TripleProd,
)
from .poly import Poly

KEYWORDS = {"a", "q", "poch", "triple", "sum", "inf"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>>=|[-+*/^(){};,=])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            tokens.append(Token(kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.scope: List[str] = []

    # -- token helpers -------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "name")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"found {self.tok.text or 'end of input'!r}", repr(text))
        t = self.tok
        self.i += 1
        return t

    def error(self, msg, expected=None):
        raise DSLSyntaxError(msg, self.tok.line, self.tok.col, expected)

    def expect_int(self) -> int:
        neg = self.accept("-")
        if self.tok.kind != "int":
            self.error(f"found {self.tok.text or 'end of input'!r}", "an integer")
        v = int(self.tok.text)
        self.i += 1
        return -v if neg else v

    def expect_name(self) -> str:
        if self.tok.kind != "name":
            self.error(f"found {self.tok.text or 'end of input'!r}", "a name")
        v = self.tok.text
        self.i += 1
        return v

    # -- documents -----------------------------------------------------------
    def parse_file(self):
        docs = []
        seen = {}
        while self.tok.kind != "eof":
            line = self.tok.line
            if self.at("identity"):
                doc = self.parse_identity()
            elif self.at("bailey"):
                doc = self.parse_bailey()
            else:
                self.error(f"found {self.tok.text!r}", "'identity' or 'bailey'")
            if doc.name in seen:
                raise DuplicateName(
                    f"line {line}: name {doc.name!r} already defined on line {seen[doc.name]}"
                )
            seen[doc.name] = line
            docs.append(doc)
        return docs

    def parse_identity(self) -> IdentityDoc:
        line = self.expect("identity").line
        name = self.expect_name()
        modulus = params = member = None
        order = 50
        while not self.at("{"):
            if self.accept("mod"):
                modulus = self.expect_int()
            elif self.accept("family"):
                d, e, k, member = (self.expect_int() for _ in range(4))
                params = self._family(d, e, k)
                if not 1 <= member <= params.K:
                    self.error(f"member index {member} outside 1..{params.K}")
            elif self.accept("order"):
                order = self.expect_int()
            else:
                self.error(f"found {self.tok.text!r}", "'mod', 'family', 'order' or '{'")
        self.expect("{")
        self.expect("lhs")
        self.expect("=")
        lhs = self.parse_expr()
        self.expect(";")
        self.expect("rhs")
        self.expect("=")
        rhs = self.parse_expr()
        self.expect(";")
        self.expect("}")
        return IdentityDoc(name, lhs, rhs, modulus, params, member, order, line)

    def parse_bailey(self) -> BaileyDoc:
        line = self.expect("bailey").line
        name = self.expect_name()
        self.expect("family")
        params = self._family(*(self.expect_int() for _ in range(3)))
        self.expect("{")
        self.expect("beta")
        self.expect("(")
        var = self.expect_name()
        self.expect(")")
        self.expect("=")
        self.scope.append(var)
        beta = self.parse_expr()
        self.scope.pop()
        self.expect(";")
        self.expect("}")
        return BaileyDoc(name, params, var, beta, line)

    def _family(self, d, e, k) -> FamilyParams:
        try:
            return FamilyParams(d, e, k)
        except BadParameters as exc:
            self.error(str(exc))

    # -- expressions ---------------------------------------------------------
    def parse_expr(self):
        node = self.parse_term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            rhs = self.parse_term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            rhs = self.parse_factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def parse_factor(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Literal(int(t.text))
        if self.accept("-"):
            return Neg(self.parse_factor())
        if self.accept("a"):
            exp = self.parse_exponent() if self.accept("^") else Poly.const(1)
            return Monomial(a_exp=exp)
        if self.accept("q"):
            exp = self.parse_exponent() if self.accept("^") else Poly.const(1)
            return Monomial(q_exp=exp)
        if self.at("poch"):
            return self.parse_poch()
        if self.accept("triple"):
            self.expect("(")
            x = self.expect_int()
            self.expect(",")
            P = self.expect_int()
            self.expect(")")
            if not 0 < x < P:
                self.error(f"triple({x}, {P}) needs 0 < x < P")
            return TripleProd(x, P)
        if self.at("sum"):
            return self.parse_sum()
        if self.at("("):
            # (-1)^EXP is a sign monomial
            if self.peek(1).text == "-" and self.peek(2).text == "1" and self.peek(3).text == ")" \
                    and self.peek(4).text == "^":
                self.i += 5
                return Monomial(sign_exp=self.parse_exponent())
            self.expect("(")
            node = self.parse_expr()
            self.expect(")")
            if self.at("^"):
                self.error("'^' applies only to q, a or (-1)")
            return node
        self.error(f"found {t.text or 'end of input'!r}", "a factor")

    def parse_exponent(self) -> Poly:
        if self.tok.kind == "int":
            v = int(self.tok.text)
            self.i += 1
            return Poly.const(v)
        if self.tok.kind == "name" and self.tok.text not in KEYWORDS:
            return self._variable(self.expect_name())
        self.expect("(")
        p = self.parse_poly()
        self.expect(")")
        return p

    def parse_sum(self):
        self.expect("sum")
        self.expect("(")
        bounds = []
        while True:
            var = self.expect_name()
            if var in KEYWORDS:
                self.error(f"{var!r} cannot be a summation variable")
            if var in self.scope or any(v == var for v, _ in bounds):
                self.error(f"summation variable {var!r} shadows an outer binding")
            self.expect(">=")
            bounds.append((var, self.expect_int()))
            if not self.accept(","):
                break
        self.expect(")")
        self.expect("{")
        self.scope.extend(v for v, _ in bounds)
        body = self.parse_expr()
        del self.scope[len(self.scope) - len(bounds):]
        self.expect("}")
        return Sum(tuple(bounds), body)

    def parse_poch(self):
        self.expect("poch")
        self.expect("(")
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        a_exp = 0
        q_exp = Poly.const(0)
        seen = False
        if self.accept("a"):
            seen = True
            a_exp = self.expect_int() if self.accept("^") else 1
            if a_exp < 0:
                self.error("a-exponent of a Pochhammer base must be nonnegative")
            self.accept("*")
        if self.accept("q"):
            seen = True
            q_exp = self.parse_exponent() if self.accept("^") else Poly.const(1)
        if not seen:
            self.error(f"found {self.tok.text!r}", "a Pochhammer base such as q, -a*q^2")
        if q_exp.degree > 1:
            self.error("Pochhammer base exponent must be linear")
        self.expect(";")
        self.expect("q")
        step = self.expect_int() if self.accept("^") else 1
        if step < 1:
            self.error("Pochhammer step must be a positive power of q")
        self.expect(";")
        if self.accept("inf"):
            length = None
        else:
            length = self.parse_poly()
            if length.degree > 1 or not length.has_integer_coefficients():
                self.error("Pochhammer length must be an integer linear form")
        self.expect(")")
        return PochFactor(sign, a_exp, q_exp, step, length)

    # -- polynomials ---------------------------------------------------------
    def _variable(self, name: str) -> Poly:
        if name not in self.scope:
            raise UnboundVariable(
                f"line {self.tok.line}: variable {name!r} is not bound by an enclosing sum"
            )
        return Poly.var(name)

    def parse_poly(self) -> Poly:
        p = self.parse_pterm()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            rhs = self.parse_pterm()
            p = p + rhs if op == "+" else p - rhs
        if p.degree > 2:
            self.error("exponent polynomial has degree above 2")
        return p

    def parse_pterm(self) -> Poly:
        if self.accept("-"):
            return -self.parse_pterm()
        p = self.parse_pfactor()
        while self.at("*") or self.at("/"):
            if self.accept("*"):
                p = p * self.parse_pfactor()
            else:
                self.i += 1
                den = self.parse_pfactor()
                if not den.is_constant() or den.constant() == 0:
                    self.error("division in an exponent only by a nonzero constant")
                p = p.scale(Fraction(1) / den.constant())
        return p

    def parse_pfactor(self) -> Poly:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            base = Poly.const(int(t.text))
        elif t.kind == "name" and t.text not in KEYWORDS:
            self.i += 1
            base = self._variable(t.text)
        elif self.accept("("):
            base = self.parse_poly()
            self.expect(")")
        else:
            self.error(f"found {t.text or 'end of input'!r}", "an integer, variable or '('")
        if self.accept("^"):
            k = self.expect_int()
            if k < 0:
                self.error("negative powers are not allowed in exponents")
            out = Poly.const(1)
            for _ in range(k):
                out = out * base
            base = out
        return base


def parse(text: str):
    """Parse a corpus file into a list of IdentityDoc / BaileyDoc."""
    return Parser(text).parse_file()


def parse_expr(text: str, variables=()):
    """Parse a bare expression; ``variables`` are treated as bound."""
    p = Parser(text)
    p.scope.extend(variables)
    node = p.parse_expr()
    if p.tok.kind != "eof":
        p.error(f"found {p.tok.text!r}", "end of expression")
    return node
