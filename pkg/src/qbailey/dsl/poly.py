"""Polynomials with rational coefficients over summation variables.

Used for exponents (quadratic forms) and Pochhammer lengths (integer linear
forms).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from ..errors import NonIntegerExponent

Mono = Tuple[str, ...]


def _canon(d: Dict[Mono, Fraction]) -> Tuple[Tuple[Mono, Fraction], ...]:
    return tuple(sorted(((m, c) for m, c in d.items() if c), key=lambda t: (-len(t[0]), t[0])))


@dataclass(frozen=True)
class Poly:
    terms: Tuple[Tuple[Mono, Fraction], ...] = ()

    @classmethod
    def const(cls, c) -> "Poly":
        return cls(_canon({(): Fraction(c)}))

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls(((( name,), Fraction(1)),))

    def _dict(self) -> Dict[Mono, Fraction]:
        return dict(self.terms)

    def __add__(self, other: "Poly") -> "Poly":
        d = self._dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Poly(_canon(d))

    def __neg__(self) -> "Poly":
        return Poly(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        d: Dict[Mono, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(sorted(m1 + m2))
                d[m] = d.get(m, 0) + c1 * c2
        return Poly(_canon(d))

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(_canon({m: v * c for m, v in self.terms}))

    @property
    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    @property
    def variables(self) -> set:
        return {v for m, _ in self.terms for v in m}

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.degree == 0

    def constant(self) -> Fraction:
        return dict(self.terms).get((), Fraction(0))

    def has_integer_coefficients(self) -> bool:
        return all(c.denominator == 1 for _, c in self.terms)

    def evaluate(self, env: Mapping[str, int]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms:
            v = c
            for name in m:
                v *= env[name]
            total += v
        return total

    def evaluate_int(self, env: Mapping[str, int], what: str = "exponent") -> int:
        v = self.evaluate(env)
        if v.denominator != 1:
            shown = ", ".join(f"{k}={env[k]}" for k in sorted(self.variables))
            raise NonIntegerExponent(
                f"{what} {self} is {v} at {shown or 'constant'}; not an integer"
            )
        return v.numerator

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for idx, (m, c) in enumerate(self.terms):
            neg = c < 0
            a = -c if neg else c
            body = "*".join(_fmt_powers(m))
            if not body:
                txt = _fmt_frac(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{_fmt_frac(a)}*{body}"
            if idx == 0:
                out = ("-" if neg else "") + txt
            else:
                out += (" - " if neg else " + ") + txt
        return out


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_powers(m: Mono):
    out = []
    for name in sorted(set(m)):
        k = m.count(name)
        out.append(name if k == 1 else f"{name}^{k}")
    return out
