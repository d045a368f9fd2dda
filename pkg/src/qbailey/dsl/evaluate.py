"""Evaluate expression trees to truncated series.

A product-shaped expression is flattened into a :class:`Term`: a rational
coefficient, a monomial ``a**A q**Q`` and a multiset of factors.  Finite
Pochhammer symbols become binomials ``1 - c a**m q**e`` that cancel between
numerator and denominator before any series arithmetic happens; this is what
lets quotients such as ``(q;q)_{n+r+1} / (q;q)_{2n+2r+2}`` stay cheap, and what
turns ``1/(q;q)_{n-r}`` into zero for ``r > n``.

A negative Pochhammer length follows the usual convention

    (x; q^s)_{-L} = 1 / prod_{j=1}^{L} (1 - x q^{-js}).

Precision is split across the factors of a term from their q-valuation lower
bounds, so a factor such as ``q**-1`` costs one extra order elsewhere.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from ..errors import BadParameters, InsufficientTruncation, NonIntegerExponent, NotInvertible
from ..series import INF, BiSeries, PochSpec, invert, poch, poch_inverse, triple_product
from .ast import Add, Div, Literal, Monomial, Mul, Neg, PochFactor, Sub, Sum, TripleProd

Laurent = Dict[Tuple[int, int], Fraction]

# longest finite Pochhammer symbol expanded as an explicit polynomial
_MAX_POLY_FACTORS = 64
_ZERO = (Fraction(1), 0, 0)


@dataclass
class Term:
    coef: Fraction = Fraction(1)
    a: Fraction = Fraction(0)
    q: Fraction = Fraction(0)
    binomials: Counter = field(default_factory=Counter)
    # (kind, payload, power); kind in {"poly", "inf", "triple", "node"}
    items: List[tuple] = field(default_factory=list)
    env: Mapping[str, int] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.coef == 0


class _Evaluator:
    def __init__(self, M: int):
        self.M = M

    # -- exact polynomials ----------------------------------------------------
    def laurent(self, node, env) -> Optional[Laurent]:
        """The node as an explicit Laurent polynomial, or None if it is not one."""
        if isinstance(node, Literal):
            return {(0, 0): Fraction(node.value)} if node.value else {}
        if isinstance(node, Monomial):
            sign = node.sign_exp.evaluate_int(env, "sign exponent")
            m = node.a_exp.evaluate_int(env, "a-exponent")
            j = node.q_exp.evaluate_int(env, "q-exponent")
            return {(m, j): Fraction(-1 if sign % 2 else 1)}
        if isinstance(node, Neg):
            inner = self.laurent(node.operand, env)
            return None if inner is None else {k: -v for k, v in inner.items()}
        if isinstance(node, (Add, Sub)):
            left = self.laurent(node.left, env)
            if left is None:
                return None
            right = self.laurent(node.right, env)
            if right is None:
                return None
            out = dict(left)
            s = 1 if isinstance(node, Add) else -1
            for k, v in right.items():
                out[k] = out.get(k, 0) + s * v
            return {k: v for k, v in out.items() if v}
        if isinstance(node, Mul):
            left = self.laurent(node.left, env)
            if left is None:
                return None
            right = self.laurent(node.right, env)
            if right is None:
                return None
            return _poly_mul(left, right)
        if isinstance(node, PochFactor) and node.length is not None:
            L = node.length.evaluate_int(env, "Pochhammer length")
            if L < 0 or L > _MAX_POLY_FACTORS:
                return None
            q0 = node.q_exp.evaluate_int(env, "q-exponent")
            out: Laurent = {(0, 0): Fraction(1)}
            for t in range(L):
                out = _poly_mul(out, {(0, 0): Fraction(1), (node.a_exp, q0 + t * node.step): Fraction(-node.sign)})
            return out
        return None

    # -- flattening -----------------------------------------------------------
    def analyze(self, node, env) -> Term:
        term = Term(env=dict(env))
        self._flatten(node, env, 1, term)
        if term.coef:
            self._cancel(term)
        return term

    def _flatten(self, node, env, power, term: Term) -> None:
        if term.coef == 0:
            return
        if isinstance(node, Mul):
            self._flatten(node.left, env, power, term)
            self._flatten(node.right, env, power, term)
        elif isinstance(node, Div):
            self._flatten(node.left, env, power, term)
            self._flatten(node.right, env, -power, term)
        elif isinstance(node, Neg):
            term.coef = -term.coef
            self._flatten(node.operand, env, power, term)
        elif isinstance(node, Literal):
            if node.value == 0:
                if power < 0:
                    raise NotInvertible("division by zero")
                term.coef = Fraction(0)
            else:
                term.coef *= Fraction(node.value) ** power
        elif isinstance(node, Monomial):
            sign = node.sign_exp.evaluate_int(env, "sign exponent")
            if sign % 2:
                term.coef = -term.coef
            term.a += power * node.a_exp.evaluate(env)
            term.q += power * node.q_exp.evaluate(env)
        elif isinstance(node, PochFactor):
            self._flatten_poch(node, env, power, term)
        elif isinstance(node, TripleProd):
            term.items.append(("triple", (node.x, node.P), power))
        elif isinstance(node, (Add, Sub)):
            poly = self.laurent(node, env)
            if poly is None:
                if power < 0:
                    raise BadParameters("division by a sum is not supported; divide by Pochhammer factors")
                term.items.append(("node", node, power))
            else:
                self._add_poly(poly, power, term)
        elif isinstance(node, Sum):
            if power < 0:
                raise BadParameters("division by a sum is not supported; divide by Pochhammer factors")
            term.items.append(("node", node, power))
        else:
            raise TypeError(f"unknown node {type(node).__name__}")

    def _flatten_poch(self, node: PochFactor, env, power, term: Term) -> None:
        q0 = node.q_exp.evaluate_int(env, "q-exponent")
        if node.length is None:
            spec = PochSpec(node.sign, node.a_exp, q0, node.step, INF)
            term.items.append(("inf", spec, power))
            return
        L = node.length.evaluate_int(env, "Pochhammer length")
        if L >= 0:
            for t in range(L):
                self._add_binomial(node.sign, node.a_exp, q0 + t * node.step, power, term)
        else:
            for t in range(1, -L + 1):
                self._add_binomial(node.sign, node.a_exp, q0 - t * node.step, -power, term)

    def _add_binomial(self, c, am, e, power, term: Term) -> None:
        """Record ``(1 - c a**am q**e) ** power``, normalised so that a
        q-only binomial has ``e >= 0``."""
        c = Fraction(c)
        if am == 0 and e < 0:
            # 1 - c q^e = -c q^e (1 - q^{-e}/c)
            term.coef *= (-c) ** power
            term.q += power * e
            c, e = 1 / c, -e
        if am == 0 and e == 0:
            if c == 1:
                # vanishing factor; numerator and denominator copies are netted later
                term.binomials[_ZERO] += power
            else:
                term.coef *= (1 - c) ** power
            return
        term.binomials[(c, am, e)] += power

    def _add_poly(self, poly: Laurent, power, term: Term) -> None:
        if not poly:
            if power < 0:
                raise NotInvertible("division by an expression that vanishes identically")
            term.coef = Fraction(0)
            return
        m0 = min(m for m, _ in poly)
        j0 = min(j for _, j in poly)
        if len(poly) <= 2:
            # factor out the lowest term; what is left is 1 or a binomial
            (lm, lj) = min(poly, key=lambda k: (k[1], k[0]))
            lc = poly[(lm, lj)]
            term.coef *= lc ** power
            term.a += power * lm
            term.q += power * lj
            for (m, j), c in poly.items():
                if (m, j) != (lm, lj):
                    if m - lm < 0:
                        break
                    self._add_binomial(-c / lc, m - lm, j - lj, power, term)
            else:
                return
            # negative relative a-power: keep as a general polynomial
            term.coef /= lc ** power
            term.a -= power * lm
            term.q -= power * lj
        term.a += power * m0
        term.q += power * j0
        shifted = {(m - m0, j - j0): c for (m, j), c in poly.items()}
        term.items.append(("poly", shifted, power))

    @staticmethod
    def _cancel(term: Term) -> None:
        zeros = term.binomials.pop(_ZERO, 0)
        if zeros < 0:
            raise NotInvertible(
                f"division by a vanishing factor (1 - 1) at {_show_env(term.env)}"
            )
        if zeros > 0:
            term.coef = Fraction(0)
        term.binomials = Counter({k: v for k, v in term.binomials.items() if v})

    # -- lower bounds ---------------------------------------------------------
    def item_bounds(self, term: Term, threshold: int):
        """(q-lower-bound, a-lower-bound) for each item, binomials first."""
        qb = sum(min(0, e) * p for (c, am, e), p in term.binomials.items() if p > 0)
        out = [(qb, 0)]
        for kind, payload, power in term.items:
            if kind == "node":
                out.append((self.lower_bound(payload, term.env, threshold), 0))
            elif kind == "inf" and payload.a_exp:
                neg = sum(e for e in payload.factor_exponents(0) if e < 0)
                out.append((neg if power > 0 else 0, 0))
            else:
                out.append((0, 0))
        return out

    def term_lb(self, term: Term, threshold: int):
        if term.is_zero:
            return INF
        bounds = self.item_bounds(term, threshold)
        if any(b == INF for b, _ in bounds):
            return INF
        return _as_int(term.q, "q-exponent", term.env) + sum(b for b, _ in bounds)

    def lower_bound(self, node, env, threshold: int):
        """A lower bound for the q-valuation of ``node``; INF if it vanishes."""
        if isinstance(node, Sum):
            _, lb = self.enumerate(node, env, threshold)
            return lb
        if isinstance(node, (Add, Sub)):
            poly = self.laurent(node, env)
            if poly is not None:
                return min((j for _, j in poly), default=INF)
            return min(self.lower_bound(node.left, env, threshold),
                       self.lower_bound(node.right, env, threshold))
        return self.term_lb(self.analyze(node, env), threshold)

    # -- summation ------------------------------------------------------------
    def enumerate(self, node: Sum, env, threshold: int):
        """Terms of a sum that can reach q-order ``threshold``, and the
        smallest lower bound seen.

        Each variable is increased until its bound exceeds the threshold
        while no longer decreasing; this presumes the exponent is convex in
        every summation variable, which holds for the positive definite forms
        of convergent sums.
        """
        bounds = node.bounds
        found: List[Term] = []

        def rec(k, env):
            if k == len(bounds):
                term = self.analyze(node.body, env)
                lb = self.term_lb(term, threshold)
                if lb != INF and lb <= threshold:
                    found.append(term)
                return lb
            var, lo = bounds[k]
            best = INF
            prev = None
            low = 0
            v = lo
            while True:
                lb = rec(k + 1, {**env, var: v})
                best = min(best, lb)
                if lb != INF:
                    low = min(low, lb)
                    if lb > threshold and prev is not None and lb >= prev:
                        break
                    prev = lb
                if v - lo > max(threshold, 0) + 2 - low:
                    if lb != INF and lb <= threshold:
                        raise InsufficientTruncation(
                            f"sum over {var} still has terms of q-order <= {threshold} at {var}={v}"
                        )
                    break
                v += 1
            return best

        best = rec(0, dict(env))
        return found, best

    # -- evaluation -----------------------------------------------------------
    def eval(self, node, N: int, M: int, env) -> BiSeries:
        if isinstance(node, Sum):
            terms, _ = self.enumerate(node, env, N)
            total = BiSeries.zero(N, M)
            for term in terms:
                total = total + self.eval_term(term, N, M)
            return total
        if isinstance(node, (Add, Sub)):
            poly = self.laurent(node, env)
            if poly is None:
                left = self.eval(node.left, N, M, env)
                right = self.eval(node.right, N, M, env)
                return left + right if isinstance(node, Add) else left - right
        return self.eval_term(self.analyze(node, env), N, M)

    def eval_term(self, term: Term, N: int, M: int) -> BiSeries:
        if term.is_zero:
            return BiSeries.zero(N, M)
        Q = _as_int(term.q, "q-exponent", term.env)
        A = _as_int(term.a, "a-exponent", term.env)
        NQ, MA = N - Q, M - A
        bounds = self.item_bounds(term, NQ)
        if any(b == INF for b, _ in bounds) or sum(b for b, _ in bounds) > NQ:
            return BiSeries.zero(N, M)
        qneg = sum(min(b, 0) for b, _ in bounds)
        aneg = sum(min(b, 0) for _, b in bounds)

        def prec(idx):
            qb, ab = bounds[idx]
            return NQ - (qneg - min(qb, 0)), MA - (aneg - min(ab, 0))

        Nb, Mb = prec(0)
        if Mb < 0:
            Mb = 0
        acc = BiSeries.one(Nb, Mb)
        ordered = sorted(term.binomials.items(), key=lambda kv: (kv[1] < 0, kv[0][2], kv[0][1]))
        for (c, am, e), p in ordered:
            if e > Nb and e > 0:
                continue
            c = c.numerator if c.denominator == 1 else c
            for _ in range(abs(p)):
                acc = acc.mul_binomial(c, am, e) if p > 0 else acc.div_binomial(c, am, e)
        for idx, (kind, payload, power) in enumerate(term.items, start=1):
            Ni, Mi = prec(idx)
            Mi = max(Mi, 0)
            if kind == "poly":
                s = BiSeries(payload, Ni, Mi)
            elif kind == "inf":
                s = poch(payload, Ni, Mi) if power > 0 else poch_inverse(payload, Ni, Mi)
                power = 1
            elif kind == "triple":
                s = triple_product(payload[0], payload[1], Ni)
            else:
                s = self.eval(payload, Ni, Mi, term.env)
            if power < 0:
                s = invert(s)
            for _ in range(abs(power)):
                acc = acc * s
        out = acc.truncate(NQ, max(MA, 0)).shift(A, Q, _norm(term.coef))
        if out.N < N:
            raise InsufficientTruncation(
                f"term at {_show_env(term.env)} reached only q-order {out.N} of {N}"
            )
        return out.truncate(N, M)


def _poly_mul(x: Laurent, y: Laurent) -> Laurent:
    out: Laurent = {}
    for (m1, j1), c1 in x.items():
        for (m2, j2), c2 in y.items():
            k = (m1 + m2, j1 + j2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _norm(c: Fraction):
    return c.numerator if c.denominator == 1 else c


def _as_int(v: Fraction, what, env) -> int:
    if v.denominator != 1:
        raise NonIntegerExponent(f"{what} of a term is {v} at {_show_env(env)}")
    return v.numerator


def _show_env(env) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(env.items())) or "top level"


def eval_expr(ast, N: int, M: int = 0, a_free: Optional[bool] = None, env=None) -> BiSeries:
    """Exact value of ``ast`` to q-order ``N`` and a-order ``M``.

    ``a_free`` only documents intent; an expression without ``a`` is simply a
    series at a-degree 0.  ``env`` binds free variables (used for the closed
    forms of Bailey pairs, which depend on ``n``).
    """
    if N < 0:
        raise BadParameters("truncation order must be nonnegative")
    return _Evaluator(M).eval(ast, N, M, dict(env or {}))
