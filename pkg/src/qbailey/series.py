"""Truncated bivariate formal series in ``a`` and ``q`` with exact coefficients.

A :class:`BiSeries` stores finitely many terms ``c * a**m * q**j`` together with
two precisions:

* ``N`` -- every coefficient with q-exponent ``j <= N`` is exact, nothing above
  ``N`` is stored;
* ``M`` -- every coefficient with a-exponent ``m <= M`` is exact.

``a_overflow`` records whether a term with ``m > M`` and ``j <= N`` may have been
thrown away.  While the flag is clear the series is complete in ``a`` up to
q-order ``N``, which is what makes setting ``a = 1`` legitimate.

Negative exponents are allowed in both variables so that Laurent intermediates
such as ``q**-2 * (...)`` can be formed; results are checked by the caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

from .errors import (
    BadParameters,
    Divergent,
    InsufficientTruncation,
    NonIntegerExponent,
    NonTerminating,
    NotInvertible,
    OverflowUnsound,
)

Coefficient = Union[int, Fraction]
INF = math.inf

__all__ = [
    "BiSeries",
    "PochSpec",
    "INF",
    "arith",
    "invert",
    "poch",
    "subst_a_shift",
    "eval_a",
    "triple_product",
    "theta_sum",
    "as_integer",
]


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_integer(value, what="exponent"):
    """Return ``value`` as an int, raising NonIntegerExponent if it is fractional."""
    if isinstance(value, int):
        return value
    value = Fraction(value)
    if value.denominator != 1:
        raise NonIntegerExponent(f"{what} evaluates to {value}, not an integer")
    return value.numerator


class BiSeries:
    """Immutable truncated series ``sum c[m, j] a**m q**j``."""

    __slots__ = ("_rows", "N", "M", "a_overflow")

    def __init__(self, terms=None, N: int = 0, M: int = 0, a_overflow: bool = False):
        rows: Dict[int, Dict[int, Coefficient]] = {}
        if terms:
            for (m, j), c in dict(terms).items():
                if isinstance(c, float):
                    raise TypeError("floating point coefficients are not supported")
                if not c or j > N:
                    continue
                if m > M:
                    a_overflow = True
                    continue
                rows.setdefault(m, {})[j] = c if isinstance(c, int) else _norm(Fraction(c))
        self._rows = rows
        self.N = N
        self.M = M
        self.a_overflow = a_overflow

    @classmethod
    def _make(cls, rows, N, M, flag):
        out = cls.__new__(cls)
        clean = {}
        for m, row in rows.items():
            if m > M:
                if any(c for j, c in row.items() if j <= N):
                    flag = True
                continue
            r = {j: c for j, c in row.items() if c and j <= N}
            if r:
                clean[m] = r
        out._rows = clean
        out.N = N
        out.M = M
        out.a_overflow = flag
        return out

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, N: int, M: int = 0) -> "BiSeries":
        return cls._make({}, N, M, False)

    @classmethod
    def one(cls, N: int, M: int = 0) -> "BiSeries":
        return cls.monomial(1, 0, 0, N, M)

    @classmethod
    def monomial(cls, c: Coefficient, m: int, j: int, N: int, M: int = 0) -> "BiSeries":
        return cls._make({m: {j: _norm(c)}}, N, M, False)

    @classmethod
    def from_q_coeffs(cls, coeffs: Iterable[Coefficient], N: int, start: int = 0) -> "BiSeries":
        """Series in q alone from a list of coefficients starting at ``q**start``."""
        row = {start + i: c for i, c in enumerate(coeffs)}
        return cls._make({0: row}, N, 0, False)

    # -- inspection ---------------------------------------------------------
    @property
    def trunc_order_q(self) -> int:
        return self.N

    @property
    def trunc_order_a(self) -> int:
        return self.M

    @property
    def terms(self) -> Dict[Tuple[int, int], Coefficient]:
        return {(m, j): c for m, row in self._rows.items() for j, c in row.items()}

    def items(self) -> Iterator[Tuple[Tuple[int, int], Coefficient]]:
        """Terms in ascending q order, a-degree-major within each q-degree."""
        for (m, j), c in sorted(self.terms.items(), key=lambda t: (t[0][1], t[0][0])):
            yield (m, j), c

    def __getitem__(self, key) -> Coefficient:
        m, j = key
        return self._rows.get(m, {}).get(j, 0)

    def coeff(self, j: int, m: int = 0) -> Coefficient:
        return self[m, j]

    def is_zero(self) -> bool:
        return not self._rows

    def __bool__(self) -> bool:
        return bool(self._rows)

    def __len__(self) -> int:
        return sum(len(r) for r in self._rows.values())

    @property
    def qval(self):
        """Lowest q-exponent present; ``N + 1`` for the zero series."""
        if not self._rows:
            return self.N + 1
        return min(min(row) for row in self._rows.values())

    @property
    def aval(self):
        if not self._rows:
            return 0
        return min(self._rows)

    @property
    def min_q(self) -> int:
        return self.qval if self._rows else 0

    @property
    def a_degree(self) -> int:
        return max(self._rows) if self._rows else 0

    def is_q_only(self) -> bool:
        return set(self._rows) <= {0}

    def is_integral(self) -> bool:
        return all(type(c) is int for row in self._rows.values() for c in row.values())

    def q_coeffs(self, m: int = 0, start: int = 0) -> list:
        """Dense list of the coefficients of ``a**m`` from ``q**start`` to ``q**N``."""
        row = self._rows.get(m, {})
        return [row.get(j, 0) for j in range(start, self.N + 1)]

    # -- comparison -----------------------------------------------------------
    def first_mismatch(self, other: "BiSeries", N: Optional[int] = None, M: Optional[int] = None):
        """First differing term, as ``(m, j, self_coeff, other_coeff)``, or None.

        Terms are compared on the common bounds (the smaller N and M, further
        capped by the arguments) in ascending q order, a-degree-major.
        """
        N = min(self.N, other.N) if N is None else min(N, self.N, other.N)
        M = min(self.M, other.M) if M is None else min(M, self.M, other.M)
        keys = set()
        for s in (self, other):
            for m, row in s._rows.items():
                if m <= M:
                    keys.update((j, m) for j in row if j <= N)
        for j, m in sorted(keys):
            x, y = self[m, j], other[m, j]
            if x != y:
                return m, j, x, y
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = BiSeries.monomial(other, 0, 0, self.N, self.M)
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.first_mismatch(other) is None

    __hash__ = None

    # -- ring operations ------------------------------------------------------
    def _coerce(self, other) -> "BiSeries":
        if isinstance(other, BiSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return BiSeries.monomial(other, 0, 0, self.N, self.M)
        raise TypeError(f"cannot combine BiSeries with {type(other).__name__}")

    def _add_bounds(self, other):
        N = min(self.N, other.N)
        M = min(_eff_M(self), _eff_M(other), max(self.M, other.M))
        return N, M

    def __add__(self, other):
        other = self._coerce(other)
        N, M = self._add_bounds(other)
        rows = {m: dict(r) for m, r in self._rows.items()}
        for m, row in other._rows.items():
            tgt = rows.setdefault(m, {})
            for j, c in row.items():
                tgt[j] = tgt.get(j, 0) + c
        return BiSeries._make(rows, N, M, self.a_overflow or other.a_overflow)

    __radd__ = __add__

    def __neg__(self):
        rows = {m: {j: -c for j, c in r.items()} for m, r in self._rows.items()}
        return BiSeries._make(rows, self.N, self.M, self.a_overflow)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: Coefficient) -> "BiSeries":
        if isinstance(c, float):
            raise TypeError("floating point scalars are not supported")
        rows = {m: {j: _norm(v * c) for j, v in r.items()} for m, r in self._rows.items()}
        return BiSeries._make(rows, self.N, self.M, self.a_overflow)

    def shift(self, m: int = 0, j: int = 0, c: Coefficient = 1) -> "BiSeries":
        """Multiply by the monomial ``c * a**m * q**j``."""
        if c == 0:
            return BiSeries.zero(self.N + j, self.M + m)
        rows = {
            mm + m: {jj + j: (_norm(v * c) if c != 1 else v) for jj, v in r.items()}
            for mm, r in self._rows.items()
        }
        return BiSeries._make(rows, self.N + j, self.M + m, self.a_overflow)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, BiSeries):
            return NotImplemented
        s, t = self, other
        N = min(s.N + t.qval, t.N + s.qval, max(s.N, t.N))
        M = min(_eff_M(s) + t.aval, _eff_M(t) + s.aval, max(s.M, t.M))
        flag = s.a_overflow or t.a_overflow
        rows: Dict[int, Dict[int, Coefficient]] = {}
        t_rows = [(m2, sorted(r.items())) for m2, r in t._rows.items()]
        for m1, row1 in s._rows.items():
            for m2, row2 in t_rows:
                m = m1 + m2
                if m > M:
                    if min(row1) + row2[0][0] <= N:
                        flag = True
                    continue
                acc = rows.setdefault(m, {})
                for j1, c1 in row1.items():
                    lim = N - j1
                    for j2, c2 in row2:
                        if j2 > lim:
                            break
                        j = j1 + j2
                        acc[j] = acc.get(j, 0) + c1 * c2
        return BiSeries._make(rows, N, M, flag)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = BiSeries.one(self.N, self.M)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, N: Optional[int] = None, M: Optional[int] = None) -> "BiSeries":
        N = self.N if N is None else min(N, self.N)
        M = self.M if M is None else min(M, self.M)
        return BiSeries._make({m: dict(r) for m, r in self._rows.items()}, N, M, self.a_overflow)

    # -- binomial factors -----------------------------------------------------
    def mul_binomial(self, c: Coefficient, am: int, e: int) -> "BiSeries":
        """Multiply by ``1 - c * a**am * q**e``."""
        N = self.N + min(0, e)
        M = self.M + min(0, am)
        rows = {m: dict(r) for m, r in self._rows.items()}
        for m, row in self._rows.items():
            tgt = rows.setdefault(m + am, {})
            for j, v in row.items():
                jj = j + e
                if jj <= N:
                    tgt[jj] = tgt.get(jj, 0) - c * v
        return BiSeries._make(rows, N, M, self.a_overflow)

    def div_binomial(self, c: Coefficient, am: int, e: int) -> "BiSeries":
        """Divide by ``1 - c * a**am * q**e`` (geometric expansion)."""
        if c == 0:
            return self
        if am < 0:
            raise NotInvertible("division by a binomial with a negative power of a")
        if am == 0:
            if e == 0:
                if c == 1:
                    raise NotInvertible("division by the zero factor (1 - 1)")
                return self.scale(Fraction(1) / (1 - c))
            if e < 0:
                inv = Fraction(1) / c
                return self.div_binomial(_norm(inv), 0, -e).shift(0, -e, _norm(-inv))
            N = self.N
            rows = {}
            for m, row in self._rows.items():
                lo = min(row)
                out: Dict[int, Coefficient] = {}
                for j in range(lo, N + 1):
                    v = row.get(j, 0)
                    prev = out.get(j - e)
                    if prev:
                        v = v + c * prev
                    if v:
                        out[j] = v
                rows[m] = out
            return BiSeries._make(rows, N, self.M, self.a_overflow)
        if e < 0:
            raise InsufficientTruncation(
                "division by 1 - c a^m q^e with e < 0 has unbounded q-valuation"
            )
        N, M = self.N, self.M
        flag = self.a_overflow
        if not self._rows:
            return BiSeries._make({}, N, M, flag)
        lo = min(self._rows)
        rows: Dict[int, Dict[int, Coefficient]] = {}
        for m in range(lo, M + 1):
            out = dict(self._rows.get(m, {}))
            prev = rows.get(m - am)
            if prev:
                for j, v in prev.items():
                    jj = j + e
                    if jj <= N:
                        out[jj] = out.get(jj, 0) + c * v
            out = {j: v for j, v in out.items() if v}
            if out:
                rows[m] = out
        for m in range(M + 1, M + am + 1):
            prev = rows.get(m - am)
            if prev and min(prev) + e <= N:
                flag = True
        return BiSeries._make(rows, N, M, flag)

    def exact_div_binomial(self, c: Coefficient, am: int, e: int = 0) -> "BiSeries":
        """Exact division by ``1 - c * a**am * q**e`` with ``am >= 1``, ``e >= 0``.

        The series must be complete in ``a``; raises NotInvertible when the
        division leaves a remainder.
        """
        if am < 1 or e < 0:
            raise BadParameters("exact division needs am >= 1 and e >= 0")
        if self.a_overflow:
            raise OverflowUnsound("exact division of a series that is incomplete in a")
        if not self._rows:
            return self
        lo, top = min(self._rows), max(self._rows)
        N = self.N
        rows: Dict[int, Dict[int, Coefficient]] = {}
        for m in range(lo, top + 1):
            out = dict(self._rows.get(m, {}))
            prev = rows.get(m - am)
            if prev:
                for j, v in prev.items():
                    jj = j + e
                    if jj <= N:
                        out[jj] = out.get(jj, 0) + c * v
            out = {j: v for j, v in out.items() if v}
            if out:
                rows[m] = out
        for m in range(top - am + 1, top + 1):
            if rows.get(m):
                raise NotInvertible(f"division by 1 - {c} a^{am} q^{e} is not exact")
        return BiSeries._make(rows, N, self.M, False)

    # -- substitutions --------------------------------------------------------
    def subst_a_shift(self, d: int) -> "BiSeries":
        """Substitute ``a -> a * q**d``."""
        N = self.N + d * min(0, self.aval)
        rows = {m: {j + d * m: v for j, v in r.items()} for m, r in self._rows.items()}
        return BiSeries._make(rows, N, self.M, self.a_overflow)

    def subst_a_power(self, e: int) -> "BiSeries":
        """Substitute ``a -> a**e``."""
        rows = {m * e: dict(r) for m, r in self._rows.items()}
        return BiSeries._make(rows, self.N, self.M * e, self.a_overflow)

    def dilate_q(self, k: int) -> "BiSeries":
        """Substitute ``q -> q**k``."""
        if k < 1:
            raise BadParameters("dilation factor must be positive")
        rows = {m: {j * k: v for j, v in r.items()} for m, r in self._rows.items()}
        return BiSeries._make(rows, self.N * k, self.M, self.a_overflow)

    def eval_a(self, v: int) -> "BiSeries":
        if v == 0:
            if any(m < 0 for m in self._rows):
                raise BadParameters("cannot set a = 0 in a series with negative powers of a")
            return BiSeries._make({0: dict(self._rows.get(0, {}))}, self.N, 0, False)
        if v == 1:
            if self.a_overflow:
                raise OverflowUnsound(
                    "a-expansion was truncated below q-order N; a = 1 would be incomplete"
                )
            acc: Dict[int, Coefficient] = {}
            for row in self._rows.values():
                for j, c in row.items():
                    acc[j] = acc.get(j, 0) + c
            return BiSeries._make({0: acc}, self.N, 0, False)
        raise BadParameters("a can only be specialised to 0 or 1")

    # -- inverse --------------------------------------------------------------
    def invert(self) -> "BiSeries":
        return invert(self)

    # -- display --------------------------------------------------------------
    def __repr__(self) -> str:
        return f"BiSeries({self.format()} + O(q^{self.N + 1}), M={self.M})"

    def format(self, var_a="a", var_q="q") -> str:
        parts = []
        for (m, j), c in self.items():
            mono = []
            if m:
                mono.append(var_a if m == 1 else f"{var_a}^{m}")
            if j:
                mono.append(var_q if j == 1 else f"{var_q}^{j}")
            body = "*".join(mono)
            if not body:
                txt = str(abs(c))
            elif abs(c) == 1:
                txt = body
            else:
                txt = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, txt))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, txt in parts[1:]:
            out += f" {sign} {txt}"
        return out


def _eff_M(s: BiSeries):
    # a series that never discarded a-terms is exact in a to every order
    return s.M if s.a_overflow else INF


def arith(op: str, s: BiSeries, t=None):
    """Dispatch ``add``/``sub``/``mul``/``negate``/``scale-by-monomial``.

    For ``scale-by-monomial`` pass ``t`` as a tuple ``(c, m, j)``.
    """
    if op == "add":
        return s + t
    if op == "sub":
        return s - t
    if op == "mul":
        return s * t
    if op == "negate":
        return -s
    if op == "scale-by-monomial":
        c, m, j = t
        return s.shift(m, j, c)
    raise ValueError(f"unknown operation {op!r}")


def invert(s: BiSeries) -> BiSeries:
    """Multiplicative inverse of a series whose lowest q-term sits at a-degree 0.

    The series is written ``c0 q**v (1 + u)`` with ``u`` having only terms of
    nonnegative a- and q-degree, and ``1/(1 + u)`` is built by the usual
    recurrence in order of total degree.
    """
    if not s._rows or 0 not in s._rows:
        raise NotInvertible("no a-degree-0 part; series is not invertible")
    if min(s._rows) < 0:
        raise NotInvertible("series has negative powers of a")
    row0 = s._rows[0]
    v = min(row0)
    if s.qval < v:
        raise NotInvertible(
            "lowest q-term is not at a-degree 0; the inverse is not a series in a"
        )
    c0 = row0[v]
    N = s.N - 2 * v
    M = s.M
    inv_c0 = c0 if c0 in (1, -1) else Fraction(1) / c0
    # u = s / (c0 q^v) - 1, known to q-order s.N - v
    u = [
        (m, j - v, _norm(c * inv_c0))
        for m, row in s._rows.items()
        for j, c in row.items()
        if (m, j) != (0, v)
    ]
    Nw = s.N - v
    w: Dict[Tuple[int, int], Coefficient] = {(0, 0): 1}
    order = sorted(
        ((m, j) for m in range(0, M + 1) for j in range(0, Nw + 1) if (m, j) != (0, 0)),
        key=lambda t: (t[0] + t[1], t[0]),
    )
    for m, j in order:
        acc = 0
        for um, uj, uc in u:
            if um <= m and uj <= j:
                prev = w.get((m - um, j - uj))
                if prev:
                    acc -= uc * prev
        if acc:
            w[(m, j)] = _norm(acc)
    flag = s.a_overflow
    if not flag:
        for um, uj, uc in u:
            if um < 1:
                continue
            for (m, j), c in w.items():
                if m <= M < m + um and j + uj <= Nw:
                    flag = True
                    break
            if flag:
                break
    rows: Dict[int, Dict[int, Coefficient]] = {}
    for (m, j), c in w.items():
        rows.setdefault(m, {})[j - v] = _norm(c * inv_c0)
    return BiSeries._make(rows, N, M, flag)


@dataclass(frozen=True)
class PochSpec:
    """``prod_{j < length} (1 - sign * a**a_exp * q**(q_offset + j*q_step))``."""

    sign: int = 1
    a_exp: int = 0
    q_offset: int = 0
    q_step: int = 1
    length: Union[int, float] = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise BadParameters("sign must be +1 or -1")
        if self.a_exp < 0:
            raise BadParameters("a_exp must be nonnegative")
        if self.q_step < 1:
            raise BadParameters("q_step must be a positive integer")
        if self.length != INF and (not isinstance(self.length, int) or self.length < 0):
            raise BadParameters("length must be a nonnegative integer or INF")

    @property
    def infinite(self) -> bool:
        return self.length == INF

    def factor_exponents(self, N: int) -> Iterator[int]:
        """q-exponents of the factors that are not 1 modulo q**(N+1)."""
        if not self.infinite:
            for j in range(self.length):
                yield self.q_offset + j * self.q_step
            return
        if self.q_offset <= 0 and self.a_exp == 0:
            raise NonTerminating("(x;q)_inf with x of nonpositive q-order and no a")
        e = self.q_offset
        while e <= N:
            yield e
            e += self.q_step


def poch(spec: PochSpec, N: int, M: int = 0) -> BiSeries:
    """Truncated q-Pochhammer product described by ``spec``."""
    exps = list(spec.factor_exponents(N))
    start = N - sum(e for e in exps if e < 0)
    out = BiSeries.one(start, M)
    for e in exps:
        if spec.a_exp == 0 and e == 0:
            out = out.scale(1 - spec.sign)
        else:
            out = out.mul_binomial(spec.sign, spec.a_exp, e)
    return out.truncate(N, M)


def poch_inverse(spec: PochSpec, N: int, M: int = 0) -> BiSeries:
    """``1 / poch(spec)`` built factor by factor."""
    exps = list(spec.factor_exponents(N))
    start = N + sum(e for e in exps if e < 0)
    out = BiSeries.one(start, M)
    for e in exps:
        out = out.div_binomial(spec.sign, spec.a_exp, e)
    return out.truncate(N, M)


def subst_a_shift(s: BiSeries, d: int) -> BiSeries:
    return s.subst_a_shift(d)


def eval_a(s: BiSeries, v: int) -> BiSeries:
    return s.eval_a(v)


def triple_product(x: int, P: int, N: int) -> BiSeries:
    """``(q**x, q**(P-x), q**P; q**P)_inf`` to q-order ``N``."""
    if not (isinstance(x, int) and isinstance(P, int)) or x <= 0 or x >= P:
        raise BadParameters(f"triple product needs 0 < x < P, got x={x}, P={P}")
    out = BiSeries.one(N)
    for off in (x, P - x, P):
        out = out * poch(PochSpec(1, 0, off, P, INF), N)
    return out


def theta_sum(A, B, N: int) -> BiSeries:
    """``sum_{n in Z} (-1)**n q**(A n**2 + B n)`` to q-order ``N``."""
    A, B = Fraction(A), Fraction(B)
    if A <= 0:
        raise Divergent("theta sum needs a positive quadratic coefficient")
    if (2 * A).denominator != 1 or (A + B).denominator != 1:
        raise NonIntegerExponent(f"A n^2 + B n is not integral for A={A}, B={B}")
    row: Dict[int, Coefficient] = {}
    vertex = -B / (2 * A)
    for start, step in ((math.ceil(vertex), 1), (math.ceil(vertex) - 1, -1)):
        n = start
        while True:
            ex = A * n * n + B * n
            if ex > N:
                break
            ex = ex.numerator
            row[ex] = row.get(ex, 0) + (-1 if n % 2 else 1)
            n += step
    return BiSeries._make({0: row}, N, 0, False)
