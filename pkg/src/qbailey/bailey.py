"""The (d, e, k) Bailey pair family, the Q-series it produces and their q-difference system.

Everything here is computed through :mod:`qbailey.series`; no coefficient is
ever produced any other way.  Series in ``a`` and ``q`` are returned at
q-order ``N`` and a-order ``M``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .errors import BadParameters, IndexOutOfRange, InsufficientTruncation
from .series import BiSeries, INF, PochSpec, as_integer, poch_inverse, triple_product

BetaSource = Callable[[int, int, int], BiSeries]


@dataclass(frozen=True)
class FamilyParams:
    d: int
    e: int
    k: int

    def __post_init__(self):
        for name in ("d", "e", "k"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise BadParameters(f"{name} must be a positive integer, got {v!r}")

    @property
    def K(self) -> int:
        """Number of family members, ``k + d(e - 1)``."""
        return self.k + self.d * (self.e - 1)

    @property
    def modulus(self) -> int:
        return self.d * (2 * self.K + 1)

    def check_index(self, i: int) -> None:
        if not (isinstance(i, int) and 1 <= i <= self.K):
            raise IndexOutOfRange(f"member index {i} outside 1..{self.K} for {self}")

    def __str__(self) -> str:
        return f"({self.d},{self.e},{self.k})"


@dataclass
class BaileyPairSpec:
    """One (d, e, k) pair: alpha comes from :func:`smpbp_alpha_b0`, beta optionally
    from a closed form supplied as a callable ``beta(n, N, M)``."""

    params: FamilyParams
    beta_closed_form: Optional[BetaSource] = None
    name: Optional[str] = None

    def alpha(self, n: int, N: int, M: int) -> BiSeries:
        """alpha_n(a^e, 0, q^e); zero unless d divides n."""
        if n % self.params.d:
            return BiSeries.zero(N, M)
        return smpbp_alpha_b0(self.params, n // self.params.d, N, M)

    def beta(self, n: int, N: int, M: int) -> BiSeries:
        if self.beta_closed_form is not None:
            return self.beta_closed_form(n, N, M)
        return beta_from_alpha(self.params, n, N, M)


# ---------------------------------------------------------------------------
# alpha / beta

def _alpha_monomial(p: FamilyParams, r: int):
    d, k = p.d, p.k
    a_exp = (k - d) * r
    q_exp = (d * k - d * d + d) * r * r - Fraction(d * r * (r + 1), 2)
    return (-1) ** r, a_exp, as_integer(q_exp, "alpha q-exponent")


def smpbp_alpha_b0(p: FamilyParams, r: int, N: int, M: int) -> BiSeries:
    """alpha_{dr}(a^e, 0, q^e) of the standard multiparameter Bailey pair.

    The b -> 0 limit reads the unsubscripted Pochhammer factor in the
    denominator as having length r, so that

        b^{r/e} (a^{1/e} b^{-1/e} q^{d/e}; q^{d/e})_r -> (-1)^r a^{r/e} q^{d r(r+1)/(2e)}.

    Result:
        (-1)^r a^{(k-d)r} q^{(dk-d^2+d)r^2 - d r(r+1)/2}
            (1 - a q^{2dr}) (a; q^d)_r / ((1 - a) (q^d; q^d)_r)
    with the division by (1 - a) carried out exactly.
    """
    if r < 0:
        raise BadParameters("alpha index must be nonnegative")
    sign, a_exp, q_exp = _alpha_monomial(p, r)
    Nr, Mr = N - q_exp, M - a_exp
    if r == 0:
        return BiSeries.monomial(1, 0, 0, N, M)
    # (1 - a q^{2dr}) (a; q^d)_r is a polynomial in a of degree r + 1
    num = BiSeries.one(Nr, max(Mr, r + 1))
    num = num.mul_binomial(1, 1, 2 * p.d * r)
    for j in range(r):
        num = num.mul_binomial(1, 1, p.d * j)
    body = num.exact_div_binomial(1, 1, 0).truncate(Nr, Mr)
    for j in range(1, r + 1):
        body = body.div_binomial(1, 0, p.d * j)
    return body.shift(a_exp, q_exp, sign)


def beta_from_alpha(p: FamilyParams, n: int, N: int, M: int) -> BiSeries:
    """beta_n(a^e, 0, q^e) from the Bailey pair relation with base q^e.

        beta_n = sum_{r=0}^{n} alpha_r / ((q^e; q^e)_{n-r} (a^e q^e; q^e)_{n+r})
    """
    e = p.e
    total = BiSeries.zero(N, M)
    for r in range(0, n + 1, p.d):
        term = smpbp_alpha_b0(p, r // p.d, N, M)
        for j in range(1, n - r + 1):
            term = term.div_binomial(1, 0, e * j)
        for j in range(1, n + r + 1):
            term = term.div_binomial(1, e, e * j)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# the Q family

def _check_cap(n: int, N: int, what: str) -> None:
    if n > N + 2:
        raise InsufficientTruncation(f"{what}: summation exceeded the cap n <= N + 2")


def _inv_ae_qe_inf(s: BiSeries, e: int) -> BiSeries:
    """s / (a^e q^e; q^e)_inf."""
    j = 1
    while e * j <= s.N:
        s = s.div_binomial(1, e, e * j)
        j += 1
    return s


def q_direct_exponent(p: FamilyParams, i: int, n: int) -> int:
    K, d = p.K, p.d
    return as_integer(Fraction(2 * K + 1, 2) * d * n * n + (Fraction(2 * K + 1, 2) - i) * d * n)


def q_direct(p: FamilyParams, i: int, N: int, M: int) -> BiSeries:
    """Q_i(a) straight from its defining single sum.

        Q_i(a) = 1/(a^e q^e; q^e)_inf * sum_n (-1)^n a^{Kn}
                 q^{(K+1/2)dn^2 + (K+1/2-i)dn} (1 - a^i q^{(2n+1)di})
                 (a q^d; q^d)_n / (q^d; q^d)_n
    """
    p.check_index(i)
    K, d = p.K, p.d
    total = BiSeries.zero(N, M)
    n = 0
    while True:
        _check_cap(n, N, "q_direct")
        qe = q_direct_exponent(p, i, n)
        if qe > N:
            break
        term = BiSeries.monomial((-1) ** n, K * n, qe, N, M)
        term = term.mul_binomial(1, i, (2 * n + 1) * d * i)
        for j in range(1, n + 1):
            term = term.mul_binomial(1, 1, d * j)
            term = term.div_binomial(1, 0, d * j)
        total = total + term
        n += 1
    return _inv_ae_qe_inf(total, p.e)


def q_lemma_form(p: FamilyParams, N: int, M: int) -> BiSeries:
    """Q_K(a) in its alternative single-sum form.

        1/(a^e q^e; q^e)_inf * sum_n (-1)^n a^{Kn} q^{(K+1/2)dn^2 - dn/2}
            (1 - a q^{2dn}) (a; q^d)_n / ((1 - a)(q^d; q^d)_n)
    """
    K, d = p.K, p.d
    total = BiSeries.zero(N, M)
    n = 0
    while True:
        _check_cap(n, N, "q_lemma_form")
        qe = as_integer(Fraction(2 * K + 1, 2) * d * n * n - Fraction(d, 2) * n)
        if qe > N:
            break
        num = BiSeries.one(N - qe, max(M - K * n, n + 1))
        num = num.mul_binomial(1, 1, 2 * d * n)
        for j in range(n):
            num = num.mul_binomial(1, 1, d * j)
        body = num.exact_div_binomial(1, 1, 0).truncate(None, M - K * n)
        for j in range(1, n + 1):
            body = body.div_binomial(1, 0, d * j)
        total = total + body.shift(K * n, qe, (-1) ** n)
        n += 1
    return _inv_ae_qe_inf(total, p.e)


def _alpha_q_exponent(p: FamilyParams, r: int) -> int:
    return _alpha_monomial(p, r)[2]


def wbl_sides(p: FamilyParams, N: int, M: int, beta: Optional[BetaSource] = None):
    """Both sides of the limiting Bailey lemma for the (d, e, k) pair.

        left  = sum_n a^{en} q^{en^2} beta_n(a^e, 0, q^e)
        right = 1/(a^e q^e; q^e)_inf sum_n a^{en} q^{en^2} alpha_n(a^e, 0, q^e)

    ``beta`` is a callable ``beta(n, N, M)``; by default beta is summed from alpha.
    """
    e, d = p.e, p.d
    if beta is None:
        beta = lambda n, NN, MM: beta_from_alpha(p, n, NN, MM)  # noqa: E731

    left = BiSeries.zero(N, M)
    n = 0
    prev_lb = None
    while True:
        _check_cap(n, N, "wbl_sides")
        # lowest q-power of a^{en} q^{en^2} beta_n comes from the alpha monomials
        lb = e * n * n + min(_alpha_q_exponent(p, r) for r in range(n // d + 1))
        if lb > N and prev_lb is not None and lb >= prev_lb:
            break
        prev_lb = lb
        if lb <= N:
            b = beta(n, N - e * n * n, M - e * n)
            left = left + b.shift(e * n, e * n * n)
        n += 1

    right = BiSeries.zero(N, M)
    r = 0
    while True:
        _check_cap(r, N, "wbl_sides")
        n = d * r
        qe = e * n * n + _alpha_q_exponent(p, r)
        if qe > N:
            break
        alpha = smpbp_alpha_b0(p, r, N - e * n * n, M - e * n)
        right = right + alpha.shift(e * n, e * n * n)
        r += 1
    right = _inv_ae_qe_inf(right, e)
    return left.truncate(N, M), right.truncate(N, M)


# ---------------------------------------------------------------------------
# q-difference system

def shift_coefficient(p: FamilyParams, i: int, s: BiSeries) -> BiSeries:
    """(1 - a q^d) a^{i-1} q^{d(i-1)} / (a^e q^e; q^e)_d * s(a q^d)."""
    d, e = p.d, p.e
    out = s.subst_a_shift(d).mul_binomial(1, 1, d)
    for j in range(1, d + 1):
        out = out.div_binomial(1, e, e * j)
    return out.shift(i - 1, d * (i - 1))


def qdiff_residuals(p: FamilyParams, N: int, M: int, family: Optional[Sequence[BiSeries]] = None):
    """Residuals of the q-difference system, one per member; all should vanish.

    ``family`` defaults to ``q_direct(p, i)`` for i = 1..K.
    """
    K = p.K
    Q = list(family) if family is not None else [q_direct(p, i, N, M) for i in range(1, K + 1)]
    if len(Q) != K:
        raise BadParameters(f"expected {K} family members, got {len(Q)}")
    res = [(Q[0] - shift_coefficient(p, 1, Q[K - 1])).truncate(N, M)]
    for i in range(2, K + 1):
        r = Q[i - 1] - Q[i - 2] - shift_coefficient(p, i, Q[K - i])
        res.append(r.truncate(N, M))
    return res


def derive_family(p: FamilyParams, F_K: BiSeries, N: int, M: int) -> List[BiSeries]:
    """Solve the q-difference system for F_1..F_K given the last member.

    Order: F_1, F_{K-1}, F_2, F_{K-2}, ...; each step uses one equation of
    the system whose other two members are already known.
    """
    K = p.K
    if K == 1:
        return [F_K.truncate(N, M)]
    F: dict = {K: F_K}
    F[1] = shift_coefficient(p, 1, F_K)
    t = 1
    while len(F) < K:
        lo, hi = t, K - t
        if hi not in F:
            F[hi] = F[hi + 1] - shift_coefficient(p, hi + 1, F[lo])
        if len(F) == K:
            break
        if lo + 1 not in F:
            F[lo + 1] = F[lo] + shift_coefficient(p, lo + 1, F[hi])
        t += 1
    out = []
    for i in range(1, K + 1):
        s = F[i]
        if s.N < N or s.M < M:
            raise InsufficientTruncation(
                f"member {i} only known to (N={s.N}, M={s.M}), wanted ({N}, {M})"
            )
        out.append(s.truncate(N, M))
    return out


# ---------------------------------------------------------------------------
# product sides

def product_parameters(p: FamilyParams, i: int):
    """``(x, P)`` with Q_i(1) (q^e; q^e)_inf = (q^x, q^{P-x}, q^P; q^P)_inf."""
    p.check_index(i)
    return p.d * i, p.modulus


def product_label(p: FamilyParams, i: int) -> str:
    x, P = product_parameters(p, i)
    return f"(q^{x}, q^{P - x}, q^{P}; q^{P})_inf / (q^{p.e}; q^{p.e})_inf"


def product_side(p: FamilyParams, i: int, N: int) -> BiSeries:
    x, P = product_parameters(p, i)
    return triple_product(x, P, N) * poch_inverse(PochSpec(1, 0, p.e, p.e, INF), N)


# ---------------------------------------------------------------------------
# orchestration

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    mismatch: Optional[tuple] = None  # (member, m, j, lhs, rhs)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "detail": self.detail}
        if self.mismatch is not None:
            member, m, j, x, y = self.mismatch
            out["mismatch"] = {
                "member": member,
                "a_exponent": m,
                "q_exponent": j,
                "lhs": str(x),
                "rhs": str(y),
            }
        return out


@dataclass
class FamilyReport:
    params: FamilyParams
    N: int
    M: int
    checks: List[CheckResult] = field(default_factory=list)
    products: List[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        p = self.params
        return {
            "d": p.d,
            "e": p.e,
            "k": p.k,
            "K": p.K,
            "modulus": p.modulus,
            "N": self.N,
            "M": self.M,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "products": self.products,
            "wall_time": round(self.wall_time, 4),
        }


def _compare(name, pairs, detail=""):
    for member, x, y in pairs:
        mm = x.first_mismatch(y)
        if mm is not None:
            return CheckResult(name, False, detail, (member,) + mm)
    return CheckResult(name, True, detail)


def _guard(name, fn):
    try:
        return fn()
    except Exception as exc:  # reported, not raised
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")


def check_family(
    p: FamilyParams,
    N: int,
    M: Optional[int] = None,
    beta: Optional[BetaSource] = None,
    derive: bool = True,
    products: bool = True,
    residuals: bool = True,
) -> FamilyReport:
    """Run every family-level consistency check and collect the outcomes."""
    M = N if M is None else M
    t0 = time.perf_counter()
    report = FamilyReport(p, N, M)
    K = p.K
    Q = [q_direct(p, i, N, M) for i in range(1, K + 1)]

    report.checks.append(_guard("initial_conditions", lambda: _compare(
        "initial_conditions",
        [(i + 1, s.eval_a(0), BiSeries.one(N)) for i, s in enumerate(Q)],
    )))
    lemma = q_lemma_form(p, N, M)
    report.checks.append(_guard("lemma_form", lambda: _compare(
        "lemma_form", [(K, lemma, Q[-1])])))

    def wbl_check():
        left, right = wbl_sides(p, N, M, beta)
        src = "closed-form beta" if beta is not None else "beta from alpha"
        return _compare("wbl", [(K, left, right), (K, right, Q[-1])], src)

    report.checks.append(_guard("wbl", wbl_check))

    if residuals:
        def res_check():
            res = qdiff_residuals(p, N, M, Q)
            zero = BiSeries.zero(N, M)
            return _compare("residuals", [(i + 1, r, zero) for i, r in enumerate(res)])
        report.checks.append(_guard("residuals", res_check))

    if derive:
        def derive_check():
            fam = derive_family(p, lemma, N, M)
            return _compare("derive", [(i + 1, f, q) for i, (f, q) in enumerate(zip(fam, Q))])
        report.checks.append(_guard("derive", derive_check))

    if products:
        def product_check():
            pairs = []
            for i in range(1, K + 1):
                at1 = (Q[i - 1] if M >= N else q_direct(p, i, N, N)).eval_a(1)
                pairs.append((i, at1, product_side(p, i, N)))
            return _compare("products", pairs)
        report.checks.append(_guard("products", product_check))
    report.products = [product_label(p, i) for i in range(1, K + 1)]
    report.wall_time = time.perf_counter() - t0
    return report
