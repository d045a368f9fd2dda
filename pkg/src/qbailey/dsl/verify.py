"""Check an identity document by expanding both sides."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from ..bailey import beta_from_alpha
from ..errors import QSeriesError
from .ast import BaileyDoc, IdentityDoc
from .evaluate import eval_expr


@dataclass
class VerdictReport:
    name: str
    N: int
    M: int
    verdict: str  # "equal" | "mismatch" | "error"
    bivariate: bool = False
    mismatch: Optional[dict] = None
    error: Optional[dict] = None
    integral: bool = True
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "equal"

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "N": self.N,
            "M": self.M,
            "bivariate": self.bivariate,
            "verdict": self.verdict,
            "integral": self.integral,
            "wall_time": round(self.wall_time, 4),
        }
        if self.mismatch is not None:
            out["mismatch"] = self.mismatch
        if self.error is not None:
            out["error"] = self.error
        out.update(self.extra)
        return out

    def summary(self) -> str:
        head = f"{self.name}: "
        if self.verdict == "equal":
            return head + f"equal to q^{self.N}" + (f", a^{self.M}" if self.bivariate else "")
        if self.verdict == "mismatch":
            mm = self.mismatch
            where = f"q^{mm['q_exponent']}"
            if self.bivariate or mm["a_exponent"]:
                where = f"a^{mm['a_exponent']} {where}"
            return head + f"first mismatch at {where}: lhs {mm['lhs']}, rhs {mm['rhs']}"
        return head + f"error {self.error['kind']}: {self.error['message']}"


def _mismatch_dict(mm):
    m, j, x, y = mm
    return {"q_exponent": j, "a_exponent": m, "lhs": str(x), "rhs": str(y)}


def _check_top(series, side):
    if series.min_q < 0 or series.aval < 0:
        raise _TopLevel(
            f"{side} has a term of negative order (min q-exponent {series.min_q}, "
            f"min a-exponent {series.aval}); Laurent parts did not cancel"
        )


class _TopLevel(QSeriesError):
    kind = "NegativeExponent"


def verify(doc: IdentityDoc, N: Optional[int] = None, M: Optional[int] = None) -> VerdictReport:
    """Expand both sides of ``doc`` and compare them term by term.

    Identities without ``a`` are compared at a-degree 0.  Otherwise both
    sides are expanded to a-order ``M`` (default ``N``).
    """
    N = doc.default_order if N is None else N
    bivariate = doc.bivariate
    M = (N if M is None else M) if bivariate else 0
    t0 = time.perf_counter()
    report = VerdictReport(doc.name, N, M, "equal", bivariate)
    try:
        lhs = eval_expr(doc.lhs, N, M)
        rhs = eval_expr(doc.rhs, N, M)
        _check_top(lhs, "lhs")
        _check_top(rhs, "rhs")
        report.integral = lhs.is_integral() and rhs.is_integral()
        mm = lhs.first_mismatch(rhs, N, M)
        if mm is not None:
            report.verdict = "mismatch"
            report.mismatch = _mismatch_dict(mm)
    except QSeriesError as exc:
        report.verdict = "error"
        report.error = {"kind": exc.kind, "message": str(exc)}
    report.wall_time = time.perf_counter() - t0
    return report


def verify_bailey(doc: BaileyDoc, n_max: int, N: int, M: Optional[int] = None) -> VerdictReport:
    """Compare a closed form for beta_n with the sum over alpha, n = 0..n_max."""
    M = N if M is None else M
    t0 = time.perf_counter()
    report = VerdictReport(doc.name, N, M, "equal", True, extra={"n_max": n_max})
    try:
        for n in range(n_max + 1):
            closed = eval_expr(doc.beta, N, M, env={doc.var: n})
            summed = beta_from_alpha(doc.params, n, N, M)
            if not closed.is_integral() or not summed.is_integral():
                report.integral = False
            mm = closed.first_mismatch(summed, N, M)
            if mm is not None:
                report.verdict = "mismatch"
                report.mismatch = dict(_mismatch_dict(mm), n=n)
                break
    except QSeriesError as exc:
        report.verdict = "error"
        report.error = {"kind": exc.kind, "message": str(exc)}
    report.wall_time = time.perf_counter() - t0
    return report
