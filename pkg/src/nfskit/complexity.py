"""L(1/3) complexity constants for the generalized Joux-Lercier and conjugation methods.

All o(1) terms are dropped: the curves are exact in the constants, not in Q.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

GJL = "GJL"
CONJ_MEDIUM = "CONJ_MEDIUM"
CONJ_BOUNDARY = "CONJ_BOUNDARY"
METHODS = (GJL, CONJ_MEDIUM, CONJ_BOUNDARY)


@dataclass(frozen=True)
class ComplexityPoint:
    cp: float
    t: int
    c: float
    method: str


def l_value(logQ: float, alpha: float, c: float) -> float:
    """exp(c (log Q)^alpha (log log Q)^(1 - alpha))."""
    if not 0 <= alpha <= 1:
        raise DomainError("alpha must lie in [0, 1]")
    if c <= 0:
        raise DomainError("c must be positive")
    if logQ <= math.e:
        raise DomainError("log Q must exceed e")
    return math.exp(c * logQ ** alpha * math.log(logQ) ** (1 - alpha))


def boundary_constant(cp: float, t: int) -> float:
    if cp <= 0 or t < 2:
        raise DomainError("boundary case needs cp > 0 and t >= 2")
    x = cp * t
    return 2 / x + math.sqrt(4 / x ** 2 + 2 / 3 * cp * (t - 1))


def complexity_constant(method: str, cp: float | None = None, t: int | None = None) -> float:
    if method == GJL:
        return (64 / 9) ** (1 / 3)
    if method == CONJ_MEDIUM:
        return (96 / 9) ** (1 / 3)
    if method == CONJ_BOUNDARY:
        if cp is None or t is None:
            raise DomainError("the boundary case needs cp and t")
        return boundary_constant(cp, t)
    raise DomainError(f"unknown method {method!r}")


def gjl_applicability_bound() -> float:
    """c_p such that GJL applies for p >= L_Q(2/3, c_p)."""
    return (8 / 3) ** (1 / 3)


# beta and delta of the derivations, kept for the consistency checks

def gjl_beta() -> float:
    return (8 / 9) ** (1 / 3)


def gjl_delta(beta: float) -> float:
    return math.sqrt(2 / beta)


def gjl_balance(beta: float, delta: float) -> float:
    """Right-hand side of beta = delta/3 + 2/(3 beta delta)."""
    return delta / 3 + 2 / (3 * beta * delta)


def medium_beta() -> float:
    return (4 / 3) ** (1 / 3)


def medium_smoothness_exponent(beta: float) -> float:
    """1/P = L(1/3, 2/c_t + c_t/(6 beta)) at the optimal c_t = 2 sqrt(3 beta)."""
    ct = 2 * math.sqrt(3 * beta)
    return 2 / ct + ct / (6 * beta)


def boundary_beta(cp: float, t: int) -> float:
    x = cp * t
    return 1 / x + math.sqrt(1 / x ** 2 + cp * (t - 1) / 6)


def emit_curves(cpRange=(0.5, 6.0), step: float = 0.01, tMax: int = 6):
    """Per c_p the best boundary constant over 2 <= t <= tMax, plus the GJL reference."""
    if step <= 0:
        raise DomainError("step must be positive")
    lo, hi = cpRange
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    out = []
    gjl = complexity_constant(GJL)
    bound = gjl_applicability_bound()
    for cp in (lo + step * np.arange(count)).tolist():
        cp = round(cp, 12)
        best = min((boundary_constant(cp, t), t) for t in range(2, tMax + 1))
        out.append(ComplexityPoint(cp, best[1], best[0], CONJ_BOUNDARY))
        if cp >= bound:
            out.append(ComplexityPoint(cp, 2, gjl, GJL))
    return out


def curves_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["cp", "t", "c", "method"])
    for pt in points:
        w.writerow([f"{pt.cp:.9g}", pt.t, f"{pt.c:.9g}", pt.method])
    return buf.getvalue()
