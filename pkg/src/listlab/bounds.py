"""Closed-form quantities: list-decoding radii, entropies, tail bounds, bound tables.

Everything here is a pure function in double precision, except the binomial
sums, which use exact integer arithmetic.  The ``0 * log 0 = 0`` convention
applies at interval endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError

#: absolute tolerance for floating-point comparisons in this module
TOL = 1e-9

#: guard above which exact binomial sums are refused (plenty at desk scale)
BINOMIAL_N_CAP = 4096


def generalized_singleton_radius(L: int, R, eps=0):
    """Largest relative radius ``L/(L+1) * (1 - R - eps)`` for list size ``L`` at rate ``R``.

    Monotone increasing in ``L``, decreasing in ``R`` and ``eps``.  Exact when
    called with Fractions.
    """
    if L < 1:
        raise InputError(f"list size must be >= 1, got {L}")
    slack = 1 - R - eps
    if slack < 0 or R + eps > 1 or R < 0 or eps < 0:
        raise InputError(f"need 0 <= R + eps <= 1, got R={R}, eps={eps}")
    return L * slack / (L + 1)


def q_ary_entropy(q: int, x: float) -> float:
    """q-ary entropy ``h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)``."""
    if q < 2:
        raise InputError(f"alphabet size must be >= 2, got {q}")
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise InputError(f"entropy argument must be in [0, 1], got {x}")
    lq = math.log(q)
    h = x * math.log(q - 1) / lq if q > 2 else 0.0
    if 0.0 < x < 1.0:
        h += (-x * math.log(x) - (1 - x) * math.log(1 - x)) / lq
    return h


def binary_entropy(x: float) -> float:
    return q_ary_entropy(2, x)


@dataclass(frozen=True)
class BoundParams:
    """Parameter pack for capacity-style checks: list size, rate, slack, alphabet, length."""

    L: int
    R: float
    eps: float
    q: int
    n: int = 1

    def __post_init__(self):
        if self.L < 1 or self.q < 2 or self.n < 1:
            raise InputError(f"invalid BoundParams: L={self.L}, q={self.q}, n={self.n}")
        p = generalized_singleton_radius(self.L, self.R, self.eps)
        if not 0 <= p < 1:
            raise InputError(f"radius {p} outside [0, 1)")

    @property
    def radius(self):
        return generalized_singleton_radius(self.L, self.R, self.eps)


@dataclass(frozen=True)
class CapacityVerdict:
    verdict: str  # "consistent" | "violates_capacity"
    radius: float
    entropy_at_radius: float
    margin: float  # h_q(p) - (1 - R); positive -> violates
    note: str


def capacity_check(params: BoundParams) -> CapacityVerdict:
    """Compare ``h_q(p)`` against ``1 - R`` at ``p = L/(L+1)(1-R-eps)``.

    A positive margin means no code of rate R can be (p, L)-list-decodable over
    this alphabet, no matter the construction.  The note reports the qualitative
    alphabet lower-bound exponent ``min(L, 1/eps)`` implied by the capacity
    trade-off; no constant is fabricated.
    """
    p = float(params.radius)
    h = q_ary_entropy(params.q, p)
    margin = h - (1 - float(params.R))
    verdict = "violates_capacity" if margin > TOL else "consistent"
    exponent = params.L if params.eps == 0 else min(params.L, 1.0 / float(params.eps))
    note = (f"capacity-style alphabet bound shape: q >= 2^Omega_R(min(L, 1/eps)); "
            f"min(L, 1/eps) = {exponent:g} here")
    return CapacityVerdict(verdict=verdict, radius=p, entropy_at_radius=h,
                           margin=margin, note=note)


def chernoff_tail(alpha: float, m: int, delta: float) -> float:
    """Upper bound ``exp(-delta^2 * alpha * m / (2 + delta))`` on the binomial upper tail.

    Bounds ``Pr[Binomial(m, alpha) > (1 + delta) * alpha * m]``.
    """
    if not 0 < alpha <= 1:
        raise InputError(f"alpha must be in (0, 1], got {alpha}")
    if m < 1:
        raise InputError(f"m must be >= 1, got {m}")
    if delta <= 0:
        raise InputError(f"delta must be > 0, got {delta}")
    return math.exp(-(delta ** 2) * alpha * m / (2 + delta))


def binomial_entropy_bounds(n: int, alpha: float):
    """Exact ``sum_{i <= alpha*n} C(n, i)`` sandwiched by its entropy estimates.

    Returns ``(lower, exact_sum, upper)`` with ``lower = C(n, floor(alpha*n))``
    (exact integer) and ``upper = 2^(h(alpha) n)``.  The upper estimate is the
    standard entropy bound and is only valid for ``alpha <= 1/2``; it is
    reported for all alpha but should not be asserted beyond that range.
    """
    if n < 0 or n > BINOMIAL_N_CAP:
        raise InputError(f"n must be in [0, {BINOMIAL_N_CAP}], got {n}")
    if not 0 <= alpha <= 1:
        raise InputError(f"alpha must be in [0, 1], got {alpha}")
    r = math.floor(Fraction(alpha) * n) if isinstance(alpha, Fraction) else math.floor(alpha * n + 1e-12)
    r = min(r, n)
    exact = sum(math.comb(n, i) for i in range(r + 1))
    lower = math.comb(n, r)
    upper = 2.0 ** (binary_entropy(float(alpha)) * n)
    return lower, exact, upper


def theorem_bound_table(grid: Sequence[tuple]) -> list:
    """Rows of exponent shapes for a grid of ``(L, R, eps)`` points.

    Purely presentational: emits ``1/eps`` and ``min(L, 1/eps)`` columns for
    plotting; the multiplicative constants in the alphabet lower bound are left
    symbolic on purpose.
    """
    rows = []
    for L, R, eps in grid:
        if eps <= 0:
            raise InputError(f"table rows need eps > 0, got {eps}")
        p = generalized_singleton_radius(L, R, eps)
        inv = 1.0 / float(eps)
        rows.append({
            "L": L,
            "R": float(R),
            "eps": float(eps),
            "radius": float(p),
            "inv_eps": inv,
            "min_L_inv_eps": min(float(L), inv),
        })
    return rows


TABLE_COLUMNS = ["L", "R", "eps", "radius", "inv_eps", "min_L_inv_eps"]
