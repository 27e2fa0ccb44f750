"""Rigorous finite-x certificates on ln P(R > x).

The path certificate follows the recursion R_n = q + M_n R_{n-1}: on the
q-normalised scale, if every factor clears ``M_i > 1 - delta_i`` then the
perpetuity exceeds ``x_n``, where

    x_0 = 1,    x_i = 1 + (1 - delta_i) x_{i-1},

so ``ln P(R > q x_n) >= sum_i ln P(M > 1 - delta_i)`` for any choice of
``delta_i in (0, 1)``. The strategies below only decide how good the bound is.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .errors import CertificateError, DomainError
from .regvar import GAMMA, RAPID_NON_GAMMA, REGVAR
from .tail_models import MixingLaw, f_derivative, f_value, ln_tail_at

MIN_PROGRESS = 1e-12
SWEEP_A = (0.5, 0.9, 0.99)
SANDWICH_CAVEAT_BELOW = 10.0


@dataclass(frozen=True)
class CaseI:
    """delta_n = (1 - a) / x_{n-1}, so the path advances by exactly a per step."""

    a: float

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise DomainError(f"CaseI needs a in (0, 1), got {self.a}")


@dataclass(frozen=True)
class CaseII:
    """x_1 = 1 + eps, then 1/delta_n = x_{n-1} + g(x_{n-1}) with g = f/f'."""

    eps: float = 0.1

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise DomainError(f"CaseII needs eps in (0, 1), got {self.eps}")


Strategy = Union[CaseI, CaseII]


@dataclass(frozen=True)
class PathCertificate:
    xs: tuple
    deltas: tuple
    ln_terms: tuple
    ln_lower: float
    target_x: float
    q: float
    strategy: Strategy

    @property
    def steps(self) -> int:
        return len(self.deltas)

    @property
    def x_reached(self) -> float:
        """Level on the original scale that the bound certifies: q x_n."""
        return self.q * self.xs[-1]

    def ratio_path(self, law: MixingLaw) -> list:
        """``|cumulative ln_lower| / f(x_i)`` along the path."""
        out, acc = [], 0.0
        for xi, term in zip(self.xs[1:], self.ln_terms):
            acc += term
            out.append(-acc / f_value(law, xi))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["step", "x_i", "delta_i", "ln_term", "cum_ln_lower"])
        acc = 0.0
        for i, (xi, d, t) in enumerate(zip(self.xs[1:], self.deltas, self.ln_terms), 1):
            acc += t
            w.writerow([i, f"{xi:.10g}", f"{d:.10g}", f"{t:.10g}", f"{acc:.10g}"])
        return buf.getvalue()


def default_strategy(law: MixingLaw) -> Optional[Strategy]:
    """The strategy matched to the law's class; None means run the a-sweep."""
    tc = law.tail_class
    if tc is None:
        raise DomainError(f"law {law} has no tail class")
    if tc.kind == REGVAR:
        return CaseI(1.0 / tc.r_star)
    if tc.kind in (GAMMA, RAPID_NON_GAMMA):
        return CaseII()
    # R(1) and atom laws: the optimum a -> 1 is a boundary, so sweep
    return None


def _run_path(law: MixingLaw, y_target: float, strategy: Strategy):
    xs, deltas, terms = [1.0], [], []
    x_prev = 1.0
    while x_prev < y_target:
        n = len(deltas) + 1
        if isinstance(strategy, CaseI):
            d = (1.0 - strategy.a) / x_prev
        elif n == 1:
            d = 1.0 - strategy.eps
        else:
            g = f_value(law, x_prev) / f_derivative(law, x_prev)
            d = 1.0 / (x_prev + g)
        x_next = 1.0 + (1.0 - d) * x_prev
        if x_next - x_prev < MIN_PROGRESS:
            raise CertificateError(f"path stalled at x={x_prev} after {n - 1} steps")
        deltas.append(d)
        terms.append(ln_tail_at(law, d))
        xs.append(x_next)
        x_prev = x_next
    return xs, deltas, terms


def path_certificate(law: MixingLaw, q: float, target_x: float,
                     strategy: Optional[Strategy] = None) -> PathCertificate:
    """Lower-bound certificate for ln P(R > target_x).

    With ``strategy=None`` the law's class picks it; for R(1) and atom laws
    Case I is run for each ``a`` in ``SWEEP_A`` and the largest bound kept.
    """
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    y = target_x / q
    if not y > 1:
        raise DomainError(f"target_x/q must exceed 1, got {y}")
    if strategy is None:
        strategy = default_strategy(law)
    if strategy is None:
        return max((path_certificate(law, q, target_x, CaseI(a)) for a in SWEEP_A),
                   key=lambda c: c.ln_lower)
    xs, deltas, terms = _run_path(law, y, strategy)
    return PathCertificate(tuple(xs), tuple(deltas), tuple(terms), math.fsum(terms),
                           float(target_x), float(q), strategy)


def case_one_efficiency(a: float, r_star: float) -> float:
    """The per-step rate i(a) = (1-a)^(1-r*) / (a r*), minimised at a = 1/r*."""
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")
    return (1.0 - a) ** (1.0 - r_star) / (a * r_star)


class Sandwich(NamedTuple):
    ln_lower: float
    ln_upper: float
    caveat: bool


def hitczenko_sandwich(law: MixingLaw, q: float, x: float) -> Sandwich:
    """Two-scale bracket on ln P(R > x), valid for sufficiently large x.

    lower = 2 ln 2 (x/q) ln P(M > 1 - q/(2x)),
    upper = 4 (x/q) ln P(M > 1 - 2q/x).

    Values are reported as computed, never reordered; ``caveat`` flags
    ``x/q < 10`` where the asymptotic regime is unlikely to hold yet.
    """
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if not x > 2 * q:
        raise DomainError(f"sandwich needs x > 2q, got x={x}, q={q}")
    y = x / q
    lower = 2.0 * math.log(2.0) * y * ln_tail_at(law, q / (2.0 * x))
    upper = 4.0 * y * ln_tail_at(law, 2.0 * q / x)
    return Sandwich(lower, upper, y < SANDWICH_CAVEAT_BELOW)


def atom_bounds(p: float, q: float, x: float) -> float:
    """ceil(x/q) ln p: the chance that the first ceil(x/q) factors all equal one."""
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if not q > 0 or not x > 0:
        raise DomainError("q and x must be positive")
    return math.ceil(x / q) * math.log(p)


def atom_mass_at_one(law: MixingLaw) -> float:
    """P(M = 1); zero for laws without an atom at one."""
    return sum(m for loc, m in law.atoms() if loc == 1.0)
