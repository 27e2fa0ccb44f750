"""Theorem layer: classify a law, produce the limiting constant, predict ln P(R > x).

For ``f(x) = -x ln P(M > 1 - 1/x)`` and constant payment ``q``:

* f regularly varying with index r* > 1:  ln P(R > x) ~ -r^(r*-1) f(x/q),
  where 1/r + 1/r* = 1;
* f in class Gamma:                        ln P(R > x) ~ -e f(x/q);
* f in R(1), ultimately strictly convex:   ln P(R > x) ~ -f(x/q);
* P(M = 1) = p in (0, 1):                  ln P(R > x) ~ (x/q) ln p.

For f rapidly varying outside Gamma only the bracket
``[-e^3 f(x/q), -e^-1 f(x/q)]`` is available and no point value is given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError
from .regvar import (ATOM_AT_ONE, GAMMA, RAPID_NON_GAMMA, REGVAR, REGVAR1_CONVEX,
                     TailClass)
from .tail_models import MixingLaw, f_value

RAPID_BRACKET = (math.exp(3.0), math.exp(-1.0))


def conjugate_index(r_star: float) -> float:
    """The exponent r with 1/r + 1/r* = 1."""
    if not r_star > 1:
        raise DomainError(f"r_star must exceed 1, got {r_star}")
    return r_star / (r_star - 1.0)


def theorem_constant(tc: TailClass) -> float:
    """Magnitude of the limit of ln P(R > x) / f(x/q); predictions carry the sign."""
    if tc.kind == REGVAR:
        r = conjugate_index(tc.r_star)
        return r ** (tc.r_star - 1.0)
    if tc.kind == GAMMA:
        return math.e
    if tc.kind == REGVAR1_CONVEX:
        return 1.0
    raise DomainError(f"no theorem constant for class {tc}; "
                      "atom laws use the slope ln p, rapid laws a bracket")


@dataclass(frozen=True)
class PredictedLogTail:
    """Prediction at one x: a point ``value`` or, for rapid laws, a ``bracket``."""

    x: float
    value: Optional[float]
    bracket: Optional[tuple] = None


@dataclass(frozen=True)
class TailPrediction:
    """``constant_C`` is None for rapid laws, which only get ``bracket``."""

    tail_class: TailClass
    constant_C: Optional[float]
    normalizer: str
    predict_at: Callable[[float], PredictedLogTail]
    bracket: Optional[tuple] = None


def _check_law(law: MixingLaw) -> TailClass:
    tc = law.tail_class
    if tc is None:
        raise DomainError(f"law {law} has no tail class")
    return tc


def predict_log_tail(law: MixingLaw, q: float, x: float) -> PredictedLogTail:
    """Leading-order prediction of ln P(R > x) for payment q."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if not x >= q:
        raise DomainError(f"x must be at least q, got x={x}, q={q}")
    tc = _check_law(law)
    y = x / q
    if tc.kind == ATOM_AT_ONE:
        return PredictedLogTail(x, y * math.log(tc.p))
    if tc.kind == RAPID_NON_GAMMA:
        h = f_value(law, y)
        return PredictedLogTail(x, None, (-RAPID_BRACKET[0] * h, -RAPID_BRACKET[1] * h))
    return PredictedLogTail(x, -theorem_constant(tc) * f_value(law, y))


def tail_prediction(law: MixingLaw, q: float) -> TailPrediction:
    """Bundle the class, constant and normaliser for a law at payment q."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    tc = _check_law(law)
    if tc.kind == ATOM_AT_ONE:
        const, norm, bracket = -math.log(tc.p) / q, "x", None
    elif tc.kind == RAPID_NON_GAMMA:
        const, norm, bracket = None, "f(x/q)", RAPID_BRACKET
    else:
        const, norm, bracket = theorem_constant(tc), "f(x/q)", None
    return TailPrediction(tc, const, norm, lambda x: predict_log_tail(law, q, x), bracket)


def normalizer_value(law: MixingLaw, q: float, x: float) -> float:
    """The comparison function the ratio column divides by: f(x/q), or x for atom laws."""
    tc = _check_law(law)
    if tc.kind == ATOM_AT_ONE:
        return x
    return f_value(law, x / q)
