"""Regular and rapid variation utilities.

These are numerical cross-checks of the analytic class each mixing law
declares: a log-ratio index probe, a Potter-bound checker and a probe of
the class-Gamma auxiliary-function identity ``f(x + u g(x)) / f(x) -> e^u``
with ``g = f / f'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import DomainError

RealFunction = Callable[[float], float]

REGVAR = "regvar"
REGVAR1_CONVEX = "regvar1_convex"
GAMMA = "gamma"
ATOM_AT_ONE = "atom_at_one"
RAPID_NON_GAMMA = "rapid_non_gamma"

_KINDS = (REGVAR, REGVAR1_CONVEX, GAMMA, ATOM_AT_ONE, RAPID_NON_GAMMA)


@dataclass(frozen=True)
class TailClass:
    """Which asymptotic regime the function ``f`` of a mixing law falls in.

    ``r_star`` is set only for ``regvar`` (index > 1), ``p`` only for
    ``atom_at_one`` (the mass of ``M`` at 1).
    """

    kind: str
    r_star: Optional[float] = None
    p: Optional[float] = None
    aux_description: Optional[str] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown tail class {self.kind!r}")
        if self.kind == REGVAR:
            if self.r_star is None or not self.r_star > 1:
                raise DomainError(f"regvar class needs r_star > 1, got {self.r_star}")
        elif self.r_star is not None:
            raise DomainError(f"r_star only applies to the regvar class, not {self.kind}")
        if self.kind == ATOM_AT_ONE:
            if self.p is None or not 0 < self.p < 1:
                raise DomainError(f"atom_at_one class needs p in (0, 1), got {self.p}")
        elif self.p is not None:
            raise DomainError(f"p only applies to the atom_at_one class, not {self.kind}")

    @classmethod
    def regvar(cls, r_star: float) -> "TailClass":
        return cls(REGVAR, r_star=float(r_star))

    @classmethod
    def regvar1_convex(cls) -> "TailClass":
        return cls(REGVAR1_CONVEX)

    @classmethod
    def gamma(cls, aux_description: str = "g = f/f'") -> "TailClass":
        return cls(GAMMA, aux_description=aux_description)

    @classmethod
    def atom_at_one(cls, p: float) -> "TailClass":
        return cls(ATOM_AT_ONE, p=float(p))

    @classmethod
    def rapid_non_gamma(cls) -> "TailClass":
        return cls(RAPID_NON_GAMMA)

    def __str__(self) -> str:
        if self.kind == REGVAR:
            return f"RegVar({self.r_star:g})"
        if self.kind == ATOM_AT_ONE:
            return f"AtomAtOne({self.p:g})"
        return {REGVAR1_CONVEX: "RegVar1Convex", GAMMA: "Gamma",
                RAPID_NON_GAMMA: "RapidNonGamma"}[self.kind]


def rv_index_estimate(f: RealFunction, x: float, lam: float) -> float:
    """Read the regular-variation index off one dilation: ``ln(f(lam x)/f(x)) / ln lam``.

    Exact for pure powers. For rapidly varying ``f`` the value grows
    without bound in ``x``.
    """
    if not lam > 1:
        raise DomainError(f"lam must exceed 1, got {lam}")
    fx, flx = f(x), f(lam * x)
    if not fx > 0 or not flx > 0:
        raise DomainError(f"f must be positive at {x} and {lam * x}")
    return (math.log(flx) - math.log(fx)) / math.log(lam)


@dataclass(frozen=True)
class PotterResult:
    """Outcome of :func:`potter_verify`; truthy when every pair passed."""

    ok: bool
    violation: Optional[tuple] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def potter_verify(f: RealFunction, rho: float, A: float, delta: float, X: float,
                  pairs: Iterable[tuple]) -> PotterResult:
    """Check the two-sided Potter bounds on every ``(x, y)`` pair.

    The bounds are ``(1/A) (y/x)^(rho-delta) <= f(y)/f(x) <= A (y/x)^(rho+delta)``
    for ``y > x > X``. Stops at the first violating pair and returns it.
    """
    if not rho > 0:
        raise DomainError("rho must be positive")
    if not A > 1:
        raise DomainError("A must exceed 1")
    if not 0 < delta < rho:
        raise DomainError("delta must lie in (0, rho)")
    pairs = list(pairs)
    if not pairs:
        raise DomainError("pairs must be nonempty")
    n = 0
    for x, y in pairs:
        if not y > x > X:
            raise DomainError(f"pair ({x}, {y}) does not satisfy y > x > X={X}")
        # compare in log space so exp(x) style functions do not overflow the ratio
        log_ratio = math.log(f(y)) - math.log(f(x))
        log_xy = math.log(y / x)
        lo = -math.log(A) + (rho - delta) * log_xy
        hi = math.log(A) + (rho + delta) * log_xy
        n += 1
        if not lo <= log_ratio <= hi:
            return PotterResult(False, (x, y), n)
    return PotterResult(True, None, n)


def log_grid_pairs(x_min: float, x_max: float, points: int) -> list:
    """All ordered pairs ``x < y`` drawn from a geometric grid."""
    grid = [x_min * (x_max / x_min) ** (k / (points - 1)) for k in range(points)]
    return [(grid[i], grid[j]) for i in range(points) for j in range(i + 1, points)]


def gamma_aux_check(f: RealFunction, f_prime: RealFunction, x: float,
                    u_grid: Sequence[float]) -> float:
    """Max relative deviation of ``f(x + u g(x)) / f(x)`` from ``e^u`` over ``u_grid``.

    Uses the auxiliary function ``g = f / f'``. Values near zero certify
    class-Gamma behaviour at scale ``x``; a periodic, non-vanishing error
    signals rapid variation outside Gamma.
    """
    fx, fpx = f(x), f_prime(x)
    if not fx > 0 or not fpx > 0:
        raise DomainError(f"f and f' must be positive at x={x}")
    g = fx / fpx
    worst = 0.0
    for u in u_grid:
        xu = x + u * g
        if not xu > 0:
            raise DomainError(f"evaluation point {xu} is not positive")
        fu = f(xu)
        if not fu > 0:
            raise DomainError(f"f must be positive at {xu}")
        ratio = math.exp(math.log(fu) - math.log(fx) - u)
        worst = max(worst, abs(ratio - 1.0))
    return worst


def argument_ratio_limit(f: RealFunction, g: RealFunction, rho: float, x: float) -> tuple:
    """Return ``(x / g(x), (f(x) / f(g(x)))^(1/rho))``.

    For ``f`` regularly varying with index ``rho > 0`` and ``g -> infinity``
    the two entries share a limit; on closed-form instances they agree
    exactly at every ``x``.
    """
    if not rho > 0:
        raise DomainError("rho must be positive")
    gx = g(x)
    return x / gx, (f(x) / f(gx)) ** (1.0 / rho)
