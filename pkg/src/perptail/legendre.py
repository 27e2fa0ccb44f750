"""Numerical convex conjugation and the mgf-envelope upper-bound machinery.

``conjugate`` computes ``f*(x) = sup{z x - f(z) : z > 0}`` by golden-section
search, which needs no derivative and is exact up to tolerance whenever
``z -> z x - f(z)`` is unimodal (any convex ``f``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, QuadratureError
from .tail_models import MixingLaw

RealFunction = Callable[[float], float]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
MAX_EXPANSIONS = 6
I_PSI_RTOL = 1e-6


@dataclass(frozen=True)
class ConjugateResult:
    x: float
    value: float
    argmax_z: float
    saturated: bool


def _golden_max(h, a, b, tol):
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    hc, hd = h(c), h(d)
    while b - a > tol * (1.0 + abs(c)):
        if hc >= hd:
            b, d, hd = d, c, hc
            c = b - _INV_PHI * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + _INV_PHI * (b - a)
            hd = h(d)
        if c >= d:
            # interval collapsed below float resolution
            break
    return (c, hc) if hc >= hd else (d, hd)


def conjugate(f: RealFunction, x: float, z_max: float = 10.0, tol: float = 1e-10) -> ConjugateResult:
    """Legendre-Fenchel transform of ``f`` at ``x`` over ``z in (0, z_max]``.

    When the maximiser sits at the right end of the search interval the
    interval is doubled, at most ``MAX_EXPANSIONS`` times; a maximiser still
    pinned to the edge after that is reported with ``saturated=True`` and
    the finite edge value (the true supremum is then +inf or lies further out).

    ``tol`` is relative to ``1 + |z|`` so that very wide brackets terminate.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not z_max > 0:
        raise DomainError(f"z_max must be positive, got {z_max}")

    def objective(z):
        v = z * x - f(z)
        return -math.inf if math.isnan(v) else v

    lo, hi = 0.0, float(z_max)
    for attempt in range(MAX_EXPANSIONS + 1):
        z, val = _golden_max(objective, lo, hi, tol)
        at_edge = hi - z <= 10.0 * tol * (1.0 + hi)
        if not at_edge:
            return ConjugateResult(x, val, z, False)
        if attempt < MAX_EXPANSIONS:
            # unimodal: a maximiser pinned to the edge lies beyond it
            lo, hi = 0.5 * hi, 2.0 * hi
    return ConjugateResult(x, val, z, True)


def scaled_conjugate(f: RealFunction, B: float, z_max: float = 10.0,
                     tol: float = 1e-10) -> RealFunction:
    """``z -> B f*(z / B)``, the mgf exponent built from a rescaled conjugate."""
    if not B > 0:
        raise DomainError("B must be positive")
    return lambda z: B * conjugate(f, z / B, z_max, tol).value


def chernoff_log_tail_bound(psi: RealFunction, x: float, z_max: float = 10.0,
                            tol: float = 1e-10) -> tuple:
    """Markov/Chernoff bound ``ln P(X > x) <= -psi*(x)``.

    ``psi`` must dominate the log-mgf of X on z > 0; that is the caller's
    obligation. Returns ``(bound, saturated)``; a saturated conjugate means
    the finite bound reported is weaker than the true (unbounded) one.
    """
    res = conjugate(psi, x, z_max, tol)
    return -res.value, res.saturated


def _continuous_log_integrand(law: MixingLaw, psi: RealFunction, z: float, psi_z: float):
    def phi(s):
        d = math.exp(s)
        ld = float(law._log_density(np.float64(d)))
        if ld == -math.inf:
            return -math.inf
        return z + psi(z * (1.0 - d)) - psi_z + ld + s
    return phi


def log_I_psi(law: MixingLaw, psi: RealFunction, z: float, quadrature_points: int = 1000) -> float:
    """Natural log of ``e^z E exp(psi(z M) - psi(z))``.

    Atoms are summed exactly. The continuous part is integrated in
    ``s = ln(1 - m)``: a coarse scan of ``quadrature_points`` nodes locates
    where the log-integrand lives (within 50 nats of its maximum), then that
    window is split into panels and integrated adaptively.
    """
    if not z > 0:
        raise DomainError("z must be positive")
    if quadrature_points < 1000:
        raise DomainError("quadrature_points must be at least 1000")
    psi_z = psi(z)
    terms = []
    for loc, mass in law.atoms():
        if mass > 0:
            terms.append(math.log(mass) + z + psi(z * loc) - psi_z)

    phi = _continuous_log_integrand(law, psi, z, psi_z)
    s_lo = math.log(1e-300)
    grid = np.linspace(s_lo, 0.0, quadrature_points)
    vals = np.array([phi(s) for s in grid[:-1]] + [-math.inf])
    top = float(np.max(vals))
    if top > -math.inf:
        live = np.nonzero(vals >= top - 50.0)[0]
        step = grid[1] - grid[0]
        a = max(s_lo, grid[live[0]] - step)
        b = min(0.0, grid[live[-1]] + step)
        edges = list(np.linspace(a, b, 17))
        # log_power density has a kink at its cutoff
        if a < -1.0 < b:
            edges.append(-1.0)
        edges = sorted(set(edges))
        total, err = 0.0, 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(lambda s: math.exp(phi(s) - top), lo, hi,
                                    epsabs=0.0, epsrel=1e-10, limit=quadrature_points)
            total += val
            err += e
        if total > 0:
            if err > I_PSI_RTOL * total:
                raise QuadratureError("I_psi quadrature missed its relative target", err / total)
            terms.append(top + math.log(total))
    if not terms:
        return -math.inf
    return float(np.logaddexp.reduce(terms))


def evaluate_I_psi(law: MixingLaw, psi: RealFunction, z: float, quadrature_points: int = 1000) -> float:
    """``I_psi(z) = e^z E exp(psi(z M) - psi(z))`` (may overflow to inf)."""
    lv = log_I_psi(law, psi, z, quadrature_points)
    return math.exp(lv) if lv < 709.0 else math.inf
