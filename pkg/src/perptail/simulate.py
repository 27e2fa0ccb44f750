"""Forward simulation of R = q (1 + M_1 + M_1 M_2 + ...), Monte Carlo tail
estimates with Wilson intervals, and exact small-depth quadrature oracles.

Each simulated draw stops once the running product P drops below
``eps_trunc``. The discarded remainder is exactly ``P R'`` with ``R'`` an
independent copy of R, so a draw is a pathwise lower approximation of R and
``value + P q / (1 - E M)`` is its mean-corrected version.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from . import backend as _backend
from .errors import DomainError, QuadratureError
from .rng import DrawStream, stream_key
from .tail_models import LOG_POWER_CUTOFF, LogPower, MixingLaw

DEFAULT_EPS_TRUNC = 1e-9
DEFAULT_MAX_TERMS = 100_000
ORACLE_TOL = 1e-8


@dataclass(frozen=True)
class DrawResult:
    value: float
    partial_product: float
    terms: int
    exhausted: bool


@dataclass(frozen=True)
class TailEstimate:
    x: float
    n_samples: int
    hits: int
    p_hat: float
    ci99: tuple
    ln_p_hat: Optional[float]
    seed: int
    workers: int
    eps_trunc: float
    n_exhausted: int = 0


def wilson_interval(hits: int, n: int, confidence: float = 0.99) -> tuple:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise DomainError("n must be positive")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p = hits / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = (p + z2 / (2 * n)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    return max(0.0, centre - half), min(1.0, centre + half)


def _check_sim_args(q, eps_trunc, max_terms):
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if not 0 < eps_trunc < 1:
        raise DomainError(f"eps_trunc must lie in (0, 1), got {eps_trunc}")
    if max_terms < 1:
        raise DomainError(f"max_terms must be at least 1, got {max_terms}")


def draw_perpetuity(law: MixingLaw, q: float, eps_trunc: float = DEFAULT_EPS_TRUNC,
                    max_terms: int = DEFAULT_MAX_TERMS, stream: Optional[DrawStream] = None,
                    draw_index: int = 0, backend: Optional[str] = None) -> DrawResult:
    """One truncated draw of the series.

    ``exhausted`` is set when ``max_terms`` ran out before the product fell
    below ``eps_trunc``; that happens with positive probability for laws
    with an atom at one.
    """
    _check_sim_args(q, eps_trunc, max_terms)
    stream = stream or DrawStream(0)
    v, p, t = _backend.simulate_block(law, q, eps_trunc, max_terms, stream.key,
                                      draw_index, 1, backend)
    return DrawResult(float(v[0]), float(p[0]), int(t[0]), bool(p[0] >= eps_trunc))


def _split(n: int, workers: int) -> list:
    base, extra = divmod(n, workers)
    return [base + (w < extra) for w in range(workers)]


def simulate_draws(law: MixingLaw, q: float, n_samples: int, seed: int, workers: int = 1,
                   eps_trunc: float = DEFAULT_EPS_TRUNC, max_terms: int = DEFAULT_MAX_TERMS,
                   backend: Optional[str] = None):
    """All draws of a run, worker blocks concatenated in worker order.

    Worker ``w`` owns substream ``(seed, w)`` and its own draw counter, so the
    output depends on ``workers`` but not on thread scheduling.
    Returns ``(values, partial_products, terms)``.
    """
    _check_sim_args(q, eps_trunc, max_terms)
    if n_samples < 1:
        raise DomainError("n_samples must be at least 1")
    if workers < 1:
        raise DomainError("workers must be at least 1")
    sizes = _split(n_samples, workers)

    def run(w):
        return _backend.simulate_block(law, q, eps_trunc, max_terms, stream_key(seed, w),
                                       0, sizes[w], backend)

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(workers)))
    return tuple(np.concatenate(col) for col in zip(*parts))


def mean_corrected(law: MixingLaw, q: float, values: np.ndarray, products: np.ndarray) -> np.ndarray:
    """Add the expected remainder ``P q / (1 - E M)`` to each truncated draw."""
    em = law.mean()
    if not em < 1:
        raise DomainError("E M must be below one for a finite mean")
    return values + products * (q / (1.0 - em))


def estimates_from_values(values: np.ndarray, xs: Sequence[float], seed: int, workers: int,
                          eps_trunc: float, n_exhausted: int = 0) -> list:
    """Score one set of draws against every x (hits nonincreasing in x)."""
    n = len(values)
    ordered = np.sort(values)
    out = []
    for x in xs:
        hits = int(n - np.searchsorted(ordered, x, side="right"))
        p_hat = hits / n
        out.append(TailEstimate(float(x), n, hits, p_hat, wilson_interval(hits, n),
                                math.log(p_hat) if hits else None, int(seed), int(workers),
                                float(eps_trunc), int(n_exhausted)))
    return out


def estimate_tail(law: MixingLaw, q: float, xs: Sequence[float], n_samples: int, seed: int,
                  workers: int = 1, eps_trunc: float = DEFAULT_EPS_TRUNC,
                  max_terms: int = DEFAULT_MAX_TERMS, backend: Optional[str] = None) -> list:
    """Monte Carlo estimates of P(R > x) over a sorted grid, from shared draws."""
    xs = [float(x) for x in xs]
    if not xs:
        raise DomainError("xs must be nonempty")
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise DomainError("xs must be sorted")
    values, prods, _ = simulate_draws(law, q, n_samples, seed, workers, eps_trunc,
                                      max_terms, backend)
    n_exhausted = int(np.count_nonzero(prods >= eps_trunc))
    return estimates_from_values(values, xs, seed, workers, eps_trunc, n_exhausted)


# -- exact oracles for the truncated series ---------------------------------

def _survival(law: MixingLaw, t: float) -> float:
    """P(M > t)."""
    if t < 0:
        return 1.0
    if t >= 1:
        return 0.0
    return math.exp(float(law._ln_tail(np.float64(1.0 - t))))


def _density_delta(law: MixingLaw, d: float) -> float:
    return math.exp(float(law._log_density(np.float64(d))))


def _tail_of_partial(law: MixingLaw, n: int, y: float) -> float:
    """P(Y_n > y) with Y_0 = 1 and Y_n = 1 + M Y_{n-1}."""
    if y < 1:
        return 1.0
    if n == 0:
        return 0.0
    if n == 1:
        return _survival(law, y - 1.0)
    w = y - 1.0
    total = 0.0
    for loc, mass in law.atoms():
        if mass > 0 and loc > 0:
            total += mass * _tail_of_partial(law, n - 1, w / loc)
    # continuous part over delta = 1 - m; kinks where w/(1-delta) crosses 1..n
    points = sorted({1.0 - w / k for k in range(1, n + 1) if 0 < 1.0 - w / k < 1}
                    | ({LOG_POWER_CUTOFF} if isinstance(law, LogPower) else set()))
    val, _ = _quad(lambda d: _tail_of_partial(law, n - 1, w / (1.0 - d)) * _density_delta(law, d),
                     points)
    return total + val


def _quad(fn, points):
    edges = [0.0] + [p for p in points if 0 < p < 1] + [1.0]
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        # full_output keeps scipy from warning; convergence is judged below
        v, e = integrate.quad(fn, a, b, epsabs=ORACLE_TOL * 1e-2, epsrel=ORACLE_TOL,
                              limit=200, full_output=True)[:2]
        total += v
        err += e
    if err > ORACLE_TOL:
        raise QuadratureError("small-n oracle missed its tolerance", err)
    return total, err


def exact_small_n_oracle(law: MixingLaw, q: float, n: int, x: float) -> float:
    """P(R_n* > x) for R_n* = q (1 + M_1 + ... + M_1...M_n), n in {1, 2, 3}.

    Nested adaptive quadrature over the continuous part with atoms summed
    exactly. R >= R_n* pathwise, so this is a lower bound on P(R > x).
    """
    if n not in (1, 2, 3):
        raise DomainError(f"n must be 1, 2 or 3, got {n}")
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    return min(1.0, max(0.0, _tail_of_partial(law, n, x / q)))
