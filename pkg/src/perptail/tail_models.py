"""Mixing laws for the multiplicative factor M on [0, 1].

Every family is pinned by a closed-form log-tail near one,

    L(delta) = ln P(M > 1 - delta),    0 < delta <= 1,

extended to the whole unit interval with any missing mass placed as an atom
at zero. That keeps inversion sampling exact without touching the behaviour
near one, which is all the tail asymptotics depend on.

The per-family methods work on numpy arrays; the module-level functions
(`ln_tail_at`, `f_value`, `f_derivative`, `sample`) validate arguments and
return plain floats for scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import DomainError
from .regvar import TailClass

# inversion bisection: 47 halvings of [0, 1] give a bracket below 1e-14
BISECT_TOL = 1e-14
BISECT_STEPS = math.ceil(math.log2(1.0 / BISECT_TOL))
_ONE_MINUS_ULP = 1.0 - 2.0 ** -53

LOG_POWER_CUTOFF = math.exp(-1.0)

# kind codes shared with the compiled kernel
KIND_DEGENERATE = 0
KIND_POWER_UNIFORM = 1
KIND_WEIBULL_AT_ONE = 2
KIND_LOG_POWER = 3
KIND_GAMMA_EXP = 4
KIND_RAPID_NON_GAMMA = 5


def _bisect_decreasing(h, tau):
    """Smallest delta in (0, 1] with ``h(delta) <= tau`` for decreasing ``h``.

    Runs a fixed number of halvings so that the result is identical to the
    compiled kernel's scalar loop.
    """
    tau = np.asarray(tau, dtype=float)
    lo = np.zeros_like(tau)
    hi = np.ones_like(tau)
    for _ in range(BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        ok = h(mid) <= tau
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    return hi


class MixingLaw:
    """Base class of the catalog. Instances are immutable and shareable."""

    family: str = ""

    # -- closed forms, vectorised over delta in (0, 1] -------------------

    def _ln_tail(self, d: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _dln_tail(self, d: np.ndarray) -> np.ndarray:
        """Derivative of the log-tail with respect to delta."""
        raise NotImplementedError

    def _log_density(self, d: np.ndarray) -> np.ndarray:
        """Log of ``d/d(delta) P(M > 1 - delta)`` for the continuous part."""
        with np.errstate(divide="ignore", invalid="ignore"):
            dl = self._dln_tail(d)
            return np.where(dl > 0, self._ln_tail(d) + np.log(np.where(dl > 0, dl, 1.0)), -np.inf)

    def _invert(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms on [0, 1) to draws of M."""
        raise NotImplementedError

    # -- distribution facts ----------------------------------------------

    def atoms(self) -> tuple:
        """``((location, mass), ...)`` of the point masses of M."""
        return ()

    @property
    def tail_class(self) -> Optional[TailClass]:
        return None

    def mean(self) -> float:
        """E M, as the integral of the survival function."""
        val, _ = integrate.quad(lambda d: math.exp(float(self._ln_tail(np.float64(d)))),
                                0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
        return val

    def kernel_code(self) -> tuple:
        """``(kind, a, b, p_one)`` for the compiled simulation kernel."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerUniform(MixingLaw):
    """M = U^(1/alpha); alpha = 1 is the uniform law (Dickman case)."""

    alpha: float = 1.0
    family = "power_uniform"

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"power_uniform needs alpha > 0, got {self.alpha}")

    def _ln_tail(self, d):
        with np.errstate(divide="ignore"):
            return np.log(-np.expm1(self.alpha * np.log1p(-d)))

    def _dln_tail(self, d):
        with np.errstate(divide="ignore"):
            tail = -np.expm1(self.alpha * np.log1p(-d))
            return self.alpha * np.exp((self.alpha - 1.0) * np.log1p(-d)) / tail

    def _log_density(self, d):
        with np.errstate(divide="ignore"):
            return math.log(self.alpha) + (self.alpha - 1.0) * np.log1p(-d)

    def _invert(self, u):
        if self.alpha == 1.0:
            return np.array(u, dtype=float)
        return np.power(u, 1.0 / self.alpha)

    @property
    def tail_class(self):
        return TailClass.regvar1_convex()

    def mean(self):
        return self.alpha / (self.alpha + 1.0)

    def kernel_code(self):
        return (KIND_POWER_UNIFORM, self.alpha, 0.0, 0.0)

    def to_json(self):
        return {"family": self.family, "alpha": self.alpha}


@dataclass(frozen=True)
class WeibullAtOne(MixingLaw):
    """ln P(M > 1 - delta) = -c delta^(1 - alpha); f(x) = c x^alpha."""

    c: float = 1.0
    alpha: float = 2.0
    family = "weibull_at_one"

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"weibull_at_one needs c > 0, got {self.c}")
        if not self.alpha > 1:
            raise DomainError(f"weibull_at_one needs alpha > 1, got {self.alpha}")

    def _ln_tail(self, d):
        return -self.c * np.power(d, 1.0 - self.alpha)

    def _dln_tail(self, d):
        return self.c * (self.alpha - 1.0) * np.power(d, -self.alpha)

    def _log_density(self, d):
        with np.errstate(divide="ignore"):
            return (self._ln_tail(d) + math.log(self.c * (self.alpha - 1.0))
                    - self.alpha * np.log(d))

    def _invert(self, u):
        v = 1.0 - np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            d = np.power(-np.log(v) / self.c, 1.0 / (1.0 - self.alpha))
        return np.where(v > math.exp(-self.c), 0.0, 1.0 - d)

    def atoms(self):
        return ((0.0, -math.expm1(-self.c)),)

    @property
    def tail_class(self):
        return TailClass.regvar(self.alpha)

    def kernel_code(self):
        return (KIND_WEIBULL_AT_ONE, self.c, self.alpha, 0.0)

    def to_json(self):
        return {"family": self.family, "c": self.c, "alpha": self.alpha}


@dataclass(frozen=True)
class LogPower(MixingLaw):
    """ln P(M > 1 - delta) = -beta (-ln delta)^eta below delta = 1/e.

    Above the cutoff the tail is held at its value ``-beta`` and the deficit
    sits at zero, so ``f(x) = beta x (ln x)^eta`` for ``x >= e``.
    """

    beta: float = 1.0
    eta: float = 2.0
    family = "log_power"

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError(f"log_power needs beta > 0, got {self.beta}")
        if not self.eta > 0:
            raise DomainError(f"log_power needs eta > 0, got {self.eta}")

    def _ln_tail(self, d):
        d = np.asarray(d, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = -self.beta * np.power(-np.log(np.minimum(d, LOG_POWER_CUTOFF)), self.eta)
        return np.where(d <= LOG_POWER_CUTOFF, inner, -self.beta)

    def _dln_tail(self, d):
        d = np.asarray(d, dtype=float)
        dc = np.minimum(d, LOG_POWER_CUTOFF)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = self.beta * self.eta * np.power(-np.log(dc), self.eta - 1.0) / dc
        return np.where(d < LOG_POWER_CUTOFF, inner, 0.0)

    def _invert(self, u):
        v = 1.0 - np.asarray(u, dtype=float)
        with np.errstate(divide="ignore"):
            w = np.power(-np.log(v) / self.beta, 1.0 / self.eta)
        return np.where(v > math.exp(-self.beta), 0.0, -np.expm1(-w))

    def atoms(self):
        return ((0.0, -math.expm1(-self.beta)),)

    @property
    def tail_class(self):
        return TailClass.regvar1_convex()

    def kernel_code(self):
        return (KIND_LOG_POWER, self.beta, self.eta, 0.0)

    def to_json(self):
        return {"family": self.family, "beta": self.beta, "eta": self.eta}


def _gamma_exp_h(d):
    # ln(-L(delta)) for GammaExp; decreasing on (0, 1]
    return np.log(d) + 1.0 / d


def _rapid_h(d):
    # ln(-L(delta)) for RapidNonGamma; decreasing on (0, 1]
    return np.log(d) + 2.0 / d - np.cos(1.0 / d)


@dataclass(frozen=True)
class GammaExp(MixingLaw):
    """f(x) = e^x, the canonical class-Gamma example."""

    family = "gamma_exp"

    def _ln_tail(self, d):
        with np.errstate(over="ignore"):
            return -np.exp(_gamma_exp_h(np.asarray(d, dtype=float)))

    def _dln_tail(self, d):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(1.0 / d) * (1.0 / d - 1.0)

    def _log_density(self, d):
        d = np.asarray(d, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return self._ln_tail(d) + 1.0 / d + np.log(1.0 / d - 1.0)

    def _invert(self, u):
        v = 1.0 - np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = np.log(-np.log(v))
        d = _bisect_decreasing(_gamma_exp_h, np.where(v > math.exp(-math.e), 2.0, tau))
        return np.where(v > math.exp(-math.e), 0.0, 1.0 - d)

    def atoms(self):
        return ((0.0, -math.expm1(-math.e)),)

    @property
    def tail_class(self):
        return TailClass.gamma()

    def kernel_code(self):
        return (KIND_GAMMA_EXP, 0.0, 0.0, 0.0)

    def to_json(self):
        return {"family": self.family}


@dataclass(frozen=True)
class RapidNonGamma(MixingLaw):
    """f(x) = exp(2x - cos x): rapidly varying but outside class Gamma."""

    family = "rapid_non_gamma"

    def _ln_tail(self, d):
        with np.errstate(over="ignore"):
            return -np.exp(_rapid_h(np.asarray(d, dtype=float)))

    def _dln_tail(self, d):
        x = 1.0 / np.asarray(d, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.exp(2.0 * x - np.cos(x)) * (x * (2.0 + np.sin(x)) - 1.0)

    def _log_density(self, d):
        d = np.asarray(d, dtype=float)
        x = 1.0 / d
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return self._ln_tail(d) + 2.0 * x - np.cos(x) + np.log(x * (2.0 + np.sin(x)) - 1.0)

    def _invert(self, u):
        v = 1.0 - np.asarray(u, dtype=float)
        top = math.exp(-math.exp(2.0 - math.cos(1.0)))
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = np.log(-np.log(v))
        d = _bisect_decreasing(_rapid_h, np.where(v > top, 4.0, tau))
        return np.where(v > top, 0.0, 1.0 - d)

    def atoms(self):
        return ((0.0, -math.expm1(-math.exp(2.0 - math.cos(1.0)))),)

    @property
    def tail_class(self):
        return TailClass.rapid_non_gamma()

    def kernel_code(self):
        return (KIND_RAPID_NON_GAMMA, 0.0, 0.0, 0.0)

    def to_json(self):
        return {"family": self.family}


@dataclass(frozen=True)
class AtomAtOne(MixingLaw):
    """M = 1 with probability p, otherwise a draw from ``base``."""

    p: float = 0.5
    base: MixingLaw = PowerUniform(1.0)
    family = "atom_at_one"

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise DomainError(f"atom_at_one needs p in (0, 1), got {self.p}")
        if not isinstance(self.base, MixingLaw):
            raise DomainError("atom_at_one base must be a mixing law")

    def _ln_tail(self, d):
        return np.logaddexp(math.log(self.p), math.log1p(-self.p) + self.base._ln_tail(d))

    def _dln_tail(self, d):
        lb = self.base._ln_tail(d)
        return np.exp(math.log1p(-self.p) + lb - self._ln_tail(d)) * self.base._dln_tail(d)

    def _log_density(self, d):
        return math.log1p(-self.p) + self.base._log_density(d)

    def _invert(self, u):
        u = np.asarray(u, dtype=float)
        rest = np.minimum((u - self.p) / (1.0 - self.p), _ONE_MINUS_ULP)
        return np.where(u < self.p, 1.0, self.base._invert(np.maximum(rest, 0.0)))

    def atoms(self):
        return ((1.0, self.p),) + tuple((loc, (1.0 - self.p) * m) for loc, m in self.base.atoms())

    @property
    def tail_class(self):
        return TailClass.atom_at_one(self.p)

    def mean(self):
        return self.p + (1.0 - self.p) * self.base.mean()

    def kernel_code(self):
        kind, a, b, p_base = self.base.kernel_code()
        # nested atoms at one collapse into one atom
        return (kind, a, b, 1.0 - (1.0 - self.p) * (1.0 - p_base))

    def to_json(self):
        return {"family": self.family, "p": self.p, "base": self.base.to_json()}


@dataclass(frozen=True)
class Degenerate(MixingLaw):
    """M = m with probability one. A test fixture: it has no tail class."""

    m: float = 0.0
    family = "degenerate"

    def __post_init__(self):
        if not 0 <= self.m <= 1:
            raise DomainError(f"degenerate needs m in [0, 1], got {self.m}")

    def _ln_tail(self, d):
        return np.where(self.m > 1.0 - np.asarray(d, dtype=float), 0.0, -np.inf)

    def _dln_tail(self, d):
        return np.zeros_like(np.asarray(d, dtype=float))

    def _log_density(self, d):
        return np.full_like(np.asarray(d, dtype=float), -np.inf)

    def _invert(self, u):
        return np.full_like(np.asarray(u, dtype=float), self.m)

    def atoms(self):
        return ((self.m, 1.0),)

    def mean(self):
        return self.m

    def kernel_code(self):
        return (KIND_DEGENERATE, self.m, 0.0, 0.0)

    def to_json(self):
        return {"family": self.family, "m": self.m}


_FAMILIES = {
    "power_uniform": (PowerUniform, ("alpha",)),
    "weibull_at_one": (WeibullAtOne, ("c", "alpha")),
    "log_power": (LogPower, ("beta", "eta")),
    "gamma_exp": (GammaExp, ()),
    "rapid_non_gamma": (RapidNonGamma, ()),
    "atom_at_one": (AtomAtOne, ("p", "base")),
    "degenerate": (Degenerate, ("m",)),
}

FAMILY_NAMES = tuple(_FAMILIES)


def family_params(name: str) -> tuple:
    """Parameter keys a family's JSON spec must carry."""
    try:
        return _FAMILIES[name][1]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; expected one of {FAMILY_NAMES}")


def law_from_json(obj: dict) -> MixingLaw:
    """Build a law from ``{"family": ..., <params>}``; unknown keys are ignored."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise DomainError("law spec must be an object with a 'family' key")
    try:
        cls, keys = _FAMILIES[obj["family"]]
    except KeyError:
        raise DomainError(f"unknown family {obj['family']!r}; expected one of {FAMILY_NAMES}")
    kwargs = {}
    for key in keys:
        if key not in obj:
            raise DomainError(f"family {obj['family']!r} needs key {key!r}")
        if key == "base":
            kwargs[key] = law_from_json(obj[key])
        else:
            kwargs[key] = float(obj[key])
    return cls(**kwargs)


def _as_out(arr, scalar_in: bool):
    return float(arr) if scalar_in else arr


def ln_tail_at(law: MixingLaw, delta):
    """``ln P(M > 1 - delta)`` in closed form; delta must lie in (0, 1]."""
    d = np.asarray(delta, dtype=float)
    if np.any(~((d > 0) & (d <= 1))):
        raise DomainError(f"delta must lie in (0, 1], got {delta}")
    return _as_out(law._ln_tail(d), d.ndim == 0)


def f_value(law: MixingLaw, x):
    """``f(x) = -x ln P(M > 1 - 1/x)`` for ``x >= 1``."""
    if isinstance(x, (float, int)):
        # scalar fast path: conjugation calls this in tight loops
        if not x >= 1:
            raise DomainError(f"f is defined for x >= 1, got {x}")
        return float(-x * law._ln_tail(1.0 / x))
    xs = np.asarray(x, dtype=float)
    if np.any(~(xs >= 1)):
        raise DomainError(f"f is defined for x >= 1, got {x}")
    return _as_out(-xs * law._ln_tail(1.0 / xs), xs.ndim == 0)


def f_derivative(law: MixingLaw, x):
    """Closed-form ``f'(x) = -L(1/x) + L'(1/x) / x``."""
    xs = np.asarray(x, dtype=float)
    if np.any(~(xs >= 1)):
        raise DomainError(f"f is defined for x >= 1, got {x}")
    d = 1.0 / xs
    return _as_out(-law._ln_tail(d) + d * law._dln_tail(d), xs.ndim == 0)


def sample(law: MixingLaw, rng: np.random.Generator, size=None):
    """Exact inversion draws of M using uniforms from ``rng``."""
    u = rng.random(size)
    return _as_out(law._invert(np.asarray(u)), size is None)
