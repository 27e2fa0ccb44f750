"""Invariant suites behind ``perptail verify``.

Each suite returns a list of :class:`Check`. The suites are quick (a few
seconds in total) and reach every module through its public functions, so
a wrong constant or a broken kernel shows up as a failed line.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import asymptotics, backend, bounds, legendre, regvar, simulate
from .regvar import TailClass
from .rng import stream_key
from .tail_models import (AtomAtOne, GammaExp, LogPower, PowerUniform,
                          RapidNonGamma, WeibullAtOne, f_derivative, f_value, ln_tail_at)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "ok", bool(self.ok))


def catalog() -> list:
    return [PowerUniform(1.0), PowerUniform(2.5), WeibullAtOne(1.0, 2.0), WeibullAtOne(0.5, 3.0),
            LogPower(1.0, 1.5), GammaExp(), RapidNonGamma(), AtomAtOne(0.7, PowerUniform(1.0))]


def _close(a, b, rtol=1e-9, atol=0.0):
    return abs(a - b) <= atol + rtol * abs(b)


def suite_tail_models(laws) -> list:
    out = []
    deltas = np.geomspace(1e-2, 1.0, 200)
    for law in laws:
        L = ln_tail_at(law, deltas)
        out.append(Check("tail_models", f"{law}: log-tail nondecreasing and <= 0",
                         bool(np.all(np.diff(L) >= -1e-12) and np.all(L <= 0))))
        xs = np.array([2.0, 10.0, 50.0])
        ident = np.allclose(f_value(law, xs), -xs * ln_tail_at(law, 1.0 / xs), rtol=1e-12)
        out.append(Check("tail_models", f"{law}: f(x) = -x ln_tail(1/x)", bool(ident)))
        worst = 0.0
        for x in xs:
            h = 1e-5 * x
            fd = (f_value(law, x + h) - f_value(law, x - h)) / (2 * h)
            worst = max(worst, abs(fd - f_derivative(law, x)) / abs(f_derivative(law, x)))
        out.append(Check("tail_models", f"{law}: f' matches central differences",
                         worst < 1e-6, f"max rel err {worst:.2e}"))
    examples = [
        ("ln_tail PowerUniform(1) at 0.5", ln_tail_at(PowerUniform(1.0), 0.5), math.log(0.5)),
        ("ln_tail WeibullAtOne(1,2) at 0.05", ln_tail_at(WeibullAtOne(1.0, 2.0), 0.05), -20.0),
        ("f WeibullAtOne(1,2) at 10", f_value(WeibullAtOne(1.0, 2.0), 10.0), 100.0),
        ("f GammaExp at 3", f_value(GammaExp(), 3.0), math.exp(3.0)),
        ("f PowerUniform(1) at 10", f_value(PowerUniform(1.0), 10.0), 10 * math.log(10.0)),
        ("f' PowerUniform(1) at 10", f_derivative(PowerUniform(1.0), 10.0), math.log(10.0) + 1),
    ]
    out += [Check("tail_models", n, _close(got, want), f"{got!r}") for n, got, want in examples]
    return out


def suite_regvar(laws) -> list:
    out = []
    for law in laws:
        tc = law.tail_class
        if tc.kind == regvar.REGVAR:
            est = regvar.rv_index_estimate(lambda x: f_value(law, x), 1e3, 2.0)
            out.append(Check("regvar", f"{law}: index near {tc.r_star}",
                             abs(est - tc.r_star) < 0.05, f"estimate {est:.4f}"))
        elif tc.kind == regvar.GAMMA:
            err = regvar.gamma_aux_check(lambda x: f_value(law, x),
                                         lambda x: f_derivative(law, x), 30.0, (-1.0, 1.0))
            out.append(Check("regvar", f"{law}: Gamma auxiliary check", err < 0.02, f"error {err:.2e}"))
    a, b = regvar.argument_ratio_limit(lambda x: x * x, lambda x: x / 3.0, 2.0, 50.0)
    out.append(Check("regvar", "x/g(x) = L^(1/rho) on f=x^2, g=x/3", _close(a, b, 1e-12)))
    pw = regvar.rv_index_estimate(lambda x: x ** 2.5, 7.0, 3.0)
    out.append(Check("regvar", "index of x^2.5 is exact", _close(pw, 2.5, 1e-12)))
    pot = regvar.potter_verify(lambda x: x * x * math.log(x), 2.0, 2.0, 0.5, 2.0,
                               regvar.log_grid_pairs(3.0, 1e4, 15))
    out.append(Check("regvar", "Potter bounds for x^2 ln x", bool(pot)))
    g0 = regvar.gamma_aux_check(math.exp, math.exp, 20.0, (-2.0, -1.0, 0.5, 2.0))
    out.append(Check("regvar", "Gamma auxiliary check on e^x is exact", g0 < 1e-12))
    return out


def suite_legendre() -> list:
    out = []
    tests = {
        "z^2": lambda z: z * z,
        "e^z": math.exp,
        "z^2 ln(1+z)": lambda z: z * z * math.log1p(z),
    }
    for name, f in tests.items():
        fstar = lambda x: legendre.conjugate(f, x).value
        worst = 0.0
        for x in (1.0, 5.0, 20.0):
            ff = legendre.conjugate(fstar, x, z_max=1e9).value
            worst = max(worst, abs(ff - f(x)) / f(x))
        out.append(Check("legendre", f"biconjugation of {name}", worst < 1e-6, f"max rel err {worst:.2e}"))
    rnd = random.Random(0)
    f = lambda z: z * z * math.log1p(z)
    bad = 0
    for _ in range(500):
        x, z = rnd.uniform(1e-3, 10), rnd.uniform(1e-3, 10)
        if f(z) + legendre.conjugate(f, x).value < z * x - 1e-9:
            bad += 1
    out.append(Check("legendre", "Young's inequality on 500 pairs", bad == 0, f"{bad} violations"))
    bound, sat = legendre.chernoff_log_tail_bound(lambda z: z * z / 2, 3.0)
    out.append(Check("legendre", "Chernoff bound for z^2/2 at 3", _close(bound, -4.5, 1e-8) and not sat))
    return out


def suite_asymptotics(constant: Optional[Callable[[TailClass], float]] = None) -> list:
    C = constant or asymptotics.theorem_constant
    out = [
        Check("asymptotics", "C(RegVar(2)) = 2", _close(C(TailClass.regvar(2.0)), 2.0, 1e-12)),
        Check("asymptotics", "C(Gamma) = e", _close(C(TailClass.gamma()), math.e, 1e-12)),
        Check("asymptotics", "C(RegVar1Convex) = 1", _close(C(TailClass.regvar1_convex()), 1.0, 1e-12)),
        Check("asymptotics", "endpoint r* -> 1", abs(C(TailClass.regvar(1.001)) - 1.0) < 0.01),
        Check("asymptotics", "endpoint r* -> infinity", abs(C(TailClass.regvar(200.0)) - math.e) < 0.01),
    ]
    grid = (1.001, 1.01, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0, 200.0)
    vals = [C(TailClass.regvar(r)) for r in grid]
    out.append(Check("asymptotics", "C(r*) strictly increasing between the endpoints",
                     all(b > a for a, b in zip(vals, vals[1:])) and 1.0 < vals[0] and vals[-1] < math.e))
    pred = asymptotics.predict_log_tail(AtomAtOne(0.5, PowerUniform(1.0)), 2.0, 10.0).value
    out.append(Check("asymptotics", "atom prediction (x/q) ln p", _close(pred, 5 * math.log(0.5), 1e-12)))
    return out


def suite_bounds() -> list:
    law = WeibullAtOne(1.0, 2.0)
    out = []
    cert = bounds.path_certificate(law, 1.0, 10.0, bounds.CaseI(0.5))
    out.append(Check("bounds", "Case I certificate at x=10", _close(cert.ln_lower, -189.0, 1e-9),
                     f"{cert.ln_lower!r}"))
    cert = bounds.path_certificate(law, 1.0, 200.0)
    ratio = -cert.ln_lower / f_value(law, cert.xs[-1])
    out.append(Check("bounds", "Case I ratio in [1.98, 2.0] at 200", 1.98 <= ratio <= 2.0, f"{ratio:.6f}"))
    cert = bounds.path_certificate(GammaExp(), 1.0, 30.0)
    rp = cert.ratio_path(GammaExp())
    out.append(Check("bounds", "Case II ratio increasing, within 15% of e",
                     all(b > a for a, b in zip(rp, rp[1:])) and abs(rp[-1] / math.e - 1) < 0.15,
                     f"final {rp[-1]:.4f}"))
    s = bounds.hitczenko_sandwich(law, 1.0, 10.0)
    out.append(Check("bounds", "sandwich for WeibullAtOne(1,2) at 10",
                     _close(s.ln_lower, -400 * math.log(2.0), 1e-9)
                     and _close(s.ln_upper, -200.0, 1e-9)))
    out.append(Check("bounds", "atom bound ceil(x/q) ln p",
                     _close(bounds.atom_bounds(0.5, 1.0, 10.0), 10 * math.log(0.5), 1e-12)))
    return out


def suite_simulate() -> list:
    out = []
    law = PowerUniform(1.0)
    ref = simulate.exact_small_n_oracle(law, 1.0, 2, 2.25)
    out.append(Check("simulate", "small-n oracle for PowerUniform(1), n=2", _close(ref, 0.1624955, 1e-6),
                     f"{ref:.7f}"))
    n = 100_000
    v, _, _ = simulate.simulate_draws(law, 1.0, n, seed=11, max_terms=3)
    p = float(np.mean(v > 2.25))
    sigma = math.sqrt(ref * (1 - ref) / n)
    out.append(Check("simulate", "truncated MC agrees with the oracle within 4 sigma",
                     abs(p - ref) < 4 * sigma, f"p_hat {p:.5f}"))
    lo, hi = simulate.wilson_interval(0, 1000)
    out.append(Check("simulate", "Wilson interval at zero hits", lo == 0.0 and 0 < hi < 0.01))
    if len(backend.available_backends()) > 1:
        key = stream_key(3, 0)
        for law in catalog():
            a = backend.simulate_block(law, 1.0, 1e-9, 10_000, key, 0, 2000, "cython")
            b = backend.simulate_block(law, 1.0, 1e-9, 10_000, key, 0, 2000, "python")
            ok = np.array_equal(a[2], b[2]) and np.allclose(a[0], b[0], rtol=1e-9, atol=0)
            out.append(Check("simulate", f"{law}: compiled and numpy kernels agree", bool(ok)))
    return out


def run_suites(extra_laws=(), constant=None) -> list:
    laws = catalog() + list(extra_laws)
    return (suite_tail_models(laws) + suite_regvar(laws) + suite_legendre()
            + suite_asymptotics(constant) + suite_bounds() + suite_simulate())


def summarize(checks) -> dict:
    """``{suite: (passed, total)}`` in first-seen order."""
    out = {}
    for c in checks:
        p, t = out.get(c.suite, (0, 0))
        out[c.suite] = (p + c.ok, t + 1)
    return out
