import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perptail.errors import DomainError
from perptail.legendre import (MAX_EXPANSIONS, chernoff_log_tail_bound, conjugate, evaluate_I_psi,
                               log_I_psi, scaled_conjugate)
from perptail.tail_models import Degenerate, PowerUniform, WeibullAtOne, f_value

CONVEX = {
    "z^2": lambda z: z * z,
    "e^z": math.exp,
    "z^2 ln(1+z)": lambda z: z * z * math.log1p(z),
}


def grid_conjugate(f_np, x, step=1e-5, z_max=10.0):
    z = np.arange(0, int(round(z_max / step)) + 1) * step
    return float(np.max(z * x - f_np(z)))


def test_examples():
    r = conjugate(lambda z: z * z, 2.0)
    assert r.value == pytest.approx(1.0, abs=1e-12) and r.argmax_z == pytest.approx(1.0, abs=1e-6)
    assert not r.saturated
    r = conjugate(math.exp, math.e ** 2)
    assert r.value == pytest.approx(math.e ** 2, rel=1e-12) and r.argmax_z == pytest.approx(2.0, abs=1e-6)
    r = conjugate(lambda z: z, 2.0)
    assert r.saturated
    assert r.value == pytest.approx(10.0 * 2 ** MAX_EXPANSIONS, rel=1e-6)


def test_examples_against_grid_oracle():
    assert conjugate(lambda z: z * z, 2.0).value == pytest.approx(grid_conjugate(lambda z: z * z, 2.0), abs=1e-9)
    assert conjugate(math.exp, math.e ** 2).value == pytest.approx(grid_conjugate(np.exp, math.e ** 2), abs=1e-8)


def test_value_is_achieved():
    for f in CONVEX.values():
        for x in (0.3, 2.0, 7.0):
            r = conjugate(f, x)
            assert r.value >= r.argmax_z * x - f(r.argmax_z) - 1e-9


def test_chernoff_examples():
    b, sat = chernoff_log_tail_bound(lambda z: z * z / 2, 3.0)
    assert b == pytest.approx(-4.5, rel=1e-10) and not sat
    b, sat = chernoff_log_tail_bound(lambda z: z * z / 2, 0.0)
    assert b == pytest.approx(0.0, abs=1e-12)


def test_scaling_identity():
    # z = B w turns sup_z [z x - B f*(z/B)] into B f**(x), which is B f(x) for convex f
    for name, f in CONVEX.items():
        for B in (0.5, 2.0):
            fB = scaled_conjugate(f, B)
            for x in (1.0, 4.0):
                got = conjugate(fB, x, z_max=1e9).value
                assert got == pytest.approx(B * f(x), rel=1e-6), (name, B, x)


def test_scaled_function_conjugate():
    # the companion form used to build the mgf envelope: (B f)*(x) = B f*(x/B)
    for name, f in CONVEX.items():
        for B in (0.5, 1.5, 3.0):
            for x in (0.7, 4.0, 12.0):
                lhs = conjugate(lambda z: B * f(z), x).value
                rhs = B * conjugate(f, x / B).value
                assert lhs == pytest.approx(rhs, rel=1e-6, abs=1e-9), (name, B, x)


def test_scaled_chernoff_example():
    # psi = 2 psi0(. / 2) with psi0 = (z^2)* = z^2/4, so psi(z) = z^2/8 and psi*(10) = 2 * 10^2
    psi = scaled_conjugate(lambda z: z * z, 2.0)
    b, sat = chernoff_log_tail_bound(psi, 10.0, z_max=100.0)
    assert b == pytest.approx(-200.0, rel=1e-8) and not sat


def test_order_reversal():
    f = lambda z: z * z
    g = lambda z: z * z + 0.1 * z ** 3
    for x in np.linspace(0.1, 20, 25):
        assert conjugate(f, x).value >= conjugate(g, x).value - 1e-12


def test_superlinearity():
    for f in CONVEX.values():
        xs = np.linspace(0.5, 30, 30)
        ratios = [conjugate(f, x).value / x for x in xs]
        assert all(b >= a - 1e-9 for a, b in zip(ratios, ratios[1:]))


@settings(max_examples=200, deadline=None)
@given(x=st.floats(1e-3, 10), z=st.floats(1e-3, 10), which=st.sampled_from(sorted(CONVEX)))
def test_young_inequality(x, z, which):
    f = CONVEX[which]
    assert f(z) + conjugate(f, x).value >= z * x - 1e-9


def test_conjugate_errors():
    with pytest.raises(DomainError):
        conjugate(math.exp, 1.0, tol=0)
    with pytest.raises(DomainError):
        conjugate(math.exp, 1.0, z_max=-1)
    with pytest.raises(DomainError):
        scaled_conjugate(math.exp, 0.0)


def test_I_psi_point_mass_at_zero():
    assert evaluate_I_psi(Degenerate(0.0), lambda z: z * z, 2.0) == pytest.approx(math.exp(-2), rel=1e-12)


def test_I_psi_uniform():
    got = evaluate_I_psi(PowerUniform(1.0), lambda z: 2 * z, 1.0)
    assert got == pytest.approx(math.exp(-1) * (math.e ** 2 - 1) / 2, rel=1e-8)


def test_I_psi_uniform_closed_form_in_z():
    for z in (0.5, 3.0, 10.0):
        want = math.exp(z) * math.exp(-2 * z) * (math.exp(2 * z) - 1) / (2 * z)
        assert evaluate_I_psi(PowerUniform(1.0), lambda t: 2 * t, z) == pytest.approx(want, rel=1e-8)


def test_I_psi_weibull_decay_and_growth():
    law = WeibullAtOne(1.0, 2.0)
    f = lambda z: f_value(law, max(z, 1.0))
    low = [log_I_psi(law, scaled_conjugate(f, 1.5), z) for z in (50.0, 100.0)]
    assert low[1] < low[0] < 0
    assert log_I_psi(law, scaled_conjugate(f, 3.0), 100.0) > 0
