import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perptail.errors import DomainError
from perptail.regvar import (TailClass, gamma_aux_check, argument_ratio_limit, log_grid_pairs,
                             potter_verify, rv_index_estimate)
from perptail.tail_models import (GammaExp, PowerUniform, RapidNonGamma, WeibullAtOne,
                                  f_derivative, f_value)


def fv(law):
    return lambda x: f_value(law, x)


def test_rv_index_examples():
    assert rv_index_estimate(lambda x: x ** 3, 7.0, 2.0) == pytest.approx(3.0, rel=1e-14)
    assert rv_index_estimate(fv(WeibullAtOne(1.0, 2.0)), 100.0, 2.0) == pytest.approx(2.0, rel=1e-13)
    assert rv_index_estimate(fv(GammaExp()), 20.0, 2.0) == pytest.approx(20 / math.log(2), rel=1e-12)


def test_rv_index_increasing_on_exp():
    vals = [rv_index_estimate(math.exp, x, 2.0) for x in (1.0, 2.0, 5.0, 10.0, 50.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@settings(max_examples=80, deadline=None)
@given(r=st.floats(0.1, 8), x=st.floats(0.5, 1e4), lam=st.floats(1.01, 50))
def test_rv_index_exact_on_powers(r, x, lam):
    assert rv_index_estimate(lambda t: t ** r, x, lam) == pytest.approx(r, rel=1e-9)


def test_regvar_cross_check_tolerance():
    # declared RegVar(r*) families: index at x = 1e3, lam = 2 within 0.05
    for law in (WeibullAtOne(1.0, 2.0), WeibullAtOne(0.3, 1.5), WeibullAtOne(4.0, 3.5)):
        est = rv_index_estimate(fv(law), 1e3, 2.0)
        assert abs(est - law.tail_class.r_star) < 0.05


def test_regvar1_index_slowly_approaches_one():
    # x ln x: the one-dilation index is 1 + ln 2 / ln(2x) style, above 1 and falling
    f = fv(PowerUniform(1.0))
    vals = [rv_index_estimate(f, x, 2.0) for x in (1e2, 1e3, 1e5)]
    assert all(v > 1 for v in vals)
    assert vals[0] > vals[1] > vals[2]


def test_potter_examples():
    assert potter_verify(lambda x: x * x, 2.0, 1.1, 0.1, 1.0, log_grid_pairs(1.5, 1e6, 20))
    res = potter_verify(fv(PowerUniform(1.0)), 1.0, 2.0, 0.5, 10.0, log_grid_pairs(11.0, 1e6, 20))
    assert res and res.checked == 190
    bad = potter_verify(math.exp, 1.0, 2.0, 0.5, 10.0, [(20.0, 40.0)])
    assert not bad and bad.violation == (20.0, 40.0)


def test_potter_errors():
    with pytest.raises(DomainError):
        potter_verify(math.exp, 1.0, 2.0, 0.5, 10.0, [(5.0, 40.0)])
    with pytest.raises(DomainError):
        potter_verify(math.exp, 1.0, 1.0, 0.5, 10.0, [(20.0, 40.0)])
    with pytest.raises(DomainError):
        potter_verify(math.exp, 1.0, 2.0, 1.5, 10.0, [(20.0, 40.0)])
    with pytest.raises(DomainError):
        potter_verify(math.exp, 1.0, 2.0, 0.5, 10.0, [])


def test_gamma_aux_examples():
    assert gamma_aux_check(math.exp, math.exp, 10.0, (-1.0, 0.0, 1.0)) < 1e-15
    g = GammaExp()
    assert gamma_aux_check(fv(g), lambda x: f_derivative(g, x), 30.0, (-1.0, 1.0)) < 1e-12


def test_gamma_aux_rapid_non_gamma_does_not_vanish():
    r = RapidNonGamma()
    errs = [gamma_aux_check(fv(r), lambda x: f_derivative(r, x), x, (1.0,))
            for x in (10.0, 10.0 + math.pi)]
    assert max(errs) > 0.05
    # periodic in x: the same error pattern recurs one period later
    later = [gamma_aux_check(fv(r), lambda x: f_derivative(r, x), x + 20 * math.pi, (1.0,))
             for x in (10.0, 10.0 + math.pi)]
    assert max(later) > 0.05


def test_argument_ratio_instance():
    a, b = argument_ratio_limit(lambda x: x * x, lambda x: x / 3.0, 2.0, 123.0)
    assert a == pytest.approx(3.0) and b == pytest.approx(3.0, rel=1e-14)


def test_tail_class_invariants():
    assert str(TailClass.regvar(2.0)) == "RegVar(2)"
    assert str(TailClass.gamma()) == "Gamma"
    with pytest.raises(DomainError):
        TailClass.regvar(1.0)
    with pytest.raises(DomainError):
        TailClass.atom_at_one(1.0)
    with pytest.raises(DomainError):
        TailClass("nonsense")


def test_rv_index_errors():
    with pytest.raises(DomainError):
        rv_index_estimate(math.exp, 1.0, 1.0)
    with pytest.raises(DomainError):
        rv_index_estimate(lambda x: -x, 1.0, 2.0)
