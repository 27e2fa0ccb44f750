import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perptail.asymptotics import (RAPID_BRACKET, conjugate_index, normalizer_value,
                                  predict_log_tail, tail_prediction, theorem_constant)
from perptail.errors import DomainError
from perptail.regvar import TailClass
from perptail.tail_models import (AtomAtOne, Degenerate, GammaExp, LogPower, PowerUniform,
                                  RapidNonGamma, WeibullAtOne, f_value)


def test_constants():
    assert theorem_constant(TailClass.regvar(2.0)) == 2.0
    assert theorem_constant(TailClass.gamma()) == math.e
    assert theorem_constant(TailClass.regvar1_convex()) == 1.0
    assert theorem_constant(TailClass.regvar(3.0)) == pytest.approx(1.5 ** 2)


def test_conjugate_index():
    assert conjugate_index(2.0) == 2.0
    assert 1 / conjugate_index(3.0) + 1 / 3.0 == pytest.approx(1.0)
    with pytest.raises(DomainError):
        conjugate_index(1.0)


def test_endpoint_continuity():
    assert abs(theorem_constant(TailClass.regvar(1.001)) - 1) < 0.01
    assert abs(theorem_constant(TailClass.regvar(200.0)) - math.e) < 0.01


@settings(max_examples=100, deadline=None)
@given(a=st.floats(1.0001, 1e4), b=st.floats(1.0001, 1e4))
def test_constant_monotone_between_endpoints(a, b):
    lo, hi = sorted((a, b))
    c_lo, c_hi = theorem_constant(TailClass.regvar(lo)), theorem_constant(TailClass.regvar(hi))
    assert 1.0 <= c_lo <= c_hi + 1e-12 <= math.e + 1e-12


def test_no_constant_for_atom_or_rapid():
    with pytest.raises(DomainError):
        theorem_constant(TailClass.atom_at_one(0.5))
    with pytest.raises(DomainError):
        theorem_constant(TailClass.rapid_non_gamma())


def test_predict_examples():
    assert predict_log_tail(WeibullAtOne(1.0, 2.0), 1.0, 10.0).value == pytest.approx(-200.0)
    assert predict_log_tail(AtomAtOne(0.5, PowerUniform(1.0)), 2.0, 10.0).value == pytest.approx(-3.4657, abs=1e-4)
    assert predict_log_tail(GammaExp(), 1.0, 5.0).value == pytest.approx(-403.4288, abs=1e-4)


def test_predict_rapid_bracket():
    p = predict_log_tail(RapidNonGamma(), 1.0, 5.0)
    h = f_value(RapidNonGamma(), 5.0)
    assert p.value is None
    assert p.bracket == pytest.approx((-math.e ** 3 * h, -math.e ** -1 * h))
    assert p.bracket[0] < p.bracket[1] < 0


def test_prediction_scales_with_q():
    law = LogPower(1.0, 1.5)
    for q in (0.5, 2.0):
        assert predict_log_tail(law, q, 8.0).value == pytest.approx(-f_value(law, 8.0 / q))


def test_tail_prediction_bundle():
    tp = tail_prediction(WeibullAtOne(1.0, 3.0), 2.0)
    assert tp.constant_C == pytest.approx(2.25) and tp.normalizer == "f(x/q)"
    assert tp.predict_at(10.0).value == pytest.approx(-2.25 * 125)
    tp = tail_prediction(AtomAtOne(0.25, GammaExp()), 2.0)
    assert tp.constant_C == pytest.approx(-math.log(0.25) / 2) and tp.normalizer == "x"
    tp = tail_prediction(RapidNonGamma(), 1.0)
    assert tp.constant_C is None and tp.bracket == RAPID_BRACKET


def test_predictions_negative_and_decreasing():
    for law in (PowerUniform(1.0), WeibullAtOne(1.0, 2.0), LogPower(2.0, 1.2), GammaExp(),
                AtomAtOne(0.4, PowerUniform(2.0))):
        vals = [predict_log_tail(law, 1.0, x).value for x in np.geomspace(1.5, 40, 12)]
        assert all(v < 0 for v in vals)
        assert all(b < a for a, b in zip(vals, vals[1:]))


def test_normalizer():
    assert normalizer_value(AtomAtOne(0.5, PowerUniform(1.0)), 2.0, 10.0) == 10.0
    assert normalizer_value(WeibullAtOne(1.0, 2.0), 2.0, 10.0) == pytest.approx(25.0)


def test_errors():
    with pytest.raises(DomainError):
        predict_log_tail(GammaExp(), 0.0, 5.0)
    with pytest.raises(DomainError):
        predict_log_tail(GammaExp(), 2.0, 1.0)
    with pytest.raises(DomainError):
        predict_log_tail(Degenerate(0.5), 1.0, 5.0)
