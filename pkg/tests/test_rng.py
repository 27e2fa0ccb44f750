import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from perptail.rng import DrawStream, draw_keys, mix64, stream_key, term_uniforms


def test_mix64_reference_value():
    # SplitMix64 finaliser of 0x9E3779B97F4A7C15, the generator's first output from state 0
    assert int(mix64(np.uint64(0x9E3779B97F4A7C15))) == 0xE220A8397B1DCDAF


def test_uniforms_in_unit_interval_and_uniform():
    keys = draw_keys(stream_key(1, 0), 0, 200_000)
    u = term_uniforms(keys, 1)
    assert u.min() >= 0 and u.max() < 1
    counts, _ = np.histogram(u, bins=20, range=(0, 1))
    expected = u.size / 20
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < 45  # 19 dof, p ~ 1e-3


def test_terms_are_uncorrelated():
    keys = draw_keys(stream_key(2, 0), 0, 100_000)
    a, b = term_uniforms(keys, 1), term_uniforms(keys, 2)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.02


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), first=st.integers(0, 10**6), count=st.integers(1, 50))
def test_draw_keys_are_positional(seed, first, count):
    key = stream_key(seed, 0)
    whole = draw_keys(key, 0, first + count)
    np.testing.assert_array_equal(whole[first:], draw_keys(key, first, count))


def test_streams_differ():
    assert stream_key(0, 0) != stream_key(0, 1) != stream_key(1, 0)
    s = DrawStream(5, 2)
    assert s.key == stream_key(5, 2)
    assert "seed=5" in repr(s)
