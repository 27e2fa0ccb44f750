import os
import runpy
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from perptail import backend
from perptail.rng import stream_key
from perptail.simulate import estimate_tail
from perptail.tail_models import (AtomAtOne, Degenerate, GammaExp, LogPower, PowerUniform,
                                  RapidNonGamma, WeibullAtOne)

LAWS = [Degenerate(0.0), Degenerate(0.5), PowerUniform(1.0), PowerUniform(0.3), WeibullAtOne(1.0, 2.0),
        WeibullAtOne(3.0, 1.2), LogPower(1.0, 1.5), LogPower(0.5, 0.7), GammaExp(), RapidNonGamma(),
        AtomAtOne(0.7, PowerUniform(1.0)), AtomAtOne(0.4, GammaExp()),
        AtomAtOne(0.5, AtomAtOne(0.2, WeibullAtOne(1.0, 2.0)))]

needs_ext = pytest.mark.skipif("cython" not in backend.available_backends(),
                               reason="compiled kernel not built")


def test_python_backend_always_available():
    assert "python" in backend.available_backends()
    assert backend.BACKEND in backend.available_backends()


def test_unknown_backend():
    with pytest.raises(ValueError):
        backend.simulate_block(PowerUniform(1.0), 1.0, 1e-9, 10, 0, 0, 1, "fortran")


@needs_ext
@pytest.mark.parametrize("law", LAWS, ids=str)
def test_backends_agree(law):
    key = stream_key(77, 2)
    a = backend.simulate_block(law, 1.5, 1e-9, 100_000, key, 10, 20_000, "cython")
    b = backend.simulate_block(law, 1.5, 1e-9, 100_000, key, 10, 20_000, "python")
    np.testing.assert_array_equal(a[2], b[2])
    np.testing.assert_allclose(a[0], b[0], rtol=1e-10, atol=0)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-9, atol=1e-300)


@needs_ext
def test_backends_give_identical_estimates():
    law = WeibullAtOne(1.0, 2.0)
    xs = [1.5, 2.0, 3.0]
    a = estimate_tail(law, 1.0, xs, 50_000, seed=1, workers=2, backend="cython")
    b = estimate_tail(law, 1.0, xs, 50_000, seed=1, workers=2, backend="python")
    assert [e.hits for e in a] == [e.hits for e in b]


def test_python_kernel_chunking():
    # blocks larger than one chunk are stitched without changing the draws
    from perptail import _kernel_py
    law = PowerUniform(1.0)
    key = stream_key(3, 0)
    whole = _kernel_py.simulate_block(law, 1.0, 1e-6, 1000, key, 0, _kernel_py.CHUNK + 7)
    tail = _kernel_py.simulate_block(law, 1.0, 1e-6, 1000, key, _kernel_py.CHUNK, 7)
    np.testing.assert_array_equal(whole[0][-7:], tail[0])


def test_env_forces_python_backend():
    code = "from perptail import backend; print(backend.BACKEND, backend.available_backends())"
    env = {**os.environ, "PERPTAIL_BACKEND": "python"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python ('python',)"


def test_benchmark_script_runs(capsys):
    bench = runpy.run_path(str(Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"))
    bench["main"](["--samples", "200", "--repeat", "1"])
    assert "GammaExp()" in capsys.readouterr().out
