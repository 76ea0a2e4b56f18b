import os
import subprocess
import sys

import numpy as np

from cyclides import kernels


def _random_terms(rng, nterms=14, maxdeg=6):
    powers = []
    for _ in range(nterms):
        i = rng.integers(0, maxdeg + 1)
        j = rng.integers(0, maxdeg + 1 - i)
        k = rng.integers(0, maxdeg + 1 - i - j)
        powers.append((i, j, k))
    coefs = rng.uniform(-3, 3, size=nterms)
    return coefs, np.array(powers, dtype=np.int64)


def test_eval_poly_backends_agree():
    rng = np.random.default_rng(0)
    coefs, powers = _random_terms(rng)
    pts = rng.uniform(-2, 2, size=(200, 3))
    jit = kernels.eval_poly(coefs, powers, pts)
    ref = kernels.eval_poly_numpy(coefs, powers, pts)
    np.testing.assert_allclose(jit, ref, rtol=1e-12, atol=1e-12)


def test_eval_poly_abs_backends_agree():
    rng = np.random.default_rng(1)
    coefs, powers = _random_terms(rng)
    pts = rng.uniform(-2, 2, size=(200, 3))
    jit = kernels.eval_poly_abs(coefs, powers, pts)
    ref = kernels.eval_poly_abs_numpy(coefs, powers, pts)
    np.testing.assert_allclose(jit, ref, rtol=1e-12)
    assert np.all(jit >= 0)


def test_eval_grid2_backends_agree():
    rng = np.random.default_rng(2)
    cmat = rng.uniform(-1, 1, size=(5, 5))
    us = np.linspace(-2, 2, 64)
    vs = np.linspace(-1, 3, 48)
    jit = kernels.eval_grid2(cmat, us, vs)
    ref = kernels.eval_grid2_numpy(cmat, us, vs)
    assert jit.shape == (64, 48)
    np.testing.assert_allclose(jit, ref, rtol=1e-11, atol=1e-11)


def test_empty_polynomial():
    coefs = np.zeros(0)
    powers = np.zeros((0, 3), dtype=np.int64)
    pts = np.zeros((5, 3))
    np.testing.assert_allclose(kernels.eval_poly(coefs, powers, pts), 0.0)
    np.testing.assert_allclose(kernels.eval_poly_numpy(coefs, powers, pts), 0.0)


def test_pure_numpy_env_flag_selects_fallback():
    code = (
        "import cyclides.kernels as k; "
        "print(k.USING_NUMBA); "
        "import numpy as np; "
        "c = np.array([2.0]); p = np.array([[1, 1, 0]], dtype=np.int64); "
        "pts = np.array([[3.0, 4.0, 0.0]]); "
        "print(float(k.eval_poly(c, p, pts)[0]))"
    )
    env = dict(os.environ, CYCLIDES_PURE_NUMPY="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    flag, value = out.stdout.split()
    assert flag == "False"
    assert float(value) == 24.0
