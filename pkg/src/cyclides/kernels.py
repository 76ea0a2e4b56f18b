"""Hot numeric kernels: batch polynomial evaluation.

Every kernel exists in two interchangeable versions, a numba ``@njit``
one and a pure-numpy one.  Setting the environment variable
``CYCLIDES_PURE_NUMPY=1`` before import selects the numpy path; the
numpy path is also used automatically when numba is not installed.
``benchmarks/bench_kernels.py`` compares the two.

Kernel inputs are plain arrays so both backends share a signature:
a trivariate polynomial is ``(coefs, powers)`` with ``coefs`` shape
``(T,)`` and ``powers`` an int64 ``(T, 3)`` exponent table; a bivariate
one is a dense coefficient matrix ``cmat`` with ``cmat[i, j]`` the
coefficient of ``u^i v^j``.
"""

import os

import numpy as np

USING_NUMBA = False

if os.environ.get("CYCLIDES_PURE_NUMPY", "0") not in ("", "0"):
    _njit = None
else:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        _njit = None


def _eval_poly_np(coefs, powers, pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    n = pts.shape[0]
    if coefs.size == 0:
        return np.zeros(n)
    maxp = int(powers.max()) if powers.size else 0
    # per-axis power tables: pw[a][e] = pts[:, a] ** e
    pw = []
    for a in range(3):
        col = [np.ones(n)]
        for _ in range(maxp):
            col.append(col[-1] * pts[:, a])
        pw.append(col)
    acc = np.zeros(n)
    for c, (i, j, k) in zip(coefs, powers):
        acc += c * pw[0][i] * pw[1][j] * pw[2][k]
    return acc


def _eval_poly_abs_np(coefs, powers, pts):
    pts = np.abs(np.atleast_2d(np.asarray(pts, dtype=np.float64)))
    return _eval_poly_np(np.abs(coefs), powers, pts)


def _eval_grid2_np(cmat, us, vs):
    # F[i, j] = sum cmat[a, b] us[i]^a vs[j]^b
    U, V = np.meshgrid(us, vs, indexing="ij")
    return np.polynomial.polynomial.polyval2d(U, V, cmat)


if _njit is not None:
    USING_NUMBA = True

    @_njit(cache=True)
    def _eval_poly_nb(coefs, powers, pts):  # pragma: no cover - jit
        n = pts.shape[0]
        out = np.zeros(n)
        for p in range(n):
            x = pts[p, 0]
            y = pts[p, 1]
            z = pts[p, 2]
            acc = 0.0
            for t in range(coefs.shape[0]):
                term = coefs[t]
                for _ in range(powers[t, 0]):
                    term *= x
                for _ in range(powers[t, 1]):
                    term *= y
                for _ in range(powers[t, 2]):
                    term *= z
                acc += term
            out[p] = acc
        return out

    @_njit(cache=True)
    def _eval_poly_abs_nb(coefs, powers, pts):  # pragma: no cover - jit
        n = pts.shape[0]
        out = np.zeros(n)
        for p in range(n):
            x = abs(pts[p, 0])
            y = abs(pts[p, 1])
            z = abs(pts[p, 2])
            acc = 0.0
            for t in range(coefs.shape[0]):
                term = abs(coefs[t])
                for _ in range(powers[t, 0]):
                    term *= x
                for _ in range(powers[t, 1]):
                    term *= y
                for _ in range(powers[t, 2]):
                    term *= z
                acc += term
            out[p] = acc
        return out

    @_njit(cache=True)
    def _eval_grid2_nb(cmat, us, vs):  # pragma: no cover - jit
        du = cmat.shape[0]
        dv = cmat.shape[1]
        out = np.empty((us.shape[0], vs.shape[0]))
        for i in range(us.shape[0]):
            u = us[i]
            for j in range(vs.shape[0]):
                v = vs[j]
                # Horner in u of Horner-in-v rows
                acc = 0.0
                for a in range(du - 1, -1, -1):
                    row = 0.0
                    for b in range(dv - 1, -1, -1):
                        row = row * v + cmat[a, b]
                    acc = acc * u + row
                out[i, j] = acc
        return out

    def eval_poly(coefs, powers, pts):
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
        return _eval_poly_nb(
            np.ascontiguousarray(coefs, dtype=np.float64),
            np.ascontiguousarray(powers, dtype=np.int64),
            pts,
        )

    def eval_poly_abs(coefs, powers, pts):
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
        return _eval_poly_abs_nb(
            np.ascontiguousarray(coefs, dtype=np.float64),
            np.ascontiguousarray(powers, dtype=np.int64),
            pts,
        )

    def eval_grid2(cmat, us, vs):
        return _eval_grid2_nb(
            np.ascontiguousarray(cmat, dtype=np.float64),
            np.ascontiguousarray(us, dtype=np.float64),
            np.ascontiguousarray(vs, dtype=np.float64),
        )

else:
    eval_poly = _eval_poly_np
    eval_poly_abs = _eval_poly_abs_np
    eval_grid2 = _eval_grid2_np

# numpy reference implementations stay importable for benchmarks/tests
eval_poly_numpy = _eval_poly_np
eval_poly_abs_numpy = _eval_poly_abs_np
eval_grid2_numpy = _eval_grid2_np
