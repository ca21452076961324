"""Dense linear algebra, tridiagonal eigensolver, and Muller root finder."""

import cmath
import math

import numpy as np
import pytest

from nestscat.numerics import (
    LogDet,
    RootFindError,
    SingularMatrixError,
    SymTridiag,
    lu_logdet,
    lu_solve,
    muller_find_root,
    pivot_spread,
    sym_tridiag_eigen,
)
from oracles import det_cofactor, solve_full_pivot, sturm_eigenvalues, tridiag_det


def _random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ----------------------------------------------------------------------
# lu_logdet


def test_logdet_identity():
    ld = lu_logdet(np.eye(2))
    assert ld.log_magnitude == 0.0
    assert ld.phase == 0.0
    assert not ld.is_singular


def test_logdet_diagonal():
    ld = lu_logdet(np.diag([2.0, 3.0j]))
    assert abs(ld.log_magnitude - math.log(6.0)) <= 1e-14
    assert abs(ld.phase - math.pi / 2.0) <= 1e-14


def test_logdet_cofactor_oracle_8x8(rng):
    a = _random_complex(rng, (8, 8))
    det = det_cofactor(a)
    got = lu_logdet(a).to_complex()
    assert abs(got - det) <= 1e-12 * abs(det)


def test_logdet_row_swap_phase(rng):
    a = _random_complex(rng, (6, 6))
    b = a.copy()
    b[[1, 4], :] = b[[4, 1], :]
    la, lb = lu_logdet(a), lu_logdet(b)
    assert abs(la.log_magnitude - lb.log_magnitude) <= 1e-12 * abs(la.log_magnitude)
    shift = (lb.phase - la.phase) % (2.0 * math.pi)
    assert abs(shift - math.pi) <= 1e-12
    for m, ld in ((a, la), (b, lb)):
        det = det_cofactor(m)
        assert abs(ld.to_complex() - det) <= 1e-12 * abs(det)


def test_logdet_singular_inputs():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert lu_logdet(a).is_singular
    assert lu_logdet(np.zeros((3, 3))).is_singular
    col = np.array([[1.0, 0.0], [3.0, 0.0]])
    assert lu_logdet(col).is_singular


def test_logdet_requires_square():
    with pytest.raises(ValueError):
        lu_logdet(np.ones((2, 3)))


def test_logdet_no_overflow_for_extreme_magnitudes():
    a = np.diag([1e200, 1e180, 1e-150])
    ld = lu_logdet(a)
    expected = math.log(1e200) + math.log(1e180) + math.log(1e-150)
    assert abs(ld.log_magnitude - expected) <= 1e-12 * abs(expected)
    assert abs(ld.phase) <= 1e-13


def test_logdet_ratio_is_clipped():
    big = LogDet(200.0, 0.4)
    ref = LogDet(0.0, 0.1)
    val = big.ratio(ref)
    assert abs(val) <= 1e30
    assert abs(cmath.phase(val) - 0.3) <= 1e-12
    assert LogDet(-math.inf, 0.0).ratio(ref) == 0j


# ----------------------------------------------------------------------
# lu_solve


def test_solve_identity_and_diagonal():
    rhs = np.array([1.0 + 2j, -3.0, 0.5j])
    assert np.allclose(lu_solve(np.eye(3), rhs), rhs, rtol=0, atol=0)
    x = lu_solve(np.diag([2.0, 4.0]), np.array([2.0, 8.0]))
    assert np.allclose(x, [1.0, 2.0], rtol=0, atol=1e-15)


def test_solve_full_pivot_oracle_12x12(rng):
    a = _random_complex(rng, (12, 12))
    b = _random_complex(rng, 12)
    x = lu_solve(a, b)
    xo = solve_full_pivot(a, b)
    assert np.max(np.abs(x - xo)) <= 1e-10 * np.max(np.abs(xo))
    assert np.max(np.abs(a @ x - b)) <= 1e-10 * np.max(np.abs(b))


def test_solve_moderately_column_scaled(rng):
    # column magnitudes spanning 1e6, like the assembled wave systems
    base = _random_complex(rng, (6, 6)) + 4.0 * np.eye(6)
    scale = 10.0 ** np.arange(-3, 3).astype(float)
    a = base * scale[None, :]
    x_true = _random_complex(rng, 6)
    x = lu_solve(a, a @ x_true)
    assert np.max(np.abs(x - x_true) / np.abs(x_true)) <= 1e-9


def test_solve_extreme_column_scaling_backward_stable(rng):
    # Components below eps * ||scaled solution|| cannot keep relative
    # accuracy; the residual and the scaled-norm error must stay small.
    base = _random_complex(rng, (6, 6)) + 4.0 * np.eye(6)
    scale = 10.0 ** np.arange(-12, 12, 4).astype(float)
    a = base * scale[None, :]
    x_true = _random_complex(rng, 6)
    b = a @ x_true
    x = lu_solve(a, b)
    assert np.max(np.abs(a @ x - b)) <= 1e-9 * np.max(np.abs(b))
    assert np.max(np.abs(x - x_true) * scale) \
        <= 1e-9 * np.max(scale * np.abs(x_true))


def test_solve_singular_raises():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(SingularMatrixError):
        lu_solve(a, np.array([1.0, 1.0]))
    with pytest.raises(SingularMatrixError):
        lu_solve(np.zeros((2, 2)), np.array([1.0, 1.0]))


def test_solve_rhs_shape_mismatch():
    with pytest.raises(ValueError):
        lu_solve(np.eye(2), np.ones(3))


def test_pivot_spread():
    assert pivot_spread(np.eye(4)) == 1.0
    assert pivot_spread(np.array([[1.0, 1.0], [1.0, 1.0]])) == math.inf
    assert pivot_spread(np.zeros((2, 2))) == math.inf


# ----------------------------------------------------------------------
# sym_tridiag_eigen


def test_tridiag_validation():
    with pytest.raises(ValueError):
        SymTridiag(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        SymTridiag(np.array([1.0, math.nan]), np.array([0.0]))
    t = SymTridiag(np.array([1.0, 2.0]), np.array([-3.0]))
    dense = t.to_dense()
    assert np.array_equal(dense, np.array([[1.0, -3.0], [-3.0, 2.0]]))


def test_eigen_2x2_closed_form():
    w, v = sym_tridiag_eigen([2.0, 2.0], [-1.0])
    assert np.allclose(w, [1.0, 3.0], rtol=0, atol=1e-12)
    assert np.max(np.abs(v.T @ v - np.eye(2))) <= 1e-12


def test_eigen_diagonal_matrix():
    w, v = sym_tridiag_eigen(2.5 * np.ones(5), np.zeros(4))
    assert np.allclose(w, 2.5, rtol=0, atol=1e-14)
    assert np.max(np.abs(v.T @ v - np.eye(5))) <= 1e-12


def test_eigen_sturm_oracle_6x6(rng):
    diag = rng.uniform(-2.0, 2.0, 6)
    off = rng.uniform(-2.0, 2.0, 5)
    w, v = sym_tridiag_eigen(diag, off)
    dense = SymTridiag(diag, off).to_dense()
    scale = np.max(np.abs(dense))

    oracle = sturm_eigenvalues(diag, off)
    assert np.max(np.abs(w - oracle)) <= 1e-10 * scale
    # residual and orthonormality
    for i in range(6):
        assert np.max(np.abs(dense @ v[:, i] - w[i] * v[:, i])) <= 1e-10 * scale
    assert np.max(np.abs(v.T @ v - np.eye(6))) <= 1e-12
    # trace and determinant identities
    assert abs(np.sum(w) - np.trace(dense)) <= 1e-10 * abs(np.trace(dense))
    det = tridiag_det(diag, off)
    assert abs(np.prod(w) - det) <= 1e-8 * abs(det)


def test_eigen_deterministic(rng):
    diag = rng.uniform(-1.0, 1.0, 7)
    off = rng.uniform(-1.0, 1.0, 6)
    w1, v1 = sym_tridiag_eigen(diag, off)
    w2, v2 = sym_tridiag_eigen(diag, off)
    assert np.array_equal(w1, w2)
    assert np.array_equal(v1, v2)
    # sign convention: largest-magnitude component positive
    for i in range(7):
        j = int(np.argmax(np.abs(v1[:, i])))
        assert v1[j, i] > 0.0


# ----------------------------------------------------------------------
# muller_find_root


def test_muller_known_quadratic_root():
    res = muller_find_root(lambda z: z * z + 1.0, 0.9j)
    assert abs(res.root - 1j) <= 1e-12
    assert res.iterates[-1] == res.root
    assert res.residual == abs(res.root * res.root + 1.0)


def test_muller_linear_in_two_iterations():
    c = 2.0 - 3.0j
    res = muller_find_root(lambda z: z - c, 5.0 + 1.0j)
    assert res.iterations <= 2
    assert abs(res.root - c) <= 1e-12


def test_muller_planted_root():
    r = 0.3 - 0.01j
    res = muller_find_root(lambda z: (z - r) * (z + 2.0), 0.29)
    assert abs(res.root - r) <= 1e-12


def test_muller_seed_on_root():
    c = 1.5 + 0.5j
    res = muller_find_root(lambda z: z - c, c)
    assert res.root == c
    assert res.iterations == 0
    assert res.residual == 0.0


def test_muller_scale_invariance():
    def f(z):
        return (z - (0.3 - 0.01j)) * (z + 2.0)

    base = muller_find_root(f, 0.29)
    unit = muller_find_root(lambda z: 1j * f(z), 0.29)
    assert abs(unit.root - base.root) <= 1e-12
    assert unit.iterations == base.iterations
    assert len(unit.iterates) == len(base.iterates)
    for a, b in zip(unit.iterates, base.iterates):
        assert abs(a - b) <= 1e-10

    c = 37.0 - 4.0j
    scaled = muller_find_root(lambda z: c * f(z), 0.29)
    assert abs(scaled.root - base.root) <= 1e-10


def test_muller_max_iter_exceeded():
    with pytest.raises(RootFindError, match="max_iter"):
        muller_find_root(lambda z: z * z + 1.0, 100.0 + 100.0j,
                         tol_z=0.0, tol_f=0.0, max_iter=3)


def test_muller_degenerate_triple():
    with pytest.raises(RootFindError, match="degenerate"):
        muller_find_root(lambda z: 1.0 + 0j, 1.0)


def test_muller_rejects_non_finite_start():
    with pytest.raises(ValueError):
        muller_find_root(lambda z: complex("nan"), 1.0)
