"""Capacitance matrix, generalized eigenproblem, and asymptotic resonances."""

import math

import numpy as np
import pytest

from nestscat.capacitance import (
    asymptotic_frequencies,
    build_capacitance,
    build_volume,
    gap_coefficients,
    generalized_eigs,
    solve_capacitance,
)
from nestscat.model import MaterialParams, NestedGeometry, equidistant_geometry
from oracles import capacitance_flux_oracle, gep2_closed_form, random_nested_radii


def test_single_layer_matrix(geometry1):
    cap = build_capacitance(geometry1)
    assert cap.n == 1
    assert abs(cap.diag[0] - 4.0 * math.pi) <= 1e-15
    assert cap.offdiag.size == 0


def test_two_layer_matrix(geometry2):
    cap = build_capacitance(geometry2).to_dense()
    expected = 4.0 * math.pi * np.array([[5.0, -3.0], [-3.0, 3.0]])
    assert np.max(np.abs(cap - expected)) <= 1e-12


def test_flux_oracle_match(rng):
    for n in (1, 2, 3, 5):
        radii = random_nested_radii(rng, n)
        g = NestedGeometry(radii)
        cap = build_capacitance(g).to_dense()
        oracle = capacitance_flux_oracle(radii)
        assert np.max(np.abs(cap - oracle)) <= 1e-12 * np.max(np.abs(cap))


def test_volume_matrix_is_shell_volumes(geometry2):
    assert np.array_equal(build_volume(geometry2), geometry2.shell_volumes())


def test_quadratic_form_identity(rng):
    g = NestedGeometry(random_nested_radii(rng, 4))
    cap = build_capacitance(g).to_dense()
    gc = gap_coefficients(g)
    d = rng.standard_normal(4)
    lhs = d @ cap @ d
    rhs = 4.0 * math.pi * gc[0] * d[0] ** 2
    rhs += 4.0 * math.pi * sum(gc[j] * (d[j] - d[j - 1]) ** 2
                               for j in range(1, 4))
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_row_sum_property(geometry4):
    cap = build_capacitance(geometry4).to_dense()
    rs = cap @ np.ones(4)
    assert abs(rs[0] - 4.0 * math.pi * geometry4.outer_radius) <= 1e-12
    assert np.max(np.abs(rs[1:])) <= 1e-12


def test_single_layer_eigenpair(geometry1):
    cs = solve_capacitance(geometry1)
    assert abs(cs.lambdas[0] - 24.0 / 7.0) <= 1e-12
    expected_a = 1.0 / math.sqrt(7.0 * math.pi / 6.0)
    assert abs(cs.vectors[0, 0] - expected_a) <= 1e-12


def test_two_layer_quadratic_formula(geometry2):
    cs = solve_capacitance(geometry2)
    c = build_capacitance(geometry2)
    v = build_volume(geometry2)
    lam1, lam2 = gep2_closed_form(c.diag[0], c.offdiag[0], c.diag[1],
                                  v[0], v[1])
    assert abs(cs.lambdas[0] - lam1) <= 1e-12 * lam1
    assert abs(cs.lambdas[1] - lam2) <= 1e-12 * lam2


def test_eigenvalue_scaling(rng):
    g = NestedGeometry(random_nested_radii(rng, 3))
    s = 2.3
    lam = solve_capacitance(g).lambdas
    lam_s = solve_capacitance(g.scaled(s)).lambdas
    assert np.max(np.abs(lam_s - lam / s**2)) <= 1e-12 * np.max(lam)


def test_eigensystem_invariants(cap4, geometry4):
    lam = cap4.lambdas
    assert np.all(lam > 0.0)
    assert np.all(np.diff(lam) > 0.0)
    dense = cap4.cap.to_dense()
    scale = np.max(np.abs(dense))
    v = np.diag(cap4.volumes)
    gram = cap4.vectors.T @ v @ cap4.vectors
    assert np.max(np.abs(gram - np.eye(4))) <= 1e-10
    for i in range(4):
        resid = dense @ cap4.vectors[:, i] - lam[i] * v @ cap4.vectors[:, i]
        assert np.max(np.abs(resid)) <= 1e-10 * scale


def test_generalized_eigs_validation(geometry2):
    cap = build_capacitance(geometry2)
    with pytest.raises(ValueError):
        generalized_eigs(cap, np.ones(3))
    with pytest.raises(ValueError):
        generalized_eigs(cap, np.array([1.0, -1.0]))


def test_single_layer_asymptotic_frequency(geometry1, materials):
    cs = solve_capacitance(geometry1)
    omega_plus, omega_minus = asymptotic_frequencies(cs, materials, geometry1)
    expected_re = math.sqrt(24.0 / 42000.0)
    expected_im = -12.0 / 42000.0
    assert abs(omega_plus[0].real - expected_re) <= 1e-10 * expected_re
    assert abs(omega_plus[0].imag - expected_im) <= 1e-10 * abs(expected_im)
    assert omega_minus[0] == -np.conj(omega_plus[0])


def test_damping_sign_and_mirror(rng):
    m = MaterialParams.from_contrast(2e-3)
    for n in (1, 3, 6):
        g = NestedGeometry(random_nested_radii(rng, n))
        cs = solve_capacitance(g)
        wp, wm = asymptotic_frequencies(cs, m, g)
        assert np.all(wp.imag <= 0.0)
        assert np.all(wp.real > 0.0)
        assert np.array_equal(wm, -np.conj(wp))


def test_system_geometry_mismatch(geometry1, geometry2, materials):
    cs = solve_capacitance(geometry1)
    with pytest.raises(ValueError):
        asymptotic_frequencies(cs, materials, geometry2)
