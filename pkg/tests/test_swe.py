"""Spherical-wave transmission matrix and the exact resonance search."""

import cmath
import math
import warnings

import numpy as np
import pytest

from nestscat.capacitance import asymptotic_frequencies, solve_capacitance
from nestscat.model import MaterialParams, equidistant_geometry
from nestscat.numerics import LogDet, RootFindError
from nestscat.special import sph_h1n_all, sph_jn_all
from nestscat.swe import (
    assemble_swe_system,
    find_resonances_swe,
    locate_characteristic_roots,
    make_scaled_det,
    swe_logdet,
)
from oracles import det_cofactor, grid_scan_min


def test_leading_entries(geometry1, materials):
    omega = 0.05 - 1e-3j
    d = materials.derived(omega)
    a = assemble_swe_system(0, omega, materials, geometry1)
    r0 = geometry1.outer_radius
    hv, hd = sph_h1n_all(0, d.k * r0)
    jv, jd = sph_jn_all(0, d.k_r * r0)
    assert a[0, 0] == -hv[0]
    assert a[1, 0] == -d.delta * hd[0]
    assert a[0, 1] == jv[0]
    assert a[1, 1] == d.tau * jd[0]


def test_block_tridiagonal_sparsity(materials):
    g = equidistant_geometry(3)
    a = assemble_swe_system(0, 0.04 - 1e-3j, materials, g)
    ii, jj = np.indices(a.shape)
    assert np.all(a[np.abs(ii - jj) > 2] == 0)
    assert np.all(np.isfinite(a))


def test_entrywise_mirror_identity(geometry2, materials):
    # A(-conj w) equals conj A(w) with every flux row negated: the host
    # wavenumber flips sign, which conjugates h and leaves j, but the
    # derivative rows pick up the sign of the inner chain rule.
    omega = 0.033 - 5e-4j
    a = assemble_swe_system(0, omega, materials, geometry2)
    b = assemble_swe_system(0, -omega.conjugate(), materials, geometry2)
    flip = np.tile([1.0, -1.0], 2 * geometry2.n_layers)
    assert np.max(np.abs(b - flip[:, None] * np.conj(a))) \
        <= 1e-13 * np.max(np.abs(a))


def test_determinant_mirror_symmetry_log_form(geometry4, rng):
    m = MaterialParams.from_contrast(1e-3)
    for _ in range(5):
        omega = complex(rng.uniform(0.01, 0.5), rng.uniform(-0.05, 0.01))
        la = swe_logdet(omega, m, geometry4)
        lb = swe_logdet(-omega.conjugate(), m, geometry4)
        assert abs(la.log_magnitude - lb.log_magnitude) \
            <= 1e-10 * max(1.0, abs(la.log_magnitude))
        phase_sum = math.remainder(la.phase + lb.phase, 2.0 * math.pi)
        assert abs(phase_sum) <= 1e-10


def test_cofactor_oracle_single_layer(geometry1, materials):
    for omega in (0.02 - 2e-4j, 0.05, 0.031 + 0.001j):
        a = assemble_swe_system(0, omega, materials, geometry1)
        det = det_cofactor(a)
        got = swe_logdet(omega, materials, geometry1).to_complex()
        assert abs(got - det) <= 1e-12 * abs(det)


def test_scaled_det_is_one_at_anchor_and_small_at_root(geometry1, materials_mild):
    spec = find_resonances_swe(materials_mild, geometry1)
    mode = spec.modes[0]
    f = make_scaled_det(materials_mild, geometry1, mode.asymptotic)
    assert abs(f(mode.asymptotic) - 1.0) <= 1e-12
    assert abs(f(mode.root)) <= 1e-10
    assert mode.residual <= 1e-10


def test_root_invariant_under_anchor_choice(geometry1, materials_mild):
    from nestscat.numerics import muller_find_root

    cs = solve_capacitance(geometry1)
    seeds, _ = asymptotic_frequencies(cs, materials_mild, geometry1)
    seed = complex(seeds[0])
    roots = []
    for anchor in (seed, seed * 1.001, seed * (1.0 + 0.002j)):
        f = make_scaled_det(materials_mild, geometry1, anchor)
        roots.append(muller_find_root(f, seed).root)
    assert abs(roots[1] - roots[0]) <= 1e-10
    assert abs(roots[2] - roots[0]) <= 1e-10


def test_single_layer_root_against_grid_scan(geometry1, materials):
    spec = find_resonances_swe(materials, geometry1)
    root = spec.roots[0]
    seed = spec.asymptotics[0]
    # closed-form asymptotic location and the expected O(delta^{3/2}) gap
    assert abs(root - (0.0239046 - 2.8571e-4j)) <= 2e-5
    assert 1e-7 <= abs(root - seed) <= 2e-5
    f = make_scaled_det(materials, geometry1, seed)
    best = grid_scan_min(f, seed, 5e-5, points=41, levels=4)
    assert abs(root - best) <= 1e-8


def test_root_set_closed_under_mirror(geometry1, materials):
    spec = find_resonances_swe(materials, geometry1)
    mirror_seed = -np.conj(spec.asymptotics[0])
    f = make_scaled_det(materials, geometry1, complex(mirror_seed))
    assert abs(f(complex(spec.mirrored[0]))) <= 1e-8


def test_two_layer_spectrum_statistics(geometry2):
    m = MaterialParams.from_contrast(1e-3)
    spec = find_resonances_swe(m, geometry2)
    assert len(spec.modes) == 2
    assert np.all(spec.roots.real > 0.0)
    assert np.all(np.diff(spec.roots.real) > 0.0)
    for mode in spec.modes:
        assert mode.iterations <= 20
        assert mode.distance == abs(mode.root - mode.asymptotic)
    assert np.array_equal(spec.mirrored, -np.conj(spec.roots))
    assert spec.seconds_exact > 0.0
    assert spec.seconds_asymptotic > 0.0


def test_high_contrast_warning(geometry1):
    m = MaterialParams.from_contrast(0.2)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        try:
            find_resonances_swe(m, geometry1)
        except RootFindError:
            pass
    assert any("contrast" in str(w.message) for w in rec)


# ----------------------------------------------------------------------
# collision handling on synthetic determinants


def _logdet_of(fn):
    def ld(w):
        val = fn(w)
        if val == 0:
            return LogDet(-math.inf, 0.0)
        return LogDet(math.log(abs(val)), cmath.phase(val))

    return ld


def test_deflation_separates_close_seeds():
    r1, r2 = 1.0, 1.001
    ld = _logdet_of(lambda w: (w - r1) * (w - r2))
    results = locate_characteristic_roots(ld, [0.9999, 1.00005])
    roots = sorted(res.root.real for res in results)
    assert abs(roots[0] - r1) <= 1e-9
    assert abs(roots[1] - r2) <= 1e-9


def test_persistent_collision_raises_or_yields_none():
    r1, r2 = 1.0, 1.0 + 3e-9
    ld = _logdet_of(lambda w: (w - r1) * (w - r2))
    seeds = [0.99999, 1.000001]
    with pytest.raises(RootFindError):
        locate_characteristic_roots(ld, seeds)
    results = locate_characteristic_roots(ld, seeds, strict=False)
    assert results[0] is not None
    assert results[1] is None
