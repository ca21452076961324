"""Exact resonance characterization via the spherical-wave determinant.

Expanding the field in spherical wave functions per region couples the
4N interface coefficients (a_j^+, b_j^+, a_j^-, b_j^-) of each harmonic n
through a block-tridiagonal 4N x 4N matrix A_(n)(omega, delta); the
subwavelength resonances are the roots of det A_(0) near the capacitance
asymptotics.  Determinants are tracked in log form and root finding works
on the rescaled analytic function

    g(omega) = exp(logdet(omega) - logdet(omega_seed)),

which is O(1) near the seed regardless of N.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass

import numpy as np

from .capacitance import CapacitanceSystem, asymptotic_frequencies, solve_capacitance
from .model import MaterialParams, NestedGeometry
from .numerics import LogDet, MullerResult, RootFindError, lu_logdet, muller_find_root
from .special import sph_h1n_all, sph_jn_all

__all__ = [
    "ModeRecord",
    "ResonanceSpectrum",
    "assemble_swe_system",
    "find_resonances_swe",
    "locate_characteristic_roots",
    "make_scaled_det",
    "swe_logdet",
]

# Two converged roots closer than this are treated as a collision and the
# later seed is re-run with the earlier roots deflated out.
MIN_ROOT_SEPARATION = 1e-8


def assemble_swe_system(n: int, omega: complex, materials: MaterialParams,
                        geometry: NestedGeometry) -> np.ndarray:
    """The 4N x 4N harmonic-n transmission matrix A_(n)(omega, delta).

    Column order per shell j is (a_j^+, b_j^+, a_j^-, b_j^-): the exterior
    outgoing, interior regular, interior outgoing, and gap regular
    coefficients.  Rows are the value and (1/k-scaled) flux matches on the
    outer then the inner boundary of each shell, outermost shell first.
    """
    d = materials.derived(omega)
    nl = geometry.n_layers
    rp = geometry.r_plus
    rm = geometry.r_minus
    a = np.zeros((4 * nl, 4 * nl), dtype=complex)
    for i in range(nl):
        jk_p = _pair(sph_jn_all, n, d.k * rp[i])
        hk_p = _pair(sph_h1n_all, n, d.k * rp[i])
        jr_p = _pair(sph_jn_all, n, d.k_r * rp[i])
        hr_p = _pair(sph_h1n_all, n, d.k_r * rp[i])
        jk_m = _pair(sph_jn_all, n, d.k * rm[i])
        hk_m = _pair(sph_h1n_all, n, d.k * rm[i])
        jr_m = _pair(sph_jn_all, n, d.k_r * rm[i])
        hr_m = _pair(sph_h1n_all, n, d.k_r * rm[i])
        r = 4 * i
        # Outer boundary of shell i: value row, then flux row.
        a[r, r] = -hk_p[0]
        a[r, r + 1] = jr_p[0]
        a[r, r + 2] = hr_p[0]
        a[r + 1, r] = -d.delta * hk_p[1]
        a[r + 1, r + 1] = d.tau * jr_p[1]
        a[r + 1, r + 2] = d.tau * hr_p[1]
        if i >= 1:
            a[r, r - 1] = -jk_p[0]
            a[r + 1, r - 1] = -d.delta * jk_p[1]
        # Inner boundary of shell i.
        a[r + 2, r + 1] = -jr_m[0]
        a[r + 2, r + 2] = -hr_m[0]
        a[r + 2, r + 3] = jk_m[0]
        a[r + 3, r + 1] = -d.tau * jr_m[1]
        a[r + 3, r + 2] = -d.tau * hr_m[1]
        a[r + 3, r + 3] = d.delta * jk_m[1]
        if i <= nl - 2:
            a[r + 2, r + 4] = hk_m[0]
            a[r + 3, r + 4] = d.delta * hk_m[1]
    return a


def _pair(seq, n: int, z: complex):
    vals, ders = seq(n, z)
    return vals[n], ders[n]


def swe_logdet(omega: complex, materials: MaterialParams,
               geometry: NestedGeometry, n: int = 0) -> LogDet:
    """Log-form determinant of A_(n) at ``omega``."""
    return lu_logdet(assemble_swe_system(n, omega, materials, geometry))


def make_scaled_det(materials: MaterialParams, geometry: NestedGeometry,
                    ref_omega: complex, n: int = 0):
    """A callable omega -> exp(logdet(omega) - logdet(ref_omega)).

    The returned function is O(1) near ``ref_omega``, analytic, and clipped
    to |value| <= 1e30 far away; its zeros are the resonances.
    """
    ref = swe_logdet(ref_omega, materials, geometry, n)

    def scaled(omega: complex) -> complex:
        return swe_logdet(omega, materials, geometry, n).ratio(ref)

    return scaled


def _muller_on_logdet(logdet_fn, seed: complex, deflate=(), **muller_kw) -> MullerResult:
    ref = logdet_fn(seed)

    def f(w: complex) -> complex:
        val = logdet_fn(w).ratio(ref)
        for r in deflate:
            val /= w - r
        return val

    return muller_find_root(f, seed, **muller_kw)


def locate_characteristic_roots(logdet_fn, seeds, min_separation: float = MIN_ROOT_SEPARATION,
                                strict: bool = True, **muller_kw):
    """Run one Muller search per seed on a log-determinant function.

    Pairwise root separation >= ``min_separation`` is enforced: a collision
    triggers one retry from the same seed with all previously found roots
    deflated out of the objective; a persisting collision raises
    :class:`RootFindError`.  Returns one :class:`MullerResult` per seed, in
    seed order; with ``strict=False`` a failed seed yields None instead of
    raising.
    """
    results: list[MullerResult | None] = []

    def _found():
        return tuple(prev.root for prev in results if prev is not None)

    def _collides(root):
        return any(abs(root - r) < min_separation for r in _found())

    for seed in seeds:
        try:
            res = _muller_on_logdet(logdet_fn, seed, **muller_kw)
            if _collides(res.root):
                res = _muller_on_logdet(logdet_fn, seed, deflate=_found(),
                                        **muller_kw)
                if _collides(res.root):
                    raise RootFindError(
                        f"seed {seed} converged onto an already-found root",
                        res.root,
                    )
        except RootFindError:
            if strict:
                raise
            res = None
        results.append(res)
    return results


@dataclass(frozen=True)
class ModeRecord:
    """One resonance: asymptotic seed, converged root, and solver stats."""

    index: int
    asymptotic: complex
    root: complex
    distance: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class ResonanceSpectrum:
    """All N positive-real-part resonances of a geometry, both paths timed.

    ``modes`` pairs each exact root with its capacitance asymptotic;
    ``mirrored`` lists the -conj(root) partners (not re-solved; exact by
    the determinant symmetry).  ``seconds_exact`` covers the Muller runs
    on the spherical-wave determinant, ``seconds_asymptotic`` the full
    capacitance path (build + eigensolve + asymptotics).
    """

    modes: tuple
    mirrored: np.ndarray
    seconds_exact: float
    seconds_asymptotic: float

    @property
    def roots(self) -> np.ndarray:
        return np.array([m.root for m in self.modes])

    @property
    def asymptotics(self) -> np.ndarray:
        return np.array([m.asymptotic for m in self.modes])

    @property
    def speedup(self) -> float:
        if self.seconds_asymptotic == 0.0:
            return float("inf")
        return self.seconds_exact / self.seconds_asymptotic


def find_resonances_swe(materials: MaterialParams, geometry: NestedGeometry,
                        seeds=None, **muller_kw) -> ResonanceSpectrum:
    """Locate all N subwavelength resonances of the exact determinant.

    One Muller run per capacitance seed (or per user seed).  Roots are
    sorted by real part; every root must satisfy Re > 0.  Warns when the
    contrast is too large (delta >= 0.1) for the asymptotic seeds to be
    trustworthy.
    """
    if materials.delta >= 0.1:
        warnings.warn("contrast delta >= 0.1: asymptotic seeds may be poor",
                      stacklevel=2)
    t0 = time.perf_counter()
    cs = solve_capacitance(geometry)
    omega_plus, _ = asymptotic_frequencies(cs, materials, geometry)
    seconds_asymptotic = time.perf_counter() - t0
    if seeds is None:
        seeds = omega_plus
    seeds = np.asarray(seeds, dtype=complex)

    def logdet(w: complex) -> LogDet:
        return swe_logdet(w, materials, geometry)

    t1 = time.perf_counter()
    results = locate_characteristic_roots(logdet, seeds, **muller_kw)
    seconds_exact = time.perf_counter() - t1

    for res in results:
        if res.root.real <= 0.0:
            raise RootFindError(f"root {res.root} has nonpositive real part",
                                res.root)
    order = np.argsort([r.root.real for r in results], kind="stable")
    modes = tuple(
        ModeRecord(
            index=rank,
            asymptotic=complex(seeds[i]),
            root=results[i].root,
            distance=abs(results[i].root - seeds[i]),
            iterations=results[i].iterations,
            residual=results[i].residual,
        )
        for rank, i in enumerate(order)
    )
    mirrored = -np.conj(np.array([m.root for m in modes]))
    return ResonanceSpectrum(modes, mirrored, seconds_exact, seconds_asymptotic)
