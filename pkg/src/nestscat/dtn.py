"""Dirichlet-to-Neumann reduction of the monopole (n = 0) problem.

The exterior Helmholtz problem on the host region (exterior + gaps + core)
with Dirichlet data on the 2N shell boundaries has an explicit radial
solution, giving a closed-form DtN matrix T^k acting on boundary values
ordered (f_0^+, f_0^-, f_1^+, ..., f_{N-1}^-) (0-based shells, outermost
first).  Resonances are then roots of det of the 2N x 2N system

    A(omega, delta) = -k_r diag(A'_j) - delta T^k diag(A_j),

where A_j / A'_j collect j_0, h_0 values / derivatives (via j_1, h_1) of
the interior solution of shell j at its two boundaries.

T^k is defined when no k (r_j^- - r_{j+1}^+) and no k r_{N-1}^- hits a
nonzero multiple of pi (those k^2 are Dirichlet eigenvalues of a gap or of
the core, where the exterior problem is not solvable).  Near k = 0 the
entries switch to even power series in k, removing the 0/0 of the closed
forms; T^k = T0 + k T1 + O(k^2) with T1 = diag(i, 0, ..., 0) carrying the
radiation condition.
"""

from __future__ import annotations

import cmath
import math
import time

import numpy as np

from .capacitance import asymptotic_frequencies, solve_capacitance
from .model import MaterialParams, NestedGeometry
from .numerics import LogDet, lu_logdet
from .special import sph_h1n_all, sph_jn_all

__all__ = [
    "ExcludedWavenumberError",
    "assemble_dtn_system",
    "dtn_logdet",
    "dtn_matrix",
    "dtn_series_term",
    "find_resonances_dtn",
]

# Relative tolerance of the excluded-wavenumber guard and the per-block
# series switch threshold.
_EXCLUDED_RTOL = 1e-10
_BLOCK_SERIES = 1e-6
_CORE_SERIES = 1e-3


class ExcludedWavenumberError(ValueError):
    """k^2 is (numerically) a Dirichlet eigenvalue of a gap or the core."""


def _check_excluded(k: complex, lengths) -> None:
    for L in lengths:
        x = k * L
        if x != 0 and abs(cmath.sin(x)) < _EXCLUDED_RTOL * abs(x):
            raise ExcludedWavenumberError(
                f"k L = {x} is within tolerance of a nonzero multiple of pi"
            )


def _gap_block(k: complex, rm: float, rp: float) -> np.ndarray:
    """The 2x2 DtN coupling block of one host gap (rm outer, rp inner)."""
    d = rm - rp
    t = k * d
    if abs(t) < _BLOCK_SERIES:
        t2 = t * t
        corr = k * k * d / 3.0 + (k * k) ** 2 * d**3 / 45.0
        fac = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0
        return np.array(
            [
                [rp / (rm * d) - corr, -rp / (rm * d) * fac],
                [rm / (rp * d) * fac, -rm / (rp * d) + corr],
            ],
            dtype=complex,
        )
    s = cmath.sin(t)
    c = cmath.cos(t)
    return np.array(
        [
            [(k * rm * c - s) / (rm * s), -k * rp / (rm * s)],
            [k * rm / (rp * s), -(k * rp * c + s) / (rp * s)],
        ],
        dtype=complex,
    )


def _core_entry(k: complex, r: float) -> complex:
    """DtN entry of the core ball, (k r cos(kr) - sin(kr)) / (r sin(kr)).

    Equals k j_0'(kr)/j_0(kr); O(k^2) as k -> 0, so small arguments use the
    even series of t cot t - 1 to avoid cancellation.
    """
    t = k * r
    if abs(t) < _CORE_SERIES:
        t2 = t * t
        return -(t2 / 3.0 + t2 * t2 / 45.0 + 2.0 * t2 * t2 * t2 / 945.0) / r
    s = cmath.sin(t)
    return (k * r * cmath.cos(t) - s) / (r * s)


def dtn_matrix(k: complex, geometry: NestedGeometry) -> np.ndarray:
    """The 2N x 2N DtN matrix T^k of the host region.

    Rows/columns are ordered (f_0^+, f_0^-, ..., f_{N-1}^+, f_{N-1}^-).
    Raises :class:`ExcludedWavenumberError` at excluded wavenumbers.
    """
    k = complex(k)
    n = geometry.n_layers
    rp = geometry.r_plus
    rm = geometry.r_minus
    _check_excluded(k, list(geometry.gaps()) + [rm[-1]])
    t = np.zeros((2 * n, 2 * n), dtype=complex)
    t[0, 0] = -1.0 / rp[0] + 1j * k
    for j in range(n - 1):
        block = _gap_block(k, rm[j], rp[j + 1])
        t[2 * j + 1 : 2 * j + 3, 2 * j + 1 : 2 * j + 3] = block
    t[2 * n - 1, 2 * n - 1] = _core_entry(k, rm[-1])
    return t


def dtn_series_term(order: int, geometry: NestedGeometry) -> np.ndarray:
    """Term ``order`` (0 or 1) of the small-k expansion T^k = T0 + k T1 + ...

    T0 is the static DtN map (real); T1 = diag(i, 0, ..., 0) is the
    radiation term.  All other first-order entries vanish because the gap
    blocks and the core entry are even in k.
    """
    n = geometry.n_layers
    rp = geometry.r_plus
    rm = geometry.r_minus
    t = np.zeros((2 * n, 2 * n), dtype=complex)
    if order == 0:
        t[0, 0] = -1.0 / rp[0]
        for j in range(n - 1):
            d = rm[j] - rp[j + 1]
            a = rp[j + 1] / (rm[j] * d)
            b = rm[j] / (rp[j + 1] * d)
            t[2 * j + 1 : 2 * j + 3, 2 * j + 1 : 2 * j + 3] = [[a, -a], [b, -b]]
        return t
    if order == 1:
        t[0, 0] = 1j
        return t
    raise ValueError("only series orders 0 and 1 are defined")


def assemble_dtn_system(omega: complex, materials: MaterialParams,
                        geometry: NestedGeometry) -> np.ndarray:
    """The 2N x 2N monopole system A(omega, delta) whose roots are resonances.

    Unknowns are the interior coefficients (a_0, b_0, ..., a_{N-1}, b_{N-1})
    of u = a_j j_0(k_r r) + b_j h_0^(1)(k_r r) on shell j; the rows impose
    the contrast-weighted flux match against the DtN map of the host.
    ``omega`` must be nonzero (h_0 is singular at zero argument).
    """
    d = materials.derived(omega)
    n = geometry.n_layers
    radii = np.empty(2 * n)
    radii[0::2] = geometry.r_plus
    radii[1::2] = geometry.r_minus
    vals = np.zeros((2 * n, 2 * n), dtype=complex)
    ders = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        for row in (2 * j, 2 * j + 1):
            z = d.k_r * radii[row]
            jv, jd = sph_jn_all(1, z)
            hv, hd = sph_h1n_all(1, z)
            vals[row, 2 * j] = jv[0]
            vals[row, 2 * j + 1] = hv[0]
            # f_0' = -f_1: the derivative block is -[[j_1, h_1]] rows.
            ders[row, 2 * j] = jd[0]
            ders[row, 2 * j + 1] = hd[0]
    t = dtn_matrix(d.k, geometry)
    # Flux match: k_r (a j_0' + b h_0') - delta T^k (a j_0 + b h_0) = 0.
    return d.k_r * ders - d.delta * (t @ vals)


def dtn_logdet(omega: complex, materials: MaterialParams,
               geometry: NestedGeometry) -> LogDet:
    """Log-form determinant of the DtN system at ``omega``."""
    return lu_logdet(assemble_dtn_system(omega, materials, geometry))


def find_resonances_dtn(materials: MaterialParams, geometry: NestedGeometry,
                        seeds=None):
    """The N subwavelength resonances from the DtN determinant.

    Seeds default to the capacitance asymptotics.  Returns the roots sorted
    by real part (one per mode, Re > 0, Im < 0).
    """
    from .swe import locate_characteristic_roots

    if seeds is None:
        cs = solve_capacitance(geometry)
        seeds, _ = asymptotic_frequencies(cs, materials, geometry)

    def logdet(w: complex) -> LogDet:
        return dtn_logdet(w, materials, geometry)

    results = locate_characteristic_roots(logdet, seeds)
    roots = np.array([r.root for r in results])
    return roots[np.argsort(roots.real, kind="stable")]
