"""Spherical Bessel and Hankel functions of complex argument.

Values and first derivatives of j_n(z) and h_n^(1)(z) for integer order
n <= 16, accurate to ~1e-13 relative over the argument range the solvers
visit (|z| up to a few tens, |Im z| small).  j_n uses downward Miller
recurrence normalized against closed forms of j_0/j_1; h_n^(1) uses closed
forms for n <= 1 and upward recurrence, which is stable because h grows
with n.  Below |z| = 1e-3 the n <= 1 closed forms switch to truncated
series (through z^8) to avoid cancellation in sin z / z - type expressions.

Derivatives use f_n' = f_{n-1} - (n+1)/z f_n and f_0' = -f_1.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

__all__ = ["MAX_ORDER", "SphericalPair", "sph_bessel_j", "sph_hankel1",
           "sph_jn_all", "sph_h1n_all"]

MAX_ORDER = 16

# Branch thresholds.  SMALL_Z guards the series forms of j_0, j_1; below
# HANKEL_SPLIT the Hankel start values are built as j + i*y, because the
# e^{iz} closed form loses Re h_1 (= j_1 ~ z/3) to cancellation there.
SMALL_Z = 1e-3
HANKEL_SPLIT = 0.5

_RESCALE = 1e250


class SphericalPair(NamedTuple):
    """Value and first derivative of a radial function at one argument."""

    value: complex
    derivative: complex


def _j0(z: complex) -> complex:
    if abs(z) < SMALL_Z:
        w = z * z
        return 1.0 + w * (-1.0 / 6.0 + w * (1.0 / 120.0 + w * (-1.0 / 5040.0 + w / 362880.0)))
    return cmath.sin(z) / z


def _dj0(z: complex) -> complex:
    if abs(z) < SMALL_Z:
        w = z * z
        return z * (-1.0 / 3.0 + w * (1.0 / 30.0 + w * (-1.0 / 840.0 + w / 45360.0)))
    return cmath.cos(z) / z - cmath.sin(z) / (z * z)


def _j1(z: complex) -> complex:
    if abs(z) < SMALL_Z:
        w = z * z
        return z * (1.0 / 3.0 + w * (-1.0 / 30.0 + w * (1.0 / 840.0 - w / 45360.0)))
    return cmath.sin(z) / (z * z) - cmath.cos(z) / z


def _y0(z: complex) -> complex:
    return -cmath.cos(z) / z


def _y1(z: complex) -> complex:
    return -cmath.cos(z) / (z * z) - cmath.sin(z) / z


def _check_order(n: int):
    if not isinstance(n, (int,)) or isinstance(n, bool):
        raise TypeError("order must be an integer")
    if n < 0 or n > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")


def sph_jn_all(nmax: int, z: complex):
    """Values and derivatives of j_0 .. j_nmax at one complex argument.

    Returns two lists of length nmax + 1.
    """
    _check_order(nmax)
    z = complex(z)
    if z == 0:
        vals = [1.0 + 0j] + [0j] * nmax
        ders = [0j] * (nmax + 1)
        if nmax >= 1:
            ders[1] = 1.0 / 3.0 + 0j
        return vals, ders
    if nmax == 0:
        return [_j0(z)], [_dj0(z)]
    j0 = _j0(z)
    j1 = _j1(z)
    # The minimal solution separates from the dominant one only ~|z|^(1/3)
    # orders past the turning point n ~ |z|, so the start margin must grow
    # with that power to keep ~1e-15 contamination at |z| ~ 50.
    az = abs(z)
    n_start = nmax + 16 + int(math.ceil(az + 7.0 * az ** (1.0 / 3.0)))
    out = [0j] * (nmax + 1)
    fp = 0j
    fc = 1e-30 + 0j
    for n in range(n_start, 0, -1):
        fm = (2.0 * n + 1.0) / z * fc - fp
        fp, fc = fc, fm
        if n - 1 <= nmax:
            out[n - 1] = fm
        if abs(fm.real) > _RESCALE or abs(fm.imag) > _RESCALE:
            fp *= 1.0 / _RESCALE
            fc *= 1.0 / _RESCALE
            out = [o / _RESCALE for o in out]
    ref = 0 if abs(j0) >= abs(j1) else 1
    if out[ref] == 0:
        ref = 1 - ref
    scale = (j0 if ref == 0 else j1) / out[ref]
    vals = [o * scale for o in out]
    ders = [-vals[1]]
    for n in range(1, nmax + 1):
        ders.append(vals[n - 1] - (n + 1.0) / z * vals[n])
    return vals, ders


def sph_h1n_all(nmax: int, z: complex):
    """Values and derivatives of h^(1)_0 .. h^(1)_nmax at one argument."""
    _check_order(nmax)
    z = complex(z)
    if z == 0:
        raise ValueError("h_n^(1) is singular at z = 0")
    if abs(z) < HANKEL_SPLIT:
        h0 = _j0(z) + 1j * _y0(z)
        h1 = _j1(z) + 1j * _y1(z)
    else:
        ez = cmath.exp(1j * z)
        h0 = -1j * ez / z
        h1 = -ez * (1.0 + 1j / z) / z
    vals = [h0, h1]
    for n in range(1, max(nmax, 1)):
        vals.append((2.0 * n + 1.0) / z * vals[n] - vals[n - 1])
    ders = [-vals[1]]
    for n in range(1, nmax + 1):
        ders.append(vals[n - 1] - (n + 1.0) / z * vals[n])
    return vals[: nmax + 1], ders[: nmax + 1]


def sph_bessel_j(n: int, z: complex) -> SphericalPair:
    """Spherical Bessel function j_n and its derivative at complex z."""
    _check_order(n)
    vals, ders = sph_jn_all(n, z)
    return SphericalPair(vals[n], ders[n])


def sph_hankel1(n: int, z: complex) -> SphericalPair:
    """Spherical Hankel function of the first kind and its derivative."""
    _check_order(n)
    vals, ders = sph_h1n_all(n, z)
    return SphericalPair(vals[n], ders[n])
