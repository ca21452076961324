"""Geometry and material parameters of the nested resonator.

A scatterer with N layers is the union of the shells
D_j = {r_j^- <= |x| <= r_j^+}, j = 0..N-1 here (0-based), with

    r_0^+ > r_0^- > r_1^+ > r_1^- > ... > r_{N-1}^- > 0.

The background (host) fluid has density ``rho`` and bulk modulus ``kappa``;
the shells share ``rho_r`` and ``kappa_r``.  The subwavelength regime is
the density contrast delta = rho_r / rho -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "DerivedParams",
    "MaterialParams",
    "NestedGeometry",
    "equidistant_geometry",
]


@dataclass(frozen=True)
class NestedGeometry:
    """Strictly nested concentric shells, radii outermost first.

    ``radii`` interleaves outer and inner radii of each shell:
    (r_0^+, r_0^-, r_1^+, r_1^-, ...), strictly decreasing and positive.
    """

    radii: tuple

    def __post_init__(self):
        r = tuple(float(x) for x in self.radii)
        if len(r) < 2 or len(r) % 2 != 0:
            raise ValueError("need an even number (>= 2) of radii")
        if r[-1] <= 0.0:
            raise ValueError("radii must be positive")
        if any(a <= b for a, b in zip(r, r[1:])):
            raise ValueError("radii must be strictly decreasing")
        object.__setattr__(self, "radii", r)

    @property
    def n_layers(self) -> int:
        return len(self.radii) // 2

    @property
    def r_plus(self) -> np.ndarray:
        """Outer radii of the shells, outermost first."""
        return np.asarray(self.radii[0::2])

    @property
    def r_minus(self) -> np.ndarray:
        """Inner radii of the shells, outermost first."""
        return np.asarray(self.radii[1::2])

    @property
    def outer_radius(self) -> float:
        return self.radii[0]

    def gaps(self) -> np.ndarray:
        """Host-gap widths r_j^- - r_{j+1}^+ between consecutive shells."""
        return self.r_minus[:-1] - self.r_plus[1:]

    def shell_volume(self, j: int) -> float:
        """Volume of shell j (0-based)."""
        if not 0 <= j < self.n_layers:
            raise IndexError("shell index out of range")
        rp = self.radii[2 * j]
        rm = self.radii[2 * j + 1]
        return 4.0 * math.pi / 3.0 * (rp**3 - rm**3)

    def shell_volumes(self) -> np.ndarray:
        return np.array([self.shell_volume(j) for j in range(self.n_layers)])

    def scaled(self, s: float) -> "NestedGeometry":
        """The geometry dilated by a factor s > 0."""
        if s <= 0:
            raise ValueError("scale factor must be positive")
        return NestedGeometry(tuple(s * r for r in self.radii))


def equidistant_geometry(n: int) -> NestedGeometry:
    """The standard N-layer test geometry r_j^+ = N - j, r_j^- = N - j - 1/2.

    (0-based j; unit shell spacing, half-unit shell thickness.)
    """
    if n < 1:
        raise ValueError("need at least one layer")
    radii = []
    for j in range(n):
        radii.extend([float(n - j), n - j - 0.5])
    return NestedGeometry(tuple(radii))


class DerivedParams(NamedTuple):
    """Wave speeds, contrasts, and wavenumbers at a given frequency."""

    v: float
    v_r: float
    delta: float
    tau: float
    k: complex
    k_r: complex


@dataclass(frozen=True)
class MaterialParams:
    """Densities and bulk moduli of the host (rho, kappa) and shells."""

    rho_r: float
    kappa_r: float
    rho: float
    kappa: float

    def __post_init__(self):
        for name in ("rho_r", "kappa_r", "rho", "kappa"):
            val = float(getattr(self, name))
            if not (val > 0.0 and math.isfinite(val)):
                raise ValueError(f"{name} must be positive and finite")
            object.__setattr__(self, name, val)

    @classmethod
    def from_contrast(cls, delta: float) -> "MaterialParams":
        """Unit shell material against a host with rho = kappa = 1/delta.

        Both wave speeds are 1 and delta = tau**2 is the density contrast;
        this is the standard high-contrast configuration.
        """
        if not (0.0 < delta and math.isfinite(delta)):
            raise ValueError("delta must be positive and finite")
        return cls(rho_r=1.0, kappa_r=1.0, rho=1.0 / delta, kappa=1.0 / delta)

    @property
    def v(self) -> float:
        """Host sound speed sqrt(kappa / rho)."""
        return math.sqrt(self.kappa / self.rho)

    @property
    def v_r(self) -> float:
        """Shell sound speed sqrt(kappa_r / rho_r)."""
        return math.sqrt(self.kappa_r / self.rho_r)

    @property
    def delta(self) -> float:
        """Density contrast rho_r / rho."""
        return self.rho_r / self.rho

    @property
    def tau(self) -> float:
        """Wave-speed contrast k_r / k = v / v_r = sqrt(rho_r kappa / (rho kappa_r))."""
        return self.v / self.v_r

    def wavenumbers(self, omega: complex):
        """Host and shell wavenumbers (k, k_r) = (omega / v, omega / v_r)."""
        w = complex(omega)
        return w / self.v, w / self.v_r

    def derived(self, omega: complex) -> DerivedParams:
        k, k_r = self.wavenumbers(omega)
        return DerivedParams(self.v, self.v_r, self.delta, self.tau, k, k_r)
