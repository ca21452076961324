"""Generalized capacitance eigenproblem and leading-order resonances.

For N nested shells the capacitance matrix C is real symmetric tridiagonal
with gap coefficients

    g_0 = r_0^+,   g_j = r_{j-1}^- r_j^+ / (r_{j-1}^- - r_j^+),   g_N = 0,

(0-based shells; g_j couples shell j-1 to shell j across the host gap)

    C[j, j]   =  4 pi (g_j + g_{j+1}),
    C[j, j+1] = -4 pi g_{j+1}.

With V = diag(shell volumes), the pencil C a = lambda V a has N simple
positive eigenvalues; the subwavelength resonances are, to leading order
in the contrast delta,

    omega_i^+ = sqrt(delta lambda_i) v_r
                - i 2 pi (r_0^+)^2 delta v_r^2 / v * (a_i[0])^2 + ...,
    omega_i^- = -conj(omega_i^+),

with eigenvectors normalized by a_i^T V a_i = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import NestedGeometry, MaterialParams
from .numerics import SymTridiag, sym_tridiag_eigen

__all__ = [
    "CapacitanceSystem",
    "asymptotic_frequencies",
    "build_capacitance",
    "build_volume",
    "gap_coefficients",
    "generalized_eigs",
    "solve_capacitance",
]


def gap_coefficients(geometry: NestedGeometry) -> np.ndarray:
    """The N + 1 harmonic-capacity coefficients of the gaps.

    Entry 0 belongs to the exterior (arises from the decay of the exterior
    harmonic potential), entries 1..N-1 to the host gaps, entry N to the
    core (zero: the core supports a constant potential).
    """
    rp = geometry.r_plus
    rm = geometry.r_minus
    n = geometry.n_layers
    g = np.zeros(n + 1)
    g[0] = rp[0]
    for j in range(1, n):
        g[j] = rm[j - 1] * rp[j] / (rm[j - 1] - rp[j])
    return g


def build_capacitance(geometry: NestedGeometry) -> SymTridiag:
    """Capacitance matrix of the nested geometry (symmetric tridiagonal)."""
    g = gap_coefficients(geometry)
    diag = 4.0 * math.pi * (g[:-1] + g[1:])
    off = -4.0 * math.pi * g[1:-1]
    return SymTridiag(diag, off)


def build_volume(geometry: NestedGeometry) -> np.ndarray:
    """Shell volumes |D_j| as a vector (the diagonal of V)."""
    return geometry.shell_volumes()


def generalized_eigs(cap: SymTridiag, volumes: np.ndarray):
    """Solve C a = lambda V a for a tridiagonal C and diagonal V > 0.

    Returns ``(lambdas, vectors)`` with eigenvalues ascending and
    eigenvector i in column ``vectors[:, i]``, normalized a^T V a = 1 and
    sign-fixed (largest-magnitude component positive).  The problem is
    symmetrized as S = V^{-1/2} C V^{-1/2}, which preserves tridiagonal
    structure.  Raises if the pencil is not positive definite or if two
    eigenvalues coincide to relative precision 1e-12.
    """
    vol = np.asarray(volumes, dtype=float)
    if vol.shape != (cap.n,):
        raise ValueError("volume vector shape mismatch")
    if np.any(vol <= 0.0):
        raise ValueError("volumes must be positive")
    rs = np.sqrt(vol)
    s_diag = cap.diag / vol
    s_off = cap.offdiag / (rs[:-1] * rs[1:])
    lam, q = sym_tridiag_eigen(s_diag, s_off)
    if lam[0] <= 0.0:
        raise ValueError("capacitance pencil is not positive definite")
    scale = float(np.max(np.abs(lam)))
    if cap.n > 1 and np.min(np.diff(lam)) <= 1e-12 * scale:
        raise ValueError(
            "eigenvalues not simple: min gap "
            f"{np.min(np.diff(lam)):.3e} at scale {scale:.3e}"
        )
    vectors = q / rs[:, None]
    # The back-transform preserves a_i^T V a_j = q_i^T q_j = delta_ij but
    # can flip which component is largest; re-fix the sign convention.
    for i in range(cap.n):
        j = int(np.argmax(np.abs(vectors[:, i])))
        if vectors[j, i] < 0.0:
            vectors[:, i] = -vectors[:, i]
    return lam, vectors


@dataclass(frozen=True)
class CapacitanceSystem:
    """Capacitance matrix, volumes, and the solved eigenpairs."""

    cap: SymTridiag
    volumes: np.ndarray
    lambdas: np.ndarray
    vectors: np.ndarray

    @property
    def n_layers(self) -> int:
        return self.cap.n


def solve_capacitance(geometry: NestedGeometry) -> CapacitanceSystem:
    """Build and diagonalize the capacitance pencil of a geometry."""
    cap = build_capacitance(geometry)
    vol = build_volume(geometry)
    lam, vec = generalized_eigs(cap, vol)
    return CapacitanceSystem(cap, vol, lam, vec)


def asymptotic_frequencies(cs: CapacitanceSystem, materials: MaterialParams,
                           geometry: NestedGeometry):
    """Leading-order resonances (omega_plus, omega_minus) from the pencil.

    omega_minus[i] = -conj(omega_plus[i]); Im omega_plus[i] <= 0 always
    (the imaginary part is the monopole radiation damping).
    """
    if cs.n_layers != geometry.n_layers:
        raise ValueError("capacitance system does not match geometry")
    delta = materials.delta
    v = materials.v
    v_r = materials.v_r
    r0 = geometry.outer_radius
    a_first = cs.vectors[0, :]
    real = np.sqrt(delta * cs.lambdas) * v_r
    imag = -2.0 * math.pi * r0 * r0 * delta * v_r * v_r / v * a_first**2
    omega_plus = real + 1j * imag
    return omega_plus, -np.conj(omega_plus)
