"""Dense complex linear algebra and root finding for the solver stack.

The matrices assembled elsewhere in this package mix entries spanning many
orders of magnitude (high-contrast coupling terms next to O(1) continuity
terms), so determinants are handled exclusively in log form and the LU
factorization pivots on implicitly scaled column magnitudes.  Everything
here is deterministic: identical inputs give identical outputs, including
eigenvector signs and root-finder iterate sequences.

numpy is used for array storage and arithmetic only; the factorizations,
the eigensolver, and the root finder are implemented in full below so that
pivoting, sign, and branch conventions stay under our control.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LogDet",
    "MullerResult",
    "RootFindError",
    "SingularMatrixError",
    "SymTridiag",
    "lu_logdet",
    "lu_solve",
    "muller_find_root",
    "sym_tridiag_eigen",
]

_EPS = float(np.finfo(float).eps)


class SingularMatrixError(ValueError):
    """A linear solve met a pivot that is zero to working precision."""


class RootFindError(RuntimeError):
    """Muller iteration could not converge or made no progress."""

    def __init__(self, message: str, last: complex | None = None, iterations: int = 0):
        super().__init__(message)
        self.last = last
        self.iterations = iterations


def _wrap_phase(phi: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    w = math.remainder(phi, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


@dataclass(frozen=True)
class LogDet:
    """A determinant in polar-log form, det = exp(log_magnitude + i phase).

    ``log_magnitude`` is -inf when the matrix is exactly singular; ``phase``
    always lies in (-pi, pi].
    """

    log_magnitude: float
    phase: float

    @property
    def is_singular(self) -> bool:
        return self.log_magnitude == -math.inf

    def to_complex(self) -> complex:
        """The plain determinant value; overflows to inf for huge matrices."""
        if self.is_singular:
            return 0j
        return cmath.exp(complex(self.log_magnitude, self.phase))

    def ratio(self, ref: "LogDet", clip: float = 1e30) -> complex:
        """exp(self - ref) with the magnitude clipped to at most ``clip``."""
        if self.is_singular:
            return 0j
        mag = min(self.log_magnitude - ref.log_magnitude, math.log(clip))
        return cmath.exp(complex(mag, self.phase - ref.phase))


@dataclass(frozen=True)
class SymTridiag:
    """A real symmetric tridiagonal matrix (main and first off diagonal)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or e.size != max(d.size - 1, 0):
            raise ValueError("need n diagonal and n-1 off-diagonal entries")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("non-finite entries")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        for i, e in enumerate(self.offdiag):
            a[i, i + 1] = a[i + 1, i] = e
        return a


def _lu_factor(a: np.ndarray):
    """Scaled-partial-pivot LU.  Returns (lu, perm, scale, swaps, singular).

    ``lu`` holds L (unit diagonal, strictly lower part) and U; ``perm`` maps
    factored row k to the original row index; ``scale`` is the original
    row-max magnitude carried along with the swaps.  ``singular`` is set as
    soon as an exactly-zero pivot column is met, in which case the
    determinant is exactly zero and the rest of the factorization stops.
    """
    lu = np.array(a, dtype=np.complex128)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError("matrix must be square")
    n = lu.shape[0]
    scale = np.max(np.abs(lu), axis=1)
    # A zero row means an exactly singular matrix; keep the scale harmless
    # so the pivot search below reports it via a zero pivot.
    scale[scale == 0.0] = 1.0
    perm = np.arange(n)
    swaps = 0
    for k in range(n):
        ratios = np.abs(lu[k:, k]) / scale[k:]
        p = k + int(np.argmax(ratios))
        if lu[p, k] == 0:
            return lu, perm, scale, swaps, True
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            scale[[k, p]] = scale[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            swaps += 1
        if k < n - 1:
            m = lu[k + 1 :, k] / lu[k, k]
            lu[k + 1 :, k] = m
            lu[k + 1 :, k + 1 :] -= np.outer(m, lu[k, k + 1 :])
    return lu, perm, scale, swaps, False


def lu_logdet(a: np.ndarray) -> LogDet:
    """Log-form determinant of a square complex matrix via pivoted LU.

    Columns are equilibrated by exact powers of two first and the factor
    restored in log space; badly column-scaled inputs otherwise lose most
    significant digits of a near-zero determinant to pivot rounding.  The
    phase accumulates arg of every pivot plus pi per row swap and is
    wrapped to (-pi, pi].  An exactly singular input yields
    ``log_magnitude = -inf``.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.shape[0] == 0:
        return LogDet(0.0, 0.0)
    col = np.max(np.abs(a), axis=0)
    if np.any(col == 0.0):
        return LogDet(-math.inf, 0.0)
    s = np.exp2(np.round(np.log2(col)))
    lu, _, _, swaps, singular = _lu_factor(a / s)
    if singular:
        return LogDet(-math.inf, 0.0)
    piv = np.diagonal(lu)
    logmag = float(np.sum(np.log(np.abs(piv))) + np.sum(np.log(s)))
    phase = float(np.sum(np.angle(piv))) + math.pi * swaps
    return LogDet(logmag, _wrap_phase(phase))


def _equilibrate_columns(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scale each column to unit max magnitude by an exact power of two.

    Mixed radial-function columns can differ by tens of orders of magnitude
    even when the system is well posed; equilibration makes the pivot-based
    singularity test meaningful.  Powers of two keep the scaling lossless.
    Returns (scaled matrix, per-column factors); raises on a zero column.
    """
    a = np.asarray(a, dtype=np.complex128)
    col = np.max(np.abs(a), axis=0)
    if np.any(col == 0.0) or not np.all(np.isfinite(col)):
        raise SingularMatrixError("matrix has a zero or non-finite column")
    s = np.exp2(np.round(np.log2(col)))
    return a / s, s


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b for one right-hand side with the pivoted LU above.

    Columns are equilibrated first so badly scaled unknowns do not trip
    the singularity test.  Raises :class:`SingularMatrixError` when a
    pivot of the equilibrated matrix is zero to precision relative to
    its row scale.
    """
    aeq, colscale = _equilibrate_columns(a)
    lu, perm, scale, _, singular = _lu_factor(aeq)
    if singular:
        raise SingularMatrixError("matrix is singular")
    n = lu.shape[0]
    piv = np.abs(np.diagonal(lu))
    if np.any(piv <= 8.0 * _EPS * scale):
        raise SingularMatrixError("matrix is singular to working precision")
    b = np.asarray(b, dtype=np.complex128)
    if b.shape != (n,):
        raise ValueError("rhs shape mismatch")
    x = b[perm].copy()
    for k in range(n - 1):
        x[k + 1 :] -= lu[k + 1 :, k] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1 :] @ x[k + 1 :]) / lu[k, k]
    return x / colscale


def pivot_spread(a: np.ndarray) -> float:
    """max/min pivot magnitude of the column-equilibrated LU factorization.

    A cheap conditioning indicator recorded by the scattering solver;
    infinite when the matrix is singular.
    """
    try:
        aeq, _ = _equilibrate_columns(a)
    except SingularMatrixError:
        return math.inf
    lu, _, _, _, singular = _lu_factor(aeq)
    if singular:
        return math.inf
    piv = np.abs(np.diagonal(lu))
    lo = float(np.min(piv))
    return math.inf if lo == 0.0 else float(np.max(piv)) / lo


def sym_tridiag_eigen(diag, offdiag):
    """Full eigendecomposition of a real symmetric tridiagonal matrix.

    Implicit QL with Wilkinson shift, eigenvectors accumulated from the
    identity.  Returns ``(w, v)`` with eigenvalues ``w`` ascending and
    eigenvector ``i`` in column ``v[:, i]``; columns are orthonormal and
    the sign is fixed so the first component of largest magnitude is
    positive.
    """
    t = SymTridiag(np.asarray(diag, float), np.asarray(offdiag, float))
    n = t.n
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    d = t.diag.copy()
    e = np.zeros(n)
    e[: n - 1] = t.offdiag
    v = np.eye(n)
    for l in range(n):
        iters = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            iters += 1
            if iters > 60:
                raise RuntimeError("tridiagonal QL did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = v[:, i + 1].copy()
                v[:, i + 1] = s * v[:, i] + c * col
                v[:, i] = c * v[:, i] - s * col
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    order = np.argsort(d, kind="stable")
    w = d[order]
    v = v[:, order]
    for i in range(n):
        j = int(np.argmax(np.abs(v[:, i])))
        if v[j, i] < 0.0:
            v[:, i] = -v[:, i]
    return w, v


@dataclass(frozen=True)
class MullerResult:
    """Converged Muller iteration: root, iteration count, |f(root)|.

    ``iterates`` records every new point the iteration produced, in order;
    the last one equals ``root``.
    """

    root: complex
    iterations: int
    residual: float
    iterates: tuple = ()


def _muller_step(x0, f0, x1, f1, x2, f2):
    """One parabola update through three points; None when degenerate.

    Picks the quadratic root branch with the larger denominator, i.e. the
    candidate closer to the most recent point x2.
    """
    h21 = x2 - x1
    h10 = x1 - x0
    if h21 == 0 or h10 == 0:
        return None
    q = h21 / h10
    a = q * f2 - q * (1.0 + q) * f1 + q * q * f0
    b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0
    c = (1.0 + q) * f2
    disc = cmath.sqrt(b * b - 4.0 * a * c)
    den = b + disc if abs(b + disc) >= abs(b - disc) else b - disc
    if den == 0:
        return None
    return x2 - h21 * (2.0 * c / den)


def muller_find_root(
    f,
    seed: complex,
    rel_step: float = 1e-3,
    tol_z: float = 1e-12,
    tol_f: float = 1e-14,
    max_iter: int = 100,
) -> MullerResult:
    """Find a root of an analytic ``f`` near ``seed`` by Muller's method.

    The parabola is fitted through ``seed (1 - rel_step)``,
    ``seed (1 + rel_step)`` and ``seed`` (the seed itself is the most
    recent point).  Convergence when the step drops below
    ``tol_z * max(1, |z|)`` or |f| below ``tol_f``; the step test can
    trigger while |f| is still orders above its rounding floor, so polish
    steps follow as long as each cuts |f| by 4x.
    """
    seed = complex(seed)
    off = seed * rel_step if seed != 0 else complex(rel_step)
    x0, x1, x2 = seed - off, seed + off, seed
    f0, f1, f2 = f(x0), f(x1), f(x2)
    for val in (f0, f1, f2):
        if not cmath.isfinite(val):
            raise ValueError("f is not finite at the initial points")
    if f2 == 0:
        return MullerResult(x2, 0, 0.0, (x2,))
    iterates: list[complex] = []
    for it in range(1, max_iter + 1):
        x3 = _muller_step(x0, f0, x1, f1, x2, f2)
        if x3 is None:
            raise RootFindError("degenerate triple, no progress", x2, it - 1)
        f3 = f(x3)
        if not cmath.isfinite(f3):
            raise RootFindError("f not finite at iterate", x3, it)
        dz = x3 - x2
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f3
        iterates.append(x3)
        if abs(f3) <= tol_f:
            return MullerResult(x3, it, abs(f3), tuple(iterates))
        if abs(dz) <= tol_z * max(1.0, abs(x3)):
            break
    else:
        raise RootFindError("max_iter exceeded", x2, max_iter)

    best_x, best_f, best_it = x2, abs(f2), it
    while it < max_iter:
        x3 = _muller_step(x0, f0, x1, f1, x2, f2)
        if x3 is None:
            break
        f3 = f(x3)
        if not cmath.isfinite(f3):
            break
        it += 1
        x0, x1, x2 = x1, x2, x3
        f0, f1, f2 = f1, f2, f3
        if abs(f3) <= tol_f:
            iterates.append(x3)
            return MullerResult(x3, it, abs(f3), tuple(iterates))
        if abs(f3) < 0.25 * best_f:
            iterates.append(x3)
            best_x, best_f, best_it = x3, abs(f3), it
        else:
            break
    return MullerResult(best_x, best_it, best_f, tuple(iterates))
