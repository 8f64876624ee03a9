"""Dense complex matrix helpers and spectral predicates.

Matrices are plain numpy arrays with ``complex128`` entries.  Every routine
treats its inputs as immutable and returns fresh arrays, so callers may pass
views without worrying about aliasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Max-entry tolerance for structural predicates (Hermitian / unitary / projection).
STRUCTURAL_TOL = 1e-10
# Relative off-diagonal Frobenius tolerance for the Jacobi eigensolver.
EIG_TOL = 1e-12
# Tolerance for "is this sum an integer" decisions.  Must stay below 1/4 so the
# nearest integer is unambiguous for the defect values that occur in practice.
INTEGER_TOL = 1e-9

_MAX_SWEEPS = 100


class DimensionMismatchError(ValueError):
    """Operand shapes do not line up."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not reach its tolerance within its sweep cap."""


@dataclass(frozen=True)
class ToleranceConfig:
    """Bundle of the three tolerance knobs used across the package."""

    structural_tol: float = STRUCTURAL_TOL
    eig_tol: float = EIG_TOL
    integer_tol: float = INTEGER_TOL

    def __post_init__(self):
        if min(self.structural_tol, self.eig_tol, self.integer_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.integer_tol >= 0.25:
            raise ValueError("integer_tol must stay below 1/4")


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square complex128 matrix, validating finiteness."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise DimensionMismatchError("matrices must have dimension >= 1")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def matmul(a, b) -> np.ndarray:
    """Product of two square matrices of matching dimension."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def conjugate_by(u, a) -> np.ndarray:
    """Return ``U A U*`` (same dimension required)."""
    u = as_matrix(u)
    a = as_matrix(a)
    if u.shape != a.shape:
        raise DimensionMismatchError(f"cannot conjugate {a.shape} by {u.shape}")
    return u @ a @ u.conj().T


def hermitian_residual(a) -> float:
    """Max-entry norm of ``A - A*``."""
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def unitary_residual(u) -> float:
    """Larger of the max-entry norms of ``UU* - I`` and ``U*U - I``."""
    u = as_matrix(u)
    eye = np.eye(u.shape[0])
    r1 = np.max(np.abs(u @ u.conj().T - eye))
    r2 = np.max(np.abs(u.conj().T @ u - eye))
    return float(max(r1, r2))


def projection_residual(p) -> float:
    """Larger of the max-entry norms of ``P^2 - P`` and ``P - P*``."""
    p = as_matrix(p)
    return float(max(np.max(np.abs(p @ p - p)), np.max(np.abs(p - p.conj().T))))


def is_hermitian(a, tol: float = STRUCTURAL_TOL) -> bool:
    return hermitian_residual(a) <= tol


def is_unitary(u, tol: float = STRUCTURAL_TOL) -> bool:
    return unitary_residual(u) <= tol


def is_projection(p, tol: float = STRUCTURAL_TOL) -> bool:
    return projection_residual(p) <= tol


def diagonal(a, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Real diagonal of a (numerically) Hermitian matrix.

    Raises if any diagonal entry carries imaginary residue above ``tol``.
    """
    a = as_matrix(a)
    d = np.diag(a)
    residue = float(np.max(np.abs(d.imag))) if d.size else 0.0
    if residue > tol:
        raise ValueError(f"diagonal has imaginary residue {residue:.3e} above {tol:.3e}")
    return d.real.copy()


def _offdiag_frobenius(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eigenvalues(
    a, tol: float = EIG_TOL, max_sweeps: int = _MAX_SWEEPS
) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted ascending.

    Cyclic Jacobi sweeps with two-sided complex rotations; iteration stops once
    the off-diagonal Frobenius norm drops to ``tol`` times the Frobenius norm
    of the input.  Exceeding ``max_sweeps`` raises :class:`ConvergenceError`.
    """
    a = as_matrix(a)
    if hermitian_residual(a) > STRUCTURAL_TOL:
        raise ValueError("hermitian_eigenvalues requires a Hermitian input")
    n = a.shape[0]
    w = a.copy()
    if n == 1:
        return np.array([w[0, 0].real])
    scale = float(np.linalg.norm(w))
    if scale == 0.0:
        return np.zeros(n)
    thresh = tol * scale
    # Rotating every entry above this keeps the final off-norm below thresh.
    skip = thresh / (2.0 * n)
    for _ in range(max_sweeps):
        if _offdiag_frobenius(w) <= thresh:
            d = np.diag(w).real
            return np.sort(d)
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = w[p, q]
                absb = abs(b)
                if absb <= skip:
                    continue
                app = w[p, p].real
                aqq = w[q, q].real
                tau = (app - aqq) / (2.0 * absb)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(tau, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phase = b / absb
                g = np.array(
                    [[c, s * phase], [-s * phase.conjugate(), c]], dtype=np.complex128
                )
                idx = [p, q]
                w[idx, :] = g @ w[idx, :]
                w[:, idx] = w[:, idx] @ g.conj().T
                # The rotation annihilates (p, q) exactly in real arithmetic.
                w[p, q] = 0.0
                w[q, p] = 0.0
                w[p, p] = w[p, p].real
                w[q, q] = w[q, q].real
    if _offdiag_frobenius(w) <= thresh:
        return np.sort(np.diag(w).real)
    raise ConvergenceError(
        f"Jacobi sweeps did not converge within {max_sweeps} sweeps "
        f"(off-diagonal norm {_offdiag_frobenius(w):.3e}, target {thresh:.3e})"
    )


def projection_entry_excess(p) -> float:
    """Worst violation of the entrywise projection bounds.

    For a projection ``P`` every entry satisfies
    ``|P_st|^2 <= min(P_tt, P_ss, 1 - P_tt, 1 - P_ss)`` and every column has
    ``sum_{s != t} |P_st|^2 <= min(P_tt, 1 - P_tt)``.  Returns the largest
    amount by which either family of bounds is exceeded (0.0 when all hold).
    """
    p = as_matrix(p)
    d = np.diag(p).real
    cap = np.minimum(d, 1.0 - d)
    pair_cap = np.minimum.outer(cap, cap)
    sq = np.abs(p) ** 2
    np.fill_diagonal(sq, 0.0)
    entry_excess = float(np.max(sq - pair_cap)) if p.shape[0] > 1 else 0.0
    col_excess = float(np.max(sq.sum(axis=0) - cap))
    return max(entry_excess, col_excess, 0.0)
