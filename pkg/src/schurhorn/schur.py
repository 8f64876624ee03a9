"""Constructive Schur-Horn machinery.

Builds Hermitian matrices with a prescribed diagonal and spectrum by realising
each T-transform of the diagonal as conjugation with an embedded 2x2 unitary,
and derives the finite projection-with-given-diagonal construction from it.
"""

from __future__ import annotations

import cmath
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import INTEGER_TOL, STRUCTURAL_TOL
from .majorization import (
    TTransform,
    as_vector,
    decompose_t_transforms,
    majorizes,
)

_PHASE_TOL = 1e-13


class InfeasibleDiagonalError(ValueError):
    """A prescribed diagonal cannot be realised; carries the integrality defect."""

    def __init__(self, message: str, defect: float | None = None):
        super().__init__(message)
        self.defect = defect


@dataclass(frozen=True)
class SynthesisResult:
    """Hermitian matrix with prescribed diagonal plus the unitary that built it.

    ``matrix = unitary @ diag(spectrum) @ unitary*`` and
    ``diag(matrix) == target_diagonal`` up to roundoff.
    """

    matrix: np.ndarray
    unitary: np.ndarray
    target_diagonal: np.ndarray
    spectrum: np.ndarray


def _mixing_phase(a01: complex, a10: complex) -> complex:
    """Unimodular c with ``c*a01 + conj(c)*a10 = 0`` (Hermitian inputs)."""
    if abs(a01) == 0.0 and abs(a10) == 0.0:
        return 1.0 + 0.0j
    primary = cmath.exp(1j * (math.pi / 2.0 - cmath.phase(a01)))
    scale = max(1.0, abs(a01), abs(a10))
    if abs(primary * a01 + primary.conjugate() * a10) <= _PHASE_TOL * scale:
        return primary
    # Safety net: scan a few unimodular candidates and keep the best.
    candidates = [primary, -primary, 1.0 + 0.0j, 1.0j]
    best = min(candidates, key=lambda c: abs(c * a01 + c.conjugate() * a10))
    if abs(best * a01 + best.conjugate() * a10) > _PHASE_TOL * scale:
        raise ValueError("could not balance off-diagonal phases; input not Hermitian?")
    return best


def kadison_rotation(a, t: float) -> np.ndarray:
    """2x2 unitary mixing the diagonal of a Hermitian matrix with weight t.

    For Hermitian ``A`` the returned ``U`` satisfies
    ``diag(U A U*) = (t A00 + (1-t) A11, (1-t) A00 + t A11)``.  The rotation
    angle solves ``sin(theta)^2 = t`` and the phase cancels the off-diagonal
    contribution to the conjugated diagonal.
    """
    a = linalg.as_matrix(a)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {a.shape}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {t}")
    if linalg.hermitian_residual(a) > 1e-8:
        raise ValueError("kadison_rotation requires a (numerically) Hermitian input")
    theta = math.asin(math.sqrt(t))
    s = math.sin(theta)
    co = math.cos(theta)
    c = _mixing_phase(a[0, 1], a[1, 0])
    return np.array([[c * s, -co], [c * co, s]], dtype=np.complex128)


def embed_rotation(u2, n: int, j: int, k: int) -> np.ndarray:
    """Embed a 2x2 unitary at rows/columns (j, k) of the n x n identity."""
    u2 = linalg.as_matrix(u2)
    if u2.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {u2.shape}")
    if not 0 <= j < k < n:
        raise ValueError(f"need 0 <= j < k < n, got j={j}, k={k}, n={n}")
    v = np.eye(n, dtype=np.complex128)
    v[np.ix_([j, k], [j, k])] = u2
    return v


def apply_t_transform_unitarily(a, tr: TTransform) -> tuple[np.ndarray, np.ndarray]:
    """Conjugate ``A`` so its diagonal undergoes the given T-transform.

    Returns ``(V A V*, V)`` where ``V`` is the identity outside rows
    ``(tr.j, tr.k)``; the new diagonal is ``apply_t_transform(tr, diag(A))``
    and the spectrum is untouched.
    """
    a = linalg.as_matrix(a)
    n = a.shape[0]
    j, k = tr.j, tr.k
    if j >= n or k >= n:
        raise ValueError(f"positions ({j}, {k}) out of range for dimension {n}")
    sub = a[np.ix_([j, k], [j, k])]
    u2 = kadison_rotation(sub, tr.t)
    v = np.eye(n, dtype=np.complex128)
    v[np.ix_([j, k], [j, k])] = u2
    return v @ a @ v.conj().T, v


def _permutation_matrix(dest: list[int] | tuple[int, ...]) -> np.ndarray:
    n = len(dest)
    q = np.zeros((n, n), dtype=np.complex128)
    q[np.arange(n), list(dest)] = 1.0
    return q


def synthesize_hermitian(x, y, tol: float = 1e-9) -> SynthesisResult:
    """Hermitian matrix with diagonal ``x`` and spectrum ``y`` (needs x majorised by y).

    Starts from ``diag(y)`` sorted non-increasingly, realises each step of the
    T-transform decomposition as an embedded 2x2 rotation, and finishes with a
    permutation aligning the diagonal with the caller's ordering of ``x``.
    """
    x = as_vector(x)
    y = as_vector(y)
    plan = decompose_t_transforms(x, y, tol)  # raises MajorizationError if x not << y
    n = x.size
    a = np.diag(y[list(plan.source_order)]).astype(np.complex128)
    u = _permutation_matrix(plan.source_order)
    for tr in plan.transforms:
        a, v = apply_t_transform_unitarily(a, tr)
        u = v @ u
    q = _permutation_matrix(plan.placement)
    a = q @ a @ q.conj().T
    u = q @ u
    return SynthesisResult(a, u, x.copy(), y.copy())


def conjugate_to_diagonal(a, x, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Unitarily push the diagonal of ``A`` to ``x`` without moving its spectrum.

    Requires ``x`` majorised by ``diag(A)``.  Returns ``(A', V)`` with
    ``A' = V A V*``, ``diag(A') = x`` and the same spectrum as ``A`` (the same
    rotation chain as :func:`synthesize_hermitian`, applied to ``A`` itself in
    place of a diagonal matrix).
    """
    a = linalg.as_matrix(a)
    if linalg.hermitian_residual(a) > 1e-8:
        raise ValueError("conjugate_to_diagonal requires a Hermitian input")
    x = as_vector(x)
    y = linalg.diagonal(a)
    plan = decompose_t_transforms(x, y, tol)  # raises MajorizationError if x not << diag(A)
    v_total = _permutation_matrix(plan.source_order)
    cur = v_total @ a @ v_total.conj().T
    for tr in plan.transforms:
        cur, v = apply_t_transform_unitarily(cur, tr)
        v_total = v @ v_total
    q = _permutation_matrix(plan.placement)
    cur = q @ cur @ q.conj().T
    v_total = q @ v_total
    return cur, v_total


def carpenter_finite(a, tol: float = INTEGER_TOL) -> np.ndarray:
    """Projection with prescribed diagonal ``a`` (entries in [0, 1], integer sum).

    The diagonal is majorised by the matching 0/1 staircase, so the projection
    is synthesised with spectrum (1, ..., 1, 0, ..., 0).  A non-integer sum is
    infeasible and raises with the defect attached.
    """
    v = as_vector(a)
    if v.size and (v.min() < -1e-12 or v.max() > 1.0 + 1e-12):
        raise ValueError("carpenter_finite needs diagonal entries in [0, 1]")
    v = np.clip(v, 0.0, 1.0)
    s = float(v.sum())
    m = round(s)
    defect = abs(s - m)
    if defect > tol:
        raise InfeasibleDiagonalError(
            f"diagonal sum {s!r} is {defect:.3e} away from an integer", defect=defect
        )
    target = np.zeros(v.size)
    target[:m] = 1.0
    result = synthesize_hermitian(v, target, tol=max(tol, 1e-9))
    return result.matrix


SchurCheckResult = namedtuple("SchurCheckResult", ["diagonal", "eigenvalues", "ok"])


def schur_check(a, tol: float = 1e-8) -> SchurCheckResult:
    """Verify that the diagonal of a Hermitian matrix is majorised by its spectrum."""
    a = linalg.as_matrix(a)
    d = linalg.diagonal(a)
    eigs = linalg.hermitian_eigenvalues(a)
    return SchurCheckResult(d, eigs, majorizes(d, eigs, tol))


__all__ = [
    "InfeasibleDiagonalError",
    "SynthesisResult",
    "SchurCheckResult",
    "kadison_rotation",
    "embed_rotation",
    "apply_t_transform_unitarily",
    "synthesize_hermitian",
    "conjugate_to_diagonal",
    "carpenter_finite",
    "schur_check",
]
