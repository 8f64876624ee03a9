"""Majorisation predicates and the constructive T-transform decomposition.

``x`` is majorised by ``y`` when, after sorting both non-increasingly, every
top-k partial sum of ``x`` is at most the matching partial sum of ``y`` and the
totals agree.  The decomposition routine below turns that order relation into
an explicit chain of two-entry mixing steps (T-transforms), which is what the
matrix constructions in :mod:`schurhorn.schur` consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import INTEGER_TOL, STRUCTURAL_TOL, unitary_residual


class MajorizationError(ValueError):
    """The requested construction needs ``x`` majorised by ``y`` and it is not."""


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d real vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def top_k_sum(x, k: int) -> float:
    """Sum of the k largest entries of x."""
    v = as_vector(x)
    if not 1 <= k <= v.size:
        raise ValueError(f"k must lie in 1..{v.size}, got {k}")
    return float(np.sort(v)[::-1][:k].sum())


def bottom_k_sum(x, k: int) -> float:
    """Sum of the k smallest entries of x."""
    v = as_vector(x)
    if not 1 <= k <= v.size:
        raise ValueError(f"k must lie in 1..{v.size}, got {k}")
    return float(np.sort(v)[:k].sum())


def majorizes(x, y, tol: float = 1e-9) -> bool:
    """True when ``x`` is majorised by ``y`` (``x`` less spread out than ``y``)."""
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    if abs(cx[-1] - cy[-1]) > tol:
        return False
    if x.size == 1:
        return True
    return bool(np.all(cx[:-1] <= cy[:-1] + tol))


def majorizes_by_absolute_sums(x, y, tol: float = 1e-9) -> bool:
    """Majorisation test via sums of absolute deviations.

    ``x`` is majorised by ``y`` iff the totals agree and
    ``sum_j |x_j - t| <= sum_j |y_j - t|`` for every real ``t``.  The deviation
    gap is piecewise linear in ``t`` and flat at infinity once the totals
    match, so checking ``t`` at every entry of ``x`` and ``y`` is exhaustive.
    """
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if abs(float(x.sum() - y.sum())) > tol:
        return False
    pts = np.concatenate([x, y])
    lhs = np.abs(x[None, :] - pts[:, None]).sum(axis=1)
    rhs = np.abs(y[None, :] - pts[:, None]).sum(axis=1)
    return bool(np.all(lhs <= rhs + tol))


@dataclass(frozen=True)
class TTransform:
    """Mixing step replacing entries (j, k) by their t-weighted averages.

    Positions are 0-based.  Applied to ``v`` it sets
    ``v[j] = t*v[j] + (1-t)*v[k]`` and ``v[k] = (1-t)*v[j] + t*v[k]``.
    """

    j: int
    k: int
    t: float

    def __post_init__(self):
        if self.j == self.k:
            raise ValueError("T-transform needs two distinct positions")
        if self.j < 0 or self.k < 0:
            raise ValueError("T-transform positions must be non-negative")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {self.t}")


def apply_t_transform(tr: TTransform, x) -> np.ndarray:
    v = as_vector(x).copy()
    if tr.j >= v.size or tr.k >= v.size:
        raise ValueError(f"positions ({tr.j}, {tr.k}) out of range for length {v.size}")
    vj, vk = v[tr.j], v[tr.k]
    v[tr.j] = tr.t * vj + (1.0 - tr.t) * vk
    v[tr.k] = (1.0 - tr.t) * vj + tr.t * vk
    return v


def t_transform_matrix(tr: TTransform, n: int) -> np.ndarray:
    """The doubly stochastic matrix realising a T-transform on length-n vectors."""
    if tr.j >= n or tr.k >= n:
        raise ValueError(f"positions ({tr.j}, {tr.k}) out of range for length {n}")
    m = np.eye(n)
    m[tr.j, tr.j] = m[tr.k, tr.k] = tr.t
    m[tr.j, tr.k] = m[tr.k, tr.j] = 1.0 - tr.t
    return m


@dataclass(frozen=True)
class TTransformPlan:
    """Decomposition of a majorisation into at most n-1 T-transforms.

    The transforms act on the *frame*: ``y`` sorted non-increasingly, i.e. the
    vector ``y[source_order]``.  After applying them in order, the frame holds
    the entries of ``x``; ``placement[c]`` records the frame position holding
    ``x[c]``.  :func:`replay_t_transform_plan` performs exactly this replay.
    """

    transforms: tuple[TTransform, ...]
    source_order: tuple[int, ...]
    placement: tuple[int, ...]


def replay_t_transform_plan(plan: TTransformPlan, y) -> np.ndarray:
    """Apply a plan to ``y`` and return the result aligned with the target order."""
    w = as_vector(y)[list(plan.source_order)].copy()
    for tr in plan.transforms:
        w = apply_t_transform(tr, w)
    return w[list(plan.placement)]


def decompose_t_transforms(x, y, tol: float = 1e-9) -> TTransformPlan:
    """Express ``x`` as a chain of T-transforms applied to ``y``.

    Repeatedly targets the largest remaining entry of ``x``: among the still
    active frame positions, the largest value is mixed with the first active
    value not exceeding the target, which places the target exactly and
    removes one position from play.  At most ``n - 1`` transforms are emitted;
    ``x == y`` yields none.
    """
    x = as_vector(x)
    y = as_vector(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if not majorizes(x, y, tol):
        raise MajorizationError("x is not majorised by y")
    n = x.size
    source_order = np.argsort(-y, kind="stable")
    frame = y[source_order].astype(float)
    # Equal-within-noise values are retired without a mixing step.
    scale = max(1.0, float(np.max(np.abs(y))) if n else 1.0)
    settle = 1e-13 * scale
    order = np.argsort(-x, kind="stable")
    active = list(range(n))
    placement = np.empty(n, dtype=int)
    transforms: list[TTransform] = []
    for c in order:
        target = x[c]
        active.sort(key=lambda p: (-frame[p], p))
        top = active[0]
        if len(active) == 1 or frame[top] - target <= settle:
            placement[c] = top
            active.pop(0)
            continue
        pick = None
        for pos in range(1, len(active)):
            if frame[active[pos]] <= target:
                pick = pos
                break
        if pick is None:
            pick = len(active) - 1
        low = active[pick]
        denom = frame[top] - frame[low]
        if denom <= settle:
            placement[c] = top
            active.pop(0)
            continue
        t = min(1.0, max(0.0, (target - frame[low]) / denom))
        transforms.append(TTransform(int(top), int(low), t))
        hi, lo = frame[top], frame[low]
        frame[top] = t * hi + (1.0 - t) * lo
        frame[low] = (1.0 - t) * hi + t * lo
        placement[c] = top
        active.pop(0)
    return TTransformPlan(
        tuple(transforms),
        tuple(int(i) for i in source_order),
        tuple(int(i) for i in placement),
    )


def doubly_stochastic_residual(b) -> float:
    """Worst violation of non-negativity and unit row/column sums."""
    m = np.asarray(b, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    neg = max(0.0, float(-m.min()))
    rows = float(np.max(np.abs(m.sum(axis=1) - 1.0)))
    cols = float(np.max(np.abs(m.sum(axis=0) - 1.0)))
    return max(neg, rows, cols)


def apply_doubly_stochastic(b, y, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Multiply a doubly stochastic matrix into ``y`` after validating it."""
    m = np.asarray(b, dtype=float)
    v = as_vector(y)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != v.size:
        raise ValueError(f"shape mismatch: matrix {m.shape} against vector {v.size}")
    residual = doubly_stochastic_residual(m)
    if residual > tol:
        raise ValueError(f"matrix is not doubly stochastic (residual {residual:.3e})")
    return m @ v


def flag_majorant(x, integer_tol: float = INTEGER_TOL) -> np.ndarray:
    """The staircase vector (1, ..., 1, delta, 0, ..., 0) majorising ``x``.

    Requires entries in [0, 1].  With ``s = sum(x)``, the result carries
    ``floor(s)`` ones followed by the fractional part (dropped when it is
    within ``integer_tol`` of zero) and zero padding; it always majorises
    ``x`` and has the same total.
    """
    v = as_vector(x)
    if v.size and (v.min() < -1e-12 or v.max() > 1.0 + 1e-12):
        raise ValueError("flag_majorant needs entries in [0, 1]")
    n = v.size
    s = float(v.sum())
    k = min(n, int(np.floor(s + integer_tol)))
    delta = s - k
    out = np.zeros(n)
    out[:k] = 1.0
    if delta > integer_tol:
        out[k] = delta
    return out


def verify_concentration(x, x_up, y, y_down, tol: float = 1e-9) -> bool:
    """Check the hypotheses of the concentration comparison.

    Given blocks with ``x_up >= x`` entrywise, ``y_down <= y`` entrywise,
    every entry of ``x`` at least every entry of ``y``, and matching grand
    totals, the concatenation (x, y) is majorised by (x_up, y_down).  Returns
    whether all four hypotheses hold within ``tol``.
    """
    x = as_vector(x)
    xu = as_vector(x_up)
    y = as_vector(y)
    yd = as_vector(y_down)
    if x.shape != xu.shape or y.shape != yd.shape:
        raise ValueError("blocks must match pairwise in length")
    if x.size and np.any(xu < x - tol):
        return False
    if y.size and np.any(y < yd - tol):
        return False
    if x.size and y.size and float(x.min()) < float(y.max()) - tol:
        return False
    total_gap = abs(float(xu.sum() + yd.sum() - x.sum() - y.sum()))
    return total_gap <= tol


def orthostochastic_from_unitary(u, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Entrywise squared moduli of a unitary matrix.

    The result ``B`` is doubly stochastic, and whenever ``A = U diag(y) U*``
    the diagonal of ``A`` equals ``B y``.
    """
    m = np.asarray(u, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    residual = unitary_residual(m)
    if residual > tol:
        raise ValueError(f"matrix is not unitary (residual {residual:.3e})")
    return np.abs(m) ** 2
