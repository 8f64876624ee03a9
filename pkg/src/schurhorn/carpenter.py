"""Projections of infinite-dimensional flavour with a prescribed diagonal.

Given a [0, 1]-valued sequence (a :class:`~schurhorn.sequences.SequenceSpec`)
and a threshold ``alpha``, the sums

* ``low_sum``: sum of the terms that are at most ``alpha``, and
* ``high_complement_sum``: sum of ``1 - term`` over the remaining terms

decide whether the sequence is the diagonal of some projection: it is exactly
when the two sums are not both finite, or both are finite and differ by an
integer.  This module classifies sequences accordingly and constructs finite
truncations of a witnessing projection:

* :func:`build_case_b` (both sums finite): a tower ``P_1, P_2, ...`` of
  growing projections, each a corner-perturbation of the next, covering more
  and more indices at their exact diagonal values and satisfying the verified
  increment bound ``||(P_{k+r} - P_k) e_t||^2 <= 6 / 2**k``.
* :func:`build_case_a` (divergent): a direct sum of integer-trace blocks whose
  perturbed diagonals are repaired by unitaries acting across neighbouring
  blocks, leaving only the final block's top-up entries off target.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from statistics import median

import numpy as np

from .linalg import INTEGER_TOL, STRUCTURAL_TOL, projection_entry_excess, projection_residual
from .majorization import verify_concentration
from .schur import InfeasibleDiagonalError, carpenter_finite, conjugate_to_diagonal
from .sequences import (
    SequenceSpec,
    SideSums,
    TailCertificateError,
    complement,
    sequence_total,
    side_index_count,
    side_indices,
    tail_side_sums,
    term,
)

__all__ = [
    "Feasibility",
    "KadisonReport",
    "TruncatedProjection",
    "MonotoneSelection",
    "BudgetExhaustedError",
    "TailCertificateError",
    "kadison_sums",
    "feasibility",
    "build_case_b",
    "build_case_a",
    "projection_with_trace",
    "projection_with_cotrace",
    "chebyshev_coefficients",
    "monotone_divergent_subsequence",
    "block_projection_from_partition",
    "projection_increment_norms",
    "verify_truncation",
]


class BudgetExhaustedError(RuntimeError):
    """A construction consumed more sequence terms than its budget allows."""


class Feasibility(enum.Enum):
    """Classification of a sequence as a prospective projection diagonal."""

    CASE_A = "CaseA"
    CASE_B = "CaseB-feasible"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class KadisonReport:
    """Threshold sums and the feasibility verdict they imply.

    ``low_sum`` / ``high_complement_sum`` are exact reals, ``inf`` for a
    certified divergent side, or ``None`` when total divergence cannot be
    attributed to a single side.  ``defect`` is the distance of their
    difference from the nearest integer (``None`` unless both are finite).
    """

    alpha: float
    low_sum: float | None
    high_complement_sum: float | None
    low_mass_infinite: bool
    high_mass_infinite: bool
    defect: float | None
    feasibility: Feasibility


def _add_finite(base: float, side: float | None) -> float | None:
    if side is None:
        return None
    if side == math.inf:
        return math.inf
    return base + side


def kadison_sums(spec: SequenceSpec, alpha: float = 0.5) -> SideSums:
    """Side sums of the whole sequence (prefix plus tail) at ``alpha``."""
    tail = tail_side_sums(spec.tail, alpha)
    prefix_low = sum(v for v in spec.prefix if v <= alpha)
    prefix_high = sum(1.0 - v for v in spec.prefix if v > alpha)
    return SideSums(
        _add_finite(prefix_low, tail.low),
        _add_finite(prefix_high, tail.high),
        tail.low_mass_infinite,
        tail.high_mass_infinite,
        tail.total_divergent,
    )


def feasibility(
    spec: SequenceSpec, alpha: float = 0.5, integer_tol: float = INTEGER_TOL
) -> KadisonReport:
    """Decide which construction (if any) applies to the sequence at ``alpha``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("threshold must lie strictly inside (0, 1)")
    sums = kadison_sums(spec, alpha)
    low, high = sums.low, sums.high
    if low is None or high is None or low == math.inf or high == math.inf:
        verdict = Feasibility.CASE_A
        defect = None
    else:
        diff = low - high
        defect = abs(diff - round(diff))
        verdict = Feasibility.CASE_B if defect <= integer_tol else Feasibility.INFEASIBLE
    return KadisonReport(
        alpha, low, high, sums.low_mass_infinite, sums.high_mass_infinite, defect, verdict
    )


@dataclass(frozen=True, eq=False)
class TruncatedProjection:
    """Finite corner of a projection with prescribed diagonal.

    ``diagonal_map[p]`` is the 1-based sequence index whose value sits at
    matrix position ``p`` (``None`` for an auxiliary slack position).
    ``covered`` lists the indices whose diagonal entry already equals the
    prescribed value exactly; positions mapping to other indices are still
    in transit (their entries carry a documented perturbation).
    ``residual_bound`` is the verified bound on ``||(P' - P) e_t||^2``
    against any deeper truncation ``P'`` (``inf`` when no bound is claimed).
    """

    matrix: np.ndarray
    depth: int
    diagonal_map: tuple[int | None, ...]
    covered: tuple[int, ...]
    residual_bound: float


def _conjugate_positions_to(a: np.ndarray, positions, target, tol: float = 1e-9) -> np.ndarray:
    """Conjugate ``a`` by a unitary supported on ``positions`` so that the
    diagonal there becomes ``target`` (requires ``target`` majorised by the
    current diagonal at those positions); all other diagonal entries stay."""
    idx = list(positions)
    sub = a[np.ix_(idx, idx)]
    _, w = conjugate_to_diagonal(sub, target, tol)
    v = np.eye(a.shape[0], dtype=np.complex128)
    v[np.ix_(idx, idx)] = w
    return v @ a @ v.conj().T


class _SideStream:
    """Pull-based view of one side of the sequence, in increasing index order."""

    def __init__(self, spec: SequenceSpec, alpha: float, low: bool):
        self.count = side_index_count(spec, alpha, low)
        self._iter = side_indices(spec, alpha, low)
        self.consumed = 0

    def pull(self):
        item = next(self._iter, None)
        if item is not None:
            self.consumed += 1
        return item

    @property
    def remaining(self) -> bool:
        return self.consumed < self.count


def build_case_b(
    spec: SequenceSpec,
    alpha: float = 0.5,
    depth: int = 1,
    *,
    budget: int = 100_000,
    tol: float = 1e-9,
) -> list[TruncatedProjection]:
    """Tower ``P_1, ..., P_depth`` of projections for a summable-defect sequence.

    Step ``k`` covers enough low indices to push the uncovered low mass
    ``delta_k`` below ``2**-k`` and enough high indices to push the uncovered
    high complement mass ``mu_k`` strictly below ``delta_k``; the leftover
    ``sigma_k = delta_k - mu_k`` occupies a single slack position.  Each
    ``P_{k+1}`` extends ``P_k`` by rotating newly appended exact 0/1 entries
    together with the old slack position, so the old corner moves by at most
    the retired residual mass -- giving ``||(P_{k+r} - P_k) e_t||^2 <= 6/2**k``.

    When only the high side carries infinite mass the construction runs on
    the complemented sequence at ``1 - alpha`` and returns ``I - Q``.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    report = feasibility(spec, alpha)
    if report.feasibility is Feasibility.CASE_A:
        raise ValueError("the threshold sums diverge; use build_case_a instead")
    if report.feasibility is Feasibility.INFEASIBLE:
        raise InfeasibleDiagonalError(
            f"threshold sums differ by a non-integer (defect {report.defect:.3e})",
            defect=report.defect,
        )
    complemented = False
    work_spec, work_alpha = spec, alpha
    sums = kadison_sums(work_spec, work_alpha)
    if not sums.low_mass_infinite and sums.high_mass_infinite:
        # Only the high side carries infinite mass: the residual ordering
        # mu < delta could not be sustained, so build for the complement.
        complemented = True
        work_spec, work_alpha = complement(spec), 1.0 - alpha
        sums = kadison_sums(work_spec, work_alpha)
    a_f = float(sums.low)
    b_f = float(sums.high)
    snap = 1e-13 * max(1.0, a_f, b_f)

    def residual(total: float, taken: float) -> float:
        left = total - taken
        return 0.0 if left <= snap else left

    lows = _SideStream(work_spec, work_alpha, True)
    highs = _SideStream(work_spec, work_alpha, False)
    taken_low = 0.0
    taken_high_gap = 0.0
    delta = residual(a_f, 0.0)
    mu = residual(b_f, 0.0)
    pulls = 0
    matrix: np.ndarray | None = None
    rows: list[int | None] = []
    results: list[TruncatedProjection] = []

    for k in range(1, depth + 1):
        new_low_idx: list[int] = []
        new_low_val: list[float] = []
        new_high_idx: list[int] = []
        new_high_val: list[float] = []
        target = 2.0**-k
        forced = lows.remaining
        while delta >= target or forced:
            item = lows.pull()
            if item is None:
                break
            forced = False
            pulls += 1
            if pulls > budget:
                raise BudgetExhaustedError(f"more than {budget} terms consumed")
            i, v = item
            new_low_idx.append(i)
            new_low_val.append(v)
            taken_low += v
            delta = residual(a_f, taken_low)
        forced = highs.remaining
        while not (mu < delta or (mu == 0.0 and delta == 0.0)) or forced:
            item = highs.pull()
            if item is None:
                break
            forced = False
            pulls += 1
            if pulls > budget:
                raise BudgetExhaustedError(f"more than {budget} terms consumed")
            i, v = item
            new_high_idx.append(i)
            new_high_val.append(v)
            taken_high_gap += 1.0 - v
            mu = residual(b_f, taken_high_gap)
        if mu > delta + snap:
            raise BudgetExhaustedError(
                "residual ordering mu < delta unattainable at this depth"
            )
        sigma = max(0.0, delta - mu)
        step_diag = list(new_low_val) + list(new_high_val) + [sigma]
        if matrix is None:
            matrix = carpenter_finite(np.array(step_diag))
            rows = [*new_low_idx, *new_high_idx, None]
        else:
            d = len(rows)
            grow = len(step_diag) - 1
            bigger = np.zeros((d + grow, d + grow), dtype=np.complex128)
            bigger[:d, :d] = matrix
            for offset in range(len(new_low_idx), grow):
                bigger[d + offset, d + offset] = 1.0
            positions = [d - 1, *range(d, d + grow)]
            matrix = _conjugate_positions_to(bigger, positions, step_diag, tol)
            rows = rows[:-1] + [*new_low_idx, *new_high_idx, None]
        covered = tuple(sorted(i for i in rows if i is not None))
        results.append(
            TruncatedProjection(
                matrix=matrix.copy(),
                depth=k,
                diagonal_map=tuple(rows),
                covered=covered,
                residual_bound=6.0 * 2.0**-k,
            )
        )
    if complemented:
        results = [
            TruncatedProjection(
                matrix=np.eye(p.matrix.shape[0], dtype=np.complex128) - p.matrix,
                depth=p.depth,
                diagonal_map=p.diagonal_map,
                covered=p.covered,
                residual_bound=p.residual_bound,
            )
            for p in results
        ]
    return results


def chebyshev_coefficients(values, delta: float) -> tuple[int, tuple[float, ...]]:
    """Smallest head of ``values`` whose sum reaches ``delta``, with weights.

    Returns ``(n, (v_1/s, ..., v_n/s))`` where ``n`` is minimal with
    ``s = v_1 + ... + v_n >= delta``.  The weights split a perturbation of
    total size ``delta`` proportionally, so entry ``j`` absorbs ``w_j * delta``
    without leaving ``[0, v_j]``.
    """
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    picked: list[float] = []
    total = 0.0
    for v in values:
        v = float(v)
        if v < 0.0:
            raise ValueError("values must be non-negative")
        picked.append(v)
        total += v
        if total >= delta:
            return len(picked), tuple(v / total for v in picked)
    raise ValueError(f"values sum to {total!r} and never reach delta={delta!r}")


@dataclass(frozen=True)
class MonotoneSelection:
    """Rule for extracting a non-increasing divergent subsequence.

    ``constant`` keeps values within ``tolerance`` of ``value`` (an infinite
    cluster); ``descending`` keeps any value not exceeding the previously kept
    one (up to ``tolerance``), which is the full stream when it is already
    sorted and a greedy sub-stream otherwise.
    """

    kind: str
    value: float | None
    tolerance: float

    def keeps(self, v: float, last_kept: float | None) -> bool:
        if not 1e-12 < v < 1.0 - 1e-12:
            return False
        if self.kind == "constant":
            return abs(v - self.value) <= self.tolerance
        return last_kept is None or v <= last_kept + self.tolerance


def monotone_divergent_subsequence(values, *, min_cluster: int = 16) -> MonotoneSelection | None:
    """Pick a selection rule from sampled candidate values, or ``None``.

    Tries, in order: an infinite constant cluster (many samples sharing one
    value), an already non-increasing sample, and a greedy non-increasing
    sub-stream that retains a substantial share of the sampled mass.
    """
    vals = [float(v) for v in values if 1e-12 < float(v) < 1.0 - 1e-12]
    if not vals:
        return None
    buckets: dict[float, list[float]] = {}
    for v in vals:
        buckets.setdefault(round(v, 9), []).append(v)
    anchor = max(buckets, key=lambda key: len(buckets[key]))
    cluster = buckets[anchor]
    if len(cluster) >= max(min_cluster, len(vals) // 4) and min(cluster) > 1e-6:
        return MonotoneSelection("constant", float(median(cluster)), 1e-9)
    if all(b <= a + 1e-12 for a, b in zip(vals, vals[1:])):
        return MonotoneSelection("descending", None, 1e-12)
    kept: list[float] = []
    for v in vals:
        if not kept or v <= kept[-1] + 1e-12:
            kept.append(v)
    if len(kept) >= max(min_cluster, len(vals) // 4) and sum(kept) >= 0.25 * sum(vals):
        return MonotoneSelection("descending", None, 1e-12)
    return None


def block_projection_from_partition(blocks, tol: float = INTEGER_TOL) -> np.ndarray:
    """Direct sum of projections, one per diagonal block (integer block sums)."""
    mats = [carpenter_finite(np.asarray(block, dtype=float), tol) for block in blocks]
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.complex128)
    at = 0
    for m in mats:
        d = m.shape[0]
        out[at : at + d, at : at + d] = m
        at += d
    return out


def _attributed_order(spec: SequenceSpec, alpha: float, sample: int = 2048) -> list[bool]:
    """Preferred complementation order for the divergent construction."""
    sums = kadison_sums(spec, alpha)
    if sums.low == math.inf:
        return [False, True]
    if sums.high == math.inf:
        return [True, False]
    mass_low = 0.0
    mass_high = 0.0
    for i in range(1, sample + 1):
        v = term(spec, i)
        if v <= alpha:
            mass_low += v
        else:
            mass_high += 1.0 - v
    return [False, True] if mass_low >= mass_high else [True, False]


def build_case_a(
    spec: SequenceSpec,
    alpha: float = 0.5,
    depth: int = 3,
    *,
    budget: int = 100_000,
    tol: float = 1e-9,
) -> TruncatedProjection:
    """Truncated projection for a sequence with divergent threshold sums.

    Extracts a non-increasing divergent subsequence ``b`` (working on the
    complemented sequence when divergence lives on the high side) and builds
    ``depth`` diagonal blocks with integer sums: block 1 is the single entry
    ``b_1 + (1 - b_1)``; block ``k`` carries a few ``b`` terms pushed down by
    the previous block's top-up ``delta_{k-1}`` (split proportionally over the
    smallest head of ``b`` that can absorb it), at most one untouched term
    from the remaining sequence, and a tail of ``b`` terms pushed up by the
    new top-up ``delta_k`` that rounds the block sum to the next integer.
    Unitaries acting across consecutive blocks then restore the pushed
    entries to their exact values; only the final block's pushed-up tail
    stays perturbed, so no finite residual bound is claimed
    (``residual_bound = inf``).
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    report = feasibility(spec, alpha)
    if report.feasibility is not Feasibility.CASE_A:
        raise ValueError("the threshold sums are summable; use build_case_b instead")

    selection = None
    complemented = False
    work_spec, work_alpha = spec, alpha
    sample_size = min(4096, budget)
    for flip in _attributed_order(spec, alpha):
        candidate_spec = complement(spec) if flip else spec
        candidate_alpha = 1.0 - alpha if flip else alpha
        sampled = [
            v
            for i in range(1, sample_size + 1)
            if (v := term(candidate_spec, i)) <= candidate_alpha
        ]
        selection = monotone_divergent_subsequence(sampled)
        if selection is not None:
            complemented = flip
            work_spec, work_alpha = candidate_spec, candidate_alpha
            break
    if selection is None:
        raise TailCertificateError(
            "no monotone divergent subsequence is apparent in the sampled terms"
        )

    b_buffer: deque[tuple[int, float]] = deque()
    queue: deque[tuple[int, float]] = deque()
    scan = {"i": 0, "last": None}

    def classify_one():
        scan["i"] += 1
        if scan["i"] > budget:
            raise BudgetExhaustedError(f"more than {budget} terms consumed")
        i = scan["i"]
        v = term(work_spec, i)
        if v <= work_alpha and selection.keeps(v, scan["last"]):
            if selection.kind == "descending":
                scan["last"] = v
            b_buffer.append((i, v))
        else:
            queue.append((i, v))

    def next_b() -> tuple[int, float]:
        while not b_buffer:
            classify_one()
        return b_buffer.popleft()

    first_idx, b1 = next_b()
    delta = 1.0 - b1
    s_threshold = 1.0 / (1.0 - b1)
    # Per block: entries as (index, built value, exact value), plus the spans
    # of pushed-down and pushed-up positions for the repair step.
    blocks: list[list[tuple[int, float, float]]] = [[(first_idx, 1.0, b1)]]
    down_parts: list[list[int]] = [[]]  # local positions pushed down, per block
    up_parts: list[list[int]] = [[0]]  # local positions pushed up, per block

    for _ in range(2, depth + 1):
        entries: list[tuple[int, float, float]] = []
        down_local: list[int] = []
        up_local: list[int] = []
        absorb: list[tuple[int, float]] = []
        total = 0.0
        while total < delta:
            idx, v = next_b()
            absorb.append((idx, v))
            total += v
        for idx, v in absorb:
            down_local.append(len(entries))
            entries.append((idx, v - (v / total) * delta, v))
        running = total - delta
        if queue:
            idx, v = queue.popleft()
            entries.append((idx, v, v))
            running += v
        tail: list[tuple[int, float]] = []
        tail_total = 0.0
        while tail_total < s_threshold:
            idx, v = next_b()
            tail.append((idx, v))
            tail_total += v
        running += tail_total
        delta = math.floor(running) + 1.0 - running
        for idx, v in tail:
            up_local.append(len(entries))
            entries.append((idx, v + (v / tail_total) * delta, v))
        blocks.append(entries)
        down_parts.append(down_local)
        up_parts.append(up_local)

    offsets = []
    at = 0
    for block in blocks:
        offsets.append(at)
        at += len(block)
    matrix = block_projection_from_partition(
        [[value for _, value, _ in block] for block in blocks]
    )
    for k in range(len(blocks) - 1):
        up_positions = [offsets[k] + p for p in up_parts[k]]
        down_positions = [offsets[k + 1] + p for p in down_parts[k + 1]]
        pushed_up = [blocks[k][p][1] for p in up_parts[k]]
        exact_up = [blocks[k][p][2] for p in up_parts[k]]
        pushed_down = [blocks[k + 1][p][1] for p in down_parts[k + 1]]
        exact_down = [blocks[k + 1][p][2] for p in down_parts[k + 1]]
        if not verify_concentration(exact_up, pushed_up, exact_down, pushed_down, tol=1e-8):
            raise RuntimeError("block repair hypotheses failed; construction is inconsistent")
        matrix = _conjugate_positions_to(
            matrix, up_positions + down_positions, exact_up + exact_down, tol
        )

    diagonal_map: list[int] = []
    for block in blocks:
        diagonal_map.extend(idx for idx, _, _ in block)
    uncovered = {blocks[-1][p][0] for p in up_parts[-1]}
    covered = tuple(sorted(set(diagonal_map) - uncovered))
    if complemented:
        matrix = np.eye(matrix.shape[0], dtype=np.complex128) - matrix
    return TruncatedProjection(
        matrix=matrix,
        depth=depth,
        diagonal_map=tuple(diagonal_map),
        covered=covered,
        residual_bound=math.inf,
    )


def projection_with_trace(
    spec: SequenceSpec, trace_tol: float = 1e-8, *, budget: int = 100_000
) -> TruncatedProjection:
    """Truncated projection whose diagonal is the (summable) sequence.

    The sequence total must be within the integer tolerance of an integer
    ``m``; the returned truncation has trace within ``trace_tol`` of ``m``
    (the construction is run deep enough that every above-half entry is
    covered, at which point the trace equals ``m`` exactly in real
    arithmetic).
    """
    total = sequence_total(spec)
    if not math.isfinite(total):
        raise ValueError("the sequence is not summable")
    m = round(total)
    defect = abs(total - m)
    if defect > INTEGER_TOL:
        raise InfeasibleDiagonalError(
            f"sequence total {total!r} is {defect:.3e} away from an integer", defect=defect
        )
    high_count = int(side_index_count(spec, 0.5, False))
    depth = max(1, math.ceil(math.log2(3.0 / trace_tol)), high_count)
    return build_case_b(spec, 0.5, depth, budget=budget)[-1]


def projection_with_cotrace(
    spec: SequenceSpec, trace_tol: float = 1e-8, *, budget: int = 100_000
) -> TruncatedProjection:
    """Truncated projection with diagonal ``spec`` when ``sum (1 - term)`` is finite.

    Runs :func:`projection_with_trace` on the complemented sequence and flips
    the result, so ``trace(I - P)`` lands within ``trace_tol`` of the integer
    complement total.
    """
    flipped = projection_with_trace(complement(spec), trace_tol, budget=budget)
    return TruncatedProjection(
        matrix=np.eye(flipped.matrix.shape[0], dtype=np.complex128) - flipped.matrix,
        depth=flipped.depth,
        diagonal_map=flipped.diagonal_map,
        covered=flipped.covered,
        residual_bound=flipped.residual_bound,
    )


def projection_increment_norms(projections) -> list[tuple[int, int, float]]:
    """Worst column movement between every pair of truncations.

    For each pair ``(P_k, P_{k+r})`` (the first embedded as the leading
    corner), returns ``(k, r, max_t ||(P_{k+r} - P_k) e_t||^2)`` over the
    smaller dimension's basis vectors.
    """
    out = []
    for a in range(len(projections)):
        for b in range(a + 1, len(projections)):
            small = projections[a]
            big = projections[b]
            d = small.matrix.shape[0]
            dbig = big.matrix.shape[0]
            if dbig < d:
                raise ValueError("projections must be ordered by depth")
            embedded = np.zeros((dbig, d), dtype=np.complex128)
            embedded[:d, :] = small.matrix
            diff = big.matrix[:, :d] - embedded
            worst = float(np.max(np.sum(np.abs(diff) ** 2, axis=0))) if d else 0.0
            out.append((small.depth, big.depth - small.depth, worst))
    return out


@dataclass(frozen=True)
class VerificationReport:
    """Re-checked invariants of a truncated projection against its sequence."""

    projection_residual: float
    diagonal_error: float
    entry_excess: float
    ok: bool


def verify_truncation(
    spec: SequenceSpec,
    truncated: TruncatedProjection,
    tol: float = STRUCTURAL_TOL,
) -> VerificationReport:
    """Re-verify a truncation: projection axioms, covered diagonal, entry bounds."""
    p = truncated.matrix
    proj_res = projection_residual(p)
    covered = set(truncated.covered)
    diag_err = 0.0
    for pos, idx in enumerate(truncated.diagonal_map):
        if idx is not None and idx in covered:
            diag_err = max(diag_err, abs(p[pos, pos].real - term(spec, idx)))
    excess = projection_entry_excess(p)
    ok = proj_res <= tol and diag_err <= max(tol, 1e-9) and excess <= max(tol, 1e-9)
    return VerificationReport(proj_res, diag_err, excess, ok)
