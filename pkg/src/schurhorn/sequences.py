"""Finitely described [0, 1]-valued sequences with exactly summable tails.

A :class:`SequenceSpec` is a finite prefix followed by a tail rule.  Tail
rules either have closed-form side sums (zero, one, geometric, interleavings)
or are declared divergent with a checkable certificate, so that the threshold
sums driving the projection constructions are genuine decisions rather than
floating-point guesswork.

Indices are 1-based throughout: ``term(spec, 1)`` is the first entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

_SAMPLE_INDICES = tuple(range(1, 33)) + tuple(2**k for k in range(6, 16))
_BOUNDARY_FUZZ = 1e-12


class TailCertificateError(ValueError):
    """A divergence certificate is missing, malformed, or contradicted."""


_GEN_FUNCS = {
    "sqrt": math.sqrt,
    "log": math.log,
    "log2": math.log2,
    "exp": math.exp,
    "sin": math.sin,
    "cos": math.cos,
    "floor": math.floor,
    "ceil": math.ceil,
    "min": min,
    "max": max,
    "abs": abs,
    "pi": math.pi,
    "e": math.e,
}


@lru_cache(maxsize=None)
def _compiled(expr: str):
    return compile(expr, "<tail generator>", "eval")


def _eval_generator(expr: str, i: int) -> float:
    env = dict(_GEN_FUNCS)
    env["i"] = i
    try:
        value = eval(_compiled(expr), {"__builtins__": {}}, env)  # noqa: S307
    except Exception as exc:  # pragma: no cover - defensive
        raise TailCertificateError(f"generator {expr!r} failed at i={i}: {exc}") from exc
    return float(value)


@dataclass(frozen=True)
class Certificate:
    """Divergence witness for a generator ``g``.

    ``constant``: ``g(i) >= p`` for all ``i >= start``.
    ``harmonic``: ``g(i) >= p / i`` for all ``i >= start``.
    Either bound forces ``sum g(i) = inf``.
    """

    kind: str
    p: float
    start: int = 1

    def __post_init__(self):
        if self.kind not in ("constant", "harmonic"):
            raise TailCertificateError(f"unknown certificate kind {self.kind!r}")
        if not self.p > 0:
            raise TailCertificateError("certificate constant p must be positive")
        if self.start < 1:
            raise TailCertificateError("certificate start index must be >= 1")

    def lower_bound(self, i: int) -> float:
        if i < self.start:
            return 0.0
        return self.p if self.kind == "constant" else self.p / i


@dataclass(frozen=True)
class ZeroTail:
    """All tail terms are exactly 0."""


@dataclass(frozen=True)
class OneTail:
    """All tail terms are exactly 1."""


@dataclass(frozen=True)
class GeometricLow:
    """Tail term i is ``c * r**i`` (decreasing to 0)."""

    c: float
    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError("geometric ratio must lie strictly inside (0, 1)")
        if self.c < 0.0:
            raise ValueError("geometric scale must be non-negative")
        if self.c * self.r > 1.0 + _BOUNDARY_FUZZ:
            raise ValueError("first geometric term exceeds 1")


@dataclass(frozen=True)
class GeometricHigh:
    """Tail term i is ``1 - c * r**i`` (increasing to 1)."""

    c: float
    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError("geometric ratio must lie strictly inside (0, 1)")
        if self.c < 0.0:
            raise ValueError("geometric scale must be non-negative")
        if self.c * self.r > 1.0 + _BOUNDARY_FUZZ:
            raise ValueError("first geometric term drops below 0")


@dataclass(frozen=True)
class Interleave:
    """Alternates terms of two tail rules: first(1), second(1), first(2), ..."""

    first: "TailRule"
    second: "TailRule"


@dataclass(frozen=True)
class DivergentLow:
    """Tail term i is ``g(i)`` with ``g`` in [0, 1/2] and certified divergent sum."""

    generator: str
    certificate: Certificate

    def __post_init__(self):
        for i in _SAMPLE_INDICES:
            v = _eval_generator(self.generator, i)
            if v < -_BOUNDARY_FUZZ or v > 0.5 + _BOUNDARY_FUZZ:
                raise TailCertificateError(
                    f"divergent-low generator must stay in [0, 1/2]; got {v!r} at i={i}"
                )
            if v < self.certificate.lower_bound(i) - _BOUNDARY_FUZZ:
                raise TailCertificateError(
                    f"sampled generator value {v!r} at i={i} violates the certificate"
                )


@dataclass(frozen=True)
class DivergentHigh:
    """Tail term i is ``1 - g(i)`` with ``g`` in [0, 1/2] and certified divergent sum."""

    generator: str
    certificate: Certificate

    def __post_init__(self):
        for i in _SAMPLE_INDICES:
            v = _eval_generator(self.generator, i)
            if v < -_BOUNDARY_FUZZ or v > 0.5 + _BOUNDARY_FUZZ:
                raise TailCertificateError(
                    f"divergent-high generator must stay in [0, 1/2]; got {v!r} at i={i}"
                )
            if v < self.certificate.lower_bound(i) - _BOUNDARY_FUZZ:
                raise TailCertificateError(
                    f"sampled generator value {v!r} at i={i} violates the certificate"
                )


TailRule = Union[
    ZeroTail, OneTail, GeometricLow, GeometricHigh, Interleave, DivergentLow, DivergentHigh
]


@dataclass(frozen=True)
class SequenceSpec:
    """Finite prefix followed by a tail rule; all terms in [0, 1]."""

    prefix: tuple[float, ...]
    tail: TailRule

    def __post_init__(self):
        clean = []
        for v in self.prefix:
            v = float(v)
            if v < -_BOUNDARY_FUZZ or v > 1.0 + _BOUNDARY_FUZZ:
                raise ValueError(f"prefix entry {v!r} lies outside [0, 1]")
            clean.append(min(1.0, max(0.0, v)))
        object.__setattr__(self, "prefix", tuple(clean))


def tail_term(tail: TailRule, i: int) -> float:
    """Value of tail position ``i`` (1-based)."""
    if i < 1:
        raise ValueError("tail positions are 1-based")
    if isinstance(tail, ZeroTail):
        return 0.0
    if isinstance(tail, OneTail):
        return 1.0
    if isinstance(tail, GeometricLow):
        return tail.c * tail.r**i
    if isinstance(tail, GeometricHigh):
        return 1.0 - tail.c * tail.r**i
    if isinstance(tail, Interleave):
        if i % 2 == 1:
            return tail_term(tail.first, (i + 1) // 2)
        return tail_term(tail.second, i // 2)
    if isinstance(tail, DivergentLow):
        return min(0.5, max(0.0, _eval_generator(tail.generator, i)))
    if isinstance(tail, DivergentHigh):
        return 1.0 - min(0.5, max(0.0, _eval_generator(tail.generator, i)))
    raise TypeError(f"unknown tail rule {tail!r}")


def term(spec: SequenceSpec, i: int) -> float:
    """Value of sequence position ``i`` (1-based)."""
    if i < 1:
        raise ValueError("sequence positions are 1-based")
    if i <= len(spec.prefix):
        return spec.prefix[i - 1]
    return tail_term(spec.tail, i - len(spec.prefix))


def complement_tail(tail: TailRule) -> TailRule:
    if isinstance(tail, ZeroTail):
        return OneTail()
    if isinstance(tail, OneTail):
        return ZeroTail()
    if isinstance(tail, GeometricLow):
        return GeometricHigh(tail.c, tail.r)
    if isinstance(tail, GeometricHigh):
        return GeometricLow(tail.c, tail.r)
    if isinstance(tail, Interleave):
        return Interleave(complement_tail(tail.first), complement_tail(tail.second))
    if isinstance(tail, DivergentLow):
        return DivergentHigh(tail.generator, tail.certificate)
    if isinstance(tail, DivergentHigh):
        return DivergentLow(tail.generator, tail.certificate)
    raise TypeError(f"unknown tail rule {tail!r}")


def complement(spec: SequenceSpec) -> SequenceSpec:
    """Termwise complement: position i holds ``1 - term(spec, i)``."""
    return SequenceSpec(tuple(1.0 - v for v in spec.prefix), complement_tail(spec.tail))


@dataclass(frozen=True)
class SideSums:
    """Tail contributions split at a threshold.

    ``low`` sums the terms that are at most the threshold; ``high`` sums
    ``1 - term`` over the remaining ones.  Values are exact reals, ``inf``
    when the side is certified divergent, or ``None`` when divergence is
    certified in total but the certificate cannot attribute it to one side
    at this threshold.
    """

    low: float | None
    high: float | None
    low_mass_infinite: bool
    high_mass_infinite: bool
    total_divergent: bool


def _geometric_low_split(c: float, r: float, alpha: float) -> tuple[int, float, float]:
    """First all-low index plus the exact side sums for a ``c * r**i`` tail."""
    if c == 0.0:
        return 1, 0.0, 0.0
    i = 1
    high = 0.0
    while c * r**i > alpha:
        high += 1.0 - c * r**i
        i += 1
        if i > 10**6:  # pragma: no cover - alpha > 0 guarantees termination
            raise RuntimeError("geometric split failed to terminate")
    low = c * r**i / (1.0 - r)
    return i, low, high


def _geometric_high_split(c: float, r: float, alpha: float) -> tuple[int, float, float]:
    """First all-high index plus the exact side sums for a ``1 - c * r**i`` tail."""
    if c == 0.0:
        return 1, 0.0, 0.0
    i = 1
    low = 0.0
    while c * r**i >= 1.0 - alpha:
        low += 1.0 - c * r**i
        i += 1
        if i > 10**6:  # pragma: no cover
            raise RuntimeError("geometric split failed to terminate")
    high = c * r**i / (1.0 - r)
    return i, low, high


def _combine(a: float | None, b: float | None) -> float | None:
    if a is None:
        return None if b != math.inf else math.inf
    if b is None:
        return None if a != math.inf else math.inf
    return a + b


def tail_side_sums(tail: TailRule, alpha: float) -> SideSums:
    """Exact side sums of a tail rule at threshold ``alpha`` in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("threshold must lie strictly inside (0, 1)")
    if isinstance(tail, ZeroTail):
        return SideSums(0.0, 0.0, False, False, False)
    if isinstance(tail, OneTail):
        return SideSums(0.0, 0.0, False, False, False)
    if isinstance(tail, GeometricLow):
        _, low, high = _geometric_low_split(tail.c, tail.r, alpha)
        return SideSums(low, high, tail.c > 0.0, False, False)
    if isinstance(tail, GeometricHigh):
        _, low, high = _geometric_high_split(tail.c, tail.r, alpha)
        return SideSums(low, high, False, tail.c > 0.0, False)
    if isinstance(tail, Interleave):
        a = tail_side_sums(tail.first, alpha)
        b = tail_side_sums(tail.second, alpha)
        return SideSums(
            _combine(a.low, b.low),
            _combine(a.high, b.high),
            a.low_mass_infinite or b.low_mass_infinite,
            a.high_mass_infinite or b.high_mass_infinite,
            a.total_divergent or b.total_divergent,
        )
    if isinstance(tail, DivergentLow):
        return _divergent_low_sums(tail, alpha)
    if isinstance(tail, DivergentHigh):
        return _divergent_high_sums(tail, alpha)
    raise TypeError(f"unknown tail rule {tail!r}")


def _divergent_low_sums(tail: DivergentLow, alpha: float) -> SideSums:
    cert = tail.certificate
    if alpha >= 0.5:
        # Every term sits in [0, 1/2], hence on the low side.
        return SideSums(math.inf, 0.0, True, False, True)
    if cert.kind == "constant" and cert.p > alpha:
        low = 0.0
        for i in range(1, cert.start):
            v = tail_term(tail, i)
            if v <= alpha:
                low += v
        return SideSums(low, math.inf, False, True, True)
    return SideSums(None, None, True, True, True)


def _divergent_high_sums(tail: DivergentHigh, alpha: float) -> SideSums:
    cert = tail.certificate
    if alpha < 0.5:
        # Every term sits in [1/2, 1], hence strictly above alpha.
        return SideSums(0.0, math.inf, False, True, True)
    if cert.kind == "constant" and cert.p > 1.0 - alpha:
        high = 0.0
        for i in range(1, cert.start):
            v = tail_term(tail, i)
            if v > alpha:
                high += 1.0 - v
        return SideSums(math.inf, high, True, False, True)
    if alpha > 0.5 or all(
        _eval_generator(tail.generator, i) < 0.5 - 1e-9 for i in _SAMPLE_INDICES
    ):
        if alpha == 0.5:
            # Sampled generator stays below 1/2, so terms stay above alpha.
            return SideSums(0.0, math.inf, False, True, True)
    return SideSums(None, None, True, True, True)


def _tail_side_count(tail: TailRule, alpha: float, low: bool) -> float | None:
    """How many tail indices fall on the given side (may be ``inf``/unknown)."""
    if isinstance(tail, ZeroTail):
        return math.inf if low else 0
    if isinstance(tail, OneTail):
        return 0 if low else math.inf
    if isinstance(tail, GeometricLow):
        if tail.c == 0.0:
            return math.inf if low else 0
        i_star, _, _ = _geometric_low_split(tail.c, tail.r, alpha)
        return math.inf if low else i_star - 1
    if isinstance(tail, GeometricHigh):
        if tail.c == 0.0:
            return 0 if low else math.inf
        j_star, _, _ = _geometric_high_split(tail.c, tail.r, alpha)
        return j_star - 1 if low else math.inf
    if isinstance(tail, Interleave):
        a = _tail_side_count(tail.first, alpha, low)
        b = _tail_side_count(tail.second, alpha, low)
        if a is None or b is None:
            return None
        return a + b
    if isinstance(tail, DivergentLow):
        if alpha >= 0.5:
            return math.inf if low else 0
        return None
    if isinstance(tail, DivergentHigh):
        if alpha < 0.5:
            return 0 if low else math.inf
        return None
    raise TypeError(f"unknown tail rule {tail!r}")


def side_index_count(spec: SequenceSpec, alpha: float, low: bool) -> float:
    """Number of sequence positions on one side of the threshold.

    Raises :class:`TailCertificateError` when the tail rule cannot pin the
    count down (divergent rules at thresholds their certificate does not
    resolve).
    """
    tail_count = _tail_side_count(spec.tail, alpha, low)
    if tail_count is None:
        raise TailCertificateError(
            "tail rule cannot attribute indices to a side at this threshold"
        )
    prefix_count = sum(1 for v in spec.prefix if (v <= alpha) == low)
    return prefix_count + tail_count


def side_indices(spec: SequenceSpec, alpha: float, low: bool):
    """Yield ``(index, value)`` for positions on one side, in increasing index order."""
    limit = side_index_count(spec, alpha, low)
    yielded = 0
    i = 1
    while yielded < limit:
        v = term(spec, i)
        if (v <= alpha) == low:
            yield i, v
            yielded += 1
        i += 1


def tail_total(tail: TailRule) -> float:
    """Sum of all tail terms (``inf`` when not summable)."""
    if isinstance(tail, ZeroTail):
        return 0.0
    if isinstance(tail, OneTail):
        return math.inf
    if isinstance(tail, GeometricLow):
        return tail.c * tail.r / (1.0 - tail.r)
    if isinstance(tail, GeometricHigh):
        return math.inf
    if isinstance(tail, Interleave):
        return tail_total(tail.first) + tail_total(tail.second)
    if isinstance(tail, (DivergentLow, DivergentHigh)):
        return math.inf
    raise TypeError(f"unknown tail rule {tail!r}")


def sequence_total(spec: SequenceSpec) -> float:
    """Sum of all sequence terms (``inf`` when not summable)."""
    return float(sum(spec.prefix)) + tail_total(spec.tail)
