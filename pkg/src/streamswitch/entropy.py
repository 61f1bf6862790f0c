"""Entropy functions, divergences and mutual information over finite distributions.

All quantities are in nats. The convention ``0 * log 0 = 0`` is applied
everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

LOG2 = math.log(2.0)
# log 2 - LOG2, the part of log 2 lost to rounding
_LOG2_LO = 2.3190468138462996e-17

# Slack allowed above log 2 before an entropy value is rejected.
_LOG2_CLAMP = 1e-12
_SUM_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class AbsoluteContinuityError(ValueError):
    """``p(x) > 0`` where ``q(x) == 0`` in a KL divergence."""


@dataclass(frozen=True)
class FiniteDistribution:
    """Probability vector over an explicit, finite set of distinct outcomes."""

    outcomes: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or len(probs) != len(self.outcomes):
            raise ValueError("probs must be a vector with one entry per outcome")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError("outcomes must be distinct")
        if np.any(probs < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")

    @classmethod
    def from_counts(cls, outcomes: Sequence[Hashable], counts) -> "FiniteDistribution":
        counts = np.asarray(counts)
        total = int(counts.sum())
        if total <= 0:
            raise ValueError("counts must have a positive total")
        return cls(tuple(outcomes), counts / total)

    @classmethod
    def uniform(cls, outcomes: Sequence[Hashable]) -> "FiniteDistribution":
        outcomes = tuple(outcomes)
        return cls(outcomes, np.full(len(outcomes), 1.0 / len(outcomes)))

    def prob(self, outcome) -> float:
        try:
            return float(self.probs[self.outcomes.index(outcome)])
        except ValueError:
            return 0.0

    def as_dict(self) -> dict:
        return dict(zip(self.outcomes, self.probs.tolist()))


@dataclass(frozen=True)
class JointDistribution:
    """Joint law of a pair: ``probs[r, c] = Pr(row = row_labels[r], col = col_labels[c])``."""

    row_labels: tuple
    col_labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        object.__setattr__(self, "probs", probs)
        if probs.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError("probs shape does not match the labels")
        if np.any(probs < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")

    @classmethod
    def from_counts(cls, row_labels, col_labels, counts) -> "JointDistribution":
        counts = np.asarray(counts)
        return cls(tuple(row_labels), tuple(col_labels), counts / int(counts.sum()))

    @classmethod
    def product(cls, rows: FiniteDistribution, cols: FiniteDistribution) -> "JointDistribution":
        return cls(rows.outcomes, cols.outcomes, np.outer(rows.probs, cols.probs))

    def row_marginal(self) -> FiniteDistribution:
        return FiniteDistribution(self.row_labels, self.probs.sum(axis=1))

    def col_marginal(self) -> FiniteDistribution:
        return FiniteDistribution(self.col_labels, self.probs.sum(axis=0))


def _xlogx(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def entropy(dist: FiniteDistribution | np.ndarray) -> float:
    """Shannon entropy in nats of a distribution or a probability vector."""
    probs = dist.probs if isinstance(dist, FiniteDistribution) else np.asarray(dist, float)
    return float(-_xlogx(probs).sum())


def entropy_from_counts(counts) -> float:
    """Entropy of the empirical law given by integer ``counts``."""
    counts = np.asarray(counts, dtype=float)
    counts = counts[counts > 0]
    total = counts.sum()
    if len(counts) <= 1:
        return 0.0
    return max(float(math.log(total) - (counts * np.log(counts)).sum() / total), 0.0)


def binary_entropy(x: float) -> float:
    """``h2(x) = -x log x - (1-x) log(1-x)``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary_entropy is defined on [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def _entropy_deficit(x: float) -> float:
    # log 2 - h2(x) = x log(2x) + (1-x) log(2(1-x)), accurate near x = 1/2
    u = 1.0 - 2.0 * x
    return x * math.log1p(-u) + (1.0 - x) * math.log1p(u) if x > 0 else LOG2


def binary_entropy_inverse(t: float) -> float:
    """Inverse of ``binary_entropy`` restricted to ``[0, 1/2]``.

    Bisection on ``[0, 1/2]``, run until the bracket stops shrinking in
    floating point. Inputs up to ``1e-12`` above ``log 2`` are clamped.
    """
    if t < 0.0 or t > LOG2 + _LOG2_CLAMP:
        raise DomainError(f"binary_entropy_inverse is defined on [0, log 2], got {t!r}")
    if t >= LOG2:
        return 0.5
    if t == 0.0:
        return 0.0
    # near the top h2 is flat; bisect on the deficit log 2 - h2(x) instead
    use_deficit = t > 0.5 * LOG2
    deficit = (LOG2 - t) + _LOG2_LO
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        below = _entropy_deficit(mid) > deficit if use_deficit else binary_entropy(mid) < t
        if below:
            lo = mid
        else:
            hi = mid
    # both ends bracket t; return the closer one
    return lo if abs(binary_entropy(lo) - t) <= abs(binary_entropy(hi) - t) else hi


def f_func(y: float) -> float:
    """``f(y) = -(1-y) log(1-y)`` for ``y <= 1``, with ``f(1) = 0``."""
    if y > 1.0:
        raise DomainError(f"f is defined for y <= 1, got {y!r}")
    if y == 1.0:
        return 0.0
    return -(1.0 - y) * math.log1p(-y)


def phi_func(t: float) -> float:
    """``phi(t) = f(h2^{-1}(t))`` on ``[0, log 2]`` and ``0`` for ``t < 0``."""
    if t < 0.0:
        return 0.0
    if t > LOG2 + _LOG2_CLAMP:
        raise DomainError(f"phi is defined for t <= log 2, got {t!r}")
    return f_func(binary_entropy_inverse(min(t, LOG2)))


def log_binomial(n: int, i: int) -> float:
    """Exact ``log C(n, i)`` as a compensated sum of logs."""
    if n < 0 or not 0 <= i <= n:
        raise DomainError(f"log_binomial needs 0 <= i <= n, got n={n}, i={i}")
    i = min(i, n - i)
    return math.fsum(math.log(n - i + j) - math.log(j) for j in range(1, i + 1))


def log_binomial_row(n: int) -> np.ndarray:
    """``[log C(n, 0), ..., log C(n, n)]`` by cumulative sums of logs."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    j = np.arange(1, n + 1, dtype=float)
    row = np.concatenate([[0.0], np.cumsum(np.log(n - j + 1) - np.log(j))])
    # symmetrize so the two ends agree exactly
    return np.minimum(row, row[::-1])


def log_falling_factorial(n: int, k: int) -> float:
    """``log(n (n-1) ... (n-k+1))``, the entropy of ``k`` draws without replacement."""
    return math.fsum(math.log(n - j) for j in range(k))


def _aligned(p: FiniteDistribution, q: FiniteDistribution) -> tuple[np.ndarray, np.ndarray]:
    if p.outcomes == q.outcomes:
        return p.probs, q.probs
    if set(p.outcomes) != set(q.outcomes):
        raise ValueError("distributions must share an outcome set")
    index = {o: j for j, o in enumerate(q.outcomes)}
    order = np.array([index[o] for o in p.outcomes])
    return p.probs, q.probs[order]


def kl_divergence(p: FiniteDistribution, q: FiniteDistribution) -> float:
    """``D(p || q) = sum p log(p / q)`` in nats."""
    pp, qq = _aligned(p, q)
    support = pp > 0
    if np.any(qq[support] == 0):
        bad = [o for o, a, b in zip(p.outcomes, pp, qq) if a > 0 and b == 0]
        raise AbsoluteContinuityError(f"p is not absolutely continuous w.r.t. q at {bad[:5]}")
    ps, qs = pp[support], qq[support]
    return float(np.sum(ps * (np.log(ps) - np.log(qs))))


def total_variation(p: FiniteDistribution, q: FiniteDistribution) -> float:
    pp, qq = _aligned(p, q)
    return float(0.5 * np.abs(pp - qq).sum())


def mutual_information(joint: JointDistribution) -> float:
    """``I(X; Y) = H(Y) - H(Y | X)`` with X the rows and Y the columns."""
    p = joint.probs
    h_y = float(-_xlogx(p.sum(axis=0)).sum())
    # H(Y|X) = H(X, Y) - H(X)
    h_y_given_x = float(-_xlogx(p).sum() + _xlogx(p.sum(axis=1)).sum())
    mi = h_y - h_y_given_x
    if mi < -1e-12:
        raise ArithmeticError(f"mutual information came out negative: {mi!r}")
    return max(mi, 0.0)


def mutual_information_from_counts(counts) -> float:
    """Mutual information of the empirical joint given by an integer count matrix."""
    counts = np.asarray(counts)
    total = counts.sum()
    mi = (
        entropy_from_counts(counts.sum(axis=0))
        + entropy_from_counts(counts.sum(axis=1))
        - entropy_from_counts(counts.ravel())
    )
    return max(float(mi), 0.0) if total else 0.0
