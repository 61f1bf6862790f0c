"""Exact output distributions of a streaming algorithm by exhaustive enumeration.

The prefix tree of ``[N]^q`` is walked one level at a time: level ``i`` holds
every prefix ``(x_1..x_i)`` in lexicographic order together with the state
reached after it. Under sampling with replacement (Q) every leaf has weight
``N^-q``; under sampling without replacement (P) every leaf with distinct
entries has weight ``1 / (N)_q``. Since P is uniform over distinct prefixes at
every level, all P-side statistics are integer counts over the distinct
prefixes of the relevant level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import lemma2_bound
from .entropy import (
    LOG2,
    FiniteDistribution,
    JointDistribution,
    entropy_from_counts,
    kl_divergence,
    log_falling_factorial,
    mutual_information,
    total_variation,
)
from .streaming import CapExceededError, StreamAlgorithm, check_widths, state_dtype

DEFAULT_ENUMERATION_CAP = 10**7
TOL = 1e-9


class LemmaViolation(AssertionError):
    """An exact computation broke one of the proven inequalities."""


@dataclass
class OracleResult:
    """Exact laws of the final state under P and Q plus per-step information.

    ``mi_per_step[i - 1] = I(X_i; S_{i-1})`` for ``i = 1..q`` and
    ``mi_state[i] = I(X_1..X_i; S_i)`` for ``i = 0..q`` (``mi_state[0] = 0``),
    all under P.
    """

    algorithm: str
    n: int
    q: int
    widths: tuple[int, ...]
    p_out: FiniteDistribution
    q_out: FiniteDistribution
    kl_exact: float
    tv_exact: float
    mi_per_step: list[float]
    mi_state: list[float]
    p_bit: FiniteDistribution
    q_bit: FiniteDistribution
    kl_bit: float
    p_counts: dict = field(repr=False, default_factory=dict)
    q_counts: dict = field(repr=False, default_factory=dict)
    step_joints: list[JointDistribution] = field(repr=False, default_factory=list)

    @property
    def p_accept_count(self) -> int:
        """Number of distinct-entry inputs on which the decision bit is 1."""
        return self.p_counts.get("bit1", 0)

    def describe(self) -> str:
        return self.algorithm


@dataclass
class Verdict:
    name: str
    passed: bool
    lhs: float
    rhs: float
    detail: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def raise_if_failed(self) -> None:
        if not self.passed:
            raise LemmaViolation(f"{self.name}: {self.lhs!r} > {self.rhs!r} ({self.detail})")


def _level_symbols(n: int, level: int) -> np.ndarray:
    """``(n^level, level)`` matrix of all prefixes in lexicographic order."""
    idx = np.arange(n ** level, dtype=np.int64)
    powers = n ** np.arange(level - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % n + 1


def _factorize(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inv = np.unique(states, return_inverse=True)
    return uniq, inv.ravel()


def _joint_counts(states: np.ndarray, xs: np.ndarray, n: int):
    uniq, inv = _factorize(states)
    counts = np.bincount(inv * n + (xs - 1), minlength=len(uniq) * n).reshape(len(uniq), n)
    return uniq, counts


def _distribution(outcomes, counts_by_label: dict) -> FiniteDistribution:
    counts = np.array([counts_by_label.get(o, 0) for o in outcomes], dtype=np.int64)
    return FiniteDistribution.from_counts(outcomes, counts)


def enumerate_distributions(alg: StreamAlgorithm, cap: int = DEFAULT_ENUMERATION_CAP) -> OracleResult:
    """Exhaustively compute the laws ``P_A`` and ``Q_A`` of the final state."""
    profile = alg.profile
    n, q = profile.n, profile.q
    if n ** q > cap:
        raise CapExceededError(f"N^q = {n ** q} exceeds the enumeration cap of {cap}")

    states = np.zeros(1, dtype=state_dtype(0))
    distinct = np.ones(1, dtype=bool)
    mi_per_step: list[float] = []
    mi_state = [0.0]
    joints: list[JointDistribution] = []
    for i in range(1, q + 1):
        prefixes = _level_symbols(n, i)
        xs = prefixes[:, -1]
        parents = np.repeat(states, n)
        distinct = np.repeat(distinct, n) & np.all(prefixes[:, :-1] != xs[:, None], axis=1)

        # I(X_i; S_{i-1}) under P: uniform weight on distinct level-i prefixes
        labels, counts = _joint_counts(parents[distinct], xs[distinct], n)
        joint = JointDistribution.from_counts(labels.tolist(), range(1, n + 1), counts)
        joints.append(joint)
        mi_per_step.append(mutual_information(joint))

        states = alg.step_batch(i, parents, xs)
        check_widths(states, profile.width(i), i)
        # S_i is a function of X_1..X_i, so I(X_1..X_i; S_i) = H(S_i)
        _, counts_i = np.unique(states[distinct], return_counts=True)
        mi_state.append(entropy_from_counts(counts_i))

    q_labels, q_counts = np.unique(states, return_counts=True)
    p_labels, p_counts = np.unique(states[distinct], return_counts=True)
    outcomes = [int(v) for v in q_labels.tolist()]
    q_map = dict(zip(outcomes, q_counts.tolist()))
    p_map = dict(zip((int(v) for v in p_labels.tolist()), p_counts.tolist()))
    if not set(p_map) <= set(q_map):
        raise AssertionError("P-reachable final state missing under Q")
    if sum(p_map.values()) != math.perm(n, q) or sum(q_map.values()) != n ** q:
        raise AssertionError("enumeration weights do not match N^q and (N)_q")

    p_out = _distribution(outcomes, p_map)
    q_out = _distribution(outcomes, q_map)

    bits = alg.output_bits(states)
    q_bit_counts = np.bincount(bits, minlength=2)
    p_bit_counts = np.bincount(bits[distinct], minlength=2)
    p_bit = FiniteDistribution.from_counts((0, 1), p_bit_counts)
    q_bit = FiniteDistribution.from_counts((0, 1), q_bit_counts)

    return OracleResult(
        algorithm=alg.describe(),
        n=n,
        q=q,
        widths=profile.s,
        p_out=p_out,
        q_out=q_out,
        kl_exact=kl_divergence(p_out, q_out),
        tv_exact=total_variation(p_out, q_out),
        mi_per_step=mi_per_step,
        mi_state=mi_state,
        p_bit=p_bit,
        q_bit=q_bit,
        kl_bit=kl_divergence(p_bit, q_bit),
        p_counts={"final": p_map, "bit1": int(p_bit_counts[1])},
        q_counts={"final": q_map, "bit1": int(q_bit_counts[1])},
        step_joints=joints,
    )


def verify_lemma1(result: OracleResult, tol: float = TOL) -> Verdict:
    """``KL(P_A || Q_A) <= sum_i I(X_i; S_{i-1})``."""
    rhs = math.fsum(result.mi_per_step)
    return Verdict(
        name="lemma1",
        passed=result.kl_exact <= rhs + tol,
        lhs=result.kl_exact,
        rhs=rhs,
        detail=result.describe(),
    )


def verify_lemma2(result: OracleResult, n: int | None = None, use_memory: bool = False,
                  tol: float = TOL) -> list[Verdict]:
    """Per step ``i = 0..q-1``: ``I(X_{i+1}; S_i) <= lemma2_bound(N, i, I(X_1..X_i; S_i))``.

    With ``use_memory`` the information argument is replaced by the weaker
    ``s_i log 2``.
    """
    n = result.n if n is None else n
    verdicts = []
    for i in range(result.q):
        if use_memory:
            info = 0.0 if i == 0 else result.widths[i - 1] * LOG2
        else:
            info = result.mi_state[i]
        lhs = result.mi_per_step[i]
        rhs = lemma2_bound(n, i, info)
        verdicts.append(Verdict(
            name=f"lemma2[i={i}{',memory' if use_memory else ''}]",
            passed=lhs <= rhs + tol,
            lhs=lhs,
            rhs=rhs,
            detail=result.describe(),
        ))
    return verdicts


def prefix_entropy(n: int, i: int) -> float:
    """``H(X_1..X_i)`` under P, the largest value ``I(X_1..X_i; S_i)`` can take."""
    return log_falling_factorial(n, i)
