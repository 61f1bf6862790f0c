"""Closed-form upper and lower bounds on the distinguishing KL divergence.

``lemma2_bound`` and ``lemma2_chain_bound`` are rigorous at every finite N and
are in nats. ``theorem1_leading`` and ``corollary1_leading`` are the leading
terms of asymptotic bounds (their ``1 + o(1)`` factor is dropped) and, like
``theorem2_lower``, are evaluated with base-2 logs exactly as the formulas are
written, giving a unitless ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .collision import derive_capacities
from .entropy import DomainError, LOG2, log_binomial, phi_func
from .streaming import MemoryProfile, normalize_profile

NATS = "nats"
BITS_RATIO = "bits-ratio"


def lemma2_bound_raw(n: int, i: int, i_v_gamma: float) -> float:
    if not 0 <= i < n:
        raise DomainError(f"need 0 <= i < n, got i={i}, n={n}")
    if i_v_gamma < 0:
        raise DomainError(f"mutual information must be nonnegative, got {i_v_gamma!r}")
    ratio = n / (n - i)
    return math.log(ratio) - ratio * phi_func(log_binomial(n, i) / n - i_v_gamma / n)


def lemma2_bound(n: int, i: int, i_v_gamma: float) -> float:
    """Upper bound on ``I(X_{i+1}; G)`` given ``I(X_1..X_i; G) = i_v_gamma``.

    Holds for any ``G`` that sees the stream only through its first ``i``
    symbols, under sampling without replacement. Clamped below at 0.
    """
    return max(lemma2_bound_raw(n, i, i_v_gamma), 0.0)


def lemma2_chain_bound(profile: MemoryProfile) -> float:
    """Non-asymptotic KL bound: ``sum_{i=1}^{q-1} lemma2_bound(N, i, s_i log 2)``.

    Valid for any profile; normalizing it first can only tighten the result.
    """
    return math.fsum(
        lemma2_bound(profile.n, i, profile.s[i - 1] * LOG2) for i in range(1, profile.q)
    )


def _memory_sum(profile: MemoryProfile) -> int:
    return sum(profile.s[: profile.q - 1])


def theorem1_leading(profile: MemoryProfile) -> float:
    """``(sum_{i<q} s_i + q log2 N) / (N log2(N/q))``, without the ``1 + o(1)`` factor."""
    n, q = profile.n, profile.q
    if q >= n:
        raise ZeroDivisionError(f"log2(N/q) <= 0 for q={q}, N={n}")
    return (_memory_sum(profile) + q * math.log2(n)) / (n * math.log2(n / q))


def corollary1_leading(profile: MemoryProfile, epsilon: float) -> float:
    """``(sum_{i<q} s_i + q log2 N) / (eps N log2 N)`` for ``q <= N^(1-eps)``."""
    n, q = profile.n, profile.q
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if math.log(q) > (1 - epsilon) * math.log(n) + 1e-12:
        raise ValueError(f"q={q} exceeds N^(1-eps)={n ** (1 - epsilon):.6g}")
    return (_memory_sum(profile) + q * math.log2(n)) / (epsilon * n * math.log2(n))


def theorem2_lower_raw(profile: MemoryProfile) -> float:
    if any(v < 1 for v in profile.s):
        raise ValueError(f"the lower bound needs every s_i >= 1, got {profile.s}")
    n, q = profile.n, profile.q
    return (_memory_sum(profile) - q * (math.log2(n) + 1)) / (n * math.log2(n))


def theorem2_lower(profile: MemoryProfile) -> float:
    """``(sum_{i<q} s_i - q (log2 N + 1)) / (N log2 N)``, clamped below at 0."""
    return max(theorem2_lower_raw(profile), 0.0)


def collision_exact_kl(n: int, k: Sequence[int]) -> float:
    """``-sum log(1 - k_i / N)`` over the given capacities ``k_1 .. k_{q-1}``."""
    if any(v >= n or v < 0 for v in k):
        raise DomainError(f"capacities must lie in [0, {n}), got {tuple(k)}")
    return -math.fsum(math.log1p(-v / n) for v in k)


@dataclass
class BoundReport:
    """Every bound evaluated for one ``(N, q, profile)`` point.

    The leading-term and lower-bound formulas use the profile as given; the chain uses its
    normalized form, which is the tighter valid choice.
    """

    n: int
    q: int
    profile: MemoryProfile
    normalized: MemoryProfile
    lemma2_chain: float
    theorem1_leading: float | None
    corollary1_leading: float | None
    theorem2_lower: float | None
    collision_exact_kl: float | None
    epsilon: float | None = None
    flags: list[str] = field(default_factory=list)

    units = {
        "lemma2_chain": NATS,
        "theorem1_leading": BITS_RATIO,
        "corollary1_leading": BITS_RATIO,
        "theorem2_lower": BITS_RATIO,
        "collision_exact_kl": NATS,
    }

    def row(self) -> dict:
        out = {
            "n": self.n,
            "q": self.q,
            "memory": ",".join(map(str, self.profile.s)),
            "normalized_memory": ",".join(map(str, self.normalized.s)),
            "epsilon": self.epsilon,
        }
        for name, unit in self.units.items():
            out[name] = getattr(self, name)
            out[f"{name}_unit"] = unit
        out["flags"] = ";".join(self.flags)
        return out


def bound_report(profile: MemoryProfile, epsilon: float | None = None) -> BoundReport:
    flags: list[str] = []
    normalized = normalize_profile(profile)
    if normalized != profile:
        flags.append("profile-not-normalized")

    chain = lemma2_chain_bound(normalized)
    t1 = theorem1_leading(profile)
    flags.append("theorem1-asymptotic")
    if 2 * profile.q >= profile.n:
        flags.append("theorem1-degenerate")

    c1 = None
    if epsilon is not None:
        c1 = corollary1_leading(profile, epsilon)
        flags.append("corollary1-asymptotic")

    t2 = kl = None
    if all(v >= 1 for v in profile.s):
        raw = theorem2_lower_raw(profile)
        t2 = max(raw, 0.0)
        if raw < 0:
            flags.append("theorem2-clamped")
        kl = collision_exact_kl(profile.n, derive_capacities(profile).leading)
        if t2 > kl + 1e-9:
            flags.append("theorem2-exceeds-construction")
    if any(lemma2_bound_raw(profile.n, i, normalized.s[i - 1] * LOG2) < 0
           for i in range(1, profile.q)):
        flags.append("lemma2-clamped")

    return BoundReport(
        n=profile.n, q=profile.q, profile=profile, normalized=normalized,
        lemma2_chain=chain, theorem1_leading=t1, corollary1_leading=c1,
        theorem2_lower=t2, collision_exact_kl=kl, epsilon=epsilon, flags=flags,
    )
