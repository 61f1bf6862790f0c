"""List-storing collision detector that fits any memory profile with ``s_i >= 1``.

State layout after step ``i`` (``s_i`` bits, MSB first)::

    [flag][y_1]...[y_{k_i}][zero padding]

each ``y_j`` is ``ceil(log2 N)`` bits holding ``value - 1``. A repeated symbol
sends the algorithm to the absorbing all-ones state ``1^{s_i}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .streaming import MemoryProfile, StreamAlgorithm, StreamState, state_dtype


@dataclass(frozen=True)
class CapacityVector:
    """Number of list slots ``k_i`` available after each step."""

    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        object.__setattr__(self, "k", k)
        prev = 0
        for i, v in enumerate(k, start=1):
            if v < 0 or v > prev + 1 or v > i:
                raise ValueError(f"invalid capacity vector {k}: k_{i}={v}")
            prev = v

    @property
    def leading(self) -> tuple[int, ...]:
        """``k_1 .. k_{q-1}``: the capacities that can catch a later repeat."""
        return self.k[:-1]

    def __len__(self):
        return len(self.k)


def derive_capacities(profile: MemoryProfile) -> CapacityVector:
    """``k_i = floor((s_i - 1) / L)``, then forced to grow by at most one per step."""
    if any(v < 1 for v in profile.s):
        raise ValueError(f"the collision detector needs every s_i >= 1, got {profile.s}")
    width = profile.symbol_bits
    k: list[int] = []
    prev = 0
    for v in profile.s:
        cap = (v - 1) // width if width else 0
        prev = min(cap, prev + 1)
        k.append(prev)
    return CapacityVector(tuple(k))


def _leading(n: int, k) -> tuple[int, ...]:
    ks = k.leading if isinstance(k, CapacityVector) else tuple(k)[:-1]
    if any(v >= n or v < 0 for v in ks):
        raise ValueError(f"capacities must lie in [0, {n}), got {ks}")
    return ks


def analytic_accept_probability(n: int, k: CapacityVector | Sequence[int]) -> float:
    """``Q[A = 1] = 1 - prod_{i<q} (1 - k_i / n)`` for i.i.d. uniform input."""
    ks = _leading(n, k)
    return float(-math.expm1(math.fsum(math.log1p(-v / n) for v in ks)))


class CollisionAlgorithm(StreamAlgorithm):
    def __init__(self, profile: MemoryProfile):
        super().__init__(profile)
        self.capacities = derive_capacities(profile)
        self.k = self.capacities.k
        self.slot_bits = profile.symbol_bits

    def _slots_in(self, i: int) -> int:
        return 0 if i == 0 else self.k[i - 1]

    def _encode(self, i: int, values: Sequence[int]) -> int:
        width = self.profile.width(i)
        word = 0
        for v in values:
            word = (word << self.slot_bits) | (v - 1)
        return word << (width - 1 - len(values) * self.slot_bits)

    def _decode(self, i: int, word: int) -> list[int]:
        width = self.profile.width(i)
        mask = (1 << self.slot_bits) - 1
        return [
            ((word >> (width - 1 - (j + 1) * self.slot_bits)) & mask) + 1
            for j in range(self._slots_in(i))
        ]

    def step(self, i, state, x):
        width = self.profile.width(i)
        if i > 1 and state.value >> (state.length - 1):
            return StreamState.ones(width)
        stored = self._decode(i - 1, state.value) if i > 1 else []
        if x in stored:
            return StreamState.ones(width)
        if self.k[i - 1] == self._slots_in(i - 1) + 1:
            stored.append(x)
        else:
            stored = stored[: self.k[i - 1]]
        return StreamState(self._encode(i, stored), width)

    def step_batch(self, i, states, xs):
        width_in, width = self.profile.width(i - 1), self.profile.width(i)
        dtype = state_dtype(max(width_in, width))
        xs = np.asarray(xs)
        ones = (1 << width) - 1
        mask = (1 << self.slot_bits) - 1
        k_in, k_out = self._slots_in(i - 1), self.k[i - 1]
        if dtype is object:
            states = states.astype(object)
            xv = (xs - 1).astype(object)
        else:
            states = states.astype(np.uint64)
            xv = (xs - 1).astype(np.uint64)

        hit = (states >> (width_in - 1)).astype(bool) if width_in else np.zeros(len(states), bool)
        slots = []
        for j in range(k_in):
            slot = (states >> (width_in - 1 - (j + 1) * self.slot_bits)) & mask
            hit |= slot == xv
            slots.append(slot)
        if k_out == k_in + 1:
            slots.append(xv)
        else:
            slots = slots[:k_out]

        word = np.zeros(len(states), dtype=dtype)
        for slot in slots:
            word = (word << self.slot_bits) | slot
        word = word << (width - 1 - len(slots) * self.slot_bits)
        out = np.where(hit, np.array(ones, dtype=dtype) if dtype is not object else ones, word)
        return out.astype(state_dtype(width))

    def describe(self):
        return f"collision(k={self.k}, {self.profile})"


def build_collision_algorithm(profile: MemoryProfile) -> CollisionAlgorithm:
    return CollisionAlgorithm(profile)
