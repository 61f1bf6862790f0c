"""Memory-bounded streaming computations over the alphabet ``[N] = {1, ..., N}``.

A streaming algorithm starts from the empty state and applies
``state_i = step(i, state_{i-1}, x_i)`` for ``i = 1..q``; the state after step
``i`` must be exactly ``s_i`` bits wide. States are fixed-width bit strings
stored as nonnegative integers, most significant bit first.

Besides the scalar ``step`` every algorithm exposes ``step_batch``, which
advances a whole array of states at once. The exact enumerator and the Monte
Carlo estimators only use the batched form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

DEFAULT_TABLE_CAP = 10**6


class StateWidthError(RuntimeError):
    """A step produced a state whose width differs from the memory profile."""


class CapExceededError(RuntimeError):
    """An instance is too large for exhaustive tabulation or enumeration."""


def value_bits(n: int) -> int:
    """``ceil(log2 n)``: bits needed to store one symbol of ``[n]``."""
    return (n - 1).bit_length() if n > 1 else 0


@dataclass(frozen=True)
class MemoryProfile:
    """Alphabet size ``n``, stream length ``q`` and per-step state widths ``s``."""

    n: int
    q: int
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))
        if self.n < 2:
            raise ValueError(f"alphabet size must be at least 2, got {self.n}")
        if not 1 <= self.q < self.n:
            raise ValueError(f"stream length must satisfy 1 <= q < n, got q={self.q}, n={self.n}")
        if len(self.s) != self.q:
            raise ValueError(f"expected {self.q} state widths, got {len(self.s)}")
        if any(v < 0 for v in self.s):
            raise ValueError("state widths must be nonnegative")

    @classmethod
    def constant(cls, n: int, q: int, s: int) -> "MemoryProfile":
        return cls(n, q, (s,) * q)

    @property
    def symbol_bits(self) -> int:
        return value_bits(self.n)

    def width(self, i: int) -> int:
        """Width of the state after step ``i``; step 0 is the empty state."""
        return 0 if i == 0 else self.s[i - 1]

    def is_normalized(self) -> bool:
        return normalize_profile(self) == self

    def __str__(self):
        return f"N={self.n} q={self.q} s=({','.join(map(str, self.s))})"


def normalize_profile(raw: MemoryProfile) -> MemoryProfile:
    """Cap every step's growth at ``ceil(log2 N)`` bits.

    ``s'_1 = min(s_1, L)`` and ``s'_{i+1} = min(s_{i+1}, s'_i + L)``. Any
    algorithm for the raw profile can be simulated within the capped one (see
    ``NormalizedSimulation``).
    """
    width = raw.symbol_bits
    out: list[int] = []
    prev = 0
    for v in raw.s:
        prev = min(v, prev + width)
        out.append(prev)
    return MemoryProfile(raw.n, raw.q, tuple(out))


def parse_profile(text: str, n: int, q: int) -> MemoryProfile:
    """Parse ``"const:<s>"`` or ``"s1,s2,...,sq"`` into a raw profile."""
    text = text.strip()
    if text.startswith("const:"):
        try:
            s = int(text[len("const:"):])
        except ValueError:
            raise ValueError(f"bad constant memory spec {text!r}") from None
        return MemoryProfile.constant(n, q, s)
    try:
        widths = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"bad memory spec {text!r}") from None
    return MemoryProfile(n, q, widths)


@dataclass(frozen=True)
class StreamState:
    """A fixed-width bit string; ``value`` holds the bits, MSB first."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0 or not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def empty(cls) -> "StreamState":
        return cls(0, 0)

    @classmethod
    def ones(cls, length: int) -> "StreamState":
        return cls((1 << length) - 1, length)

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __str__(self):
        return self.bits or "<empty>"


def state_dtype(max_width: int):
    """Array dtype able to hold states up to ``max_width`` bits."""
    return np.uint64 if max_width <= 64 else object


def check_widths(states: np.ndarray, width: int, step: int) -> None:
    if width >= 64 or len(states) == 0:
        if states.dtype == object and any(int(v) >> width for v in states):
            raise StateWidthError(f"step {step} emitted a state wider than {width} bits")
        return
    if np.any(states >> width):
        raise StateWidthError(f"step {step} emitted a state wider than {width} bits")


class StreamAlgorithm:
    """Deterministic streaming algorithm bound to a memory profile.

    Subclasses implement ``step``; ``step_batch`` defaults to evaluating
    ``step`` once per distinct ``(state, symbol)`` pair.
    """

    def __init__(self, profile: MemoryProfile):
        self.profile = profile

    def step(self, i: int, state: StreamState, x: int) -> StreamState:
        raise NotImplementedError

    def step_batch(self, i: int, states: np.ndarray, xs: np.ndarray) -> np.ndarray:
        width_in, width_out = self.profile.width(i - 1), self.profile.width(i)
        out = np.empty(len(states), dtype=state_dtype(width_out))
        if len(states) == 0:
            return out
        memo: dict[tuple[int, int], int] = {}
        for r, (v, x) in enumerate(zip(states.tolist(), xs.tolist())):
            key = (int(v), int(x))
            if key not in memo:
                memo[key] = self.step(i, StreamState(key[0], width_in), key[1]).value
            out[r] = memo[key]
        return out

    def output_bit(self, state: StreamState) -> int:
        """Decision bit: the first bit of the final state (0 if it is empty)."""
        return state.value >> (state.length - 1) if state.length else 0

    def output_bits(self, states: np.ndarray) -> np.ndarray:
        width = self.profile.width(self.profile.q)
        if width == 0:
            return np.zeros(len(states), dtype=np.int64)
        return (states >> (width - 1)).astype(np.int64)

    def describe(self) -> str:
        return f"{type(self).__name__}({self.profile})"


class FunctionAlgorithm(StreamAlgorithm):
    """Wrap a plain ``step(i, state_value, x) -> state_value`` callable."""

    def __init__(self, profile: MemoryProfile, fn: Callable[[int, int, int], int], name="custom"):
        super().__init__(profile)
        self._fn = fn
        self.name = name

    def step(self, i, state, x):
        return StreamState(int(self._fn(i, state.value, x)), self.profile.width(i))

    def describe(self):
        return f"{self.name}({self.profile})"


class ConstantAlgorithm(StreamAlgorithm):
    """Ignores its input and keeps every state at all zeros."""

    def step(self, i, state, x):
        return StreamState(0, self.profile.width(i))

    def step_batch(self, i, states, xs):
        return np.zeros(len(states), dtype=state_dtype(self.profile.width(i)))


class TableAlgorithm(StreamAlgorithm):
    """Step function stored as lookup tables ``tables[i-1][state, x-1]``."""

    def __init__(self, profile: MemoryProfile, tables: Sequence[np.ndarray], name="table"):
        super().__init__(profile)
        self.tables = tuple(np.asarray(t, dtype=np.uint64) for t in tables)
        self.name = name
        for i, table in enumerate(self.tables, start=1):
            if table.shape != (1 << profile.width(i - 1), profile.n):
                raise ValueError(f"table {i} has shape {table.shape}")
            check_widths(table.ravel(), profile.width(i), i)
        for t in self.tables:
            t.setflags(write=False)

    def step(self, i, state, x):
        return StreamState(int(self.tables[i - 1][state.value, x - 1]), self.profile.width(i))

    def step_batch(self, i, states, xs):
        return self.tables[i - 1][states.astype(np.int64), np.asarray(xs, dtype=np.int64) - 1]

    def describe(self):
        return f"{self.name}({self.profile})"


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_algorithm(profile: MemoryProfile, seed, cap: int = DEFAULT_TABLE_CAP) -> TableAlgorithm:
    """Algorithm whose next states are drawn uniformly, reproducible from ``seed``."""
    entries = sum((1 << profile.width(i - 1)) * profile.n for i in range(1, profile.q + 1))
    if entries > cap:
        raise CapExceededError(f"{entries} table entries exceed the cap of {cap}")
    rng = _rng(seed)
    tables = [
        rng.integers(0, 1 << profile.width(i), size=(1 << profile.width(i - 1), profile.n),
                     dtype=np.uint64, endpoint=False)
        for i in range(1, profile.q + 1)
    ]
    return TableAlgorithm(profile, tables, name=f"random[seed={seed}]")


class NormalizedSimulation(StreamAlgorithm):
    """Run ``inner`` inside the normalized version of its memory profile.

    Whenever the capped width is smaller than the original one, the new state
    is the previous (simulated) state followed by the raw symbol; the inner
    state is rebuilt on demand by replaying the stored symbols.
    """

    def __init__(self, inner: StreamAlgorithm):
        super().__init__(normalize_profile(inner.profile))
        self.inner = inner
        self._raw = inner.profile
        self._bits = inner.profile.symbol_bits

    def _is_direct(self, i: int) -> bool:
        return self.profile.width(i) == self._raw.width(i)

    def decode(self, i: int, state: StreamState) -> StreamState:
        """Recover the inner algorithm's state after step ``i``."""
        if self._is_direct(i):
            return StreamState(state.value, self._raw.width(i))
        prev = StreamState(state.value >> self._bits, self.profile.width(i - 1))
        x = (state.value & ((1 << self._bits) - 1)) + 1
        return self.inner.step(i, self.decode(i - 1, prev), x)

    def step(self, i, state, x):
        if self._is_direct(i):
            inner = self.inner.step(i, self.decode(i - 1, state), x)
            return StreamState(inner.value, self.profile.width(i))
        return StreamState((state.value << self._bits) | (x - 1), self.profile.width(i))

    def output_bit(self, state):
        return self.inner.output_bit(self.decode(self.profile.q, state))

    def output_bits(self, states):
        q = self.profile.q
        return np.array(
            [self.output_bit(StreamState(int(v), self.profile.width(q))) for v in states.tolist()],
            dtype=np.int64,
        )


def run_stream(alg: StreamAlgorithm, x: Sequence[int]) -> StreamState:
    """Run ``alg`` over the stream ``x`` and return the final state."""
    profile = alg.profile
    if len(x) != profile.q:
        raise ValueError(f"stream has length {len(x)}, profile expects {profile.q}")
    state = StreamState.empty()
    for i, xi in enumerate(x, start=1):
        if not 1 <= xi <= profile.n:
            raise ValueError(f"symbol {xi} at position {i} is outside [1, {profile.n}]")
        state = alg.step(i, state, int(xi))
        if state.length != profile.width(i):
            raise StateWidthError(
                f"{alg.describe()}: step {i} emitted {state.length} bits, expected {profile.width(i)}"
            )
    return state


def run_batch(alg: StreamAlgorithm, xs: np.ndarray, check: bool = True) -> np.ndarray:
    """Final states for every row of the ``(rows, q)`` symbol matrix ``xs``."""
    profile = alg.profile
    xs = np.asarray(xs)
    if xs.ndim != 2 or xs.shape[1] != profile.q:
        raise ValueError(f"expected a (rows, {profile.q}) array, got shape {xs.shape}")
    states = np.zeros(len(xs), dtype=state_dtype(0))
    for i in range(1, profile.q + 1):
        states = alg.step_batch(i, states, xs[:, i - 1])
        if check:
            check_widths(states, profile.width(i), i)
    return states


def sample_with_replacement(n: int, q: int, seed) -> list[int]:
    """``q`` independent uniform draws from ``[n]``."""
    if q < 1:
        raise ValueError("q must be at least 1")
    return _rng(seed).integers(1, n + 1, size=q).tolist()


def sample_without_replacement(n: int, q: int, seed) -> list[int]:
    """The first ``q`` entries of a uniform random permutation of ``[n]``.

    Rejection against a seen-set when ``q <= n/2``; otherwise a partial
    Fisher-Yates shuffle over a sparse index map.
    """
    if not 1 <= q < n:
        raise ValueError(f"need 1 <= q < n, got q={q}, n={n}")
    rng = _rng(seed)
    if 2 * q <= n:
        seen: set[int] = set()
        out = []
        while len(out) < q:
            v = int(rng.integers(1, n + 1))
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out
    swapped: dict[int, int] = {}
    out = []
    for j in range(q):
        r = int(rng.integers(j, n))
        vj, vr = swapped.get(j, j), swapped.get(r, r)
        swapped[r] = vj
        out.append(vr + 1)
    return out


def sample_batch(n: int, q: int, rows: int, rng: np.random.Generator, replace: bool) -> np.ndarray:
    """``(rows, q)`` matrix of streams, sampled with or without replacement."""
    xs = rng.integers(1, n + 1, size=(rows, q), dtype=np.int64)
    if replace:
        return xs
    if not 1 <= q < n:
        raise ValueError(f"need 1 <= q < n, got q={q}, n={n}")
    # i.i.d. rows conditioned on having no repeat are uniform over distinct tuples
    if q * (q - 1) > 4 * n:
        return np.array([sample_without_replacement(n, q, rng) for _ in range(rows)], dtype=np.int64)
    pending = np.arange(rows)
    while len(pending):
        block = xs[pending]
        srt = np.sort(block, axis=1)
        dup = np.any(srt[:, 1:] == srt[:, :-1], axis=1)
        pending = pending[dup]
        if len(pending):
            xs[pending] = rng.integers(1, n + 1, size=(len(pending), q), dtype=np.int64)
    return xs
