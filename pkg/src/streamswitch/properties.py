"""Grid checks of the analytic facts the bounds rely on.

Each check returns a ``PropertyCheck`` whose ``worst_slack`` is the minimum
over the grid of ``rhs - lhs`` for an inequality ``lhs <= rhs``; a property
holds when the worst slack is at least ``-tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import (
    LOG2,
    binary_entropy,
    binary_entropy_inverse,
    f_func,
    log_binomial_row,
    phi_func,
)

DEFAULT_GRID = 10_000
FUNC_TOL = 1e-12
ROUNDTRIP_TOL = 1e-10


@dataclass
class PropertyCheck:
    name: str
    worst_slack: float
    where: float | tuple | None
    points: int
    tol: float = FUNC_TOL

    @property
    def passed(self) -> bool:
        return self.worst_slack >= -self.tol

    def row(self) -> dict:
        return {
            "property": self.name,
            "worst_slack": self.worst_slack,
            "where": repr(self.where),
            "points": self.points,
            "tol": self.tol,
            "passed": self.passed,
        }


def _worst(name, slack: np.ndarray, where: np.ndarray, tol=FUNC_TOL) -> PropertyCheck:
    j = int(np.argmin(slack))
    loc = where[j]
    loc = tuple(float(v) for v in loc) if np.ndim(loc) else float(loc)
    return PropertyCheck(name, float(slack[j]), loc, len(slack), tol)


def check_f_monotone(points: int = DEFAULT_GRID) -> PropertyCheck:
    """``f`` nondecreasing on ``[0, 1/2]``."""
    x = np.linspace(0.0, 0.5, points)
    fx = np.array([f_func(v) for v in x])
    return _worst("f nondecreasing on [0,1/2]", fx[1:] - fx[:-1], x[1:])


def _phi_grid(points: int):
    t = np.linspace(0.0, LOG2, points)
    return t, np.array([phi_func(v) for v in t])


def check_phi_monotone(points: int = DEFAULT_GRID, grid=None) -> PropertyCheck:
    t, ph = grid or _phi_grid(points)
    return _worst("phi nondecreasing on [0,log 2]", ph[1:] - ph[:-1], t[1:])


def check_phi_convex(points: int = DEFAULT_GRID, grid=None,
                     strides=(1, 2, 3, 7, 10, 31, 100, 316, 1000, 3162)) -> PropertyCheck:
    """Midpoint convexity ``phi((a+b)/2) <= (phi(a)+phi(b))/2`` for symmetric grid pairs."""
    t, ph = grid or _phi_grid(points)
    slacks, where = [], []
    for k in strides:
        if 2 * k >= len(t):
            continue
        mid = ph[k:-k]
        # t[j-k], t[j+k] have t[j] as exact midpoint on a uniform grid
        slacks.append((ph[:-2 * k] + ph[2 * k:]) / 2 - mid)
        where.append(np.stack([t[:-2 * k], t[2 * k:]], axis=1))
    return _worst("phi midpoint-convex on [0,log 2]", np.concatenate(slacks), np.concatenate(where))


def check_f_dominates_phi_h2(points: int = DEFAULT_GRID) -> PropertyCheck:
    """``f(t) >= phi(h2(t))`` on ``[0, 1]``."""
    t = np.linspace(0.0, 1.0, points)
    slack = np.array([f_func(v) - phi_func(binary_entropy(v)) for v in t])
    return _worst("f(t) >= phi(h2(t)) on [0,1]", slack, t)


def check_roundtrip(points: int = DEFAULT_GRID) -> PropertyCheck:
    """``|h2(h2^{-1}(t)) - t| <= 1e-10`` on ``[0, log 2]``."""
    t = np.linspace(0.0, LOG2, points)
    err = np.array([abs(binary_entropy(binary_entropy_inverse(v)) - v) for v in t])
    return _worst("h2(h2^-1(t)) = t on [0,log 2]", ROUNDTRIP_TOL - err, t, tol=0.0)


def check_stirling(max_n: int = 1000) -> tuple[PropertyCheck, PropertyCheck]:
    """Both sides of the Stirling sandwich on ``log C(N, i)`` for ``1 <= i < N <= max_n``."""
    lower_slack, upper_slack, where = [], [], []
    for n in range(2, max_n + 1):
        i = np.arange(1, n, dtype=float)
        a = i / n
        nh = -n * (a * np.log(a) + (1 - a) * np.log1p(-a))
        exact = log_binomial_row(n)[1:n]
        lower_slack.append(exact - (nh - 0.5 * np.log(8 * i * (1 - a))))
        upper_slack.append((nh - 0.5 * np.log(2 * math.pi * i * (1 - a))) - exact)
        where.append(np.stack([np.full(n - 1, n), i], axis=1))
    where = np.concatenate(where)
    return (
        _worst("stirling lower estimate <= log C(N,i)", np.concatenate(lower_slack), where),
        _worst("log C(N,i) <= stirling upper estimate", np.concatenate(upper_slack), where),
    )


def run_all(points: int = DEFAULT_GRID, stirling_max: int = 1000) -> list[PropertyCheck]:
    if points < 10:
        raise ValueError("grid resolution must be at least 10")
    grid = _phi_grid(points)
    return [
        check_f_monotone(points),
        check_phi_monotone(grid=grid),
        check_phi_convex(grid=grid),
        check_f_dominates_phi_h2(points),
        check_roundtrip(points),
        *check_stirling(stirling_max),
    ]
