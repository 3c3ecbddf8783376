"""Empirical characteristic function on a symmetric frequency grid.

The grid is uniform with an odd number of points and ``t = 0`` in the
middle. Values are computed for ``t >= 0`` and mirrored by conjugation, so
Hermitian symmetry holds exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

DEFAULT_GRID_SIZE = 2049
ZERO_MODULUS = 1e-300
MAX_UNWRAP_STEP = math.pi / 2
MAX_REFINEMENTS = 4

_SAMPLE_CHUNK = 1 << 16


class ZeroModulus(ArithmeticError):
    """The ECF vanishes on the grid; the distinguished logarithm is undefined."""


class UnresolvedWinding(ArithmeticError):
    """Phase increments stayed too large after the maximum number of refinements."""


def symmetric_grid(cutoff: float, grid_size: int) -> np.ndarray:
    if grid_size < 3 or grid_size % 2 == 0:
        raise ValueError("grid_size must be an odd integer >= 3")
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    m = grid_size // 2
    half = np.arange(m + 1) * (cutoff / m)
    half[-1] = cutoff
    return np.concatenate([-half[:0:-1], half])


def _ecf_half(x: np.ndarray, dt: float, count: int) -> np.ndarray:
    """ECF at ``t_k = k*dt`` for ``k < count``.

    Writes ``k = B*b + r`` so that ``exp(i t_k x) = exp(i B b dt x) exp(i r dt x)``;
    the sum over the sample then becomes one complex matrix product.
    """
    block = max(1, int(math.isqrt(count)))
    nblocks = -(-count // block)
    acc = np.zeros((nblocks, block), dtype=complex)
    outer_t = np.arange(nblocks) * (block * dt)
    inner_t = np.arange(block) * dt
    for start in range(0, x.size, _SAMPLE_CHUNK):
        xs = x[start : start + _SAMPLE_CHUNK]
        outer = np.exp(1j * np.outer(outer_t, xs))
        inner = np.exp(1j * np.outer(inner_t, xs))
        acc += outer @ inner.T
    return acc.ravel()[:count] / x.size


def ecf_on_grid(sample, cutoff: float, grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(points, values)`` of the ECF on the symmetric uniform grid."""
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    points = symmetric_grid(cutoff, grid_size)
    m = grid_size // 2
    half = _ecf_half(x, cutoff / m, m + 1)
    half[0] = 1.0
    values = np.concatenate([np.conj(half[:0:-1]), half])
    return points, values


def ecf(sample, t) -> np.ndarray:
    """ECF at arbitrary frequencies (direct, chunked)."""
    x = np.asarray(sample, dtype=float).ravel()
    t = np.asarray(t, dtype=float)
    flat = t.ravel()
    out = np.empty(flat.size, dtype=complex)
    for i in range(0, flat.size, 64):
        out[i : i + 64] = np.exp(1j * np.outer(flat[i : i + 64], x)).mean(axis=1)
    return out.reshape(t.shape)


@dataclass(frozen=True)
class EcfGrid:
    cutoff: float
    points: np.ndarray
    values: np.ndarray
    log_modulus: Optional[np.ndarray] = None
    unwrapped_arg: Optional[np.ndarray] = None
    zero_risk_flag: bool = False
    refinements: int = 0
    # (cutoff, grid_size) -> values on symmetric_grid(cutoff, grid_size)
    source: Optional[Callable] = field(default=None, repr=False, compare=False)

    @property
    def grid_size(self) -> int:
        return self.points.size

    @property
    def center(self) -> int:
        return self.points.size // 2

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "re", "im", "log_modulus", "unwrapped_arg"])
            lm = self.log_modulus if self.log_modulus is not None else np.full(self.grid_size, np.nan)
            ua = self.unwrapped_arg if self.unwrapped_arg is not None else np.full(self.grid_size, np.nan)
            for row in zip(self.points, self.values.real, self.values.imag, lm, ua):
                w.writerow([repr(float(v)) for v in row])


def _principal_steps(values):
    m = values.size // 2
    up = np.angle(values[m + 1 :] / values[m:-1])
    down = np.angle(values[:m][::-1] / values[1 : m + 1][::-1])
    return up, down


def _unwrap_from_center(values):
    """Continuous argument, anchored at 0 in the center, by outward accumulation.

    The accumulated steps only decide the winding number at each point; the
    returned argument is the principal argument plus that multiple of 2*pi,
    so ``exp(log|z| + i*arg)`` reproduces ``z`` to rounding.
    """
    m = values.size // 2
    up, down = _principal_steps(values)
    approx = np.empty(values.size)
    approx[m] = 0.0
    approx[m + 1 :] = np.cumsum(up)
    approx[:m] = np.cumsum(down)[::-1]
    principal = np.angle(values)
    winding = np.round((approx - principal) / (2 * math.pi))
    arg = principal + 2 * math.pi * winding
    arg[m] = 0.0
    return arg


def _max_step(values):
    up, down = _principal_steps(values)
    return max(np.max(np.abs(up), initial=0.0), np.max(np.abs(down), initial=0.0))


def dist_log(grid: EcfGrid, max_refinements: int = MAX_REFINEMENTS) -> EcfGrid:
    """Fill ``log_modulus`` and ``unwrapped_arg`` (distinguished logarithm).

    Raises ``ZeroModulus`` when the ECF vanishes on the grid and
    ``UnresolvedWinding`` when phase steps above pi/2 survive the allowed
    grid doublings (or no source is available to refine from).
    """
    values = grid.values
    modulus = np.abs(values)
    if np.any(modulus < ZERO_MODULUS):
        raise ZeroModulus(f"|ECF| = {modulus.min():.3g} on the grid")

    fine, refinements = values, 0
    while _max_step(fine) > MAX_UNWRAP_STEP:
        if grid.source is None or refinements >= max_refinements:
            raise UnresolvedWinding(
                f"phase step {_max_step(fine):.3f} > pi/2 after {refinements} refinements"
            )
        refinements += 1
        size = (grid.grid_size - 1) * 2**refinements + 1
        fine = grid.source(grid.cutoff, size)
        if np.any(np.abs(fine) < ZERO_MODULUS):
            raise ZeroModulus("|ECF| vanishes on the refined grid")

    arg = _unwrap_from_center(fine)[:: 2**refinements]
    return replace(grid, log_modulus=np.log(modulus), unwrapped_arg=arg, refinements=refinements)


def compute_ecf(sample, cutoff: float, grid_size: int = DEFAULT_GRID_SIZE) -> EcfGrid:
    """ECF of ``sample`` on ``[-cutoff, cutoff]`` with its distinguished logarithm.

    If the ECF vanishes somewhere on the grid, the argument is set to zero
    everywhere and ``zero_risk_flag`` is raised; the log-modulus is floored.
    ``UnresolvedWinding`` propagates.
    """
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("sample must be nonempty")

    def source(c, size):
        return ecf_on_grid(x, c, size)[1]

    points, values = ecf_on_grid(x, cutoff, grid_size)
    grid = EcfGrid(cutoff=float(cutoff), points=points, values=values, source=source)
    return fill_log(grid)


def fill_log(grid: EcfGrid) -> EcfGrid:
    try:
        return dist_log(grid)
    except ZeroModulus:
        log_mod = np.log(np.maximum(np.abs(grid.values), ZERO_MODULUS))
        return replace(
            grid,
            log_modulus=log_mod,
            unwrapped_arg=np.zeros(grid.grid_size),
            zero_risk_flag=True,
        )


def clamp(values, M_n: float) -> np.ndarray:
    return np.clip(values, -M_n, M_n)


def truncate_log_modulus(grid: EcfGrid, M_n: float) -> np.ndarray:
    return clamp(grid.log_modulus, M_n)


def truncate_arg(grid: EcfGrid, M_n: float) -> np.ndarray:
    return clamp(grid.unwrapped_arg, M_n)


@dataclass(frozen=True)
class ZeroRiskResult:
    flagged: bool
    margin: float
    delta: float
    min_modulus: float


def zero_risk_threshold(Lambda: float, Sigma: float, h: float) -> float:
    """Half the uniform lower bound on ``|phi_X|`` over ``[-1/h, 1/h]``."""
    return 0.5 * math.exp(-2 * Lambda - Sigma**2 / (2 * h * h))


def zero_risk_diagnostic(grid: EcfGrid, params, h: float) -> ZeroRiskResult:
    """Flag grids whose ECF modulus falls below ``delta``.

    Off the deviation event the ECF modulus is at least ``delta``, so a
    smaller minimum means the sample sits inside it (or close to it).
    """
    delta = zero_risk_threshold(params.Lambda, params.Sigma, h)
    min_mod = float(np.min(np.abs(grid.values)))
    return ZeroRiskResult(min_mod < delta, min_mod - delta, delta, min_mod)
