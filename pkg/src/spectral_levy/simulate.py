"""Seeded simulation of unit-spaced Levy increments.

Each increment is ``gamma + sigma*Z + sum_{i<=N} W_i`` with ``Z`` standard
normal, ``N ~ Poisson(lam)`` and ``W_i`` i.i.d. from the jump density.

Randomness comes from numpy's PCG64 bit generator seeded through a
``SeedSequence``. Draw order within one call is fixed (normals, then
Poisson counts, then all jump sizes), so a given ``(seed, triplet, n)``
reproduces the sample bit for bit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .model import JumpDensity, LevyTriplet

GENERATOR = "numpy.random.PCG64"


def make_rng(*seed_words) -> np.random.Generator:
    """Generator for an explicit seed, or for a (master, ...) stream key."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(s) for s in seed_words])))


def sample_jumps(density: JumpDensity, rng: np.random.Generator, size) -> np.ndarray:
    fam, p = density.family, density.params
    if fam == "gaussian":
        return p[0] + p[1] * rng.standard_normal(size)
    u = rng.random(size)
    if fam == "uniform_sym":
        return p[0] * (2.0 * u - 1.0)
    if fam == "laplace":
        loc, scale = p
    else:
        loc, scale = 0.0, 1.0 / p[0]
    # inverse CDF of the Laplace law; u is in [0, 1), so 1 - 2|u - 1/2| > 0
    centered = u - 0.5
    return loc - scale * np.sign(centered) * np.log1p(-2.0 * np.abs(centered))


def sample_jump(density: JumpDensity, rng: np.random.Generator) -> float:
    return float(sample_jumps(density, rng, 1)[0])


@dataclass(frozen=True)
class IncrementSample:
    values: np.ndarray
    seed: object
    triplet: LevyTriplet
    jump_counts: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.values.size


def simulate_increments(triplet: LevyTriplet, n: int, seed) -> IncrementSample:
    """Simulate ``n`` increments; ``seed`` is an int or a tuple of ints."""
    if n < 1:
        raise ValueError("n must be at least 1")
    words = seed if isinstance(seed, (tuple, list)) else (seed,)
    rng = make_rng(*words)
    z = rng.standard_normal(n)
    counts = rng.poisson(triplet.lam, n) if triplet.lam > 0 else np.zeros(n, dtype=np.int64)
    jumps = sample_jumps(triplet.jump_density, rng, int(counts.sum()))
    owner = np.repeat(np.arange(n), counts)
    jump_sums = np.bincount(owner, weights=jumps, minlength=n)
    values = triplet.gamma + triplet.sigma * z + jump_sums
    return IncrementSample(values=values, seed=seed, triplet=triplet, jump_counts=counts)


def write_sample_csv(values, path):
    with open(path, "w", newline="") as fh:
        for v in np.asarray(values, dtype=float):
            fh.write(repr(float(v)) + "\n")


class SampleFormatError(ValueError):
    pass


def read_sample_csv(path) -> np.ndarray:
    """One increment per line; a single non-numeric header line is tolerated."""
    values = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 1:
                raise SampleFormatError(f"{path}:{lineno}: expected one value per line, got {len(row)}")
            try:
                values.append(float(row[0]))
            except ValueError:
                if lineno == 1 and not values:
                    continue
                raise SampleFormatError(f"{path}:{lineno}: not a number: {row[0]!r}") from None
    if not values:
        raise SampleFormatError(f"{path}: no increments found")
    arr = np.asarray(values)
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise SampleFormatError(f"{path}: non-finite increment at value {bad + 1}")
    return arr
