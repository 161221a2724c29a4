"""Monte Carlo oracles, independent of the exact formulas they cross-check.

Sampling is uniform on the open 2n-ball: direction from 2n standard normals
normalized to unit length, radius r0 * U^(1/(2n)).  (Rejection sampling is
useless in 2n >= 8 dimensions, this construction is not.)

Determinism contract: an estimate depends only on (parameters, seed).  The
sample stream is split into fixed chunks of 65536; chunk i draws from a
PCG64 generator seeded with the i-th child of SeedSequence(seed), and chunk
partial sums are reduced in chunk order.  Worker scheduling can therefore
never change a result bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate: sample mean, standard error, and provenance."""

    mean: float
    std_error: float
    samples: int
    seed: int

    def sigma_distance(self, exact: float) -> float:
        """|mean - exact| in units of the standard error."""
        diff = abs(self.mean - exact)
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.inf
        return diff / self.std_error

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


def sample_ball(n: int, r0: float, rng: np.random.Generator, size: int | None = None):
    """Uniform points in the open ball of radius r0 in R^(2n).

    Returns a single length-2n array, or a (size, 2n) array when `size` is
    given.  Consumes the rng stream in a fixed order (normals, then radii).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if r0 <= 0:
        raise ValueError(f"r0 must be > 0, got {r0}")
    count = 1 if size is None else size
    directions = rng.standard_normal((count, 2 * n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = r0 * rng.random(count) ** (1.0 / (2 * n))
    points = directions * radii[:, None]
    return points[0] if size is None else points


def _estimate(
    samples: int, seed: int, chunk_values: Callable[[np.random.Generator, int], np.ndarray]
) -> McEstimate:
    """Chunked accumulation with canonical reduction order (see module doc)."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    n_chunks = (samples + CHUNK_SIZE - 1) // CHUNK_SIZE
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    total = 0.0
    total_sq = 0.0
    done = 0
    for child in children:
        count = min(CHUNK_SIZE, samples - done)
        rng = np.random.Generator(np.random.PCG64(child))
        values = chunk_values(rng, count)
        total += float(values.sum())
        total_sq += float(np.square(values).sum())
        done += count
    mean = total / samples
    if samples > 1:
        variance = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    else:
        variance = 0.0
    return McEstimate(
        mean=mean,
        std_error=math.sqrt(variance / samples),
        samples=samples,
        seed=seed,
    )


def mc_ball_moment(
    n: int, l: int, k: int, r0: float, samples: int, seed: int
) -> McEstimate:
    """Estimate the ball moment integral of (|z_1|^2 + ... + |z_l|^2)^k over
    the radius-r0 ball in C^n with Lebesgue measure: ball volume times the
    sample mean of the integrand."""
    _require_moment_params(n, l, k)
    if r0 <= 0:
        raise ValueError(f"r0 must be > 0, got {r0}")
    volume = math.pi**n * r0 ** (2 * n) / math.factorial(n)

    def chunk(rng: np.random.Generator, count: int) -> np.ndarray:
        points = sample_ball(n, r0, rng, count)
        # |z_1|^2 + ... + |z_l|^2 is the sum of the first 2l real squares.
        s = np.square(points[:, : 2 * l]).sum(axis=1)
        return volume * s**k

    return _estimate(samples, seed, chunk)


def mc_cpn_average(n: int, k: int, samples: int, seed: int) -> McEstimate:
    """Estimate the morphism value on CP^n by averaging the trace volume
    (pi^k/k!) (|z_1|^2 + ... + |z_k|^2)^k over the unit ball, whose embedded
    image fills CP^n up to measure zero.  Expected value: q(n,k) pi^k/k!."""
    _require_degree_params(n, k)
    scale = math.pi**k / math.factorial(k)

    def chunk(rng: np.random.Generator, count: int) -> np.ndarray:
        points = sample_ball(n, 1.0, rng, count)
        s = np.square(points[:, : 2 * k]).sum(axis=1)
        return scale * s**k

    return _estimate(samples, seed, chunk)


def mc_blowup_average(n: int, k: int, rho: float, samples: int, seed: int) -> McEstimate:
    """Estimate the morphism value on the weight-rho blow-up of CP^n.

    Realizes the difference of the full-manifold integral and the integral
    over the removed ball as a single stream over the unit ball with the
    complement indicator, normalized by the blow-up volume
    pi^n (1 - rho^(2n))/n!.  Expected value: f_k(rho^2) * pi^k.
    """
    _require_degree_params(n, k)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    scale = math.pi**k / math.factorial(k) / (1.0 - rho ** (2 * n))
    rho_sq = rho * rho

    def chunk(rng: np.random.Generator, count: int) -> np.ndarray:
        points = sample_ball(n, 1.0, rng, count)
        squares = np.square(points)
        s = squares[:, : 2 * k].sum(axis=1)
        outside = squares.sum(axis=1) > rho_sq
        return scale * s**k * outside

    return _estimate(samples, seed, chunk)


def _require_moment_params(n: int, l: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= l <= n:
        raise ValueError(f"l must satisfy 1 <= l <= n, got l={l} with n={n}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")


def _require_degree_params(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k} with n={n}")
