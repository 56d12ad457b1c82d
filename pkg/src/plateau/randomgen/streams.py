from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from plateau.randomgen.distributions import DistSpec


@dataclass(frozen=True, slots=True)
class SeededStream:
    """
    Named substream of a 64-bit seed.

    The label is hashed into the `SeedSequence` spawn key and feeds a counter-based Philox
    generator, so distinct labels give independent streams without any coordination and the
    same (seed, label) always replays the same variates.
    """

    seed: int
    label: str = "root"

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def child(self, label: str) -> SeededStream:
        return SeededStream(self.seed, f"{self.label}/{label}")

    def generator(self) -> np.random.Generator:
        digest = hashlib.sha256(self.label.encode("utf-8")).digest()
        key = int.from_bytes(digest[:8], "little")
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=(key,))
        return np.random.Generator(np.random.Philox(sequence))


def sample(spec: DistSpec, stream: SeededStream, n: int) -> np.ndarray:
    """n i.i.d. variates of `spec` from the start of `stream`."""
    return spec.draw(stream.generator(), n)


def stable_jump_ppm(
    alpha: float,
    c_alpha: float,
    horizon: float,
    eps: float,
    stream: SeededStream,
    *,
    start: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Atoms of a Poisson random measure on [start, start + horizon] x (eps, inf) with intensity
    dt x c_alpha x^{-1-alpha} dx.

    Returns sorted jump times and the matching jump sizes. The count is Poisson with mean
    horizon * c_alpha * eps^{-alpha} / alpha and sizes follow the normalised Pareto tail
    (eps / x)^alpha, drawn by inverse transform.
    """

    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    if c_alpha <= 0:
        raise ValueError(f"c_alpha must be positive, got {c_alpha}")
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"truncation eps must lie in (0, 1), got {eps}")

    generator = stream.generator()
    mean_count = horizon * c_alpha * eps ** (-alpha) / alpha
    count = int(generator.poisson(mean_count))
    times = np.sort(generator.uniform(start, start + horizon, size=count))
    uniforms = 1.0 - generator.random(size=count)
    sizes = eps * uniforms ** (-1.0 / alpha)
    return times, sizes


def stable_increments_cms(
    alpha: float, dt: float, n: int, stream: SeededStream
) -> np.ndarray:
    """
    Chambers-Mallows-Stuck increments of a totally skewed alpha-stable motion S with
    E[exp(-s S(t))] = exp(t s^alpha). Only used to cross-check the jump construction.
    """

    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    generator = stream.generator()
    v = generator.uniform(-math.pi / 2, math.pi / 2, size=n)
    w = generator.exponential(1.0, size=n)

    tan_term = math.tan(math.pi * alpha / 2)
    b = math.atan(tan_term) / alpha
    s = (1.0 + tan_term**2) ** (1.0 / (2.0 * alpha))
    x = (
        s
        * np.sin(alpha * (v + b))
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha)
    )
    # beta = 1 law with scale |cos(pi alpha / 2)|^(1/alpha) has Laplace exponent s^alpha.
    sigma = abs(math.cos(math.pi * alpha / 2)) ** (1.0 / alpha)
    return dt ** (1.0 / alpha) * sigma * x
