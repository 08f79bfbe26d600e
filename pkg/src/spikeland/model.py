"""Shared parameter and value types used across the library."""

from __future__ import annotations

import dataclasses
import math


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """Parameters of the spiked tensor landscape.

    p    : tensor order of the random part (>= 3)
    k    : exponent of the planted rank-one term (>= 1)
    snr  : nonnegative signal-to-noise ratio multiplying the planted term
    """

    p: int
    k: int
    snr: float

    def __post_init__(self):
        if int(self.p) != self.p or int(self.k) != self.k:
            raise ValueError("p and k must be integers")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "snr", float(self.snr))
        if self.p < 3:
            raise ValueError(f"tensor order p must be >= 3, got {self.p}")
        if self.k < 1:
            raise ValueError(f"spike exponent k must be >= 1, got {self.k}")
        if not self.snr >= 0.0:
            raise ValueError(f"signal-to-noise ratio must be >= 0, got {self.snr}")


@dataclasses.dataclass(frozen=True)
class LandscapePoint:
    """A point on the landscape described by latitude and energy.

    m : overlap with the planted direction, strictly inside (-1, 1)
    x : energy density
    y : rescaled energy (affine image of x at fixed latitude)
    """

    m: float
    x: float
    y: float

    def __post_init__(self):
        if not abs(self.m) < 1.0:
            raise ValueError("latitude m must lie strictly inside (-1, 1)")


@dataclasses.dataclass(frozen=True)
class ComplexityValue:
    """Annealed complexity exponent; -inf above the bulk edge.

    value is NEGATIVE_INFINITY exactly when the rescaled energy exceeds
    -sqrt(2), where the exponential count vanishes.
    """

    value: float

    def __float__(self) -> float:
        return float(self.value)

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)
