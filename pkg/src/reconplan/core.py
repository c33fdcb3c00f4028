"""Shared abstractions for finite-horizon partially observable planning.

Rewards are factored: a domain exposes a per-(state, action) feature vector
and the scalar reward is the dot product of that vector with a non-negative
weighting. Everything downstream (planning, weighting recovery, explanation)
relies on that linearity.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import DimensionMismatchError
from .rng import SeededStream


@dataclass(frozen=True)
class Weighting:
    """Non-negative multipliers over reward features."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if not math.isfinite(v):
                raise ValueError("weighting entries must be finite")
            if v < 0:
                raise ValueError("weighting entries must be non-negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def ones(cls, n: int) -> "Weighting":
        return cls((1.0,) * n)


@dataclass(frozen=True)
class FeatureVector:
    """Per-(state, action) reward feature evaluation, in reward units."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if not math.isfinite(v):
                raise ValueError("feature entries must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


def _values_of(x: Any) -> tuple[float, ...]:
    if isinstance(x, (Weighting, FeatureVector)):
        return x.values
    return tuple(float(v) for v in x)


def reward(features: FeatureVector | Iterable[float], phi: Weighting | Iterable[float]) -> float:
    """Scalar reward: dot product of a feature vector with a weighting."""
    f = _values_of(features)
    w = _values_of(phi)
    if len(f) != len(w):
        raise DimensionMismatchError(f"feature length {len(f)} != weighting length {len(w)}")
    return float(sum(fi * wi for fi, wi in zip(f, w)))


class PomdpModel(ABC):
    """Discrete-time, finite-horizon POMDP with factored rewards.

    Implementations must document how many stream draws each sampling call
    consumes; the planner relies on a fixed draw count per call to keep
    determinized scenarios aligned across actions.
    """

    feature_count: int
    action_count: int
    discount: float
    horizon: int

    def _check_params(self):
        if self.feature_count < 1:
            raise ValueError("feature_count must be positive")
        if self.action_count < 1:
            raise ValueError("action_count must be positive")
        if not (0.0 < self.discount <= 1.0):
            raise ValueError("discount must lie in (0, 1]")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")

    @abstractmethod
    def transition_sample(self, state, action: int, stream: SeededStream):
        """Draw a successor state; consumes a fixed number of stream draws."""

    @abstractmethod
    def observation_sample(self, prev_action: int, next_state, stream: SeededStream):
        """Draw an observation of next_state; consumes a fixed number of draws."""

    @abstractmethod
    def observation_prob(self, observation, prev_action: int, next_state) -> float:
        """Exact likelihood of the observation given (action, next_state)."""

    @abstractmethod
    def features(self, state, action: int) -> FeatureVector:
        """Deterministic reward features of (state, action)."""
