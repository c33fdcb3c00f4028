"""Bootstrap particle filter over the hidden location statuses.

Availability and the timestep are fully observable, so every particle in a
belief carries identical values for them; only (status, onset) varies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BeliefDepletionError
from .hvac import (
    HvacConfig,
    HvacObservation,
    HvacState,
    Status,
    hvac_observation_prob,
    hvac_transition_sample,
)
from .rng import SeededStream

DEPLETION_RETRIES = 10
_WEIGHT_TOL = 1e-9


@dataclass(eq=False)
class ParticleBelief:
    """Weighted particle approximation of the belief state.

    Treated as immutable after construction; updates return new beliefs.
    """

    particles: tuple[HvacState, ...]
    weights: np.ndarray

    def __post_init__(self):
        self.particles = tuple(self.particles)
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.particles) == 0:
            raise ValueError("belief needs at least one particle")
        if self.weights.shape != (len(self.particles),):
            raise ValueError("one weight per particle required")
        if np.any(self.weights < 0):
            raise ValueError("weights must be non-negative")
        if abs(float(self.weights.sum()) - 1.0) > _WEIGHT_TOL:
            raise ValueError("weights must sum to 1")
        first = self.particles[0]
        for p in self.particles:
            if p.t != first.t or p.availability != first.availability:
                raise ValueError("particles must agree on availability and timestep")

    @property
    def count(self) -> int:
        return len(self.particles)

    @property
    def timestep(self) -> int:
        return self.particles[0].t

    @property
    def availability(self) -> tuple[tuple[bool, ...], ...]:
        return self.particles[0].availability


def initial_belief(config: HvacConfig, state: HvacState, count: int) -> ParticleBelief:
    """Exact initial belief: the start state is fully known."""
    if count < 1:
        raise ValueError("count must be positive")
    return ParticleBelief((state,) * count, np.full(count, 1.0 / count))


def systematic_resample(weights: np.ndarray, u: float) -> np.ndarray:
    """Systematic resampling offsets by a single uniform draw; returns indices."""
    k = len(weights)
    positions = (np.arange(k) + u) / k
    cumulative = np.cumsum(weights)
    cumulative[-1] = 1.0  # guard against round-off in the final bucket
    return np.searchsorted(cumulative, positions, side="right")


def belief_update(belief: ParticleBelief, action: tuple[int, ...], observation: HvacObservation,
                  config: HvacConfig, stream: SeededStream, strict: bool = False) -> ParticleBelief:
    """Propagate, reweight by observation likelihood, and resample.

    Propagation re-runs up to DEPLETION_RETRIES times with fresh draws if
    every weight vanishes; after that the hidden components are re-seeded
    from the observation's maximum-likelihood statuses (or, with
    strict=True, a BeliefDepletionError is raised instead).
    """
    prior_w = belief.weights
    propagated: list[HvacState] = []
    weights = np.zeros(belief.count)
    for _ in range(1 + DEPLETION_RETRIES):
        propagated = [hvac_transition_sample(config, p, action, stream)
                      for p in belief.particles]
        weights = np.array([
            pw * hvac_observation_prob(config, observation, action, np_)
            for pw, np_ in zip(prior_w, propagated)
        ])
        total = float(weights.sum())
        if total > 0.0:
            break
    else:
        if strict:
            raise BeliefDepletionError("all particle weights collapsed to zero")
        reinit = _max_likelihood_state(config, observation)
        propagated = [reinit] * belief.count
        weights = np.full(belief.count, 1.0)
        total = float(belief.count)
    weights = weights / total
    idx = systematic_resample(weights, stream.uniform())
    particles = tuple(propagated[i] for i in idx)
    return ParticleBelief(particles, np.full(belief.count, 1.0 / belief.count))


def _max_likelihood_state(config: HvacConfig, obs: HvacObservation) -> HvacState:
    """Hidden-component fallback: per location, the status most likely to emit
    the observed report; onset information is unavailable and reset to now."""
    statuses = []
    for o in obs.statuses:
        col = [config.obs_rows[s][o] for s in range(len(Status))]
        statuses.append(int(np.argmax(col)))
    onsets = tuple(obs.t for _ in statuses)
    return HvacState(tuple(statuses), onsets, obs.availability, obs.t)


def belief_marginals(belief: ParticleBelief) -> dict:
    """Per-location marginals: status distribution and age-since-last-change.

    "status" is a [n_locations][4] array over (Ok, Mech, Elec, Cool);
    "age" is a [n_locations][t] array where entry a is the probability that
    the location's status last changed a timesteps ago. Both rows sum to 1.
    """
    n = len(belief.particles[0].statuses)
    t = belief.timestep
    status = np.zeros((n, len(Status)))
    age = np.zeros((n, t))
    for p, w in zip(belief.particles, belief.weights):
        for i in range(n):
            status[i][p.statuses[i]] += w
            age[i][p.t - p.onsets[i]] += w
    return {
        "status": [[float(v) for v in row] for row in status],
        "age": [[float(v) for v in row] for row in age],
    }
