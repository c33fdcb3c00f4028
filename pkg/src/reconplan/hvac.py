"""HVAC repair-dispatch domain: states, dynamics, observations, reward features.

A fixed pool of repairpeople is dispatched each timestep to locations whose
HVAC units drift between Ok and three fault types. Faults older than a
per-location grace age incur a recurring penalty; every dispatched worker
costs a wage. Location availability over a short lookahead window and the
timestep are fully observable; fault status is only observed through a noisy
per-location report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from importlib import resources
from itertools import product

from .core import FeatureVector, PomdpModel
from .errors import InvalidActionError, TerminalStateError
from .rng import SeededStream


class Status(IntEnum):
    OK = 0
    MECH = 1
    ELEC = 2
    COOL = 3


STATUS_NAMES = ("Ok", "Mech", "Elec", "Cool")
STATUS_BY_NAME = {name: Status(i) for i, name in enumerate(STATUS_NAMES)}
FAULTS = (Status.MECH, Status.ELEC, Status.COOL)

_PROB_TOL = 1e-12


def _check_row(name: str, row, length: int):
    if len(row) != length:
        raise ValueError(f"{name} must have {length} entries")
    for p in row:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"{name} entries must be probabilities")
    if abs(sum(row) - 1.0) > _PROB_TOL:
        raise ValueError(f"{name} must sum to 1")


@dataclass(frozen=True)
class HvacConfig:
    """Domain parameters. Defaults give the standard 3-location, 2-worker problem."""

    n_locations: int = 3
    n_workers: int = 2
    avail_horizon: int = 5
    horizon: int = 16
    r_l: tuple[float, ...] = (-250.0, -125.0, -125.0)
    x_l: tuple[int, ...] = (3, 3, 3)
    r_w: tuple[float, ...] = (-5.0, -4.0)
    # p_fix[worker][fault]: repair success for faults (Mech, Elec, Cool).
    p_fix: tuple[tuple[float, ...], ...] = ((0.8, 0.9, 1.0), (0.9, 0.9, 0.9))
    # Status transition row of an Ok location: (stay Ok, to Mech, to Elec, to Cool).
    ok_status_row: tuple[float, ...] = (0.7, 0.1, 0.1, 0.1)
    # obs_rows[true_status][observed_status], each row sums to 1.
    obs_rows: tuple[tuple[float, ...], ...] = (
        (0.7, 0.1, 0.1, 0.1),
        (0.1, 0.5, 0.2, 0.2),
        (0.1, 0.2, 0.5, 0.2),
        (0.1, 0.2, 0.2, 0.5),
    )
    p_avail: float = 0.8
    discount: float = 0.95

    def __post_init__(self):
        n, r = self.n_locations, self.n_workers
        if n < 1 or r < 1 or self.avail_horizon < 1 or self.horizon < 1:
            raise ValueError("n_locations, n_workers, avail_horizon, horizon must be >= 1")
        object.__setattr__(self, "r_l", tuple(float(v) for v in self.r_l))
        object.__setattr__(self, "r_w", tuple(float(v) for v in self.r_w))
        object.__setattr__(self, "x_l", tuple(int(v) for v in self.x_l))
        object.__setattr__(self, "p_fix", tuple(tuple(float(p) for p in row) for row in self.p_fix))
        object.__setattr__(self, "ok_status_row", tuple(float(p) for p in self.ok_status_row))
        object.__setattr__(self, "obs_rows", tuple(tuple(float(p) for p in row) for row in self.obs_rows))
        if len(self.r_l) != n or len(self.x_l) != n:
            raise ValueError("r_l and x_l must have one entry per location")
        if len(self.r_w) != r:
            raise ValueError("r_w must have one entry per worker")
        if any(v > 0 for v in self.r_l) or any(v > 0 for v in self.r_w):
            raise ValueError("penalties and wages must be <= 0")
        if any(x < 1 for x in self.x_l):
            raise ValueError("x_l entries must be >= 1")
        if len(self.p_fix) != r:
            raise ValueError("p_fix must have one row per worker")
        for row in self.p_fix:
            if len(row) != len(FAULTS):
                raise ValueError("p_fix rows must have one entry per fault type")
            for p in row:
                if not (0.0 <= p <= 1.0):
                    raise ValueError("p_fix entries must be probabilities")
        _check_row("ok_status_row", self.ok_status_row, len(Status))
        if len(self.obs_rows) != len(Status):
            raise ValueError("obs_rows must have one row per status")
        for i, row in enumerate(self.obs_rows):
            _check_row(f"obs_rows[{i}]", row, len(Status))
        if not (0.0 <= self.p_avail <= 1.0):
            raise ValueError("p_avail must be a probability")
        if not (0.0 < self.discount <= 1.0):
            raise ValueError("discount must lie in (0, 1]")

    @property
    def feature_count(self) -> int:
        return self.n_locations + self.n_workers

    @property
    def n_actions(self) -> int:
        return (self.n_locations + 1) ** self.n_workers

    def action_tuple(self, index: int) -> tuple[int, ...]:
        """Decode an action index into per-worker destinations (0 = stay home)."""
        if not (0 <= index < self.n_actions):
            raise InvalidActionError(f"action index {index} out of range")
        base = self.n_locations + 1
        digits = []
        for _ in range(self.n_workers):
            digits.append(index % base)
            index //= base
        return tuple(reversed(digits))

    def action_index(self, action: tuple[int, ...]) -> int:
        """Encode per-worker destinations as an index; first worker is most significant."""
        check_action(self, action)
        base = self.n_locations + 1
        idx = 0
        for a in action:
            idx = idx * base + a
        return idx

    def actions(self):
        """All actions in index order."""
        return tuple(self.action_tuple(i) for i in range(self.n_actions))

    def to_json_dict(self) -> dict:
        return {
            "n_locations": self.n_locations,
            "n_workers": self.n_workers,
            "avail_horizon": self.avail_horizon,
            "horizon": self.horizon,
            "r_l": list(self.r_l),
            "x_l": list(self.x_l),
            "r_w": list(self.r_w),
            "p_fix": [list(row) for row in self.p_fix],
            "ok_status_row": list(self.ok_status_row),
            "obs_rows": [list(row) for row in self.obs_rows],
            "p_avail": self.p_avail,
            "discount": self.discount,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "HvacConfig":
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "HvacConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))

    @classmethod
    def default(cls) -> "HvacConfig":
        """The shipped default problem (also available as data/hvac_default.json)."""
        return cls()


@dataclass(frozen=True)
class HvacState:
    """Full domain state: per-location (status, onset), availability window, timestep.

    onsets[i] is the timestep at which location i's status last changed;
    availability row 0 is the current step, row v the step t+v.
    """

    statuses: tuple[int, ...]
    onsets: tuple[int, ...]
    availability: tuple[tuple[bool, ...], ...]
    t: int

    def validate(self, config: HvacConfig):
        n, v = config.n_locations, config.avail_horizon
        if len(self.statuses) != n or len(self.onsets) != n:
            raise ValueError("statuses/onsets must have one entry per location")
        if len(self.availability) != v or any(len(row) != n for row in self.availability):
            raise ValueError(f"availability must be {v} x {n}")
        if not (1 <= self.t <= config.horizon):
            raise ValueError("timestep out of range")
        if any(not (1 <= o <= self.t) for o in self.onsets):
            raise ValueError("onsets must lie in [1, t]")
        if any(s not in tuple(Status) for s in self.statuses):
            raise ValueError("invalid status code")

    def to_json_dict(self) -> dict:
        return {
            "statuses": [STATUS_NAMES[s] for s in self.statuses],
            "onsets": list(self.onsets),
            "availability": [list(row) for row in self.availability],
            "timestep": self.t,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "HvacState":
        return cls(
            statuses=tuple(int(STATUS_BY_NAME[s]) for s in doc["statuses"]),
            onsets=tuple(int(v) for v in doc["onsets"]),
            availability=tuple(tuple(bool(b) for b in row) for row in doc["availability"]),
            t=int(doc["timestep"]),
        )


@dataclass(frozen=True)
class HvacObservation:
    """Noisy status per location plus exact copies of availability and timestep."""

    statuses: tuple[int, ...]
    availability: tuple[tuple[bool, ...], ...]
    t: int

    def to_json_dict(self) -> dict:
        return {
            "statuses": [STATUS_NAMES[s] for s in self.statuses],
            "availability": [list(row) for row in self.availability],
            "timestep": self.t,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "HvacObservation":
        return cls(
            statuses=tuple(int(STATUS_BY_NAME[s]) for s in doc["statuses"]),
            availability=tuple(tuple(bool(b) for b in row) for row in doc["availability"]),
            t=int(doc["timestep"]),
        )


def check_action(config: HvacConfig, action: tuple[int, ...]):
    if len(action) != config.n_workers:
        raise InvalidActionError(f"action must assign all {config.n_workers} workers")
    for a in action:
        if not (0 <= a <= config.n_locations):
            raise InvalidActionError(f"assignment {a} outside [0, {config.n_locations}]")


def repair_success_prob(config: HvacConfig, workers: list[int], fault: int) -> float:
    """Probability at least one of the assigned workers clears the given fault.

    Attempts are independent; a single attempt returns the table value exactly.
    """
    if fault == Status.OK:
        raise ValueError("no repair on an Ok location")
    if not workers:
        return 0.0
    if len(workers) == 1:
        return config.p_fix[workers[0]][fault - 1]
    fail = 1.0
    for r in workers:
        fail *= 1.0 - config.p_fix[r][fault - 1]
    return 1.0 - fail


def _assignments(config: HvacConfig, action: tuple[int, ...]) -> list[list[int]]:
    per_loc: list[list[int]] = [[] for _ in range(config.n_locations)]
    for r, a in enumerate(action):
        if a != 0:
            per_loc[a - 1].append(r)
    return per_loc


def _status_outcomes(config, state, workers_here, loc) -> list[tuple[int, float]]:
    """Per-location next-status distribution as (status, probability) pairs.

    Pair order matches the cumulative order used by the sampler, so a single
    uniform draw maps onto the same outcome in both code paths.
    """
    s = state.statuses[loc]
    if s == Status.OK:
        return [(code, p) for code, p in zip(Status, config.ok_status_row) if p > 0.0]
    if workers_here and state.availability[0][loc]:
        p = repair_success_prob(config, workers_here, s)
    else:
        p = 0.0
    out = []
    if p > 0.0:
        out.append((int(Status.OK), p))
    if p < 1.0:
        out.append((int(s), 1.0 - p))
    return out


def hvac_transition_sample(config: HvacConfig, state: HvacState, action: tuple[int, ...],
                           stream: SeededStream) -> HvacState:
    """Sample the successor state.

    Consumes exactly 2 * n_locations draws: one per location for the status
    update (always consumed, so scenarios stay aligned across actions), then
    one per location for the fresh availability row.
    """
    check_action(config, action)
    if state.t >= config.horizon:
        raise TerminalStateError(f"no transition from terminal timestep {state.t}")
    t_next = state.t + 1
    per_loc = _assignments(config, action)
    statuses = []
    onsets = []
    for i in range(config.n_locations):
        u = stream.uniform()
        s = state.statuses[i]
        if s == Status.OK:
            acc = 0.0
            nxt = len(Status) - 1
            for code, p in zip(Status, config.ok_status_row):
                acc += p
                if u < acc:
                    nxt = int(code)
                    break
        else:
            if per_loc[i] and state.availability[0][i]:
                p = repair_success_prob(config, per_loc[i], s)
            else:
                p = 0.0
            nxt = int(Status.OK) if u < p else int(s)
        statuses.append(nxt)
        onsets.append(t_next if nxt != state.statuses[i] else state.onsets[i])
    fresh = tuple(stream.uniform() < config.p_avail for _ in range(config.n_locations))
    availability = state.availability[1:] + (fresh,)
    return HvacState(tuple(statuses), tuple(onsets), availability, t_next)


def hvac_transition_support(config: HvacConfig, state: HvacState,
                            action: tuple[int, ...]) -> list[tuple[HvacState, float]]:
    """Exact successor distribution as (state, probability) pairs.

    Enumerates per-location status outcomes crossed with all fresh
    availability rows; sized for small n_locations (oracle testing).
    """
    check_action(config, action)
    if state.t >= config.horizon:
        raise TerminalStateError(f"no transition from terminal timestep {state.t}")
    t_next = state.t + 1
    per_loc = _assignments(config, action)
    loc_outcomes = [_status_outcomes(config, state, per_loc[i], i)
                    for i in range(config.n_locations)]
    avail_outcomes = []
    for bits in product((True, False), repeat=config.n_locations):
        p = 1.0
        for b in bits:
            p *= config.p_avail if b else 1.0 - config.p_avail
        if p > 0.0:
            avail_outcomes.append((bits, p))
    support = []
    for combo in product(*loc_outcomes):
        p_status = 1.0
        statuses = []
        onsets = []
        for i, (code, p) in enumerate(combo):
            p_status *= p
            statuses.append(code)
            onsets.append(t_next if code != state.statuses[i] else state.onsets[i])
        for fresh, p_avail in avail_outcomes:
            availability = state.availability[1:] + (fresh,)
            nxt = HvacState(tuple(statuses), tuple(onsets), availability, t_next)
            support.append((nxt, p_status * p_avail))
    return support


def hvac_observation_sample(config: HvacConfig, prev_action: tuple[int, ...],
                            next_state: HvacState, stream: SeededStream) -> HvacObservation:
    """Sample an observation of next_state. Consumes exactly n_locations draws."""
    statuses = []
    for i in range(config.n_locations):
        u = stream.uniform()
        row = config.obs_rows[next_state.statuses[i]]
        acc = 0.0
        obs = len(Status) - 1
        for code, p in zip(Status, row):
            acc += p
            if u < acc:
                obs = int(code)
                break
        statuses.append(obs)
    return HvacObservation(tuple(statuses), next_state.availability, next_state.t)


def hvac_observation_prob(config: HvacConfig, obs: HvacObservation,
                          prev_action: tuple[int, ...], next_state: HvacState) -> float:
    """Exact observation likelihood; zero unless availability and timestep match."""
    if obs.t != next_state.t or obs.availability != next_state.availability:
        return 0.0
    p = 1.0
    for i in range(config.n_locations):
        p *= config.obs_rows[next_state.statuses[i]][obs.statuses[i]]
    return p


def hvac_features(config: HvacConfig, state: HvacState, action: tuple[int, ...]) -> FeatureVector:
    """Reward features of acting in a state: location penalties then worker wages.

    Location i contributes r_l[i] when faulty for at least x_l[i] timesteps
    (age = t - onset); worker r contributes r_w[r] whenever dispatched.
    """
    check_action(config, action)
    vals = []
    for i in range(config.n_locations):
        active = (state.statuses[i] != Status.OK
                  and state.t - state.onsets[i] >= config.x_l[i])
        vals.append(config.r_l[i] if active else 0.0)
    for r in range(config.n_workers):
        vals.append(config.r_w[r] if action[r] != 0 else 0.0)
    return FeatureVector(tuple(vals))


def hvac_initial_state(config: HvacConfig, stream: SeededStream) -> HvacState:
    """All locations Ok with onset 1 at timestep 1; availability drawn row-major.

    Consumes exactly avail_horizon * n_locations draws.
    """
    n = config.n_locations
    availability = tuple(
        tuple(stream.uniform() < config.p_avail for _ in range(n))
        for _ in range(config.avail_horizon)
    )
    return HvacState((int(Status.OK),) * n, (1,) * n, availability, 1)


class HvacModel(PomdpModel):
    """Adapter exposing the domain through the generic model interface.

    Actions are integer indices; see HvacConfig.action_tuple for the encoding.
    """

    def __init__(self, config: HvacConfig):
        self.config = config
        self.feature_count = config.feature_count
        self.action_count = config.n_actions
        self.discount = config.discount
        self.horizon = config.horizon
        self._actions = config.actions()
        self._check_params()

    def action_tuple(self, index: int) -> tuple[int, ...]:
        return self._actions[index]

    def transition_sample(self, state, action: int, stream: SeededStream):
        return hvac_transition_sample(self.config, state, self._actions[action], stream)

    def observation_sample(self, prev_action: int, next_state, stream: SeededStream):
        return hvac_observation_sample(self.config, self._actions[prev_action], next_state, stream)

    def observation_prob(self, observation, prev_action: int, next_state) -> float:
        return hvac_observation_prob(self.config, observation, self._actions[prev_action], next_state)

    def features(self, state, action: int) -> FeatureVector:
        return hvac_features(self.config, state, self._actions[action])


def load_default_config() -> HvacConfig:
    """Load the packaged default domain file."""
    data = resources.files("reconplan").joinpath("data/hvac_default.json").read_text()
    return HvacConfig.from_json_dict(json.loads(data))
