"""Determinized scenario-tree search with weighting-independent structure.

A tree is built once from K scenarios (start particle + private draw stream)
with every action expanded at every node down to a fixed depth; scenarios
sharing a sampled observation share a child. Edges store summed immediate
feature vectors and leaves store rollout-accumulated discounted feature
vectors, so the tree never needs rebuilding to score a new reward weighting:
evaluating a candidate is a single bottom-up backup over cached arrays.

Each scenario's stream is cloned per action expansion, so all actions at a
node see identical randomness (common random numbers), and every sampling
call consumes a fixed draw count, keeping scenario streams aligned by depth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .belief import ParticleBelief
from .core import PomdpModel, Weighting
from .errors import DimensionMismatchError, EmptyTreeError
from .hvac import HvacConfig, HvacModel
from .rng import SeededStream


@dataclass
class QEstimate:
    """Root action values from one backup pass, indexed by action."""

    q_values: np.ndarray
    scenario_count: int

    def best_index(self) -> int:
        """Argmax action index; exact ties go to the lowest index."""
        return int(np.argmax(self.q_values))


@dataclass
class _Level:
    """Flattened arrays for one internal tree level.

    Edges are node-major, action-minor: edge e = node * action_count + action.
    Children of an edge occupy child_node[child_offsets[e]:child_offsets[e+1]]
    as node indices into the next level.
    """

    node_count: int
    node_scenarios: np.ndarray      # (M,) scenarios reaching each node
    scenario_offsets: np.ndarray    # (M+1,) CSR into scenario_ids
    scenario_ids: np.ndarray        # concatenated scenario ids per node
    edge_beta: np.ndarray           # (M*A, F) summed immediate features
    child_offsets: np.ndarray       # (M*A + 1,)
    child_node: np.ndarray          # next-level node index per child
    child_count: np.ndarray         # scenarios in each child


@dataclass
class ScenarioTree:
    """Search tree over K determinized scenarios rooted at a belief."""

    model: PomdpModel
    root_belief: ParticleBelief
    root_timestep: int
    num_scenarios: int
    depth: int                      # effective depth (truncated at the horizon)
    rollout_depth: int
    levels: list[_Level]
    leaf_beta: np.ndarray           # (L, F) summed rollout feature vectors
    leaf_counts: np.ndarray         # (L,) scenarios per leaf
    leaf_scenario_offsets: np.ndarray
    leaf_scenario_ids: np.ndarray
    root_states: tuple              # sampled start particles, scenario order
    scenario_streams: tuple         # per-scenario streams at their start positions

    @property
    def action_count(self) -> int:
        return self.model.action_count

    @property
    def feature_count(self) -> int:
        return self.model.feature_count

    @property
    def discount(self) -> float:
        return self.model.discount


def _as_model(config) -> PomdpModel:
    if isinstance(config, HvacConfig):
        return HvacModel(config)
    if isinstance(config, PomdpModel):
        return config
    raise TypeError("config must be an HvacConfig or a PomdpModel")


def _sample_start_particles(belief: ParticleBelief, k: int, stream: SeededStream):
    cumulative = np.cumsum(belief.weights)
    cumulative[-1] = 1.0
    picks = []
    for _ in range(k):
        idx = int(np.searchsorted(cumulative, stream.uniform(), side="right"))
        picks.append(belief.particles[min(idx, belief.count - 1)])
    return picks


def build_tree(belief: ParticleBelief, config, num_scenarios: int, depth: int,
               rollout_depth: int, stream: SeededStream, scenarios=None) -> ScenarioTree:
    """Expand the full scenario tree at a belief.

    Scenarios default to `num_scenarios` start particles drawn from the
    belief (one stream draw each) paired with streams split off `stream`;
    pass `scenarios` as explicit (state, stream) pairs to control the
    determinization, e.g. for exhaustive-coverage tests.
    """
    model = _as_model(config)
    if num_scenarios < 1 or depth < 1 or rollout_depth < 0:
        raise ValueError("num_scenarios and depth must be >= 1, rollout_depth >= 0")
    t0 = belief.timestep
    if t0 >= model.horizon:
        raise EmptyTreeError(f"belief at timestep {t0} admits no action")
    depth_eff = min(depth, model.horizon - t0)

    if scenarios is None:
        starts = _sample_start_particles(belief, num_scenarios, stream)
        scenarios = [(s, stream.split(i)) for i, s in enumerate(starts)]
    else:
        scenarios = list(scenarios)
        num_scenarios = len(scenarios)
    root_states = tuple(s for s, _ in scenarios)
    # Expansion only ever advances clones, so these stay at their start
    # positions; kept for introspection and replay.
    scenario_streams = tuple(st for _, st in scenarios)

    a_count = model.action_count
    f_count = model.feature_count

    # frontier: list of nodes; node = list of (scenario_id, state, stream)
    frontier = [[(i, s, st) for i, (s, st) in enumerate(scenarios)]]
    levels: list[_Level] = []
    for _ in range(depth_eff):
        edge_beta_rows = []
        child_offsets = [0]
        child_node: list[int] = []
        child_count: list[int] = []
        node_scenarios = []
        scenario_offsets = [0]
        scenario_ids: list[int] = []
        new_frontier: list[list] = []
        for node in frontier:
            node_scenarios.append(len(node))
            scenario_ids.extend(sid for sid, _, _ in node)
            scenario_offsets.append(len(scenario_ids))
            for action in range(a_count):
                beta_sum = [0.0] * f_count
                groups: dict = {}
                for sid, state, strm in node:
                    st = strm.clone()
                    nxt = model.transition_sample(state, action, st)
                    obs = model.observation_sample(action, nxt, st)
                    for k, v in enumerate(model.features(state, action).values):
                        beta_sum[k] += v
                    groups.setdefault(obs, []).append((sid, nxt, st))
                edge_beta_rows.append(beta_sum)
                for members in groups.values():
                    child_node.append(len(new_frontier))
                    child_count.append(len(members))
                    new_frontier.append(members)
                child_offsets.append(len(child_node))
        levels.append(_Level(
            node_count=len(frontier),
            node_scenarios=np.array(node_scenarios, dtype=np.int64),
            scenario_offsets=np.array(scenario_offsets, dtype=np.int64),
            scenario_ids=np.array(scenario_ids, dtype=np.int64),
            edge_beta=np.array(edge_beta_rows, dtype=float),
            child_offsets=np.array(child_offsets, dtype=np.int64),
            child_node=np.array(child_node, dtype=np.int64),
            child_count=np.array(child_count, dtype=np.int64),
        ))
        frontier = new_frontier

    # Leaf level: uniform-random rollouts accumulate discounted features.
    t_leaf = t0 + depth_eff
    steps = min(rollout_depth, model.horizon - t_leaf)
    gamma = model.discount
    leaf_beta = np.zeros((len(frontier), f_count))
    leaf_counts = np.zeros(len(frontier), dtype=np.int64)
    leaf_scenario_offsets = [0]
    leaf_scenario_ids: list[int] = []
    for j, node in enumerate(frontier):
        leaf_counts[j] = len(node)
        leaf_scenario_ids.extend(sid for sid, _, _ in node)
        leaf_scenario_offsets.append(len(leaf_scenario_ids))
        acc = [0.0] * f_count
        for _, state, strm in node:
            g = 1.0
            cur = state
            for _ in range(steps):
                action = strm.randint(a_count)
                for k, v in enumerate(model.features(cur, action).values):
                    acc[k] += g * v
                cur = model.transition_sample(cur, action, strm)
                g *= gamma
        leaf_beta[j] = acc

    return ScenarioTree(
        model=model,
        root_belief=belief,
        root_timestep=t0,
        num_scenarios=num_scenarios,
        depth=depth_eff,
        rollout_depth=steps,
        levels=levels,
        leaf_beta=leaf_beta,
        leaf_counts=leaf_counts,
        leaf_scenario_offsets=np.array(leaf_scenario_offsets, dtype=np.int64),
        leaf_scenario_ids=np.array(leaf_scenario_ids, dtype=np.int64),
        root_states=root_states,
        scenario_streams=scenario_streams,
    )


def _phi_matrix(tree: ScenarioTree, phi) -> np.ndarray:
    if isinstance(phi, Weighting):
        arr = np.asarray(phi.values, dtype=float)
    else:
        arr = np.asarray(phi, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.shape[1] != tree.feature_count:
        raise DimensionMismatchError(
            f"weighting length {arr.shape[1]} != feature count {tree.feature_count}")
    return arr


def _backup(tree: ScenarioTree, phi_t: np.ndarray) -> np.ndarray:
    """Bottom-up value pass; phi_t is (F, P), result is (A, P) root values."""
    gamma = tree.discount
    values = (tree.leaf_beta @ phi_t) / tree.leaf_counts[:, None]
    root = None
    for level in reversed(tree.levels):
        contrib = level.child_count[:, None] * values[level.child_node]
        child_sums = np.add.reduceat(contrib, level.child_offsets[:-1], axis=0)
        divisor = np.repeat(level.node_scenarios, tree.action_count)[:, None]
        edge_values = (level.edge_beta @ phi_t + gamma * child_sums) / divisor
        root = edge_values
        values = edge_values.reshape(level.node_count, tree.action_count, -1).max(axis=1)
    return root


def evaluate_batch(tree: ScenarioTree, phis) -> np.ndarray:
    """Root action values for many weightings at once: (P, F) -> (P, A)."""
    mat = _phi_matrix(tree, phis)
    return _backup(tree, mat.T).T


def evaluate(tree: ScenarioTree, phi) -> QEstimate:
    """Root action values under one weighting; read-only over the tree."""
    q = evaluate_batch(tree, phi)[0]
    return QEstimate(q_values=q, scenario_count=tree.num_scenarios)


def best_action(tree: ScenarioTree, phi) -> int:
    """Index of the best root action under phi; ties go to the lowest index."""
    return evaluate(tree, phi).best_index()
