"""Recover an implied reward weighting from a single action discrepancy.

Given a scenario tree, the planner's chosen action, and a user's alternative,
find the non-negative weighting closest (L1) to the planner's under which the
user's action scores at least as well. The constraint is relaxed into a hinge
penalty and the objective is minimized with the cross-entropy method; every
candidate is scored on the same tree, so both actions are always compared on
identical scenario randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Weighting
from .errors import DimensionMismatchError
from .planner import ScenarioTree, evaluate_batch
from .rng import SeededStream

PENALTY_HINGE = "hinge"
# Alternative penalty -|gap| kept for comparison experiments; it rewards any
# value gap in either direction and cannot enforce the constraint.
PENALTY_SIGNED_GAP = "signed_gap"


@dataclass(frozen=True)
class CEParams:
    """Cross-entropy optimizer settings."""

    population: int = 64
    elite_frac: float = 0.125
    max_iterations: int = 50
    sigma0: float = 0.3
    smoothing: float = 0.7
    std_tol: float = 1e-3
    w: float | None = None          # hinge weight; None -> scale rule from the tree
    epsilon: float | None = None    # feasibility tolerance; None -> scale rule
    penalty_form: str = PENALTY_HINGE

    def __post_init__(self):
        if self.n_elite < 1 or self.population < 2 * self.n_elite:
            raise ValueError("need population >= 2 * elites >= 2")
        if not (0.0 < self.smoothing <= 1.0):
            raise ValueError("smoothing must lie in (0, 1]")
        if self.sigma0 <= 0 or self.std_tol <= 0 or self.max_iterations < 1:
            raise ValueError("sigma0, std_tol must be positive; max_iterations >= 1")
        if self.penalty_form not in (PENALTY_HINGE, PENALTY_SIGNED_GAP):
            raise ValueError(f"unknown penalty_form {self.penalty_form!r}")

    @property
    def n_elite(self) -> int:
        return int(round(self.population * self.elite_frac))

    def to_json_dict(self) -> dict:
        return {
            "population": self.population,
            "elite_frac": self.elite_frac,
            "max_iterations": self.max_iterations,
            "sigma0": self.sigma0,
            "smoothing": self.smoothing,
            "std_tol": self.std_tol,
            "w": self.w,
            "epsilon": self.epsilon,
            "penalty_form": self.penalty_form,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CEParams":
        return cls(**doc)


@dataclass
class ReconcileProblem:
    """One action discrepancy to explain, bound to a shared scenario tree."""

    tree: ScenarioTree
    action_algo: int
    action_user: int
    phi_algo: np.ndarray
    w: float
    epsilon: float
    penalty_form: str = PENALTY_HINGE

    @classmethod
    def from_tree(cls, tree: ScenarioTree, action_algo: int, action_user: int, phi_algo,
                  w: float | None = None, epsilon: float | None = None,
                  penalty_form: str = PENALTY_HINGE) -> "ReconcileProblem":
        """Build a problem, filling w and epsilon from the baseline Q magnitude.

        Default w makes a constraint violation the size of the baseline value
        cost 10 L1 units; default epsilon is 1e-6 of that magnitude.
        """
        phi = np.asarray(
            phi_algo.values if isinstance(phi_algo, Weighting) else phi_algo, dtype=float)
        if phi.shape != (tree.feature_count,):
            raise DimensionMismatchError("phi_algo length must equal the feature count")
        if np.any(phi < 0):
            raise ValueError("phi_algo must be non-negative")
        for a in (action_algo, action_user):
            if not (0 <= a < tree.action_count):
                raise ValueError(f"action index {a} out of range")
        q_base = float(evaluate_batch(tree, phi)[0][action_algo])
        if w is None:
            w = 10.0 / (abs(q_base) + 1.0)
        if epsilon is None:
            epsilon = 1e-6 * abs(q_base)
        return cls(tree=tree, action_algo=action_algo, action_user=action_user,
                   phi_algo=phi, w=float(w), epsilon=float(epsilon),
                   penalty_form=penalty_form)


def _objective_batch(phis: np.ndarray, problem: ReconcileProblem) -> tuple[np.ndarray, np.ndarray]:
    """Objective and constraint residual for a (P, F) batch of candidates."""
    q = evaluate_batch(problem.tree, phis)
    residual = q[:, problem.action_algo] - q[:, problem.action_user]
    l1 = np.abs(phis - problem.phi_algo[None, :]).sum(axis=1)
    if problem.penalty_form == PENALTY_SIGNED_GAP:
        penalty = -np.abs(residual)
    else:
        penalty = np.maximum(residual, 0.0)
    return l1 + problem.w * penalty, residual


def objective_u(phi, problem: ReconcileProblem) -> float:
    """Relaxed objective: L1 distance to the planner weighting plus the
    weighted hinge on (value of planner action - value of user action)."""
    arr = np.asarray(phi.values if isinstance(phi, Weighting) else phi, dtype=float)
    u, _ = _objective_batch(arr[None, :], problem)
    return float(u[0])


@dataclass(frozen=True)
class IterationStats:
    """One cross-entropy generation, for tracing convergence."""

    iteration: int
    best_objective: float
    mean: tuple[float, ...]
    std: tuple[float, ...]

    def to_json_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "best_objective": self.best_objective,
            "mean": list(self.mean),
            "std": list(self.std),
        }


@dataclass
class ReconcileResult:
    """Outcome of one reconciliation."""

    phi_hat: Weighting
    objective: float
    l1_distance: float
    residual: float
    feasible: bool
    trace: tuple[IterationStats, ...] = field(default=())
    early_out: bool = False

    def to_json_dict(self, include_trace: bool = True) -> dict:
        doc = {
            "phi_hat": list(self.phi_hat.values),
            "objective": self.objective,
            "l1_distance": self.l1_distance,
            "residual": self.residual,
            "feasible": self.feasible,
            "early_out": self.early_out,
        }
        if include_trace:
            doc["trace"] = [s.to_json_dict() for s in self.trace]
        return doc


def _finalize(problem: ReconcileProblem, phi: np.ndarray, objective: float,
              trace, early_out=False) -> ReconcileResult:
    _, residual = _objective_batch(phi[None, :], problem)
    res = float(residual[0])
    return ReconcileResult(
        phi_hat=Weighting(tuple(float(v) for v in phi)),
        objective=float(objective),
        l1_distance=float(np.abs(phi - problem.phi_algo).sum()),
        residual=res,
        feasible=res <= problem.epsilon,
        trace=tuple(trace),
        early_out=early_out,
    )


def cross_entropy_reconcile(problem: ReconcileProblem, ce_params: CEParams,
                            stream: SeededStream) -> ReconcileResult:
    """Minimize the relaxed objective with a diagonal-Gaussian cross-entropy loop.

    The sampling distribution starts at (phi_algo, sigma0); samples are clamped
    at zero, the planner weighting itself is injected into the first generation
    (so the result is never worse than it), and the mean/std are refit to the
    elite fraction with exponential smoothing until the std collapses or the
    iteration budget runs out. Returns the best candidate ever scored.
    """
    n = problem.tree.feature_count
    if problem.action_user == problem.action_algo:
        return _finalize(problem, problem.phi_algo.copy(), 0.0, (), early_out=True)

    mean = problem.phi_algo.astype(float).copy()
    std = np.full(n, ce_params.sigma0)
    best_phi = problem.phi_algo.copy()
    best_u = np.inf
    trace = []
    for it in range(ce_params.max_iterations):
        noise = np.array([[stream.gauss() for _ in range(n)]
                          for _ in range(ce_params.population)])
        population = np.maximum(mean[None, :] + noise * std[None, :], 0.0)
        if it == 0:
            population[0] = problem.phi_algo
        scores, _ = _objective_batch(population, problem)
        order = np.argsort(scores, kind="stable")
        if scores[order[0]] < best_u:
            best_u = float(scores[order[0]])
            best_phi = population[order[0]].copy()
        elites = population[order[: ce_params.n_elite]]
        mean = ce_params.smoothing * elites.mean(axis=0) + (1 - ce_params.smoothing) * mean
        std = ce_params.smoothing * elites.std(axis=0) + (1 - ce_params.smoothing) * std
        trace.append(IterationStats(
            iteration=it,
            best_objective=best_u,
            mean=tuple(float(v) for v in mean),
            std=tuple(float(v) for v in std),
        ))
        if float(std.max()) < ce_params.std_tol:
            break
    return _finalize(problem, best_phi, best_u, trace)
