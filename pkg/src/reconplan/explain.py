"""Render weighting differences as short comparative statements.

Only features whose implied-to-planner ratio leaves a configurable band
around 1 are mentioned, and percentages snap to a coarse grain so the
wording stays conversational rather than numeric-precise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .hvac import HvacConfig

RATIO_TEMPLATE = "You seem to value the {label} at {percent}% of what the algorithm does."
UNWEIGHTED_TEMPLATE = "The algorithm does not weight the {label}; you appear to."


@dataclass(frozen=True)
class FeatureLabel:
    index: int
    name: str


def hvac_feature_labels(config: HvacConfig) -> tuple[FeatureLabel, ...]:
    """Human-readable names for the domain's features, in feature order."""
    labels = [FeatureLabel(i, f"penalty at Location {i + 1}")
              for i in range(config.n_locations)]
    labels += [FeatureLabel(config.n_locations + r, f"wage of Repairperson {r + 1}")
               for r in range(config.n_workers)]
    return tuple(labels)


@dataclass(frozen=True)
class Statement:
    feature_index: int
    label: str
    ratio: float                 # inf when the planner weight is zero
    percent: int | None          # None for the unweighted-feature phrasing
    text: str

    def to_json_dict(self) -> dict:
        return {
            "feature_index": self.feature_index,
            "label": self.label,
            "ratio": self.ratio if math.isfinite(self.ratio) else None,
            "percent": self.percent,
            "text": self.text,
        }


@dataclass(frozen=True)
class Explanation:
    statements: tuple[Statement, ...]

    def __len__(self) -> int:
        return len(self.statements)

    def to_json_list(self) -> list[dict]:
        return [s.to_json_dict() for s in self.statements]

    def sentences(self) -> list[str]:
        return [s.text for s in self.statements]


def _round_percent(ratio: float, grain: int) -> int:
    return int(math.floor(ratio * 100.0 / grain + 0.5)) * grain


def generate_explanation(phi_a, phi_hat, labels: tuple[FeatureLabel, ...],
                         report_threshold: float = 0.05,
                         percent_grain: int = 5) -> Explanation:
    """Statements for every feature whose ratio leaves the threshold band.

    Ratios are phi_hat[i] / phi_a[i]; percentages are rounded to the nearest
    percent_grain. A feature the planner does not weight at all (phi_a[i] = 0)
    but the user appears to gets an absolute phrasing instead of a ratio.
    Statements are ordered by decreasing |ratio - 1|.
    """
    a = [float(v) for v in (phi_a.values if hasattr(phi_a, "values") else phi_a)]
    h = [float(v) for v in (phi_hat.values if hasattr(phi_hat, "values") else phi_hat)]
    if len(a) != len(h) or len(a) != len(labels):
        raise ValueError("phi_a, phi_hat and labels must have equal lengths")
    if percent_grain < 1:
        raise ValueError("percent_grain must be >= 1")

    statements = []
    for label, wa, wh in zip(labels, a, h):
        if wa == 0.0:
            if wh == 0.0:
                continue
            statements.append(Statement(
                feature_index=label.index,
                label=label.name,
                ratio=math.inf,
                percent=None,
                text=UNWEIGHTED_TEMPLATE.format(label=label.name),
            ))
            continue
        ratio = wh / wa
        if abs(ratio - 1.0) <= report_threshold:
            continue
        percent = _round_percent(ratio, percent_grain)
        statements.append(Statement(
            feature_index=label.index,
            label=label.name,
            ratio=ratio,
            percent=percent,
            text=RATIO_TEMPLATE.format(label=label.name, percent=percent),
        ))
    statements.sort(key=lambda s: (-abs(s.ratio - 1.0), s.feature_index))
    return Explanation(tuple(statements))
