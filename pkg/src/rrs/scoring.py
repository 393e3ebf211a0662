"""Residual risk scoring: signal aggregation, quadrants, weight sweeps.

Scoring is two-pass: per-pair signals first (model cosines, mean semantic
similarity, localized structural similarity), then batch context (maximum
cross-model spread, axis medians) to finalize agreement, RRS, and
quadrant labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embedkit import ModelSimilarity
from .errors import EmptyBatchError, WeightConfigError

WEIGHT_TOLERANCE = 1e-9
DEFAULT_SWEEP_ALPHAS_BETAS = ((0.5, 0.3), (0.3, 0.5), (0.4, 0.4), (0.6, 0.2), (0.2, 0.6))
RRS_BANDS = ((0.97, "very high"), (0.94, "high"), (0.90, "moderate"))


@dataclass(frozen=True)
class WeightConfig:
    alpha: float = 0.5
    beta: float = 0.3
    gamma: float = 0.2

    def __post_init__(self):
        for name, value in (("alpha", self.alpha), ("beta", self.beta),
                            ("gamma", self.gamma)):
            if not 0.0 <= value <= 1.0:
                raise WeightConfigError(f"{name}={value} outside [0, 1]")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > WEIGHT_TOLERANCE:
            raise WeightConfigError("weights must sum to 1")


DEFAULT_WEIGHTS = WeightConfig()


@dataclass
class PairScore:
    pair_id: str
    per_model: list[ModelSimilarity] = field(default_factory=list)
    mean_sem: float = 0.0
    struct_sim: float = 0.0
    cross_var: float = 0.0
    agree: float = 1.0
    rrs: float = 0.0
    quadrant: str = ""

    def model_cosines(self) -> list[float]:
        return [m.cosine for m in self.per_model]


@dataclass
class BatchContext:
    sigma_max: float
    median_e: float
    median_a: float
    degenerate: bool = False


def mean_semantic(cosines) -> float:
    """Arithmetic mean over the per-model cosine values."""
    if not cosines:
        raise EmptyBatchError("no per-model similarities")
    return float(sum(cosines)) / len(cosines)


def cross_spread(cosines) -> tuple[float, float]:
    """(population variance, standard deviation) of the per-model cosines."""
    if not cosines:
        raise EmptyBatchError("no per-model similarities")
    if min(cosines) == max(cosines):
        return 0.0, 0.0  # exact zero for identical values, no float dust
    mean = mean_semantic(cosines)
    variance = sum((c - mean) ** 2 for c in cosines) / len(cosines)
    return variance, math.sqrt(variance)


def cross_agreement(cosines, ctx: BatchContext) -> tuple[float, float]:
    """(variance, agreement): agree = 1 - sd / sigma_max, clamped to [0, 1].

    A degenerate batch (no spread anywhere) pins agreement at 1 for all pairs.
    """
    variance, sd = cross_spread(cosines)
    if ctx.degenerate or ctx.sigma_max == 0.0:
        return variance, 1.0
    agree = 1.0 - sd / ctx.sigma_max
    return variance, min(1.0, max(0.0, agree))


def rrs(mean_sem: float, struct_sim: float, agree: float,
        weights: WeightConfig = DEFAULT_WEIGHTS) -> float:
    """Convex combination alpha*mean_sem + beta*struct_sim + gamma*agree."""
    return weights.alpha * mean_sem + weights.beta * struct_sim + weights.gamma * agree


def batch_context(scores) -> BatchContext:
    """Sigma_max and axis medians over per-pair signals (pass 2 prerequisite)."""
    if not scores:
        raise EmptyBatchError("empty batch")
    spreads = [cross_spread(s.model_cosines())[1] for s in scores]
    sigma_max = max(spreads)
    return BatchContext(
        sigma_max=sigma_max,
        median_e=float(np.median([s.mean_sem for s in scores])),
        median_a=float(np.median([s.struct_sim for s in scores])),
        degenerate=sigma_max == 0.0,
    )


def classify_quadrants(scores, ctx: BatchContext):
    """Assign quadrant labels; ties at either median count as High."""
    for score in scores:
        e_high = score.mean_sem >= ctx.median_e
        a_high = score.struct_sim >= ctx.median_a
        score.quadrant = {(True, True): "I", (True, False): "II",
                          (False, True): "III", (False, False): "IV"}[(e_high, a_high)]
    return scores


def finalize_scores(scores, weights: WeightConfig = DEFAULT_WEIGHTS) -> BatchContext:
    """Pass 2: compute agreement, RRS, and quadrants against batch context."""
    ctx = batch_context(scores)
    for score in scores:
        score.cross_var, score.agree = cross_agreement(score.model_cosines(), ctx)
        score.rrs = rrs(score.mean_sem, score.struct_sim, score.agree, weights)
    classify_quadrants(scores, ctx)
    return ctx


def rrs_band(value: float) -> str:
    for cutoff, label in RRS_BANDS:
        if value >= cutoff:
            return label
    return "low"


# -- sensitivity sweep -----------------------------------------------------------


def default_weight_grid(gamma: float = 0.2) -> list[WeightConfig]:
    return [WeightConfig(alpha=a, beta=b, gamma=gamma)
            for a, b in DEFAULT_SWEEP_ALPHAS_BETAS]


@dataclass
class SweepResult:
    configs: list[WeightConfig]
    pair_ids: list[str]
    rrs_table: np.ndarray          # configs x pairs
    rank_correlation: np.ndarray   # configs x configs


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties.

    Identical rank vectors short-circuit to exactly 1.0, which also covers
    the degenerate all-constant batch.
    """
    rx = _average_ranks(np.asarray(x, dtype=np.float64))
    ry = _average_ranks(np.asarray(y, dtype=np.float64))
    if np.array_equal(rx, ry):
        return 1.0
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denom = math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy)))
    if denom == 0.0:
        return 1.0
    return float(np.dot(dx, dy)) / denom


def sensitivity_sweep(scores, weight_grid=None) -> SweepResult:
    """Recompute RRS per weight config from frozen signals; correlate rankings."""
    if not scores:
        raise EmptyBatchError("empty batch")
    configs = list(weight_grid) if weight_grid is not None else default_weight_grid()
    if not configs:
        raise WeightConfigError("empty weight grid")
    table = np.empty((len(configs), len(scores)), dtype=np.float64)
    for ci, cfg in enumerate(configs):
        for pi, score in enumerate(scores):
            table[ci, pi] = rrs(score.mean_sem, score.struct_sim, score.agree, cfg)
    corr = np.ones((len(configs), len(configs)), dtype=np.float64)
    for i in range(len(configs)):
        for j in range(i + 1, len(configs)):
            corr[i, j] = corr[j, i] = spearman(table[i], table[j])
    return SweepResult(
        configs=configs,
        pair_ids=[s.pair_id for s in scores],
        rrs_table=table,
        rank_correlation=corr,
    )
