"""
Labeled-size benchmark: how each model's macro-F grows with the number of
labeled examples it may train on.

For every labeled size N and seed, N examples are drawn class-stratified from
the labeled pool, each model trains on them (plus the unlabeled pool for the
semi-supervised kinds) and is scored on the fixed test set. Scores are
averaged over seeds.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from readsift.evaluation.metrics import macro_f_score_indices
from readsift.genomics.signals import format_real
from readsift.models.base import ModelConfig
from readsift.training import LabeledSet, TrainConfig, TrainerFactory, UnlabeledSet
from readsift.training.data import stratified_sample

logger = logging.getLogger(__name__)

CLASSIFIER_KINDS = ("ff", "m1m2", "semigan")


class BenchmarkConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    models: tuple[str, ...] = CLASSIFIER_KINDS
    labeled_sizes: tuple[int, ...] = (15, 30, 70)
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    train: dict[str, Any] = Field(default_factory=dict, description="TrainConfig overrides for every model")

    @field_validator("models")
    @classmethod
    def check_models(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        unknown = [m for m in v if m not in CLASSIFIER_KINDS]
        if unknown or not v:
            raise ValueError(f"models must be a non-empty subset of {', '.join(CLASSIFIER_KINDS)}, got {v}")
        return v

    @field_validator("labeled_sizes", "seeds")
    @classmethod
    def check_non_empty(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v:
            raise ValueError("at least one value is required")
        return v


@dataclass
class BenchmarkResult:
    """Macro-F per (N, model), one value per seed."""

    models: tuple[str, ...]
    labeled_sizes: tuple[int, ...]
    scores: dict[tuple[int, str], list[float]] = field(default_factory=dict)

    def mean(self, n: int, model: str) -> float:
        return float(np.mean(self.scores[(n, model)]))

    def to_tsv(self) -> str:
        lines = ["\t".join(["N", *self.models])]
        for n in self.labeled_sizes:
            lines.append("\t".join([str(n), *(format_real(self.mean(n, m)) for m in self.models)]))
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_tsv())


RunCallback = Callable[[str, int, int, float], None]


def run_benchmark(
    cfg: BenchmarkConfig,
    pool: LabeledSet,
    test: LabeledSet,
    unlabeled: Optional[UnlabeledSet] = None,
    on_run: Optional[RunCallback] = None,
) -> BenchmarkResult:
    """
    Train and score every (model, N, seed) combination.

    Args:
        cfg: Models, labeled sizes and seeds
        pool: Labeled examples the N-sized training sets are drawn from
        test: Held-out labeled examples used for scoring
        unlabeled: Unlabeled pool for the semi-supervised kinds
        on_run: Called as ``on_run(model, n, seed, macro_f)`` after each run

    Raises:
        InfeasibleParametersError: If some N exceeds the labeled pool
    """
    model_config = ModelConfig(length=int(pool.x.shape[1]))
    result = BenchmarkResult(cfg.models, cfg.labeled_sizes)
    for n in cfg.labeled_sizes:
        for seed in cfg.seeds:
            sample = stratified_sample(pool, n, np.random.default_rng([seed, n]))
            for kind in cfg.models:
                train_config = TrainConfig.for_kind(kind, **{**cfg.train, "seed": seed})
                trainer = TrainerFactory.create(kind, train_config, model_config)
                trained = trainer.fit(sample, None if kind == "ff" else unlabeled)
                predicted = np.argmax(trained.model.predict_proba(test.x), axis=1)  # type: ignore[attr-defined]
                score = macro_f_score_indices(predicted, test.y, warn=False)
                result.scores.setdefault((n, kind), []).append(score)
                logger.info("benchmark %s N=%d seed=%d macro-F %.4f", kind, n, seed, score)
                if on_run:
                    on_run(kind, n, seed, score)
    return result
