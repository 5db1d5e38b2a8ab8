"""
Exact t-SNE for plotting latent vectors in two dimensions.

Per-point Gaussian bandwidths are found by bisection on the precision
``beta = 1 / (2 sigma^2)`` until the conditional entropy matches
``log(perplexity)``. The embedding then follows gradient descent with
momentum, per-coordinate adaptive gains and early exaggeration of P.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from readsift.core.errors import CheckpointFormatError, DataError, InfeasibleParametersError
from readsift.core.labels import ReadClass
from readsift.genomics.signals import Signal, format_real
from readsift.models import M1, SemiGAN, StackedM1M2
from readsift.models.store import from_checkpoint
from readsift.nn.checkpoint import Checkpoint
from readsift.training.data import UnlabeledSet

logger = logging.getLogger(__name__)

_MIN_PROB = 1e-12
_MIN_GAIN = 0.01


class EmbedConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    perplexity: float = Field(30.0, gt=1.0)
    iterations: int = Field(1000, ge=1)
    learning_rate: float = Field(200.0, gt=0.0)
    exaggeration: float = Field(4.0, ge=1.0)
    exaggeration_iterations: int = Field(100, ge=0)
    momentum: float = Field(0.5, ge=0.0, lt=1.0)
    final_momentum: float = Field(0.8, ge=0.0, lt=1.0)
    momentum_switch: int = Field(250, ge=0)
    bisection_steps: int = Field(50, ge=1)
    entropy_tolerance: float = Field(1e-5, gt=0.0)
    seed: int = 0


def squared_distances(points: np.ndarray) -> np.ndarray:
    sq = np.sum(points * points, axis=1)
    d = sq[:, None] + sq[None, :] - 2.0 * points @ points.T
    np.fill_diagonal(d, 0.0)
    return np.maximum(d, 0.0)


def _conditional_row(d_row: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    """``p_{j|i}`` for one row (self excluded by the caller) and its entropy in nats."""
    # shift by the nearest neighbor so exp() cannot underflow to an all-zero row
    shifted = d_row - d_row.min()
    weights = np.exp(-shifted * beta)
    total = weights.sum()
    p = weights / total
    entropy = float(np.log(total) + beta * np.sum(shifted * p))
    return p, entropy


def conditional_probabilities(d: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    """Row-stochastic ``P[i, j] = p_{j|i}`` matched to the target perplexity."""
    n = d.shape[0]
    target = np.log(cfg.perplexity)
    p = np.zeros((n, n))
    misses = 0
    for i in range(n):
        others = np.concatenate([np.arange(i), np.arange(i + 1, n)])
        row = d[i, others]
        beta, lo, hi = 1.0, 0.0, np.inf
        p_row, entropy = _conditional_row(row, beta)
        for _ in range(cfg.bisection_steps):
            if abs(entropy - target) < cfg.entropy_tolerance:
                break
            if entropy > target:
                lo = beta
                beta = beta * 2.0 if np.isinf(hi) else (beta + hi) / 2.0
            else:
                hi = beta
                beta = (beta + lo) / 2.0
            p_row, entropy = _conditional_row(row, beta)
        else:
            misses += abs(entropy - target) >= cfg.entropy_tolerance
        p[i, others] = p_row
    if misses:
        logger.debug("Perplexity bisection stopped short of tolerance for %d of %d points", misses, n)
    return p


def joint_probabilities(points: np.ndarray, cfg: EmbedConfig) -> np.ndarray:
    conditional = conditional_probabilities(squared_distances(points), cfg)
    p = (conditional + conditional.T) / (2.0 * points.shape[0])
    return np.maximum(p, _MIN_PROB)


def student_t(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Heavy-tailed affinities ``q_ij`` and the unnormalized kernel ``(1 + |yi - yj|^2)^-1``."""
    kernel = 1.0 / (1.0 + squared_distances(y))
    np.fill_diagonal(kernel, 0.0)
    q = np.maximum(kernel / kernel.sum(), _MIN_PROB)
    return q, kernel


def kl_objective(p: np.ndarray, q: np.ndarray) -> float:
    """``sum p log(p / q)`` over the entries where ``p > 0``."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


class TSNEEmbedder:
    """
    Exact t-SNE.

    ``history`` holds the objective against the unexaggerated P after every
    iteration, so ``history[0]`` is the objective after iteration 1.
    """

    def __init__(self, cfg: Optional[EmbedConfig] = None) -> None:
        self.cfg = cfg or EmbedConfig()
        self.history: list[float] = []

    def _check(self, points: np.ndarray) -> None:
        if points.ndim != 2:
            raise DataError(f"points must be an N x D matrix, got shape {points.shape}")
        n = points.shape[0]
        if n < 4:
            raise InfeasibleParametersError(f"t-SNE needs at least 4 points, got {n}")
        if not np.all(np.isfinite(points)):
            raise DataError("points contain non-finite values")
        if self.cfg.perplexity >= (n - 1) / 3:
            raise InfeasibleParametersError(
                f"perplexity {self.cfg.perplexity} is too large for {n} points (must be below {(n - 1) / 3:.4g})"
            )

    def fit(self, points: np.ndarray) -> np.ndarray:
        """
        Embed ``points`` in the plane.

        Raises:
            InfeasibleParametersError: If N < 4 or the perplexity is not below (N - 1) / 3
            DataError: If a point is not finite
        """
        cfg = self.cfg
        points = np.asarray(points, dtype=np.float64)
        self._check(points)
        n = points.shape[0]

        p = joint_probabilities(points, cfg)
        rng = np.random.default_rng(cfg.seed)
        y = rng.normal(0.0, 1e-4, size=(n, 2))
        velocity = np.zeros_like(y)
        gains = np.ones_like(y)
        self.history = []

        for it in range(cfg.iterations):
            scale = cfg.exaggeration if it < cfg.exaggeration_iterations else 1.0
            momentum = cfg.momentum if it < cfg.momentum_switch else cfg.final_momentum

            q, kernel = student_t(y)
            weights = (scale * p - q) * kernel
            grad = 4.0 * (np.diag(weights.sum(axis=1)) - weights) @ y

            same_sign = (grad > 0) == (velocity > 0)
            gains = np.where(same_sign, gains * 0.8, gains + 0.2)
            np.maximum(gains, _MIN_GAIN, out=gains)
            velocity = momentum * velocity - cfg.learning_rate * gains * grad
            y = y + velocity
            y -= y.mean(axis=0)

            self.history.append(kl_objective(p, student_t(y)[0]))
            if (it + 1) % 100 == 0:
                logger.debug("t-SNE iteration %d: objective %.6f", it + 1, self.history[-1])

        return y


# ============================================================================
# Latent vectors and embedding files
# ============================================================================


def latent_features(ckpt: Checkpoint, signals: Sequence[Signal], batch_size: int = 256) -> np.ndarray:
    """
    Latent vectors of signals under a trained model.

    M1 and stacked M1+M2 checkpoints give M1 posterior means; semi-GAN
    checkpoints give the discriminator's penultimate activations.

    Raises:
        CheckpointFormatError: If the checkpoint has no latent space to read
    """
    x = UnlabeledSet.from_signals(signals).x
    model = from_checkpoint(ckpt)
    if isinstance(model, StackedM1M2):
        extractor = model.m1.features
    elif isinstance(model, M1 | SemiGAN):
        extractor = model.features
    else:
        raise CheckpointFormatError(f"a '{ckpt.kind}' checkpoint has no latent space (use m1, m1m2 or semigan)")
    if model.cfg.length != x.shape[1]:
        raise DataError(f"signals have length {x.shape[1]} but the model expects {model.cfg.length}")
    return np.concatenate([extractor(x[i : i + batch_size]) for i in range(0, len(x), batch_size)])


@dataclass
class Embedding:
    ids: tuple[str, ...]
    coords: np.ndarray
    labels: dict[str, ReadClass] = field(default_factory=dict)

    def to_tsv(self) -> str:
        lines = ["read_id\tx\ty\tlabel"]
        for read_id, (x, y) in zip(self.ids, self.coords.tolist(), strict=True):
            label = self.labels.get(read_id)
            lines.append(f"{read_id}\t{format_real(x)}\t{format_real(y)}\t{label.value if label else 'NA'}")
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_tsv())


def load_embedding(path: Path) -> Embedding:
    ids: list[str] = []
    coords: list[tuple[float, float]] = []
    labels: dict[str, ReadClass] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if line_number == 1 or not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 4:
                raise DataError(f"{path}:{line_number}: expected read_id<TAB>x<TAB>y<TAB>label")
            try:
                coords.append((float(fields[1]), float(fields[2])))
                if fields[3] != "NA":
                    labels[fields[0]] = ReadClass(fields[3])
            except ValueError as e:
                raise DataError(f"{path}:{line_number}: {e}") from None
            ids.append(fields[0])
    return Embedding(tuple(ids), np.array(coords, dtype=np.float64).reshape(-1, 2), labels)


def embed_signals(
    ckpt: Checkpoint,
    signals: Sequence[Signal],
    labels: Optional[Mapping[str, ReadClass]] = None,
    cfg: Optional[EmbedConfig] = None,
) -> Embedding:
    embedder = TSNEEmbedder(cfg)
    coords = embedder.fit(latent_features(ckpt, signals))
    return Embedding(tuple(s.read_id for s in signals), coords, dict(labels or {}))
