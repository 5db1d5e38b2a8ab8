"""
Tests for the exact t-SNE embedder and embedding files.
"""

from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from readsift.core.errors import CheckpointFormatError, DataError, InfeasibleParametersError
from readsift.core.labels import ReadClass
from readsift.evaluation.tsne import (
    EmbedConfig,
    Embedding,
    TSNEEmbedder,
    conditional_probabilities,
    embed_signals,
    joint_probabilities,
    kl_objective,
    latent_features,
    load_embedding,
    squared_distances,
)
from readsift.genomics.signals import Signal
from readsift.models import M1, FFClassifier, ModelConfig, StackedM1M2
from readsift.models.store import to_checkpoint


@pytest.fixture
def clusters() -> tuple[np.ndarray, np.ndarray]:
    """Three tight, far-apart clusters of ten points in five dimensions."""
    rng = np.random.default_rng(0)
    centers = np.array([[0.0] * 5, [40.0] + [0.0] * 4, [0.0, 40.0, 0.0, 0.0, 0.0]])
    points = np.concatenate([c + rng.normal(size=(10, 5)) for c in centers])
    return points, np.repeat(np.arange(3), 10)


def _fast(**kwargs) -> EmbedConfig:
    return EmbedConfig(**{"perplexity": 5.0, "iterations": 300, **kwargs})


# ============================================================================
# Affinities
# ============================================================================


class TestAffinities:
    """Test suite for the input-space probabilities."""

    def test_squared_distances(self) -> None:
        """Test pairwise squared distances on a right triangle."""
        d = squared_distances(np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]))
        assert np.allclose(d, [[0, 9, 16], [9, 0, 25], [16, 25, 0]])

    def test_rows_match_perplexity(self) -> None:
        """Test that every conditional row has entropy log(perplexity)."""
        points = np.random.default_rng(1).normal(size=(40, 3))
        cfg = EmbedConfig(perplexity=5.0)
        p = conditional_probabilities(squared_distances(points), cfg)

        assert np.allclose(p.sum(axis=1), 1.0)
        assert np.all(np.diag(p) == 0.0)
        for row in p:
            nonzero = row[row > 0]
            entropy = -np.sum(nonzero * np.log(nonzero))
            assert entropy == pytest.approx(np.log(5.0), abs=1e-3)

    def test_joint_is_symmetric_distribution(self) -> None:
        """Test symmetrization of the conditional probabilities."""
        points = np.random.default_rng(2).normal(size=(20, 4))
        p = joint_probabilities(points, EmbedConfig(perplexity=4.0))
        assert np.allclose(p, p.T)
        assert p.sum() == pytest.approx(1.0, abs=1e-6)

    def test_objective_of_identical_distributions(self) -> None:
        """Test that the divergence of a distribution from itself is zero."""
        p = joint_probabilities(np.random.default_rng(3).normal(size=(10, 2)), EmbedConfig(perplexity=2.0))
        assert kl_objective(p, p) == pytest.approx(0.0, abs=1e-12)


# ============================================================================
# Embedding
# ============================================================================


class TestTSNEEmbedder:
    """Test suite for TSNEEmbedder.fit."""

    def test_shape_and_history(self, clusters: tuple[np.ndarray, np.ndarray]) -> None:
        """Test the output shape and the per-iteration objective."""
        points, _ = clusters
        embedder = TSNEEmbedder(_fast(iterations=50))
        y = embedder.fit(points)

        assert y.shape == (30, 2)
        assert np.all(np.isfinite(y))
        assert len(embedder.history) == 50

    def test_deterministic_given_seed(self, clusters: tuple[np.ndarray, np.ndarray]) -> None:
        """Test that the same seed reproduces the layout and another seed does not."""
        points, _ = clusters
        first = TSNEEmbedder(_fast(iterations=50, seed=4)).fit(points)
        second = TSNEEmbedder(_fast(iterations=50, seed=4)).fit(points)
        other = TSNEEmbedder(_fast(iterations=50, seed=5)).fit(points)

        assert np.array_equal(first, second)
        assert not np.array_equal(first, other)

    def test_separates_clusters(self, clusters: tuple[np.ndarray, np.ndarray]) -> None:
        """Test that nearest neighbors in the plane come from the same cluster."""
        points, membership = clusters
        y = TSNEEmbedder(_fast()).fit(points)

        d = squared_distances(y)
        np.fill_diagonal(d, np.inf)
        nearest = np.argmin(d, axis=1)
        assert np.mean(membership[nearest] == membership) >= 0.9

    def test_objective_falls(self, clusters: tuple[np.ndarray, np.ndarray]) -> None:
        """Test that optimization lowers the objective from the collapsed start."""
        points, _ = clusters
        embedder = TSNEEmbedder(_fast())
        embedder.fit(points)
        assert embedder.history[-1] < embedder.history[0]

    def test_duplicate_points_allowed(self) -> None:
        """Test that repeated points still embed."""
        points = np.random.default_rng(6).normal(size=(12, 3))
        points[1] = points[0]
        y = TSNEEmbedder(EmbedConfig(perplexity=2.0, iterations=30)).fit(points)
        assert np.all(np.isfinite(y))

    def test_too_few_points(self) -> None:
        """Test the minimum of four points."""
        with pytest.raises(InfeasibleParametersError, match="at least 4"):
            TSNEEmbedder(EmbedConfig(perplexity=2.0)).fit(np.zeros((3, 2)))

    def test_perplexity_too_large(self) -> None:
        """Test perplexity at the (N - 1) / 3 bound."""
        points = np.random.default_rng(7).normal(size=(10, 2))
        with pytest.raises(InfeasibleParametersError, match="perplexity"):
            TSNEEmbedder(EmbedConfig(perplexity=3.0)).fit(points)

    def test_non_finite_points(self) -> None:
        """Test rejection of NaN input."""
        points = np.random.default_rng(8).normal(size=(10, 2))
        points[3, 1] = np.nan
        with pytest.raises(DataError, match="non-finite"):
            TSNEEmbedder(EmbedConfig(perplexity=2.0)).fit(points)

    def test_config_bounds(self) -> None:
        """Test that iterations must be positive."""
        with pytest.raises(ValidationError):
            EmbedConfig(iterations=0)


# ============================================================================
# Latent features and files
# ============================================================================


class TestLatentFeatures:
    """Test suite for reading latent vectors out of checkpoints."""

    @pytest.fixture
    def cfg(self) -> ModelConfig:
        return ModelConfig(length=16, z1_dim=4, z2_dim=2, z_gan_dim=8)

    @pytest.fixture
    def signals(self) -> list[Signal]:
        rng = np.random.default_rng(9)
        return [Signal(f"r{i}", rng.uniform(size=16)) for i in range(8)]

    def test_m1_posterior_means(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that M1 and stacked checkpoints give the same z1 features."""
        stacked = StackedM1M2(cfg)
        features = latent_features(to_checkpoint(stacked), signals)
        assert features.shape == (8, 4)
        assert np.allclose(features, stacked.m1.features(np.stack([s.values for s in signals])))
        assert latent_features(to_checkpoint(M1(cfg)), signals).shape == (8, 4)

    def test_ff_has_no_latent_space(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that the supervised baseline is refused."""
        with pytest.raises(CheckpointFormatError, match="latent"):
            latent_features(to_checkpoint(FFClassifier(cfg)), signals)

    def test_embed_signals(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test the full signals-to-plane path with partial labels."""
        labels = {"r0": ReadClass.CHIMERIC}
        embedding = embed_signals(to_checkpoint(M1(cfg)), signals, labels, EmbedConfig(perplexity=2.0, iterations=20))
        assert embedding.ids == tuple(s.read_id for s in signals)
        assert embedding.coords.shape == (8, 2)
        assert embedding.labels == labels


class TestEmbeddingFiles:
    """Test suite for embedding TSV files."""

    def test_save_and_load(self, tmp_path: Path) -> None:
        """Test that ids, coordinates and labels survive a file."""
        embedding = Embedding(("a", "b"), np.array([[0.5, -1.25], [2.0, 3.0]]), {"b": ReadClass.REGULAR})
        path = tmp_path / "embedding.tsv"
        embedding.save(path)

        lines = path.read_text().splitlines()
        assert lines[0] == "read_id\tx\ty\tlabel"
        assert lines[1].endswith("\tNA")

        loaded = load_embedding(path)
        assert loaded.ids == ("a", "b")
        assert np.allclose(loaded.coords, embedding.coords)
        assert loaded.labels == {"b": ReadClass.REGULAR}

    def test_unknown_label(self, tmp_path: Path) -> None:
        """Test a row with a label that is not a read class."""
        path = tmp_path / "embedding.tsv"
        path.write_text("read_id\tx\ty\tlabel\na\t0\t0\tmystery\n")
        with pytest.raises(DataError, match=":2:"):
            load_embedding(path)


@pytest.mark.slow
def test_full_schedule_on_three_clusters() -> None:
    """Default schedule on 150 points: cluster neighbors, falling objective, reproducible layout."""
    rng = np.random.default_rng(12)
    centers = rng.normal(scale=20.0, size=(3, 10))
    points = np.concatenate([c + rng.normal(size=(50, 10)) for c in centers])
    membership = np.repeat(np.arange(3), 50)

    embedder = TSNEEmbedder(EmbedConfig(seed=1))
    y = embedder.fit(points)

    d = squared_distances(y)
    np.fill_diagonal(d, np.inf)
    assert np.mean(membership[np.argmin(d, axis=1)] == membership) >= 0.95
    assert embedder.history[999] < embedder.history[100]
    assert np.array_equal(y, TSNEEmbedder(EmbedConfig(seed=1)).fit(points))
