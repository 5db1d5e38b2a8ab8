"""
Tests for turning checkpoints into classifications and classification files.
"""

from pathlib import Path

import numpy as np
import pytest

from readsift.core.errors import CheckpointFormatError, DataError
from readsift.core.labels import ReadClass
from readsift.evaluation.classify import (
    Classification,
    classify_checkpoint,
    classify_m1m2,
    classify_semigan,
    labels_of,
    load_classifications,
    save_classifications,
    split_stacked,
)
from readsift.genomics.signals import Signal
from readsift.models import M1, M2, FFClassifier, ModelConfig, SemiGAN, StackedM1M2
from readsift.models.store import to_checkpoint


@pytest.fixture
def cfg() -> ModelConfig:
    return ModelConfig(length=16, z1_dim=4, z2_dim=2, z_gan_dim=8, seed=1)


@pytest.fixture
def signals() -> list[Signal]:
    rng = np.random.default_rng(7)
    return [Signal(f"read_{i}", rng.uniform(size=16)) for i in range(6)]


def _assert_valid(classifications: list[Classification], signals: list[Signal]) -> None:
    assert [c.read_id for c in classifications] == [s.read_id for s in signals]
    for c in classifications:
        assert c.scores.sum() == pytest.approx(1.0, abs=1e-9)


# ============================================================================
# Classification
# ============================================================================


class TestClassification:
    """Test suite for the Classification record."""

    def test_label_is_argmax(self) -> None:
        """Test the predicted class."""
        c = Classification("r", np.array([0.1, 0.2, 0.6, 0.1]))
        assert c.label is ReadClass.RIGHT_REPEAT

    def test_ties_go_to_lowest_index(self) -> None:
        """Test that equal top scores resolve to the first class."""
        c = Classification("r", np.array([0.4, 0.4, 0.1, 0.1]))
        assert c.label is ReadClass.CHIMERIC

    def test_scores_must_sum_to_one(self) -> None:
        """Test rejection of an unnormalized score vector."""
        with pytest.raises(DataError, match="sum"):
            Classification("r", np.array([0.5, 0.5, 0.5, 0.0]))

    def test_scores_must_be_probabilities(self) -> None:
        """Test rejection of negative scores."""
        with pytest.raises(DataError, match=r"\[0, 1\]"):
            Classification("r", np.array([1.5, -0.5, 0.0, 0.0]))

    def test_one_score_per_class(self) -> None:
        """Test rejection of the wrong number of scores."""
        with pytest.raises(DataError, match="4 scores"):
            Classification("r", np.array([0.5, 0.5]))


# ============================================================================
# Classifying with checkpoints
# ============================================================================


class TestClassify:
    """Test suite for checkpoint-based classification."""

    def test_ff(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test the supervised baseline."""
        model = FFClassifier(cfg)
        result = classify_checkpoint(to_checkpoint(model), signals)

        _assert_valid(result, signals)
        x = np.stack([s.values for s in signals])
        assert np.allclose([c.scores for c in result], model.predict_proba(x))

    def test_m1m2_halves_match_stack(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that classifying with split M1 and M2 checkpoints equals the stacked model."""
        stacked = StackedM1M2(cfg)
        ckpt = to_checkpoint(stacked)
        m1_ckpt, m2_ckpt = split_stacked(ckpt)

        assert m1_ckpt.kind == "m1" and m2_ckpt.kind == "m2"
        assert all(name.startswith("m1.") for name in m1_ckpt.params)
        assert all(name.startswith("m2.") for name in m2_ckpt.params)

        result = classify_m1m2(m1_ckpt, m2_ckpt, signals)
        _assert_valid(result, signals)
        x = np.stack([s.values for s in signals])
        assert np.allclose([c.scores for c in result], stacked.predict_proba(x))
        assert [c.label for c in result] == [c.label for c in classify_checkpoint(ckpt, signals)]

    def test_m1m2_feature_width_mismatch(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that M2 must accept the features M1 produces."""
        m1_ckpt = to_checkpoint(M1(cfg))
        m2_ckpt = to_checkpoint(M2(cfg.model_copy(update={"z1_dim": 6})))
        with pytest.raises(CheckpointFormatError, match="features"):
            classify_m1m2(m1_ckpt, m2_ckpt, signals)

    def test_semigan_uniform_logits_renormalize(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that a uniform five-way output becomes 0.25 per class."""
        ckpt = to_checkpoint(SemiGAN(cfg))
        ckpt.params["semigan.disc.fc3.weight"] = np.zeros_like(ckpt.params["semigan.disc.fc3.weight"])
        ckpt.params["semigan.disc.fc3.bias"] = np.zeros_like(ckpt.params["semigan.disc.fc3.bias"])

        result = classify_semigan(ckpt, signals)

        for c in result:
            assert np.allclose(c.scores, 0.25)
            assert c.label is ReadClass.CHIMERIC

    def test_deterministic(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that the same checkpoint and signals give the same scores."""
        ckpt = to_checkpoint(SemiGAN(cfg))
        first = classify_checkpoint(ckpt, signals)
        second = classify_checkpoint(ckpt, signals)
        assert all(np.array_equal(a.scores, b.scores) for a, b in zip(first, second, strict=True))

    def test_no_signals(self, cfg: ModelConfig) -> None:
        """Test an empty input."""
        assert classify_checkpoint(to_checkpoint(FFClassifier(cfg)), []) == []

    def test_signal_length_must_match(self, cfg: ModelConfig) -> None:
        """Test signals prepared at another length."""
        signals = [Signal("short", np.full(8, 0.5))]
        with pytest.raises(DataError, match="expects 16"):
            classify_checkpoint(to_checkpoint(FFClassifier(cfg)), signals)

    def test_m1_cannot_classify(self, cfg: ModelConfig, signals: list[Signal]) -> None:
        """Test that an unsupervised checkpoint is refused."""
        with pytest.raises(CheckpointFormatError, match="cannot classify"):
            classify_checkpoint(to_checkpoint(M1(cfg)), signals)

    def test_split_needs_stacked(self, cfg: ModelConfig) -> None:
        """Test split_stacked on a checkpoint of another kind."""
        with pytest.raises(CheckpointFormatError, match="m1m2"):
            split_stacked(to_checkpoint(FFClassifier(cfg)))


# ============================================================================
# Classification files
# ============================================================================


class TestClassificationFiles:
    """Test suite for classification TSV files."""

    def test_save_and_load(self, tmp_path: Path) -> None:
        """Test that labels and scores survive a file."""
        original = [
            Classification("a", np.array([0.7, 0.1, 0.1, 0.1])),
            Classification("b", np.array([1 / 3, 1 / 3, 0.0, 1 / 3])),
        ]
        path = tmp_path / "classes.tsv"
        save_classifications(original, path)

        lines = path.read_text().splitlines()
        assert lines[0] == "read_id\tlabel\tchimeric\tleft_repeat\tright_repeat\tregular"
        assert lines[1].startswith("a\tchimeric\t")

        loaded = load_classifications(path)
        assert labels_of(loaded) == labels_of(original)
        for a, b in zip(loaded, original, strict=True):
            assert np.allclose(a.scores, b.scores, atol=1e-8)

    def test_wrong_column_count(self, tmp_path: Path) -> None:
        """Test a row with missing scores."""
        path = tmp_path / "classes.tsv"
        path.write_text("read_id\tlabel\tchimeric\tleft_repeat\tright_repeat\tregular\na\tchimeric\t1\n")
        with pytest.raises(DataError, match="expected 6 columns"):
            load_classifications(path)

    def test_non_numeric_score(self, tmp_path: Path) -> None:
        """Test a row whose score is not a number."""
        path = tmp_path / "classes.tsv"
        path.write_text("header\na\tregular\t0\t0\t0\tone\n")
        with pytest.raises(DataError, match="numbers"):
            load_classifications(path)
