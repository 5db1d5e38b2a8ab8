"""
Tests for the synthetic data generators.

Tests cover:
- Per-class counts, value ranges and determinism of synth_signals
- Item independence from the number of generated items
- Overlap consistency and class construction of synth_pipeline
- Infeasible generator parameters
"""

import numpy as np
import pytest
from pydantic import ValidationError

from readsift.core.errors import InfeasibleParametersError
from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics.coverage import build_coverage
from readsift.genomics.signals import downsample
from readsift.genomics.synth import (
    PipelineSpec,
    RepeatSpec,
    SynthConfig,
    synth_pipeline,
    synth_signal,
    synth_signals,
)


# ============================================================================
# Signal generator
# ============================================================================


class TestSynthSignals:
    """Test suite for synth_signals."""

    @pytest.fixture
    def config(self) -> SynthConfig:
        return SynthConfig(length=100, per_class={cls: 5 for cls in CLASSES}, seed=11)

    def test_counts_and_labels(self, config: SynthConfig) -> None:
        """Test that each class gets exactly its requested count."""
        signals, labels = synth_signals(config)

        assert len(signals) == 20
        for cls in CLASSES:
            assert sum(1 for c in labels.values() if c is cls) == 5
        assert signals[0].read_id == "synth_chimeric_00000"

    def test_values_normalized(self, config: SynthConfig) -> None:
        """Test that every signal lies in [0, 1] with a peak of 1."""
        signals, _ = synth_signals(config)

        for signal in signals:
            assert signal.length == 100
            assert signal.values.min() >= 0.0
            assert signal.values.max() == pytest.approx(1.0)

    def test_deterministic(self, config: SynthConfig) -> None:
        """Test that the same seed reproduces every value."""
        first, _ = synth_signals(config)
        second, _ = synth_signals(config)

        assert first == second

    def test_seed_changes_output(self, config: SynthConfig) -> None:
        """Test that a different seed gives different signals."""
        first, _ = synth_signals(config)
        other, _ = synth_signals(config.model_copy(update={"seed": 12}))

        assert not np.array_equal(first[0].values, other[0].values)

    def test_item_independent_of_count(self, config: SynthConfig) -> None:
        """Test that item k does not depend on how many items are generated."""
        bigger = config.model_copy(update={"per_class": {cls: 9 for cls in CLASSES}})

        assert synth_signal(ReadClass.LEFT_REPEAT, 3, config) == synth_signal(ReadClass.LEFT_REPEAT, 3, bigger)

    def test_left_repeat_is_heavier_on_the_left(self) -> None:
        """Test the orientation of the repeat prototypes."""
        cfg = SynthConfig(length=200, per_class={ReadClass.LEFT_REPEAT: 5, ReadClass.RIGHT_REPEAT: 5}, noise_sigma=0.0)
        signals, labels = synth_signals(cfg)

        for signal in signals:
            left, right = signal.values[:60].mean(), signal.values[-60:].mean()
            if labels[signal.read_id] is ReadClass.LEFT_REPEAT:
                assert left > right
            else:
                assert right > left

    def test_ranges_must_be_ordered(self) -> None:
        """Test that a reversed range is a validation error."""
        with pytest.raises(ValidationError, match="ordered"):
            SynthConfig(notch_width=(0.08, 0.05))


# ============================================================================
# Read and overlap generator
# ============================================================================


class TestSynthPipeline:
    """Test suite for synth_pipeline."""

    @pytest.fixture
    def spec(self) -> PipelineSpec:
        return PipelineSpec(
            genome_length=20_000,
            n_reads=40,
            read_length=(2_000, 3_000),
            chimera_rate=0.1,
            min_overlap=500,
            seed=5,
        )

    def test_chimera_count(self, spec: PipelineSpec) -> None:
        """Test that the fused-read count follows the chimera rate."""
        reads, _, labels = synth_pipeline(spec)

        assert len(reads) == 40
        assert sum(1 for c in labels.values() if c is ReadClass.CHIMERIC) == 4
        assert set(labels.values()) <= {ReadClass.CHIMERIC, ReadClass.REGULAR}

    def test_records_consistent(self, spec: PipelineSpec) -> None:
        """Test that every overlap is long enough and names known reads."""
        reads, records, _ = synth_pipeline(spec)

        assert records
        for record in records:
            assert record.qname < record.tname
            assert record.qlen == reads[record.qname]
            assert record.tlen == reads[record.tname]
            assert record.qend - record.qstart >= spec.min_overlap
            assert record.qend - record.qstart == record.tend - record.tstart

    def test_coverage_builds(self, spec: PipelineSpec) -> None:
        """Test that the generated overlaps produce coverage for every read."""
        reads, records, _ = synth_pipeline(spec)

        graphs = build_coverage(records, reads)

        assert set(graphs) == set(reads)
        assert sum(int(g.depth.sum()) for g in graphs.values()) > 0

    def test_fused_reads_dip_at_the_join(self) -> None:
        """Test that fused reads at 20x or more show an interior bin under half of both flank means."""
        spec = PipelineSpec(
            genome_length=30_000,
            n_reads=360,
            read_length=(2_000, 3_000),
            chimera_rate=0.05,
            min_overlap=500,
            seed=11,
        )
        reads, records, labels = synth_pipeline(spec)
        graphs = build_coverage(records, reads)
        regular = [g for read_id, g in graphs.items() if labels[read_id] is ReadClass.REGULAR]
        assert np.median([g.depth.mean() for g in regular]) >= 20

        fused = [downsample(graphs[read_id], 20) for read_id, c in labels.items() if c is ReadClass.CHIMERIC]
        dipped = [
            values[3:17].min() < 0.5 * min(values[:3].mean(), values[17:].mean()) for values in fused
        ]

        assert len(fused) == 18
        # pieces placed at a genome end start from a thin flank
        assert sum(dipped) >= 0.8 * len(fused)

    def test_deterministic(self, spec: PipelineSpec) -> None:
        """Test that the same seed gives the same reads and overlaps."""
        assert synth_pipeline(spec) == synth_pipeline(spec)

    def test_repeat_reads_labeled(self) -> None:
        """Test that reads ending inside a repeat copy get a repeat class."""
        spec = PipelineSpec(
            genome_length=30_000,
            n_reads=120,
            read_length=(2_000, 3_000),
            chimera_rate=0.0,
            repeat=RepeatSpec(start=5_000, length=4_000, copy_start=20_000),
            seed=2,
        )

        _, _, labels = synth_pipeline(spec)
        found = set(labels.values())

        assert ReadClass.LEFT_REPEAT in found
        assert ReadClass.RIGHT_REPEAT in found
        assert ReadClass.CHIMERIC not in found

    def test_reads_longer_than_genome(self) -> None:
        """Test that reads that cannot fit are infeasible."""
        with pytest.raises(InfeasibleParametersError):
            synth_pipeline(PipelineSpec(genome_length=1_000, read_length=(500, 2_000)))

    def test_overlapping_repeat_copies(self) -> None:
        """Test that repeat copies sharing bases are infeasible."""
        spec = PipelineSpec(
            genome_length=50_000,
            read_length=(1_000, 2_000),
            repeat=RepeatSpec(start=1_000, length=5_000, copy_start=3_000),
        )

        with pytest.raises(InfeasibleParametersError, match="overlap"):
            synth_pipeline(spec)
