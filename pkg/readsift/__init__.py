"""
readsift - Semi-supervised classification of long reads from their coverage graphs.

readsift turns read-to-read overlaps into per-read coverage signals, classifies
each read as chimeric, left_repeat, right_repeat or regular with a supervised
baseline, a stacked VAE (M1+M2) or a semi-supervised GAN, and filters the
overlap set before assembly.
"""

__version__ = "0.1.0"
__author__ = "readsift Contributors"

from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics import (
    HeuristicParams,
    OverlapRecord,
    ReadTable,
    Signal,
    SynthConfig,
    build_coverage,
    filter_overlaps,
    heuristic_label,
    ng50,
    parse_paf,
    prepare,
    synth_signals,
)
from readsift.models import ModelConfig, ModelFactory
from readsift.training import TrainConfig, TrainerFactory

__all__ = [
    "CLASSES",
    "ReadClass",
    "HeuristicParams",
    "OverlapRecord",
    "ReadTable",
    "Signal",
    "SynthConfig",
    "build_coverage",
    "filter_overlaps",
    "heuristic_label",
    "ng50",
    "parse_paf",
    "prepare",
    "synth_signals",
    "ModelConfig",
    "ModelFactory",
    "TrainConfig",
    "TrainerFactory",
]
