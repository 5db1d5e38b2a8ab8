"""Read-level data: overlaps, coverage, signals, heuristic labels, filtering and synthetic data."""

from readsift.genomics.assembly import ContigStats, FilterReport, filter_overlaps, ng50
from readsift.genomics.coverage import CoverageGraph, build_coverage
from readsift.genomics.heuristic import HeuristicParams, balance_pool, heuristic_label
from readsift.genomics.overlaps import OverlapRecord, ReadTable, parse_paf, write_paf
from readsift.genomics.signals import PrepReport, Signal, prepare, prepare_all
from readsift.genomics.synth import PipelineSpec, RepeatSpec, SynthConfig, synth_pipeline, synth_signals

__all__ = [
    "OverlapRecord",
    "ReadTable",
    "parse_paf",
    "write_paf",
    "CoverageGraph",
    "build_coverage",
    "Signal",
    "PrepReport",
    "prepare",
    "prepare_all",
    "HeuristicParams",
    "heuristic_label",
    "balance_pool",
    "FilterReport",
    "ContigStats",
    "filter_overlaps",
    "ng50",
    "SynthConfig",
    "PipelineSpec",
    "RepeatSpec",
    "synth_signals",
    "synth_pipeline",
]
