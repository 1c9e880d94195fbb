"""Domain types shared by the services."""

from .graph import EdgeNeighborhoods, HubReport, SimilarityGraph, WeightedGraph
from .inference import ConditionReport, CriticalGap, ExactNull, PValueReport, StatisticKind
from .labels import LabelVector
from .moments import MomentSet, ObservedCounts, StatValues, WeightSums
from .simulation import PowerRow, PowerTable, TrialRecord

__all__ = [
    "ConditionReport",
    "CriticalGap",
    "EdgeNeighborhoods",
    "ExactNull",
    "HubReport",
    "LabelVector",
    "MomentSet",
    "ObservedCounts",
    "PowerRow",
    "PowerTable",
    "PValueReport",
    "SimilarityGraph",
    "StatValues",
    "StatisticKind",
    "TrialRecord",
    "WeightedGraph",
    "WeightSums",
]
