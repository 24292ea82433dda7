"""
dynamo-lab: dynamic monopolies, stable sets and immortal sets in bootstrap percolation
"""

from .certify import Certificate, Property, certify, is_dynamo, is_immortal, is_monotone_dynamo, is_stable
from .dynamics import Configuration, Outcome, RunTrace, ThresholdModel, Variant, run, step
from .errors import DynamoLabError
from .graph import Graph, load_graph, dump_graph
from .search import SearchResult, all_min_sets, min_set

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Configuration",
    "DynamoLabError",
    "Graph",
    "Outcome",
    "Property",
    "RunTrace",
    "SearchResult",
    "ThresholdModel",
    "Variant",
    "all_min_sets",
    "certify",
    "dump_graph",
    "is_dynamo",
    "is_immortal",
    "is_monotone_dynamo",
    "is_stable",
    "load_graph",
    "min_set",
    "run",
    "step",
]
