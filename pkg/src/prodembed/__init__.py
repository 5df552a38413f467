"""Embedding dimensions of graph products and the linking machinery behind them."""

__version__ = "0.1.0"

from .graph_core import (  # noqa: E402
    DimensionResult,
    FactorClass,
    Graph,
    GraphParseError,
    HypothesisError,
    KuratowskiWitness,
    classify_factor,
    is_planar,
    min_embedding_dim,
    parse_graph,
)

__all__ = [
    "__version__",
    "DimensionResult",
    "FactorClass",
    "Graph",
    "GraphParseError",
    "HypothesisError",
    "KuratowskiWitness",
    "classify_factor",
    "is_planar",
    "min_embedding_dim",
    "parse_graph",
]
