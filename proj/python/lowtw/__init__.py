"""Low-treewidth embeddings of planar graphs.

Builders return plain dicts in the same JSON layout the CLI writes.
"""

import json

from ._core import Graph, GraphError, exact_treewidth, generate, heuristic_width, read_edge_list
from . import _core

__all__ = [
    "Graph",
    "GraphError",
    "chain",
    "cop_decomposition",
    "embed",
    "exact_treewidth",
    "generate",
    "heuristic_width",
    "read_edge_list",
    "shortcut_partition",
    "verify",
]


def chain(g, seed=0, r=5):
    return json.loads(_core.chain_json(g, seed, r))


def cop_decomposition(g, delta, seed=0, r=5):
    return json.loads(_core.cop_json(g, delta, seed, r))


def shortcut_partition(g, epsilon, seed=0, r=5):
    return json.loads(_core.shortcut_json(g, epsilon, seed, r))


def embed(g, seed=0, psi=8, tau="auto", r=5):
    return json.loads(_core.embed_json(g, seed, psi, str(tau), r))


def verify(g, artifact):
    """(valid, violations) for an artifact dict."""
    return _core.verify_json(g, json.dumps(artifact))
