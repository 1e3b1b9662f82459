"""Professional-connection graph and the coverage activation function.

A doctor's connection set is the set of doctors it can inform. The value of
a leader set is the number of distinct doctors adjacent to at least one
leader; a node is countable whether or not it is itself a leader.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

__all__ = [
    "EcId",
    "SocialGraph",
    "GraphError",
    "activation_value",
    "marginal_contribution",
]

# Doctor identifier: a positive integer, contiguous 1..m inside an Instance.
EcId = int


class GraphError(ValueError):
    """Raised for queries with ids outside the graph or malformed edges."""


@dataclass(frozen=True)
class SocialGraph:
    """Undirected connection graph stored as per-node neighbor sets."""

    nodes: frozenset[EcId]
    adjacency: Mapping[EcId, frozenset[EcId]]

    @staticmethod
    def from_neighbor_lists(neighbors: Mapping[EcId, Iterable[EcId]]) -> "SocialGraph":
        """Build from per-node neighbor lists, symmetrizing as it goes.

        An edge listed on either endpoint is added to both, so hand-written
        fixtures may list each edge once. Self-loops and references to
        absent nodes are rejected.
        """
        nodes = frozenset(neighbors)
        adjacency: dict[EcId, set[EcId]] = {v: set() for v in nodes}
        for v, nbrs in neighbors.items():
            for u in nbrs:
                if u == v:
                    raise GraphError(f"self-loop at node {v}")
                if u not in nodes:
                    raise GraphError(f"dangling edge: node {v} lists absent node {u}")
                adjacency[v].add(u)
                adjacency[u].add(v)
        return SocialGraph(
            nodes=nodes,
            adjacency={v: frozenset(s) for v, s in adjacency.items()},
        )

    def neighbors(self, ec: EcId) -> frozenset[EcId]:
        try:
            return self.adjacency[ec]
        except KeyError:
            raise GraphError(f"unknown node {ec}") from None


def activation_value(leaders: Iterable[EcId], graph: SocialGraph) -> int:
    """Number of distinct doctors adjacent to at least one leader.

    Nodes that are themselves leaders still count when some other leader
    reaches them.
    """
    informed: set[EcId] = set()
    for ec in leaders:
        informed |= graph.neighbors(ec)
    return len(informed)


def marginal_contribution(candidate: EcId, leaders: Iterable[EcId], graph: SocialGraph) -> int:
    """Activation gain from adding `candidate` to `leaders`."""
    leader_list = list(leaders)
    if candidate in leader_list:
        raise GraphError(f"node {candidate} is already a leader")
    covered: set[EcId] = set()
    for ec in leader_list:
        covered |= graph.neighbors(ec)
    return len(graph.neighbors(candidate) - covered)
