"""Vertex multipartitions and the boundary decomposition of a graph.

Given a partition of the vertices, the edges whose endpoints carry different
part labels are the crossing edges; their endpoints form the boundary
subsystem.  After factoring out the CZ gates of all non-crossing edges (which
are local unitaries for the partition), the cut entanglement lives entirely on
the boundary subgraph, which keeps only the crossing edges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .graphs import Graph, build_graph_state

_ONE_VS_REST_RE = re.compile(r"^one-vs-rest:(\d+|mid)$")


@dataclass(frozen=True, init=False)
class Partition:
    """Per-vertex part labels; labels must be dense in ``0..part_count-1``."""

    labels: tuple[int, ...]

    def __init__(self, labels: Iterable[int]) -> None:
        labs = tuple(int(v) for v in labels)
        if not labs:
            raise ValueError("partition needs at least one vertex")
        count = max(labs) + 1
        present = set(labs)
        if min(labs) < 0 or present != set(range(count)):
            raise ValueError(f"part labels must cover 0..k-1 with every part non-empty, got {labs}")
        object.__setattr__(self, "labels", labs)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def part_count(self) -> int:
        return max(self.labels) + 1


def parse_partition(spec: str, n: int) -> Partition:
    """Parse ``"0,1,1,1"`` or the shorthand ``one-vs-rest:k`` (``k`` may be ``mid``)."""
    spec = spec.strip()
    m = _ONE_VS_REST_RE.match(spec)
    if m:
        k = n // 2 if m.group(1) == "mid" else int(m.group(1))
        if not 0 <= k < n:
            raise ValueError(f"one-vs-rest vertex {k} out of range for n={n}")
        if n < 2:
            raise ValueError("one-vs-rest needs at least 2 vertices")
        return Partition(tuple(0 if v == k else 1 for v in range(n)))
    labels = [int(tok) for tok in spec.split(",")]
    if len(labels) != n:
        raise ValueError(f"partition has {len(labels)} labels but the graph has {n} vertices")
    return Partition(labels)


def bipartition_mask(partition: Partition) -> int:
    """Bit-mask of the vertices in part 1 of a two-part partition."""
    if partition.part_count != 2:
        raise ValueError(f"need a bipartition, got {partition.part_count} parts")
    mask = 0
    for v, lab in enumerate(partition.labels):
        if lab == 1:
            mask |= 1 << v
    return mask


@dataclass(frozen=True)
class BoundaryDecomposition:
    """Boundary structure of a partitioned graph.

    ``boundary_graph`` is the subgraph on the boundary vertices keeping only
    the crossing edges, relabeled ``0..b-1`` in ascending original-vertex
    order (``boundary_vertices[local] == original``).  It is ``None`` when the
    partition has no crossing edges.
    """

    partition: Partition
    crossing_edges: tuple[tuple[int, int], ...]
    boundary_vertices: tuple[int, ...]
    non_boundary_vertices: tuple[int, ...]
    boundary_mask: int
    non_boundary_mask: int
    boundary_graph: Optional[Graph]
    induced_partition: Optional[Partition]


def decompose(graph: Graph, partition: Partition) -> BoundaryDecomposition:
    """Classify edges and vertices of ``graph`` relative to ``partition``."""
    labels = partition.labels
    if len(labels) != graph.n:
        raise ValueError(f"partition covers {len(labels)} vertices but the graph has {graph.n}")
    crossing = tuple(e for e in graph.edges if labels[e[0]] != labels[e[1]])
    boundary = tuple(sorted({v for e in crossing for v in e}))
    local = {v: t for t, v in enumerate(boundary)}
    non_boundary = tuple(v for v in range(graph.n) if v not in local)
    bmask = sum(1 << v for v in boundary)
    nmask = sum(1 << v for v in non_boundary)
    if not boundary:
        return BoundaryDecomposition(partition, crossing, boundary, non_boundary, bmask, nmask, None, None)
    bgraph = Graph(len(boundary), [(local[i], local[j]) for i, j in crossing])
    # renormalize the inherited labels to 0..k-1 by first appearance
    seen: dict[int, int] = {}
    induced = []
    for v in boundary:
        induced.append(seen.setdefault(labels[v], len(seen)))
    return BoundaryDecomposition(
        partition, crossing, boundary, non_boundary, bmask, nmask, bgraph, Partition(induced)
    )


def factored_graph_state(
    graph: Graph, decomposition: BoundaryDecomposition
) -> tuple[np.ndarray, np.ndarray, tuple[tuple[int, int], ...]]:
    """Split the graph state into boundary and non-boundary factors.

    Returns the boundary-subgraph state (on the relabeled boundary qubits),
    the ``|+...+>`` state of the non-boundary qubits, and the non-crossing
    edges whose CZ gates reassemble the full graph state when applied to the
    tensor product of the two factors.
    """
    if decomposition.partition.n != graph.n or not set(decomposition.crossing_edges) <= set(graph.edges):
        raise ValueError("decomposition does not belong to this graph")
    if decomposition.boundary_graph is not None:
        boundary_state = build_graph_state(decomposition.boundary_graph)
    else:
        boundary_state = np.ones(1, dtype=complex)
    r = len(decomposition.non_boundary_vertices)
    rest = np.full(1 << r, 2.0 ** (-r / 2.0), dtype=complex)
    crossing = set(decomposition.crossing_edges)
    gates = tuple(e for e in graph.edges if e not in crossing)
    return boundary_state, rest, gates
