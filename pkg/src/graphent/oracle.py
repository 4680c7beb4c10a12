"""Ground-truth evolution by direct dense Kraus application.

This is the independent referee for every fast path: the initial density
matrix is evolved qubit by qubit through the full Kraus sum, with no shortcut
through the graph structure.  Only the shared data types (graphs, channels)
and the negativity definition are reused; the evolution code is deliberately
self-contained.
"""

from __future__ import annotations

import numpy as np

from .channels import ProductChannel, kraus_terms
from .exceptions import LimitExceededError
from .graphs import Graph, build_graph_state
from .negativity import negativity, qubit_count
from .partitions import Partition, bipartition_mask

#: Dense evolution cap: 2^8 x 2^8 matrices, worst case 4^8 Kraus terms.
ORACLE_QUBIT_LIMIT = 8


def graph_state_density(graph: Graph, limit: int = ORACLE_QUBIT_LIMIT) -> np.ndarray:
    if graph.n > limit:
        raise LimitExceededError(f"oracle cap is {limit} qubits, graph has {graph.n}")
    vec = build_graph_state(graph)
    return np.outer(vec, vec.conj())


def evolve_density(rho: np.ndarray, channel: ProductChannel, limit: int = ORACLE_QUBIT_LIMIT) -> np.ndarray:
    """Apply an independent product channel to a dense density matrix.

    The per-qubit factors act on disjoint qubits, so they commute as
    superoperators and are applied one qubit at a time.
    """
    rho = np.asarray(rho, dtype=complex)
    n = qubit_count(rho.shape[0])
    if channel.n != n:
        raise ValueError(f"channel acts on {channel.n} qubits, state has {n}")
    if n > limit:
        raise LimitExceededError(f"oracle cap is {limit} qubits, state has {n}")
    tensor = rho.reshape((2,) * (2 * n))
    for q in range(n):
        row, col = n - 1 - q, 2 * n - 1 - q
        acc = None
        for _, op in kraus_terms(channel.per_qubit[q]):
            term = np.moveaxis(np.tensordot(op, tensor, axes=([1], [row])), 0, row)
            term = np.moveaxis(np.tensordot(op.conj(), term, axes=([1], [col])), 0, col)
            acc = term if acc is None else acc + term
        tensor = acc
    return tensor.reshape(rho.shape)


def oracle_negativity(
    graph: Graph,
    partition: Partition,
    channel: ProductChannel,
    limit: int = ORACLE_QUBIT_LIMIT,
) -> float:
    """Negativity of the fully evolved state across the global bipartition."""
    rho = evolve_density(graph_state_density(graph, limit), channel, limit)
    return negativity(rho, bipartition_mask(partition), graph.n)
