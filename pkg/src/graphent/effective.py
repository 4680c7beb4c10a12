"""Effective Z-mask distribution of Pauli maps on graph states, and exact negativity.

On graph-basis states every Pauli string acts, up to phase, as a pure Z string
whose support follows from the rewrite rules (X on a vertex becomes Z on its
neighbors, Y becomes Z on the vertex and its neighbors).  An independent Pauli
map on ``n`` qubits therefore collapses to an effective dephasing map with at
most ``2**n`` Kraus operators ``sqrt(P(m)) Z^m``; this module computes the
distribution ``P`` over masks ``m``, splits it into non-boundary (flag) and
boundary indices, and evaluates the entanglement of the evolved state exactly
as a flag-weighted average of boundary-subgraph negativities.

Two interchangeable algorithms build the distribution:

* ``enumerate``: walk all joint Pauli labels recursively, skipping
  zero-probability branches, and XOR-accumulate each leaf's mask.  This is the
  reference; its cost is the product of per-qubit support sizes (up to 4^n).
* ``transform``: each qubit contributes an independent random Z-mask, so the
  joint distribution is the XOR-convolution of ``n`` four-point distributions.
  In the Walsh-Hadamard domain the convolution is a pointwise product, giving
  an exact O(n 2^n) algorithm.

Both must agree to within 1e-12; ``auto`` selects ``transform``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import ProductChannel
from .exceptions import LimitExceededError
from .graphs import Graph, graph_basis_matrix
from .negativity import DENSE_EIG_LIMIT, negativity_batch
from .partitions import BoundaryDecomposition, Partition, decompose

#: Default cap on exact enumeration of the effective distribution.
EXACT_ENUM_LIMIT = 16

#: Hard cap on the dense 2^n probability table.
TABLE_QUBIT_LIMIT = 24

#: Flag outcomes with probability below this are dropped from conditionals.
FLAG_WEIGHT_FLOOR = 1e-15

_CHUNK_ENTRY_BUDGET = 1 << 21


@dataclass
class EffectiveDistribution:
    """Probability table over Z masks ``0 .. 2**n - 1``."""

    table: np.ndarray
    n: int

    def check(self, tol: float = 1e-9) -> None:
        if self.table.shape != (1 << self.n,):
            raise ValueError("table size does not match qubit count")
        if self.table.min() < 0.0 or abs(float(self.table.sum()) - 1.0) > tol:
            raise ValueError("effective distribution is not normalized")


@dataclass
class FlagConditional:
    """Marginal over non-boundary (flag) masks and per-flag boundary conditionals.

    ``conditionals[w]`` is the distribution over boundary masks given flag
    mask ``w``; only flags with probability above ``FLAG_WEIGHT_FLOOR`` are
    kept, and the total dropped probability is reported.
    """

    flag_marginal: np.ndarray
    conditionals: dict[int, np.ndarray]
    dropped_weight: float


def _require_pauli(channel: ProductChannel, n: int) -> list[tuple[float, float, float, float]]:
    if channel.n != n:
        raise ValueError(f"channel acts on {channel.n} qubits but the graph has {n}")
    if not channel.all_pauli:
        raise ValueError("effective distribution requires an all-Pauli product channel")
    return [ch.probs for ch in channel.per_qubit]  # type: ignore[union-attr]


def _mask_entries(graph: Graph, probs: Sequence[tuple[float, float, float, float]]):
    """Per-qubit ``(probability, mask contribution)`` pairs, zero branches pruned."""
    entries = []
    for i in range(graph.n):
        nbr = graph.adjacency[i]
        masks = (0, nbr, nbr ^ (1 << i), 1 << i)
        entries.append([(p, m) for p, m in zip(probs[i], masks) if p > 0.0])
    return entries


def _reference_enumeration(n: int, entries) -> np.ndarray:
    table = np.zeros(1 << n)

    def walk(i: int, acc_p: float, acc_mask: int) -> None:
        if i == n:
            table[acc_mask] += acc_p
            return
        for p, m in entries[i]:
            walk(i + 1, acc_p * p, acc_mask ^ m)

    walk(0, 1.0, 0)
    return table


def walsh_transform(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform (self-inverse up to ``1/len``)."""
    a = np.array(values, dtype=float)
    size = a.size
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :].copy()
        a[:, 0, :] += a[:, 1, :]
        a[:, 1, :] = top - a[:, 1, :]
        a = a.reshape(size)
        h *= 2
    return a


def xor_convolve(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Distribution of the XOR of two independent mask distributions."""
    first = np.asarray(first, dtype=float)
    second = np.asarray(second, dtype=float)
    if first.shape != second.shape:
        raise ValueError("distributions must have equal length")
    out = walsh_transform(walsh_transform(first) * walsh_transform(second)) / first.size
    np.clip(out, 0.0, None, out=out)
    return out


def _transform_product(graph: Graph, probs) -> np.ndarray:
    size = 1 << graph.n
    idx = np.arange(size, dtype=np.int64)
    acc = np.ones(size)
    for i in range(graph.n):
        p0, p1, p2, p3 = probs[i]
        sign_z = 1.0 - 2.0 * ((idx >> i) & 1)
        sign_x = 1.0 - 2.0 * (np.bitwise_count(idx & graph.adjacency[i]) & np.int64(1))
        acc *= p0 + p1 * sign_x + p2 * sign_x * sign_z + p3 * sign_z
    table = walsh_transform(acc) / size
    np.clip(table, 0.0, None, out=table)
    return table


def effective_distribution(
    graph: Graph,
    channel: ProductChannel,
    method: str = "auto",
    limit: int = EXACT_ENUM_LIMIT,
) -> EffectiveDistribution:
    """Distribution of the effective Z mask of a Pauli product map on ``graph``."""
    probs = _require_pauli(channel, graph.n)
    if graph.n > min(limit, TABLE_QUBIT_LIMIT):
        raise LimitExceededError(
            f"effective distribution on {graph.n} qubits exceeds the limit of {min(limit, TABLE_QUBIT_LIMIT)}"
        )
    if method not in ("auto", "enumerate", "transform"):
        raise ValueError(f"unknown method {method!r}")
    if method == "enumerate":
        table = _reference_enumeration(graph.n, _mask_entries(graph, probs))
    else:
        table = _transform_product(graph, probs)
    return EffectiveDistribution(table, graph.n)


def _compress_map(n: int, bits: Sequence[int]) -> np.ndarray:
    """For every n-bit mask, the integer formed by gathering the given bits."""
    source = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(source.size, dtype=np.int64)
    for t, b in enumerate(bits):
        out |= ((source >> b) & 1) << t
    return out


def _joint_table(table: np.ndarray, n: int, dec: BoundaryDecomposition) -> np.ndarray:
    """Reorganize the mask table into a (flag index, boundary index) matrix."""
    b = len(dec.boundary_vertices)
    r = len(dec.non_boundary_vertices)
    flag_idx = _compress_map(n, dec.non_boundary_vertices)
    bnd_idx = _compress_map(n, dec.boundary_vertices)
    joint = np.zeros((1 << r) * (1 << b))
    joint[(flag_idx << b) | bnd_idx] = table
    return joint.reshape(1 << r, 1 << b)


def flag_conditional(
    graph: Graph,
    partition: Partition,
    channel: ProductChannel,
    method: str = "auto",
) -> FlagConditional:
    """Split the effective distribution into flag marginal and boundary conditionals."""
    dist = effective_distribution(graph, channel, method=method)
    dec = decompose(graph, partition)
    joint = _joint_table(dist.table, graph.n, dec)
    marginal = joint.sum(axis=1)
    conditionals: dict[int, np.ndarray] = {}
    kept = 0.0
    for w in np.flatnonzero(marginal > FLAG_WEIGHT_FLOOR):
        conditionals[int(w)] = joint[w] / marginal[w]
        kept += float(marginal[w])
    return FlagConditional(marginal, conditionals, dropped_weight=1.0 - kept)


def _boundary_transpose_mask(dec: BoundaryDecomposition) -> int:
    assert dec.induced_partition is not None
    return sum(1 << t for t, lab in enumerate(dec.induced_partition.labels) if lab == 1)


def entanglement_from_distribution(
    graph: Graph,
    partition: Partition,
    dist: EffectiveDistribution,
    jobs: int = 1,
    boundary_limit: int = DENSE_EIG_LIMIT,
) -> float:
    """Flag-averaged boundary negativity of an effective Z-mask distribution.

    Never builds a matrix larger than the boundary subsystem: for every flag
    outcome the boundary state is a graph-diagonal mixture on the boundary
    subgraph, and its negativity across the induced cut is solved densely.
    The per-flag terms are independent; ``jobs > 1`` evaluates them in
    parallel threads, and the final sum is compensated and order-fixed so the
    result does not depend on the parallelism degree.
    """
    if partition.part_count != 2:
        raise ValueError(f"negativity needs a bipartition, got {partition.part_count} parts")
    dec = decompose(graph, partition)
    if not dec.crossing_edges:
        return 0.0
    b = len(dec.boundary_vertices)
    if b > boundary_limit:
        raise LimitExceededError(f"boundary of {b} qubits exceeds the eigensolver limit of {boundary_limit}")
    joint = _joint_table(dist.table, graph.n, dec)
    flag_probs = joint.sum(axis=1)
    kept = np.flatnonzero(flag_probs > FLAG_WEIGHT_FLOOR)
    cond = joint[kept] / flag_probs[kept, None]
    tmask = _boundary_transpose_mask(dec)
    basis = graph_basis_matrix(dec.boundary_graph)
    dim = 1 << b

    chunk = max(1, _CHUNK_ENTRY_BUDGET // (dim * dim))
    blocks = [(lo, min(lo + chunk, len(kept))) for lo in range(0, len(kept), chunk)]

    def solve_block(block: tuple[int, int]) -> np.ndarray:
        lo, hi = block
        rhos = (basis[None, :, :] * cond[lo:hi, None, :]) @ basis.T
        return negativity_batch(rhos, tmask, b)

    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(solve_block, blocks))
    else:
        parts = [solve_block(blk) for blk in blocks]
    negs = np.concatenate(parts) if parts else np.zeros(0)
    return math.fsum(float(p) * float(v) for p, v in zip(flag_probs[kept], negs))


def exact_entanglement_pauli(
    graph: Graph,
    partition: Partition,
    channel: ProductChannel,
    prior: np.ndarray | None = None,
    method: str = "auto",
    jobs: int = 1,
) -> float:
    """Exact negativity of a graph state evolved under a Pauli product map.

    With ``prior`` given (a distribution over graph-basis masks), the initial
    state is the corresponding graph-diagonal mixture instead of the pure
    graph state; the prior acts as an extra Z-mask map composed with the
    channel, i.e. an XOR-convolution of the two distributions.
    """
    dist = effective_distribution(graph, channel, method=method)
    if prior is not None:
        dist = EffectiveDistribution(xor_convolve(dist.table, _checked_prior(prior, graph.n)), graph.n)
    return entanglement_from_distribution(graph, partition, dist, jobs=jobs)


def _checked_prior(prior: np.ndarray, n: int) -> np.ndarray:
    arr = np.asarray(prior, dtype=float)
    if arr.shape != (1 << n,):
        raise ValueError(f"prior must have {1 << n} entries, got shape {arr.shape}")
    if arr.min() < -1e-12 or abs(float(arr.sum()) - 1.0) > 1e-9:
        raise ValueError("prior distribution must be normalized")
    return np.clip(arr, 0.0, None)


def compose_graph_diagonal_prior(
    prior: np.ndarray,
    graph: Graph,
    channel: ProductChannel,
    method: str = "auto",
) -> EffectiveDistribution:
    """Effective distribution of the channel acting on a graph-diagonal state.

    A graph-diagonal initial state is itself a Z-mask map applied to the pure
    graph state, so composing it with the channel XOR-convolves the two mask
    distributions.
    """
    dist = effective_distribution(graph, channel, method=method)
    table = xor_convolve(dist.table, _checked_prior(prior, graph.n))
    return EffectiveDistribution(table, graph.n)


def project_to_graph_diagonal(rho: np.ndarray, graph: Graph, limit: int = DENSE_EIG_LIMIT) -> np.ndarray:
    """Diagonal of a density matrix in the graph basis.

    This is the distribution of the graph-diagonal state obtained by
    depolarizing ``rho`` in the given graph basis; feeding it back as a prior
    yields entanglement lower bounds for arbitrary initial states.
    """
    rho = np.asarray(rho)
    if graph.n > limit:
        raise LimitExceededError(f"{graph.n}-qubit projection exceeds the dense limit of {limit}")
    if rho.shape != (1 << graph.n, 1 << graph.n):
        raise ValueError(f"density matrix shape {rho.shape} does not match {graph.n} qubits")
    basis = graph_basis_matrix(graph)
    probs = np.einsum("xg,xg->g", basis, (rho @ basis).real)
    return np.clip(probs, 0.0, None)
