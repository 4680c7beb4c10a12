"""General-channel engine: flag ensembles and entanglement bounds.

For channels whose single-qubit Kraus operators are each either diagonal or
anti-diagonal, every Kraus product can be commuted through the non-crossing CZ
gates of a partitioned graph state.  Conjugating by one CZ gate maps

* (anti-diagonal on i, diagonal on j)  ->  the diagonal side picks up a Z,
* (anti-diagonal on both)              ->  both sides pick up a Z and the term
  acquires a global minus sign,

so each modified Kraus operator stays a product of single-qubit factors: the
original operator times ``Z`` raised to the number of anti-diagonal factors
sitting on non-crossing neighbors.  Applied to (boundary graph state) x
|+...+>, every term then factors into a boundary operator and an unnormalized
pure "flag" state of the non-boundary qubits.  Terms with the same flag ray
are merged into groups; the group structure yields:

* LLB: negativity of the flag-traced boundary mixture (lowest lower bound),
* LB(theta): average negativity after measuring the flags in a product basis
  ``cos(theta)|0> + sin(theta)|1>`` and its orthogonal complement,
* UB: probability-weighted average of per-group negativities (convexity),
* exactness: if all distinct flags are orthogonal the bounds coincide and
  equal the true entanglement.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import effective as _effective
from . import oracle as _oracle
from .channels import ProductChannel, kraus_terms
from .exceptions import ChannelCompatibilityError, LimitExceededError
from .graphs import Graph, build_graph_state
from .negativity import negativity as _negativity
from .negativity import negativity_batch as _negativity_batch
from .partitions import BoundaryDecomposition, Partition, decompose

#: Cap on general-channel term enumeration (worst case 4^n terms).
TERM_QUBIT_LIMIT = 10

#: Two normalized flags merge when their overlap magnitude is at least 1 - this.
FLAG_MERGE_TOL = 1e-12

#: Distinct flags with pairwise overlap below this certify exact bounds.
ORTHOGONALITY_TOL = 1e-10

_TERM_TRACE_FLOOR = 1e-30
_OUTCOME_FLOOR = 1e-15

_Z2 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)


@dataclass
class ModifiedKrausTerm:
    """One Kraus product commuted through the non-crossing CZ gates.

    ``boundary_factors[t]`` acts on boundary-local qubit ``t``; ``flag_state``
    is the unnormalized non-boundary product state (including the term's sign)
    and ``weight`` its squared norm.
    """

    label: tuple[int, ...]
    boundary_factors: tuple[np.ndarray, ...]
    flag_state: np.ndarray
    weight: float


@dataclass
class FlagGroup:
    flag_state: np.ndarray
    probability: float
    boundary_matrix: np.ndarray


@dataclass
class FlagEnsemble:
    groups: tuple[FlagGroup, ...]
    decomposition: BoundaryDecomposition


@dataclass
class Certificate:
    """Whether the flag states are pairwise orthogonal (bounds coincide)."""

    exact: bool
    max_flag_overlap: float

    @property
    def verdict(self) -> str:
        return "exact" if self.exact else "bounds-only"


def _classify_kraus(op: np.ndarray, qubit: int, index: int) -> bool:
    """True when anti-diagonal, False when diagonal; anything mixed is rejected."""
    off = abs(op[0, 1]) + abs(op[1, 0])
    diag = abs(op[0, 0]) + abs(op[1, 1])
    scale = max(off, diag, 1.0)
    if off <= 1e-12 * scale:
        return False
    if diag <= 1e-12 * scale:
        return True
    raise ChannelCompatibilityError(
        f"Kraus operator {index} on qubit {qubit} is neither diagonal nor anti-diagonal; "
        "the commutation method does not apply to this decomposition"
    )


def _apply_1q_vec(vec: np.ndarray, op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    tensor = vec.reshape((2,) * n)
    out = np.tensordot(op, tensor, axes=([1], [n - 1 - qubit]))
    return np.moveaxis(out, 0, n - 1 - qubit).reshape(vec.size)


def _kron_chain(vecs: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product with ``vecs[t]`` on bit ``t`` of the result index."""
    acc = np.ones(1, dtype=complex)
    for v in vecs:
        acc = np.kron(v, acc)
    return acc


def commute_through_cz(
    graph: Graph,
    decomposition: BoundaryDecomposition,
    channel: ProductChannel,
    limit: int = TERM_QUBIT_LIMIT,
) -> list[ModifiedKrausTerm]:
    """Enumerate all Kraus products, commuted past the non-crossing CZ gates."""
    n = graph.n
    if channel.n != n:
        raise ValueError(f"channel acts on {channel.n} qubits but the graph has {n}")
    if n > limit:
        raise LimitExceededError(f"general-channel enumeration is capped at {limit} qubits, got {n}")
    crossing = set(decomposition.crossing_edges)
    nc_edges = [e for e in graph.edges if e not in crossing]
    nc_adj = [0] * n
    for i, j in nc_edges:
        nc_adj[i] |= 1 << j
        nc_adj[j] |= 1 << i

    ops = [kraus_terms(ch) for ch in channel.per_qubit]
    anti = [[_classify_kraus(op, q, lab) for lab, op in qops] for q, qops in enumerate(ops)]
    # factor variants with and without the accumulated Z correction
    mats = [[(op, op @ _Z2) for _, op in qops] for qops in ops]
    flag_vecs = [[(pair[0] @ _PLUS, pair[1] @ _PLUS) for pair in qmats] for qmats in mats]
    labels = [[lab for lab, _ in qops] for qops in ops]

    boundary = decomposition.boundary_vertices
    non_boundary = decomposition.non_boundary_vertices

    terms: list[ModifiedKrausTerm] = []
    for choice in itertools.product(*[range(len(q)) for q in ops]):
        anti_mask = 0
        for q, k in enumerate(choice):
            if anti[q][k]:
                anti_mask |= 1 << q
        sign = -1.0 if sum(((anti_mask >> i) & (anti_mask >> j) & 1) for i, j in nc_edges) % 2 else 1.0
        zbits = [(anti_mask & nc_adj[q]).bit_count() & 1 for q in range(n)]
        flag = sign * _kron_chain([flag_vecs[v][choice[v]][zbits[v]] for v in non_boundary])
        factors = tuple(mats[v][choice[v]][zbits[v]] for v in boundary)
        terms.append(
            ModifiedKrausTerm(
                label=tuple(labels[q][k] for q, k in enumerate(choice)),
                boundary_factors=factors,
                flag_state=flag,
                weight=float(np.vdot(flag, flag).real),
            )
        )
    return terms


def group_flags(terms: Sequence[ModifiedKrausTerm], decomposition: BoundaryDecomposition) -> FlagEnsemble:
    """Merge terms whose normalized flags coincide up to a global phase."""
    if decomposition.boundary_graph is None:
        raise ValueError("partition has no crossing edges; there is no boundary ensemble")
    b = decomposition.boundary_graph.n
    base = build_graph_state(decomposition.boundary_graph)
    reps: list[np.ndarray] = []
    sums: list[np.ndarray] = []
    for term in terms:
        vec = base
        for t, op in enumerate(term.boundary_factors):
            vec = _apply_1q_vec(vec, op, t, b)
        trace = term.weight * float(np.vdot(vec, vec).real)
        if trace < _TERM_TRACE_FLOOR:
            continue
        flag_hat = term.flag_state / math.sqrt(term.weight)
        for g, rep in enumerate(reps):
            if abs(np.vdot(rep, flag_hat)) >= 1.0 - FLAG_MERGE_TOL:
                sums[g] += term.weight * np.outer(vec, vec.conj())
                break
        else:
            reps.append(flag_hat)
            sums.append(term.weight * np.outer(vec, vec.conj()))
    groups = []
    for rep, acc in zip(reps, sums):
        prob = float(np.trace(acc).real)
        groups.append(FlagGroup(flag_state=rep, probability=prob, boundary_matrix=acc / prob))
    return FlagEnsemble(tuple(groups), decomposition)


def build_ensemble(
    graph: Graph,
    partition: Partition,
    channel: ProductChannel,
    limit: int = TERM_QUBIT_LIMIT,
) -> FlagEnsemble:
    decomposition = decompose(graph, partition)
    terms = commute_through_cz(graph, decomposition, channel, limit)
    return group_flags(terms, decomposition)


def _transpose_mask(ensemble: FlagEnsemble) -> int:
    dec = ensemble.decomposition
    if dec.partition.part_count != 2:
        raise ValueError(f"negativity needs a bipartition, got {dec.partition.part_count} parts")
    assert dec.induced_partition is not None
    return sum(1 << t for t, lab in enumerate(dec.induced_partition.labels) if lab == 1)


def llb_of(ensemble: FlagEnsemble) -> float:
    """Negativity of the boundary state with the flags traced out."""
    mix = sum(g.probability * g.boundary_matrix for g in ensemble.groups)
    b = ensemble.decomposition.boundary_graph.n
    return _negativity(mix, _transpose_mask(ensemble), b)


def ub_of(ensemble: FlagEnsemble) -> float:
    """Convexity upper bound: mean negativity over the flag groups."""
    b = ensemble.decomposition.boundary_graph.n
    mats = np.stack([g.boundary_matrix for g in ensemble.groups])
    negs = _negativity_batch(mats, _transpose_mask(ensemble), b)
    return math.fsum(g.probability * float(v) for g, v in zip(ensemble.groups, negs))


def lb_measured_of(ensemble: FlagEnsemble, theta: float | Sequence[float]) -> float:
    """Lower bound from measuring every flag qubit in the rotated product basis."""
    dec = ensemble.decomposition
    b = dec.boundary_graph.n
    r = len(dec.non_boundary_vertices)
    tmask = _transpose_mask(ensemble)
    if r == 0:
        return llb_of(ensemble)
    thetas = [float(theta)] * r if np.isscalar(theta) else [float(t) for t in theta]
    if len(thetas) != r:
        raise ValueError(f"need one angle or {r} per-qubit angles, got {len(thetas)}")

    amps = []
    for g in ensemble.groups:
        vec = g.flag_state
        for t, ang in enumerate(thetas):
            rot = np.array(
                [[math.cos(ang), math.sin(ang)], [-math.sin(ang), math.cos(ang)]], dtype=complex
            )
            vec = _apply_1q_vec(vec, rot, t, r)
        amps.append(vec)
    outcome_weights = np.stack(
        [g.probability * np.abs(a) ** 2 for g, a in zip(ensemble.groups, amps)]
    )  # (groups, outcomes)
    outcome_probs = outcome_weights.sum(axis=0)
    kept = np.flatnonzero(outcome_probs > _OUTCOME_FLOOR)
    mats = np.stack([g.boundary_matrix for g in ensemble.groups])
    mixed = np.einsum("gm,gxy->mxy", outcome_weights[:, kept], mats)
    mixed /= outcome_probs[kept, None, None]
    negs = _negativity_batch(mixed, tmask, b)
    return math.fsum(float(p) * float(v) for p, v in zip(outcome_probs[kept], negs))


def exactness_certificate(ensemble: FlagEnsemble) -> Certificate:
    """Report whether all distinct flags are pairwise orthogonal."""
    flags = [g.flag_state for g in ensemble.groups]
    worst = 0.0
    for i in range(len(flags)):
        for j in range(i + 1, len(flags)):
            worst = max(worst, float(abs(np.vdot(flags[i], flags[j]))))
    return Certificate(exact=worst <= ORTHOGONALITY_TOL, max_flag_overlap=worst)


def _zero_if_uncut(graph: Graph, partition: Partition) -> bool:
    return not decompose(graph, partition).crossing_edges


def lowest_lower_bound(graph: Graph, partition: Partition, channel: ProductChannel) -> float:
    if _zero_if_uncut(graph, partition):
        return 0.0
    return llb_of(build_ensemble(graph, partition, channel))


def upper_bound(graph: Graph, partition: Partition, channel: ProductChannel) -> float:
    if _zero_if_uncut(graph, partition):
        return 0.0
    return ub_of(build_ensemble(graph, partition, channel))


def lower_bound_measured(
    graph: Graph, partition: Partition, channel: ProductChannel, theta: float | Sequence[float]
) -> float:
    if _zero_if_uncut(graph, partition):
        return 0.0
    return lb_measured_of(build_ensemble(graph, partition, channel), theta)


def reference_value(graph: Graph, partition: Partition, channel: ProductChannel) -> float | None:
    """Exact entanglement where available: Pauli fast path, else the dense oracle."""
    if channel.all_pauli:
        return _effective.exact_entanglement_pauli(graph, partition, channel)
    if graph.n <= _oracle.ORACLE_QUBIT_LIMIT:
        return _oracle.oracle_negativity(graph, partition, channel)
    return None


@dataclass
class ThetaScanResult:
    thetas: np.ndarray
    lower_bounds: np.ndarray
    reference: float | None


def theta_scan(
    graph: Graph,
    partition: Partition,
    channel: ProductChannel,
    thetas: Sequence[float],
) -> ThetaScanResult:
    """Lower bound as a function of the shared measurement angle."""
    grid = np.asarray(list(thetas), dtype=float)
    if _zero_if_uncut(graph, partition):
        return ThetaScanResult(grid, np.zeros(grid.size), 0.0)
    ensemble = build_ensemble(graph, partition, channel)
    lbs = np.array([lb_measured_of(ensemble, t) for t in grid])
    return ThetaScanResult(grid, lbs, reference_value(graph, partition, channel))
