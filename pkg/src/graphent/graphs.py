"""Graphs, graph-state vectors, stabilizer operators, and Pauli-to-Z rewriting.

Conventions used throughout the package:

* vertex ``i`` occupies bit ``i`` of basis-state integers, bit 0 least
  significant;
* Pauli labels are integers ``0..3`` meaning I, X, Y, Z (the string form
  ``"IXYZ"`` is accepted wherever labels are taken);
* state vectors are plain ``numpy`` arrays of length ``2**n`` indexed by the
  basis-state integer.

All values are immutable after construction and every operation is a pure
function, so everything here is safe for concurrent use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import LimitExceededError

#: Largest qubit count for which dense state vectors are built (16 MiB complex).
DENSE_STATE_LIMIT = 20

#: Largest qubit count for which dense 2^n x 2^n basis matrices are built.
DENSE_MATRIX_LIMIT = 12

PAULI_NAMES = "IXYZ"

PAULI_2x2 = (
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)

# (u, v) such that Z^v X^u equals the Pauli with that label, up to phase.
_CHORD = ((0, 0), (1, 0), (1, 1), (0, 1))


@dataclass(frozen=True, init=False)
class Graph:
    """Undirected simple graph with adjacency stored as per-vertex bit-masks.

    ``edges`` is the canonical sorted tuple of pairs ``(i, j)`` with ``i < j``;
    ``adjacency[i]`` is the bit-mask of neighbors of vertex ``i``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[int, ...]

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        canon = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            canon.add((min(i, j), max(i, j)))
        edge_list = tuple(sorted(canon))
        adj = [0] * n
        for i, j in edge_list:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edge_list)
        object.__setattr__(self, "adjacency", tuple(adj))

    def neighbors(self, i: int) -> tuple[int, ...]:
        mask = self.adjacency[i]
        return tuple(j for j in range(self.n) if (mask >> j) & 1)

    def degree(self, i: int) -> int:
        return self.adjacency[i].bit_count()


_PRESET_RE = re.compile(r"^(chain|ring|star):(\d+)$")


def preset_graph(spec: str) -> Graph:
    """Build a named preset graph: ``chain:N``, ``ring:N`` or ``star:N``."""
    m = _PRESET_RE.match(spec.strip())
    if not m:
        raise ValueError(f"unknown graph preset {spec!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError(f"preset size must be >= 1, got {n}")
    if kind == "chain":
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "ring":
        if n < 3:
            raise ValueError("ring needs at least 3 vertices")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    # star: vertex 0 is the hub
    return Graph(n, [(0, i) for i in range(1, n)])


def parse_graph_text(text: str) -> Graph:
    """Parse the edge-list text format: one ``i j`` pair per line, ``#`` comments."""
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'i j', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        if i < 0 or j < 0:
            raise ValueError(f"line {lineno}: vertices must be non-negative")
        edges.append((i, j))
        top = max(top, i, j)
    if top < 0:
        raise ValueError("graph file contains no edges")
    return Graph(top + 1, edges)


def load_graph(path: str | Path) -> Graph:
    return parse_graph_text(Path(path).read_text())


def resolve_graph(spec: str) -> Graph:
    """Resolve a graph spec string: preset name or path to an edge-list file."""
    if _PRESET_RE.match(spec.strip()):
        return preset_graph(spec)
    return load_graph(spec)


def random_connected_graph(n: int, rng: np.random.Generator, extra_edge_prob: float = 0.3) -> Graph:
    """Random connected graph: a random spanning tree plus Bernoulli extras."""
    if n < 1:
        raise ValueError("need n >= 1")
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < extra_edge_prob:
                edges.append((i, j))
    return Graph(n, edges)


def _check_dense_limit(n: int, limit: int) -> None:
    if n > limit:
        raise LimitExceededError(f"dense representation of {n} qubits exceeds the limit of {limit}")


def cz_parity_signs(graph: Graph) -> np.ndarray:
    """Sign ``(-1)**(# edges with both endpoint bits set)`` for every basis state.

    This is the diagonal of the product of CZ gates over all edges.
    """
    idx = np.arange(1 << graph.n, dtype=np.int64)
    signs = np.ones(idx.size, dtype=np.float64)
    for i, j in graph.edges:
        both = ((idx >> i) & (idx >> j) & 1).astype(bool)
        signs[both] = -signs[both]
    return signs


def build_graph_state(graph: Graph, limit: int = DENSE_STATE_LIMIT) -> np.ndarray:
    """Dense state vector of the graph state: CZ gates on every edge of |+...+>."""
    _check_dense_limit(graph.n, limit)
    amp = 2.0 ** (-graph.n / 2.0)
    return (amp * cz_parity_signs(graph)).astype(complex)


def graph_basis_state(graph: Graph, index: int, limit: int = DENSE_STATE_LIMIT) -> np.ndarray:
    """Basis state ``Z^index`` applied to the graph state (``index`` a bit-mask)."""
    if index >> graph.n:
        raise ValueError(f"basis index {index} has more than {graph.n} bits")
    vec = build_graph_state(graph, limit)
    x = np.arange(vec.size, dtype=np.int64)
    flip = (np.bitwise_count(x & index) & 1).astype(bool)
    vec[flip] = -vec[flip]
    return vec


def graph_basis_matrix(graph: Graph, limit: int = DENSE_MATRIX_LIMIT) -> np.ndarray:
    """Real matrix whose column ``k`` is the graph-basis state with mask ``k``.

    Columns are orthonormal, so ``B @ diag(w) @ B.T`` assembles mixtures
    diagonal in the graph basis.
    """
    _check_dense_limit(graph.n, limit)
    h2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    had = reduce(np.kron, [h2] * graph.n)
    return cz_parity_signs(graph)[:, None] * had


def pauli_labels(labels: str | Sequence[int]) -> tuple[int, ...]:
    """Normalize a Pauli string given as ``"IXYZ"`` text or integer labels."""
    if isinstance(labels, str):
        try:
            return tuple(PAULI_NAMES.index(c) for c in labels.upper())
        except ValueError:
            raise ValueError(f"invalid Pauli string {labels!r}") from None
    out = tuple(int(v) for v in labels)
    if any(v not in (0, 1, 2, 3) for v in out):
        raise ValueError(f"Pauli labels must be in 0..3, got {out}")
    return out


def pauli_string_matrix(labels: str | Sequence[int]) -> np.ndarray:
    """Dense operator for a Pauli string; label ``k`` acts on qubit ``k``."""
    labs = pauli_labels(labels)
    out = np.ones((1, 1), dtype=complex)
    for lab in labs:  # qubit 0 ends up on the least significant bit
        out = np.kron(PAULI_2x2[lab], out)
    return out


def stabilizer_matrix(graph: Graph, i: int, limit: int = DENSE_MATRIX_LIMIT) -> np.ndarray:
    """Dense stabilizer generator of vertex ``i``: X there, Z on its neighbors."""
    if not 0 <= i < graph.n:
        raise ValueError(f"vertex {i} out of range for n={graph.n}")
    _check_dense_limit(graph.n, limit)
    labs = [0] * graph.n
    labs[i] = 1
    for j in graph.neighbors(i):
        labs[j] = 3
    return pauli_string_matrix(labs)


def chord_labels(label: int) -> tuple[int, int]:
    """Exponents ``(u, v)`` with ``Z^v X^u`` equal to the Pauli label, up to phase."""
    if label not in (0, 1, 2, 3):
        raise ValueError(f"Pauli label must be in 0..3, got {label}")
    return _CHORD[label]


def pauli_to_z_image(graph: Graph, labels: str | Sequence[int]) -> tuple[int, int]:
    """Rewrite a Pauli string into the Z-mask it acts as on graph-basis states.

    On any graph-basis state, X on a vertex acts as Z on each neighbor and Y
    acts as Z on the vertex and its neighbors, up to phase.  Returns the
    resulting Z support as a bit-mask together with the exponent ``k`` of the
    accumulated ``i**k`` phase (one factor ``-i`` per Y).  The phase never
    enters probability formulas.
    """
    labs = pauli_labels(labels)
    if len(labs) != graph.n:
        raise ValueError(f"Pauli string length {len(labs)} != vertex count {graph.n}")
    mask = 0
    phase = 0
    for i, lab in enumerate(labs):
        u, v = _CHORD[lab]
        if v:
            mask ^= 1 << i
        if u:
            mask ^= graph.adjacency[i]
        if lab == 2:
            phase = (phase + 3) % 4
    return mask, phase
