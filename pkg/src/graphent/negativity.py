"""Dense density-matrix utilities: partial transpose, negativity, graph-diagonal states.

The negativity of a state across a bipartition is the absolute sum of the
negative eigenvalues of its partial transpose.  Eigenvalues above the
``-1e-12`` floor are treated as numerical zeros so that eigensolver noise
cannot manufacture entanglement.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from typing import Iterator

import numpy as np

from .exceptions import LimitExceededError
from .graphs import Graph, graph_basis_matrix

log = logging.getLogger(__name__)

#: Eigenvalues of the partial transpose above this (negative) floor count as zero.
NEGATIVE_EIG_THRESHOLD = 1e-12

#: Largest qubit count for which dense eigensolves are attempted (4096 x 4096).
DENSE_EIG_LIMIT = 12

_eig_dim_sinks: list[list[int]] = []


@contextmanager
def record_eig_dims() -> Iterator[list[int]]:
    """Collect the dimension of every eigenproblem solved inside the block.

    Useful to check structurally that a computation only ever touched
    matrices of the boundary subsystem's size.
    """
    sink: list[int] = []
    _eig_dim_sinks.append(sink)
    try:
        yield sink
    finally:
        _eig_dim_sinks.remove(sink)


def _eigvalsh(mats: np.ndarray) -> np.ndarray:
    dim = mats.shape[-1]
    if _eig_dim_sinks:
        count = 1 if mats.ndim == 2 else int(np.prod(mats.shape[:-2]))
        for sink in _eig_dim_sinks:
            sink.extend([dim] * count)
    return np.linalg.eigvalsh(mats)


def qubit_count(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def partial_transpose(rho: np.ndarray, transpose_mask: int, n: int | None = None) -> np.ndarray:
    """Transpose the row/column sub-indices of the qubits in ``transpose_mask``."""
    rho = np.asarray(rho)
    if n is None:
        n = qubit_count(rho.shape[0])
    if transpose_mask >> n:
        raise ValueError(f"mask {transpose_mask:#x} out of range for {n} qubits")
    t = rho.reshape((2,) * (2 * n))
    for q in range(n):
        if (transpose_mask >> q) & 1:
            t = t.swapaxes(n - 1 - q, 2 * n - 1 - q)
    return t.reshape(rho.shape)


def _negativity_from_eigs(eigs: np.ndarray) -> np.ndarray:
    neg = np.where(eigs < -NEGATIVE_EIG_THRESHOLD, -eigs, 0.0)
    return neg.sum(axis=-1)


def negativity(rho: np.ndarray, transpose_mask: int, n: int | None = None) -> float:
    """Absolute sum of the negative partial-transpose eigenvalues.

    The partially transposed matrix is symmetrized before solving; any
    asymmetry residual comes from accumulation error and is logged.
    """
    rho = np.asarray(rho)
    if n is None:
        n = qubit_count(rho.shape[0])
    pt = partial_transpose(rho, transpose_mask, n)
    herm = 0.5 * (pt + pt.conj().T)
    residual = float(np.linalg.norm(pt - herm))
    if residual > 0.0:
        log.debug("partial transpose asymmetry residual %.3e", residual)
    return float(_negativity_from_eigs(_eigvalsh(herm)))


def negativity_batch(rhos: np.ndarray, transpose_mask: int, n: int) -> np.ndarray:
    """Negativity of a stack of density matrices, shape ``(m, 2**n, 2**n)``."""
    rhos = np.asarray(rhos)
    m, dim = rhos.shape[0], rhos.shape[-1]
    t = rhos.reshape((m,) + (2,) * (2 * n))
    for q in range(n):
        if (transpose_mask >> q) & 1:
            t = t.swapaxes(1 + n - 1 - q, 1 + 2 * n - 1 - q)
    pt = t.reshape(m, dim, dim)
    herm = 0.5 * (pt + pt.conj().swapaxes(-1, -2))
    return _negativity_from_eigs(_eigvalsh(herm))


def graph_diagonal_density(graph: Graph, weights: np.ndarray, limit: int = DENSE_EIG_LIMIT) -> np.ndarray:
    """Mixture of graph-basis projectors with the given weights.

    The eigenvalues of the result are exactly the weights.
    """
    if graph.n > limit:
        raise LimitExceededError(f"dense {graph.n}-qubit matrix exceeds the limit of {limit}")
    w = np.asarray(weights, dtype=float)
    if w.shape != (1 << graph.n,):
        raise ValueError(f"need {1 << graph.n} weights, got shape {w.shape}")
    if w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-9:
        raise ValueError("weights must be a normalized distribution")
    basis = graph_basis_matrix(graph)
    return ((basis * w) @ basis.T).astype(complex)


def assert_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    eig_floor: float = -1e-10,
) -> None:
    """Validate Hermiticity, unit trace and the positive-semidefinite floor."""
    rho = np.asarray(rho)
    n = qubit_count(rho.shape[0])
    herm = float(np.linalg.norm(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValueError(f"not Hermitian: residual {herm:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr!r} differs from 1")
    low = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if low < eig_floor:
        raise ValueError(f"matrix on {n} qubits has eigenvalue {low:.3e} below the floor")
