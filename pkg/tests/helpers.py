"""Independent dense oracles used across the test suite.

Everything here is deliberately written via explicit gate matrices and index
loops, so that package fast paths are checked against a second, independent
route rather than against themselves.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)


def kron_chain(mats):
    """Tensor product with ``mats[k]`` acting on qubit ``k`` (bit k of the index)."""
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(m, out)
    return out


def op_on(op, qubit, n):
    mats = [I2] * n
    mats[qubit] = op
    return kron_chain(mats)


def cz_diag(i, j, n):
    """Diagonal of the CZ gate between qubits i and j."""
    idx = np.arange(1 << n)
    return np.where(((idx >> i) & (idx >> j) & 1).astype(bool), -1.0, 1.0).astype(complex)


def gate_built_graph_state(n, edges):
    """Graph state built by explicit gate application, the long way around."""
    state = np.full(1 << n, 2.0 ** (-n / 2.0), dtype=complex)
    for i, j in edges:
        state = cz_diag(i, j, n) * state
    return state


def pt_loops(rho, n, mask):
    """Partial transpose via explicit index arithmetic."""
    dim = 1 << n
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for r in range(dim):
        for c in range(dim):
            rr = (r & ~mask) | (c & mask)
            cc = (c & ~mask) | (r & mask)
            out[rr, cc] = rho[r, c]
    return out


def negativity_loops(rho, n, mask):
    eigs = np.linalg.eigvalsh(pt_loops(rho, n, mask))
    return float(-eigs[eigs < -1e-12].sum())


def interleave_state(bnd_vec, rest_vec, boundary, non_boundary, n):
    """Place a boundary-local vector and a non-boundary vector on the full register."""
    psi = np.zeros(1 << n, dtype=complex)
    for xb in range(len(bnd_vec)):
        for xf in range(len(rest_vec)):
            idx = 0
            for t, v in enumerate(boundary):
                idx |= ((xb >> t) & 1) << v
            for t, v in enumerate(non_boundary):
                idx |= ((xf >> t) & 1) << v
            psi[idx] = bnd_vec[xb] * rest_vec[xf]
    return psi


def random_density(rng, n):
    """Random full-rank density matrix."""
    dim = 1 << n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pauli_product(rng, n):
    """Random heterogeneous Pauli product channel."""
    import graphent as ge

    chans = []
    for _ in range(n):
        v = rng.random(4)
        v /= v.sum()
        chans.append(ge.PauliQubitChannel(tuple(v)))
    return ge.ProductChannel(chans)


def random_bipartition(rng, n):
    import graphent as ge

    while True:
        labels = rng.integers(0, 2, size=n)
        if labels.min() == 0 and labels.max() == 1:
            return ge.Partition(tuple(int(v) for v in labels))
