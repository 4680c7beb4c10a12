"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines.
"""

import math
import time

import numpy as np
import graphent as ge
from graphent.effective import effective_distribution
from graphent.experiments import presets, run

from helpers import (
    PAULIS,
    kron_chain,
    random_bipartition,
    random_density,
    random_pauli_product,
)


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_criterion_1_oracle_equivalence():
    """Fast Pauli path equals the dense oracle over random graphs and channels."""
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    kinds = (ge.depolarizing, ge.dephasing, ge.bit_flip, ge.bit_phase_flip)
    worst = 0.0
    cases = 0
    for _ in range(20):
        n = int(rng.integers(2, 7))
        graph = ge.random_connected_graph(n, rng)
        part = random_bipartition(rng, n)
        for ctor in kinds:
            for p in (0.1, 0.3, 0.6, 0.9):
                channel = ge.ProductChannel.uniform(ctor(p), n)
                fast = ge.exact_entanglement_pauli(graph, part, channel)
                slow = ge.oracle_negativity(graph, part, channel)
                worst = max(worst, abs(fast - slow))
                cases += 1
    elapsed = time.perf_counter() - start
    _report(
        "criterion 1: oracle equivalence",
        worst <= 1e-9 and elapsed < 120.0,
        f"{cases} cases, max |fast-oracle| = {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_2_amplitude_damping_bounds(tmp_path):
    """AD on the 4-chain: bound ordering, p=0 values, and LB(pi/4) vs LB(0)."""
    start = time.perf_counter()
    cfg = presets()["fig4"]
    cfg.out = str(tmp_path / "fig4.csv")
    result = run(cfg)
    rows = result.rows
    ordering_ok = all(
        llb <= lb0 + 1e-9
        and llb <= lbq + 1e-9
        and lb0 <= exact + 1e-9
        and lbq <= exact + 1e-9
        and exact <= ub + 1e-9
        for (_, llb, lb0, lbq, ub, exact, _) in rows
    )
    p0 = rows[0]
    p0_ok = all(abs(v - 0.5) <= 1e-9 for v in p0[1:6])
    improve_ok = all(lbq >= lb0 - 1e-12 for (p, _, lb0, lbq, _, _, _) in rows if p <= 0.5)
    elapsed = time.perf_counter() - start
    _report(
        "criterion 2: AD bound ordering and endpoints",
        ordering_ok and p0_ok and improve_ok and elapsed < 60.0,
        f"51 points, {elapsed:.1f}s",
    )


def test_criterion_3_diffusive_coincidence(tmp_path):
    """Diffusive limit: LB(pi/4) = exact, LB(0) = LLB, and both engines agree."""
    cfg = presets()["fig6"]
    cfg.out = str(tmp_path / "fig6.csv")
    rows = run(cfg).rows
    lbq_ok = all(abs(lbq - exact) <= 1e-9 for (_, _, _, lbq, _, exact, _) in rows)
    llb_ok = all(abs(lb0 - llb) <= 1e-9 for (_, llb, lb0, _, _, _, _) in rows)
    # the exact column comes from the Pauli fast path; the general-channel
    # bounds must have collapsed onto it
    collapse_ok = all(
        abs(ub - exact) <= 1e-9 and abs(lbq - ub) <= 1e-9 and cert == "exact"
        for (_, _, _, lbq, ub, exact, cert) in rows
    )
    _report(
        "criterion 3: diffusive bounds coincide with the exact value",
        lbq_ok and llb_ok and collapse_ok,
        f"max |LB(pi/4)-exact| = {max(abs(r[3] - r[5]) for r in rows):.2e}",
    )


def test_criterion_4_large_chain_scaling():
    """12- and 14-qubit chains solve only 8x8 eigenproblems and decay monotonically."""
    start = time.perf_counter()
    grid = np.linspace(0.0, 1.0, 51)
    for n in (12, 14):
        graph = ge.preset_graph(f"chain:{n}")
        part = ge.parse_partition("one-vs-rest:mid", n)
        with ge.record_eig_dims() as dims:
            values = [
                ge.exact_entanglement_pauli(graph, part, ge.ProductChannel.uniform(ge.depolarizing(p), n))
                for p in grid
            ]
        dims_ok = set(dims) == {8}
        start_ok = abs(values[0] - 0.5) <= 1e-9
        monotone_ok = all(values[k + 1] <= values[k] + 1e-12 for k in range(len(values) - 1))
        dies_ok = any(v <= 1e-12 for k, v in enumerate(values) if grid[k] < 1.0)
        _report(
            f"criterion 4: {n}-qubit chain structure",
            dims_ok and start_ok and monotone_ok and dies_ok,
            f"eig dims {set(dims)}, start {values[0]:.6f}",
        )
    # 6-qubit analogue is anchored to the oracle
    graph = ge.preset_graph("chain:6")
    part = ge.parse_partition("one-vs-rest:mid", 6)
    worst = max(
        abs(
            ge.exact_entanglement_pauli(graph, part, ge.ProductChannel.uniform(ge.depolarizing(p), 6))
            - ge.oracle_negativity(graph, part, ge.ProductChannel.uniform(ge.depolarizing(p), 6))
        )
        for p in grid
    )
    elapsed = time.perf_counter() - start
    _report(
        "criterion 4: 6-qubit anchor and runtime",
        worst <= 1e-9 and elapsed < 300.0,
        f"max |fast-oracle| = {worst:.2e}, total {elapsed:.1f}s",
    )


def test_criterion_5_theta_scan_behavior():
    """Diffusive scans peak exactly at pi/4; AD at p=0.9 peaks elsewhere."""
    graph = ge.preset_graph("chain:4")
    part = ge.parse_partition("one-vs-rest:0", 4)
    thetas = np.linspace(0.0, math.pi / 2, 33)
    step = thetas[1] - thetas[0]
    ok = True
    details = []
    for p in (0.01, 0.1, 0.3, 0.5):
        channel = ge.ProductChannel.uniform(ge.diffusive_pauli(p), 4)
        res = ge.theta_scan(graph, part, channel, thetas)
        k = int(np.argmax(res.lower_bounds))
        at_quarter = abs(res.thetas[k] - math.pi / 4) <= step / 2
        exact_there = abs(res.lower_bounds[k] - res.reference) <= 1e-9
        ok = ok and at_quarter and exact_there
        details.append(f"p={p}: theta*={res.thetas[k]:.3f}")
    channel = ge.ProductChannel.uniform(ge.amplitude_damping(0.9), 4)
    res = ge.theta_scan(graph, part, channel, thetas)
    k = int(np.argmax(res.lower_bounds))
    away = abs(res.thetas[k] - math.pi / 4) > step / 2
    details.append(f"AD p=0.9: theta*={res.thetas[k]:.3f}")
    _report("criterion 5: theta-scan behavior", ok and away, "; ".join(details))


def test_criterion_6_property_suites():
    rng = np.random.default_rng(4242)

    # channel completeness over parameter grids
    worst = 0.0
    for p in np.linspace(0, 1, 25):
        for ctor in (ge.depolarizing, ge.dephasing, ge.bit_flip, ge.bit_phase_flip, ge.diffusive_pauli):
            worst = max(worst, ge.completeness_residual(ctor(p)))
    for nbar in (0.0, 0.5, 2.0, 20.0):
        for p in np.linspace(0, 1, 25):
            worst = max(worst, ge.completeness_residual(ge.gad(nbar, p)))
    _report("criterion 6a: channel completeness", worst <= 1e-12, f"max residual {worst:.2e}")

    # stabilizer eigenstate identity up to n = 6
    worst = 0.0
    for n in range(2, 7):
        graph = ge.random_connected_graph(n, rng)
        psi = ge.build_graph_state(graph)
        for i in range(n):
            worst = max(worst, float(np.max(np.abs(ge.stabilizer_matrix(graph, i) @ psi - psi))))
    _report("criterion 6b: stabilizer identity", worst <= 1e-12, f"max residual {worst:.2e}")

    # rewrite-rule dense equivalence up to n = 5
    worst = 1.0
    for _ in range(10):
        n = int(rng.integers(2, 6))
        graph = ge.random_connected_graph(n, rng)
        labels = tuple(int(v) for v in rng.integers(0, 4, size=n))
        nu = int(rng.integers(0, 1 << n))
        vec = ge.graph_basis_state(graph, nu)
        lhs = kron_chain([PAULIS[l] for l in labels]) @ vec
        mask, _ = ge.pauli_to_z_image(graph, labels)
        rhs = kron_chain([PAULIS[3 if (mask >> q) & 1 else 0] for q in range(n)]) @ vec
        worst = min(worst, abs(np.vdot(rhs, lhs)))
    _report("criterion 6c: rewrite-rule equivalence", abs(worst - 1.0) <= 1e-12, f"min |overlap| {worst:.12f}")

    # effective-distribution normalization drift
    drift = 0.0
    for _ in range(6):
        n = int(rng.integers(2, 11))
        graph = ge.random_connected_graph(n, rng)
        table = effective_distribution(graph, random_pauli_product(rng, n)).table
        drift = max(drift, abs(float(table.sum()) - 1.0))
    _report("criterion 6d: effective normalization", drift <= 1e-9, f"max drift {drift:.2e}")

    # XOR-convolution composition equivalence
    worst = 0.0
    for _ in range(3):
        n = int(rng.integers(2, 5))
        graph = ge.random_connected_graph(n, rng)
        ch_a = random_pauli_product(rng, n)
        ch_b = random_pauli_product(rng, n)
        table = ge.xor_convolve(
            effective_distribution(graph, ch_a).table, effective_distribution(graph, ch_b).table
        )
        rho = ge.graph_state_density(graph)
        dense = ge.evolve_density(ge.evolve_density(rho, ch_a), ch_b)
        rebuilt = np.zeros_like(dense)
        for mask, prob in enumerate(table):
            zop = kron_chain([PAULIS[3] if (mask >> q) & 1 else PAULIS[0] for q in range(n)])
            rebuilt += prob * (zop @ rho @ zop)
        worst = max(worst, float(np.max(np.abs(dense - rebuilt))))
    _report("criterion 6e: XOR-convolution composition", worst <= 1e-10, f"max entry diff {worst:.2e}")

    # negativity symmetry, convexity, local-unitary invariance
    sym = 0.0
    conv_ok = True
    for _ in range(6):
        rho = random_density(rng, 3)
        mask = int(rng.integers(1, 7))
        sym = max(sym, abs(ge.negativity(rho, mask) - ge.negativity(rho, (~mask) & 7)))
        rhos = [random_density(rng, 2) for _ in range(3)]
        w = rng.random(3)
        w /= w.sum()
        mixed = sum(wi * r for wi, r in zip(w, rhos))
        conv_ok = conv_ok and ge.negativity(mixed, 1) <= sum(
            wi * ge.negativity(r, 1) for wi, r in zip(w, rhos)
        ) + 1e-10
    graph = ge.preset_graph("chain:4")
    state = ge.build_graph_state(graph)
    rho = np.outer(state, state.conj())
    zdiag = np.where((np.arange(16) >> 2) & 1, -1.0, 1.0).astype(complex)
    lu = abs(
        ge.negativity(rho * np.outer(zdiag, zdiag.conj()), 0b1110) - ge.negativity(rho, 0b1110)
    )
    _report(
        "criterion 6f: negativity symmetry/convexity/LU invariance",
        sym <= 1e-12 and conv_ok and lu <= 1e-10,
        f"sym {sym:.2e}, LU {lu:.2e}",
    )


def test_criterion_7_determinism(tmp_path):
    cfg_a = presets()["fig4"]
    cfg_a.out = str(tmp_path / "a.csv")
    cfg_a.seed = 11
    cfg_b = presets()["fig4"]
    cfg_b.out = str(tmp_path / "b.csv")
    cfg_b.seed = 11
    bytes_a = run(cfg_a).csv_path.read_bytes()
    bytes_b = run(cfg_b).csv_path.read_bytes()
    _report("criterion 7: determinism", bytes_a == bytes_b, f"{len(bytes_a)} bytes compared")
