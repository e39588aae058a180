import numpy as np
import pytest

from qbisect.amplify import build_branches, evolve
from qbisect.config import AlgorithmConfig
from qbisect.dense import conditioned_run, dense_trace, layout_for, run_full_circuit
from qbisect.errors import CapacityError
from qbisect.graph import Graph, brute_force_bisection, complete_graph, path_graph

from suites import small_graphs

CASES = [
    ("path4", "max", 0, 4),
    ("path4", "min", 2, 4),
    ("cycle4", "max", 1, 3),
    ("cycle4", "min", 0, 3),
    ("k4", "max", 0, 2),
    ("k4", "min", 2, 2),
    ("path6", "max", 0, 5),
    ("cycle6", "min", 0, 4),
    ("edge2", "max", 3, 2),
]


def total_variation(p, q):
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in set(p) | set(q))


@pytest.mark.parametrize("name, mode, mu, rounds", CASES)
def test_backends_agree(name, mode, mu, rounds):
    g = small_graphs()[name]
    cfg = AlgorithmConfig(mode=mode, mu=mu)
    structured, probs = evolve(build_branches(g, cfg), rounds)
    dense = conditioned_run(g, cfg, rounds)
    assert np.allclose(dense.pr_ax2, probs, atol=1e-12)
    assert total_variation(structured.joint_distribution(), dense.joint_distribution()) < 1e-12
    for k in range(len(structured)):
        amp = dense.amplitude(int(structured.states[k]), structured.extended_constraints(k))
        assert amp == pytest.approx(dense.prep_phase * structured.amps[k], abs=1e-12)


def test_ax2_register_is_reset():
    g = path_graph(4)
    run = conditioned_run(g, AlgorithmConfig(), 3)
    assert run.state.prob_one(run.layout.ax2) == pytest.approx(0.0, abs=1e-15)
    assert run.state.norm() == pytest.approx(1.0)


def test_complete_graph_first_round():
    pr_ax2, pr_target = dense_trace(complete_graph(4), AlgorithmConfig(), rounds=2)
    assert pr_ax2[0] == pytest.approx(0.75, abs=1e-12)
    assert pr_target[0] == pytest.approx(0.75, abs=1e-12)


def test_single_edge_is_certain():
    g = Graph(2, ((0, 1),))
    pr_ax2, _ = dense_trace(g, AlgorithmConfig(), rounds=3)
    assert pr_ax2 == pytest.approx([1.0, 1.0, 1.0])


def test_sampled_path_finds_max_cut():
    g = path_graph(4)
    cfg = AlgorithmConfig()
    best = brute_force_bisection(g, "max").optimal_value
    hits = 0
    for seed in range(200):
        _, z, diag = run_full_circuit(g, cfg, np.random.default_rng(seed))
        hits += z.ones == best
        assert len(diag.pr_ax2) == diag.rounds
    assert hits / 200 >= 0.95


def test_sampled_run_is_reproducible():
    g = small_graphs()["cycle6"]
    cfg = AlgorithmConfig(mode="min", iterations=4)
    a = run_full_circuit(g, cfg, np.random.default_rng(42))
    b = run_full_circuit(g, cfg, np.random.default_rng(42))
    assert a[0] == b[0] and a[2].stage3_restarts == b[2].stage3_restarts


def test_layout():
    lay = layout_for(path_graph(4), AlgorithmConfig(mu=2))
    assert (lay.m_ext, lay.total_qubits, lay.working_qubits) == (5, 11, 10)
    assert lay.c(0) == 4 and lay.ax2 == 9


def test_capacity():
    with pytest.raises(CapacityError):
        layout_for(path_graph(10), AlgorithmConfig(mu=10))
