import json
import math

import numpy as np
import pytest

import gmfg


def test_graphons():
    assert gmfg.Graphon.uniform_attachment()(0.2, 0.5) == pytest.approx(0.5)
    assert gmfg.Graphon.ranked_attachment()(0.0, 0.7) == 1.0
    assert gmfg.make_graphon("er", 0.3)(0.1, 0.9) == 0.3
    with pytest.raises(ValueError):
        gmfg.Graphon.erdos_renyi(1.5)


def test_sampled_graph_json_round_trip():
    g = gmfg.sample_w_random_graph(gmfg.Graphon.erdos_renyi(0.4), 12, 3)
    assert g.n == 12
    assert len(g.alphas) == 12
    back = gmfg.SampledGraph.from_json(g.to_json())
    assert back.alphas == g.alphas
    assert json.loads(back.to_json())["edges"] == json.loads(g.to_json())["edges"]


def test_sis_stationary_under_er_half():
    sis = gmfg.sis_model()
    grid = gmfg.uniform_grid(4)
    pol = gmfg.PolicyEnsemble.constant(grid, sis, 0)
    mf = gmfg.forward_simulate(sis, gmfg.Graphon.erdos_renyi(0.5), pol).array()
    assert mf.shape == (4, 50, 2)
    assert np.allclose(mf[:, :, 1], 0.5, atol=1e-12)


def test_policy_array_round_trip():
    inv = gmfg.investment_model(horizon=5)
    grid = gmfg.uniform_grid(3)
    arr = gmfg.PolicyEnsemble.uniform(grid, inv).array()
    assert arr.shape == (3, 5, 10, 2)
    arr[:, :, :, 0] = 0.25
    arr[:, :, :, 1] = 0.75
    pol = gmfg.PolicyEnsemble.from_array(grid, arr)
    assert np.array_equal(pol.array(), arr)


def test_solve_and_exploitability():
    sis = gmfg.sis_model()
    w = gmfg.Graphon.uniform_attachment()
    report = gmfg.fixed_point_solve(sis, w, classes=10, eta=0.101, max_iters=250, record_exploitability=True)
    assert report.converged
    assert len(report.residual_history) == report.iterations
    assert report.final_exploitability >= -1e-9
    uniform = gmfg.PolicyEnsemble.uniform(gmfg.uniform_grid(10), sis)
    uniform_expl = gmfg.exploitability(sis, w, uniform, gmfg.forward_simulate(sis, w, uniform))
    assert report.final_exploitability < uniform_expl


def test_boltzmann_and_backwards_induction():
    sis = gmfg.sis_model(horizon=3)
    grid = gmfg.uniform_grid(2)
    w = gmfg.Graphon.ranked_attachment()
    mf = gmfg.forward_simulate(sis, w, gmfg.PolicyEnsemble.uniform(grid, sis))
    q = gmfg.backwards_induction(sis, w, mf)
    qa = q.array()
    assert qa.shape == (2, 4, 2, 2)
    assert np.all(qa[:, 3] == 0.0)
    assert qa[0, 2, 1, 0] == -2.0
    greedy = gmfg.boltzmann_policy(q, 0.0).array()
    assert set(np.unique(greedy)) <= {0.0, 1.0}
    assert abs(gmfg.exploitability(sis, w, gmfg.boltzmann_policy(q, 0.0), mf)) < 1e-10


def test_smc_and_nagent():
    inv = gmfg.investment_model(horizon=6)
    grid = gmfg.uniform_grid(3)
    w = gmfg.Graphon.uniform_attachment()
    pol = gmfg.PolicyEnsemble.constant(grid, inv, 1)
    est = gmfg.smc_estimate(inv, w, pol, trajectories=2, particles=20, seed=1)
    table = est.tabulate([0.0, 0.5, 1.0])
    assert table.shape == (3, 6, 10)
    assert np.all(table[:, :, 1:] == 0.0)

    graph = gmfg.sample_w_random_graph(w, 8, 2)
    returns = gmfg.simulate_episodes(inv, graph, pol, episodes=4, seed=3)
    assert returns.shape == (4, 8)
    assert np.all(returns == 0.0)

    mf = gmfg.forward_simulate(inv, w, pol)
    assert gmfg.mean_field_objective(inv, w, mf, pol, 0.4) == 0.0
    rows = gmfg.deviation_experiment(inv, w, pol, mf, ns=[5, 10], graphs_per_n=2, episodes=3, seed=4)
    assert len(rows) == 4
    assert all(r["max_dev"] >= r["mean_dev"] >= 0.0 for r in rows)


def test_closed_form_mean_field_objective():
    sis = gmfg.sis_model()
    grid = gmfg.uniform_grid(2)
    w = gmfg.Graphon.erdos_renyi(0.0)
    pol = gmfg.PolicyEnsemble.constant(grid, sis, 0)
    mf = gmfg.forward_simulate(sis, w, pol)
    expected = -2.0 * 0.5 * (1.0 - 0.8 ** 50) / 0.2
    assert math.isclose(gmfg.mean_field_objective(sis, w, mf, pol, 0.5), expected, abs_tol=1e-12)


def test_version():
    assert gmfg.__version__ == "0.1.0"
