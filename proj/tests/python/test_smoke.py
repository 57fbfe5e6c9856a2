"""Smoke tests for the dsaqos extension module.

These exercise each exposed operation once with easily checkable values;
the exhaustive numerical checks live in the C++ suites.
"""

import math

import pytest

import dsaqos


@pytest.fixture
def small_instance():
    proc = dsaqos.MarkovArrivalProcess([[0.8, 0.2], [0.3, 0.7]], [0.5, 3.0])
    params = dsaqos.SystemParams(W=3, K=5, c=1.0, p_idle=0.45)
    return proc, params


def test_arrival_process_basics():
    proc = dsaqos.MarkovArrivalProcess([[1.0]], [2.0])
    assert proc.num_states == 1
    assert proc.mean_rate() == pytest.approx(2.0)
    assert proc.log_mgf(0.0) == pytest.approx(0.0, abs=1e-12)
    assert proc.log_mgf(0.5) == pytest.approx(1.0, abs=1e-12)
    assert proc.scaled(2.0).mean_rate() == pytest.approx(4.0)


def test_policy_matrix_round_trips(tmp_path):
    policy = dsaqos.PolicyMatrix.all_ones(3)
    assert policy.dimension == 3
    assert policy.is_staircase()
    assert policy.at(1, 1)
    assert not policy.at(1, 0)  # column 0 is pinned

    text = policy.to_text()
    assert dsaqos.PolicyMatrix.from_text(text) == policy

    path = tmp_path / "policy.txt"
    policy.save(str(path))
    assert dsaqos.PolicyMatrix.load(str(path)) == policy

    bits = policy.bits()
    assert dsaqos.PolicyMatrix.from_bits(3, bits) == policy
    assert dsaqos.PolicyMatrix.free_entry_count(3) == 3

    thresholds = dsaqos.PolicyMatrix.from_thresholds([1, 1], 3)
    assert thresholds == policy


def test_enumerate_leaves_normalized(small_instance):
    _, params = small_instance
    spectrum = dsaqos.enumerate_leaves(dsaqos.PolicyMatrix.all_ones(3), params)
    total = sum(atom.prob for atom in spectrum.atoms)
    assert total == pytest.approx(1.0, abs=1e-12)
    assert spectrum.min_rate() <= spectrum.mean_rate() <= spectrum.max_rate()
    assert spectrum.log_mgf_neg(0.0) == pytest.approx(0.0, abs=1e-12)


def test_optimize_agrees_with_exhaustive(small_instance):
    proc, params = small_instance
    exh = dsaqos.optimize(dsaqos.Algorithm.exhaustive, proc, params, d_max=2.0)
    stair = dsaqos.algorithm_a(proc, params, d_max=2.0)
    assert exh.best_qos.theta_star == pytest.approx(
        stair.best_qos.theta_star, rel=1e-12
    )
    assert stair.best_policy.is_staircase()
    assert 0.0 < exh.best_qos.p_delay < 1.0
    assert exh.best_qos.p_delay == pytest.approx(
        math.exp(-exh.best_qos.theta_star * exh.best_qos.delta * 2.0)
    )

    spectrum = dsaqos.enumerate_leaves(stair.best_policy, params)
    theta = dsaqos.find_theta_star(proc, spectrum)
    assert theta == pytest.approx(stair.best_qos.theta_star, rel=1e-12)
    assert dsaqos.qos_gap(proc, spectrum, theta) == pytest.approx(0.0, abs=1e-9)


def test_simulation_is_deterministic(small_instance):
    proc, params = small_instance
    policy = dsaqos.algorithm_a(proc, params, d_max=2.0).best_policy
    spectrum = dsaqos.enumerate_leaves(policy, params)
    cfg = dsaqos.SimConfig(horizon=20000, seed=7, warmup=200)
    first = dsaqos.simulate(proc, spectrum, cfg)
    second = dsaqos.simulate(proc, spectrum, cfg)
    assert first.samples == second.samples
    # one batch per period; anything still queued at the horizon is unrecorded
    assert 0 < first.samples <= 20000 - 200
    assert first.delay_mass == second.delay_mass
    assert first.mean_queue == second.mean_queue
    # P(delay > 0) complements the work that departs with zero delay
    assert first.p_delay_empirical(0.0) == pytest.approx(
        1.0 - first.delay_mass[0] / first.total_mass
    )
    assert first.exceedances(first.max_delay() + 1.0) == 0


def test_validate_ld_rows(small_instance):
    proc, params = small_instance
    policy = dsaqos.algorithm_a(proc, params, d_max=2.0).best_policy
    cfg = dsaqos.SimConfig(horizon=50000, seed=11, warmup=500)
    table = dsaqos.validate_ld(proc, params, policy, [0.0, 1.0, 2.0], cfg)
    assert [row.d for row in table.rows] == [0.0, 1.0, 2.0]
    assert table.theta_star > 0.0
    for row in table.rows:
        assert 0.0 <= row.p_empirical <= 1.0
        assert row.p_ld == pytest.approx(
            math.exp(-table.theta_star * table.delta * row.d)
        )
        assert row.samples == 50000 - 500


def test_parse_config(tmp_path):
    conf = tmp_path / "exp.conf"
    conf.write_text(
        "version = 1\n"
        "[system]\n"
        "W = 2\nK = 3\nc = 1.0\np_idle = 0.5\n"
        "[arrivals]\n"
        "states = 1\ntransition = 1.0\nvalues = 1.0\n"
        "[qos]\nd_max = 2\n"
    )
    cfg = dsaqos.parse_config(str(conf))
    assert cfg.params.W == 2
    assert cfg.params.K == 3
    assert cfg.arrivals.mean_rate() == pytest.approx(1.0)
    assert cfg.d_max == 2.0
    assert cfg.sweep == []
    assert cfg.sim is None


def test_exception_mapping(tmp_path, small_instance):
    proc, params = small_instance
    with pytest.raises(ValueError):
        dsaqos.SystemParams(W=3, K=2, c=1.0, p_idle=0.5)
    with pytest.raises(ValueError):
        dsaqos.MarkovArrivalProcess([[0.5, 0.5], [0.0, 0.0]], [1.0, 2.0])

    # overload: arrivals far above the best service rate
    heavy = dsaqos.MarkovArrivalProcess([[1.0]], [1e6])
    spectrum = dsaqos.enumerate_leaves(dsaqos.PolicyMatrix.all_ones(3), params)
    with pytest.raises(RuntimeError):
        dsaqos.simulate(heavy, spectrum, dsaqos.SimConfig(horizon=100000, seed=1))

    bad = tmp_path / "bad.conf"
    bad.write_text(
        "version = 1\n"
        "[system]\n"
        "W = 2\nK = 3\nc = 1x\np_idle = 0.5\n"
        "[arrivals]\n"
        "states = 1\ntransition = 1.0\nvalues = 1.0\n"
        "[qos]\nd_max = 2\n"
    )
    with pytest.raises(ValueError) as err:
        dsaqos.parse_config(str(bad))
    assert "line 5" in str(err.value)
