import json
import math

import pytest

import jaspa


def test_water_fill_is_tight():
    powers, level = jaspa.water_fill([1.0, 1.0], [1.0, 3.0], 4.0)
    assert powers == pytest.approx([3.0, 1.0])
    assert level == pytest.approx(4.0)
    assert sum(powers) == pytest.approx(4.0)


def test_scenario_round_trip(tmp_path):
    s = jaspa.generate_scenario(4, 2, 8, seed=3)
    assert (s.num_mus, s.num_aps, s.num_channels) == (4, 2, 8)
    assert jaspa.Scenario.from_json(s.to_json()) == s
    path = tmp_path / "s.json"
    s.save(str(path))
    assert jaspa.load_scenario(str(path)).digest() == s.digest()


def test_inner_loop_reaches_equilibrium():
    s = jaspa.generate_scenario(5, 1, 8, seed=1)
    r = jaspa.a_iwf(s, [0] * 5)
    assert r["converged"]
    assert jaspa.verify_jep(s, [0] * 5, r["powers"])


def test_joint_algorithms():
    s = jaspa.generate_scenario(5, 2, 8, seed=2)
    best = jaspa.exhaustive(s)["best_sum_rate"]
    for fn in (jaspa.jaspa, jaspa.se_jaspa, jaspa.si_jaspa, jaspa.j_jaspa):
        r = fn(s, memory_len=5, seed=1)
        assert len(r["association"]) == 5
        rate = jaspa.sum_rate(s, r["association"], r["powers"])
        assert rate <= best + 1e-9
        assert r["trace"][-1]["sum_rate"] == pytest.approx(rate)
    assert fn(s, memory_len=5, seed=1)["powers"] == jaspa.j_jaspa(s, memory_len=5, seed=1)["powers"]


def test_run_experiment_outputs():
    s = jaspa.generate_scenario(4, 2, 8, seed=4)
    summary, trace = jaspa.run_experiment(s, "si_jaspa", seed=7)
    doc = json.loads(summary)
    assert doc["algo"] == "si_jaspa"
    assert math.isfinite(doc["final_sum_rate"])
    assert trace.startswith("outer_iter,inner_iter,")


def test_errors_map_to_python():
    s = jaspa.generate_scenario(3, 2, 4)
    with pytest.raises(jaspa.UsageError):
        jaspa.run_experiment(s, "nope")
    with pytest.raises(jaspa.DomainError):
        jaspa.water_fill([1.0], [1.0], 0.0)
    with pytest.raises(jaspa.ResourceError):
        jaspa.exhaustive(s, cap=2)
    with pytest.raises(jaspa.Error):
        jaspa.Scenario.from_json("{")
