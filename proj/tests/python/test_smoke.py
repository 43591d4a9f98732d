import math

import pytest

import nsfd_epi as ne


def general(beta):
    return ne.Model(ne.general_reference_params(beta), ne.ModelVariant.GENERAL)


def test_equilibria_and_reproduction_number():
    model = general(0.3)
    labels = [eq.label for eq in ne.equilibria(model)]
    assert labels == ["E0", "E1", "E*"]
    star = ne.interior_equilibrium(model)
    assert star.exists
    assert abs(star.point.X - 0.1818) < 5e-5
    assert abs(ne.reproduction_numbers(ne.general_reference_params(0.1))["R0"] - 0.75) < 1e-12


def test_denominators_and_step():
    model = general(0.3)
    phi1, phi2 = ne.denominators(model, 0.1)
    assert abs(phi1 - 0.099254) < 5e-7
    assert phi2 == 0.1
    x, y = ne.nsfd_step(model, 100.0, ne.State(0.1, 0.9))
    assert x > 0 and y > 0


def test_iterate_converges():
    run = ne.iterate(general(0.1), 0.1, ne.State(0.1, 0.1))
    assert run["converged"]
    assert run["equilibrium"] == "E1"
    assert abs(run["X"][-1] - 0.8333) < 1e-3
    assert len(run["t"]) == len(run["X"]) == len(run["n"])


def test_stability_report():
    model = general(0.3)
    star = ne.interior_equilibrium(model)
    rep = ne.stability(model, star, h=0.1)
    assert rep["classification"] == "stable"
    assert rep["agree"] is True
    assert all(abs(l) < 1 for l in rep["eigenvalues"])
    assert ne.stability(model, star)["classification"] == "stable"


def test_consistency_and_sweep():
    model = general(0.1)
    report = ne.consistency_experiment(model, ne.reference_initial_points(), [0.1])
    assert report["agree"]
    e1 = ne.equilibria(model)[1]
    sweep = ne.step_size_sweep(model, e1)
    assert sweep["matches_continuous"]


def test_euler_demo():
    euler, nsfd = ne.euler_failure_demo(general(0.3), ne.State(0.1, 0.9), 10.0)
    assert euler == 1
    assert nsfd is None


def test_errors_translate():
    with pytest.raises(ValueError):
        ne.nsfd_step(general(0.3), 0.1, ne.State(0.0, 0.5))
    with pytest.raises(ValueError):
        ne.Model(ne.general_reference_params(0.3), ne.ModelVariant.HORIZONTAL)
    with pytest.raises(ValueError):
        ne.denominators(general(0.3), -1.0)


def test_acceptance_runs():
    results = ne.run_acceptance()
    assert len(results) == 10
    assert all(passed for _, _, passed, _ in results)
