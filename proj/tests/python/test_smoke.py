import math

import numpy as np
import pytest

import filament_lab as fl


def test_constants():
    c = fl.ModelConstants(R0=2, m0=3, t0=0.5)
    assert c.E0 == pytest.approx(48.0)
    assert c.beta == pytest.approx(-1 / 12)
    with pytest.raises(ValueError, match="R0 must be positive"):
        fl.ModelConstants(R0=0)


def test_circle_invariants():
    c = fl.ModelConstants()
    j = fl.scenario_field("circle", 64)
    assert j.shape == (64, 3)
    assert fl.spin_energy(j) == pytest.approx(1.0, abs=1e-13)
    np.testing.assert_allclose(fl.vector_f(j), [0, 0, -math.pi], atol=1e-10)
    np.testing.assert_allclose(fl.vector_f(j, reference=True), [0, 0, -math.pi], atol=1e-10)
    np.testing.assert_allclose(fl.momentum(j, c), [0, 0, math.pi], atol=1e-10)
    assert fl.hamiltonian_H0(np.zeros(3), j, c) == pytest.approx(1.0, abs=1e-12)
    assert fl.kernel_value(-math.pi) == -1


def test_curve_and_closure():
    c = fl.ModelConstants()
    z = fl.reconstruct_curve(fl.scenario_field("circle", 64), np.zeros(3), c)
    np.testing.assert_allclose(z[16], [1, 1, 0], atol=1e-12)
    np.testing.assert_allclose(fl.curvature_profile(z, 1.0), np.ones(64), atol=1e-10)
    assert fl.closure_residual(fl.scenario_field("tilted_constant", 32), c) == pytest.approx(2 * math.pi)


def test_midpoint_step_and_roundtrip():
    c = fl.ModelConstants()
    j = fl.scenario_field("kelvin_perturbed", 128, mode=3, eps=0.05)
    h = 2 * math.pi / 128
    nxt = fl.step_implicit_midpoint(j, 0.2 * h * h)
    assert fl.residual_unit_norm(nxt) <= 1e-13
    q, p = fl.to_omega(np.array([1.0, 2.0, 3.0]), 1.5, j, 0.7, c)
    z0, gamma = fl.from_omega(q, p, j, 0.7, c)
    np.testing.assert_allclose(z0, [1, 2, 3], rtol=1e-10)
    assert gamma == pytest.approx(1.5, rel=1e-10)


def test_errors_map_to_python():
    c = fl.ModelConstants()
    with pytest.raises(ValueError):
        fl.spin_energy(np.zeros((7, 3)))
    with pytest.raises(ArithmeticError):
        fl.energy_restricted(np.array([1.0, 0, 0]), fl.scenario_field("tilted_constant", 16), c)
    with pytest.raises(fl.NotInOmega):
        fl.from_omega(np.zeros(3), np.array([1.0, 0, 0]), fl.scenario_field("circle", 32), 0.0, c)


def test_flow_kappa():
    c = fl.ModelConstants()
    j = fl.scenario_field("kelvin_perturbed", 128, mode=3, eps=0.05)
    r = fl.check_hamiltonian_flow(j, c)
    assert r["kappa"] == pytest.approx(2 / math.pi, abs=1e-6)
    assert fl.check_hamiltonian_flow(j, c, beta_override=-math.pi)["kappa"] == pytest.approx(1.0, abs=1e-6)
