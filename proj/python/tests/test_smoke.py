import math

import numpy as np
import pytest

import qdisc


def h(p):
    return -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0)


def test_werner_state():
    rho = qdisc.werner(0.5)
    assert rho.shape == (4, 4)
    assert rho.dtype == np.complex128
    assert np.allclose(rho, rho.conj().T)
    assert abs(np.trace(rho) - 1) < 1e-14
    assert np.allclose(qdisc.partial_trace(rho, "A"), np.eye(2) / 2)


def test_entropy_matches_numpy():
    rho = qdisc.werner(0.5)
    ev = np.linalg.eigvalsh(rho)
    expected = -sum(x * math.log2(x) for x in ev if x > 1e-15)
    assert abs(qdisc.von_neumann_entropy(rho) - expected) < 1e-12


def test_discord_of_singlet():
    rep = qdisc.quantum_discord(qdisc.werner(1.0))
    assert abs(rep["mutual_information"] - 2) < 1e-12
    assert abs(rep["classical_correlation"] - 1) < 1e-9
    assert abs(rep["discord"] - 1) < 1e-9
    assert rep["converged"]
    assert rep["used_bell_fast_path"]


def test_discord_with_oracle():
    rep = qdisc.quantum_discord(qdisc.mixed_bell(0.3), oracle_resolution=60)
    assert rep["oracle_gap"] is not None
    assert abs(rep["oracle_gap"]) < 1e-4
    assert rep["mutual_information"] == pytest.approx(
        rep["classical_correlation"] + rep["discord"], abs=0)


def test_reference_state_minimum():
    rep = qdisc.quantum_discord(qdisc.reference_random_state())
    assert abs(rep["min_conditional_entropy_nats"] - 0.24) < 0.01
    oracle = qdisc.grid_oracle(qdisc.reference_random_state(), 100)
    assert abs(oracle["min_value"] - rep["min_conditional_entropy"]) < 1e-4


def test_conditional_entropy_closed_form():
    omega = (0.9, -0.2, 0.1)
    rho = qdisc.bell_diagonal(omega)
    assert abs(qdisc.conditional_entropy(rho, (1, 0, 0)) - h(0.95)) < 1e-12


def test_decompose_werner():
    d = qdisc.decompose(qdisc.werner(0.4))
    assert np.allclose(d["corr"], -0.4 * np.eye(3))
    assert np.allclose(d["alpha"], 0)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        qdisc.werner(1.5)
    with pytest.raises(ValueError):
        qdisc.quantum_discord(np.eye(4))
    with pytest.raises(ValueError):
        qdisc.quantum_discord(qdisc.werner(0.5), method="newton")
    report = qdisc.is_density_matrix(np.diag([0.6, 0.5]).astype(complex))
    assert not report["valid"]
    assert abs(report["trace_defect"] - 0.1) < 1e-12


def test_sweep_csv_is_deterministic():
    a = qdisc.sweep("werner", step=0.25)
    b = qdisc.sweep("werner", step=0.25)
    assert a == b
    lines = a.strip().split("\n")
    assert lines[0].startswith("param,mutual_information,classical_correlation,discord")
    assert len(lines) == 6
