import math

import numpy as np
import pytest

import shortcalc as sc

W = np.array([[2.0, 1.0], [1.0, 1.0]])
E1 = np.array([[1.0], [0.0]])
A = np.diag([1.0, 0.0])


def close(x, y, tol=1e-12):
    return np.abs(np.asarray(x) - np.asarray(y)).max() <= tol


def test_running_example():
    r = sc.shorted_operator(W, E1)
    assert close(r["shorted"], [[0, 0], [0, 0.5]])
    assert close(r["compression"], [[2, 1], [1, 0.5]])
    assert close(sc.shorted_schur_oracle(W, E1), [[0, 0], [0, 0.5]])
    cert = sc.is_compatible(W, E1)
    assert cert["compatible"]
    assert close(cert["canonical"]["matrix"], [[1, 0.5], [0, 0]])
    v = cert["companion"][:, 0]
    assert abs(abs(np.vdot(v, np.array([-1, 2]) / math.sqrt(5))) - 1) < 1e-12


def test_complex_input_and_projection_membership():
    q = np.array([[1, 0.5], [0, 0]], dtype=complex)
    assert sc.projection_set_member(q, W, E1)
    assert not sc.projection_set_member(np.diag([1.0, 0.0]), W, E1)
    p = sc.oblique_projection(E1, np.array([[-1.0], [2.0]]))
    assert close(p, [[1, 0.5], [0, 0]])


def test_orders():
    v = sc.leq_minus(A, np.diag([1.0, 2.0]))
    assert v["holds"]
    assert close(v["left_witness"]["matrix"], A)
    f = sc.leq_minus(A, np.ones((2, 2)))
    assert not f["holds"] and f["failure_reason"] == "range_sum_not_direct"
    assert sc.leq_weighted_star("left", A, np.array([[1.0, 1.0], [0.0, -2.0]]), W)["holds"]
    assert sc.leq_star("star", np.zeros((2, 2)), np.ones((2, 2)))["holds"]


def test_w_inverse_and_minimization():
    r = sc.w_inverse(A, W)
    assert close(r["solution"], [[1, 0.5], [0, 0]])
    assert r["is_minimum"] and r["free_dimension"] == 1
    b = np.array([[0.8, 0.4], [0.4, 0.2]])
    m = sc.minimize_quadratic(A, b, W, samples=10)
    assert m["equals_shorted"]
    assert all(c["pass"] for c in m["checks"])
    assert abs(sc.weighted_schatten_norm(A @ m["minimizer"] @ b - np.eye(2), 2, W) - math.sqrt(0.5)) < 1e-12
    with pytest.raises(sc.HypothesisViolated):
        sc.minimize_quadratic(A, np.eye(2), W)


def test_errors():
    with pytest.raises(sc.Infeasible):
        sc.solve_operator_equation(A, np.eye(2), np.diag([0.0, 1.0]))
    with pytest.raises(sc.NotPsd):
        sc.shorted_operator(np.diag([1.0, -1.0]), E1)
    with pytest.raises(sc.Error):
        sc.shorted_operator(np.eye(3), E1)


def test_verify_and_cli():
    for suite in sc.suite_names():
        assert sc.verify(suite, n=4, trials=3, seed=1)["passed"], suite
    code, out, _ = sc.run_cli(["verify", "--suite", "comp1", "--n", "3", "--trials", "5"])
    assert code == 0 and "PASS" in out
    code, _, err = sc.run_cli(["short", "/nonexistent.json"])
    assert code == 2 and "parse error" in err
