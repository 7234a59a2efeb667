import math

import pytest

import fracimp


def test_special_functions():
    assert fracimp.gamma_fn(5.0) == pytest.approx(24.0, rel=1e-13)
    assert fracimp.beta_fn(2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-12)
    assert fracimp.mittag_leffler(1.0, 1.0) == pytest.approx(math.e, rel=1e-12)
    with pytest.raises(fracimp.DomainError):
        fracimp.gamma_fn(-1.0)


def test_power_rule_round_trip():
    n = 513
    values = [(k / (n - 1)) ** 2 for k in range(n)]
    integral = fracimp.rl_integral(0.0, 1.0, values, 0.5)
    assert integral[-1] == pytest.approx(math.gamma(3) / math.gamma(3.5), rel=1e-4)
    deriv = fracimp.caputo_derivative(0.0, 1.0, values, 0.5)
    assert deriv[-1] == pytest.approx(math.gamma(3) / math.gamma(2.5), rel=1e-3)


def test_half_order_solve():
    text = """
[problem]
name = half
alpha = 0.5
beta = 0.5
tau_points = [1]
x0 = 0

[functions]
f = 1
h = 0
reference = tau^(1/2) / gamma(3/2)
"""
    result = fracimp.run("solve", text)
    assert result.exit_code == 0
    trace = result.json("trace.json")
    assert trace["schema_version"] == 1
    assert trace["reference_max_abs_error"] <= 1e-4
    assert "solution.csv" in result.artifacts


def test_config_error_exit_code():
    result = fracimp.run("solve", "[problem]\nbogus = 1\n")
    assert result.exit_code == 2
    assert any("config error" in m for m in result.messages)


def test_example51():
    result = fracimp.run("example51", json_only=True)
    assert result.exit_code == 0
    summary = result.json("summary.json")
    assert summary["all_checks_pass"]
    assert {"summary.json", "analysis.json", "trace.json", "stability.json"} <= set(result.artifacts)


def test_exception_mapping():
    with pytest.raises(fracimp.DomainError):
        fracimp.caputo_derivative(0.0, 1.0, [0.0], 0.5)
    with pytest.raises(fracimp.DomainError):
        fracimp.mittag_leffler(3.0, 1.0)
