import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paraselect.benchmarks import two_point_map, vgraph_map, vgraph_start
from paraselect.errors import ContractError, InputError, ParaconvexityViolation
from paraselect.selection import SelectionConfig, run, verify_trace
from paraselect.semenov import (ScalarFunction, check_ps, functional_schedule, h_iterates,
                                run_functional)

# --- scalar functions ------------------------------------------------------


def test_scalar_function_forms():
    assert ScalarFunction.from_spec(0.3)(5.0) == 0.3
    assert ScalarFunction.from_spec("0.3")(5.0) == 0.3
    assert ScalarFunction.from_spec("min(s, 0.9)")(0.2) == 0.2
    assert ScalarFunction.from_spec({"expression": "0.5 - 0.1*s"})(1.0) == pytest.approx(0.4)
    t = ScalarFunction.from_spec({"table": [[2.0, 0.8], [1.0, 0.4]]})
    assert t(0.5) == 0.4 and t(1.5) == pytest.approx(0.6) and t(9.0) == 0.8
    for f in [ScalarFunction.constant(0.2), t, ScalarFunction.expression("max(s, 0.1, 0)")]:
        back = ScalarFunction.from_spec(json.loads(json.dumps(f.to_dict())))
        assert back(0.7) == f(0.7)


def test_table_is_clamped():
    t = ScalarFunction.table([[1.0, 1.5], [2.0, -0.5]])
    assert t(1.0) == pytest.approx(1 - 1e-9) and t(2.0) == 0.0


@pytest.mark.parametrize("text", ["__import__('os')", "s ** 2", "s / 2", "abs(s)",
                                  "min(s)", "s.real", "[s]", "True", "lambda: 1", "s if s else 0"])
def test_expression_grammar_rejects(text):
    with pytest.raises(InputError):
        ScalarFunction.expression(text)


@pytest.mark.parametrize("bad", [1.0, -0.1, {"constant": 2}, {"a": 1, "b": 2}, [0.1], True])
def test_from_spec_rejects(bad):
    with pytest.raises(InputError):
        ScalarFunction.from_spec(bad)


# --- damping recursion -----------------------------------------------------


def test_h_iterates_examples():
    hs = h_iterates(0.5, 1.0, 4)
    assert hs.iterates == [1.0, 0.5, 0.25, 0.125, 0.0625]
    assert hs.partial_sums[-1] == 1.9375 and not hs.converged
    full = h_iterates(0.5, 1.0)
    assert full.converged and full.total == pytest.approx(2.0, abs=1e-12)
    hs = h_iterates("min(s, 0.9)", 1.0, 3)
    assert hs.iterates == pytest.approx([1.0, 0.9, 0.81, 0.6561])
    assert h_iterates(0.0, 1.0).iterates == [1.0, 0.0]
    assert not h_iterates(0.5, 1.0, 0).converged


def test_h_iterates_contract():
    with pytest.raises(ContractError):
        h_iterates(ScalarFunction(lambda s: 1.0), 1.0, 3)
    with pytest.raises(ContractError):
        h_iterates("s + 0.5", 1.0, 3)
    with pytest.raises(InputError):
        h_iterates(0.5, 0.0)


@given(st.floats(0.01, 0.95), st.floats(0.01, 10))
def test_constant_H_is_geometric(c, t):
    hs = h_iterates(c, t, 30)
    assert hs.iterates == pytest.approx([c ** n for n in range(31)], rel=1e-12)


@given(st.floats(0.05, 0.95), st.floats(0.01, 5), st.integers(1, 60))
def test_iterates_decrease_and_sums_increase(c, t, n):
    hs = h_iterates(f"min(s, {c!r})", t, n)
    it = np.array(hs.iterates)
    assert np.all(np.diff(it) <= 0) and np.all(it >= 0)
    assert np.all(np.diff(hs.partial_sums) >= 0)


@given(st.floats(0.05, 0.9), st.floats(0.05, 0.9), st.floats(0.1, 5))
def test_damping_is_monotone_in_H(a, b, t):
    lo, hi = sorted((a, b))
    x = h_iterates(lo, t, 40).iterates
    y = h_iterates(hi, t, 40).iterates
    assert all(p <= q * (1 + 1e-12) for p, q in zip(x, y))


def test_schedule_matches_iterates():
    sched = functional_schedule("min(s, 0.9)", 2.0)
    radii = [next(sched) for _ in range(6)]
    hs = h_iterates("min(s, 0.9)", 2.0, 5)
    assert radii == pytest.approx([2.0 * h for h in hs.iterates])


# --- property (PS) ---------------------------------------------------------


def test_check_ps_examples():
    rep = check_ps(0.4, 0.5, [1.0])
    assert rep.holds and rep.min_gap == pytest.approx(0.1)
    assert rep.deltas[1.0] == pytest.approx(2.0)
    equal = check_ps(0.5, 0.5, [1.0])
    assert not equal.holds and "strictly" in equal.reason
    # H close to 1 near small arguments but summable for t <= 1
    rep = check_ps("min(s, 0.5)*0.5", "min(s, 0.9)", [0.5, 1.0])
    assert rep.holds and rep.max_delta < 20
    assert not check_ps(0.4, 0.5, [1.0], n_max=5).holds
    assert set(rep.to_dict()) >= {"holds", "min_gap", "witness", "deltas", "max_delta"}


def test_check_ps_finds_crossing_between_grid_points():
    # h crosses H only for small s, which only the recursion visits
    rep = check_ps("max(0.6 - s, 0.1)", 0.5, [4.0])
    assert not rep.holds and rep.witness < 0.1


# --- functional run --------------------------------------------------------


def test_functional_run_matches_constant_run():
    phi = vgraph_map(21, step=0.1)
    g = vgraph_start(phi)
    a = run_functional(phi, g, 0.4, 0.6, 1.2)
    cfg = SelectionConfig(alpha=0.4, gamma=0.6, r0=1.2, delta=a.delta)
    b = run(phi, g, cfg)
    assert len(a.iterates) == len(b.iterates)
    assert all(np.array_equal(x, y) for x, y in zip(a.iterates, b.iterates))
    assert a.delta == pytest.approx(1 / (1 - 0.6))


def test_functional_run_with_varying_H():
    phi = vgraph_map(21, step=0.1)
    h, H = "min(0.4, 0.3 + 0.1*s)", "min(0.6 + 0.1*s, 0.8)"
    trace = run_functional(phi, vgraph_start(phi), h, H, 1.2)
    assert trace.certified and verify_trace(trace, phi).ok
    assert trace.final_drift() < trace.delta * trace.r0


def test_functional_run_rejects_when_ps_fails():
    phi = vgraph_map(5, step=0.1)
    with pytest.raises(InputError):
        run_functional(phi, vgraph_start(phi), 0.6, 0.5, 1.2)


def test_functional_run_reports_violation():
    phi = two_point_map(3)
    with pytest.raises(ParaconvexityViolation):
        run_functional(phi, np.full((3, 1), 0.5), 0.5, 0.75, 0.6)
