import numpy as np
import pytest

from ngent.errors import OptimizationError
from ngent.optimize import local_search, multistart_minimize


def shifted_quadratic(x):
    return float(np.sum((np.asarray(x) - 1.5) ** 2))


def double_well(x):
    x = np.asarray(x)
    return float((x[0] ** 2 - 1) ** 2 + 0.3 * x[0] + x[1] ** 2)


def test_local_search_converges_on_quadratic():
    out = local_search(
        shifted_quadratic, np.zeros(3), bounds=None, max_evals=3000, fatol=1e-12, xatol=1e-8, simplex_step=0.3
    )
    np.testing.assert_allclose(out.x, 1.5, atol=1e-4)
    assert out.nfev <= 3000


def test_budget_is_respected():
    out = local_search(
        shifted_quadratic, np.zeros(5), bounds=None, max_evals=40, fatol=1e-12, xatol=1e-12, simplex_step=0.3
    )
    assert out.nfev <= 41


def test_bounds_are_respected():
    res = multistart_minimize(shifted_quadratic, [np.zeros(2)], bounds=[(None, None), (-1.0, 1.0)])
    assert res.x[1] <= 1.0 + 1e-12
    assert res.x[0] == pytest.approx(1.5, abs=1e-3)


def test_multistart_finds_global_well():
    res = multistart_minimize(double_well, [np.array([1.0, 0.5]), np.array([-1.0, 0.5])])
    assert res.x[0] < 0
    assert len(res.per_start_values) == 2
    assert res.fun == min(res.per_start_values)
    assert res.nfev == sum(s.nfev for s in res.starts)


def test_infeasible_everywhere_raises():
    with pytest.raises(OptimizationError):
        multistart_minimize(lambda x: 1e3, [np.zeros(2)], feasible_below=1e3, max_evals=50)


def test_parallel_workers_give_identical_results():
    starts = [np.array([s, -s]) for s in (-1.0, 0.2, 1.1)]
    serial = multistart_minimize(double_well, starts, max_evals=500)
    parallel = multistart_minimize(double_well, starts, max_evals=500, workers=2)
    assert serial.per_start_values == parallel.per_start_values
    np.testing.assert_array_equal(serial.x, parallel.x)
