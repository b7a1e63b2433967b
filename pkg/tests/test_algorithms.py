import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bettimc.algorithms import (
    ALGORITHMS,
    cbne_power,
    estimate_range,
    execute_plan,
    hoeffding_samples,
    make_plan,
    plan_cbne_chebyshev,
    plan_cbne_power,
    plan_qbne_chebyshev,
    plan_qbne_power,
    qbne_power,
)
from bettimc.oracle import profile


def test_hoeffding_inverts_tail_bound():
    q = hoeffding_samples(2.0, 0.05, 0.1)
    assert 2 * math.exp(-2 * q * 0.05 ** 2 / 4) <= 0.1 < 2 * math.exp(-2 * (q - 1) * 0.05 ** 2 / 4)


def test_qbne_power_plan():
    plan = plan_qbne_power(0.1, 0.1, 0.5)
    assert plan.degree == 6 and plan.total_samples == 600 and plan.markov_steps == 3600
    assert plan_qbne_power(0.1, 0.1, 1 / 3).markov_steps == 5400


def test_cbne_power_plan():
    plan = plan_cbne_power(0.1, 0.1, 0.5, 4 / 3)
    assert plan.degree == 6
    assert plan.total_samples == math.ceil((2 * (4 / 3) ** 6) ** 2 * math.log(20) / (2 * 0.05 ** 2))


def test_cbne_chebyshev_plan_structure():
    plan = plan_cbne_chebyshev(0.1, 0.1, 0.5, 4 / 3)
    assert plan.degree == 6
    assert plan.eta_prime == pytest.approx(1 - 0.9 ** (1 / 3))
    assert plan.eta_prime == pytest.approx(0.0345, abs=1e-4)
    for b in plan.budgets:
        assert (b.q == 0) == (plan.coefficient(b.power) == 0)
    # union bound over the non-zero monomials recovers the requested confidence
    active = len(plan.active)
    assert 1 - (1 - plan.eta_prime) ** active == pytest.approx(0.1)
    err = sum(abs(plan.coefficient(b.power)) * b.epsilon for b in plan.active)
    assert err == pytest.approx(0.05)


def test_qbne_chebyshev_plan():
    plan = plan_qbne_chebyshev(0.1, 0.1, 0.5)
    assert plan.degree == 6 and len(plan.budgets) == 6
    assert len({b.q for b in plan.budgets}) == 1
    assert plan.budgets[0].q == math.ceil(2 * math.log(20) * plan.inputs["poly_norm_sq"] / 0.01)


def test_step_accounting():
    for algorithm in ALGORITHMS:
        plan = make_plan(algorithm, 0.1, 0.1, 1 / 3, 1.5)
        assert plan.markov_steps == sum(b.power * b.q for b in plan.budgets)


@settings(max_examples=40, deadline=None)
@given(eps=st.floats(0.02, 0.5), eta=st.floats(0.01, 0.5), delta=st.floats(0.05, 1.0),
       h=st.floats(0.5, 2.0), algorithm=st.sampled_from(ALGORITHMS))
def test_plans_tighten_with_epsilon(eps, eta, delta, h, algorithm):
    loose = make_plan(algorithm, eps, eta, delta, h)
    tight = make_plan(algorithm, eps / 2, eta, delta, h)
    assert tight.degree >= loose.degree
    assert tight.total_samples >= loose.total_samples
    assert all(b.q >= 0 for b in loose.budgets)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        make_plan("nope", 0.1, 0.1, 0.5)
    with pytest.raises(ValueError):
        make_plan("cbne-power", 0.0, 0.1, 0.5)
    with pytest.raises(ValueError):
        make_plan("qbne-power", 0.1, 1.0, 0.5)
    with pytest.raises(ValueError):
        make_plan("qbne-power", 0.1, 0.1, 0.0)


def test_gap_of_one_is_planned():
    for algorithm in ALGORITHMS:
        assert make_plan(algorithm, 0.1, 0.1, 1.0).degree >= 1


def test_estimates_stay_in_range(k33):
    for algorithm in ALGORITHMS:
        plan = make_plan(algorithm, 0.3, 0.3, 0.5, 4 / 3)
        result = execute_plan(plan, k33, 1, seed=4)
        lo, hi = estimate_range(plan)
        assert lo - 1e-9 <= result.estimate <= hi + 1e-9
        assert result.samples_used == plan.total_samples


def test_estimators_near_truth(k33):
    truth = profile(k33, 1).betti_normalised
    assert abs(qbne_power(k33, 1, 0.1, 0.1, 0.5, seed=1).estimate - truth) < 0.1
    assert abs(cbne_power(k33, 1, 0.1, 0.1, 0.5, 4 / 3, seed=1).estimate - truth) < 0.1


def test_seed_reproducibility(k33):
    a = qbne_power(k33, 1, 0.1, 0.1, 0.5, seed=7).estimate
    assert a == qbne_power(k33, 1, 0.1, 0.1, 0.5, seed=7).estimate


def test_warns_when_gap_overstated(k33):
    p = profile(k33, 1)
    with pytest.warns(UserWarning):
        qbne_power(k33, 1, 0.1, 0.1, 0.9, profile=p)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        qbne_power(k33, 1, 0.1, 0.1, 0.5, profile=p)


def test_moments_are_trace_estimates(k33):
    result = execute_plan(plan_cbne_chebyshev(0.2, 0.2, 0.5, 4 / 3), k33, 1, seed=3)
    assert set(result.moments) == set(result.plan.poly.nonzero_powers())
    assert np.isfinite(list(result.moments.values())).all()
