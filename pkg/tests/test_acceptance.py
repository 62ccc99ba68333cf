"""One test per acceptance criterion; the terminal summary prints PASS/FAIL per line.

Run alone with ``pytest tests/test_acceptance.py``.
"""

from pathlib import Path

import numpy as np
import pytest

from attrition import Belief, TypeSpace, build_attrition, make_price_model, pooling_action, separating_action
from attrition.apps import PriceSignalingParams, bundled_models, z_factor
from attrition.assumptions import (
    Verdict as Check,
    check_mon_direct,
    check_mon_sufficient,
    check_sc_direct,
    check_sc_sufficient,
    generic_family,
    run_all,
)
from attrition.cli import OUTPUT_FILES, run_scenario
from attrition.config import load_config
from attrition.core import expected_type
from attrition.errors import NoSolutionError
from attrition.verifier import brute_force_value, encode_candidate, schedule_value, tail_factor, verify_candidate

from conftest import (
    P_TERMINAL,
    THETA,
    belief,
    constant_model,
    expected_cost_model,
    sin_psi_model,
    sin_psi_pair,
)


@pytest.fixture(scope="module")
def cert(baseline_candidate):
    return verify_candidate(baseline_candidate)


def test_c1_unravelling_reproduces_prior(baseline_candidate):
    p0 = baseline_candidate.belief_path[0].weights
    assert np.all(np.abs(p0 - [0.63, 0.185, 0.185]) <= 0.005)


def test_c2_lowest_type_indifferent(cert):
    v_dev = cert.v_dev[0]
    gap = np.abs(cert.v_pool[:, 0] - v_dev) / v_dev
    assert gap.max() <= 1e-6
    # closed form with the per-period tail factor; its dt -> 0 limit is 1.46945
    z0 = z_factor(Belief.degenerate(THETA, 1.0), 0.35, 1.0)
    assert v_dev == pytest.approx(z0**2 / 4 * tail_factor(0.1, 0.1), rel=1e-12)
    assert v_dev == pytest.approx(1.46945, rel=0.01)


def test_c3_higher_types_prefer_pooling(cert):
    assert np.all(cert.margins > 0)
    assert cert.margins[-1, 0] == pytest.approx(0.342, abs=0.01)
    assert cert.margins[-1, 1] == pytest.approx(0.195, abs=0.01)


def test_c4_belief_path_endpoints(baseline_candidate):
    path = baseline_candidate.belief_path
    assert path[0].weights[0] == pytest.approx(0.63, abs=0.005)
    assert path[-1].weights[0] == pytest.approx(0.01, abs=0.005)
    assert expected_type(path[0]) == pytest.approx(1.555, abs=0.01)
    assert expected_type(path[-1]) == pytest.approx(2.485, abs=0.01)


def test_c5_pooling_price_endpoints(baseline_candidate):
    a = baseline_candidate.pooling_actions
    assert abs(a[0] - 0.254876) <= 1e-4
    assert abs(a[-1] - 0.198103) <= 1e-4
    assert np.all(np.diff(a) < 0)


def _random_candidate(rng):
    n = int(rng.integers(2, 4))
    types = TypeSpace(tuple(float(k) for k in range(1, n + 1)))
    lam = float(rng.uniform(0.1, 0.5))
    m = make_price_model(PriceSignalingParams(lam=lam, F=1.0, theta_space=types))
    dt = float(rng.choice([0.05, 0.1, 0.2]))
    steps = int(rng.integers(1, 9))
    w = rng.dirichlet(np.ones(n)) * 0.95
    w[0] += 0.05
    sigma = float(rng.uniform(0.0, 2.0))
    r = float(rng.choice([0.05, 0.1, 0.5]))
    return build_attrition(m, Belief(types, w), sigma, dt, r, steps * dt)


def test_c6_oracle_equivalence():
    rng = np.random.default_rng(6)
    games = compared = 0
    while games < 60:
        try:
            c = _random_candidate(rng)
        except NoSolutionError:
            continue
        games += 1
        verified = verify_candidate(c).verified
        for separate in (True, False):
            g = encode_candidate(c, separate=separate)
            assert g.flows.shape[0] <= 8 and g.flows.shape[2] <= 2
            for th in c.model.types.values:
                # with a revealing option only the indifferent type, or any type
                # of a verified candidate, must find the schedule optimal
                if separate and th != c.lowest_type and not verified:
                    continue
                got, want = brute_force_value(g, th), schedule_value(c, th, 0)
                assert abs(got - want) <= 1e-12, (th, got, want)
                compared += 1
    assert games >= 50 and compared >= 50


@pytest.mark.parametrize("name", ["price", "labor", "bargaining"])
def test_c7_assumptions_hold_on_bundled_models(name):
    m = bundled_models()[name]
    hi = m.action_domain[1]
    fam = generic_family(m, 0.5 * hi, separating_action(m), periods=20)
    reports = run_all(m, fam, 0.1, 0.1)
    assert reports["mon_sufficient"].verdict is Check.HOLDS
    assert reports["mon_direct"].parts["weak"] is Check.HOLDS
    assert reports["sc_sufficient"].verdict is Check.HOLDS
    assert reports["sc_direct"].verdict is Check.HOLDS


def test_c7_counterexamples_fail_with_witnesses():
    sin = sin_psi_model()
    for rep in (check_sc_sufficient(sin), check_sc_direct(sin, sin_psi_pair(), 0.1, 0.1)):
        assert rep.verdict is Check.FAILS and rep.witnesses and rep.verify_witnesses(sin)
    cost = expected_cost_model()
    rep = check_mon_sufficient(cost)
    assert rep.verdict is Check.FAILS and rep.witnesses and rep.verify_witnesses(cost)
    flat = constant_model()
    rep = check_mon_direct(flat)
    assert rep.parts["strict"] is Check.FAILS and rep.witnesses and rep.verify_witnesses(flat)


@pytest.mark.parametrize("lam_f", [0.1, 0.35, 0.7, 1.0])
def test_c8_degenerate_pooling_is_separating(lam_f):
    m = make_price_model(PriceSignalingParams(lam=lam_f, F=1.0))
    a_sep = separating_action(m)
    assert abs(pooling_action(m, Belief.degenerate(THETA, 1.0), a_sep) - a_sep) <= 1e-12


def test_c9_runs_are_byte_identical(tmp_path):
    cfg = load_config(Path(__file__).resolve().parents[1] / "configs" / "price_baseline.ini")
    assert run_scenario(cfg, tmp_path / "a") == 0
    assert run_scenario(cfg, tmp_path / "b") == 0
    for name in OUTPUT_FILES:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
