import math

import numpy as np
import pytest

from attrition import Belief, build_attrition
from attrition.errors import SizeError
from attrition.verifier import (
    SmallGame,
    Verdict,
    brute_force_value,
    certificate_report,
    deviation_value,
    encode_candidate,
    schedule_value,
    tail_factor,
    verify_candidate,
)

from conftest import P_TERMINAL, THETA, belief

V_DEV = (1.4768039120166359, 0.7384019560083179, 0.492267970672212)


@pytest.fixture(scope="module")
def cert(baseline_candidate):
    return verify_candidate(baseline_candidate)


def test_tail_factor():
    assert tail_factor(0.1, 0.1) == pytest.approx(0.1 / (1 - math.exp(-0.01)), rel=1e-12)
    # small dt recovers the continuous-time 1/r
    assert tail_factor(0.1, 1e-6) == pytest.approx(10.0, rel=1e-6)


def test_deviation_values(baseline_candidate):
    got = [deviation_value(baseline_candidate, th) for th in THETA.values]
    assert got == pytest.approx(V_DEV, rel=1e-12)


def test_pool_values_frozen(cert):
    assert cert.v_pool[0] == pytest.approx([V_DEV[0], 1.0306984085973654, 0.5845929051781179], rel=1e-10)
    assert cert.v_pool[-1] == pytest.approx([V_DEV[0], 1.082471468339156, 0.6881390246616983], rel=1e-10)


def test_certificate_verified(cert):
    assert cert.verdict is Verdict.VERIFIED and cert.verified
    assert cert.max_residual <= 1e-6
    assert cert.min_margin == pytest.approx(0.0923249, abs=1e-6)
    assert cert.margins[-1] == pytest.approx([0.34406951233083816, 0.1958710539894863], abs=1e-10)


def test_schedule_value_matches_table(baseline_candidate, cert):
    for t in (0, 37, 100):
        for k, th in enumerate(THETA.values):
            assert schedule_value(baseline_candidate, th, t) == cert.v_pool[t, k]
    with pytest.raises(IndexError):
        schedule_value(baseline_candidate, 1.0, 101)


def test_values_satisfy_bellman(cert, baseline_candidate):
    from attrition.verifier import pool_flows

    f = pool_flows(baseline_candidate)
    beta = math.exp(-0.01)
    lhs = cert.v_pool[:-1]
    rhs = f[:-1] * 0.1 + beta * cert.v_pool[1:]
    assert np.allclose(lhs, rhs, rtol=1e-13, atol=0)


def test_report_lines(cert):
    text = certificate_report(cert)
    fields = dict(line.split(": ", 1) for line in text.splitlines())
    assert fields["verdict"] == "Verified"
    assert fields["periods"] == "101"
    assert float(fields["v_dev_theta_1"]) == pytest.approx(V_DEV[0], rel=1e-11)
    assert fields["ic_failures"] == "none"


def test_loose_tolerance_cannot_hide_tight_failure(baseline_candidate):
    # a tolerance tighter than the flow residual scale still verifies
    assert verify_candidate(baseline_candidate, tol=1e-9).verified


def test_impatient_receiver_gets_a_verdict(price_model):
    c = build_attrition(price_model, belief(*P_TERMINAL), 0.5, 0.1, 10.0, 10.0)
    cert = verify_candidate(c)
    assert cert.verdict in set(Verdict)
    assert np.all(np.isfinite(cert.v_pool))


def test_ic_failure_detected(price_model):
    # flatten the schedule to the bliss price of the lowest type: indifference breaks
    import dataclasses

    c = build_attrition(price_model, belief(*P_TERMINAL), 0.5, 0.1, 0.1, 1.0)
    bad = dataclasses.replace(c, pooling_actions=np.full(c.steps + 1, 0.05))
    cert = verify_candidate(bad)
    assert cert.verdict is Verdict.INDIFFERENCE_FAIL
    assert cert.indifference_failures == tuple(range(c.steps + 1))


# -- brute force -------------------------------------------------------------


def _single_type_game(flows, terminal, dt=0.1, r=0.1):
    flows = np.asarray(flows, dtype=float)
    H, A = flows.shape
    # two identical type columns: a type space needs at least two types
    types = type(THETA)((1.0, 2.0))
    return SmallGame(
        types=types,
        actions=np.zeros((H, A)),
        flows=np.repeat(flows.reshape(H, 1, A, 1), 2, axis=3),
        transition=np.zeros((H, 1, A), dtype=np.int64),
        terminal=np.array([[terminal, terminal]], dtype=float),
        dt=dt,
        r=r,
    )


def test_brute_force_hand_game():
    g = _single_type_game([[1.0, 2.0], [3.0, 0.5]], terminal=4.0)
    beta = math.exp(-0.01)
    assert brute_force_value(g, 1.0) == pytest.approx(0.1 * 2 + beta * 0.1 * 3 + beta**2 * 4, rel=1e-15)
    assert brute_force_value(g, 1.0, t=1) == pytest.approx(0.1 * 3 + beta * 4, rel=1e-15)
    assert brute_force_value(g, 1.0, t=2) == 4.0


def test_brute_force_follows_transitions():
    types = type(THETA)((1.0, 2.0))
    # action 1 pays more now but moves to an absorbing bad state
    flows = np.array([[[[0.0, 0.0], [1.0, 1.0]], [[0.0, 0.0], [0.0, 0.0]]]] * 2)
    trans = np.array([[[0, 1], [1, 1]]] * 2)
    g = SmallGame(types, np.zeros((2, 2)), flows, trans, np.array([[10.0, 10.0], [0.0, 0.0]]), 0.1, 0.1)
    assert brute_force_value(g, 1.0) == pytest.approx(math.exp(-0.02) * 10.0, rel=1e-15)


def test_size_limits():
    with pytest.raises(SizeError):
        _single_type_game(np.zeros((9, 2)), 0.0)
    with pytest.raises(SizeError):
        _single_type_game(np.zeros((2, 7)), 0.0)


def test_encoded_candidate_lowest_type_is_indifferent(price_model):
    c = build_attrition(price_model, belief(*P_TERMINAL), 0.5, 0.1, 0.1, 0.8)
    g = encode_candidate(c)
    best = brute_force_value(g, 1.0)
    assert abs(best - schedule_value(c, 1.0, 0)) <= 1e-12 * max(1.0, abs(best))
    for th in (2.0, 3.0):
        assert brute_force_value(g, th) == pytest.approx(schedule_value(c, th, 0), abs=1e-12)


def test_pool_only_encoding_matches_schedule(price_model):
    c = build_attrition(price_model, belief(*P_TERMINAL), 0.5, 0.1, 0.1, 0.5)
    g = encode_candidate(c, separate=False)
    for th in THETA.values:
        assert brute_force_value(g, th) == pytest.approx(schedule_value(c, th, 0), abs=1e-12)
