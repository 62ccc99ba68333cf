import numpy as np
import pytest

from attrition import Belief, SeparableModel, TypeSpace, build_attrition, expected_type, make_price_model
from attrition.assumptions import StrategySet
from attrition.apps import PriceSignalingParams

THETA = TypeSpace((1.0, 2.0, 3.0))
P_TERMINAL = (0.01, 0.495, 0.495)


@pytest.fixture(scope="session")
def types():
    return THETA


@pytest.fixture(scope="session")
def price_model():
    return make_price_model(PriceSignalingParams(lam=0.35, F=1.0, theta_space=THETA))


@pytest.fixture(scope="session")
def baseline_candidate(price_model):
    return build_attrition(price_model, Belief(THETA, P_TERMINAL), 0.5, 0.1, 0.1, 10.0)


def belief(*w):
    return Belief(THETA, np.asarray(w, dtype=float))


# -- counterexample models ---------------------------------------------------

EIGHT = TypeSpace(tuple(float(k) for k in range(1, 9)))


def sin_psi_model():
    """psi = sin(theta) on eight types: not monotone, so single crossing breaks."""
    return SeparableModel(
        phi0=lambda a, p: a,
        phi1=lambda a, p: -a * a,
        psi=np.sin,
        action_domain=(0.0, 3.0),
        types=EIGHT,
        label="sin-psi",
    )


def sin_psi_pair(dt=0.1, L=5):
    """Two constant paths whose payoff gap is proportional to 1 - 3 sin(theta)."""
    acts = (np.full(L, 1.0), np.full(L, 2.0))
    u = Belief.uniform(EIGHT)
    return StrategySet(acts, ((u,) * L, (u,) * L), "a=1 vs a=2")


def expected_cost_model():
    """phi1 = -E[theta] a: cost rises with reputation, so phi1 decreases in p."""
    return SeparableModel(
        phi0=lambda a, p: a,
        phi1=lambda a, p: -expected_type(p) * a,
        psi=lambda t: 1.0,
        action_domain=(0.0, 1.0),
        types=THETA,
        label="expected-cost",
    )


def constant_model():
    """Flow payoff identically 1: weakly but never strictly increasing."""
    return SeparableModel(
        phi0=lambda a, p: 1.0,
        phi1=lambda a, p: 0.0,
        psi=lambda t: 1.0,
        action_domain=(0.0, 1.0),
        types=THETA,
        label="constant",
    )


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or report.when not in ("setup", "call"):
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        _criteria[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    total = 0.0
    for name, (outcome, duration) in sorted(_criteria.items()):
        total += duration
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}  ({duration:.2f}s)")
    terminalreporter.write_line(f"total acceptance time {total:.2f}s")
