"""Incentive verification of attrition candidates.

Values use per-period discounting ``exp(-r dt)`` with flows paid as
``u * dt``; the stationary tail contributes ``u * dt / (1 - exp(-r dt))``.
A deviation sends the belief to a point mass on the lowest type forever,
after which the deviator plays its own bliss action.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .beliefs import off_path_belief
from .constructor import AttritionCandidate
from .core import Belief, SeparableModel, TypeSpace, bliss_action, flow_utility
from .errors import SizeError

DEFAULT_TOL = 1e-6
MAX_HORIZON = 8
MAX_ACTIONS = 6


def tail_factor(r: float, dt: float) -> float:
    """Present value of a unit flow paid every period forever."""
    return dt / -math.expm1(-r * dt)


def pool_flows(c: AttritionCandidate) -> np.ndarray:
    """(steps + 1, n_types) flow of each type along the pooling path."""
    types = c.model.types.values
    return np.array(
        [
            [flow_utility(c.model, float(a), q, th) for th in types]
            for a, q in zip(c.pooling_actions, c.belief_path.entries)
        ]
    )


def pool_values(c: AttritionCandidate) -> np.ndarray:
    """(steps + 1, n_types) continuation values of pooling, by backward recursion."""
    flows = pool_flows(c)
    return kernels.backward_values(
        np.ascontiguousarray(flows[:-1]), flows[-1].copy(), math.exp(-c.r * c.dt), c.dt, tail_factor(c.r, c.dt)
    )


def schedule_value(c: AttritionCandidate, theta: float, t: int) -> float:
    """Value to ``theta`` of pooling from period ``t`` on."""
    if not 0 <= t <= c.steps:
        raise IndexError(f"period {t} outside 0..{c.steps}")
    return float(pool_values(c)[t, c.model.types.index(theta)])


def deviation_value(c: AttritionCandidate, theta: float, t: int = 0) -> float:
    """Best value after any off-path move: revealed as the lowest type, bliss forever."""
    revealed = off_path_belief(c.belief_path[t])
    a = bliss_action(c.model, revealed, theta)
    return flow_utility(c.model, a, revealed, theta) * tail_factor(c.r, c.dt)


class Verdict(enum.Enum):
    VERIFIED = "Verified"
    INDIFFERENCE_FAIL = "IndifferenceFail"
    IC_FAIL = "ICFail"


@dataclass(frozen=True, eq=False)
class Certificate:
    candidate: AttritionCandidate
    tol: float
    v_pool: np.ndarray  # (steps + 1, n_types)
    v_dev: np.ndarray  # (n_types,)
    residuals: np.ndarray  # relative value gap of the lowest type per period
    margins: np.ndarray  # (steps + 1, n_types - 1) for the higher types
    verdict: Verdict
    indifference_failures: tuple[int, ...]
    ic_failures: tuple[tuple[int, float], ...]

    @property
    def verified(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margins)) if self.margins.size else math.inf


def verify_candidate(c: AttritionCandidate, tol: float = DEFAULT_TOL) -> Certificate:
    types = c.model.types.values
    v_pool = pool_values(c)
    v_dev = np.array([deviation_value(c, th) for th in types])
    low = c.model.types.index(c.lowest_type)
    scale = max(1.0, abs(v_dev[low]))
    residuals = (v_pool[:, low] - v_dev[low]) / scale
    margins = v_pool[:, low + 1 :] - v_dev[low + 1 :]

    bad_indiff = tuple(int(t) for t in np.flatnonzero(np.abs(residuals) > tol))
    bad_ic = tuple(
        (int(t), types[low + 1 + int(j)]) for t, j in zip(*np.nonzero(margins < -tol))
    )
    if bad_indiff:
        verdict = Verdict.INDIFFERENCE_FAIL
    elif bad_ic:
        verdict = Verdict.IC_FAIL
    else:
        verdict = Verdict.VERIFIED
    return Certificate(
        candidate=c,
        tol=tol,
        v_pool=v_pool,
        v_dev=v_dev,
        residuals=residuals,
        margins=margins,
        verdict=verdict,
        indifference_failures=bad_indiff,
        ic_failures=bad_ic,
    )


def certificate_report(cert: Certificate) -> str:
    """Line-oriented ``key: value`` report of a certificate."""
    c = cert.candidate
    types = c.model.types.values
    lines = [
        f"verdict: {cert.verdict.value}",
        f"model: {c.model.label}",
        f"dt: {c.dt:.12g}",
        f"r: {c.r:.12g}",
        f"t_bar: {c.t_bar:.12g}",
        f"periods: {c.steps + 1}",
        f"tolerance: {cert.tol:.12g}",
        f"separating_action: {c.separating_action:.12g}",
        f"pooling_action_start: {c.pooling_actions[0]:.12g}",
        f"pooling_action_end: {c.pooling_actions[-1]:.12g}",
        f"max_flow_residual: {float(np.max(np.abs(c.residuals))):.12g}",
        f"max_value_residual: {cert.max_residual:.12g}",
        f"min_ic_margin: {cert.min_margin:.12g}",
    ]
    for k, th in enumerate(types):
        lines.append(f"v_dev_theta_{k + 1}: {cert.v_dev[k]:.12g}")
    low = c.model.types.index(c.lowest_type)
    for j in range(cert.margins.shape[1]):
        col = cert.margins[:, j]
        k = low + 1 + j
        lines.append(f"ic_margin_theta_{k + 1}_min: {col.min():.12g}")
        lines.append(f"ic_margin_theta_{k + 1}_at_t_bar: {col[-1]:.12g}")
    lines.append(f"indifference_failures: {','.join(map(str, cert.indifference_failures)) or 'none'}")
    ic = ",".join(f"{t}@theta={th:g}" for t, th in cert.ic_failures)
    lines.append(f"ic_failures: {ic or 'none'}")
    return "\n".join(lines) + "\n"


# -- brute-force oracle ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SmallGame:
    """Finite game tree for exhaustive enumeration.

    ``flows[h, s, k, j]`` is the flow of type j taking action k in belief
    state s at step h; ``transition[h, s, k]`` the next state;
    ``terminal[s, j]`` the continuation value after the last step.
    """

    types: TypeSpace
    actions: np.ndarray  # (horizon, n_actions) action values per step
    flows: np.ndarray
    transition: np.ndarray
    terminal: np.ndarray
    dt: float
    r: float

    def __post_init__(self):
        H, S, A, n = self.flows.shape
        if H > MAX_HORIZON or A > MAX_ACTIONS:
            raise SizeError(f"game of horizon {H} with {A} actions exceeds enumeration bounds")
        if self.transition.shape != (H, S, A) or self.terminal.shape != (S, n):
            raise ValueError("flow, transition and terminal tables disagree in shape")
        if not (np.all(np.isfinite(self.flows)) and np.all(np.isfinite(self.terminal))):
            raise ValueError("game tables must be finite")

    @property
    def horizon(self) -> int:
        return self.flows.shape[0]

    @classmethod
    def build(
        cls,
        model: SeparableModel,
        actions: Sequence[Sequence[float]],
        posteriors: Sequence[Sequence[Sequence[Belief]]],
        transition: Sequence,
        terminal: Sequence,
        dt: float,
        r: float,
    ) -> "SmallGame":
        """Tabulate flows from ``model``; ``posteriors[h][s][k]`` is the belief
        the receiver holds after action k in state s at step h."""
        acts = np.asarray(actions, dtype=float)
        if acts.ndim != 2:
            acts = acts.reshape(len(actions), -1) if len(actions) else np.zeros((0, 1))
        H, A = acts.shape
        if H > MAX_HORIZON or A > MAX_ACTIONS:
            raise SizeError(f"game of horizon {H} with {A} actions exceeds enumeration bounds")
        S = len(posteriors[0]) if H else np.asarray(terminal).shape[0]
        types = model.types.values
        flows = np.empty((H, S, A, len(types)))
        for h, s, k in itertools.product(range(H), range(S), range(A)):
            p = posteriors[h][s][k]
            flows[h, s, k] = [flow_utility(model, acts[h, k], p, th) for th in types]
        return cls(
            types=model.types,
            actions=acts,
            flows=flows,
            transition=np.asarray(transition, dtype=np.int64).reshape(H, S, A),
            terminal=np.asarray(terminal, dtype=float),
            dt=float(dt),
            r=float(r),
        )


def brute_force_value(g: SmallGame, theta: float, t: int = 0, state: int = 0) -> float:
    """Maximum discounted payoff over all action sequences from step ``t``."""
    if not 0 <= t <= g.horizon:
        raise IndexError(f"step {t} outside 0..{g.horizon}")
    j = g.types.index(theta)
    disc = np.exp(-g.r * g.dt * np.arange(g.horizon - t + 1))
    return float(
        kernels.enumerate_best(
            np.ascontiguousarray(g.flows[t:, :, :, j]),
            np.ascontiguousarray(g.transition[t:]),
            np.ascontiguousarray(g.terminal[:, j]),
            disc,
            g.dt,
            state,
        )
    )


def encode_candidate(c: AttritionCandidate, separate: bool = True) -> SmallGame:
    """SmallGame for the candidate's attrition window (steps <= 8).

    State 0 is on path, state 1 is "revealed as the lowest type".  Actions
    are the period's pooling action and, when ``separate``, the separating
    action.  Past the window every state continues stationary: pooling at the
    frozen belief, or the better of the two actions once revealed.
    """
    m = c.model
    H = c.steps
    revealed = off_path_belief(c.belief_path[0])
    G = tail_factor(c.r, c.dt)
    q_tail, a_tail = c.tail
    types = m.types.values
    acts = [[c.pooling_actions[h]] + ([c.separating_action] if separate else []) for h in range(H)]
    A = 2 if separate else 1
    posteriors = [
        [[c.belief_path[h]] + [revealed] * (A - 1), [revealed] * A] for h in range(H)
    ]
    transition = [[[0] + [1] * (A - 1), [1] * A] for _ in range(H)]
    tail_actions = [a_tail] + ([c.separating_action] if separate else [])
    terminal = [
        [flow_utility(m, a_tail, q_tail, th) * G for th in types],
        [max(flow_utility(m, a, revealed, th) for a in tail_actions) * G for th in types],
    ]
    return SmallGame.build(m, acts, posteriors, transition, terminal, c.dt, c.r)
