"""Attrition equilibrium candidates.

The separating action is the lowest type's bliss action once revealed.  At
every attrition period the pooling action makes the lowest type exactly
indifferent, flow for flow, between pooling (at the posterior reached by
pooling) and separating.  From ``t_bar`` on, everybody pools forever at the
frozen belief.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .beliefs import BeliefPath, Intensity, unravel_beliefs
from .core import Belief, SeparableModel, bliss_action, flow_utility
from .errors import NoSolutionError, ParameterError

ROOT_XTOL = 1e-12
RESIDUAL_TOL = 1e-10
COLLAPSE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class AttritionCandidate:
    model: SeparableModel
    dt: float
    r: float
    t_bar: float
    belief_path: BeliefPath
    pooling_actions: np.ndarray
    separating_action: float
    residuals: np.ndarray

    @property
    def sigma(self) -> np.ndarray:
        return self.belief_path.sigma

    @property
    def steps(self) -> int:
        return len(self.belief_path) - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.dt

    @property
    def tail(self) -> tuple[Belief, float]:
        return self.belief_path[-1], float(self.pooling_actions[-1])

    @property
    def lowest_type(self) -> float:
        q = self.belief_path[0]
        return q.types.values[q.lowest_supported]


def separating_action(m: SeparableModel) -> float:
    low = m.types.lowest
    return bliss_action(m, Belief.degenerate(m.types, low), low)


def indifference_residual(m: SeparableModel, a: float, q: Belief, a_sep: float) -> float:
    """Pooling flow at ``q`` minus separating flow at the revealed belief,
    both for the lowest supported type."""
    low = q.types.values[q.lowest_supported]
    revealed = Belief.degenerate(q.types, low)
    return flow_utility(m, a, q, low) - flow_utility(m, a_sep, revealed, low)


def pooling_action(
    m: SeparableModel,
    q: Belief,
    a_sep: float,
    bracket: Optional[tuple[float, float]] = None,
) -> float:
    """Action solving the lowest type's flow indifference at posterior ``q``.

    The root is taken on the model's costly side of the lowest type's bliss
    action at ``q``.  Raises :class:`NoSolutionError` when no root exists or
    when, at a non-degenerate belief, the root collapses onto the bliss action
    (reputation carries no value, so pooling cannot be costly).
    """
    low = q.types.values[q.lowest_supported]
    if m.pooling is not None and bracket is None:
        a = float(m.pooling(q))
    else:
        a = _bisect_pooling(m, q, a_sep, low, bracket)
    if not q.is_degenerate:
        peak = bliss_action(m, q, low)
        if abs(a - peak) <= COLLAPSE_TOL:
            raise NoSolutionError(
                f"pooling root {a:.9g} coincides with the bliss action: reputation is payoff-irrelevant"
            )
    return a


def _bisect_pooling(m, q, a_sep, low, bracket):
    if bracket is None:
        peak = bliss_action(m, q, low)
        lo, hi = m.action_domain
        bracket = (lo, peak) if m.costly_side == "below" else (peak, hi)
    a, b = (float(x) for x in bracket)

    def g(x):
        return indifference_residual(m, x, q, a_sep)

    ga, gb = g(a), g(b)
    for end, val in ((a, ga), (b, gb)):
        if val == 0.0:
            return end
    if np.sign(ga) == np.sign(gb):
        raise NoSolutionError(
            f"indifference residual has no sign change on [{a:.6g}, {b:.6g}] ({ga:.3e}, {gb:.3e})"
        )
    return float(brentq(g, a, b, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps))


def build_attrition(
    m: SeparableModel,
    p_terminal: Belief,
    sigma: Intensity,
    dt: float,
    r: float,
    t_bar: float,
) -> AttritionCandidate:
    """Unravel beliefs back from ``p_terminal`` and price every period.

    ``p_terminal`` is the posterior after the pooling action at ``t_bar``.
    Only the lowest type's indifference is guaranteed; the higher types'
    incentives are checked by :func:`attrition.verifier.verify_candidate`.
    """
    if not (dt > 0 and np.isfinite(dt)):
        raise ParameterError(f"dt must be positive, got {dt!r}")
    if not (r > 0 and np.isfinite(r)):
        raise ParameterError(f"r must be positive, got {r!r}")
    steps = int(round(t_bar / dt))
    if steps < 0 or abs(steps * dt - t_bar) > 1e-9:
        raise ParameterError(f"t_bar={t_bar!r} is not a nonnegative multiple of dt={dt!r}")

    path = unravel_beliefs(p_terminal, sigma, dt, steps)
    a_sep = separating_action(m)
    actions = np.empty(steps + 1)
    residuals = np.empty(steps + 1)
    for t, q in enumerate(path.entries):
        try:
            actions[t] = pooling_action(m, q, a_sep)
        except NoSolutionError as exc:
            raise NoSolutionError(f"period {t}: {exc}", period=t) from exc
        residuals[t] = indifference_residual(m, actions[t], q, a_sep)
        if abs(residuals[t]) >= RESIDUAL_TOL:
            raise NoSolutionError(
                f"period {t}: indifference residual {residuals[t]:.3e} too large", period=t
            )
    actions.setflags(write=False)
    residuals.setflags(write=False)
    return AttritionCandidate(
        model=m,
        dt=float(dt),
        r=float(r),
        t_bar=steps * float(dt),
        belief_path=path,
        pooling_actions=actions,
        separating_action=a_sep,
        residuals=residuals,
    )
