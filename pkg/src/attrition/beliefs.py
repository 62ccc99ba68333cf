"""Reputation dynamics along a pooling path.

Only the lowest supported type ever separates: after observing the pooling
action its odds against every other type shrink by ``1 - sigma * dt`` while
the other types keep their relative proportions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import Belief, Ordering, fosd_compare
from .errors import DegenerateAttritionError, ParameterError

Intensity = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class BeliefPath:
    """Beliefs q_0, ..., q_T on a grid of step ``dt``.

    ``sigma[t]`` is the separation intensity of the transition from entry t
    to entry t + 1; the last entry carries 0 (nothing separates afterwards).
    """

    dt: float
    entries: tuple[Belief, ...]
    sigma: np.ndarray

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a belief path needs at least one entry")
        types = self.entries[0].types
        if any(b.types != types for b in self.entries):
            raise ValueError("all beliefs in a path must share one type space")
        sig = np.array(self.sigma, dtype=float)
        if sig.shape != (len(self.entries),):
            raise ValueError("sigma must have one entry per belief")
        sig.setflags(write=False)
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "sigma", sig)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, t: int) -> Belief:
        return self.entries[t]

    @property
    def weights(self) -> np.ndarray:
        return np.vstack([b.weights for b in self.entries])

    def check_invariants(self) -> list[str]:
        """Return a list of violated path invariants (empty when all hold)."""
        problems = []
        for t in range(len(self) - 1):
            now, nxt = self.entries[t], self.entries[t + 1]
            if not set(nxt.support) <= set(now.support):
                problems.append(f"support grows at t={t}")
            if fosd_compare(nxt, now) not in (Ordering.DOMINATES, Ordering.EQUAL):
                problems.append(f"belief does not improve at t={t}")
            if self.sigma[t] > 0 and nxt.weights[0] > now.weights[0] + 1e-15:
                problems.append(f"lowest-type weight rises at t={t}")
        return problems


def _check_step(sigma: float, dt: float) -> float:
    s = float(sigma) * float(dt)
    if not np.isfinite(s) or s < 0:
        raise ParameterError(f"separation probability sigma*dt={s!r} must be >= 0")
    if s >= 1:
        raise ParameterError(f"separation probability sigma*dt={s!r} must be < 1")
    return s


def bayes_pool_update(p: Belief, sigma: float, dt: float) -> Belief:
    """Posterior after the pooling action when the lowest supported type
    separates with probability ``sigma * dt``."""
    s = _check_step(sigma, dt)
    low = p.lowest_supported
    w = p.weights.copy()
    w[low] *= 1.0 - s
    # the sum equals 1 - p_low * s exactly; using it keeps long iterations on the simplex
    return Belief(p.types, w / w.sum())


def _intensity_path(sigma: Intensity, steps: int) -> np.ndarray:
    sig = np.asarray(sigma, dtype=float)
    if sig.ndim == 0:
        sig = np.full(steps, float(sig))
    if sig.shape != (steps,):
        raise ParameterError(f"intensity path has length {sig.size}, expected {steps}")
    return sig


def unravel_beliefs(p_terminal: Belief, sigma: Intensity, dt: float, steps: int) -> BeliefPath:
    """Belief path ending at ``p_terminal`` such that each entry updates into
    the next under :func:`bayes_pool_update`.

    Works in odds space: the lowest type's odds against the rest are
    inflated by ``1 / (1 - sigma_t * dt)`` per step going backwards.
    """
    if steps < 0:
        raise ParameterError("steps must be nonnegative")
    sig = _intensity_path(sigma, steps)
    keep = np.array([1.0 - _check_step(s, dt) for s in sig])
    w_end = p_terminal.weights
    if w_end[0] <= 0:
        raise DegenerateAttritionError("terminal belief puts no mass on the lowest type")
    # cumulative survival factor from t to the terminal period
    survive = np.ones(steps + 1)
    if steps:
        survive[:-1] = np.cumprod(keep[::-1])[::-1]
    rows = np.tile(w_end, (steps + 1, 1))
    # scale the upper types down rather than the lowest up: no overflow when survive underflows
    rows[:, 1:] *= survive[:, None]
    rows /= rows.sum(axis=1, keepdims=True)
    rows[-1] = w_end
    entries = tuple(Belief(p_terminal.types, row) for row in rows)
    return BeliefPath(dt=float(dt), entries=entries, sigma=np.append(sig, 0.0))


def forward_path(p0: Belief, sigma: Intensity, dt: float, steps: int) -> BeliefPath:
    """Iterate :func:`bayes_pool_update` forward from ``p0``."""
    sig = _intensity_path(sigma, steps)
    entries = [p0]
    for s in sig:
        entries.append(bayes_pool_update(entries[-1], s, dt))
    return BeliefPath(dt=float(dt), entries=tuple(entries), sigma=np.append(sig, 0.0))


def off_path_belief(p: Belief) -> Belief:
    """Pessimistic off-path belief: a point mass on the lowest supported type."""
    return Belief.degenerate(p.types, p.types.values[p.lowest_supported])
