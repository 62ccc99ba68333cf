"""Game primitives: type spaces, beliefs, separable flow payoffs, bliss actions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DimensionError, DomainError, EvaluationError

SIMPLEX_TOL = 1e-12
ACTION_TOL = 1e-6


@dataclass(frozen=True)
class TypeSpace:
    """Ordered finite grid of sender types theta_1 < ... < theta_n."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("a type space needs at least 2 types")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("type values must be finite")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("type values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values)

    @property
    def lowest(self) -> float:
        return self.values[0]

    def index(self, theta: float) -> int:
        try:
            return self.values.index(float(theta))
        except ValueError:
            raise DimensionError(f"{theta!r} is not a type in {self.values}") from None


@dataclass(frozen=True, eq=False)
class Belief:
    """Probability vector over a TypeSpace."""

    types: TypeSpace
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (len(self.types),):
            raise DimensionError(f"expected {len(self.types)} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError(f"belief weights must be finite and nonnegative: {w}")
        if abs(w.sum() - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"belief weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def normalized(cls, types: TypeSpace, weights: Sequence[float]) -> "Belief":
        w = np.asarray(weights, dtype=float)
        return cls(types, w / w.sum())

    @classmethod
    def degenerate(cls, types: TypeSpace, theta: float) -> "Belief":
        w = np.zeros(len(types))
        w[types.index(theta)] = 1.0
        return cls(types, w)

    @classmethod
    def uniform(cls, types: TypeSpace) -> "Belief":
        return cls(types, np.full(len(types), 1.0 / len(types)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.weights > 0))

    @property
    def lowest_supported(self) -> int:
        return self.support[0]

    @property
    def is_degenerate(self) -> bool:
        return len(self.support) == 1

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.weights)

    def allclose(self, other: "Belief", atol: float = SIMPLEX_TOL) -> bool:
        _check_same_space(self, other)
        return bool(np.allclose(self.weights, other.weights, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"Belief({np.array2string(self.weights, precision=6)})"


def _check_same_space(p: Belief, q: Belief) -> None:
    if p.types != q.types:
        raise DimensionError("beliefs are over different type spaces")


class Ordering(enum.Enum):
    DOMINATES = "Dominates"
    DOMINATED = "Dominated"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def fosd_compare(p: Belief, q: Belief) -> Ordering:
    """First-order stochastic dominance comparison of two beliefs via their CDFs."""
    _check_same_space(p, q)
    diff = p.cdf() - q.cdf()
    below = np.any(diff < -SIMPLEX_TOL)
    above = np.any(diff > SIMPLEX_TOL)
    if below and above:
        return Ordering.INCOMPARABLE
    if below:
        return Ordering.DOMINATES
    if above:
        return Ordering.DOMINATED
    return Ordering.EQUAL


def expected_type(p: Belief) -> float:
    return float(np.dot(p.weights, p.types.array))


Phi = Callable[[float, Belief], float]


@dataclass(frozen=True, eq=False)
class SeparableModel:
    """Reduced-form flow payoff ``phi0(a, p) + phi1(a, p) * psi(theta)``.

    ``bliss`` and ``pooling`` are optional closed forms registered by an
    application; ``costly_side`` says on which side of the lowest type's
    bliss action the pooling root lives ("below" or "above").  A model built
    with ``flow`` is treated as non-separable: the decomposition is unknown
    and sufficient-condition checks do not apply.
    """

    phi0: Optional[Phi]
    phi1: Optional[Phi]
    psi: Optional[Callable[[float], float]]
    action_domain: tuple[float, float]
    types: TypeSpace
    label: str = "model"
    bliss: Optional[Callable[[Belief, float], float]] = None
    pooling: Optional[Callable[[Belief], float]] = None
    costly_side: str = "below"
    flow: Optional[Callable[[float, Belief, float], float]] = None
    type_independent: bool = False
    params: object = field(default=None, repr=False)

    def __post_init__(self):
        lo, hi = (float(x) for x in self.action_domain)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ValueError(f"bad action domain {self.action_domain}")
        object.__setattr__(self, "action_domain", (lo, hi))
        if self.costly_side not in ("below", "above"):
            raise ValueError("costly_side must be 'below' or 'above'")
        if self.flow is None and None in (self.phi0, self.phi1, self.psi):
            raise ValueError("a separable model needs phi0, phi1 and psi")

    @property
    def separable(self) -> bool:
        return self.flow is None

    def contains(self, a: float) -> bool:
        lo, hi = self.action_domain
        return lo <= a <= hi


def flow_utility(m: SeparableModel, a: float, p: Belief, theta: float) -> float:
    if not m.contains(a):
        raise DomainError(f"action {a!r} outside {m.action_domain} for {m.label}")
    if m.flow is not None:
        val = m.flow(a, p, theta)
    else:
        val = m.phi0(a, p) + m.phi1(a, p) * m.psi(theta)
    val = float(val)
    if not math.isfinite(val):
        raise EvaluationError(f"non-finite flow utility at a={a!r}, p={p!r}, theta={theta!r}")
    return val


def _grid_argmax(m: SeparableModel, p: Belief, theta: float, resolution: float, points: int) -> float:
    lo, hi = m.action_domain
    while True:
        xs = np.linspace(lo, hi, points)
        vals = np.array([flow_utility(m, float(x), p, theta) for x in xs])
        k = int(np.argmax(vals))  # first maximizer: lowest-action tie-breaking
        step = (hi - lo) / (points - 1)
        if step <= resolution:
            return float(xs[k])
        lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, points - 1)]


def bliss_action(
    m: SeparableModel,
    p: Belief,
    theta: float,
    *,
    resolution: float = ACTION_TOL / 10,
    points: int = 201,
    use_closed_form: bool = True,
) -> float:
    """Myopically optimal action of ``theta`` at belief ``p``.

    Uses the model's closed form when registered, otherwise a zooming grid
    search down to ``resolution``.
    """
    if use_closed_form and m.bliss is not None:
        return float(m.bliss(p, theta))
    if m.action_domain[0] == m.action_domain[1]:
        return m.action_domain[0]
    return _grid_argmax(m, p, theta, resolution, points)
