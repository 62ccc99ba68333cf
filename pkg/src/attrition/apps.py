"""Applied models: monopoly price signaling, labor market signaling, bargaining.

Each factory returns a :class:`~attrition.core.SeparableModel`.  Composite
actions are packed into one real number:

* labor: ``a = -1`` accepts the best offer (``d = 1``), ``a = e >= 0``
  studies with effort ``e``.  Any ``a < 0`` decodes as accept.
* bargaining: ``a = y >= 0`` rejects the buyer's offer and proposes ``y``;
  ``a = -1 - y <= -1`` accepts and proposes ``y``.  ``a`` in (-1, 0)
  decodes as accept with proposal 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import Belief, SeparableModel, TypeSpace, expected_type
from .errors import NoSolutionError

DEFAULT_TYPES = TypeSpace((1.0, 2.0, 3.0))


# -- price signaling ---------------------------------------------------------


@dataclass(frozen=True)
class PriceSignalingParams:
    """Complaint rate ``lam * a``, fine ``F``, fine probability
    ``1 - E[theta|p] / max(theta)``."""

    lam: float = 0.35
    F: float = 1.0
    theta_space: TypeSpace = DEFAULT_TYPES

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise ValueError(f"lambda must be finite and >= 0, got {self.lam}")
        if not (math.isfinite(self.F) and self.F >= 0):
            raise ValueError(f"F must be finite and >= 0, got {self.F}")
        if self.theta_space.lowest <= 0:
            raise ValueError("price-model types must be strictly positive")


def fine_probability(p: Belief, scale: Optional[float] = None) -> float:
    scale = p.types.values[-1] if scale is None else scale
    return 1.0 - expected_type(p) / scale


def z_factor(p: Belief, lam: float, F: float, scale: Optional[float] = None) -> float:
    """Marginal revenue net of expected fine exposure, ``1 - lam F gamma(p)``."""
    return 1.0 - lam * F * fine_probability(p, scale)


def make_price_model(params: PriceSignalingParams = PriceSignalingParams()) -> SeparableModel:
    types = params.theta_space
    lam, F = params.lam, params.F
    theta_lo = types.lowest
    z_low = z_factor(Belief.degenerate(types, theta_lo), lam, F)
    if z_low < 0:
        raise ValueError(
            f"lambda*F = {lam * F:g} makes the lowest type's bliss price negative"
        )

    def phi0(a, p):
        return a - lam * a * fine_probability(p) * F

    def phi1(a, p):
        return -a * a

    def psi(theta):
        return theta

    def bliss(p, theta):
        return z_factor(p, lam, F) / (2.0 * theta)

    def pooling(q):
        low = q.types.values[q.lowest_supported]
        z0 = z_factor(Belief.degenerate(q.types, low), lam, F)
        z = z_factor(q, lam, F)
        disc = z * z - z0 * z0
        if disc < 0:
            raise NoSolutionError(f"negative discriminant {disc:.3e} in pooling price")
        return (z - math.sqrt(disc)) / (2.0 * low)

    return SeparableModel(
        phi0=phi0,
        phi1=phi1,
        psi=psi,
        action_domain=(0.0, 1.0 / theta_lo),
        types=types,
        label=f"price(lambda={lam:g}, F={F:g})",
        bliss=bliss,
        pooling=pooling,
        costly_side="below",
        params=params,
    )


# -- labor market ------------------------------------------------------------


def _quadratic_cost(e):
    return e * e


def _inverse_ability(theta):
    return 1.0 / theta


@dataclass(frozen=True)
class LaborParams:
    """Education flow cost ``l(e) * m(theta)``; wage ``E[theta | p]``."""

    l: Callable[[float], float] = _quadratic_cost
    m: Callable[[float], float] = _inverse_ability
    r: float = 0.1
    theta_space: TypeSpace = DEFAULT_TYPES
    max_effort: float = 1.0

    def __post_init__(self):
        costs = [self.m(t) for t in self.theta_space.values]
        if any(b >= a for a, b in zip(costs, costs[1:])):
            raise ValueError("m(theta) must be strictly decreasing across types")
        if self.l(0.0) != 0:
            raise ValueError("education cost must satisfy l(0) = 0")
        if not self.r > 0:
            raise ValueError("discount rate must be positive")


def decode_labor(a: float) -> tuple[int, float]:
    return (1, 0.0) if a < 0 else (0, float(a))


def encode_labor(d: int, e: float = 0.0) -> float:
    return -1.0 if d else float(e)


def make_labor_model(params: LaborParams = LaborParams()) -> SeparableModel:
    r = params.r

    def phi0(a, p):
        d, _ = decode_labor(a)
        return d * expected_type(p) / r

    def phi1(a, p):
        d, e = decode_labor(a)
        return -(1 - d) * params.l(e)

    return SeparableModel(
        phi0=phi0,
        phi1=phi1,
        psi=params.m,
        action_domain=(-1.0, params.max_effort),
        types=params.theta_space,
        label="labor",
        params=params,
    )


# -- bargaining --------------------------------------------------------------


def _linear_cost(theta):
    return 0.5 * theta


def _linear_value(theta):
    return theta + 0.5


def _buyer_offer(p):
    return 0.5 * expected_type(p) + 0.25


def _accept_below_expected_value(y, p):
    ev = float(np.dot(p.weights, [_linear_value(t) for t in p.types.values]))
    return 1.0 if y <= ev else 0.0


@dataclass(frozen=True)
class BargainingParams:
    """Seller cost ``c``, buyer value ``v``, buyer-proposer probability
    ``chi`` (scalar or per-period path) and the buyer's Markov strategy:
    offer ``y_B(p)`` and acceptance ``z_B(y, p)``."""

    c: Callable[[float], float] = _linear_cost
    v: Callable[[float], float] = _linear_value
    chi: Union[float, Sequence[float]] = 1.0
    y_B: Callable[[Belief], float] = _buyer_offer
    z_B: Callable[[float, Belief], float] = _accept_below_expected_value
    theta_space: TypeSpace = DEFAULT_TYPES
    max_price: float = 3.0
    check_grid: Optional[Sequence[Belief]] = field(default=None, repr=False)

    def __post_init__(self):
        costs = [self.c(t) for t in self.theta_space.values]
        constant = all(c == costs[0] for c in costs)
        if not constant and any(b <= a for a, b in zip(costs, costs[1:])):
            raise ValueError("c(theta) must be constant or strictly increasing")
        chis = np.atleast_1d(np.asarray(self.chi, dtype=float))
        if np.any((chis < 0) | (chis > 1)):
            raise ValueError("proposer probabilities must lie in [0, 1]")

    @property
    def constant_cost(self) -> bool:
        costs = [self.c(t) for t in self.theta_space.values]
        return all(c == costs[0] for c in costs)

    def chi_at(self, period: int) -> float:
        chis = np.atleast_1d(np.asarray(self.chi, dtype=float))
        return float(chis[min(period, chis.size - 1)])


def decode_bargaining(a: float) -> tuple[float, int]:
    """Scalar action -> (proposal y_S, acceptance z_S)."""
    if a >= 0:
        return float(a), 0
    return max(0.0, -1.0 - a), 1


def encode_bargaining(y: float, accept: int) -> float:
    return -1.0 - y if accept else float(y)


def _check_buyer_monotone(params: BargainingParams, grid: Sequence[Belief]) -> None:
    from .core import Ordering, fosd_compare

    offers = np.linspace(0.0, params.max_price, 13)
    for p in grid:
        for q in grid:
            if fosd_compare(p, q) is not Ordering.DOMINATES:
                continue
            if params.y_B(p) < params.y_B(q) - 1e-9:
                raise ValueError(f"buyer offer decreases in reputation between {p} and {q}")
            for y in offers:
                if params.z_B(y, p) < params.z_B(y, q) - 1e-9:
                    raise ValueError(
                        f"buyer acceptance of {y:g} decreases in reputation between {p} and {q}"
                    )


def make_bargaining_model(params: BargainingParams = BargainingParams(), period: int = 0) -> SeparableModel:
    chi = params.chi_at(period)
    grid = params.check_grid
    if grid is None:
        from .assumptions import default_belief_grid

        grid = default_belief_grid(params.theta_space, per_chain=8)
    _check_buyer_monotone(params, grid)

    def phi0_raw(a, p):
        y, acc = decode_bargaining(a)
        return chi * acc * params.y_B(p) + (1 - chi) * params.z_B(y, p) * y

    def phi1(a, p):
        y, acc = decode_bargaining(a)
        return -chi * acc - (1 - chi) * params.z_B(y, p)

    if params.constant_cost:
        c0 = params.c(params.theta_space.lowest)

        def phi0(a, p):
            return phi0_raw(a, p) + phi1(a, p) * c0

        def psi(theta):
            return 0.0

    else:
        phi0, psi = phi0_raw, params.c

    return SeparableModel(
        phi0=phi0,
        phi1=phi1,
        psi=psi,
        action_domain=(-1.0 - params.max_price, params.max_price),
        types=params.theta_space,
        label=f"bargaining(chi={chi:g})",
        type_independent=params.constant_cost,
        params=params,
    )


def bundled_models() -> dict[str, SeparableModel]:
    """The three applications at their default parameters."""
    return {
        "price": make_price_model(),
        "labor": make_labor_model(),
        "bargaining": make_bargaining_model(),
    }
