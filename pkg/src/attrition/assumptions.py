"""Monotonicity (MON) and single-crossing (SC) checks on finite grids.

Each check returns an :class:`AssumptionReport`.  A ``Fails`` verdict always
carries witnesses that reproduce the violation when re-evaluated with
:meth:`Witness.holds_violation`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .beliefs import off_path_belief, unravel_beliefs
from .core import SIMPLEX_TOL, Belief, Ordering, SeparableModel, TypeSpace, flow_utility, fosd_compare
from .errors import ConfigurationError

WEAK_SLACK = 1e-9
STRICT_MARGIN = 1e-12
SC_ZERO = 1e-9
MAX_WITNESSES = 20


class Assumption(enum.Enum):
    MON = "MON"
    SC = "SC"


class Method(enum.Enum):
    SUFFICIENT = "Sufficient"
    DIRECT = "Direct"


class Verdict(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class Witness:
    """One violated inequality.

    ``kind`` selects how :meth:`holds_violation` re-evaluates it:

    * ``psi_negative``: ``psi(theta) < 0``
    * ``phi0`` / ``phi1``: component at ``(action, high)`` below ``(action, low)``
    * ``weak``: flow at ``high`` below flow at ``low`` for ``theta``
    * ``strict``: ``high`` dominates ``low`` (a point mass on ``theta``) but
      the flow at ``high`` is not strictly above
    * ``psi_flat``: consecutive psi values not strictly ordered
    * ``sc_crossing``: discounted payoff difference changes sign twice
    """

    kind: str
    values: tuple
    action: Optional[float] = None
    high: Optional[Belief] = None
    low: Optional[Belief] = None
    theta: Optional[float] = None
    paths: Optional[tuple[int, int]] = None
    pair: Optional["StrategySet"] = None
    dt: float = 0.0
    r: float = 0.0

    def holds_violation(self, m: SeparableModel) -> bool:
        k = self.kind
        if k == "psi_negative":
            return m.psi(self.theta) < 0
        if k in ("phi0", "phi1"):
            f = m.phi0 if k == "phi0" else m.phi1
            return f(self.action, self.high) < f(self.action, self.low) - WEAK_SLACK
        if k == "weak":
            hi = flow_utility(m, self.action, self.high, self.theta)
            lo = flow_utility(m, self.action, self.low, self.theta)
            return hi < lo - WEAK_SLACK
        if k == "strict":
            hi = flow_utility(m, self.action, self.high, self.theta)
            lo = flow_utility(m, self.action, self.low, self.theta)
            return not hi > lo + STRICT_MARGIN
        if k == "psi_flat":
            diffs = np.diff([m.psi(t) for t in m.types.values])
            return not (np.all(diffs > 0) or np.all(diffs < 0))
        if k == "sc_crossing":
            U, _ = discounted_differences(m, self.pair, self.dt, self.r)
            return int(kernels.sign_changes(U, SC_ZERO)[0]) > 1
        raise ValueError(f"unknown witness kind {k!r}")


@dataclass(frozen=True, eq=False)
class AssumptionReport:
    assumption: Assumption
    method: Method
    verdict: Verdict
    witnesses: tuple[Witness, ...] = ()
    grid_spec: str = ""
    violations: int = 0
    parts: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def verify_witnesses(self, m: SeparableModel) -> bool:
        return all(w.holds_violation(m) for w in self.witnesses)

    def summary(self) -> str:
        extra = "".join(f" {k}={v.value}" for k, v in self.parts.items())
        return (
            f"{self.assumption.value}/{self.method.value}: {self.verdict.value}"
            f" ({self.violations} violations){extra} [{self.grid_spec}]"
        )


# -- grids -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CheckGrid:
    beliefs: tuple[Belief, ...]
    actions: np.ndarray
    description: str = ""

    def __post_init__(self):
        if not self.beliefs or len(self.actions) == 0:
            raise ConfigurationError("assumption checks need a nonempty belief and action grid")


def default_belief_grid(types: TypeSpace, per_chain: int = 50, chains: int = 5) -> list[Belief]:
    """FOSD chains: each base belief is mixed toward the top point mass.

    Bases cycle through the bottom point mass, the uniform belief, linearly
    decreasing and increasing weights, and an even split of the two lowest
    types.  Mixing toward the top type is FOSD-increasing along each chain.
    """
    n = len(types)
    top = np.zeros(n)
    top[-1] = 1.0
    bottom = np.zeros(n)
    bottom[0] = 1.0
    two_low = np.zeros(n)
    two_low[:2] = 0.5
    dec = np.arange(n, 0, -1, dtype=float)
    inc = np.arange(1, n + 1, dtype=float)
    bases = [bottom, np.full(n, 1.0 / n), dec / dec.sum(), inc / inc.sum(), two_low]
    grid = []
    for k in range(chains):
        base = bases[k % len(bases)]
        for s in np.linspace(0.0, 1.0, per_chain):
            w = (1 - s) * base + s * top
            grid.append(Belief(types, w / w.sum()))
    return grid


def interior_actions(domain: tuple[float, float], n: int = 50) -> np.ndarray:
    """Cell midpoints of the action domain; endpoints are excluded."""
    lo, hi = domain
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def default_grid(m: SeparableModel, per_chain: int = 50, chains: int = 5, n_actions: int = 50) -> CheckGrid:
    return CheckGrid(
        beliefs=tuple(default_belief_grid(m.types, per_chain, chains)),
        actions=interior_actions(m.action_domain, n_actions),
        description=f"{chains} FOSD chains x {per_chain} beliefs, {n_actions} interior actions",
    )


def _dominance_pairs(beliefs: Sequence[Belief]) -> np.ndarray:
    cdfs = np.vstack([b.cdf() for b in beliefs])
    dom = kernels.dominance_matrix(cdfs, SIMPLEX_TOL)
    return np.argwhere(dom).astype(np.int64)


def _table(f, actions, beliefs) -> np.ndarray:
    return np.array([[float(f(float(a), b)) for a in actions] for b in beliefs])


def _collect(mask: np.ndarray, pairs: np.ndarray, make) -> tuple[int, list[Witness]]:
    hits = np.argwhere(mask)
    return len(hits), [make(pairs[k], a) for k, a in hits[:MAX_WITNESSES]]


# -- MON ---------------------------------------------------------------------


def check_mon_sufficient(m: SeparableModel, grid: Optional[CheckGrid] = None) -> AssumptionReport:
    """psi >= 0 on the types and phi0, phi1 weakly FOSD-increasing on the grid."""
    grid = grid or default_grid(m)
    if not m.separable:
        return AssumptionReport(Assumption.MON, Method.SUFFICIENT, Verdict.INCONCLUSIVE, grid_spec="non-separable model")
    witnesses = [
        Witness("psi_negative", (m.psi(t),), theta=t) for t in m.types.values if m.psi(t) < 0
    ]
    count = len(witnesses)
    pairs = _dominance_pairs(grid.beliefs)
    for name, f in (("phi0", m.phi0), ("phi1", m.phi1)):
        tab = _table(f, grid.actions, grid.beliefs)
        mask = kernels.mon_violations(tab, pairs, WEAK_SLACK)

        def make(pair, a, name=name, tab=tab):
            i, j = pair
            return Witness(
                name,
                (tab[i, a], tab[j, a]),
                action=float(grid.actions[a]),
                high=grid.beliefs[i],
                low=grid.beliefs[j],
            )

        n, ws = _collect(mask, pairs, make)
        count += n
        witnesses += ws
    verdict = Verdict.FAILS if count else Verdict.HOLDS
    return AssumptionReport(
        Assumption.MON,
        Method.SUFFICIENT,
        verdict,
        tuple(witnesses[:MAX_WITNESSES]),
        grid.description,
        count,
    )


def check_mon_direct(m: SeparableModel, grid: Optional[CheckGrid] = None) -> AssumptionReport:
    """Flow payoff weakly FOSD-increasing on the grid, and strictly so relative
    to each type's own point mass.

    ``parts`` reports the weak and strict halves separately; the overall
    verdict holds only when both do.
    """
    grid = grid or default_grid(m)
    pairs = _dominance_pairs(grid.beliefs)
    weak_count = strict_count = 0
    weak_ws: list[Witness] = []
    strict_ws: list[Witness] = []
    for theta in m.types.values:
        tab = _table(lambda a, p: flow_utility(m, a, p, theta), grid.actions, grid.beliefs)
        mask = kernels.mon_violations(tab, pairs, WEAK_SLACK)

        def make(pair, a, tab=tab, theta=theta):
            i, j = pair
            return Witness(
                "weak",
                (tab[i, a], tab[j, a]),
                action=float(grid.actions[a]),
                high=grid.beliefs[i],
                low=grid.beliefs[j],
                theta=theta,
            )

        n, ws = _collect(mask, pairs, make)
        weak_count += n
        weak_ws += ws

        point = Belief.degenerate(m.types, theta)
        ref = np.array([flow_utility(m, float(a), point, theta) for a in grid.actions])
        for b, p in enumerate(grid.beliefs):
            order = fosd_compare(p, point)
            if order is Ordering.DOMINATES:
                bad = ~(tab[b] > ref + STRICT_MARGIN)
                hi, lo, hvals, lvals = p, point, tab[b], ref
            elif order is Ordering.DOMINATED:
                bad = ~(tab[b] < ref - STRICT_MARGIN)
                hi, lo, hvals, lvals = point, p, ref, tab[b]
            else:
                continue
            for a in np.flatnonzero(bad):
                strict_count += 1
                if len(strict_ws) < MAX_WITNESSES:
                    strict_ws.append(
                        Witness(
                            "strict",
                            (hvals[a], lvals[a]),
                            action=float(grid.actions[a]),
                            high=hi,
                            low=lo,
                            theta=theta,
                        )
                    )
    weak = Verdict.FAILS if weak_count else Verdict.HOLDS
    strict = Verdict.FAILS if strict_count else Verdict.HOLDS
    if weak is Verdict.FAILS or strict is Verdict.FAILS:
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.HOLDS if m.separable else Verdict.INCONCLUSIVE
    return AssumptionReport(
        Assumption.MON,
        Method.DIRECT,
        verdict,
        tuple((weak_ws + strict_ws)[:MAX_WITNESSES]),
        grid.description,
        weak_count + strict_count,
        {"weak": weak, "strict": strict},
    )


# -- SC ----------------------------------------------------------------------


def check_sc_sufficient(m: SeparableModel) -> AssumptionReport:
    """psi strictly monotone across the type grid (outcomes are uninformative)."""
    spec = f"{len(m.types)} types"
    if not m.separable:
        return AssumptionReport(Assumption.SC, Method.SUFFICIENT, Verdict.INCONCLUSIVE, grid_spec="non-separable model")
    if m.type_independent:
        return AssumptionReport(Assumption.SC, Method.SUFFICIENT, Verdict.HOLDS, grid_spec=spec + ", type-independent flow")
    psi = np.array([m.psi(t) for t in m.types.values], dtype=float)
    diffs = np.diff(psi)
    if np.all(diffs > 0) or np.all(diffs < 0):
        return AssumptionReport(Assumption.SC, Method.SUFFICIENT, Verdict.HOLDS, grid_spec=spec)
    return AssumptionReport(
        Assumption.SC,
        Method.SUFFICIENT,
        Verdict.FAILS,
        (Witness("psi_flat", tuple(psi)),),
        spec,
        1,
    )


@dataclass(frozen=True, eq=False)
class StrategySet:
    """Finite family of deterministic action paths with their belief paths."""

    actions: tuple[np.ndarray, ...]
    beliefs: tuple[tuple[Belief, ...], ...]
    description: str = ""


def attrition_family(
    pool_actions: Sequence[float],
    pool_beliefs: Sequence[Belief],
    sep_action: float,
    description: str = "",
) -> StrategySet:
    """Strategies "pool for s periods, then separate forever", s = 0..L.

    Separating reveals the lowest supported type for good.
    """
    L = len(pool_actions)
    revealed = off_path_belief(pool_beliefs[0])
    acts, bels = [], []
    for s in range(L + 1):
        acts.append(np.array([pool_actions[k] if k < s else sep_action for k in range(L)], dtype=float))
        bels.append(tuple(pool_beliefs[k] if k < s else revealed for k in range(L)))
    return StrategySet(tuple(acts), tuple(bels), description or f"attrition family, {L} periods")


def generic_family(
    m: SeparableModel,
    pool_action: float,
    sep_action: float,
    periods: int = 20,
    sigma: float = 0.5,
    dt: float = 0.1,
) -> StrategySet:
    """Attrition family with a constant pooling action along a belief path
    unravelled from the uniform belief."""
    path = unravel_beliefs(Belief.uniform(m.types), sigma, dt, periods - 1)
    return attrition_family(
        [pool_action] * periods,
        path.entries,
        sep_action,
        f"attrition family, {periods} periods, pool={pool_action:g}, separate={sep_action:g}",
    )


def discounted_differences(
    m: SeparableModel, strategies: StrategySet, dt: float, r: float
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Lifetime payoff difference of every strategy pair, per type.

    Returns ``(U, pairs)`` where ``U[k, j]`` is path ``pairs[k][1]`` minus
    path ``pairs[k][0]`` for type j.
    """
    lengths = {len(a) for a in strategies.actions} | {len(b) for b in strategies.beliefs}
    if len(lengths) != 1:
        raise ConfigurationError(f"strategy paths have mismatched lengths {sorted(lengths)}")
    L = lengths.pop()
    types = m.types.values
    flows = np.array(
        [
            [[flow_utility(m, float(a), p, th) for th in types] for a, p in zip(acts, bels)]
            for acts, bels in zip(strategies.actions, strategies.beliefs)
        ]
    ).reshape(len(strategies.actions), L, len(types))
    disc = np.exp(-r * dt * np.arange(L))
    totals = kernels.discounted_totals(flows, disc, dt)
    pairs = [(i, j) for i in range(len(totals)) for j in range(i + 1, len(totals))]
    U = np.array([totals[j] - totals[i] for i, j in pairs]).reshape(len(pairs), len(types))
    return U, pairs


def check_sc_direct(
    m: SeparableModel,
    strategies: StrategySet,
    dt: float,
    r: float,
    horizon: Optional[int] = None,
) -> AssumptionReport:
    """Every pairwise lifetime-payoff difference crosses zero at most once in
    the type, or is identically zero (entries below 1e-9 count as zero)."""
    if not strategies.actions:
        raise ConfigurationError("empty strategy set")
    L = len(strategies.actions[0])
    if horizon is not None and L > horizon:
        raise ConfigurationError(f"paths of length {L} exceed horizon {horizon}")
    U, pairs = discounted_differences(m, strategies, dt, r)
    changes = kernels.sign_changes(U, SC_ZERO) if len(pairs) else np.zeros(0, dtype=np.int64)
    bad = np.flatnonzero(changes > 1)
    witnesses = tuple(
        Witness(
            "sc_crossing",
            tuple(U[k]),
            paths=pairs[k],
            pair=StrategySet(
                tuple(strategies.actions[i] for i in pairs[k]),
                tuple(strategies.beliefs[i] for i in pairs[k]),
            ),
            dt=dt,
            r=r,
        )
        for k in bad[:MAX_WITNESSES]
    )
    spec = f"{strategies.description}; {len(pairs)} pairs, dt={dt:g}, r={r:g}"
    if len(bad):
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.HOLDS if m.separable else Verdict.INCONCLUSIVE
    return AssumptionReport(Assumption.SC, Method.DIRECT, verdict, witnesses, spec, len(bad))


def affine_residual(U: np.ndarray, psi_values: Sequence[float]) -> float:
    """Largest least-squares residual of fitting each row of ``U`` as
    ``C1 + C2 * psi``."""
    x = np.asarray(psi_values, dtype=float)
    X = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(X, U.T, rcond=None)
    return float(np.max(np.abs(X @ coef - U.T))) if U.size else 0.0


def run_all(
    m: SeparableModel,
    strategies: StrategySet,
    dt: float,
    r: float,
    grid: Optional[CheckGrid] = None,
) -> dict[str, AssumptionReport]:
    grid = grid or default_grid(m)
    return {
        "mon_sufficient": check_mon_sufficient(m, grid),
        "mon_direct": check_mon_direct(m, grid),
        "sc_sufficient": check_sc_sufficient(m),
        "sc_direct": check_sc_direct(m, strategies, dt, r),
    }
