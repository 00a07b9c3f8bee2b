"""Brute-force equilibrium solvers used to cross-check every closed form.

Nothing here reuses the closed-form answers: demand comes from the user
utility comparisons, best responses from grid argmax over candidate prices,
and the two-period lock-in game from backward induction. Stage profit is
piecewise quadratic in a firm's own price, so a three-point parabola fit
through the best grid point is exact on the local piece and polishes the
grid solution to near machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .model import ModelParams, Scenario

MAX_SWEEPS = 500
POLISH_ROUNDS = 80
SAME_CHAIN_FP_TOL = 1e-14
SAME_CHAIN_FP_MAX_ITER = 400


@dataclass(frozen=True)
class PriceGrid:
    """Uniform candidate-price grid for best-response search."""

    lo: float
    hi: float
    steps: int = 4001

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"grid bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise ValueError(f"grid needs at least 2 steps, got {self.steps}")

    @classmethod
    def default_for(cls, p: ModelParams, steps: int = 4001) -> "PriceGrid":
        # Wide enough for every equilibrium price: period-1 discounts reach
        # about -(k + alpha*n1) and period-2 harvest prices about k + alpha*n1
        # + d, with s of slack.
        span = p.k + p.alpha * p.n1 + p.s + p.d
        return cls(lo=-span, hi=span, steps=steps)

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.steps - 1)

    def prices(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


class StageDemand(NamedTuple):
    nA: float
    nB: float
    cutoff: float
    full_participation: bool

    @property
    def neither(self) -> float:
        return 1.0 - (self.nA + self.nB)


@dataclass(frozen=True)
class OracleResult:
    """Numerically found equilibrium. One-stage games repeat across periods,
    so their period-2 entries mirror period 1; profits aggregate both periods."""

    scenario: Scenario
    pA1: float
    pB1: float
    pA2: float
    pB2: float
    cutoff1: float
    cutoff2: float
    nA1: float
    nB1: float
    nA2: float
    nB2: float
    profitA: float
    profitB: float
    converged: bool
    iterations: int
    residual: float


def _demand(p: ModelParams, scenario: Scenario, pA, pB):
    """Vectorized stage demand (nA, nB, cutoff, full) at a price pair.

    Cross-chain scenarios admit a closed demand form: the indifference point
    under full coverage, capped by each firm's self-consistent participation
    boundary (utility zero at the boundary type, network term included).
    The shared chain couples both boundaries through total participation, so
    that case iterates the participation total to its fixed point.
    """
    pA = np.asarray(pA, dtype=float)
    pB = np.asarray(pB, dtype=float)
    u = p.s - p.alpha

    if scenario is Scenario.SAME_CHAIN:
        raw = 0.5 + (pB - pA) / (2.0 * p.s)
        total = np.ones(np.broadcast(pA, pB).shape)
        nA = np.zeros_like(total)
        nB = np.zeros_like(total)
        for _ in range(SAME_CHAIN_FP_MAX_ITER):
            reach_a = (p.k + p.alpha * (p.n1 + total) - pA) / p.s
            reach_b = (p.k + p.alpha * (p.n1 + total) - pB) / p.s
            nA = np.clip(np.minimum(raw, reach_a), 0.0, 1.0)
            nB = np.clip(np.minimum(1.0 - raw, reach_b), 0.0, 1.0)
            new_total = nA + nB
            if np.max(np.abs(new_total - total)) < SAME_CHAIN_FP_TOL:
                total = new_total
                break
            total = new_total
    else:
        base_b = p.n2 if scenario is Scenario.COMPATIBLE else p.n3
        raw = (p.alpha * (p.n1 - base_b) + u - pA + pB - p.d) / (2.0 * u)
        reach_a = (p.k + p.alpha * p.n1 - pA) / u
        reach_b = (p.k + p.alpha * base_b + p.d - pB) / u
        nA = np.clip(np.minimum(raw, reach_a), 0.0, 1.0)
        nB = np.clip(np.minimum(1.0 - raw, reach_b), 0.0, 1.0)

    cutoff = np.clip(raw, 0.0, 1.0)
    full = (nA + nB) == 1.0
    return nA, nB, cutoff, full


def stage_demand(p: ModelParams, scenario: Scenario, pA: float, pB: float) -> StageDemand:
    """Demand split at one price pair: shares, cutoff, and participation flag."""
    nA, nB, cutoff, full = _demand(p, scenario, pA, pB)
    return StageDemand(nA=float(nA), nB=float(nB), cutoff=float(cutoff),
                       full_participation=bool(full))


def _lockin_value(K: float, u: float, n):
    """Optimal period-2 monopoly profit over a locked base of measure n.

    The seller either retains everyone at the corner price K - u*n or, when
    the base is large relative to K, serves only part of it at the
    unconstrained vertex price K/2.
    """
    n = np.asarray(n, dtype=float)
    corner = (K - u * n) * n
    vertex = K * K / (4.0 * u)
    value = np.where(u * n <= 0.5 * K, corner, vertex)
    return np.where((n <= 0.0) | (K <= 0.0), 0.0, value)


def _harvest_base(p: ModelParams, firm: str) -> float:
    if firm == "A":
        return p.k + p.alpha * p.n1
    if firm == "B":
        return p.k + p.alpha * p.n3 + p.d
    raise ValueError(f"firm must be 'A' or 'B', got {firm!r}")


def period2_monopoly_price(p: ModelParams, firm: str, n_first: float,
                           grid: PriceGrid | None = None) -> tuple[float, float]:
    """Grid-scan the lock-in monopoly problem for one firm.

    Demand at price q is min((K - q)/(s - alpha), n_first) with
    K = k + alpha * (own base) + quality edge for B. Returns the profit-
    maximizing price and the share it retains. Two zoom rounds around the
    best grid point resolve the corner to ~1e-9.
    """
    if not 0.0 < n_first <= 1.0:
        raise ValueError(f"n_first must lie in (0, 1], got {n_first!r}")
    grid = grid if grid is not None else PriceGrid.default_for(p)
    K = _harvest_base(p, firm)
    u = p.s - p.alpha

    lo, hi, steps = grid.lo, grid.hi, grid.steps
    best = 0.0
    for _ in range(3):
        prices = np.linspace(lo, hi, steps)
        retained = np.clip(np.minimum((K - prices) / u, n_first), 0.0, None)
        best_idx = int(np.argmax(prices * retained))
        best = float(prices[best_idx])
        width = prices[1] - prices[0]
        lo, hi, steps = max(grid.lo, best - width), min(grid.hi, best + width), 2001
    retained_at_best = float(np.clip(min((K - best) / u, n_first), 0.0, None))
    return best, retained_at_best


def _solve_game(prices: np.ndarray,
                obj_a: Callable, obj_b: Callable,
                start: tuple[float, float],
                trace: list | None) -> tuple[float, float, int, float, bool]:
    """Alternating grid best response, then exact local-quadratic polish.

    obj_a(own, rival) / obj_b(own, rival) evaluate a firm's full objective at
    candidate own prices (vectorized). Returns (pA, pB, sweeps, residual,
    converged); residual is the last polish sweep's max price move.
    """
    step = float(prices[1] - prices[0])
    pA = float(prices[np.argmin(np.abs(prices - start[0]))])
    pB = float(prices[np.argmin(np.abs(prices - start[1]))])

    seen = {(pA, pB)}
    sweeps = 0
    exhausted = True
    for _ in range(MAX_SWEEPS):
        sweeps += 1
        before_a = float(obj_a(pA, pB))
        values_a = obj_a(prices, pB)
        new_pA = float(prices[int(np.argmax(values_a))])
        if trace is not None:
            trace.append(("A", before_a, float(np.max(values_a))))

        before_b = float(obj_b(pB, new_pA))
        values_b = obj_b(prices, new_pA)
        new_pB = float(prices[int(np.argmax(values_b))])
        if trace is not None:
            trace.append(("B", before_b, float(np.max(values_b))))

        moved = new_pA != pA or new_pB != pB
        pA, pB = new_pA, new_pB
        if not moved:
            exhausted = False
            break
        if (pA, pB) in seen:
            # Grid-resolution cycle; the polish below settles it.
            exhausted = False
            break
        seen.add((pA, pB))

    residual = np.inf
    for _ in range(POLISH_ROUNDS):
        delta = 0.0
        for is_a in (True, False):
            own = pA if is_a else pB
            obj = obj_a if is_a else obj_b
            rival = pB if is_a else pA
            f0 = float(obj(own - step, rival))
            f1 = float(obj(own, rival))
            f2 = float(obj(own + step, rival))
            curvature = f0 - 2.0 * f1 + f2
            if curvature < 0.0:
                vertex = own + 0.5 * step * (f0 - f2) / curvature
                vertex = min(max(vertex, prices[0]), prices[-1])
                delta = max(delta, abs(vertex - own))
                if is_a:
                    pA = vertex
                else:
                    pB = vertex
        residual = delta
        if delta <= 1e-13:
            break

    converged = (not exhausted) and residual <= step
    return pA, pB, sweeps, residual, converged


def one_stage_nash(p: ModelParams, scenario: Scenario,
                   grid: PriceGrid | None = None,
                   start: tuple[float, float] | None = None,
                   trace: list | None = None) -> OracleResult:
    """Best-response equilibrium of one pricing stage, reported over two periods.

    Valid for the scenarios without lock-in (the stage game simply repeats),
    so aggregate profits are twice the stage profits.
    """
    if scenario is Scenario.INCOMPATIBLE:
        raise ValueError("the lock-in scenario needs two_stage_nash")
    grid = grid if grid is not None else PriceGrid.default_for(p)
    start = start if start is not None else (p.s, p.s)

    def obj_a(own, rival):
        nA, _, _, _ = _demand(p, scenario, own, rival)
        return own * nA

    def obj_b(own, rival):
        _, nB, _, _ = _demand(p, scenario, rival, own)
        return own * nB

    pA, pB, sweeps, residual, converged = _solve_game(
        grid.prices(), obj_a, obj_b, start, trace)

    nA, nB, cutoff, _ = _demand(p, scenario, pA, pB)
    nA, nB, cutoff = float(nA), float(nB), float(cutoff)
    stage_a, stage_b = pA * nA, pB * nB
    return OracleResult(
        scenario=scenario,
        pA1=pA, pB1=pB, pA2=pA, pB2=pB,
        cutoff1=cutoff, cutoff2=cutoff,
        nA1=nA, nB1=nB, nA2=nA, nB2=nB,
        profitA=stage_a + stage_a, profitB=stage_b + stage_b,
        converged=converged, iterations=sweeps, residual=residual,
    )


def two_stage_nash(p: ModelParams,
                   grid: PriceGrid | None = None,
                   start: tuple[float, float] | None = None,
                   trace: list | None = None) -> OracleResult:
    """Backward-induction equilibrium of the lock-in game.

    For any period-1 price pair, each firm's continuation is the lock-in
    monopoly value of its period-1 base; the grid search plays best responses
    on aggregate (period-1 plus continuation) profit. Reported period-2
    prices come from the independent period2_monopoly_price scan at the
    converged bases.
    """
    grid = grid if grid is not None else PriceGrid.default_for(p)
    start = start if start is not None else (p.s, p.s)
    u = p.s - p.alpha
    K_a = _harvest_base(p, "A")
    K_b = _harvest_base(p, "B")

    def obj_a(own, rival):
        nA, _, _, _ = _demand(p, Scenario.INCOMPATIBLE, own, rival)
        return own * nA + _lockin_value(K_a, u, nA)

    def obj_b(own, rival):
        _, nB, _, _ = _demand(p, Scenario.INCOMPATIBLE, rival, own)
        return own * nB + _lockin_value(K_b, u, nB)

    pA1, pB1, sweeps, residual, converged = _solve_game(
        grid.prices(), obj_a, obj_b, start, trace)

    nA1, nB1, cutoff1, _ = _demand(p, Scenario.INCOMPATIBLE, pA1, pB1)
    nA1, nB1, cutoff1 = float(nA1), float(nB1), float(cutoff1)
    if nA1 > 0.0:
        pA2, nA2 = period2_monopoly_price(p, "A", nA1, grid)
    else:
        pA2, nA2 = 0.0, 0.0
    if nB1 > 0.0:
        pB2, nB2 = period2_monopoly_price(p, "B", nB1, grid)
    else:
        pB2, nB2 = 0.0, 0.0

    return OracleResult(
        scenario=Scenario.INCOMPATIBLE,
        pA1=pA1, pB1=pB1, pA2=pA2, pB2=pB2,
        cutoff1=cutoff1, cutoff2=nA2,
        nA1=nA1, nB1=nB1, nA2=nA2, nB2=nB2,
        profitA=pA1 * nA1 + pA2 * nA2, profitB=pB1 * nB1 + pB2 * nB2,
        converged=converged, iterations=sweeps, residual=residual,
    )


def oracle_equilibrium(p: ModelParams, scenario: Scenario,
                       grid: PriceGrid | None = None) -> OracleResult:
    """Dispatch to the right solver for the scenario."""
    if scenario is Scenario.INCOMPATIBLE:
        return two_stage_nash(p, grid=grid)
    return one_stage_nash(p, scenario, grid=grid)
