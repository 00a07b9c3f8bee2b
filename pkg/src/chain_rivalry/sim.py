"""Discretized user-base simulator.

Replaces the continuum of user types with m midpoint types of mass 1/m each
and lets every user pick the utility-maximizing option, iterating on the
conjectured adoption shares until they reproduce themselves. Shares are
multiples of 1/m, so closed-form magnitudes should match to about 1/m.

Tie rules: indifferent between the two firms picks B; indifferent between a
firm and staying out participates. In the lock-in scenario, period-2 users
who adopted in period 1 can only keep their firm or drop out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import Choice, ModelParams, Scenario, UserChoice, require_valid, user_utility

SHARE_TOL = 1e-12
MAX_FIXED_POINT_ITER = 1000


@dataclass
class UserPopulation:
    """m user types at midpoints (i + 1/2) / m with recorded period choices."""

    m: int
    types: np.ndarray
    period1: Optional[np.ndarray] = field(default=None, repr=False)
    period2: Optional[np.ndarray] = field(default=None, repr=False)
    locked2: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def create(cls, m: int) -> "UserPopulation":
        if m < 1:
            raise ValueError(f"population needs at least one type, got m={m}")
        types = (np.arange(m, dtype=float) + 0.5) / m
        return cls(m=m, types=types)

    def user_choice(self, period: int, i: int) -> UserChoice:
        """Recorded decision of type i in the given period."""
        if period not in (1, 2):
            raise ValueError(f"period must be 1 or 2, got {period!r}")
        choices = self.period1 if period == 1 else self.period2
        if choices is None:
            raise ValueError(f"period {period} has not been simulated yet")
        if not 0 <= i < self.m:
            raise IndexError(f"user index {i} outside population of {self.m}")
        locked = bool(self.locked2[i]) if (period == 2 and self.locked2 is not None) else False
        return UserChoice(x=float(self.types[i]), period=period,
                          choice=Choice(int(choices[i])), locked=locked)


@dataclass(frozen=True)
class SimOutcome:
    """One period's converged adoption pattern."""

    share_a: float
    share_b: float
    cutoff: float
    revenue_a: float
    revenue_b: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class SimRun:
    period1: SimOutcome
    period2: SimOutcome
    revenue_a: float
    revenue_b: float
    population: UserPopulation


def simulate_period(pop: UserPopulation, p: ModelParams, scenario: Scenario,
                    period: int, pA: float, pB: float,
                    locks: Optional[np.ndarray] = None) -> SimOutcome:
    """Fixed-point adoption split for one period at fixed prices.

    locks is the period-1 choice array and is required exactly when period 2
    of the lock-in scenario is simulated; it restricts adopters to their
    period-1 firm (or dropping out).
    """
    needs_locks = period == 2 and scenario is Scenario.INCOMPATIBLE
    if needs_locks and locks is None:
        raise ValueError("period 2 of the lock-in scenario requires the period-1 choices")
    if not needs_locks and locks is not None:
        raise ValueError("locks are only meaningful in period 2 of the lock-in scenario")

    if needs_locks:
        locked_a = locks == Choice.FIRM_A.value
        locked_b = locks == Choice.FIRM_B.value
    share_a, share_b = 0.5, 0.5
    choice = np.full(pop.m, Choice.NEITHER.value, dtype=np.int8)
    iterations = 0
    converged = False
    for _ in range(MAX_FIXED_POINT_ITER):
        iterations += 1
        uA = user_utility(p, scenario, pop.types, period, Choice.FIRM_A,
                          pA, pB, share_a, share_b)
        uB = user_utility(p, scenario, pop.types, period, Choice.FIRM_B,
                          pA, pB, share_a, share_b)
        if needs_locks:
            uA = np.where(locked_b, -np.inf, uA)
            uB = np.where(locked_a, -np.inf, uB)
        pick_b = uB >= uA
        best = np.where(pick_b, uB, uA)
        choice = np.where(best >= 0.0,
                          np.where(pick_b, Choice.FIRM_B.value, Choice.FIRM_A.value),
                          Choice.NEITHER.value).astype(np.int8)
        new_a = np.count_nonzero(choice == Choice.FIRM_A.value) / pop.m
        new_b = np.count_nonzero(choice == Choice.FIRM_B.value) / pop.m
        delta = max(abs(new_a - share_a), abs(new_b - share_b))
        share_a, share_b = new_a, new_b
        if delta < SHARE_TOL:
            converged = True
            break

    if period == 1:
        pop.period1 = choice
    else:
        pop.period2 = choice
        pop.locked2 = (locks != Choice.NEITHER.value) if needs_locks else None

    adopters_a = pop.types[choice == Choice.FIRM_A.value]
    cutoff = float(adopters_a.max()) if adopters_a.size else 0.0
    return SimOutcome(share_a=share_a, share_b=share_b, cutoff=cutoff,
                      revenue_a=pA * share_a, revenue_b=pB * share_b,
                      iterations=iterations, converged=converged)


def simulate_game(p: ModelParams, scenario: Scenario,
                  prices: tuple[float, float, float, float],
                  m: int = 10000, validate: bool = True) -> SimRun:
    """Run both periods at the given prices (pA1, pB1, pA2, pB2)."""
    if validate:
        require_valid(p)
    pA1, pB1, pA2, pB2 = prices
    pop = UserPopulation.create(m)
    first = simulate_period(pop, p, scenario, 1, pA1, pB1)
    locks = pop.period1 if scenario is Scenario.INCOMPATIBLE else None
    second = simulate_period(pop, p, scenario, 2, pA2, pB2, locks=locks)
    return SimRun(period1=first, period2=second,
                  revenue_a=first.revenue_a + second.revenue_a,
                  revenue_b=first.revenue_b + second.revenue_b,
                  population=pop)
