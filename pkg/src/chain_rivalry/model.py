"""Core types for the two-period platform-rivalry model.

An incumbent firm A lives on chain P1 with an established user base. An
entrant B picks one of three homes: the same chain (shared network), a
compatible chain (separate network, costless switching), or an incompatible
chain (separate network, users locked in after period 1). A continuum of
users indexed by x in [0, 1] trades off price, taste distance, network size,
and a stand-alone value k each period.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

REQUIRED_FIELDS = ("alpha", "s", "k", "n1", "n2", "n3")
OPTIONAL_FIELDS = ("d", "subsidy_p2", "subsidy_p3")


class Scenario(Enum):
    """Entrant B's platform choice relative to the incumbent's chain P1."""

    SAME_CHAIN = "same"
    COMPATIBLE = "compatible"
    INCOMPATIBLE = "incompatible"

    @classmethod
    def from_name(cls, name: str) -> "Scenario":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown scenario {name!r}; expected one of "
                         f"{[m.value for m in cls]}")


class Choice(Enum):
    """A user's per-period action."""

    FIRM_A = 0
    FIRM_B = 1
    NEITHER = 2


@dataclass(frozen=True)
class ModelParams:
    """Exogenous model parameters.

    alpha: network-effect coefficient (utility per user on the chain)
    s: preference-dispersion coefficient (taste transport cost)
    k: stand-alone product value
    n1, n2, n3: existing user bases of chains P1, P2, P3
    d: extra per-user utility of B's alternative chain (0 in the baseline)
    subsidy_p2, subsidy_p3: one-time transfers to B from P2 / P3
    """

    alpha: float
    s: float
    k: float
    n1: float
    n2: float
    n3: float
    d: float = 0.0
    subsidy_p2: float = 0.0
    subsidy_p3: float = 0.0

    @classmethod
    def from_mapping(cls, data: Mapping) -> "ModelParams":
        """Build params from a JSON-style mapping with exactly these field names."""
        allowed = set(REQUIRED_FIELDS) | set(OPTIONAL_FIELDS)
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        missing = [name for name in REQUIRED_FIELDS if name not in data]
        if missing:
            raise ValueError(f"missing config keys: {', '.join(missing)}")
        values = {}
        for name in allowed & set(data):
            value = data[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"config key {name!r} must be a number, got {value!r}")
            values[name] = float(value)
        return cls(**values)

    @classmethod
    def from_json_file(cls, path: str) -> "ModelParams":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"config {path} must hold a JSON object")
        return cls.from_mapping(data)

    def with_values(self, **changes: float) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]


@dataclass(frozen=True)
class UserChoice:
    """One user's action in one period.

    locked marks a period-2 choice constrained by period-1 lock-in, which
    only exists in the incompatible scenario.
    """

    x: float
    period: int
    choice: Choice
    locked: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"user type x={self.x} outside [0, 1]")
        if self.period not in (1, 2):
            raise ValueError(f"period must be 1 or 2, got {self.period}")
        if self.locked and self.period != 2:
            raise ValueError("locked choices can only occur in period 2")


class InvalidParamsError(ValueError):
    """Raised by operations whose precondition is a valid parameter set."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("invalid params: " + "; ".join(report.violations))


def validate_params(p: ModelParams) -> ValidationReport:
    """Check every parameter constraint; report violations, never raise.

    Each violated constraint is named with both sides of the inequality so
    the caller can see how far off the input is.
    """
    violations = []

    def strict_positive(name: str, value: float) -> None:
        if not value > 0.0:
            violations.append(f"{name} must be positive: {name}={value!r}")

    def nonnegative(name: str, value: float) -> None:
        if not value >= 0.0:
            violations.append(f"{name} must be nonnegative: {name}={value!r}")

    strict_positive("alpha", p.alpha)
    strict_positive("s", p.s)
    strict_positive("k", p.k)
    for name in ("n1", "n2", "n3"):
        nonnegative(name, getattr(p, name))
    nonnegative("d", p.d)
    nonnegative("subsidy_p2", p.subsidy_p2)
    nonnegative("subsidy_p3", p.subsidy_p3)

    if not p.n1 > p.n2:
        violations.append(f"dominant-chain base: n1={p.n1!r} must exceed n2={p.n2!r}")
    if not p.n1 > p.n3:
        violations.append(f"dominant-chain base: n1={p.n1!r} must exceed n3={p.n3!r}")

    bound1 = p.alpha * (2.0 * p.n1 + 1.0)
    if not p.s > bound1:
        violations.append(
            f"assumption_1_1: s={p.s!r} must exceed alpha*(2*n1+1)={bound1!r}")
    bound2 = 4.0 * p.s + 4.0 * p.alpha * (1.0 + p.n1 + p.n2)
    if not p.k > bound2:
        violations.append(
            f"assumption_1_2: k={p.k!r} must exceed 4*s+4*alpha*(1+n1+n2)={bound2!r}")

    return ValidationReport(ok=not violations, violations=tuple(violations))


def require_valid(p: ModelParams) -> None:
    report = validate_params(p)
    if not report.ok:
        raise InvalidParamsError(report)


def user_utility(p: ModelParams, scenario: Scenario, x: ArrayLike, period: int,
                 choice: Choice, pA: float, pB: float,
                 nA: ArrayLike, nB: ArrayLike) -> ArrayLike:
    """Per-period utility of a type-x user for a given choice.

    The network term counts the chain's existing base plus current-period
    adopters reachable there: on a shared chain both firms' adopters count
    for everyone; on separate chains each firm's chain carries its own base
    (n2 or n3 for B) plus its own adopters, and B's chain adds the quality
    edge d. Taste distance is s*x to firm A and s*(1-x) to firm B, and
    choosing neither yields exactly 0.

    Accepts a scalar or array x (the shares nA, nB broadcast against it) and
    returns a matching scalar or array. Rejects x outside [0, 1].
    """
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("user type x outside [0, 1]")
    if period not in (1, 2):
        raise ValueError(f"period must be 1 or 2, got {period}")

    if choice is Choice.NEITHER:
        out = np.zeros_like(x)
        return float(out) if out.ndim == 0 else out

    if scenario is Scenario.SAME_CHAIN:
        network = p.n1 + np.asarray(nA, dtype=float) + np.asarray(nB, dtype=float)
        edge = 0.0
    elif choice is Choice.FIRM_A:
        network = p.n1 + np.asarray(nA, dtype=float)
        edge = 0.0
    else:
        base = p.n2 if scenario is Scenario.COMPATIBLE else p.n3
        network = base + np.asarray(nB, dtype=float)
        edge = p.d

    if choice is Choice.FIRM_A:
        out = p.alpha * network - pA - p.s * x + p.k
    else:
        out = p.alpha * network + edge - pB - p.s * (1.0 - x) + p.k
    return float(out) if np.ndim(out) == 0 else out
