"""Constructors for choice rules of the Luce form and the smoothed-logit limit.

Three levels: :func:`luce_rule` divides positive weights over whole sets,
:func:`general_luce_rule` divides them over a rational correspondence's
selection and puts zero elsewhere, and :func:`lambda_smoothed_rule` is the
multinomial logit with scores ``u/λ + α`` whose λ → 0 limit is the
correspondence form with Γ the argmax of ``u``; :func:`limit_check` measures
that convergence on a λ schedule.

Weights can be exact positive rationals (the first two constructors then
emit exact rules) or reals; smoothed rules are float-only because their
probabilities are ratios of exponentials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .axioms import check_warp
from .core import (
    EXACT,
    FLOAT,
    ChoiceCorrespondence,
    ChoiceFamily,
    ChoiceSet,
    RandomChoiceRule,
    Universe,
    Value,
    WeakOrder,
    correspondence_from_order,
    maximizers,
)
from .errors import NotRationalError


@dataclass(frozen=True)
class LuceWeights:
    """Positive weight v(a) per alternative, with α = ln v alongside.

    ``v`` drives all exact arithmetic; ``alpha`` is its float logarithm and
    is what the smoothed-logit constructor consumes. Weights built from
    exact rationals keep mode "exact"; weights built from α are float.
    """

    universe: Universe
    v: Mapping[str, Value]
    alpha: Mapping[str, float]
    mode: str

    def __init__(self, universe: Universe, v: Mapping[str, Value]) -> None:
        if set(v) != set(universe.alternatives):
            raise ValueError("weights must cover exactly the universe")
        exact = all(isinstance(w, (Fraction, int)) for w in v.values())
        vals: dict[str, Value] = {}
        for a in universe:
            w = Fraction(v[a]) if exact else float(v[a])
            if not w > 0:
                raise ValueError(f"weight for {a!r} must be positive, got {v[a]!r}")
            vals[a] = w
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "v", vals)
        object.__setattr__(self, "alpha", {a: math.log(vals[a]) for a in universe})
        object.__setattr__(self, "mode", EXACT if exact else FLOAT)

    @classmethod
    def from_v(cls, universe: Universe, v: Mapping[str, Value]) -> "LuceWeights":
        return cls(universe, v)

    @classmethod
    def from_alpha(cls, universe: Universe, alpha: Mapping[str, float]) -> "LuceWeights":
        if set(alpha) != set(universe.alternatives):
            raise ValueError("alpha must cover exactly the universe")
        return cls(universe, {a: math.exp(float(alpha[a])) for a in universe})

    @classmethod
    def uniform(cls, universe: Universe) -> "LuceWeights":
        return cls(universe, {a: Fraction(1) for a in universe})


def _validate_utility(universe: Universe, u: Mapping[str, float]) -> dict[str, float]:
    if set(u) != set(universe.alternatives):
        raise ValueError("utility must cover exactly the universe")
    out = {a: float(u[a]) for a in universe}
    for a, x in out.items():
        if not math.isfinite(x):
            raise ValueError(f"utility for {a!r} must be finite, got {x!r}")
    return out


def _share_rows(
    weights: LuceWeights, members: Iterable[str], chosen: set[str]
) -> dict[str, Value]:
    total = sum(weights.v[b] for b in chosen)
    zero: Value = Fraction(0) if weights.mode == EXACT else 0.0
    return {a: weights.v[a] / total if a in chosen else zero for a in members}


def luce_rule(weights: LuceWeights, family: ChoiceFamily) -> RandomChoiceRule:
    """The fully supported rule p(a, A) = v(a) / sum of v over A."""
    if family.universe != weights.universe:
        raise ValueError("weights and family must share a universe")
    table = {A: _share_rows(weights, A, set(A.members)) for A in family}
    return RandomChoiceRule(family, table, mode=weights.mode)


def general_luce_rule(gamma: ChoiceCorrespondence, weights: LuceWeights) -> RandomChoiceRule:
    """Weights shared within gamma's selection, zero outside it.

    Only rational correspondences are accepted: when gamma fails the
    contraction-consistency check, the construction would land in the wider
    model class where none of this package's equivalences hold, so it is
    refused with the failing report attached.
    """
    if gamma.universe != weights.universe:
        raise ValueError("weights and correspondence must share a universe")
    report = check_warp(gamma)
    if not report.holds:
        raise NotRationalError(
            "correspondence violates contraction consistency; refusing to build "
            "a selective rule outside the Luce form",
            report=report,
        )
    table = {
        A: _share_rows(weights, A, set(gamma.gamma(A).members)) for A in gamma.family
    }
    return RandomChoiceRule(gamma.family, table, mode=weights.mode)


def general_luce_rule_from_utility(
    u: Mapping[str, float], weights: LuceWeights, family: ChoiceFamily
) -> RandomChoiceRule:
    """As :func:`general_luce_rule` with gamma(A) the maximizers of ``u`` on A."""
    if family.universe != weights.universe:
        raise ValueError("weights and family must share a universe")
    util = _validate_utility(family.universe, u)
    order = WeakOrder.from_utility(family.universe, util)
    return general_luce_rule(correspondence_from_order(order, family), weights)


def lambda_smoothed_rule(
    u: Mapping[str, float],
    weights: LuceWeights,
    lam: float,
    family: ChoiceFamily,
) -> RandomChoiceRule:
    """Multinomial logit with scores u/λ + α; fully supported for every λ > 0.

    Exponentials are taken after subtracting the per-set maximum score, so
    small λ cannot overflow: off-maximizer shares underflow to exact zero
    instead, matching the λ → 0 limit.
    """
    if family.universe != weights.universe:
        raise ValueError("weights and family must share a universe")
    if not (float(lam) > 0.0):
        raise ValueError(f"noise level must be positive, got {lam!r}")
    lam = float(lam)
    util = _validate_utility(family.universe, u)
    scores = {a: util[a] / lam + weights.alpha[a] for a in family.universe}
    table: dict[ChoiceSet, dict[str, float]] = {}
    for A in family:
        top = max(scores[a] for a in A)
        shares = {a: math.exp(scores[a] - top) for a in A}
        total = sum(shares.values())
        table[A] = {a: s / total for a, s in shares.items()}
    return RandomChoiceRule(family, table, mode=FLOAT)


@dataclass(frozen=True)
class LimitReport:
    """Sup-norm distances between smoothed rules and their λ → 0 target."""

    lambdas: tuple[float, ...]
    distances: tuple[float, ...]
    tolerance: float

    @property
    def final_distance(self) -> float:
        return self.distances[-1]

    @property
    def tail_monotone(self) -> bool:
        """Distances never increase over the second half of the schedule."""
        tail = self.distances[len(self.distances) // 2:]
        return all(x >= y for x, y in zip(tail, tail[1:]))

    @property
    def converged(self) -> bool:
        return self.tail_monotone and self.final_distance <= self.tolerance


def limit_check(
    u: Mapping[str, float],
    weights: LuceWeights,
    schedule: Iterable[float],
    family: ChoiceFamily,
    *,
    tolerance: float = 1e-6,
) -> LimitReport:
    """Measure sup-norm convergence of the smoothed rule to its λ → 0 target.

    The schedule must be strictly decreasing and positive. The target is the
    correspondence-form rule at gamma = argmax of ``u``.
    """
    lams = tuple(float(x) for x in schedule)
    if not lams:
        raise ValueError("schedule must be nonempty")
    if any(not x > 0 for x in lams):
        raise ValueError("schedule values must be positive")
    if any(x <= y for x, y in zip(lams, lams[1:])):
        raise ValueError("schedule must be strictly decreasing")
    target = general_luce_rule_from_utility(u, weights, family).as_float()
    distances = []
    for lam in lams:
        smoothed = lambda_smoothed_rule(u, weights, lam, family)
        distances.append(
            max(
                abs(smoothed.p(a, A) - target.p(a, A))
                for A in family
                for a in A
            )
        )
    return LimitReport(lambdas=lams, distances=tuple(distances), tolerance=tolerance)
