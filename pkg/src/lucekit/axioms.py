"""Decision procedures for stochastic-choice consistency conditions.

Each checker scans every instance of its identity that the rule's family can
express, and returns an :class:`AxiomReport` with a verdict, the first
:data:`WITNESS_CAP` violations in a canonical order, the total violation
count, and the number of instances examined. Verdicts are relative to the
family: on partial families a pass may be vacuous, which is why reports also
carry a completeness flag.

Exact rules are checked by integer cross-multiplication: each table row is
rewritten as integer numerators over one common denominator, so every
identity of products of probabilities becomes an identity of machine
integers. Float rules are evaluated directly with the relative tolerance
``|lhs - rhs| <= eps * (1 + |lhs| + |rhs|)``. Witnesses always carry the
probabilities themselves (not the cross-multiplied forms), so they can be
replayed against the raw definitions via :func:`replay_witness`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Union

from .core import (
    EXACT,
    MAX_ENUM_UNIVERSE,
    ChoiceCorrespondence,
    ChoiceSet,
    ExtendedRatio,
    RandomChoiceRule,
    Value,
    support_correspondence,
)
from .errors import FamilySizeError

# Reports keep at most this many witnesses (the first in canonical order)
# so adversarial inputs cannot exhaust memory; the full count is separate.
WITNESS_CAP = 100


class Axiom(str, Enum):
    """The conditions the checkers decide."""

    CHOICE_AXIOM = "choice-axiom"
    ODDS_INDEPENDENCE = "odds-independence"
    PRODUCT_RULE = "product-rule"
    SET_CHOICE_AXIOM = "set-choice-axiom"
    SET_INTERSECTION_RULE = "set-intersection-rule"
    POSITIVITY = "positivity"
    FULL_SUPPORT = "full-support"
    WARP = "warp"
    RENYI_CONDITIONING = "renyi-conditioning"

    def __str__(self) -> str:  # keep CLI/report output free of the enum prefix
        return self.value


WitnessValue = Union[Value, ExtendedRatio, None]


@dataclass(frozen=True)
class Witness:
    """One concrete violation: the sets and alternatives involved plus both sides.

    The meaning of ``sets``/``elements`` depends on the axiom; see the
    emitting checker. ``lhs``/``rhs`` hold the directly-evaluated values of
    the two sides of the identity (:class:`ExtendedRatio` for odds), or
    ``None`` where a side is a bare positivity requirement.
    """

    axiom: Axiom
    sets: tuple[ChoiceSet, ...]
    elements: tuple[str, ...]
    lhs: WitnessValue
    rhs: WitnessValue
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one checker run.

    ``holds`` is False exactly when ``violation_count > 0``; ``witnesses``
    then holds the first ``min(violation_count, WITNESS_CAP)`` violations in
    canonical order. ``pairs_checked`` counts the identity instances
    examined (instances that hold by pure algebra, such as a set compared
    with itself, are skipped). ``family_complete`` reports whether the
    family contained every instance the condition quantifies over: all
    nonempty subsets of the universe, or, for Positivity, all pairs.
    """

    axiom: Axiom
    holds: bool
    witnesses: tuple[Witness, ...]
    violation_count: int
    pairs_checked: int
    family_complete: bool

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"

    def __post_init__(self) -> None:
        if self.holds != (self.violation_count == 0):
            raise ValueError("verdict inconsistent with violation count")
        if bool(self.witnesses) != (self.violation_count > 0):
            raise ValueError("witness list inconsistent with violation count")


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _RuleView:
    """Bitmask access layer shared by the checkers.

    Sets become bitmasks over the universe; each exact row becomes integer
    numerators over one common denominator so identities reduce to integer
    equalities, while float rows keep probabilities with denominator 1.0.
    """

    def __init__(self, rule: RandomChoiceRule, eps: float | None = None) -> None:
        self.rule = rule
        self.exact = rule.mode == EXACT
        self.eps = rule.eps if eps is None else eps
        universe = rule.universe
        self.n = len(universe)
        self.labels = universe.alternatives
        self.sets: list[ChoiceSet] = list(rule.family)
        self.masks: list[int] = []
        self.dens: list[Value] = []
        self.nums: list[list[Value]] = []
        for A in self.sets:
            row = rule.table[A]
            mask = 0
            for a in A:
                mask |= 1 << universe.index(a)
            self.masks.append(mask)
            if self.exact:
                den = math.lcm(*(v.denominator for v in row.values()))
                num: list[Value] = [0] * self.n
                for a, v in row.items():
                    num[universe.index(a)] = v.numerator * (den // v.denominator)
            else:
                den = 1.0
                num = [0.0] * self.n
                for a, v in row.items():
                    num[universe.index(a)] = float(v)
            self.dens.append(den)
            self.nums.append(num)
        self._sums: dict[int, dict[int, Value]] = {}

    def eq(self, lhs: Value, rhs: Value) -> bool:
        if self.exact:
            return lhs == rhs
        return abs(lhs - rhs) <= self.eps * (1.0 + abs(lhs) + abs(rhs))

    def positive(self, value: Value) -> bool:
        return value > 0 if self.exact else value > self.eps

    def mass(self, i: int, mask: int) -> Value:
        """Numerator mass the row ``i`` assigns to the alternatives in ``mask``."""
        num = self.nums[i]
        return sum(num[j] for j in _iter_bits(mask))

    def subset_sums(self, i: int) -> dict[int, Value]:
        """Numerator masses of every submask of set ``i``, built once per set."""
        cached = self._sums.get(i)
        if cached is not None:
            return cached
        num = self.nums[i]
        mask = self.masks[i]
        sums: dict[int, Value] = {0: num[0] * 0}
        sub = (0 - mask) & mask  # ascending submask enumeration
        while sub:
            low = sub & -sub
            sums[sub] = sums[sub ^ low] + num[low.bit_length() - 1]
            sub = (sub - mask) & mask
        self._sums[i] = sums
        return sums

    def subset_pairs(self) -> Iterator[tuple[int, int]]:
        """Indices (iB, iA) with B a proper subset of A, outer loop over A."""
        for iA, mA in enumerate(self.masks):
            for iB, mB in enumerate(self.masks):
                if mB != mA and mB & mA == mB:
                    yield iB, iA

    def members_of(self, mask: int) -> ChoiceSet:
        return ChoiceSet(self.labels[j] for j in _iter_bits(mask))


class _Collector:
    """Accumulates violations under the witness cap."""

    def __init__(self) -> None:
        self.count = 0
        self.witnesses: list[Witness] = []

    def add(self, make: Callable[[], Witness], weight: int = 1) -> None:
        self.count += weight
        if len(self.witnesses) < WITNESS_CAP:
            self.witnesses.append(make())

    def report(self, axiom: Axiom, checked: int, complete: bool) -> AxiomReport:
        return AxiomReport(
            axiom=axiom,
            holds=self.count == 0,
            witnesses=tuple(self.witnesses),
            violation_count=self.count,
            pairs_checked=checked,
            family_complete=complete,
        )


def check_choice_axiom(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Does p(a, A) = p(a, B) * p(B, A) for every B ⊆ A in the family, a ∈ B?

    Witness layout: sets = (B, A), elements = (a,), lhs = p(a, A),
    rhs = p(a, B) * p(B, A).
    """
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    for iB, iA in view.subset_pairs():
        mass_AB = view.mass(iA, view.masks[iB])
        den_B = view.dens[iB]
        for j in _iter_bits(view.masks[iB]):
            checked += 1
            if view.eq(view.nums[iA][j] * den_B, view.nums[iB][j] * mass_AB):
                continue
            B, A, a = view.sets[iB], view.sets[iA], view.labels[j]
            out.add(lambda B=B, A=A, a=a: Witness(
                axiom=Axiom.CHOICE_AXIOM,
                sets=(B, A),
                elements=(a,),
                lhs=rule.p(a, A),
                rhs=rule.p(a, B) * rule.p_set(B, A),
            ))
    return out.report(Axiom.CHOICE_AXIOM, checked, rule.family.all_subsets)


def _classify(num: Value, den: Value, positive: Callable[[Value], bool]) -> str:
    if positive(den):
        return ExtendedRatio.FINITE
    if positive(num):
        return ExtendedRatio.INFINITE
    return ExtendedRatio.INDETERMINATE


def check_odds_independence(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Do binary odds predict in-set odds: p(a,{a,b})/p(b,{a,b}) = p(a,A)/p(b,A)?

    Both sides are compared as extended ratios (a positive mass against a
    zero mass is an infinite ratio). Instances whose right side is 0/0 are
    skipped, as are universes where the pair {a, b} is not in the family.
    Witness layout: sets = ({a,b}, A), elements = (a, b), lhs and rhs the two
    :class:`ExtendedRatio` values.
    """
    view = _RuleView(rule, eps)
    pair_index = {view.masks[i]: i for i in range(len(view.sets)) if len(view.sets[i]) == 2}
    out = _Collector()
    checked = 0
    for iA, mA in enumerate(view.masks):
        if len(view.sets[iA]) < 3:
            continue
        bits = list(_iter_bits(mA))
        for x, j in enumerate(bits):
            for k in bits[x + 1:]:
                iP = pair_index.get((1 << j) | (1 << k))
                if iP is None:
                    continue
                num_A = view.nums[iA]
                rhs_kind = _classify(num_A[j], num_A[k], view.positive)
                if rhs_kind == ExtendedRatio.INDETERMINATE:
                    continue
                checked += 1
                num_P = view.nums[iP]
                lhs_kind = _classify(num_P[j], num_P[k], view.positive)
                if lhs_kind == rhs_kind and (
                    lhs_kind == ExtendedRatio.INFINITE
                    or view.eq(num_P[j] * num_A[k], num_P[k] * num_A[j])
                ):
                    continue
                P, A = view.sets[iP], view.sets[iA]
                a, b = view.labels[j], view.labels[k]
                tol = 0.0 if view.exact else view.eps
                out.add(lambda P=P, A=A, a=a, b=b, tol=tol: Witness(
                    axiom=Axiom.ODDS_INDEPENDENCE,
                    sets=(P, A),
                    elements=(a, b),
                    lhs=ExtendedRatio.from_parts(rule.p(a, P), rule.p(b, P), eps=tol),
                    rhs=ExtendedRatio.from_parts(rule.p(a, A), rule.p(b, A), eps=tol),
                ))
    return out.report(Axiom.ODDS_INDEPENDENCE, checked, rule.family.all_subsets)


def check_product_rule(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Does p(b, B) * p(a, A) = p(a, B) * p(b, A) for all B ⊆ A, a, b ∈ B?

    Witness layout: sets = (B, A), elements = (a, b), lhs = p(b,B) * p(a,A),
    rhs = p(a,B) * p(b,A).
    """
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    for iB, iA in view.subset_pairs():
        bits = list(_iter_bits(view.masks[iB]))
        num_A, num_B = view.nums[iA], view.nums[iB]
        for x, j in enumerate(bits):
            for k in bits[x + 1:]:
                checked += 1
                if view.eq(num_B[k] * num_A[j], num_B[j] * num_A[k]):
                    continue
                B, A = view.sets[iB], view.sets[iA]
                a, b = view.labels[j], view.labels[k]
                out.add(lambda B=B, A=A, a=a, b=b: Witness(
                    axiom=Axiom.PRODUCT_RULE,
                    sets=(B, A),
                    elements=(a, b),
                    lhs=rule.p(b, B) * rule.p(a, A),
                    rhs=rule.p(a, B) * rule.p(b, A),
                ))
    return out.report(Axiom.PRODUCT_RULE, checked, rule.family.all_subsets)


def check_set_choice_axiom(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Does p(C, A) = p(C, B) * p(B, A) for all C ⊆ B ⊆ A with B, A in the family?

    C ranges over every nonempty subset of B, present in the family or not;
    set masses are sums of the stored rows either way. Witness layout:
    sets = (C, B, A), elements = (), lhs = p(C, A), rhs = p(C, B) * p(B, A).
    """
    largest = max(len(s) for s in rule.family)
    if largest > MAX_ENUM_UNIVERSE:
        raise FamilySizeError(
            f"subset enumeration over a {largest}-element set (limit {MAX_ENUM_UNIVERSE})"
        )
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    for iB, iA in view.subset_pairs():
        mB = view.masks[iB]
        sums_A, sums_B = view.subset_sums(iA), view.subset_sums(iB)
        mass_AB = sums_A[mB]
        den_B = view.dens[iB]
        failing: list[int] = []
        sub = (0 - mB) & mB
        while sub:
            checked += 1
            if not view.eq(sums_A[sub] * den_B, sums_B[sub] * mass_AB):
                failing.append(sub)
            sub = (sub - mB) & mB
        for mC in sorted(failing, key=lambda m: (bin(m).count("1"), view.members_of(m).members)):
            C, B, A = view.members_of(mC), view.sets[iB], view.sets[iA]
            out.add(lambda C=C, B=B, A=A: Witness(
                axiom=Axiom.SET_CHOICE_AXIOM,
                sets=(C, B, A),
                elements=(),
                lhs=rule.p_set(C, A),
                rhs=rule.p_set(C, B) * rule.p_set(B, A),
            ))
    return out.report(Axiom.SET_CHOICE_AXIOM, checked, rule.family.all_subsets)


def check_set_intersection_rule(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Does p(Y ∩ B, A) = p(Y, B) * p(B, A) for all B ⊆ A in the family, Y ⊆ X?

    Y ranges over all 2^|X| subsets of the universe, so universes above
    ``MAX_ENUM_UNIVERSE`` alternatives are refused. Both sides depend on Y
    only through C = Y ∩ B, so each distinct C is decided once and a failure
    counts all 2^(|X| - |B|) sets Y inducing it; witnesses still name
    concrete Y, first in canonical order. Witness layout: sets = (Y, B, A),
    elements = (), lhs = p(Y ∩ B, A), rhs = p(Y, B) * p(B, A).
    """
    n = len(rule.universe)
    if n > MAX_ENUM_UNIVERSE:
        raise FamilySizeError(
            f"Y ranges over all subsets of a {n}-element universe (limit {MAX_ENUM_UNIVERSE})"
        )
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    # All subsets of the universe in (size, labels) order, for witness naming.
    canonical_masks: list[int] | None = None
    for iB, iA in view.subset_pairs():
        mB = view.masks[iB]
        sums_A, sums_B = view.subset_sums(iA), view.subset_sums(iB)
        mass_AB = sums_A[mB]
        den_B = view.dens[iB]
        checked += 1 << n
        failing: set[int] = set()
        sub = (0 - mB) & mB
        while sub:
            if not view.eq(sums_A[sub] * den_B, sums_B[sub] * mass_AB):
                failing.add(sub)
            sub = (sub - mB) & mB
        if not failing:
            continue
        weight = 1 << (n - len(view.sets[iB]))
        if len(out.witnesses) >= WITNESS_CAP:
            out.count += weight * len(failing)
            continue
        if canonical_masks is None:
            all_masks = range(1, 1 << n)
            canonical_masks = sorted(
                all_masks, key=lambda m: (bin(m).count("1"), view.members_of(m).members)
            )
        remaining = {c: weight for c in failing}
        for mY in canonical_masks:
            c = mY & mB
            if c not in remaining:
                continue
            Y, B, A = view.members_of(mY), view.sets[iB], view.sets[iA]
            inter = [y for y in Y if y in B]
            out.add(lambda Y=Y, B=B, A=A, inter=inter: Witness(
                axiom=Axiom.SET_INTERSECTION_RULE,
                sets=(Y, B, A),
                elements=(),
                lhs=rule.p_set(inter, A),
                rhs=rule.p_set(Y, B) * rule.p_set(B, A),
            ))
            if len(out.witnesses) >= WITNESS_CAP:
                remaining[c] -= 1
                for count_left in remaining.values():
                    out.count += count_left
                break
            remaining[c] -= 1
            if remaining[c] == 0:
                del remaining[c]
                if not remaining:
                    break
    return out.report(Axiom.SET_INTERSECTION_RULE, checked, rule.family.all_subsets)


def check_positivity(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Is every binary probability p(a, {a, b}) strictly positive?

    Quantifies over the pair sets present in the family; the report's
    completeness flag is True only when every pair of the universe is there.
    Witness layout: sets = ({a,b},), elements = (a,), lhs = p(a, {a,b}),
    rhs = None (the requirement is positivity, not an identity).
    """
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    for i, P in enumerate(view.sets):
        if len(P) != 2:
            continue
        for j in _iter_bits(view.masks[i]):
            checked += 1
            if view.positive(view.nums[i][j]):
                continue
            a = view.labels[j]
            out.add(lambda P=P, a=a: Witness(
                axiom=Axiom.POSITIVITY,
                sets=(P,),
                elements=(a,),
                lhs=rule.p(a, P),
                rhs=None,
                detail="binary probability must be positive",
            ))
    return out.report(Axiom.POSITIVITY, checked, rule.family.contains_all_pairs())


def check_full_support(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Does every alternative of every family set get positive probability?

    Witness layout: sets = (A,), elements = (a,), lhs = p(a, A), rhs = None.
    """
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    for i, A in enumerate(view.sets):
        for j in _iter_bits(view.masks[i]):
            checked += 1
            if view.positive(view.nums[i][j]):
                continue
            a = view.labels[j]
            out.add(lambda A=A, a=a: Witness(
                axiom=Axiom.FULL_SUPPORT,
                sets=(A,),
                elements=(a,),
                lhs=rule.p(a, A),
                rhs=None,
                detail="support must be the whole set",
            ))
    return out.report(Axiom.FULL_SUPPORT, checked, rule.family.all_subsets)


def check_warp(corr: ChoiceCorrespondence) -> AxiomReport:
    """Does Γ(B) = Γ(A) ∩ B whenever B ⊆ A in the family and the cut is nonempty?

    Witness layout: sets = (B, A), elements = (), lhs/rhs = None; the detail
    string spells out Γ(B) against Γ(A) ∩ B.
    """
    family = corr.family
    universe = family.universe
    masks: list[int] = []
    gammas: list[int] = []
    for A in family:
        mask = 0
        for a in A:
            mask |= 1 << universe.index(a)
        masks.append(mask)
        gmask = 0
        for a in corr.gamma(A):
            gmask |= 1 << universe.index(a)
        gammas.append(gmask)
    out = _Collector()
    checked = 0
    for iA, mA in enumerate(masks):
        for iB, mB in enumerate(masks):
            if mB == mA or mB & mA != mB:
                continue
            cut = gammas[iA] & mB
            if cut == 0:
                continue
            checked += 1
            if gammas[iB] == cut:
                continue
            B, A = family.sets[iB], family.sets[iA]
            chosen_B, chosen_A = corr.gamma(B), corr.gamma(A)
            cut_set = ChoiceSet(a for a in chosen_A if a in B)
            out.add(lambda B=B, A=A, chosen_B=chosen_B, cut_set=cut_set: Witness(
                axiom=Axiom.WARP,
                sets=(B, A),
                elements=(),
                lhs=None,
                rhs=None,
                detail=f"Γ({B})={chosen_B} but Γ({A})∩{B}={cut_set}",
            ))
    return out.report(Axiom.WARP, checked, family.all_subsets)


def check_renyi_conditioning(rule: RandomChoiceRule, *, eps: float | None = None) -> AxiomReport:
    """Does p(a, B) = p(a, A) / p(B, A) for all B ⊆ A and a in B ∩ supp p_A?

    Restricting a to the support of p_A keeps the denominator positive, so
    every instance is a genuine identity rather than a 0/0 convention.
    Witness layout: sets = (B, A), elements = (a,), lhs = p(a, B),
    rhs = p(a, A) / p(B, A).
    """
    view = _RuleView(rule, eps)
    out = _Collector()
    checked = 0
    for iB, iA in view.subset_pairs():
        mass_AB = view.mass(iA, view.masks[iB])
        den_B = view.dens[iB]
        num_A, num_B = view.nums[iA], view.nums[iB]
        for j in _iter_bits(view.masks[iB]):
            if not view.positive(num_A[j]):
                continue
            checked += 1
            if view.eq(num_B[j] * mass_AB, num_A[j] * den_B):
                continue
            B, A, a = view.sets[iB], view.sets[iA], view.labels[j]
            out.add(lambda B=B, A=A, a=a: Witness(
                axiom=Axiom.RENYI_CONDITIONING,
                sets=(B, A),
                elements=(a,),
                lhs=rule.p(a, B),
                rhs=rule.p(a, A) / rule.p_set(B, A),
            ))
    return out.report(Axiom.RENYI_CONDITIONING, checked, rule.family.all_subsets)


def check_all(rule: RandomChoiceRule, *, eps: float | None = None) -> dict[Axiom, AxiomReport]:
    """Run every checker on the rule; WARP is applied to its support correspondence."""
    return {
        Axiom.CHOICE_AXIOM: check_choice_axiom(rule, eps=eps),
        Axiom.ODDS_INDEPENDENCE: check_odds_independence(rule, eps=eps),
        Axiom.PRODUCT_RULE: check_product_rule(rule, eps=eps),
        Axiom.SET_CHOICE_AXIOM: check_set_choice_axiom(rule, eps=eps),
        Axiom.SET_INTERSECTION_RULE: check_set_intersection_rule(rule, eps=eps),
        Axiom.POSITIVITY: check_positivity(rule, eps=eps),
        Axiom.FULL_SUPPORT: check_full_support(rule, eps=eps),
        Axiom.WARP: check_warp(support_correspondence(rule)),
        Axiom.RENYI_CONDITIONING: check_renyi_conditioning(rule, eps=eps),
    }


def _tolerant_eq(lhs: Value, rhs: Value, exact: bool, eps: float) -> bool:
    if exact:
        return lhs == rhs
    return abs(lhs - rhs) <= eps * (1.0 + abs(lhs) + abs(rhs))


def replay_witness(
    subject: RandomChoiceRule | ChoiceCorrespondence,
    witness: Witness,
    *,
    eps: float | None = None,
) -> bool:
    """Re-evaluate a witness against the raw definitions; True means it is genuine.

    This path shares no arithmetic with the checkers: it works from the
    rule's probability lookups (or the correspondence) directly. A WARP
    witness needs a :class:`ChoiceCorrespondence`; passing a rule checks its
    support correspondence instead.
    """
    if witness.axiom == Axiom.WARP:
        corr = subject if isinstance(subject, ChoiceCorrespondence) else support_correspondence(subject)
        B, A = witness.sets
        cut = ChoiceSet(a for a in corr.gamma(A) if a in B)
        return corr.gamma(B) != cut
    if not isinstance(subject, RandomChoiceRule):
        raise TypeError(f"{witness.axiom} witnesses replay against a rule")
    rule = subject
    exact = rule.mode == EXACT
    tol = (rule.eps if eps is None else eps) if not exact else 0.0
    eq = lambda x, y: _tolerant_eq(x, y, exact, tol)
    pos = lambda v: v > 0 if exact else v > tol

    if witness.axiom == Axiom.CHOICE_AXIOM:
        (B, A), (a,) = witness.sets, witness.elements
        return not eq(rule.p(a, A), rule.p(a, B) * rule.p_set(B, A))
    if witness.axiom == Axiom.ODDS_INDEPENDENCE:
        (P, A), (a, b) = witness.sets, witness.elements
        lhs = ExtendedRatio.from_parts(rule.p(a, P), rule.p(b, P), eps=tol)
        rhs = ExtendedRatio.from_parts(rule.p(a, A), rule.p(b, A), eps=tol)
        if rhs.is_indeterminate:
            return False
        if lhs.kind != rhs.kind:
            return True
        return lhs.is_finite and not eq(lhs.value, rhs.value)
    if witness.axiom == Axiom.PRODUCT_RULE:
        (B, A), (a, b) = witness.sets, witness.elements
        return not eq(rule.p(b, B) * rule.p(a, A), rule.p(a, B) * rule.p(b, A))
    if witness.axiom == Axiom.SET_CHOICE_AXIOM:
        C, B, A = witness.sets
        return not eq(rule.p_set(C, A), rule.p_set(C, B) * rule.p_set(B, A))
    if witness.axiom == Axiom.SET_INTERSECTION_RULE:
        Y, B, A = witness.sets
        inter = [y for y in Y if y in B]
        return not eq(rule.p_set(inter, A), rule.p_set(Y, B) * rule.p_set(B, A))
    if witness.axiom == Axiom.POSITIVITY:
        (P,), (a,) = witness.sets, witness.elements
        return not pos(rule.p(a, P))
    if witness.axiom == Axiom.FULL_SUPPORT:
        (A,), (a,) = witness.sets, witness.elements
        return not pos(rule.p(a, A))
    if witness.axiom == Axiom.RENYI_CONDITIONING:
        (B, A), (a,) = witness.sets, witness.elements
        if not pos(rule.p(a, A)):
            return False
        return not eq(rule.p(a, B) * rule.p_set(B, A), rule.p(a, A))
    raise ValueError(f"unknown axiom {witness.axiom!r}")
