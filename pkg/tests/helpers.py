"""Shared random-instance builders for the test suite.

Everything here is seeded through an explicit ``random.Random`` so the
corpora are reproducible across runs and machines.
"""

from __future__ import annotations

import random
import string
from fractions import Fraction

from lucekit import (
    ChoiceCorrespondence,
    ChoiceFamily,
    ChoiceSet,
    EXACT,
    LuceWeights,
    RandomChoiceRule,
    Universe,
    WeakOrder,
    correspondence_from_order,
    general_luce_rule,
)


def universe_of(n: int) -> Universe:
    return Universe(string.ascii_lowercase[:n])


def random_weak_order(universe: Universe, rng: random.Random) -> WeakOrder:
    n = len(universe.alternatives)
    levels = rng.randint(1, n)
    return WeakOrder.from_utility(
        universe, {a: float(-rng.randrange(levels)) for a in universe}
    )


def random_rational_weights(universe: Universe, rng: random.Random) -> LuceWeights:
    v = {a: Fraction(rng.randint(1, 12), rng.randint(1, 12)) for a in universe}
    return LuceWeights.from_v(universe, v)


def random_warp_correspondence(
    universe: Universe, rng: random.Random, family: ChoiceFamily | None = None
) -> ChoiceCorrespondence:
    family = family or ChoiceFamily.of_all_subsets(universe)
    return correspondence_from_order(random_weak_order(universe, rng), family)


def random_synthesized_rule(n: int, rng: random.Random) -> RandomChoiceRule:
    """An exact rule of the selective-softmax form on all subsets of n labels."""
    universe = universe_of(n)
    gamma = random_warp_correspondence(universe, rng)
    weights = random_rational_weights(universe, rng)
    return general_luce_rule(gamma, weights)


def perturb_rule(rule: RandomChoiceRule, rng: random.Random) -> RandomChoiceRule:
    """Move a random rational slice of one member's mass to a set-mate.

    The result is always a valid exact rule; it usually (but not always)
    breaks the factorization property the original satisfied.
    """
    candidates = [A for A in rule.family if len(A.members) >= 2]
    A = rng.choice(candidates)
    row = dict(rule.row(A))
    donor = rng.choice([a for a in A if row[a] > 0])
    receiver = rng.choice([a for a in A if a != donor])
    delta = row[donor] * Fraction(1, rng.randint(2, 5))
    row[donor] -= delta
    row[receiver] += delta
    table = {B: dict(rule.row(B)) for B in rule.family}
    table[A] = row
    return RandomChoiceRule(rule.family, table, mode=EXACT)


def build_corpus(
    n_synth: int, n_perturbed: int, seed: int, sizes: tuple[int, ...] = (3, 4, 5)
) -> list[RandomChoiceRule]:
    """``n_synth`` selective-softmax rules plus perturbations of the first few."""
    rng = random.Random(seed)
    synthesized = [
        random_synthesized_rule(sizes[i % len(sizes)], rng) for i in range(n_synth)
    ]
    perturbed = [
        perturb_rule(synthesized[i % len(synthesized)], rng) for i in range(n_perturbed)
    ]
    return synthesized + perturbed
