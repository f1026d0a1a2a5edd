"""Domain types for finite-universe stochastic choice.

Everything here is immutable after construction and safe to share across
threads. Exact rules carry :class:`fractions.Fraction` probabilities and all
identities on them are decided exactly; float rules carry an explicit
comparison tolerance ``eps``. All iteration is in lexicographic label order
so that derived reports and witnesses are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import FamilySizeError, SubsetViolationError, UnknownChoiceSetError

Value = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

DEFAULT_EPS = 1e-9

# Enumerating all subsets (or all Y <= X in the set-intersection checker) is
# exponential in the universe size; refuse past this point.
MAX_ENUM_UNIVERSE = 16


@dataclass(frozen=True)
class Universe:
    """Finite set of alternatives, stored in lexicographic label order."""

    alternatives: tuple[str, ...]

    def __init__(self, alternatives: Iterable[str]) -> None:
        labels = tuple(sorted(alternatives))
        if not labels:
            raise ValueError("universe must contain at least one alternative")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"labels must be nonempty strings, got {label!r}")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be pairwise distinct")
        object.__setattr__(self, "alternatives", labels)
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.alternatives)

    def __iter__(self) -> Iterator[str]:
        return iter(self.alternatives)

    def __contains__(self, label: object) -> bool:
        return label in self._index  # type: ignore[attr-defined]

    def index(self, label: str) -> int:
        """Position of ``label`` in the lexicographic ordering."""
        return self._index[label]  # type: ignore[attr-defined]

    def subsets(self, *, min_size: int = 1) -> Iterator["ChoiceSet"]:
        """All subsets of at least ``min_size`` elements, in (size, labels) order."""
        if len(self) > MAX_ENUM_UNIVERSE:
            raise FamilySizeError(
                f"refusing to enumerate subsets of a {len(self)}-element universe "
                f"(limit {MAX_ENUM_UNIVERSE})"
            )
        for k in range(min_size, len(self) + 1):
            for combo in itertools.combinations(self.alternatives, k):
                yield ChoiceSet(combo)


@dataclass(frozen=True)
class ChoiceSet:
    """Nonempty set of alternative labels, stored sorted."""

    members: tuple[str, ...]

    def __init__(self, members: Iterable[str]) -> None:
        mem = tuple(sorted(members))
        if not mem:
            raise ValueError("choice sets must be nonempty")
        if len(set(mem)) != len(mem):
            raise ValueError(f"duplicate members in choice set: {mem}")
        object.__setattr__(self, "members", mem)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(self.members)

    def __contains__(self, label: object) -> bool:
        return label in self.members

    def __repr__(self) -> str:
        return "{" + ",".join(self.members) + "}"

    def issubset(self, other: "ChoiceSet") -> bool:
        return set(self.members) <= set(other.members)


def set_sort_key(cs: ChoiceSet) -> tuple[int, tuple[str, ...]]:
    """Canonical family ordering: by size, then lexicographically."""
    return (len(cs.members), cs.members)


@dataclass(frozen=True)
class ChoiceFamily:
    """Finite collection of choice sets over one universe.

    ``all_subsets`` is True exactly when the family is every nonempty subset
    of the universe; checkers report it so that vacuous passes on partial
    data stay visible.
    """

    universe: Universe
    sets: tuple[ChoiceSet, ...]
    all_subsets: bool

    def __init__(self, universe: Universe, sets: Iterable[ChoiceSet]) -> None:
        canon = sorted(sets, key=set_sort_key)
        if not canon:
            raise ValueError("family must contain at least one choice set")
        for prev, cur in zip(canon, canon[1:]):
            if prev == cur:
                raise ValueError(f"duplicate choice set in family: {cur}")
        for cs in canon:
            for a in cs:
                if a not in universe:
                    raise ValueError(f"{cs} contains {a!r}, not in the universe")
        complete = len(canon) == 2 ** len(universe) - 1
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "sets", tuple(canon))
        object.__setattr__(self, "all_subsets", complete)
        object.__setattr__(self, "_pos", {cs: i for i, cs in enumerate(canon)})

    @classmethod
    def of_all_subsets(cls, universe: Universe) -> "ChoiceFamily":
        return cls(universe, universe.subsets())

    @classmethod
    def of_pairs(cls, universe: Universe) -> "ChoiceFamily":
        """All two-element sets plus the full universe."""
        sets = [ChoiceSet(pair) for pair in itertools.combinations(universe, 2)]
        sets.append(ChoiceSet(universe.alternatives))
        return cls(universe, sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[ChoiceSet]:
        return iter(self.sets)

    def __contains__(self, cs: object) -> bool:
        return cs in self._pos  # type: ignore[attr-defined]

    def position(self, cs: ChoiceSet) -> int:
        """Stable index of ``cs`` in the canonical ordering."""
        try:
            return self._pos[cs]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownChoiceSetError(f"{cs} is not in the family") from None

    def contains_all_pairs(self) -> bool:
        if len(self.universe) < 2:
            return True
        return all(
            ChoiceSet(pair) in self
            for pair in itertools.combinations(self.universe, 2)
        )


def _as_exact(value: object, where: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise ValueError(
        f"exact rules need Fraction or int probabilities, got {type(value).__name__} {where}"
    )


@dataclass(frozen=True)
class RandomChoiceRule:
    """A probability distribution over each set of a family.

    The table stores one full row per family set (zeros included), keyed by
    member label. ``mode`` is ``"exact"`` (Fraction arithmetic, identities
    decided exactly) or ``"float"`` (tolerance ``eps``; a value is treated as
    positive when it exceeds ``eps``).
    """

    family: ChoiceFamily
    table: Mapping[ChoiceSet, Mapping[str, Value]]
    mode: str
    eps: float

    def __init__(
        self,
        family: ChoiceFamily,
        table: Mapping[ChoiceSet, Mapping[str, Value]],
        mode: str = EXACT,
        eps: float = DEFAULT_EPS,
    ) -> None:
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"mode must be 'exact' or 'float', got {mode!r}")
        if not (eps > 0.0):
            raise ValueError("eps must be positive")
        extra = set(table) - set(family.sets)
        if extra:
            raise ValueError(f"table rows for sets outside the family: {sorted(map(repr, extra))}")
        canon: dict[ChoiceSet, dict[str, Value]] = {}
        for cs in family:
            if cs not in table:
                raise ValueError(f"missing table row for {cs}")
            row = table[cs]
            unknown = set(row) - set(cs.members)
            if unknown:
                raise ValueError(f"mass assigned outside {cs}: {sorted(unknown)}")
            if mode == EXACT:
                vals = {a: _as_exact(row.get(a, 0), f"at ({a}, {cs})") for a in cs}
                if any(v < 0 or v > 1 for v in vals.values()):
                    raise ValueError(f"probabilities outside [0, 1] on {cs}")
                if sum(vals.values()) != 1:
                    raise ValueError(f"masses on {cs} sum to {sum(vals.values())}, not 1")
                if not any(v > 0 for v in vals.values()):
                    raise ValueError(f"empty support on {cs}")
            else:
                vals = {a: float(row.get(a, 0.0)) for a in cs}
                if any(v < -eps or v > 1.0 + eps for v in vals.values()):
                    raise ValueError(f"probabilities outside [0, 1] (eps={eps}) on {cs}")
                if abs(sum(vals.values()) - 1.0) > eps * len(cs):
                    raise ValueError(f"masses on {cs} sum to {sum(vals.values())}, not 1")
                if not any(v > eps for v in vals.values()):
                    raise ValueError(f"empty support on {cs}")
            canon[cs] = vals
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "table", canon)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "eps", eps)

    @property
    def universe(self) -> Universe:
        return self.family.universe

    @property
    def zero(self) -> Value:
        return Fraction(0) if self.mode == EXACT else 0.0

    def is_positive(self, value: Value) -> bool:
        """Mode-aware positivity: exact ``> 0``, float ``> eps``."""
        if self.mode == EXACT:
            return value > 0
        return value > self.eps

    def row(self, A: ChoiceSet) -> Mapping[str, Value]:
        try:
            return self.table[A]
        except KeyError:
            raise UnknownChoiceSetError(f"{A} is not in the rule's family") from None

    def p(self, a: str, A: ChoiceSet) -> Value:
        """Probability of choosing ``a`` from ``A`` (zero off ``A``)."""
        return self.row(A).get(a, self.zero)

    def p_set(self, B: Iterable[str], A: ChoiceSet) -> Value:
        """Probability that the choice from ``A`` lands in ``B``."""
        row = self.row(A)
        members = B.members if isinstance(B, ChoiceSet) else B
        return sum((row[b] for b in members if b in row), self.zero)

    def support(self, A: ChoiceSet) -> ChoiceSet:
        row = self.row(A)
        return ChoiceSet(a for a, v in row.items() if self.is_positive(v))

    def as_float(self, eps: float | None = None) -> "RandomChoiceRule":
        """Float-mode copy (exact values converted); no-op on float rules."""
        tol = self.eps if eps is None else eps
        table = {A: {a: float(v) for a, v in row.items()} for A, row in self.table.items()}
        return RandomChoiceRule(self.family, table, mode=FLOAT, eps=tol)


@dataclass(frozen=True)
class ExtendedRatio:
    """Odds value: finite nonnegative, infinite, or indeterminate (0/0)."""

    kind: str  # "finite" | "infinite" | "indeterminate"
    value: Value | None = None

    FINITE = "finite"
    INFINITE = "infinite"
    INDETERMINATE = "indeterminate"

    @classmethod
    def from_parts(cls, num: Value, den: Value, *, eps: float = 0.0) -> "ExtendedRatio":
        """Classify ``num/den``; values at or below ``eps`` count as zero."""
        num_pos = num > eps
        den_pos = den > eps
        if den_pos:
            return cls(cls.FINITE, num / den if num_pos else num * 0)
        if num_pos:
            return cls(cls.INFINITE)
        return cls(cls.INDETERMINATE)

    @property
    def is_finite(self) -> bool:
        return self.kind == self.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.kind == self.INFINITE

    @property
    def is_indeterminate(self) -> bool:
        return self.kind == self.INDETERMINATE

    def __repr__(self) -> str:
        if self.is_finite:
            return f"ExtendedRatio({self.value})"
        return f"ExtendedRatio({self.kind})"


@dataclass(frozen=True)
class WeakOrder:
    """Complete transitive preference, stored as dense rank levels (0 = best).

    Completeness and transitivity hold by construction: every alternative
    gets exactly one integer rank, and ``a`` is weakly preferred to ``b``
    exactly when ``rank(a) <= rank(b)``.
    """

    universe: Universe
    ranks: Mapping[str, int]

    def __init__(self, universe: Universe, ranks: Mapping[str, int]) -> None:
        if set(ranks) != set(universe.alternatives):
            raise ValueError("ranks must cover exactly the universe")
        levels = sorted(set(ranks.values()))
        dense = {level: i for i, level in enumerate(levels)}
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "ranks", {a: dense[ranks[a]] for a in universe})

    @classmethod
    def trivial(cls, universe: Universe) -> "WeakOrder":
        """All alternatives indifferent."""
        return cls(universe, {a: 0 for a in universe})

    @classmethod
    def from_classes(cls, universe: Universe, classes: Iterable[Iterable[str]]) -> "WeakOrder":
        """Build from an ordered partition, best class first."""
        ranks: dict[str, int] = {}
        for level, group in enumerate(classes):
            for a in group:
                if a in ranks:
                    raise ValueError(f"{a!r} appears in two classes")
                ranks[a] = level
        return cls(universe, ranks)

    @classmethod
    def from_utility(cls, universe: Universe, u: Mapping[str, float]) -> "WeakOrder":
        """Rank by utility, higher values better."""
        if set(u) != set(universe.alternatives):
            raise ValueError("utility must cover exactly the universe")
        levels = sorted({u[a] for a in universe}, reverse=True)
        level_rank = {lev: i for i, lev in enumerate(levels)}
        return cls(universe, {a: level_rank[u[a]] for a in universe})

    def rank(self, a: str) -> int:
        return self.ranks[a]

    @property
    def num_classes(self) -> int:
        return max(self.ranks.values()) + 1

    def classes(self) -> tuple[tuple[str, ...], ...]:
        """Indifference classes, best first, members sorted."""
        out: list[list[str]] = [[] for _ in range(self.num_classes)]
        for a in self.universe:
            out[self.ranks[a]].append(a)
        return tuple(tuple(group) for group in out)

    def strictly_prefers(self, a: str, b: str) -> bool:
        return self.ranks[a] < self.ranks[b]

    def weakly_prefers(self, a: str, b: str) -> bool:
        return self.ranks[a] <= self.ranks[b]

    def indifferent(self, a: str, b: str) -> bool:
        return self.ranks[a] == self.ranks[b]


@dataclass(frozen=True)
class ChoiceCorrespondence:
    """Map from each family set to a nonempty subset of it."""

    family: ChoiceFamily
    table: Mapping[ChoiceSet, ChoiceSet]

    def __init__(self, family: ChoiceFamily, table: Mapping[ChoiceSet, ChoiceSet]) -> None:
        extra = set(table) - set(family.sets)
        if extra:
            raise ValueError(f"rows for sets outside the family: {sorted(map(repr, extra))}")
        canon: dict[ChoiceSet, ChoiceSet] = {}
        for cs in family:
            if cs not in table:
                raise ValueError(f"missing row for {cs}")
            chosen = table[cs]
            if not chosen.issubset(cs):
                raise ValueError(f"chosen set {chosen} not contained in {cs}")
            canon[cs] = chosen
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "table", canon)

    @property
    def universe(self) -> Universe:
        return self.family.universe

    def gamma(self, A: ChoiceSet) -> ChoiceSet:
        try:
            return self.table[A]
        except KeyError:
            raise UnknownChoiceSetError(f"{A} is not in the correspondence's family") from None


def support(rule: RandomChoiceRule, A: ChoiceSet) -> ChoiceSet:
    """Alternatives chosen from ``A`` with positive probability."""
    return rule.support(A)


def support_correspondence(rule: RandomChoiceRule) -> ChoiceCorrespondence:
    """The correspondence ``A -> supp p_A`` over the rule's family."""
    return ChoiceCorrespondence(rule.family, {A: rule.support(A) for A in rule.family})


def odds(rule: RandomChoiceRule, A: ChoiceSet, B: ChoiceSet, C: ChoiceSet) -> ExtendedRatio:
    """Odds of landing in ``B`` against ``C`` when choosing from ``A``."""
    if not B.issubset(A):
        raise SubsetViolationError(f"{B} is not a subset of {A}")
    if not C.issubset(A):
        raise SubsetViolationError(f"{C} is not a subset of {A}")
    eps = 0.0 if rule.mode == EXACT else rule.eps
    return ExtendedRatio.from_parts(rule.p_set(B, A), rule.p_set(C, A), eps=eps)


def pairwise_odds(rule: RandomChoiceRule, b: str, c: str) -> ExtendedRatio:
    """Binary odds ``p(b, {b,c}) / p(c, {b,c})``."""
    pair = ChoiceSet((b, c))
    return odds(rule, pair, ChoiceSet((b,)), ChoiceSet((c,)))


def maximizers(order: WeakOrder, A: ChoiceSet) -> ChoiceSet:
    """Rank-minimal elements of ``A`` under ``order``."""
    for a in A:
        if a not in order.universe:
            raise SubsetViolationError(f"{a!r} is not in the order's universe")
    best = min(order.rank(a) for a in A)
    return ChoiceSet(a for a in A if order.rank(a) == best)


def correspondence_from_order(order: WeakOrder, family: ChoiceFamily) -> ChoiceCorrespondence:
    """The correspondence picking the preference-maximal elements of each set."""
    if family.universe != order.universe:
        raise ValueError("order and family must share a universe")
    return ChoiceCorrespondence(family, {A: maximizers(order, A) for A in family})


def utility_from_order(order: WeakOrder) -> dict[str, int]:
    """A utility whose argmax on every set equals the order's maximizers."""
    return {a: -order.rank(a) for a in order.universe}
