"""Combinatorial profile generators: encoding, validation, enumeration,
closed-form counting, and observation-conditioned rewriting.

A disorder's valid symptom combinations are described by a sequence of
generators with pairwise-disjoint symptom supports; the full profile set is
the Cartesian product of the per-generator choices, unioned per tuple.
Counting never enumerates: it uses binomial sums and a touched-set
polynomial DP, so profile spaces in the millions stay cheap to size up.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product
from math import comb
from typing import ClassVar, Iterable, Iterator, Union

from .model import DomainError, validate_label, validate_symptom_name

Symbols = frozenset[str]


class SpecValidationError(DomainError):
    def __init__(self, detail: str, path: str | None = None):
        self.detail = detail
        self.path = path
        super().__init__(f"{path}: {detail}" if path else detail)


class PresentOutsideSupportError(DomainError):
    pass


class UnsupportedRewriteError(DomainError):
    pass


def _symbols(items: Iterable[str]) -> Symbols:
    return frozenset(validate_symptom_name(s) for s in items)


@dataclass(frozen=True)
class FixedSet:
    """G0: emits exactly its symptom set (every symptom always required)."""

    symptoms: Symbols
    kind: ClassVar[str] = "G0"

    def __post_init__(self) -> None:
        object.__setattr__(self, "symptoms", _symbols(self.symptoms))


@dataclass(frozen=True)
class SubsetChoice:
    """G1: every subset of `symptoms` with at least `min_size` members."""

    symptoms: Symbols
    min_size: int
    kind: ClassVar[str] = "G1"

    def __post_init__(self) -> None:
        object.__setattr__(self, "symptoms", _symbols(self.symptoms))


@dataclass(frozen=True)
class MultiSetChoice:
    """G2: subsets of the union of `sets` that touch at least `min_sets` of them.

    A touched set may contribute any number of symptoms but counts once.
    """

    sets: tuple[Symbols, ...]
    min_sets: int
    kind: ClassVar[str] = "G2"

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(_symbols(s) for s in self.sets))


@dataclass(frozen=True)
class DisjointPairs:
    """G3: unions A | B for every disjoint pair (A, B) drawn from the two lists."""

    list_a: tuple[Symbols, ...]
    list_b: tuple[Symbols, ...]
    kind: ClassVar[str] = "G3"

    def __post_init__(self) -> None:
        object.__setattr__(self, "list_a", tuple(_symbols(s) for s in self.list_a))
        object.__setattr__(self, "list_b", tuple(_symbols(s) for s in self.list_b))


@dataclass(frozen=True)
class TieredChoice:
    """G4: like G2 over two lists, with per-list touch minima and a combined one."""

    list_a: tuple[Symbols, ...]
    list_b: tuple[Symbols, ...]
    min_a: int
    min_b: int
    min_total: int
    kind: ClassVar[str] = "G4"

    def __post_init__(self) -> None:
        object.__setattr__(self, "list_a", tuple(_symbols(s) for s in self.list_a))
        object.__setattr__(self, "list_b", tuple(_symbols(s) for s in self.list_b))


GeneratorSpec = Union[FixedSet, SubsetChoice, MultiSetChoice, DisjointPairs, TieredChoice]


@dataclass(frozen=True)
class DisorderSpec:
    """A disorder as a sequence of generators with pairwise-disjoint supports."""

    label: str
    generators: tuple[GeneratorSpec, ...]

    def __post_init__(self) -> None:
        validate_label(self.label)
        object.__setattr__(self, "generators", tuple(self.generators))


# ---------------------------------------------------------------------------
# validation

def support(g: GeneratorSpec) -> Symbols:
    """All symptoms a generator can ever place in a profile."""
    if isinstance(g, (FixedSet, SubsetChoice)):
        return g.symptoms
    if isinstance(g, MultiSetChoice):
        return frozenset().union(*g.sets) if g.sets else frozenset()
    if isinstance(g, DisjointPairs):
        return frozenset().union(*g.list_a, *g.list_b)
    if isinstance(g, TieredChoice):
        return frozenset().union(frozenset(), *g.list_a, *g.list_b)
    raise SpecValidationError(f"unknown generator type {type(g).__name__}")


def disorder_support(d: DisorderSpec) -> Symbols:
    return frozenset().union(*(support(g) for g in d.generators)) if d.generators else frozenset()


def _check_disjoint_sets(sets: Iterable[Symbols], what: str, path: str | None) -> None:
    seen: set[str] = set()
    for s in sets:
        overlap = seen & s
        if overlap:
            raise SpecValidationError(
                f"{what} share symptoms {sorted(overlap)}; sets must be disjoint", path
            )
        seen |= s


def validate_generator(g: GeneratorSpec, path: str | None = None) -> None:
    if isinstance(g, FixedSet):
        return
    if isinstance(g, SubsetChoice):
        if g.min_size < 0:
            raise SpecValidationError("k must be non-negative", path)
        if g.min_size > len(g.symptoms):
            raise SpecValidationError("k exceeds set size", path)
        return
    if isinstance(g, MultiSetChoice):
        if any(not s for s in g.sets):
            raise SpecValidationError("G2 sets must be non-empty", path)
        if g.min_sets < 0:
            raise SpecValidationError("k must be non-negative", path)
        if g.min_sets > len(g.sets):
            raise SpecValidationError("k exceeds the number of sets", path)
        _check_disjoint_sets(g.sets, "G2 sets", path)
        return
    if isinstance(g, DisjointPairs):
        if not g.list_a or not g.list_b:
            raise SpecValidationError("G3 lists must both be non-empty", path)
        if any(not s for s in g.list_a + g.list_b):
            raise SpecValidationError("G3 sets must be non-empty", path)
        return
    if isinstance(g, TieredChoice):
        if any(not s for s in g.list_a + g.list_b):
            raise SpecValidationError("G4 sets must be non-empty", path)
        if g.min_a < 0 or g.min_b < 0 or g.min_total < 0:
            raise SpecValidationError("G4 minima must be non-negative", path)
        if g.min_a > len(g.list_a):
            raise SpecValidationError("r exceeds the size of the first list", path)
        if g.min_b > len(g.list_b):
            raise SpecValidationError("s exceeds the size of the second list", path)
        if g.min_total > len(g.list_a) + len(g.list_b):
            raise SpecValidationError("t exceeds the combined list size", path)
        _check_disjoint_sets(g.list_a + g.list_b, "G4 sets", path)
        return
    raise SpecValidationError(f"unknown generator type {type(g).__name__}", path)


def validate_disorder(d: DisorderSpec, path: str | None = None) -> None:
    if not d.generators:
        raise SpecValidationError("at least one generator required", path)
    for i, g in enumerate(d.generators):
        validate_generator(g, f"{path}.generators[{i}]" if path else None)
    seen: set[str] = set()
    for i, g in enumerate(d.generators):
        overlap = seen & support(g)
        if overlap:
            raise SpecValidationError(
                f"generator supports overlap on {sorted(overlap)}; "
                "generators of one disorder must cover disjoint symptoms",
                f"{path}.generators[{i}]" if path else None,
            )
        seen |= support(g)


# ---------------------------------------------------------------------------
# enumeration

def _ordered(symbols: Iterable[str]) -> list[str]:
    return sorted(symbols)


def _touches(candidate: Symbols, sets: tuple[Symbols, ...]) -> int:
    return sum(1 for s in sets if candidate & s)


def enumerate_sets(g: GeneratorSpec) -> Iterator[Symbols]:
    """Stream every valid symptom set of a generator exactly once.

    Emission order is pinned: ascending cardinality, then lexicographic on
    the sorted symptom tuple, so streams are reproducible across runs.
    """
    validate_generator(g)
    return _enumerate_validated(g)


def _enumerate_validated(g: GeneratorSpec) -> Iterator[Symbols]:
    if isinstance(g, FixedSet):
        yield g.symptoms
        return
    if isinstance(g, SubsetChoice):
        pool = _ordered(g.symptoms)
        for size in range(g.min_size, len(pool) + 1):
            for combo in combinations(pool, size):
                yield frozenset(combo)
        return
    if isinstance(g, MultiSetChoice):
        pool = _ordered(frozenset().union(frozenset(), *g.sets))
        for size in range(g.min_sets, len(pool) + 1):
            for combo in combinations(pool, size):
                cand = frozenset(combo)
                if _touches(cand, g.sets) >= g.min_sets:
                    yield cand
        return
    if isinstance(g, DisjointPairs):
        unions = {a | b for a, b in product(g.list_a, g.list_b) if not (a & b)}
        for s in sorted(unions, key=lambda u: (len(u), tuple(sorted(u)))):
            yield s
        return
    if isinstance(g, TieredChoice):
        pool = _ordered(support(g))
        floor = max(g.min_total, g.min_a + g.min_b)
        for size in range(floor, len(pool) + 1):
            for combo in combinations(pool, size):
                cand = frozenset(combo)
                ca = _touches(cand, g.list_a)
                cb = _touches(cand, g.list_b)
                if ca >= g.min_a and cb >= g.min_b and ca + cb >= g.min_total:
                    yield cand
        return
    raise SpecValidationError(f"unknown generator type {type(g).__name__}")


def enumerate_disorder(d: DisorderSpec) -> Iterator[Symbols]:
    """Stream every distinct union of one choice per generator.

    Disjoint supports make the unions automatically distinct, so the stream
    is duplicate-free without tracking.
    """
    validate_disorder(d)
    pools = [list(_enumerate_validated(g)) for g in d.generators]
    for combo in product(*pools):
        yield frozenset().union(*combo)


# ---------------------------------------------------------------------------
# closed-form counting

def _touch_poly(sets: tuple[Symbols, ...]) -> list[int]:
    """dp[j] = number of subsets of the union touching exactly j sets."""
    dp = [1]
    for s in sets:
        ways = (1 << len(s)) - 1
        nxt = [0] * (len(dp) + 1)
        for j, v in enumerate(dp):
            nxt[j] += v
            nxt[j + 1] += v * ways
        dp = nxt
    return dp


def count(g: GeneratorSpec) -> int:
    """Number of sets enumerate_sets(g) would yield, without enumerating.

    G1 uses binomial sums, G2/G4 a polynomial DP over touched-set counts;
    G3 counts distinct disjoint-pair unions (two pairs can union to the same
    set, so raw pair counting would overshoot).
    """
    validate_generator(g)
    if isinstance(g, FixedSet):
        return 1
    if isinstance(g, SubsetChoice):
        n = len(g.symptoms)
        return sum(comb(n, i) for i in range(g.min_size, n + 1))
    if isinstance(g, MultiSetChoice):
        dp = _touch_poly(g.sets)
        return sum(dp[g.min_sets:])
    if isinstance(g, DisjointPairs):
        return len({a | b for a, b in product(g.list_a, g.list_b) if not (a & b)})
    if isinstance(g, TieredChoice):
        dp_a = _touch_poly(g.list_a)
        dp_b = _touch_poly(g.list_b)
        total = 0
        for i, va in enumerate(dp_a):
            if i < g.min_a or not va:
                continue
            for j, vb in enumerate(dp_b):
                if j >= g.min_b and i + j >= g.min_total:
                    total += va * vb
        return total
    raise SpecValidationError(f"unknown generator type {type(g).__name__}")


def count_disorder(d: DisorderSpec) -> int:
    """Product of per-generator counts; exact because supports are disjoint."""
    validate_disorder(d)
    total = 1
    for g in d.generators:
        total *= count(g)
    return total


# ---------------------------------------------------------------------------
# observation-conditioned rewriting

def g3_exclusion_check(d: DisorderSpec, present: Iterable[str]) -> bool:
    """True when present symptoms land in two alternative sets of one G3 list.

    A G3 profile picks exactly one set per list, so observed symptoms spread
    over separate alternatives of the same list cannot co-occur, and the
    disorder can be dropped outright.
    """
    p = frozenset(present)
    if not p:
        return False
    for g in d.generators:
        if not isinstance(g, DisjointPairs):
            continue
        for side in (g.list_a, g.list_b):
            touched = sum(1 for s in side if s & p)
            if touched >= 2:
                return True
    return False


def apply_absent(d: DisorderSpec, absent: Iterable[str]) -> DisorderSpec | None:
    """Remove absent symptoms from every set; None when no profile can comply.

    G1 keeps its minimum over the shrunken set, G2/G4 drop emptied sets and
    fail when a touch minimum exceeds the sets left, G3 drops alternatives
    that contain an absent symptom and fails when a list empties.
    """
    a = frozenset(absent)
    if not a or not (a & disorder_support(d)):
        return d
    rewritten: list[GeneratorSpec] = []
    for g in d.generators:
        if not (support(g) & a):
            rewritten.append(g)
            continue
        if isinstance(g, FixedSet):
            return None  # a required symptom is observed absent
        if isinstance(g, SubsetChoice):
            kept = g.symptoms - a
            if g.min_size > len(kept):
                return None
            rewritten.append(SubsetChoice(kept, g.min_size))
        elif isinstance(g, MultiSetChoice):
            sets = tuple(s - a for s in g.sets)
            sets = tuple(s for s in sets if s)
            if g.min_sets > len(sets):
                return None
            rewritten.append(MultiSetChoice(sets, g.min_sets))
        elif isinstance(g, DisjointPairs):
            list_a = tuple(s for s in g.list_a if not (s & a))
            list_b = tuple(s for s in g.list_b if not (s & a))
            if not list_a or not list_b:
                return None
            rewritten.append(DisjointPairs(list_a, list_b))
        elif isinstance(g, TieredChoice):
            la = tuple(s for s in (s - a for s in g.list_a) if s)
            lb = tuple(s for s in (s - a for s in g.list_b) if s)
            if g.min_a > len(la) or g.min_b > len(lb) or g.min_total > len(la) + len(lb):
                return None
            rewritten.append(TieredChoice(la, lb, g.min_a, g.min_b, g.min_total))
        else:
            raise SpecValidationError(f"unknown generator type {type(g).__name__}")
    return replace(d, generators=tuple(rewritten))


def _degrade_tiered(
    la: tuple[Symbols, ...],
    lb: tuple[Symbols, ...],
    min_a: int,
    min_b: int,
    min_total: int,
) -> list[GeneratorSpec]:
    """Express a (possibly list-depleted) G4 with the smallest generator that fits."""
    if la and lb:
        return [TieredChoice(la, lb, min_a, min_b, min_total)]
    if la:
        return [MultiSetChoice(la, max(min_a, min_total))]
    if lb:
        return [MultiSetChoice(lb, max(min_b, min_total))]
    return []


def simplify_max(d: DisorderSpec, present: Iterable[str]) -> DisorderSpec:
    """Condition a disorder on symptoms observed present, factoring them out.

    Each generator touched by `present` is rewritten so that enumeration
    produces exactly the original profiles that contain all the observed
    symptoms: the matched symptoms become a fixed component and the touched
    generator's minimum drops by what the match already satisfied. G3
    components pass through untouched (g3_exclusion_check owns their
    handling).
    """
    p = frozenset(present)
    validate_disorder(d)
    outside = p - disorder_support(d)
    if outside:
        raise PresentOutsideSupportError(
            f"present symptoms {sorted(outside)} are outside the support of {d.label!r}"
        )
    if not p:
        return d
    rewritten: list[GeneratorSpec] = []
    for g in d.generators:
        hit = support(g) & p
        if not hit or isinstance(g, DisjointPairs):
            rewritten.append(g)
            continue
        if isinstance(g, FixedSet):
            rewritten.append(g)  # already forces every symptom, nothing to factor
            continue
        if isinstance(g, SubsetChoice):
            rest = g.symptoms - hit
            rewritten.append(FixedSet(hit))
            rewritten.append(SubsetChoice(rest, max(g.min_size - len(hit), 0)))
            continue
        if isinstance(g, MultiSetChoice):
            touched = [s for s in g.sets if s & p]
            untouched = tuple(s for s in g.sets if not (s & p))
            leftover = frozenset().union(*(s - p for s in touched))
            rewritten.append(FixedSet(hit))
            if leftover:
                rewritten.append(SubsetChoice(leftover, 0))
            if untouched:
                rewritten.append(MultiSetChoice(untouched, max(g.min_sets - len(touched), 0)))
            continue
        if isinstance(g, TieredChoice):
            touched_a = [s for s in g.list_a if s & p]
            touched_b = [s for s in g.list_b if s & p]
            la = tuple(s for s in g.list_a if not (s & p))
            lb = tuple(s for s in g.list_b if not (s & p))
            leftover = frozenset().union(frozenset(), *(s - p for s in touched_a + touched_b))
            rewritten.append(FixedSet(hit))
            if leftover:
                rewritten.append(SubsetChoice(leftover, 0))
            rewritten.extend(
                _degrade_tiered(
                    la,
                    lb,
                    max(g.min_a - len(touched_a), 0),
                    max(g.min_b - len(touched_b), 0),
                    max(g.min_total - len(touched_a) - len(touched_b), 0),
                )
            )
            continue
        raise SpecValidationError(f"unknown generator type {type(g).__name__}")
    return replace(d, generators=tuple(rewritten))


def simplify_min(a: DisorderSpec, b: DisorderSpec) -> tuple[DisorderSpec, DisorderSpec]:
    """Shrink two single-G1 disorders to representative minimal-difference forms.

    After factoring out the mutual overlap, each residual subset choice
    [R, k] is collapsed to its lexicographically smallest k-subset, which
    pins the arbitrary representative deterministically.
    """
    for d in (a, b):
        validate_disorder(d)
        if len(d.generators) != 1 or not isinstance(d.generators[0], SubsetChoice):
            raise UnsupportedRewriteError(
                f"difference minimization only supports single-G1 disorders, got {d.label!r}"
            )
    ga: SubsetChoice = a.generators[0]
    gb: SubsetChoice = b.generators[0]
    overlap = ga.symptoms & gb.symptoms

    def shrink(d: DisorderSpec, g: SubsetChoice) -> DisorderSpec:
        rest = g.symptoms - overlap
        k = max(g.min_size - len(overlap), 0)
        representative = frozenset(sorted(rest)[:k])
        parts: list[GeneratorSpec] = []
        if overlap:
            parts.append(FixedSet(overlap))
        parts.append(SubsetChoice(representative, k))
        return replace(d, generators=tuple(parts))

    return shrink(a, ga), shrink(b, gb)


# ---------------------------------------------------------------------------
# display

def _brace(s: Symbols) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def bracket_notation(d: DisorderSpec) -> str:
    """Compact human-readable rendering of a disorder's generator sequence."""
    parts = []
    for g in d.generators:
        if isinstance(g, FixedSet):
            parts.append(f"[{_brace(g.symptoms)}]")
        elif isinstance(g, SubsetChoice):
            parts.append(f"[{_brace(g.symptoms)}, {g.min_size}]")
        elif isinstance(g, MultiSetChoice):
            inner = ",".join(_brace(s) for s in g.sets)
            parts.append(f"[{inner}, {g.min_sets}]")
        elif isinstance(g, DisjointPairs):
            la = ",".join(_brace(s) for s in g.list_a)
            lb = ",".join(_brace(s) for s in g.list_b)
            parts.append(f"[[{la}],[{lb}]]")
        elif isinstance(g, TieredChoice):
            la = ",".join(_brace(s) for s in g.list_a)
            lb = ",".join(_brace(s) for s in g.list_b)
            parts.append(f"[[{la}],[{lb}], ({g.min_a},{g.min_b},{g.min_total})]")
    return ", ".join(parts)
