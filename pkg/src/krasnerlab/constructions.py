"""Derived structures: products, quotients, substructures, homomorphisms.

All constructions are single-shot and deterministic; the results are ordinary
immutable structures.  Well-definedness is always verified per instance and
surfaced as an error, never assumed: quotients in particular may fail to
partition the carrier for subsets that only satisfy the weak hyperideal
conditions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ideals import Hyperideal, PredicateOutcome, members_of
from .structures import (
    AxiomFailure,
    AxiomReport,
    KrasnerError,
    KrasnerStructure,
    multisets,
)


class NotAPartitionError(KrasnerError):
    """Cosets overlap without coinciding; the subset cannot induce a quotient."""

    def __init__(self, message: str, cosets: Sequence[frozenset[int]] = ()):
        super().__init__(message)
        self.cosets = tuple(cosets)


class WellDefinednessError(KrasnerError):
    """An induced operation depends on the choice of representatives."""


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def pair_index(x: int, y: int, size2: int) -> int:
    return x * size2 + y


def product(s1: KrasnerStructure, s2: KrasnerStructure) -> KrasnerStructure:
    """Componentwise product structure on the row-major flattened carrier.

    f of the product is the set product of the component values, g is
    componentwise.  zero is the pair of zeros; one is the pair of ones when
    both components designate one.
    """
    if (s1.m, s1.n) != (s2.m, s2.n):
        raise ValueError(
            f"arity mismatch: ({s1.m},{s1.n}) vs ({s2.m},{s2.n})")
    n2 = s2.size
    labels = tuple(f"({a},{b})" for a in s1.labels for b in s2.labels)
    size = s1.size * n2
    f = {}
    for tup in multisets(size, s1.m):
        xs = tuple(sorted(t // n2 for t in tup))
        ys = tuple(sorted(t % n2 for t in tup))
        f[tup] = frozenset(pair_index(a, b, n2)
                           for a in s1.f[xs] for b in s2.f[ys])
    g = {}
    for tup in multisets(size, s1.n):
        xs = tuple(sorted(t // n2 for t in tup))
        ys = tuple(sorted(t % n2 for t in tup))
        g[tup] = pair_index(s1.g[xs], s2.g[ys], n2)
    one = None
    if s1.one is not None and s2.one is not None:
        one = pair_index(s1.one, s2.one, n2)
    return KrasnerStructure(
        name=f"{s1.name}x{s2.name}", m=s1.m, n=s1.n, labels=labels,
        f=f, g=g, zero=pair_index(s1.zero, s2.zero, n2), one=one)


def lift_ideal_product(s1: KrasnerStructure, s2: KrasnerStructure,
                       ideal1: "Hyperideal | Iterable[int]") -> frozenset[int]:
    """I x R2 inside the product carrier (row-major indexing)."""
    mem = members_of(ideal1)
    return frozenset(pair_index(a, b, s2.size)
                     for a in mem for b in range(s2.size))


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientMap:
    """A successful quotient construction.

    ``cosets`` partition the source carrier (sorted by smallest member, which
    is also the representative).  ``quotient`` is the induced structure; its
    element i corresponds to ``cosets[i]``.  ``report`` is the axiom report
    of the induced structure (construction fails unless it passes).
    """

    source: KrasnerStructure
    ideal: frozenset[int]
    cosets: tuple[frozenset[int], ...]
    representatives: tuple[int, ...]
    quotient: KrasnerStructure
    report: "AxiomReport"

    def coset_index_of(self, x: int) -> int:
        for i, c in enumerate(self.cosets):
            if x in c:
                return i
        raise ValueError(f"element {x} not covered by the cosets")

    def lift(self, members: Iterable[int]) -> frozenset[int]:
        """Quotient elements whose coset meets the given source subset."""
        mem = frozenset(members)
        return frozenset(i for i, c in enumerate(self.cosets) if c & mem)

    def as_homomorphism(self) -> "Homomorphism":
        return Homomorphism(self.source, self.quotient,
                            tuple(self.coset_index_of(x)
                                  for x in self.source.elements))


def quotient(s: KrasnerStructure,
             ideal: "Hyperideal | Iterable[int]") -> QuotientMap:
    """Quotient of the structure by a hyperideal J.

    The coset of x is f(x, J, zero^(m-2)) (commutativity makes the position
    irrelevant).  The construction checks, in order: that the cosets
    partition the carrier (otherwise ``NotAPartitionError``), that the
    induced f and g are independent of representative choices (otherwise
    ``WellDefinednessError``), and that the induced structure passes
    ``verify_axioms`` (otherwise ``AxiomFailure``).  Strict hyperideals are
    the intended input; weak-only subsets frequently fail the partition
    check and the failure is surfaced, not patched.
    """
    mem = members_of(ideal)
    if not mem or not mem <= s.carrier:
        raise ValueError("quotient ideal must be a nonempty carrier subset")
    pad = (s.zero,) * (s.m - 2)
    coset_of = []
    for x in s.elements:
        c: set[int] = set()
        for j in sorted(mem):
            c |= s.f[tuple(sorted((x, j) + pad))]
        coset_of.append(frozenset(c))
    classes: list[frozenset[int]] = []
    for c in coset_of:
        if c not in classes:
            classes.append(c)
    covered: set[int] = set()
    for c in classes:
        if covered & c:
            a = next(iter(covered & c))
            raise NotAPartitionError(
                f"cosets of {s.name} by {s.render_set(mem)} overlap at "
                f"{s.labels[a]} without coinciding", classes)
        covered |= c
    if covered != set(s.elements):
        raise NotAPartitionError(
            f"cosets of {s.name} by {s.render_set(mem)} do not cover the carrier",
            classes)
    for x in s.elements:
        if x not in coset_of[x]:
            raise NotAPartitionError(
                f"element {s.labels[x]} does not belong to its own coset", classes)
    classes.sort(key=min)
    index_of = {}
    for i, c in enumerate(classes):
        for x in c:
            index_of[x] = i
    reps = tuple(min(c) for c in classes)
    qsize = len(classes)

    f = {}
    for tup in multisets(qsize, s.m):
        value = None
        for combo in itertools.product(*[sorted(classes[i]) for i in tup]):
            v = frozenset(index_of[w] for w in s.f[tuple(sorted(combo))])
            if value is None:
                value = v
            elif v != value:
                raise WellDefinednessError(
                    f"induced hyperoperation on {s.name}/{s.render_set(mem)} "
                    f"depends on representatives at classes {tup}")
        f[tup] = value
    g = {}
    for tup in multisets(qsize, s.n):
        value = None
        for combo in itertools.product(*[sorted(classes[i]) for i in tup]):
            v = index_of[s.g[tuple(sorted(combo))]]
            if value is None:
                value = v
            elif v != value:
                raise WellDefinednessError(
                    f"induced operation on {s.name}/{s.render_set(mem)} "
                    f"depends on representatives at classes {tup}")
        g[tup] = value

    labels = tuple("[" + s.labels[r] + "]" for r in reps)
    one = index_of[s.one] if s.one is not None else None
    q = KrasnerStructure(name=f"{s.name}/{{{','.join(s.render_set(mem))}}}",
                         m=s.m, n=s.n, labels=labels, f=f, g=g,
                         zero=index_of[s.zero], one=one)
    report = q.verify_axioms()
    if not report.overall:
        raise AxiomFailure(f"quotient of {s.name} fails verification", report)
    return QuotientMap(s, mem, tuple(classes), reps, q, report)


def lift_to_quotient(q: QuotientMap, members: Iterable[int]) -> frozenset[int]:
    """Cosets meeting a source subset: builds I/J from I and Sbar from S."""
    return q.lift(members)


# ---------------------------------------------------------------------------
# substructures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubstructureEmbedding:
    """A carrier subset closed under f and g, with the restricted structure.

    ``structure`` re-indexes the subset densely; ``elements`` lists the
    ambient indices in the same order.  A designated one on the restriction
    is inherited from the ambient structure when possible and otherwise
    detected by scanning for elements satisfying the identity law (smallest
    such element wins; ties are possible for higher arities).
    """

    ambient: KrasnerStructure
    carrier_subset: frozenset[int]
    elements: tuple[int, ...]
    structure: KrasnerStructure

    def to_sub(self, members: Iterable[int]) -> frozenset[int]:
        lookup = {e: i for i, e in enumerate(self.elements)}
        return frozenset(lookup[x] for x in members if x in lookup)

    def to_ambient(self, members: Iterable[int]) -> frozenset[int]:
        return frozenset(self.elements[i] for i in members)


def _restrict(s: KrasnerStructure, subset: frozenset[int]) -> SubstructureEmbedding:
    els = tuple(sorted(subset))
    lookup = {e: i for i, e in enumerate(els)}
    f = {}
    for tup in multisets(len(els), s.m):
        f[tup] = frozenset(lookup[v] for v in s.f[tuple(els[i] for i in tup)])
    g = {}
    for tup in multisets(len(els), s.n):
        g[tup] = lookup[s.g[tuple(els[i] for i in tup)]]
    sub = KrasnerStructure(
        name=f"{s.name}|{{{','.join(s.labels[e] for e in els)}}}",
        m=s.m, n=s.n, labels=tuple(s.labels[e] for e in els),
        f=f, g=g, zero=lookup[s.zero], one=None)
    one = None
    if s.one is not None and s.one in subset and s.identity_law_holds():
        one = lookup[s.one]
    else:
        detected = sub.scalar_identities()
        if detected:
            one = detected[0]
    if one is not None:
        sub = KrasnerStructure(name=sub.name, m=sub.m, n=sub.n,
                               labels=sub.labels, f=f, g=g,
                               zero=sub.zero, one=one)
    return SubstructureEmbedding(s, subset, els, sub)


def enumerate_subhyperrings(s: KrasnerStructure,
                            bound: int = 16) -> list[SubstructureEmbedding]:
    """All zero-containing subsets closed under f (set values inside the
    subset) and g, as embeddings with induced structures.

    Closure is the enumeration criterion; whether a restriction satisfies
    the full axiom set is for the caller to verify (``verify_axioms`` on the
    embedded structure).
    """
    if s.size > bound:
        from .structures import BoundExceededError
        raise BoundExceededError(
            f"carrier size {s.size} exceeds enumeration bound {bound}")
    out = []
    for mask in range(1, 1 << s.size):
        if not mask >> s.zero & 1:
            continue
        cand = frozenset(i for i in range(s.size) if mask >> i & 1)
        members = sorted(cand)
        if not all(s.f[tup] <= cand
                   for tup in itertools.combinations_with_replacement(members, s.m)):
            continue
        if not all(s.g[tup] in cand
                   for tup in itertools.combinations_with_replacement(members, s.n)):
            continue
        out.append(_restrict(s, cand))
    return out


def restrict_ideal(embedding: SubstructureEmbedding,
                   ideal: "Hyperideal | Iterable[int]") -> frozenset[int]:
    """I intersected with the sub-carrier, in ambient indices.

    Use ``embedding.to_sub`` to express the result inside the restricted
    structure (for hyperideal checks there).
    """
    return members_of(ideal) & embedding.carrier_subset


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    """A total element map between two structures of the same arities."""

    source: KrasnerStructure
    target: KrasnerStructure
    mapping: tuple[int, ...]

    def __post_init__(self):
        if (self.source.m, self.source.n) != (self.target.m, self.target.n):
            raise ValueError("homomorphism requires matching arities")
        if len(self.mapping) != self.source.size:
            raise ValueError("mapping must be total on the source carrier")
        if not all(0 <= v < self.target.size for v in self.mapping):
            raise ValueError("mapping image outside the target carrier")

    def apply(self, x: int) -> int:
        return self.mapping[x]

    def image(self, members: Iterable[int]) -> frozenset[int]:
        return frozenset(self.mapping[x] for x in members)


def verify_homomorphism(h: Homomorphism) -> PredicateOutcome:
    """Exhaustive check of both structure equations over all multisets."""
    s1, s2, hm = h.source, h.target, h.mapping
    for tup in multisets(s1.size, s1.m):
        lhs = frozenset(hm[v] for v in s1.f[tup])
        rhs = s2.f[tuple(sorted(hm[x] for x in tup))]
        if lhs != rhs:
            return PredicateOutcome.fail([tup], reason="f_equation")
    for tup in multisets(s1.size, s1.n):
        if hm[s1.g[tup]] != s2.g[tuple(sorted(hm[x] for x in tup))]:
            return PredicateOutcome.fail([tup], reason="g_equation")
    return PredicateOutcome.hold()


def preimage_ideal(h: Homomorphism,
                   ideal: "Hyperideal | Iterable[int]") -> frozenset[int]:
    """{ x : h(x) in I } for an ideal of the target."""
    mem = members_of(ideal)
    return frozenset(x for x in h.source.elements if h.mapping[x] in mem)
