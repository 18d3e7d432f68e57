"""Hyperideal recognition, enumeration, radicals, and prime/primary predicates.

Every predicate returns a three-valued :class:`PredicateOutcome` instead of a
bare bool: universal statements that fail carry concrete counterexample
multisets, existential ones carry their full witness set, and statements
whose preconditions are not met come back ``inapplicable`` with a reason.

Two hyperideal modes are supported everywhere:

* ``weak``  -- closure of f inside the subset, zero membership, and
  absorption of g in every position;
* ``strict`` -- weak plus solvability of ``b in f(B, x)`` within the subset
  (the subhypergroup equation condition).

Some well-known small structures satisfy only the weak form for subsets one
would still like to treat as hyperideals, so the mode is an explicit
parameter on every operation and reports always state it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .structures import (
    BoundExceededError,
    IdentityAbsentError,
    KrasnerStructure,
    multisets,
)

HOLDS = "holds"
FAILS = "fails"
INAPPLICABLE = "inapplicable"

MODES = ("weak", "strict")


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown hyperideal mode {mode!r}; expected one of {MODES}")
    return mode


@dataclass(frozen=True)
class PredicateOutcome:
    """Result of one predicate evaluation.

    ``witnesses`` is the complete set of elements validating an existential
    predicate (never just the first hit).  ``counterexample`` is the smallest
    offending tuple in lexicographic order and ``counterexamples`` the full
    ordered list, so a specific instance can be located even when it is not
    the smallest one.  For witnessed predicates that fail,
    ``per_candidate`` maps every candidate witness to one multiset it
    cannot handle.
    """

    verdict: str
    witnesses: frozenset[int] = frozenset()
    counterexample: tuple[int, ...] | None = None
    counterexamples: tuple[tuple[int, ...], ...] = ()
    per_candidate: Mapping[int, tuple[int, ...]] | None = None
    reason: str | None = None

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    @property
    def failed(self) -> bool:
        return self.verdict == FAILS

    @property
    def inapplicable(self) -> bool:
        return self.verdict == INAPPLICABLE

    @staticmethod
    def hold(witnesses: Iterable[int] = ()) -> "PredicateOutcome":
        return PredicateOutcome(HOLDS, witnesses=frozenset(witnesses))

    @staticmethod
    def fail(counterexamples: Sequence[tuple[int, ...]] = (),
             per_candidate: Mapping[int, tuple[int, ...]] | None = None,
             reason: str | None = None) -> "PredicateOutcome":
        ordered = tuple(sorted(counterexamples))
        first = ordered[0] if ordered else None
        if first is None and per_candidate:
            first = per_candidate[min(per_candidate)]
        return PredicateOutcome(FAILS, counterexample=first,
                                counterexamples=ordered,
                                per_candidate=per_candidate, reason=reason)

    @staticmethod
    def na(reason: str) -> "PredicateOutcome":
        return PredicateOutcome(INAPPLICABLE, reason=reason)

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        def render(t):
            if t is None:
                return None
            if labels is None:
                return list(t)
            return [labels[i] for i in t]

        out = {
            "verdict": self.verdict,
            "witnesses": render(sorted(self.witnesses)),
            "counterexample": render(self.counterexample),
            "counterexamples": [render(c) for c in self.counterexamples],
            "reason": self.reason,
        }
        if self.per_candidate is not None:
            key = (lambda s: labels[s]) if labels is not None else (lambda s: s)
            out["per_candidate"] = {str(key(s)): render(t)
                                    for s, t in sorted(self.per_candidate.items())}
        return out


@dataclass(frozen=True)
class Hyperideal:
    """A validated hyperideal: construction fails unless the subset passes
    :func:`is_hyperideal` under the stated mode."""

    structure: KrasnerStructure
    members: frozenset[int]
    mode: str


def hyperideal(s: KrasnerStructure, members: Iterable[int],
               mode: str = "weak") -> Hyperideal:
    mem = frozenset(members)
    outcome = is_hyperideal(s, mem, mode)
    if not outcome.holds:
        raise ValueError(
            f"{sorted(mem)} is not a {mode} hyperideal of {s.name}: {outcome.reason}")
    return Hyperideal(s, mem, _check_mode(mode))


def members_of(ideal: "Hyperideal | Iterable[int]") -> frozenset[int]:
    if isinstance(ideal, Hyperideal):
        return ideal.members
    return frozenset(ideal)


# ---------------------------------------------------------------------------
# recognition and enumeration
# ---------------------------------------------------------------------------

def is_hyperideal(s: KrasnerStructure, members: Iterable[int],
                  mode: str = "weak") -> PredicateOutcome:
    """Decide whether a subset is a hyperideal under the given mode.

    Weak mode checks zero membership, closure of f on member multisets, and
    absorption of g for every ambient coefficient multiset.  Strict mode
    additionally requires each equation ``b in f(B, x)`` with b and B drawn
    from the subset to have a solution x inside the subset.

    A failing outcome names the violated condition in ``reason`` and lists
    every offending tuple of that condition.  Solvability counterexamples
    are encoded as ``(b, *B)``.
    """
    _check_mode(mode)
    mem = frozenset(members)
    if not mem:
        raise ValueError("hyperideal candidate must be nonempty")
    if not mem <= s.carrier:
        raise ValueError("members outside the carrier")
    if s.zero not in mem:
        return PredicateOutcome.fail([(s.zero,)], reason="zero_missing")

    bad = [tup for tup in itertools.combinations_with_replacement(sorted(mem), s.m)
           if not s.f[tup] <= mem]
    if bad:
        return PredicateOutcome.fail(bad, reason="f_closure")

    bad = []
    for coeffs in multisets(s.size, s.n - 1):
        for i in sorted(mem):
            if s.g[tuple(sorted(coeffs + (i,)))] not in mem:
                bad.append(coeffs + (i,))
    if bad:
        return PredicateOutcome.fail(bad, reason="g_absorption")

    if mode == "strict":
        bad = []
        for base in itertools.combinations_with_replacement(sorted(mem), s.m - 1):
            for b in sorted(mem):
                if not any(b in s.f[tuple(sorted(base + (x,)))] for x in sorted(mem)):
                    bad.append((b,) + base)
        if bad:
            return PredicateOutcome.fail(bad, reason="f_solvability")

    return PredicateOutcome.hold()


def enumerate_hyperideals(s: KrasnerStructure, mode: str = "weak",
                          proper_only: bool = False,
                          bound: int = 16) -> list[frozenset[int]]:
    """All hyperideals under the mode, ordered by characteristic bitmask
    (element 0 is the least significant bit)."""
    _check_mode(mode)
    if s.size > bound:
        raise BoundExceededError(
            f"carrier size {s.size} exceeds enumeration bound {bound}")
    out = []
    full = s.carrier
    for mask in range(1, 1 << s.size):
        if not mask >> s.zero & 1:
            continue
        cand = frozenset(i for i in range(s.size) if mask >> i & 1)
        if proper_only and cand == full:
            continue
        if is_hyperideal(s, cand, mode).holds:
            out.append(cand)
    return out


# ---------------------------------------------------------------------------
# generated / colon / radical
# ---------------------------------------------------------------------------

def generated_hyperideal(s: KrasnerStructure, x: int) -> frozenset[int]:
    """{ g(r, x, one^(n-2)) : r in carrier } -- the principal hyperideal of x."""
    if s.one is None:
        raise IdentityAbsentError(f"{s.name} has no designated identity element")
    return frozenset(s.scale(r, x) for r in s.elements)


def colon(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
          a: int) -> frozenset[int]:
    """{ r : g(r, a, one^(n-2)) in I }."""
    if s.one is None:
        raise IdentityAbsentError(f"{s.name} has no designated identity element")
    mem = members_of(ideal)
    return frozenset(r for r in s.elements if s.scale(r, a) in mem)


def power_sequence(s: KrasnerStructure, x: int) -> tuple[list[int], list[int]]:
    """The two power families of x used for radical membership.

    Returns ``(short, iterated)`` where ``short[t-1] = g(x^(t), one^(n-t))``
    for t = 1..n and ``iterated`` is the orbit of q -> g(q, x^(n-1)) starting
    from the full product, followed until the first repeat (the carrier is
    finite, so the orbit closes after at most ``size`` steps).
    """
    if s.one is None:
        raise IdentityAbsentError(f"{s.name} has no designated identity element")
    n, one = s.n, s.one
    short = [s.g[tuple(sorted((x,) * t + (one,) * (n - t)))] for t in range(1, n + 1)]
    q = short[-1]
    seen = {q}
    iterated = [q]
    tail = (x,) * (n - 1)
    while True:
        q = s.g[tuple(sorted((q,) + tail))]
        if q in seen:
            break
        seen.add(q)
        iterated.append(q)
    return short, iterated


def radical_powers(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]") -> frozenset[int]:
    """Elements with some admissible power combination inside the ideal.

    x belongs iff g(x^(t), one^(n-t)) lands in I for some t <= n, or some
    l-fold iterated product of copies of x does.  The iteration depth is
    bounded by cycle detection on the power orbit, never by a constant.
    """
    mem = members_of(ideal)
    out = set()
    for x in s.elements:
        short, iterated = power_sequence(s, x)
        if any(p in mem for p in short) or any(p in mem for p in iterated):
            out.add(x)
    return frozenset(out)


def radical_primes(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
                   mode: str = "weak", bound: int = 16) -> frozenset[int]:
    """Intersection of all elementwise-prime proper hyperideals containing I;
    the full carrier when there are none."""
    mem = members_of(ideal)
    out = s.carrier
    found = False
    for cand in enumerate_hyperideals(s, mode, proper_only=True, bound=bound):
        if mem <= cand and is_prime(s, cand, mode).holds:
            out &= cand
            found = True
    return out if found else s.carrier


# ---------------------------------------------------------------------------
# prime / primary predicates
# ---------------------------------------------------------------------------

def is_prime(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
             mode: str = "weak") -> PredicateOutcome:
    """Elementwise primeness: every product landing in I has a factor in I.

    Inapplicable for the full carrier (primeness presupposes a proper
    hyperideal).  A failure lists every offending multiset.
    """
    _check_mode(mode)
    mem = members_of(ideal)
    if mem == s.carrier:
        return PredicateOutcome.na("proper hyperideal required")
    bad = [tup for tup in multisets(s.size, s.n)
           if s.g[tup] in mem and not any(x in mem for x in tup)]
    if bad:
        return PredicateOutcome.fail(bad)
    return PredicateOutcome.hold()


def ideal_tuple_image(s: KrasnerStructure,
                      parts: Sequence[Iterable[int]]) -> frozenset[int]:
    """Elementwise image of g over a tuple of element sets."""
    if len(parts) != s.n:
        raise ValueError(f"expected {s.n} sets, got {len(parts)}")
    out = set()
    for combo in itertools.product(*[sorted(frozenset(p)) for p in parts]):
        out.add(s.g[tuple(sorted(combo))])
    return frozenset(out)


def is_prime_idealwise(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
                       mode: str = "weak", bound: int = 16) -> PredicateOutcome:
    """Idealwise primeness: for every n-tuple of hyperideals whose elementwise
    product image lies inside I, some component is contained in I.

    Quantifies over multisets of enumerated hyperideals (the image is
    symmetric in the components).  A counterexample is reported as the
    concatenation of the offending component ideals' sorted members -- see
    ``per_candidate`` for the structured form.
    """
    _check_mode(mode)
    mem = members_of(ideal)
    if mem == s.carrier:
        return PredicateOutcome.na("proper hyperideal required")
    pool = enumerate_hyperideals(s, mode, bound=bound)
    for combo in itertools.combinations_with_replacement(range(len(pool)), s.n):
        parts = [pool[i] for i in combo]
        if ideal_tuple_image(s, parts) <= mem and not any(p <= mem for p in parts):
            flat = tuple(x for p in parts for x in sorted(p))
            per = {i: tuple(sorted(pool[i])) for i in set(combo)}
            return PredicateOutcome.fail([flat], per_candidate=per,
                                         reason="ideal_tuple")
    return PredicateOutcome.hold()


def is_primary(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
               mode: str = "weak") -> PredicateOutcome:
    """Primary predicate: whenever a product lands in I, every factor outside
    I must have its identity-substituted co-product inside the power radical.

    Reads the defining implication coordinatewise: for each position i with
    x_i outside I, the product with one substituted at position i has to lie
    in ``radical_powers(I)``.  Requires a designated one.
    """
    _check_mode(mode)
    if s.one is None:
        return PredicateOutcome.na("no designated identity element")
    mem = members_of(ideal)
    if mem == s.carrier:
        return PredicateOutcome.na("proper hyperideal required")
    rad = radical_powers(s, mem)
    one = s.one
    bad = []
    for tup in multisets(s.size, s.n):
        if s.g[tup] not in mem:
            continue
        for i in range(s.n):
            if i > 0 and tup[i] == tup[i - 1]:
                continue
            if tup[i] in mem:
                continue
            sub = tuple(sorted(tup[:i] + (one,) + tup[i + 1:]))
            if s.g[sub] not in rad:
                bad.append(tup)
                break
    if bad:
        return PredicateOutcome.fail(bad)
    return PredicateOutcome.hold()
