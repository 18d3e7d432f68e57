"""Multiplicative subsets and the witnessed s-prime / s-primary predicates.

An n-ary multiplicative subset S is closed under g.  The s-predicates relax
prime and primary by allowing a single witness s drawn from S: membership
conclusions only need to hold after scaling by the witness.  Both predicates
compute the *complete* witness set, and on failure record one violating
multiset per rejected candidate.

Disjointness of the ideal from S is a precondition of both predicates; when
it fails the outcome is ``inapplicable`` rather than a verdict, so audits can
separate ill-posed instances from refuted ones.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .ideals import (
    HOLDS,
    INAPPLICABLE,
    Hyperideal,
    PredicateOutcome,
    colon,
    is_hyperideal,
    is_primary,
    is_prime,
    members_of,
    radical_powers,
    _check_mode,
)
from .structures import BoundExceededError, KrasnerStructure, multisets


@dataclass(frozen=True)
class MultiplicativeSubset:
    """A validated g-closed subset."""

    structure: KrasnerStructure
    members: frozenset[int]


def multiplicative_subset(s: KrasnerStructure,
                          members: Iterable[int]) -> MultiplicativeSubset:
    mem = frozenset(members)
    outcome = is_multiplicative(s, mem)
    if not outcome.holds:
        raise ValueError(f"{sorted(mem)} is not g-closed in {s.name}")
    return MultiplicativeSubset(s, mem)


def is_multiplicative(s: KrasnerStructure,
                      members: Iterable[int]) -> PredicateOutcome:
    """Closure of the subset under g, over all member multisets."""
    mem = frozenset(members)
    if not mem:
        raise ValueError("multiplicative subset candidate must be nonempty")
    if not mem <= s.carrier:
        raise ValueError("members outside the carrier")
    bad = [tup
           for tup in itertools.combinations_with_replacement(sorted(mem), s.n)
           if s.g[tup] not in mem]
    if bad:
        return PredicateOutcome.fail(bad)
    return PredicateOutcome.hold()


def enumerate_multiplicative_subsets(s: KrasnerStructure,
                                     exclude_zero: bool = False,
                                     bound: int = 16) -> list[frozenset[int]]:
    """All nonempty g-closed subsets, by characteristic bitmask order."""
    if s.size > bound:
        raise BoundExceededError(
            f"carrier size {s.size} exceeds enumeration bound {bound}")
    out = []
    for mask in range(1, 1 << s.size):
        if exclude_zero and mask >> s.zero & 1:
            continue
        cand = frozenset(i for i in range(s.size) if mask >> i & 1)
        if is_multiplicative(s, cand).holds:
            out.append(cand)
    return out


def _s_predicate_preamble(s, ideal, subset, mode):
    """Shared precondition checks; returns (mem, sub, failure-or-None)."""
    _check_mode(mode)
    mem = members_of(ideal)
    sub = frozenset(subset)
    if s.one is None:
        return mem, sub, PredicateOutcome.na("no designated identity element")
    if not is_multiplicative(s, sub).holds:
        return mem, sub, PredicateOutcome.na("subset is not g-closed")
    if not is_hyperideal(s, mem, mode).holds:
        return mem, sub, PredicateOutcome.na(f"not a {mode} hyperideal")
    meet = mem & sub
    if meet:
        return mem, sub, PredicateOutcome.na(
            "disjointness violated: ideal meets subset at "
            + ",".join(s.labels[i] for i in sorted(meet)))
    return mem, sub, None


def is_s_prime(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
               subset: Iterable[int], mode: str = "weak") -> PredicateOutcome:
    """Witnessed primeness: some s in S scales a factor of every product that
    lands in I back into I.

    Holds iff there is a witness s in S such that for every argument multiset
    x with g(x) in I some coordinate x_i has g(s, x_i, one^(n-2)) in I.  The
    outcome's witness set contains every such s.  Inapplicable when the ideal
    meets S, when S is not g-closed, when the subset's structure has no
    designated one, or when the candidate is not a hyperideal in the mode.
    """
    mem, sub, failure = _s_predicate_preamble(s, ideal, subset, mode)
    if failure is not None:
        return failure
    hitting = [tup for tup in multisets(s.size, s.n) if s.g[tup] in mem]
    witnesses = set()
    per_candidate: dict[int, tuple[int, ...]] = {}
    for cand in sorted(sub):
        scaled_in = [s.scale(cand, x) in mem for x in s.elements]
        bad = next((tup for tup in hitting
                    if not any(scaled_in[x] for x in tup)), None)
        if bad is None:
            witnesses.add(cand)
        else:
            per_candidate[cand] = bad
    if witnesses:
        return PredicateOutcome.hold(witnesses)
    return PredicateOutcome.fail(per_candidate=per_candidate)


def is_s_primary(s: KrasnerStructure, ideal: "Hyperideal | Iterable[int]",
                 subset: Iterable[int], mode: str = "weak",
                 escape: str = "scaled") -> PredicateOutcome:
    """Witnessed primary predicate with a radical escape clause.

    Holds iff some s in S satisfies, for every multiset x with g(x) in I:
    either g(s, x_i, one^(n-2)) lands in I for some coordinate (the s-prime
    clause), or the escape clause fires:

    * ``escape="scaled"`` (default): g(s, x_i, one^(n-2)) lies in the power
      radical of I for some i.  This is the n-ary form of the classical
      binary rule "s*x in I or s*y in rad(I)" and the reading under which
      the audited implications about radicals and colonic transfers all
      hold on the bundled corpus.
    * ``escape="substituted"``: the product with s substituted for x_i lies
      in the radical, for some i.  This variant degenerates for arities
      above two: substituting the witness at a coordinate whose remaining
      co-product already multiplies into the radical satisfies the clause
      vacuously, and the radical of such an ideal need not be s-prime.

    Binding the two clauses to a common coordinate index would change
    nothing: an existential quantifier distributes over the disjunction.
    """
    if escape not in ("scaled", "substituted"):
        raise ValueError(f"unknown escape clause {escape!r}")
    mem, sub, failure = _s_predicate_preamble(s, ideal, subset, mode)
    if failure is not None:
        return failure
    rad = radical_powers(s, mem)
    hitting = [tup for tup in multisets(s.size, s.n) if s.g[tup] in mem]
    n = s.n
    witnesses = set()
    per_candidate: dict[int, tuple[int, ...]] = {}
    for cand in sorted(sub):
        scaled_in = [s.scale(cand, x) in mem for x in s.elements]
        scaled_rad = [s.scale(cand, x) in rad for x in s.elements]
        bad = None
        for tup in hitting:
            if any(scaled_in[x] for x in tup):
                continue
            if escape == "scaled":
                if any(scaled_rad[x] for x in tup):
                    continue
            else:
                if any(s.g[tuple(sorted(tup[:i] + (cand,) + tup[i + 1:]))] in rad
                       for i in range(n)):
                    continue
            bad = tup
            break
        if bad is None:
            witnesses.add(cand)
        else:
            per_candidate[cand] = bad
    if witnesses:
        return PredicateOutcome.hold(witnesses)
    return PredicateOutcome.fail(per_candidate=per_candidate)


# ---------------------------------------------------------------------------
# colon equivalences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColonEquivalence:
    """Both sides of a colon-transfer equivalence, evaluated independently.

    ``left`` is the witnessed predicate on I itself; ``right_holds`` states
    whether some s in S makes the colon (I : s) a proper hyperideal with the
    corresponding plain property.  ``per_candidate`` records, for every s,
    the colon set and how it fared.  ``findings`` collects observations that
    explain disagreements without refuting anything (for example a colon
    equal to the whole carrier on a structure whose designated one fails the
    identity law).
    """

    structure: str
    mode: str
    flavor: str  # "prime" | "primary"
    ideal: frozenset[int]
    subset: frozenset[int]
    left: PredicateOutcome
    right_holds: bool | None
    per_candidate: Mapping[int, dict]
    agree: bool | None
    findings: tuple[str, ...]

    def to_json(self, labels=None) -> dict:
        def render(t):
            if labels is None:
                return sorted(t)
            return [labels[i] for i in sorted(t)]

        return {
            "structure": self.structure,
            "mode": self.mode,
            "flavor": self.flavor,
            "ideal": render(self.ideal),
            "subset": render(self.subset),
            "left": self.left.to_json(labels),
            "right_holds": self.right_holds,
            "per_candidate": {
                str(labels[c] if labels is not None else c): {
                    "colon": render(info["colon"]),
                    "proper": info["proper"],
                    "hyperideal": info["hyperideal"],
                    "verdict": info["verdict"],
                }
                for c, info in sorted(self.per_candidate.items())
            },
            "agree": self.agree,
            "findings": list(self.findings),
        }


def _colon_equiv(s, ideal, subset, mode, flavor) -> ColonEquivalence:
    mem = members_of(ideal)
    sub = frozenset(subset)
    if flavor == "prime":
        left = is_s_prime(s, mem, sub, mode)
    else:
        left = is_s_primary(s, mem, sub, mode)
    if left.inapplicable:
        return ColonEquivalence(s.name, mode, flavor, mem, sub, left, None,
                                {}, None, (left.reason or "inapplicable",))
    per: dict[int, dict] = {}
    right = False
    findings: list[str] = []
    for cand in sorted(sub):
        cset = colon(s, mem, cand)
        proper = cset != s.carrier
        ideal_ok = is_hyperideal(s, cset, mode).holds
        if proper and ideal_ok:
            check = is_prime(s, cset, mode) if flavor == "prime" \
                else is_primary(s, cset, mode)
            verdict = check.verdict
        else:
            verdict = INAPPLICABLE
        per[cand] = {"colon": cset, "proper": proper,
                     "hyperideal": ideal_ok, "verdict": verdict}
        if verdict == HOLDS:
            right = True
    if left.holds and not any(info["proper"] for info in per.values()):
        findings.append("colon is the whole carrier for every candidate")
    if not s.identity_law_holds():
        findings.append("designated one fails the identity law")
    agree = left.holds == right
    return ColonEquivalence(s.name, mode, flavor, mem, sub, left, right,
                            per, agree, tuple(findings))


def s_prime_colon_equiv(s: KrasnerStructure, ideal, subset,
                        mode: str = "weak") -> ColonEquivalence:
    """I is s-prime iff (I : s) is a proper prime hyperideal for some s in S;
    both sides evaluated by independent scans over all candidates."""
    return _colon_equiv(s, ideal, subset, mode, "prime")


def s_primary_colon_equiv(s: KrasnerStructure, ideal, subset,
                          mode: str = "weak") -> ColonEquivalence:
    """Primary variant of the colon equivalence."""
    return _colon_equiv(s, ideal, subset, mode, "primary")
