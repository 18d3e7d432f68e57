"""Rule audit engine: checks a fixed catalogue of algebraic implications over
a corpus of verified structures and reports instantiation counts, violations,
findings, and skip accounting per rule.

Rules are identified by stable section-style ids ("3.4" ... "4.7").  Each
rule is checked literally: for every instantiation of its hypotheses
available in the corpus the conclusion is evaluated by exhaustive scan, and
counted.  Hypotheses that cannot be met are tallied under ``skipped`` with a
reason.  Structures whose designated one fails the identity law cannot
instantiate identity-dependent hypotheses; where informative (the colon
equivalences), the rule is still evaluated on them and disagreements are
recorded as findings rather than violations.

Everything is deterministic: entries are ordered by rule id, instances are
visited in corpus order then bitmask order, and reports serialize with
sorted keys.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .constructions import (
    Homomorphism,
    NotAPartitionError,
    WellDefinednessError,
    lift_ideal_product,
    preimage_ideal,
    product,
    quotient,
    verify_homomorphism,
)
from .ideals import (
    PredicateOutcome,
    enumerate_hyperideals,
    ideal_tuple_image,
    is_hyperideal,
    is_primary,
    is_prime,
    radical_powers,
    radical_primes,
)
from .stheory import (
    enumerate_multiplicative_subsets,
    is_multiplicative,
    is_s_primary,
    is_s_prime,
    s_primary_colon_equiv,
    s_prime_colon_equiv,
)
from .structures import AxiomFailure, KrasnerStructure, multisets


@dataclass(frozen=True)
class AuditLimits:
    """Enumeration bounds for the audit.

    ``enumeration_bound`` gates per-structure subset enumerations.  Pair and
    triple rules only instantiate combinations whose product carrier stays
    within the caps (structures beyond roughly a dozen elements are outside
    the supported scale); skipped combinations are tallied.  The subset caps
    bound how many multiplicative subsets per factor feed the product rules
    (smallest first; the designated one's singleton is always included).
    """

    enumeration_bound: int = 16
    product_carrier_cap: int = 16
    triple_carrier_cap: int = 12
    pair_subset_cap: int = 4
    triple_subset_cap: int = 2


VERIFIED = "Verified"
HYPOTHESIS_NOT_MET = "HypothesisNotMet"
VIOLATED = "Violated"


@dataclass
class RuleEntry:
    theorem: str
    title: str
    mode: str
    instantiations: int = 0
    violations: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.violations:
            return VIOLATED
        if self.instantiations > 0:
            return VERIFIED
        return HYPOTHESIS_NOT_MET

    def skip(self, reason: str, count: int = 1) -> None:
        self.skipped[reason] = self.skipped.get(reason, 0) + count

    def to_json(self) -> dict:
        return {
            "id": self.theorem,
            "title": self.title,
            "mode": self.mode,
            "status": self.status,
            "instantiations": self.instantiations,
            "violations": self.violations,
            "findings": self.findings,
            "skipped": {k: self.skipped[k] for k in sorted(self.skipped)},
        }


@dataclass
class AuditReport:
    mode: str
    structures: list
    entries: list
    radical_cross_validation: list | None = None

    @property
    def violated(self) -> bool:
        if any(e.violations for e in self.entries):
            return True
        if self.radical_cross_validation:
            if any(row.get("mismatches") for row in self.radical_cross_validation):
                return True
        return False

    def entry(self, theorem: str) -> RuleEntry:
        for e in self.entries:
            if e.theorem == theorem:
                return e
        raise KeyError(theorem)

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "structures": self.structures,
            "violated": self.violated,
            "theorems": [e.to_json() for e in self.entries],
        }
        if self.radical_cross_validation is not None:
            out["radical_cross_validation"] = self.radical_cross_validation
        return out

    def to_text(self) -> str:
        lines = [f"audit over {len(self.structures)} structures (mode={self.mode})"]
        for e in self.entries:
            lines.append(
                f"  {e.theorem:<5} {e.status:<16} instantiations={e.instantiations:<5}"
                f" violations={len(e.violations)} findings={len(e.findings)}"
                f"  {e.title}")
        if self.radical_cross_validation is not None:
            mism = sum(len(r.get("mismatches", [])) for r in self.radical_cross_validation)
            lines.append(f"  radical cross-validation: {mism} mismatches over "
                         f"{len(self.radical_cross_validation)} structures")
        return "\n".join(lines)


def report_json(report: AuditReport) -> str:
    """Byte-deterministic JSON rendering of an audit report."""
    return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# per-structure context with caches
# ---------------------------------------------------------------------------

class _Ctx:
    def __init__(self, s: KrasnerStructure, mode: str, limits: AuditLimits,
                 report=None):
        self.s = s
        self.mode = mode
        self.limits = limits
        self.report = report if report is not None else s.verify_axioms()
        self.identity_ok = s.one is not None and s.identity_law_holds()
        self._ideals = None
        self._strict = None
        self._subsets = None
        self._scale_rows: dict = {}
        self._s_prime: dict = {}
        self._s_primary: dict = {}
        self._prime: dict = {}
        self._primary: dict = {}
        self._radical: dict = {}
        self._images: dict = {}
        self._subrings = None
        self._quotients = None

    @property
    def ideals(self) -> list:
        if self._ideals is None:
            self._ideals = enumerate_hyperideals(
                self.s, self.mode, bound=self.limits.enumeration_bound)
        return self._ideals

    @property
    def strict_ideals(self) -> list:
        if self._strict is None:
            self._strict = enumerate_hyperideals(
                self.s, "strict", bound=self.limits.enumeration_bound)
        return self._strict

    @property
    def subsets(self) -> list:
        if self._subsets is None:
            self._subsets = enumerate_multiplicative_subsets(
                self.s, exclude_zero=True, bound=self.limits.enumeration_bound)
        return self._subsets

    def capped_subsets(self, cap: int) -> list:
        ordered = sorted(self.subsets, key=lambda sub: (len(sub), sorted(sub)))
        out = ordered[:cap]
        if self.s.one is not None:
            unit = frozenset({self.s.one})
            if unit in self.subsets and unit not in out:
                out = [unit] + out[: cap - 1] if cap > 1 else [unit]
        return out

    def scale_row(self, cand: int) -> list:
        row = self._scale_rows.get(cand)
        if row is None:
            row = [self.s.scale(cand, x) for x in self.s.elements]
            self._scale_rows[cand] = row
        return row

    def scaled_set(self, cand: int, members: frozenset) -> frozenset:
        row = self.scale_row(cand)
        return frozenset(row[x] for x in members)

    def s_prime(self, ideal: frozenset, subset: frozenset) -> PredicateOutcome:
        key = (ideal, subset)
        if key not in self._s_prime:
            self._s_prime[key] = is_s_prime(self.s, ideal, subset, self.mode)
        return self._s_prime[key]

    def s_primary(self, ideal: frozenset, subset: frozenset) -> PredicateOutcome:
        key = (ideal, subset)
        if key not in self._s_primary:
            self._s_primary[key] = is_s_primary(self.s, ideal, subset, self.mode)
        return self._s_primary[key]

    def prime(self, ideal: frozenset) -> PredicateOutcome:
        if ideal not in self._prime:
            self._prime[ideal] = is_prime(self.s, ideal, self.mode)
        return self._prime[ideal]

    def primary(self, ideal: frozenset) -> PredicateOutcome:
        if ideal not in self._primary:
            self._primary[ideal] = is_primary(self.s, ideal, self.mode)
        return self._primary[ideal]

    def radical(self, ideal: frozenset) -> frozenset:
        if ideal not in self._radical:
            self._radical[ideal] = radical_powers(self.s, ideal)
        return self._radical[ideal]

    def tuple_image(self, combo: tuple) -> frozenset:
        """Elementwise g-image for a sorted tuple of ideal indices."""
        if combo not in self._images:
            pool = self.ideals
            self._images[combo] = ideal_tuple_image(
                self.s, [pool[i] for i in combo])
        return self._images[combo]

    @property
    def subhyperrings(self) -> list:
        """Embeddings paired with the axiom report of each restriction."""
        if self._subrings is None:
            from .constructions import enumerate_subhyperrings
            out = []
            for emb in enumerate_subhyperrings(
                    self.s, bound=self.limits.enumeration_bound):
                if emb.carrier_subset == self.s.carrier and \
                        emb.structure.one == self.s.one:
                    out.append((emb, self.report))
                else:
                    out.append((emb, emb.structure.verify_axioms()))
            self._subrings = out
        return self._subrings

    @property
    def quotients(self) -> list:
        """Successful quotients by strict hyperideals, with failure notes."""
        if self._quotients is None:
            out = []
            for j in self.strict_ideals:
                try:
                    out.append((j, quotient(self.s, j), None))
                except (NotAPartitionError, WellDefinednessError, AxiomFailure) as e:
                    out.append((j, None, type(e).__name__))
            self._quotients = out
        return self._quotients

    def render(self, members: Iterable[int]) -> list:
        return self.s.render_set(members)


# ---------------------------------------------------------------------------
# individual rules
# ---------------------------------------------------------------------------

def _colon_rule(ctxs, entry, flavor):
    equiv = s_prime_colon_equiv if flavor == "prime" else s_primary_colon_equiv
    for ctx in ctxs:
        s = ctx.s
        if s.one is None:
            entry.skip("no_designated_one", len(ctx.ideals))
            continue
        for ideal in ctx.ideals:
            for subset in ctx.subsets:
                if ideal & subset:
                    entry.skip("disjointness")
                    continue
                result = equiv(s, ideal, subset, ctx.mode)
                record = {
                    "structure": s.name,
                    "ideal": ctx.render(ideal),
                    "subset": ctx.render(subset),
                    "left": result.left.verdict,
                    "right_holds": result.right_holds,
                }
                if not ctx.identity_ok:
                    entry.skip("identity_law")
                    if result.agree is False:
                        record["note"] = ("designated one fails the identity law; "
                                          "equivalence recorded, not counted")
                        if result.findings:
                            record["details"] = list(result.findings)
                        entry.findings.append(record)
                    continue
                entry.instantiations += 1
                if result.agree is False:
                    entry.violations.append(record)


def _rule_3_4(ctxs, entry, limits):
    _colon_rule(ctxs, entry, "prime")


def _rule_4_4(ctxs, entry, limits):
    _colon_rule(ctxs, entry, "primary")


def _rule_3_5(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        for emb, sub_report in ctx.subhyperrings:
            sub = emb.structure
            if not sub_report.overall:
                entry.skip("substructure_not_verifying")
                continue
            if sub.one is None or not sub.identity_law_holds():
                entry.skip("substructure_identity")
                continue
            sub_subsets = enumerate_multiplicative_subsets(
                sub, exclude_zero=True, bound=limits.enumeration_bound)
            for subset_sub in sub_subsets:
                subset_amb = emb.to_ambient(subset_sub)
                for ideal in ctx.ideals:
                    if ideal & subset_amb:
                        entry.skip("disjointness")
                        continue
                    if not ctx.s_prime(ideal, subset_amb).holds:
                        entry.skip("hypothesis_not_satisfied")
                        continue
                    entry.instantiations += 1
                    restricted = emb.to_sub(ideal & emb.carrier_subset)
                    record = {
                        "structure": ctx.s.name,
                        "substructure": ctx.render(emb.carrier_subset),
                        "ideal": ctx.render(ideal),
                        "subset": ctx.render(subset_amb),
                    }
                    if not is_hyperideal(sub, restricted, ctx.mode).holds:
                        record["failure"] = "restriction is not a hyperideal"
                        entry.violations.append(record)
                        continue
                    if not is_s_prime(sub, restricted, subset_sub, ctx.mode).holds:
                        record["failure"] = "restriction is not s-prime"
                        entry.violations.append(record)


def _rule_3_6(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        n = ctx.s.n
        for subset in ctx.subsets:
            covers = [i for i in ctx.ideals
                      if not (i & subset) and ctx.s_prime(i, subset).holds]
            for combo in itertools.combinations_with_replacement(
                    range(len(covers)), n):
                parts = [covers[i] for i in combo]
                union = frozenset().union(*parts)
                for ideal in ctx.ideals:
                    if not ideal <= union:
                        entry.skip("not_covered")
                        continue
                    entry.instantiations += 1
                    ok = any(ctx.scaled_set(cand, ideal) <= part
                             for cand in sorted(subset) for part in parts)
                    if not ok:
                        entry.violations.append({
                            "structure": ctx.s.name,
                            "ideal": ctx.render(ideal),
                            "covering": [ctx.render(p) for p in parts],
                            "subset": ctx.render(subset),
                        })


def _rule_3_7(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        n = ctx.s.n
        pool = ctx.ideals
        combos = list(itertools.combinations_with_replacement(range(len(pool)), n))
        for ideal in pool:
            inside = [c for c in combos if ctx.tuple_image(c) <= ideal]
            for subset in ctx.subsets:
                if ideal & subset:
                    entry.skip("disjointness")
                    continue
                left = ctx.s_prime(ideal, subset).holds
                right = False
                for cand in sorted(subset):
                    if all(any(ctx.scaled_set(cand, pool[i]) <= ideal for i in c)
                           for c in inside):
                        right = True
                        break
                entry.instantiations += 1
                if left != right:
                    entry.violations.append({
                        "structure": ctx.s.name,
                        "ideal": ctx.render(ideal),
                        "subset": ctx.render(subset),
                        "left": left, "right": right,
                    })


def _rule_3_8(ctxs, entry, limits):
    for ctx in ctxs:
        n = ctx.s.n
        pool = ctx.ideals
        combos = list(itertools.combinations_with_replacement(range(len(pool)), n))
        full = ctx.s.carrier
        for ideal in pool:
            if ideal == full:
                entry.skip("not_proper")
                continue
            left = ctx.prime(ideal).holds
            right = True
            for c in combos:
                if ctx.tuple_image(c) <= ideal and \
                        not any(pool[i] <= ideal for i in c):
                    right = False
                    break
            entry.instantiations += 1
            if left != right:
                entry.violations.append({
                    "structure": ctx.s.name,
                    "ideal": ctx.render(ideal),
                    "elementwise": left, "idealwise": right,
                })


def _rule_3_9(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        for subset in ctx.subsets:
            sprimes = [i for i in ctx.ideals
                       if not (i & subset) and ctx.s_prime(i, subset).holds]
            for ideal in sprimes:
                for enclosed in ctx.ideals:
                    if not enclosed <= ideal:
                        entry.skip("not_enclosed")
                        continue
                    entry.instantiations += 1
                    rad = ctx.radical(enclosed)
                    if not any(ctx.scaled_set(cand, rad) <= ideal
                               for cand in sorted(subset)):
                        entry.violations.append({
                            "structure": ctx.s.name,
                            "ideal": ctx.render(ideal),
                            "enclosed": ctx.render(enclosed),
                            "subset": ctx.render(subset),
                        })


def _rule_3_10(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        n = ctx.s.n
        for subset in ctx.subsets:
            sprimes = [i for i in ctx.ideals
                       if not (i & subset) and ctx.s_prime(i, subset).holds]
            for combo in itertools.combinations_with_replacement(
                    range(len(sprimes)), n):
                parts = [sprimes[i] for i in combo]
                meet = parts[0]
                for p in parts[1:]:
                    meet = meet & p
                entry.instantiations += 1
                rad = ctx.radical(meet)
                if not any(ctx.scaled_set(cand, rad) <= meet
                           for cand in sorted(subset)):
                    entry.violations.append({
                        "structure": ctx.s.name,
                        "ideals": [ctx.render(p) for p in parts],
                        "subset": ctx.render(subset),
                    })


def _corpus_homomorphisms(ctxs, entry):
    """Identity maps plus quotient projections by strict hyperideals."""
    out = []
    for ctx in ctxs:
        out.append((ctx, Homomorphism(ctx.s, ctx.s,
                                      tuple(range(ctx.s.size))), ctx, "identity"))
        for j, qmap, failure in ctx.quotients:
            if qmap is None:
                entry.skip(f"quotient_{failure}")
                continue
            out.append((ctx, qmap.as_homomorphism(), qmap, "quotient"))
    return out


def _rule_3_11(ctxs, entry, limits):
    for src_ctx, hom, target_info, kind in _corpus_homomorphisms(ctxs, entry):
        if not verify_homomorphism(hom).holds:
            entry.skip("homomorphism_invalid")
            continue
        if kind == "identity":
            tgt_ctx = target_info
        else:
            tgt_ctx = _Ctx(target_info.quotient, src_ctx.mode, src_ctx.limits,
                           report=target_info.report)
        if not (src_ctx.identity_ok and tgt_ctx.identity_ok):
            entry.skip("identity_law")
            continue
        tgt = tgt_ctx.s
        for subset in src_ctx.subsets:
            image = hom.image(subset)
            if tgt.zero in image:
                entry.skip("zero_in_image")
                continue
            if not is_multiplicative(tgt, image).holds:
                entry.skip("image_not_multiplicative")
                continue
            for target_ideal in tgt_ctx.ideals:
                if target_ideal & image:
                    entry.skip("disjointness")
                    continue
                if not tgt_ctx.s_prime(target_ideal, image).holds:
                    entry.skip("hypothesis_not_satisfied")
                    continue
                entry.instantiations += 1
                pre = preimage_ideal(hom, target_ideal)
                record = {
                    "structure": src_ctx.s.name,
                    "map": kind if kind == "identity"
                    else f"quotient by {src_ctx.render(target_info.ideal)}",
                    "target_ideal": tgt.render_set(target_ideal),
                    "subset": src_ctx.render(subset),
                }
                if pre & subset:
                    record["failure"] = "preimage meets the subset"
                    entry.violations.append(record)
                    continue
                if not is_hyperideal(src_ctx.s, pre, src_ctx.mode).holds:
                    record["failure"] = "preimage is not a hyperideal"
                    entry.violations.append(record)
                    continue
                if not src_ctx.s_prime(pre, subset).holds:
                    record["failure"] = "preimage is not s-prime"
                    entry.violations.append(record)


def _rule_3_14(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        for j, qmap, failure in ctx.quotients:
            if qmap is None:
                entry.skip(f"quotient_{failure}")
                continue
            q = qmap.quotient
            if q.one is None or not q.identity_law_holds():
                entry.skip("quotient_identity")
                continue
            for ideal in ctx.ideals:
                if not j <= ideal:
                    entry.skip("ideal_not_enclosing")
                    continue
                for subset in ctx.subsets:
                    if ideal & subset:
                        entry.skip("disjointness")
                        continue
                    if not ctx.s_prime(ideal, subset).holds:
                        entry.skip("hypothesis_not_satisfied")
                        continue
                    lifted_ideal = qmap.lift(ideal)
                    lifted_subset = qmap.lift(subset)
                    if lifted_ideal & lifted_subset:
                        entry.skip("lifted_disjointness")
                        continue
                    entry.instantiations += 1
                    record = {
                        "structure": ctx.s.name,
                        "by": ctx.render(j),
                        "ideal": ctx.render(ideal),
                        "subset": ctx.render(subset),
                    }
                    if not is_hyperideal(q, lifted_ideal, ctx.mode).holds:
                        record["failure"] = "lifted ideal is not a hyperideal"
                        entry.violations.append(record)
                        continue
                    if not is_multiplicative(q, lifted_subset).holds:
                        record["failure"] = "lifted subset is not multiplicative"
                        entry.violations.append(record)
                        continue
                    if not is_s_prime(q, lifted_ideal, lifted_subset,
                                      ctx.mode).holds:
                        record["failure"] = "lifted ideal is not s-prime"
                        entry.violations.append(record)


def _pair_witness_table(prod, lifted):
    """Lazy per-witness acceptability for s-prime scans on a product."""
    hitting = [tup for tup in multisets(prod.size, prod.n)
               if prod.g[tup] in lifted]
    cache: dict = {}

    def ok(witness: int) -> bool:
        if witness not in cache:
            scaled_in = [prod.scale(witness, x) in lifted
                         for x in prod.elements]
            cache[witness] = all(any(scaled_in[x] for x in tup)
                                 for tup in hitting)
        return cache[witness]

    return ok


def _rule_3_16(ctxs, entry, limits):
    for ctx1 in ctxs:
        for ctx2 in ctxs:
            s1, s2 = ctx1.s, ctx2.s
            if (s1.m, s1.n) != (s2.m, s2.n):
                continue
            if s1.size * s2.size > limits.product_carrier_cap:
                entry.skip("product_carrier_cap")
                continue
            if not (ctx1.identity_ok and ctx2.identity_ok):
                entry.skip("identity_law")
                continue
            prod = product(s1, s2)
            n2 = s2.size
            subs1 = ctx1.capped_subsets(limits.pair_subset_cap)
            subs2 = ctx2.capped_subsets(limits.pair_subset_cap)
            for ideal1 in ctx1.ideals:
                lifted = lift_ideal_product(s1, s2, ideal1)
                witness_ok = _pair_witness_table(prod, lifted)
                for sub1 in subs1:
                    if ideal1 & sub1:
                        entry.skip("disjointness")
                        continue
                    left = ctx1.s_prime(ideal1, sub1).holds
                    for sub2 in subs2:
                        right = any(witness_ok(a * n2 + b)
                                    for a in sorted(sub1) for b in sorted(sub2))
                        entry.instantiations += 1
                        if left != right:
                            entry.violations.append({
                                "factors": [s1.name, s2.name],
                                "ideal": ctx1.render(ideal1),
                                "subsets": [ctx1.render(sub1), ctx2.render(sub2)],
                                "left": left, "right": right,
                            })


def _rule_3_17(ctxs, entry, limits):
    eligible = [c for c in ctxs if c.identity_ok]
    for c1 in eligible:
        for c2 in eligible:
            for c3 in eligible:
                trio = (c1, c2, c3)
                sizes = [c.s.size for c in trio]
                if len({(c.s.m, c.s.n) for c in trio}) != 1:
                    continue
                if sizes[0] * sizes[1] * sizes[2] > limits.triple_carrier_cap:
                    entry.skip("triple_carrier_cap")
                    continue
                prod = product(product(c1.s, c2.s), c3.s)
                subs = [c.capped_subsets(limits.triple_subset_cap) for c in trio]
                n2, n3 = sizes[1], sizes[2]

                def flat(x, y, z):
                    return (x * n2 + y) * n3 + z

                for pos in range(3):
                    for ideal in trio[pos].ideals:
                        for combo in itertools.product(*subs):
                            if ideal & combo[pos]:
                                entry.skip("disjointness")
                                continue
                            if not trio[pos].s_prime(ideal, combo[pos]).holds:
                                entry.skip("hypothesis_not_satisfied")
                                continue
                            carriers = [c.s.carrier for c in trio]
                            carriers[pos] = ideal
                            lifted = frozenset(
                                flat(x, y, z)
                                for x in carriers[0] for y in carriers[1]
                                for z in carriers[2])
                            big_subset = frozenset(
                                flat(a, b, c)
                                for a in combo[0] for b in combo[1]
                                for c in combo[2])
                            entry.instantiations += 1
                            if not is_s_prime(prod, lifted, big_subset,
                                              trio[pos].mode).holds:
                                entry.violations.append({
                                    "factors": [c.s.name for c in trio],
                                    "position": pos,
                                    "ideal": trio[pos].render(ideal),
                                })


def _rule_4_3(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        invertible = ctx.s.units()
        full = ctx.s.carrier
        for subset in ctx.subsets:
            if not subset <= invertible:
                entry.skip("subset_not_invertible")
                continue
            for ideal in ctx.ideals:
                if ideal == full:
                    entry.skip("not_proper")
                    continue
                if ideal & subset:
                    entry.skip("disjointness")
                    continue
                left = ctx.s_primary(ideal, subset).holds
                right = ctx.primary(ideal).holds
                entry.instantiations += 1
                if left != right:
                    entry.violations.append({
                        "structure": ctx.s.name,
                        "ideal": ctx.render(ideal),
                        "subset": ctx.render(subset),
                        "s_primary": left, "primary": right,
                    })


def _rule_4_5(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        full = ctx.s.carrier
        for ideal in ctx.ideals:
            for subset in ctx.subsets:
                if ideal & subset:
                    entry.skip("disjointness")
                    continue
                if not ctx.s_primary(ideal, subset).holds:
                    entry.skip("hypothesis_not_satisfied")
                    continue
                rad = ctx.radical(ideal)
                record = {
                    "structure": ctx.s.name,
                    "ideal": ctx.render(ideal),
                    "subset": ctx.render(subset),
                    "radical": ctx.render(rad),
                }
                if rad & subset:
                    record["failure"] = "radical meets the subset"
                    entry.violations.append(record)
                    continue
                if rad == full:
                    entry.skip("radical_not_proper")
                    continue
                entry.instantiations += 1
                if not is_hyperideal(ctx.s, rad, ctx.mode).holds:
                    record["failure"] = "radical is not a hyperideal"
                    entry.violations.append(record)
                    continue
                if not ctx.s_prime(rad, subset).holds:
                    record["failure"] = "radical is not s-prime"
                    entry.violations.append(record)


def _rule_4_6(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        n = ctx.s.n
        for subset in ctx.subsets:
            by_radical: dict = {}
            for ideal in ctx.ideals:
                if ideal & subset:
                    continue
                if ctx.s_primary(ideal, subset).holds:
                    by_radical.setdefault(ctx.radical(ideal), []).append(ideal)
            for rad in sorted(by_radical, key=sorted):
                members = by_radical[rad]
                for combo in itertools.combinations_with_replacement(
                        range(len(members)), n):
                    meet = members[combo[0]]
                    for i in combo[1:]:
                        meet = meet & members[i]
                    entry.instantiations += 1
                    record = {
                        "structure": ctx.s.name,
                        "ideals": [ctx.render(members[i]) for i in combo],
                        "subset": ctx.render(subset),
                    }
                    if ctx.radical(meet) != rad:
                        record["failure"] = "intersection changes the radical"
                        entry.violations.append(record)
                        continue
                    if not ctx.s_primary(meet, subset).holds:
                        record["failure"] = "intersection is not s-primary"
                        entry.violations.append(record)


def _rule_4_7(ctxs, entry, limits):
    for ctx in ctxs:
        if not ctx.identity_ok:
            entry.skip("identity_law")
            continue
        n = ctx.s.n
        pool = ctx.ideals
        index_of = {ideal: i for i, ideal in enumerate(pool)}
        for subset in ctx.subsets:
            meeting = [i for i in pool if i & subset]
            primaries = [i for i in pool
                         if not (i & subset) and ctx.s_primary(i, subset).holds]
            for ideal in primaries:
                for combo in itertools.combinations_with_replacement(
                        range(len(meeting)), n - 1):
                    indices = tuple(sorted(
                        [index_of[meeting[i]] for i in combo]
                        + [index_of[ideal]]))
                    image = ctx.tuple_image(indices)
                    entry.instantiations += 1
                    record = {
                        "structure": ctx.s.name,
                        "ideal": ctx.render(ideal),
                        "meeting": [ctx.render(meeting[i]) for i in combo],
                        "subset": ctx.render(subset),
                        "image": ctx.render(image),
                    }
                    if image & subset:
                        record["failure"] = "image meets the subset"
                        entry.violations.append(record)
                        continue
                    if not is_hyperideal(ctx.s, image, ctx.mode).holds:
                        record["failure"] = "image is not a hyperideal"
                        entry.violations.append(record)
                        continue
                    if not ctx.s_primary(image, subset).holds:
                        record["failure"] = "image is not s-primary"
                        entry.violations.append(record)


RULES = {
    "3.4": ("colon criterion for s-prime hyperideals", _rule_3_4),
    "3.5": ("restriction of s-prime hyperideals to subhyperrings", _rule_3_5),
    "3.6": ("covering by s-prime hyperideals", _rule_3_6),
    "3.7": ("idealwise characterization of s-prime hyperideals", _rule_3_7),
    "3.8": ("elementwise versus idealwise prime", _rule_3_8),
    "3.9": ("scaled radical containment for enclosed hyperideals", _rule_3_9),
    "3.10": ("scaled radical of intersections of s-prime hyperideals", _rule_3_10),
    "3.11": ("preimages of s-prime hyperideals under homomorphisms", _rule_3_11),
    "3.14": ("s-prime hyperideals descend to quotients", _rule_3_14),
    "3.16": ("s-prime hyperideals extend to binary products", _rule_3_16),
    "3.17": ("s-prime hyperideals in multi-factor products", _rule_3_17),
    "4.3": ("s-primary equals primary for invertible witnesses", _rule_4_3),
    "4.4": ("colon criterion for s-primary hyperideals", _rule_4_4),
    "4.5": ("radical of s-primary is s-prime", _rule_4_5),
    "4.6": ("intersections of s-primary hyperideals sharing a radical", _rule_4_6),
    "4.7": ("scaled products of s-primary hyperideals", _rule_4_7),
}


def _rule_order(theorem: str) -> tuple:
    major, minor = theorem.split(".")
    return (int(major), int(minor))


def cross_validate_radicals(corpus: Sequence[KrasnerStructure],
                            mode: str = "weak",
                            limits: AuditLimits | None = None) -> list:
    """Compare the power and prime-intersection radicals on every hyperideal.

    Structures without a designated one, or whose designated one fails the
    identity law, cannot evaluate the power radical meaningfully; they are
    itemized as inapplicable with the reason rather than silently dropped.
    Mismatches are itemized per ideal.
    """
    limits = limits or AuditLimits()
    out = []
    for s in corpus:
        row: dict = {"structure": s.name}
        if s.one is None:
            row["status"] = "inapplicable"
            row["reason"] = "no designated identity element"
            out.append(row)
            continue
        if not s.identity_law_holds():
            report = s.verify_axioms(check_identity=True)
            check = report.check("scalar_identity")
            row["status"] = "inapplicable"
            row["reason"] = "designated one fails the identity law"
            row["counterexample"] = (
                [s.labels[i] for i in check.counterexample]
                if check.counterexample else None)
            out.append(row)
            continue
        mismatches = []
        ideals = enumerate_hyperideals(s, mode, bound=limits.enumeration_bound)
        for ideal in ideals:
            powers = radical_powers(s, ideal)
            primes = radical_primes(s, ideal, mode,
                                    bound=limits.enumeration_bound)
            if powers != primes:
                mismatches.append({
                    "ideal": s.render_set(ideal),
                    "powers": s.render_set(powers),
                    "primes": s.render_set(primes),
                })
        row["status"] = "verified" if not mismatches else "mismatch"
        row["ideals_checked"] = len(ideals)
        row["mismatches"] = mismatches
        out.append(row)
    return out


def audit_theorems(corpus: Sequence[KrasnerStructure],
                   selection: Iterable[str] | None = None,
                   mode: str = "weak",
                   limits: AuditLimits | None = None,
                   radicals: bool = False) -> AuditReport:
    """Audit the rule catalogue over a corpus of structures.

    Every structure must pass mandatory axiom verification.  ``selection``
    restricts the catalogue to the given ids (default: all).  With
    ``radicals=True`` the report additionally carries the radical
    cross-validation section.
    """
    limits = limits or AuditLimits()
    if selection is None:
        chosen = list(RULES)
    else:
        chosen = list(selection)
        unknown = [t for t in chosen if t not in RULES]
        if unknown:
            raise ValueError(f"unknown rule ids: {unknown}; "
                             f"known: {sorted(RULES, key=_rule_order)}")
    chosen.sort(key=_rule_order)

    ctxs = []
    for s in corpus:
        ctx = _Ctx(s, mode, limits)
        if not ctx.report.overall:
            raise AxiomFailure(
                f"corpus structure {s.name} fails axiom verification",
                ctx.report)
        ctxs.append(ctx)

    entries = []
    for theorem in chosen:
        title, fn = RULES[theorem]
        entry = RuleEntry(theorem, title, mode)
        fn(ctxs, entry, limits)
        entries.append(entry)

    report = AuditReport(
        mode=mode,
        structures=[s.name for s in corpus],
        entries=entries,
        radical_cross_validation=(
            cross_validate_radicals(corpus, mode, limits) if radicals else None),
    )
    return report
