"""Finite commutative (m,n)-hyperstructures and exhaustive axiom checking.

A structure couples an m-ary hyperoperation ``f`` (set valued) with an n-ary
operation ``g`` (single valued) over a finite carrier.  Both tables are keyed
by sorted index multisets, so commutativity holds by construction and every
exhaustive check only needs one representative per argument orbit.

Element sets are plain ``frozenset[int]`` of carrier indices; labels exist
only for I/O and rendering.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class KrasnerError(Exception):
    """Base class for all library errors."""


class ArityError(KrasnerError, ValueError):
    """An argument tuple has the wrong length for the operation."""


class CarrierIndexError(KrasnerError, ValueError):
    """An element index is outside the carrier."""


class IdentityAbsentError(KrasnerError, ValueError):
    """The operation needs a designated identity element and none is set."""


class BoundExceededError(KrasnerError, ValueError):
    """An enumeration was requested beyond the configured carrier bound."""


class AxiomFailure(KrasnerError):
    """A constructed structure failed axiom verification."""

    def __init__(self, message: str, report: "AxiomReport | None" = None):
        super().__init__(message)
        self.report = report


def multiset_key(args: Iterable[int]) -> tuple[int, ...]:
    """Canonical table key for an argument tuple."""
    return tuple(sorted(args))


def multisets(size: int, arity: int) -> Iterator[tuple[int, ...]]:
    """All sorted index multisets of the given arity over ``range(size)``."""
    return itertools.combinations_with_replacement(range(size), arity)


def count_multisets(size: int, arity: int) -> int:
    num = 1
    for i in range(arity):
        num = num * (size + i) // (i + 1)
    return num


MANDATORY_AXIOMS = (
    "f_associative",
    "f_solvable",
    "neutral_exists_unique",
    "inverses_unique",
    "reversibility",
    "g_associative",
    "distributive",
    "zero_absorbing",
)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    ok: bool
    mandatory: bool
    counterexample: tuple[int, ...] | None = None
    detail: str | None = None


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom verdicts with the first counterexample for each failure.

    ``overall`` aggregates the mandatory checks only.  Two checks are always
    informational: ``distributive_equality`` (the mandatory ``distributive``
    check asserts the containment f(g(a,x_1,b), ..., g(a,x_m,b)) included in
    g(a, f(x_1..x_m), b); the equality variant is reported alongside because
    set-valued sums may strictly grow under g) and ``scalar_identity`` (only
    evaluated on request, see ``verify_axioms``).
    """

    structure: str
    checks: tuple[AxiomCheck, ...]
    scalar_neutrals: tuple[int, ...]

    @property
    def overall(self) -> bool:
        return all(c.ok for c in self.checks if c.mandatory)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def has_check(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        def render(t):
            if t is None:
                return None
            if labels is None:
                return list(t)
            return [labels[i] for i in t]

        return {
            "structure": self.structure,
            "overall": self.overall,
            "scalar_neutrals": render(self.scalar_neutrals),
            "checks": [
                {
                    "name": c.name,
                    "ok": c.ok,
                    "mandatory": c.mandatory,
                    "counterexample": render(c.counterexample),
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


@dataclass(frozen=True, eq=False)
class KrasnerStructure:
    """A finite carrier with an m-ary hyperoperation and an n-ary operation.

    ``f`` maps every sorted m-multiset of indices to a nonempty frozenset,
    ``g`` maps every sorted n-multiset to a single index.  ``zero`` is the
    designated absorbing element; ``one`` is an optional designated identity
    for ``g`` (some structures have none, and a designated ``one`` is not
    required to actually satisfy the identity law -- ``verify_axioms`` can
    check it on request).

    Axiom satisfaction is *not* an invariant of this type: constructing a
    structure only enforces table shape, and ``verify_axioms`` reports the
    algebra.  Instances are immutable and safe to share.
    """

    name: str
    m: int
    n: int
    labels: tuple[str, ...]
    f: Mapping[tuple[int, ...], frozenset[int]]
    g: Mapping[tuple[int, ...], int]
    zero: int
    one: int | None = None

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise ValueError("arities m and n must be at least 2")
        size = len(self.labels)
        if size < 1:
            raise ValueError("carrier must be nonempty")
        if len(set(self.labels)) != size:
            raise ValueError("carrier labels must be pairwise distinct")
        if not 0 <= self.zero < size:
            raise CarrierIndexError(f"zero index {self.zero} out of range")
        if self.one is not None and not 0 <= self.one < size:
            raise CarrierIndexError(f"one index {self.one} out of range")
        expect_f = set(multisets(size, self.m))
        if set(self.f) != expect_f:
            raise ValueError("f table must cover every sorted m-multiset exactly once")
        expect_g = set(multisets(size, self.n))
        if set(self.g) != expect_g:
            raise ValueError("g table must cover every sorted n-multiset exactly once")
        for key, val in self.f.items():
            if not val:
                raise ValueError(f"f{key} is empty; hyperoperation values must be nonempty")
            if not all(0 <= v < size for v in val):
                raise CarrierIndexError(f"f{key} contains an out-of-range index")
        for key, val in self.g.items():
            if not 0 <= val < size:
                raise CarrierIndexError(f"g{key} is out of range")

    # -- basic accessors ---------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    @property
    def carrier(self) -> frozenset[int]:
        return frozenset(range(len(self.labels)))

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise CarrierIndexError(f"unknown element label {label!r}") from None

    def render_set(self, members: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in sorted(members)]

    def _check_args(self, args: Sequence[int], arity: int, op: str) -> None:
        if len(args) != arity:
            raise ArityError(f"{op} expects {arity} arguments, got {len(args)}")
        size = len(self.labels)
        for a in args:
            if not 0 <= a < size:
                raise CarrierIndexError(f"element index {a} out of range for {op}")

    # -- evaluation --------------------------------------------------------

    def eval_f(self, args: Sequence[int]) -> frozenset[int]:
        """Value of the m-ary hyperoperation on an argument tuple."""
        self._check_args(args, self.m, "f")
        return self.f[tuple(sorted(args))]

    def eval_g(self, args: Sequence[int]) -> int:
        """Value of the n-ary operation on an argument tuple."""
        self._check_args(args, self.n, "g")
        return self.g[tuple(sorted(args))]

    def eval_f_iter(self, l: int, args: Sequence[int]) -> frozenset[int]:
        """Left-nested l-fold composite of f, of arity l(m-1)+1.

        The fold applies f to the first m arguments, then repeatedly extends
        by the next m-1 arguments, taking unions over every choice from the
        intermediate set.
        """
        if l < 1:
            raise ValueError("iteration count must be positive")
        want = l * (self.m - 1) + 1
        self._check_args(args, want, f"f_({l})")
        table = self.f
        acc = table[tuple(sorted(args[: self.m]))]
        pos = self.m
        step = self.m - 1
        while pos < want:
            chunk = tuple(args[pos : pos + step])
            out: set[int] = set()
            for y in acc:
                out |= table[tuple(sorted((y,) + chunk))]
            acc = frozenset(out)
            pos += step
        return acc

    def eval_g_iter(self, l: int, args: Sequence[int]) -> int:
        """Left-nested l-fold composite of g, of arity l(n-1)+1."""
        if l < 1:
            raise ValueError("iteration count must be positive")
        want = l * (self.n - 1) + 1
        self._check_args(args, want, f"g_({l})")
        table = self.g
        acc = table[tuple(sorted(args[: self.n]))]
        pos = self.n
        step = self.n - 1
        while pos < want:
            acc = table[tuple(sorted((acc,) + tuple(args[pos : pos + step])))]
            pos += step
        return acc

    def scale(self, s: int, x: int) -> int:
        """g(s, x, one^(n-2)): the witness-scaled image of a single element.

        Requires a designated one.
        """
        if self.one is None:
            raise IdentityAbsentError(f"{self.name} has no designated identity element")
        return self.g[tuple(sorted((s, x) + (self.one,) * (self.n - 2)))]

    # -- derived element queries ---------------------------------------------

    def inverse_of(self, x: int) -> int:
        """The unique y with zero in f(x, y, zero^(m-2)).

        Raises ``ValueError`` when no such y exists or it is not unique
        (the additive part is then not canonical).
        """
        size = len(self.labels)
        if not 0 <= x < size:
            raise CarrierIndexError(f"element index {x} out of range")
        pad = (self.zero,) * (self.m - 2)
        hits = [y for y in range(size)
                if self.zero in self.f[tuple(sorted((x, y) + pad))]]
        if len(hits) != 1:
            raise ValueError(
                f"element {self.labels[x]} has {len(hits)} inverse candidates; "
                "structure is not canonical")
        return hits[0]

    def units(self) -> frozenset[int]:
        """Elements x with g(x, y, one^(n-2)) = one for some y."""
        if self.one is None:
            raise IdentityAbsentError(f"{self.name} has no designated identity element")
        one = self.one
        pad = (one,) * (self.n - 2)
        out = set()
        for x in self.elements:
            if any(self.g[tuple(sorted((x, y) + pad))] == one for y in self.elements):
                out.add(x)
        return frozenset(out)

    def identity_law_holds(self) -> bool:
        """Whether the designated one satisfies x = g(x, one^(n-1)) for all x."""
        if self.one is None:
            return False
        pad = (self.one,) * (self.n - 1)
        return all(self.g[tuple(sorted((x,) + pad))] == x for x in self.elements)

    def scalar_identities(self) -> tuple[int, ...]:
        """All elements e with x = g(x, e^(n-1)) for every x."""
        out = []
        for e in self.elements:
            pad = (e,) * (self.n - 1)
            if all(self.g[tuple(sorted((x,) + pad))] == x for x in self.elements):
                out.append(e)
        return tuple(out)

    # -- axiom verification --------------------------------------------------

    def verify_axioms(self, check_identity: bool = False) -> AxiomReport:
        """Exhaustively check every structural axiom.

        Checks, over all sorted argument multisets (tables are multiset
        keyed, so this covers all tuples):

        * associativity of f across every nesting split,
        * solvability of b in f(B, x) over the carrier (quasihypergroup),
        * existence of a scalar neutral for f equal to ``zero`` (all scalar
          neutrals are reported; derived structures with m > 2 may admit
          more than one),
        * uniqueness of inverses relative to ``zero``,
        * the reversibility exchange law,
        * associativity of g across every nesting split,
        * distributivity of g over f -- mandatory containment form plus an
          informational equality form, see ``AxiomReport``,
        * absorption of ``zero`` under g,
        * optionally, the identity law for the designated one
          (``check_identity=True``; informational, requires ``one``).

        Returns the first counterexample per failed axiom, chosen smallest
        in lexicographic order.
        """
        if check_identity and self.one is None:
            raise IdentityAbsentError(
                f"{self.name}: identity check requested but no one designated")
        size = len(self.labels)
        m, n = self.m, self.n
        ftab, gtab = self.f, self.g
        zero = self.zero
        checks: list[AxiomCheck] = []

        # scalar neutrals of f
        neutrals = []
        for e in range(size):
            pad = (e,) * (m - 1)
            if all(ftab[tuple(sorted((x,) + pad))] == frozenset({x}) for x in range(size)):
                neutrals.append(e)
        neutral_ok = zero in neutrals
        detail = f"scalar neutrals: {neutrals}"
        if len(neutrals) > 1:
            detail += " (not unique; designated zero accepted)"
        checks.append(AxiomCheck(
            "neutral_exists_unique", neutral_ok, True,
            None if neutral_ok else (zero,), detail))

        # inverses relative to zero
        inv: dict[int, int] = {}
        inv_ok = True
        inv_cex = None
        pad = (zero,) * (m - 2)
        for x in range(size):
            hits = [y for y in range(size) if zero in ftab[tuple(sorted((x, y) + pad))]]
            if len(hits) != 1:
                inv_ok = False
                inv_cex = (x,)
                break
            inv[x] = hits[0]
        checks.append(AxiomCheck("inverses_unique", inv_ok, True, inv_cex,
                                 None if inv_ok else "no unique inverse"))

        # f associativity: same value across every split of a (2m-1)-multiset
        ok, cex = True, None
        for big in multisets(size, 2 * m - 1):
            baseline = None
            seen_inner: set[tuple[int, ...]] = set()
            for idx in itertools.combinations(range(2 * m - 1), m):
                inner = tuple(big[i] for i in idx)
                if inner in seen_inner:
                    continue
                seen_inner.add(inner)
                outer = list(big)
                for i in reversed(idx):
                    del outer[i]
                out: set[int] = set()
                for y in ftab[inner]:
                    out |= ftab[tuple(sorted([y] + outer))]
                val = frozenset(out)
                if baseline is None:
                    baseline = val
                elif val != baseline:
                    ok, cex = False, big
                    break
            if not ok:
                break
        checks.append(AxiomCheck("f_associative", ok, True, cex,
                                 None if ok else "nesting splits disagree"))

        # solvability of b in f(B, x)
        ok, cex = True, None
        for base in multisets(size, m - 1):
            for b in range(size):
                if not any(b in ftab[tuple(sorted(base + (x,)))] for x in range(size)):
                    ok, cex = False, (b,) + base
                    break
            if not ok:
                break
        checks.append(AxiomCheck("f_solvable", ok, True, cex,
                                 None if ok else "equation has no solution"))

        # reversibility: x in f(T) implies every T[i] in f(x, inverses of rest)
        ok, cex = True, None
        if inv_ok:
            for tup in multisets(size, m):
                for x in ftab[tup]:
                    for i in range(m):
                        if i > 0 and tup[i] == tup[i - 1]:
                            continue
                        rest = tup[:i] + tup[i + 1:]
                        back = tuple(sorted((x,) + tuple(inv[t] for t in rest)))
                        if tup[i] not in ftab[back]:
                            ok, cex = False, tup + (x,)
                            break
                    if not ok:
                        break
                if not ok:
                    break
        else:
            ok, cex = False, None
        checks.append(AxiomCheck(
            "reversibility", ok, True, cex,
            None if ok else ("requires unique inverses" if not inv_ok
                             else "exchange law fails")))

        # g associativity
        ok, cex = True, None
        for big in multisets(size, 2 * n - 1):
            baseline = None
            seen_inner = set()
            for idx in itertools.combinations(range(2 * n - 1), n):
                inner = tuple(big[i] for i in idx)
                if inner in seen_inner:
                    continue
                seen_inner.add(inner)
                outer = list(big)
                for i in reversed(idx):
                    del outer[i]
                val = gtab[tuple(sorted([gtab[inner]] + outer))]
                if baseline is None:
                    baseline = val
                elif val != baseline:
                    ok, cex = False, big
                    break
            if not ok:
                break
        checks.append(AxiomCheck("g_associative", ok, True, cex,
                                 None if ok else "nesting splits disagree"))

        # distributivity of g over f
        incl_ok, incl_cex = True, None
        eq_ok, eq_cex = True, None
        for coeffs in multisets(size, n - 1):
            image = {}
            for w in range(size):
                image[w] = gtab[tuple(sorted(coeffs + (w,)))]
            for xs in multisets(size, m):
                spread = frozenset(image[w] for w in ftab[xs])
                bundled = ftab[tuple(sorted(image[x] for x in xs))]
                if not bundled <= spread and incl_ok:
                    incl_ok, incl_cex = False, coeffs + xs
                if spread != bundled and eq_ok:
                    eq_ok, eq_cex = False, coeffs + xs
            if not incl_ok and not eq_ok:
                break
        checks.append(AxiomCheck(
            "distributive", incl_ok, True, incl_cex,
            None if incl_ok else "f of scaled parts escapes the scaled hypersum"))
        checks.append(AxiomCheck(
            "distributive_equality", eq_ok, False, eq_cex,
            None if eq_ok else "containment holds but equality fails"))

        # zero absorbing under g
        ok, cex = True, None
        for base in multisets(size, n - 1):
            if gtab[tuple(sorted(base + (zero,)))] != zero:
                ok, cex = False, base + (zero,)
                break
        checks.append(AxiomCheck("zero_absorbing", ok, True, cex, None))

        if check_identity:
            one = self.one
            pad = (one,) * (n - 1)
            bad = [x for x in range(size) if gtab[tuple(sorted((x,) + pad))] != x]
            oki = not bad
            checks.append(AxiomCheck(
                "scalar_identity", oki, False,
                None if oki else (bad[0],) + pad,
                None if oki else
                f"g({self.labels[bad[0]]}, one^{n-1}) != {self.labels[bad[0]]}"))

        return AxiomReport(self.name, tuple(checks), tuple(neutrals))


def make_structure(name: str, m: int, n: int, labels: Sequence[str],
                   f: Mapping[tuple[int, ...], Iterable[int]],
                   g: Mapping[tuple[int, ...], int],
                   zero: int, one: int | None = None) -> KrasnerStructure:
    """Normalizing constructor: sorts keys, freezes values."""
    fnorm = {tuple(sorted(k)): frozenset(v) for k, v in f.items()}
    gnorm = {tuple(sorted(k)): v for k, v in g.items()}
    return KrasnerStructure(name=name, m=m, n=n, labels=tuple(labels),
                            f=fnorm, g=gnorm, zero=zero, one=one)
