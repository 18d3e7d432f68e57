"""Structure interchange format, bundled golden structures, and builders.

File format (UTF-8 JSON text)::

    {
      "name": "Z4(2,2)",
      "m": 2, "n": 2,
      "carrier": ["0", "1", "2", "3"],
      "zero": "0",
      "one": "1",                # optional; omitted when absent
      "f": {"0,0": [0], "0,1": [1], ...},
      "g": {"0,0": 0, ...}
    }

``zero``/``one`` are labels; f and g keys are the sorted index multisets
joined by commas and must cover every multiset exactly once (commutativity
is therefore a parse-time guarantee); f values are index lists.  Canonical
serialization orders keys by numeric tuple and is byte stable.
"""
from __future__ import annotations

import itertools
import json
import math
from typing import Iterable, Sequence

from .structures import (
    AxiomFailure,
    KrasnerError,
    KrasnerStructure,
    multisets,
)


class StructureFormatError(KrasnerError, ValueError):
    """Malformed structure document."""


class MissingEntryError(StructureFormatError):
    """A required multiset key is absent from f or g."""


class DuplicateKeyError(StructureFormatError):
    """A JSON object repeats a key."""


class IndexOutOfRangeError(StructureFormatError):
    """A table key or value references an element outside the carrier."""


class UnsortedKeyError(StructureFormatError):
    """A table key is not a sorted index sequence."""


_FIELDS = ("name", "m", "n", "carrier", "zero", "one", "f", "g")


def _reject_duplicates(pairs):
    seen = set()
    out = {}
    for k, v in pairs:
        if k in seen:
            raise DuplicateKeyError(f"duplicate key {k!r}")
        seen.add(k)
        out[k] = v
    return out


def _parse_key(raw: str, arity: int, size: int) -> tuple[int, ...]:
    parts = raw.split(",")
    if len(parts) != arity:
        raise StructureFormatError(
            f"key {raw!r} has {len(parts)} indices, expected {arity}")
    try:
        idx = tuple(int(p) for p in parts)
    except ValueError:
        raise StructureFormatError(f"key {raw!r} is not an index sequence") from None
    for i in idx:
        if not 0 <= i < size:
            raise IndexOutOfRangeError(f"key {raw!r} references index {i}")
    if list(idx) != sorted(idx):
        raise UnsortedKeyError(f"key {raw!r} is not sorted")
    return idx


def parse_structure(text: str) -> KrasnerStructure:
    """Parse a structure document.

    Enforces every structural invariant (totality, sortedness, ranges,
    distinct labels) but does not verify algebraic axioms.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise StructureFormatError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise StructureFormatError("document root must be an object")
    unknown = set(doc) - set(_FIELDS)
    if unknown:
        raise StructureFormatError(f"unknown fields: {sorted(unknown)}")
    for required in ("name", "m", "n", "carrier", "zero", "f", "g"):
        if required not in doc:
            raise StructureFormatError(f"missing field {required!r}")
    name = doc["name"]
    m, n = doc["m"], doc["n"]
    if not isinstance(name, str):
        raise StructureFormatError("name must be a string")
    if not (isinstance(m, int) and isinstance(n, int)):
        raise StructureFormatError("m and n must be integers")
    carrier = doc["carrier"]
    if (not isinstance(carrier, list) or not carrier
            or not all(isinstance(x, str) for x in carrier)):
        raise StructureFormatError("carrier must be a nonempty list of labels")
    if len(set(carrier)) != len(carrier):
        raise StructureFormatError("carrier labels must be distinct")
    size = len(carrier)
    lookup = {lbl: i for i, lbl in enumerate(carrier)}

    def label_index(field: str) -> int:
        val = doc[field]
        if val not in lookup:
            raise StructureFormatError(f"{field} label {val!r} not in carrier")
        return lookup[val]

    zero = label_index("zero")
    one = None
    if "one" in doc and doc["one"] is not None:
        one = label_index("one")

    fdoc, gdoc = doc["f"], doc["g"]
    if not isinstance(fdoc, dict) or not isinstance(gdoc, dict):
        raise StructureFormatError("f and g must be objects")
    f = {}
    for raw, val in fdoc.items():
        key = _parse_key(raw, m, size)
        if not isinstance(val, list) or not val:
            raise StructureFormatError(f"f[{raw!r}] must be a nonempty index list")
        for v in val:
            if not isinstance(v, int) or not 0 <= v < size:
                raise IndexOutOfRangeError(f"f[{raw!r}] value {v} out of range")
        f[key] = frozenset(val)
    g = {}
    for raw, val in gdoc.items():
        key = _parse_key(raw, n, size)
        if not isinstance(val, int) or not 0 <= val < size:
            raise IndexOutOfRangeError(f"g[{raw!r}] value {val} out of range")
        g[key] = val
    for tup in multisets(size, m):
        if tup not in f:
            raise MissingEntryError(f"f is missing key {','.join(map(str, tup))}")
    for tup in multisets(size, n):
        if tup not in g:
            raise MissingEntryError(f"g is missing key {','.join(map(str, tup))}")
    return KrasnerStructure(name=name, m=m, n=n, labels=tuple(carrier),
                            f=f, g=g, zero=zero, one=one)


def serialize_structure(s: KrasnerStructure) -> str:
    """Canonical byte-stable document for a structure (keys sorted by numeric
    tuple, fixed field order, trailing newline)."""
    doc: dict = {
        "name": s.name,
        "m": s.m,
        "n": s.n,
        "carrier": list(s.labels),
        "zero": s.labels[s.zero],
    }
    if s.one is not None:
        doc["one"] = s.labels[s.one]
    doc["f"] = {",".join(map(str, k)): sorted(s.f[k])
                for k in sorted(s.f)}
    doc["g"] = {",".join(map(str, k)): s.g[k]
                for k in sorted(s.g)}
    return json.dumps(doc, indent=2) + "\n"


def load_structure(path) -> KrasnerStructure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_structure(fh.read())


def save_structure(s: KrasnerStructure, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_structure(s))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _verified(s: KrasnerStructure) -> KrasnerStructure:
    report = s.verify_axioms()
    if not report.overall:
        raise AxiomFailure(f"builder produced a non-verifying structure {s.name}",
                           report)
    return s


def build_zk_ring(k: int, m: int = 2, n: int = 2) -> KrasnerStructure:
    """The modular ring on k elements viewed with an m-ary singleton
    hyper-sum and an n-ary product: f(x_1..x_m) = {sum mod k},
    g(x_1..x_n) = prod mod k.  zero is 0; one is 1 (0 for the one-element
    ring).  The output is verified before being returned."""
    if k < 1:
        raise ValueError("k must be positive")
    labels = tuple(str(i) for i in range(k))
    f = {tup: frozenset({sum(tup) % k}) for tup in multisets(k, m)}
    g = {tup: math.prod(tup) % k for tup in multisets(k, n)}
    return _verified(KrasnerStructure(
        name=f"Z{k}({m},{n})", m=m, n=n, labels=labels, f=f, g=g,
        zero=0, one=1 % k))


def build_krasner_quotient(k: int, units: Iterable[int],
                           m: int = 2, n: int = 2) -> KrasnerStructure:
    """Orbit structure of the modular ring under a group of units.

    The carrier is the set of multiplicative orbits of ``range(k)`` under
    the given unit set G (which must contain 1, consist of units, and be
    closed under multiplication).  f maps orbit tuples to the set of orbits
    meeting the elementwise sum; g is the orbit of the product, which is
    well defined precisely because G is multiplicatively closed.  This is
    the standard source of genuinely set-valued hyper-sums.  The output is
    verified; parameters whose orbit structure breaks an axiom raise
    ``AxiomFailure``.
    """
    G = sorted(set(units))
    if k < 2:
        raise ValueError("k must be at least 2")
    if 1 not in G:
        raise ValueError("unit set must contain 1")
    for u in G:
        if math.gcd(u % k, k) != 1:
            raise ValueError(f"{u} is not a unit modulo {k}")
    for a in G:
        for b in G:
            if (a * b) % k not in G:
                raise ValueError("unit set is not multiplicatively closed")

    orbit_sets: list[frozenset[int]] = []
    orbit_of = {}
    for x in range(k):
        if x in orbit_of:
            continue
        orb = frozenset((x * u) % k for u in G)
        idx = len(orbit_sets)
        orbit_sets.append(orb)
        for y in orb:
            orbit_of[y] = idx
    order = sorted(range(len(orbit_sets)), key=lambda i: min(orbit_sets[i]))
    rank = {old: new for new, old in enumerate(order)}
    orbit_sets = [orbit_sets[i] for i in order]
    orbit_of = {x: rank[i] for x, i in orbit_of.items()}

    size = len(orbit_sets)
    labels = tuple(str(min(orb)) for orb in orbit_sets)
    f = {}
    for tup in multisets(size, m):
        vals = set()
        for combo in itertools.product(*[sorted(orbit_sets[i]) for i in tup]):
            vals.add(orbit_of[sum(combo) % k])
        f[tup] = frozenset(vals)
    g = {}
    for tup in multisets(size, n):
        vals = set()
        for combo in itertools.product(*[sorted(orbit_sets[i]) for i in tup]):
            prod = 1
            for c in combo:
                prod = (prod * c) % k
            vals.add(orbit_of[prod])
        if len(vals) != 1:
            raise AxiomFailure(
                f"product of orbits is not single valued at {tup} "
                f"(k={k}, units={G})")
        g[tup] = vals.pop()
    return _verified(KrasnerStructure(
        name=f"KQ{k}" + "{" + ",".join(map(str, G)) + "}",
        m=m, n=n, labels=labels, f=f, g=g,
        zero=orbit_of[0], one=orbit_of[1 % k]))


def golden_33() -> KrasnerStructure:
    """Bundled golden structure on three elements with arities (3,3).

    The hyper-sum returns the whole carrier on mixed {1,2} arguments; the
    product fixes 1 as identity and sends every other zero-free triple to 2.
    Satisfies every mandatory axiom (the equality form of distributivity
    fails and is reported informationally).
    """
    R = frozenset({0, 1, 2})
    f = {
        (0, 0, 0): frozenset({0}), (0, 0, 1): frozenset({1}),
        (0, 1, 1): frozenset({1}), (1, 1, 1): frozenset({1}),
        (1, 1, 2): R, (0, 1, 2): R, (0, 0, 2): frozenset({2}),
        (0, 2, 2): frozenset({2}), (1, 2, 2): R, (2, 2, 2): frozenset({2}),
    }
    g = {}
    for tup in multisets(3, 3):
        if 0 in tup:
            g[tup] = 0
        elif tup == (1, 1, 1):
            g[tup] = 1
        else:
            g[tup] = 2
    return KrasnerStructure(name="K33", m=3, n=3, labels=("0", "1", "2"),
                            f=f, g=g, zero=0, one=1)


def golden_24() -> KrasnerStructure:
    """Bundled golden structure on four elements with arities (2,4).

    The binary hyper-sum has blocks A = {0,1} and B = {2,3}; the 4-ary
    product is 2 on all-B tuples and 0 otherwise.  The designated one (label
    1) fails the identity law, which is exactly what makes this structure a
    useful stress case for identity-dependent predicates.
    """
    A = frozenset({0, 1})
    B = frozenset({2, 3})
    f = {
        (0, 0): frozenset({0}), (0, 1): frozenset({1}),
        (0, 2): frozenset({2}), (0, 3): frozenset({3}),
        (1, 1): A, (1, 2): frozenset({3}), (1, 3): B,
        (2, 2): frozenset({0}), (2, 3): frozenset({1}),
        (3, 3): A,
    }
    g = {tup: (2 if all(x in B for x in tup) else 0) for tup in multisets(4, 4)}
    return KrasnerStructure(name="K24", m=2, n=4, labels=("0", "1", "2", "3"),
                            f=f, g=g, zero=0, one=1)


def paper_examples() -> list[KrasnerStructure]:
    """The two bundled golden structures: the (3,3) one and the (2,4) one."""
    return [golden_33(), golden_24()]


def standard_corpus() -> list[KrasnerStructure]:
    """The reference corpus for audits: both golden structures, the modular
    rings for k = 1..8 at arities (2,2), (3,3) and (2,4), and two orbit
    quotients with genuinely set-valued sums."""
    out = paper_examples()
    for k in range(1, 9):
        for (m, n) in ((2, 2), (3, 3), (2, 4)):
            out.append(build_zk_ring(k, m, n))
    out.append(build_krasner_quotient(5, [1, 4]))
    out.append(build_krasner_quotient(7, [1, 2, 4]))
    return out
