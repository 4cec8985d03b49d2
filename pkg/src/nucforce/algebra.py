"""Finite posets and their upset Heyting algebras.

Every other module evaluates into a `HeytingAlg`.  Carrier elements are
plain integer indices; index 0 is bottom and the last index is top.  For
upset algebras the indices follow the upset bit patterns, so enumeration
order is reproducible across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

SIZE_CAP = 2 ** 16


class AlgebraError(ValueError):
    """Raised for malformed posets, tables, or unknown elements."""


@dataclass(frozen=True)
class FinPoset:
    """A finite poset given by labels and a full <= relation table."""

    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]

    def __post_init__(self):
        errs = poset_violations(self.elements, self.leq)
        if errs:
            raise AlgebraError(errs[0])

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    @staticmethod
    def from_covers(elements: list[str], covers: list[tuple[str, str]]) -> "FinPoset":
        """Build a poset as the reflexive-transitive closure of cover pairs."""
        elems = tuple(elements)
        known = set(elems)
        for a, b in covers:
            if a not in known or b not in known:
                raise AlgebraError(f"cover ({a!r}, {b!r}) mentions unknown element")
        rel = {(e, e) for e in elems}
        rel.update((a, b) for a, b in covers)
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        return FinPoset(elems, frozenset(rel))

    @staticmethod
    def chain(n: int) -> "FinPoset":
        labels = [f"q{i}" for i in range(n)]
        return FinPoset.from_covers(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])

    @staticmethod
    def antichain(n: int) -> "FinPoset":
        return FinPoset.from_covers([f"a{i}" for i in range(n)], [])


def poset_violations(elements, leq) -> list[str]:
    """Return human-readable axiom violations (empty list means valid)."""
    errs = []
    for e in elements:
        if (e, e) not in leq:
            errs.append(f"reflexivity fails at {e!r}")
            return errs
    for a, b in leq:
        if a != b and (b, a) in leq:
            errs.append(f"antisymmetry fails at pair ({a!r}, {b!r})")
            return errs
    leqset = set(leq)
    for a, b in leq:
        for c in elements:
            if (b, c) in leqset and (a, c) not in leqset:
                errs.append(f"transitivity fails at triple ({a!r}, {b!r}, {c!r})")
                return errs
    return errs


def load_poset(path: str) -> FinPoset:
    """Read a poset from a JSON file with `elements` and `covers` keys."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "elements" not in data or "covers" not in data:
        raise AlgebraError(f"{path}: poset file needs 'elements' and 'covers' keys")
    return FinPoset.from_covers(list(data["elements"]), [tuple(c) for c in data["covers"]])


@dataclass(frozen=True)
class HeytingAlg:
    """A finite Heyting algebra with explicit operation tables.

    `carrier` is range(n); `names[i]` is a printable label.  `meet`,
    `join`, `imp` are n x n tables of indices.  Bottom is 0, top is n-1.
    """

    names: tuple[str, ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    imp: tuple[tuple[int, ...], ...]
    # for upset algebras: the bitmask of each carrier element, else None
    masks: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def carrier(self) -> range:
        return range(len(self.names))

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.names) - 1

    def le(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def check_element(self, a: int) -> None:
        if not 0 <= a < self.size:
            raise AlgebraError(f"unknown element id {a} (carrier size {self.size})")

    def meet_all(self, xs) -> int:
        acc = self.top
        for x in xs:
            acc = self.meet[acc][x]
        return acc

    def join_all(self, xs) -> int:
        acc = self.bottom
        for x in xs:
            acc = self.join[acc][x]
        return acc


def neg(h: HeytingAlg, a: int) -> int:
    """Pseudocomplement: imp(a, bottom)."""
    h.check_element(a)
    return h.imp[a][h.bottom]


def upset_algebra(p: FinPoset) -> HeytingAlg:
    """The Heyting algebra of upward-closed subsets of `p`.

    Carrier order is ascending upset bitmask (bit i = element i of the
    poset), so bottom (empty set) comes first and top (everything) last.
    meet/join are intersection/union; imp(U, V) is the largest upset
    whose intersection with U lies in V.
    """
    n = len(p.elements)
    if 2 ** n > SIZE_CAP:
        raise AlgebraError(f"poset of {n} points exceeds the {SIZE_CAP}-element algebra cap")
    idx = {e: i for i, e in enumerate(p.elements)}
    up_of = [0] * n  # bitmask of elements >= element i
    for a in p.elements:
        for b in p.elements:
            if p.le(a, b):
                up_of[idx[a]] |= 1 << idx[b]

    def is_upset(mask: int) -> bool:
        for i in range(n):
            if mask & (1 << i) and (mask & up_of[i]) != up_of[i]:
                return False
        return True

    masks = sorted(m for m in range(2 ** n) if is_upset(m))
    pos = {m: i for i, m in enumerate(masks)}
    full = (1 << n) - 1

    def imp_mask(u: int, v: int) -> int:
        # largest upset contained in complement(u) | v
        allowed = (full & ~u) | v
        out = 0
        for i in range(n):
            if (up_of[i] & allowed) == up_of[i]:
                out |= 1 << i
        return out

    size = len(masks)
    meet = tuple(tuple(pos[masks[a] & masks[b]] for b in range(size)) for a in range(size))
    join = tuple(tuple(pos[masks[a] | masks[b]] for b in range(size)) for a in range(size))
    imp = tuple(tuple(pos[imp_mask(masks[a], masks[b])] for b in range(size)) for a in range(size))
    names = tuple("{" + ",".join(p.elements[i] for i in range(n) if m & (1 << i)) + "}" for m in masks)
    return HeytingAlg(names, meet, join, imp, masks=tuple(masks))


def validate_heyting(h: HeytingAlg) -> str | None:
    """Exhaustively check the Heyting axioms; None means pass.

    Returns the first violated axiom with a witness tuple otherwise.
    """
    n = h.size
    rng = range(n)
    for t in (h.meet, h.join, h.imp):
        if len(t) != n or any(len(row) != n for row in t):
            return f"table not total over carrier of size {n}"
        for row in t:
            for v in row:
                if not 0 <= v < n:
                    return f"table entry {v} outside carrier"
    for a in rng:
        if h.meet[a][a] != a:
            return f"meet idempotence fails at ({a},)"
        if h.join[a][a] != a:
            return f"join idempotence fails at ({a},)"
        if h.meet[a][h.bottom] != h.bottom:
            return f"bottom is not a meet-absorber at ({a},)"
        if h.join[a][h.top] != h.top:
            return f"top is not a join-absorber at ({a},)"
    for a, b in product(rng, rng):
        if h.meet[a][b] != h.meet[b][a]:
            return f"meet commutativity fails at ({a}, {b})"
        if h.join[a][b] != h.join[b][a]:
            return f"join commutativity fails at ({a}, {b})"
        if h.meet[a][h.join[a][b]] != a:
            return f"absorption meet/join fails at ({a}, {b})"
        if h.join[a][h.meet[a][b]] != a:
            return f"absorption join/meet fails at ({a}, {b})"
    for a, b, c in product(rng, rng, rng):
        if h.meet[a][h.meet[b][c]] != h.meet[h.meet[a][b]][c]:
            return f"meet associativity fails at ({a}, {b}, {c})"
        if h.join[a][h.join[b][c]] != h.join[h.join[a][b]][c]:
            return f"join associativity fails at ({a}, {b}, {c})"
        if h.meet[a][h.join[b][c]] != h.join[h.meet[a][b]][h.meet[a][c]]:
            return f"distributivity fails at ({a}, {b}, {c})"
        # residuation: meet(c, a) <= b  iff  c <= imp(a, b)
        lhs = h.meet[h.meet[c][a]][b] == h.meet[c][a]
        rhs = h.meet[c][h.imp[a][b]] == c
        if lhs != rhs:
            return f"residuation fails at (c={c}, a={a}, b={b})"
    return None


def two_element() -> HeytingAlg:
    return upset_algebra(FinPoset.chain(1))


def three_chain() -> HeytingAlg:
    return upset_algebra(FinPoset.chain(2))
