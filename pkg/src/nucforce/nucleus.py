"""Nuclei (local operators) on a finite Heyting algebra.

A nucleus is an inflationary, idempotent endomap that preserves binary
meets.  This module recognises them, enumerates all of them, exposes the
pointwise order, denseness, and frames (finite sets of nuclei used as
Kripke-style worlds by the forcing translation).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import AlgebraError, HeytingAlg, neg

ENDOMAP_SCAN_LIMIT = 6  # |H| up to which we scan every endomap directly
ENUM_SIZE_CAP = 64


class NucleusError(ValueError):
    pass


@dataclass(frozen=True)
class Nucleus:
    algebra: HeytingAlg
    table: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        ok, witness = is_nucleus(self.algebra, self.table)
        if not ok:
            raise NucleusError(f"not a nucleus: {witness}")

    def __call__(self, a: int) -> int:
        return self.table[a]

    def __eq__(self, other):
        return isinstance(other, Nucleus) and self.table == other.table and self.algebra is other.algebra

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        label = self.name or "nucleus"
        return f"<{label} {list(self.table)}>"


@dataclass(frozen=True)
class LopFrame:
    """A finite set of nuclei on a shared algebra, in a fixed order."""

    algebra: HeytingAlg
    members: tuple[Nucleus, ...]

    def __post_init__(self):
        tables = [m.table for m in self.members]
        if len(set(tables)) != len(tables):
            raise NucleusError("duplicate nucleus table in frame")
        for m in self.members:
            if m.algebra is not self.algebra:
                raise NucleusError("frame member on a different algebra")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def is_nucleus(h: HeytingAlg, t) -> tuple[bool, str | None]:
    """Check the three nucleus clauses pointwise; returns (ok, witness)."""
    t = tuple(t)
    if len(t) != h.size or any(not 0 <= v < h.size for v in t):
        raise NucleusError(f"table not total over carrier of size {h.size}")
    for a in h.carrier:
        if not h.le(a, t[a]):
            return False, f"not inflationary at {a}"
        if not h.le(t[t[a]], t[a]):
            return False, f"not idempotent at {a}"
    for a, b in product(h.carrier, h.carrier):
        if not h.le(h.imp[a][b], h.imp[t[a]][t[b]]):
            return False, f"implication clause fails at ({a}, {b})"
        if t[h.meet[a][b]] != h.meet[t[a]][t[b]]:
            return False, f"binary meets not preserved at ({a}, {b})"
    return True, None


def _meet_irreducibles(h: HeytingAlg) -> list[int]:
    """Elements (below top) that are not proper meets of larger elements."""
    out = []
    for a in h.carrier:
        if a == h.top:
            continue
        strictly_above = [b for b in h.carrier if h.le(a, b) and b != a]
        if h.meet_all(strictly_above) != a:
            out.append(a)
    return out


def enumerate_nuclei(h: HeytingAlg) -> list[Nucleus]:
    """All nuclei on `h` in lexicographic table order.

    For small carriers every endomap is scanned.  Larger algebras use
    the fact that a meet-preserving map is fixed by its values on
    meet-irreducible elements: candidate assignments there are extended
    by meets and then filtered through `is_nucleus`.
    """
    n = h.size
    if n > ENUM_SIZE_CAP:
        raise AlgebraError(f"carrier size {n} exceeds the nucleus enumeration cap {ENUM_SIZE_CAP}")
    found = []
    if n <= ENDOMAP_SCAN_LIMIT:
        for t in product(h.carrier, repeat=n):
            if is_nucleus(h, t)[0]:
                found.append(Nucleus(h, t))
        return found
    irr = _meet_irreducibles(h)
    # decomposition of each carrier element as a meet of meet-irreducibles
    decomp = []
    for a in h.carrier:
        decomp.append([m for m in irr if h.le(a, m)])
    tables = set()
    # a nucleus is inflationary, so each irreducible maps above itself
    choices = [[v for v in h.carrier if h.le(m, v)] for m in irr]
    for vals in product(*choices):
        assign = dict(zip(irr, vals))
        t = tuple(h.meet_all(assign[m] for m in decomp[a]) for a in h.carrier)
        if t not in tables and is_nucleus(h, t)[0]:
            tables.add(t)
    return [Nucleus(h, t) for t in sorted(tables)]


def nucleus_le(j: Nucleus, k: Nucleus) -> bool:
    """Pointwise order: j(a) <= k(a) for every carrier element."""
    if j.algebra is not k.algebra:
        raise NucleusError("nucleus order needs a shared algebra")
    h = j.algebra
    return all(h.le(j.table[a], k.table[a]) for a in h.carrier)


def identity_nucleus(h: HeytingAlg) -> Nucleus:
    return Nucleus(h, tuple(h.carrier), name="id")


def double_negation(h: HeytingAlg) -> Nucleus:
    return Nucleus(h, tuple(neg(h, neg(h, a)) for a in h.carrier), name="notnot")


def closed_nucleus(h: HeytingAlg, u: int) -> Nucleus:
    h.check_element(u)
    return Nucleus(h, tuple(h.join[u][a] for a in h.carrier), name=f"closed:{u}")


def open_nucleus(h: HeytingAlg, u: int) -> Nucleus:
    h.check_element(u)
    return Nucleus(h, tuple(h.imp[u][a] for a in h.carrier), name=f"open:{u}")


def top_nucleus(h: HeytingAlg) -> Nucleus:
    return Nucleus(h, tuple(h.top for _ in h.carrier), name="top")


def is_dense(j: Nucleus) -> bool:
    """Dense means j(bottom) = bottom (equivalently j below double negation)."""
    return j.table[j.algebra.bottom] == j.algebra.bottom


def frame_up(frame: LopFrame, j: Nucleus) -> list[Nucleus]:
    """Frame members above `j` in the pointwise order, frame order kept."""
    if frame.algebra is not j.algebra:
        raise NucleusError("frame and nucleus on different algebras")
    return [k for k in frame.members if nucleus_le(j, k)]


def named_nucleus(h: HeytingAlg, spec: str) -> Nucleus:
    """Resolve 'id', 'notnot', 'top', 'closed:<elt>', 'open:<elt>', or an index."""
    if spec == "id":
        return identity_nucleus(h)
    if spec == "notnot":
        return double_negation(h)
    if spec == "top":
        return top_nucleus(h)
    if spec.startswith("closed:"):
        return closed_nucleus(h, int(spec.split(":", 1)[1]))
    if spec.startswith("open:"):
        return open_nucleus(h, int(spec.split(":", 1)[1]))
    if spec.isdigit():
        inventory = enumerate_nuclei(h)
        i = int(spec)
        if i >= len(inventory):
            raise NucleusError(f"nucleus index {i} out of range ({len(inventory)} enumerated)")
        return inventory[i]
    raise NucleusError(f"unknown nucleus spec {spec!r}")
