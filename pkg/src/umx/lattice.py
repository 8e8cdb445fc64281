"""Posets, accessible distributive lattices of subsets, and linear extensions.

Subsets of the ground set E = {1, ..., n} are plain ``int`` bitmasks with
element ``i`` stored in bit ``i - 1``.  Lattices keep their members in the
canonical order (cardinality, then numeric mask value).
"""

from __future__ import annotations

import os
from functools import cached_property
from typing import Iterable, Iterator

from .errors import CapExceeded, LatticeError, NotALinearExtension, PosetError

MAX_N = 20
MAX_LINEAR_EXTENSIONS = 10**7


def boolean_cap() -> int:
    """Largest n for which 2^E may be materialized (``UMX_MAX_N`` overrides)."""
    raw = os.environ.get("UMX_MAX_N")
    if raw:
        return min(int(raw), MAX_N)
    return 16


def check_boolean_n(n: int) -> None:
    cap = boolean_cap()
    if n > cap:
        raise CapExceeded(
            f"operation materializes 2^E for n={n}; limit is n<={cap} (set UMX_MAX_N to override)"
        )


# -- subsets -----------------------------------------------------------------


def bit(e: int) -> int:
    return 1 << (e - 1)


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are numbered from 1, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def canonical_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def format_set(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elements_of(mask)) + "}"


# -- posets ------------------------------------------------------------------


class Poset:
    """A partial order on {1..n}.

    Stored as ``down[i]``: the mask of all elements <= element i+1 (itself
    included).  Instances are immutable.
    """

    __slots__ = ("n", "down", "__dict__")

    def __init__(self, n: int, down: Iterable[int]):
        down = tuple(down)
        if len(down) != n:
            raise PosetError(f"expected {n} down-sets, got {len(down)}")
        if n > MAX_N:
            raise CapExceeded(f"n={n} exceeds the hard cap n<={MAX_N}")
        for i, d in enumerate(down):
            if not d >> i & 1:
                raise PosetError("relation is not reflexive")
            if d >> n:
                raise PosetError("down-set mentions elements outside the ground set")
        # transitivity: everything below i is below each of its predecessors' down-sets
        for i, d in enumerate(down):
            acc = 0
            m = d
            j = 0
            while m:
                if m & 1:
                    acc |= down[j]
                m >>= 1
                j += 1
            if acc != d:
                raise PosetError("relation is not transitive")
        for i in range(n):
            for j in range(i + 1, n):
                if down[i] >> j & 1 and down[j] >> i & 1:
                    raise PosetError(
                        f"relation has a cycle through {i + 1} and {j + 1}",
                        witness=(i + 1, j + 1),
                    )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "down", down)

    def __setattr__(self, name, value):
        raise AttributeError("Poset is immutable")

    @classmethod
    def from_relations(cls, n: int, relations: Iterable[tuple[int, int]] = ()) -> "Poset":
        """Build from pairs ``(a, b)`` meaning a < b; the transitive closure is taken."""
        if n < 0:
            raise PosetError("n must be non-negative")
        if n > MAX_N:
            raise CapExceeded(f"n={n} exceeds the hard cap n<={MAX_N}")
        down = [1 << i for i in range(n)]
        for a, b in relations:
            if not (1 <= a <= n and 1 <= b <= n):
                raise PosetError(f"relation ({a},{b}) outside ground set [1..{n}]")
            if a == b:
                continue
            down[b - 1] |= 1 << (a - 1)
        # closure by repeated propagation (Warshall on bitsets)
        for k in range(n):
            kb = 1 << k
            for i in range(n):
                if down[i] & kb:
                    down[i] |= down[k]
        for i in range(n):
            for j in range(i + 1, n):
                if down[i] >> j & 1 and down[j] >> i & 1:
                    raise PosetError(
                        f"relations contain a cycle through {i + 1} and {j + 1}",
                        witness=(i + 1, j + 1),
                    )
        return cls(n, down)

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(n, [1 << i for i in range(n)])

    @classmethod
    def chain(cls, n: int) -> "Poset":
        return cls(n, [(1 << (i + 1)) - 1 for i in range(n)])

    def leq(self, a: int, b: int) -> bool:
        return bool(self.down[b - 1] >> (a - 1) & 1)

    @cached_property
    def up(self) -> tuple[int, ...]:
        up = [0] * self.n
        for j, d in enumerate(self.down):
            for i in range(self.n):
                if d >> i & 1:
                    up[i] |= 1 << j
        return tuple(up)

    def relations(self) -> list[tuple[int, int]]:
        """Covering pairs (a, b) with a < b, sorted."""
        out = []
        for j in range(self.n):
            strict = self.down[j] & ~(1 << j)
            for i in range(self.n):
                if not strict >> i & 1:
                    continue
                # i is covered by j unless some k strictly between
                between = strict & self.up[i] & ~(1 << i)
                if not between:
                    out.append((i + 1, j + 1))
        out.sort()
        return out

    def dual(self) -> "Poset":
        return Poset(self.n, self.up)

    def is_antichain(self) -> bool:
        return all(d == 1 << i for i, d in enumerate(self.down))

    def is_ideal(self, mask: int) -> bool:
        m = mask
        i = 0
        while m:
            if m & 1 and self.down[i] & ~mask:
                return False
            m >>= 1
            i += 1
        return True

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and self.down == other.down

    def __hash__(self):
        return hash((self.n, self.down))

    def __repr__(self):
        return f"Poset(n={self.n}, relations={self.relations()})"


# -- distributive lattices ---------------------------------------------------


class DistLattice:
    """An accessible distributive sublattice of 2^E, stored explicitly.

    Build with :meth:`from_sets` (validated) or :func:`order_ideals`.
    """

    __slots__ = ("n", "sets", "_index", "__dict__")

    def __init__(self, n: int, sets: Iterable[int], *, _trusted: bool = False):
        if n > MAX_N:
            raise CapExceeded(f"n={n} exceeds the hard cap n<={MAX_N}")
        sets = tuple(sorted(set(sets), key=canonical_key))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "_index", {m: k for k, m in enumerate(sets)})
        if not _trusted:
            ok, witness = is_accessible(sets, n)
            if not ok:
                raise LatticeError(
                    f"lattice is not accessible: {format_set(witness)} has no removable element",
                    witness=witness,
                )

    def __setattr__(self, name, value):
        raise AttributeError("DistLattice is immutable")

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "DistLattice":
        return cls(n, [mask_of(s) for s in sets])

    @classmethod
    def boolean(cls, n: int) -> "DistLattice":
        check_boolean_n(n)
        return cls(n, range(1 << n), _trusted=True)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, mask):
        return mask in self._index

    def index(self, mask: int) -> int:
        return self._index[mask]

    def __eq__(self, other):
        return isinstance(other, DistLattice) and self.n == other.n and self.sets == other.sets

    def __hash__(self):
        return hash((self.n, self.sets))

    def __repr__(self):
        return f"DistLattice(n={self.n}, size={len(self.sets)})"

    @property
    def top(self) -> int:
        return full_mask(self.n)

    @cached_property
    def poset(self) -> Poset:
        return irr_poset(self)

    def is_boolean(self) -> bool:
        return len(self.sets) == 1 << self.n

    def sup(self, mask: int) -> int:
        """Smallest member containing ``mask``."""
        down = self.poset.down
        out = 0
        i = 0
        m = mask
        while m:
            if m & 1:
                out |= down[i]
            m >>= 1
            i += 1
        return out

    def inf(self, mask: int) -> int:
        """Largest member contained in ``mask``."""
        down = self.poset.down
        out = 0
        i = 0
        m = mask
        while m:
            if m & 1 and not down[i] & ~mask:
                out |= 1 << i
            m >>= 1
            i += 1
        return out

    def covers_up(self, mask: int) -> Iterator[int]:
        """Elements e (1-based) with e not in mask and mask + e in the lattice."""
        down = self.poset.down
        for i in range(self.n):
            b = 1 << i
            if not mask & b and not down[i] & ~(mask | b):
                yield i + 1

    def is_sublattice_of(self, other: "DistLattice") -> bool:
        return self.n == other.n and all(m in other for m in self.sets)


def sup_D(D: DistLattice, mask: int) -> int:
    return D.sup(mask)


def inf_D(D: DistLattice, mask: int) -> int:
    return D.inf(mask)


def _closure_witness(sets: tuple[int, ...], index) -> tuple[int, int] | None:
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a | b not in index or a & b not in index:
                return (a, b)
    return None


def is_accessible(sets: Iterable[int], n: int) -> tuple[bool, int | None]:
    """Decide accessibility of a ring of sets.

    Returns ``(True, None)`` or ``(False, A)`` with A a nonempty member from
    which no single element can be removed.  Raises :class:`LatticeError`
    (with a witness pair) when the family is not a lattice of sets at all.
    """
    sets = tuple(sorted(set(sets), key=canonical_key))
    index = set(sets)
    top = full_mask(n)
    if 0 not in index or top not in index:
        raise LatticeError("family must contain the empty set and E")
    if any(m >> n for m in sets):
        raise LatticeError("family mentions elements outside the ground set")
    # Every ring of sets is the family of ideals of the preorder
    # "i <= j iff every member containing j contains i"; compare against it
    # instead of testing all pairs.
    cap = [top] * n
    for m in sets:
        x = m
        i = 0
        while x:
            if x & 1:
                cap[i] &= m
            x >>= 1
            i += 1
    ideals = _ideals_of_preorder(n, cap, limit=len(sets))
    if ideals is None or ideals != index:
        w = _closure_witness(sets, index)
        if w is None:  # pragma: no cover - preorder argument guarantees a witness
            raise LatticeError("family is not closed under union and intersection")
        raise LatticeError(
            f"not closed under union/intersection: {format_set(w[0])}, {format_set(w[1])}",
            witness=w,
        )
    for m in sets:
        if not m:
            continue
        x = m
        while x:
            low = x & -x
            if m & ~low in index:
                break
            x &= ~low
        else:
            return False, m
    return True, None


def _ideals_of_preorder(n: int, cap: list[int], limit: int) -> set[int] | None:
    """All down-closed sets of the preorder given by ``cap``; None if more than ``limit``."""
    out = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                if m >> i & 1:
                    continue
                grown = m | cap[i]
                if grown not in out:
                    out.add(grown)
                    if len(out) > limit:
                        return None
                    nxt.append(grown)
        frontier = nxt
    return out


def order_ideals(P: Poset, cap: int | None = None) -> DistLattice:
    """The lattice J(P) of down-closed subsets."""
    if cap is None:
        cap = 1 << boolean_cap()
    n = P.n
    order = topological_order(P)
    out: list[int] = []

    def grow(k: int, current: int):
        if k == n:
            out.append(current)
            if len(out) > cap:
                raise CapExceeded(f"J(P) has more than {cap} members")
            return
        i = order[k]
        grow(k + 1, current)
        if not P.down[i] & ~(current | (1 << i)):
            grow(k + 1, current | (1 << i))

    grow(0, 0)
    lat = DistLattice(n, out, _trusted=True)
    lat.__dict__["poset"] = P
    return lat


def topological_order(P: Poset) -> list[int]:
    """0-based elements sorted so that predecessors come first."""
    return sorted(range(P.n), key=lambda i: (P.down[i].bit_count(), i))


def irr_poset(D: DistLattice) -> Poset:
    """Characteristic poset: i <= j iff every member containing j contains i."""
    n = D.n
    cap = [full_mask(n)] * n
    for m in D.sets:
        x = m
        i = 0
        while x:
            if x & 1:
                cap[i] &= m
            x >>= 1
            i += 1
    return Poset(n, cap)


def atoms(D: DistLattice) -> frozenset[int]:
    return frozenset(i + 1 for i in range(D.n) if (1 << i) in D)


def adjoin_set(D: DistLattice, A: int) -> DistLattice:
    """Sublattice of 2^E generated by D and all subsets of A."""
    if A >> D.n:
        raise LatticeError("set mentions elements outside the ground set")
    subs = []
    s = A
    while True:
        subs.append(s)
        if s == 0:
            break
        s = (s - 1) & A
    new = {m | a for m in D.sets for a in subs}
    return DistLattice(D.n, new, _trusted=True)


def adjoin_atom(D: DistLattice, a: int) -> DistLattice:
    """D[a] = D plus every member with ``a`` added."""
    if not 1 <= a <= D.n:
        raise LatticeError(f"element {a} outside ground set")
    b = bit(a)
    if b in D:
        raise LatticeError(f"{{{a}}} is already an atom of the lattice", witness=a)
    new = set(D.sets)
    new.update(m | b for m in D.sets)
    return DistLattice(D.n, new, _trusted=True)


def dual_lattice(D: DistLattice) -> DistLattice:
    top = D.top
    return DistLattice(D.n, (top & ~m for m in D.sets), _trusted=True)


# -- linear extensions -------------------------------------------------------


def linear_extensions(P: Poset, cap: int = MAX_LINEAR_EXTENSIONS) -> Iterator[tuple[int, ...]]:
    """Yield Le(P) in lexicographic order as tuples of 1-based elements.

    Raises :class:`CapExceeded` when asked for more than ``cap`` extensions.
    """
    n = P.n
    strict = [P.down[i] & ~(1 << i) for i in range(n)]
    perm: list[int] = []
    produced = 0

    def rec(placed: int):
        nonlocal produced
        if len(perm) == n:
            produced += 1
            if produced > cap:
                raise CapExceeded(f"more than {cap} linear extensions")
            yield tuple(perm)
            return
        for i in range(n):
            b = 1 << i
            if placed & b or strict[i] & ~placed:
                continue
            perm.append(i + 1)
            yield from rec(placed | b)
            perm.pop()

    yield from rec(0)


def count_linear_extensions(P: Poset) -> int:
    """|Le(P)| by dynamic programming over down-sets."""
    D = order_ideals(P)
    counts = {0: 1}
    for m in D.sets[1:]:
        total = 0
        x = m
        while x:
            low = x & -x
            rest = m & ~low
            if rest in counts:
                total += counts[rest]
            x &= ~low
        counts[m] = total
    return counts[D.top]


def is_linear_extension(P: Poset, perm: Iterable[int]) -> bool:
    perm = tuple(perm)
    if sorted(perm) != list(range(1, P.n + 1)):
        return False
    placed = 0
    for e in perm:
        if P.down[e - 1] & ~(placed | bit(e)):
            return False
        placed |= bit(e)
    return True


def check_linear_extension(P: Poset, perm: Iterable[int]) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(1, P.n + 1)):
        raise NotALinearExtension(f"{perm} is not a permutation of 1..{P.n}")
    if not is_linear_extension(P, perm):
        raise NotALinearExtension(f"{perm} is not a linear extension of the characteristic poset")
    return perm


def initial_segments(perm: Iterable[int]) -> list[int]:
    """Masks A_0 = {} < A_1 < ... < A_n of the chain read off a total order."""
    out = [0]
    m = 0
    for e in perm:
        m |= bit(e)
        out.append(m)
    return out
