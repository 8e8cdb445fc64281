"""U-matroid rank functions on accessible distributive lattices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Callable, Iterable, Mapping

from .errors import InvalidRankFunction
from .lattice import (
    MAX_LINEAR_EXTENSIONS,
    DistLattice,
    Poset,
    bit,
    canonical_key,
    check_linear_extension,
    dual_lattice,
    format_set,
    initial_segments,
    linear_extensions,
    mask_of,
)

AXIOMS = ("calibration", "monotonicity", "submodularity", "integrality", "unit_increase")


@dataclass(frozen=True)
class RankFunction:
    """Values of a set function on a lattice, aligned with its canonical order."""

    lattice: DistLattice
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.lattice):
            raise ValueError(
                f"{len(values)} values for a lattice with {len(self.lattice)} members"
            )
        for v in values:
            if not isinstance(v, Rational):
                raise TypeError(f"rank values must be integers or rationals, got {v!r}")
            if v < 0:
                raise ValueError("rank values must be non-negative")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, lattice: DistLattice, f: Callable[[int], int]) -> "RankFunction":
        return cls(lattice, tuple(f(m) for m in lattice.sets))

    @classmethod
    def from_mapping(cls, lattice: DistLattice, table: Mapping[int, int]) -> "RankFunction":
        missing = [m for m in lattice.sets if m not in table]
        if missing:
            raise ValueError(f"no value for {format_set(missing[0])}")
        extra = [m for m in table if m not in lattice]
        if extra:
            raise ValueError(f"{format_set(extra[0])} is not a member of the lattice")
        return cls(lattice, tuple(table[m] for m in lattice.sets))

    def __call__(self, mask: int):
        return self.values[self.lattice.index(mask)]

    @cached_property
    def table(self) -> dict[int, int]:
        return dict(zip(self.lattice.sets, self.values))

    def items(self):
        return zip(self.lattice.sets, self.values)

    @property
    def n(self) -> int:
        return self.lattice.n

    def restrict(self, sub: DistLattice) -> "RankFunction":
        t = self.table
        return RankFunction(sub, tuple(t[m] for m in sub.sets))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking the five U-matroid axioms.

    ``violations`` maps axiom name to its first witness (canonical order).
    """

    violations: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def is_submodular_system(self) -> bool:
        return not any(k in self.violations for k in ("calibration", "monotonicity", "submodularity"))

    def passed(self, axiom: str) -> bool:
        return axiom not in self.violations

    def describe(self) -> list[str]:
        lines = []
        for ax in AXIOMS:
            if ax not in self.violations:
                lines.append(f"{ax}: ok")
                continue
            w = self.violations[ax]
            lines.append(f"{ax}: FAILED at " + ", ".join(format_set(m) for m in w))
        return lines


def _diamonds(lat: DistLattice):
    """Yield (A, A+e, A+f, A+e+f) for all covering squares of the lattice."""
    for A in lat.sets:
        ups = [bit(e) for e in lat.covers_up(A)]
        for i, be in enumerate(ups):
            for bf in ups[i + 1:]:
                yield A, A | be, A | bf, A | be | bf


def validate(rank: RankFunction) -> ValidationReport:
    """Check calibration, monotonicity, submodularity, integrality, unit increase.

    Monotonicity and unit increase are tested on covering pairs and
    submodularity on covering squares, which is equivalent on a distributive
    lattice.  When submodularity fails, the reported witness is the first
    failing pair (A, B) in canonical order over the whole lattice.
    """
    lat = rank.lattice
    t = rank.table
    v: dict = {}
    if t[0] != 0:
        v["calibration"] = (0,)
    for A in lat.sets:
        if not isinstance(t[A], int) and not (isinstance(t[A], Fraction) and t[A].denominator == 1):
            v["integrality"] = (A,)
            break
    for A in lat.sets:
        rA = t[A]
        for e in lat.covers_up(A):
            B = A | bit(e)
            d = t[B] - rA
            if d < 0 and "monotonicity" not in v:
                v["monotonicity"] = (A, B)
            if d > 1 and "unit_increase" not in v:
                v["unit_increase"] = (A, B)
        if "monotonicity" in v and "unit_increase" in v:
            break
    local_fail = any(t[a] + t[b] < t[top] + t[bot] for bot, a, b, top in _diamonds(lat))
    if local_fail:
        v["submodularity"] = _first_submodular_witness(rank)
    return ValidationReport({k: v[k] for k in AXIOMS if k in v})


def _first_submodular_witness(rank: RankFunction) -> tuple[int, int]:
    sets = rank.lattice.sets
    t = rank.table
    for i, A in enumerate(sets):
        rA = t[A]
        for B in sets[i + 1:]:
            if A & B in (A, B):
                continue
            if rA + t[B] < t[A | B] + t[A & B]:
                return (A, B)
    raise AssertionError("local submodularity failure without a global witness")


class UMatroid:
    """A rank function that satisfies all five U-matroid axioms.

    Construction validates; :class:`InvalidRankFunction` carries the report.
    """

    __slots__ = ("rank", "__dict__")

    def __init__(self, rank: RankFunction, *, _checked: bool = False):
        if not _checked:
            report = validate(rank)
            if not report.ok:
                raise InvalidRankFunction(
                    "not a U-matroid: " + "; ".join(l for l in report.describe() if "FAILED" in l),
                    report=report,
                )
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("UMatroid is immutable")

    @classmethod
    def from_function(cls, lattice: DistLattice, f: Callable[[int], int]) -> "UMatroid":
        return cls(RankFunction.from_function(lattice, f))

    @classmethod
    def from_mapping(cls, lattice: DistLattice, table: Mapping[int, int]) -> "UMatroid":
        return cls(RankFunction.from_mapping(lattice, table))

    @property
    def lattice(self) -> DistLattice:
        return self.rank.lattice

    @property
    def poset(self) -> Poset:
        return self.rank.lattice.poset

    @property
    def n(self) -> int:
        return self.rank.lattice.n

    @property
    def full_rank(self) -> int:
        return self.rank.table[self.lattice.top]

    @property
    def table(self) -> dict[int, int]:
        return self.rank.table

    def __call__(self, mask: int) -> int:
        return self.rank.table[mask]

    def __eq__(self, other):
        return isinstance(other, UMatroid) and self.rank == other.rank

    def __hash__(self):
        return hash(self.rank)

    def __repr__(self):
        return f"UMatroid(n={self.n}, |D|={len(self.lattice)}, rank={self.full_rank})"


def uniform_matroid(r: int, n: int) -> UMatroid:
    return UMatroid.from_function(DistLattice.boolean(n), lambda m: min(m.bit_count(), r))


# -- vertices and bases ------------------------------------------------------


def vertex_of_chain(U: UMatroid, sigma: Iterable[int]) -> tuple[int, ...]:
    """The 0/1 vertex of the base polyhedron read off a linear extension."""
    sigma = check_linear_extension(U.poset, sigma)
    t = U.table
    x = [0] * U.n
    segs = initial_segments(sigma)
    for i, e in enumerate(sigma, start=1):
        x[e - 1] = t[segs[i]] - t[segs[i - 1]]
    return tuple(x)


def basis_of_chain(U: UMatroid, sigma: Iterable[int]) -> int:
    return mask_of(i + 1 for i, xi in enumerate(vertex_of_chain(U, sigma)) if xi)


def bases(U: UMatroid) -> list[int]:
    """All bases, sorted canonically.

    Walks the maximal chains of the lattice one layer at a time, keeping only
    distinct (prefix, jumps-so-far) states, so the cost is bounded by the
    number of such states rather than |Le(P)|.
    """
    lat = U.lattice
    t = U.table
    down = lat.poset.down
    n = lat.n
    frontier = {(0, 0)}
    for _ in range(n):
        nxt = set()
        for A, J in frontier:
            rA = t[A]
            for i in range(n):
                b = 1 << i
                if A & b or down[i] & ~(A | b):
                    continue
                A2 = A | b
                nxt.add((A2, J | b) if t[A2] > rA else (A2, J))
        frontier = nxt
    return sorted({J for _, J in frontier}, key=canonical_key)


def bases_from_linear_extensions(U: UMatroid, cap: int = MAX_LINEAR_EXTENSIONS) -> list[int]:
    """Reference path: the image of :func:`basis_of_chain` over all of Le(P)."""
    t = U.table
    out = set()
    for sigma in linear_extensions(U.poset, cap=cap):
        segs = initial_segments(sigma)
        J = 0
        for i, e in enumerate(sigma, start=1):
            if t[segs[i]] > t[segs[i - 1]]:
                J |= bit(e)
        out.add(J)
    return sorted(out, key=canonical_key)


def vertices(U: UMatroid) -> list[tuple[int, ...]]:
    n = U.n
    return [tuple(B >> i & 1 for i in range(n)) for B in bases(U)]


def rank_from_bases(basis_sets: Iterable[int], lattice: DistLattice) -> RankFunction:
    basis_sets = list(basis_sets)
    if not basis_sets:
        raise ValueError("basis system must be nonempty")
    return RankFunction.from_function(
        lattice, lambda A: max((A & B).bit_count() for B in basis_sets)
    )


# -- closure and flats -------------------------------------------------------


def closure(U: UMatroid, A: int) -> int:
    lat = U.lattice
    t = U.table
    base = t[lat.sup(A)]
    out = 0
    for i in range(U.n):
        b = 1 << i
        if t[lat.sup(A | b)] == base:
            out |= b
    return out


@dataclass(frozen=True)
class FlatLattice:
    n: int
    flats: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "flats", tuple(sorted(set(self.flats), key=canonical_key)))

    def __contains__(self, mask):
        return mask in self.flats

    def __iter__(self):
        return iter(self.flats)

    def __len__(self):
        return len(self.flats)


def flats(U: UMatroid) -> FlatLattice:
    """Members A of D whose every one-element step up inside D raises the rank."""
    lat = U.lattice
    t = U.table
    out = []
    for A in lat.sets:
        rA = t[A]
        if all(t[A | bit(e)] > rA for e in lat.covers_up(A)):
            out.append(A)
    return FlatLattice(U.n, tuple(out))


# -- duality -----------------------------------------------------------------


def dual(U: UMatroid) -> UMatroid:
    lat = U.lattice
    dlat = dual_lattice(lat)
    top = lat.top
    t = U.table
    r = U.full_rank
    vals = tuple(t[top & ~Z] + Z.bit_count() - r for Z in dlat.sets)
    return UMatroid(RankFunction(dlat, vals), _checked=True)


# -- poset matroids ----------------------------------------------------------


def local_chain_violations(U: UMatroid) -> list[tuple[int, int, int]]:
    """All (A, b1, b2) with b1 < b2 that break the local chain property."""
    lat = U.lattice
    t = U.table
    n = U.n
    out = []
    for A in lat.sets:
        rA = t[A]
        free = [i + 1 for i in range(n) if not A >> i & 1]
        for x, b1 in enumerate(free):
            for b2 in free[x + 1:]:
                A12 = A | bit(b1) | bit(b2)
                if A12 not in lat or t[A12] <= rA:
                    continue
                A1, A2 = A | bit(b1), A | bit(b2)
                if (A1 in lat and t[A1] == rA + 1) or (A2 in lat and t[A2] == rA + 1):
                    continue
                out.append((A, b1, b2))
    return out


def is_poset_matroid(U: UMatroid, method: str = "local_chain"):
    """Return ``(flag, witness)``.

    ``local_chain`` scans the lattice from the top down and reports the
    violating triple (A, b1, b2) with the largest A; ``bases_in_lattice``
    reports the first basis (canonical order) that is not a lattice member.
    """
    if method in ("local_chain", "local-chain"):
        viol = local_chain_violations(U)
        if not viol:
            return True, None
        idx = U.lattice.index
        return False, max(viol, key=lambda w: (idx(w[0]), -w[1], -w[2]))
    if method in ("bases_in_lattice", "bases"):
        for B in bases(U):
            if B not in U.lattice:
                return False, B
        return True, None
    raise ValueError(f"unknown method {method!r}")


def dot_bases(U: UMatroid) -> list[int]:
    """Maximal lattice members B with |B| equal to their rank."""
    t = U.table
    indep = [A for A in U.lattice.sets if t[A] == A.bit_count()]
    out = [A for A in indep if not any(B != A and B & A == A for B in indep)]
    return sorted(out, key=canonical_key)


def relabel(U: UMatroid, mapping: Mapping[int, int]) -> UMatroid:
    """Rename elements via ``mapping`` (old -> new), a permutation of 1..n."""
    n = U.n
    if sorted(mapping) != list(range(1, n + 1)) or sorted(mapping.values()) != list(range(1, n + 1)):
        raise ValueError("mapping must be a permutation of the ground set")

    def move(m):
        out = 0
        for i in range(n):
            if m >> i & 1:
                out |= bit(mapping[i + 1])
        return out

    lat = DistLattice(n, (move(m) for m in U.lattice.sets), _trusted=True)
    t = {move(m): v for m, v in U.table.items()}
    return UMatroid(RankFunction.from_mapping(lat, t), _checked=True)
