"""Lattice restriction, generous and magnanimous extension, domination."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapExceeded, LatticeError
from .lattice import (
    DistLattice,
    adjoin_atom,
    atoms,
    bit,
    canonical_key,
    check_boolean_n,
    full_mask,
)
from .umatroid import (
    FlatLattice,
    RankFunction,
    UMatroid,
    bases,
    flats,
    validate,
)


def _debug() -> bool:
    return os.environ.get("UMX_DEBUG", "") not in ("", "0")


@dataclass(frozen=True)
class ExtensionResult:
    matroid: UMatroid
    provenance: tuple[int, ...]  # atoms adjoined, in order


def restrict(U: UMatroid, sub: DistLattice) -> UMatroid:
    if not sub.is_sublattice_of(U.lattice):
        raise LatticeError("target lattice is not contained in the U-matroid's lattice")
    # restrictions of U-matroid rank functions satisfy every axiom
    return UMatroid(U.rank.restrict(sub), _checked=True)


def _atom_step(lat: DistLattice, t: dict, a: int) -> tuple[DistLattice, dict]:
    new = adjoin_atom(lat, a)
    b = bit(a)
    out = {}
    for S in new.sets:
        if S in t:
            out[S] = t[S]
            continue
        low = t[S & ~b]
        out[S] = low if low == t[lat.sup(S)] else low + 1
    return new, out


def generous_atom_extension(U: UMatroid, a: int) -> ExtensionResult:
    """Extend to D[a], raising the rank on every new set whenever possible."""
    lat, t = _atom_step(U.lattice, U.table, a)
    return ExtensionResult(UMatroid(RankFunction.from_mapping(lat, t)), (a,))


def _iterate(U: UMatroid, order: Sequence[int]) -> tuple[DistLattice, dict]:
    lat, t = U.lattice, dict(U.table)
    for a in order:
        lat, t = _atom_step(lat, t, a)
    return lat, t


def generous_extension(
    U: UMatroid,
    target: DistLattice | None = None,
    *,
    atom_order: Sequence[int] | None = None,
    verify_order: bool | None = None,
) -> ExtensionResult:
    """Generous extension of ``U`` to ``target`` (default: all of 2^E).

    Atoms outside Atom(D) are adjoined one at a time up to 2^E and the result
    is restricted to ``target``.  ``verify_order`` (on by default when
    ``UMX_DEBUG`` is set) repeats the run with the atoms in reverse and checks
    that both orders agree.
    """
    n = U.n
    check_boolean_n(n)
    if target is not None and not U.lattice.is_sublattice_of(target):
        raise LatticeError("target lattice must contain the U-matroid's lattice")
    missing = sorted(set(range(1, n + 1)) - atoms(U.lattice))
    if atom_order is None:
        order = missing
    else:
        order = list(atom_order)
        if sorted(order) != missing:
            raise ValueError(f"atom order must be a permutation of {missing}")
    lat, t = _iterate(U, order)
    assert lat.is_boolean()
    if verify_order is None:
        verify_order = _debug()
    if verify_order and len(order) > 1:
        _, t2 = _iterate(U, order[::-1])
        if t2 != t:
            raise AssertionError("generous extension depends on atom order")
    full = UMatroid(RankFunction.from_mapping(lat, t))
    if target is None or target.is_boolean():
        return ExtensionResult(full, tuple(order))
    return ExtensionResult(restrict(full, target), tuple(order))


def generous_matroid_extension(U: UMatroid) -> UMatroid:
    return generous_extension(U).matroid


def magnanimous_extension(rank: RankFunction, target: DistLattice) -> RankFunction:
    """rho'(S) = rho(sup_D(S)) on a larger lattice.

    Submodular whenever the input is; unit increase may fail.
    """
    report = validate(rank)
    if not report.is_submodular_system:
        raise ValueError("input is not a submodular system: " + "; ".join(report.describe()))
    lat = rank.lattice
    if not lat.is_sublattice_of(target):
        raise LatticeError("target lattice must contain the input lattice")
    t = rank.table
    return RankFunction.from_function(target, lambda S: t[lat.sup(S)])


def dominates(phi: RankFunction, rho: RankFunction) -> bool:
    if phi.lattice != rho.lattice:
        raise ValueError("domination compares functions on the same lattice")
    return all(p >= r for p, r in zip(phi.values, rho.values))


def enumerate_matroid_extensions(U: UMatroid, max_n: int = 5) -> Iterator[RankFunction]:
    """Every matroid rank function on 2^E whose restriction to D is U's rank.

    Exhaustive backtracking over subsets in canonical order; each new value is
    pinned to {rho(S-e), rho(S-e)+1} for all e and checked against the
    covering squares below it.  Intended as a brute-force reference only.
    """
    n = U.n
    if n > max_n:
        raise CapExceeded(f"matroid-extension enumeration is limited to n<={max_n}")
    fixed = U.table
    order = sorted(range(1 << n), key=canonical_key)
    boolean = DistLattice.boolean(n)
    val: dict[int, int] = {}

    def candidates(S):
        lo, hi = 0, None
        x = S
        while x:
            low = x & -x
            r = val[S & ~low]
            lo = max(lo, r)
            hi = r + 1 if hi is None else min(hi, r + 1)
            x &= ~low
        if hi is None:
            hi = 0
        if S in fixed:
            return [fixed[S]] if lo <= fixed[S] <= hi else []
        return list(range(lo, hi + 1))

    def square_ok(S, r):
        elems = [S & -S]
        x = S & ~elems[0]
        while x:
            elems.append(x & -x)
            x &= x - 1
        for i, be in enumerate(elems):
            for bf in elems[i + 1:]:
                if r + val[S & ~be & ~bf] > val[S & ~be] + val[S & ~bf]:
                    return False
        return True

    def rec(k):
        if k == len(order):
            yield RankFunction.from_mapping(boolean, val)
            return
        S = order[k]
        for r in candidates(S):
            if S and S & (S - 1) and not square_ok(S, r):
                continue
            val[S] = r
            yield from rec(k + 1)
            del val[S]

    yield from rec(0)


def is_sheared(U_ext: UMatroid, U: UMatroid) -> bool:
    """True iff ``U_ext`` is a lattice extension of ``U``.

    Geometrically: the base polyhedron of ``U_ext`` sits inside that of ``U``
    and keeps all of its vertices.
    """
    if not U.lattice.is_sublattice_of(U_ext.lattice):
        return False
    t = U_ext.table
    if any(t[m] != v for m, v in U.table.items()):
        return False
    if not set(bases(U)) <= set(bases(U_ext)):
        raise AssertionError("lattice extension lost a vertex")
    return True


def zero_one_points(U: UMatroid, *, independent: bool = False) -> list[int]:
    """Supports of the 0/1 points of the base polyhedron (or of the submodular
    polyhedron when ``independent`` is set)."""
    n = U.n
    check_boolean_n(n)
    r = U.full_rank
    constraints = [(A, v) for A, v in U.table.items() if A]
    out = []
    for X in range(1 << n):
        if not independent and X.bit_count() != r:
            continue
        if all((X & A).bit_count() <= v for A, v in constraints):
            out.append(X)
    return sorted(out, key=canonical_key)


def flats_after_restriction(U: UMatroid, sub: DistLattice) -> FlatLattice:
    """Flats of the restriction, as the sub-lattice interiors of U's flats."""
    if not sub.is_sublattice_of(U.lattice):
        raise LatticeError("target lattice is not contained in the U-matroid's lattice")
    return FlatLattice(U.n, tuple({sub.inf(A) for A in flats(U)}))


def flats_after_atom_extension(U: UMatroid, a: int) -> FlatLattice:
    """Flats of the generous atom extension, computed from U's flats."""
    lat = U.lattice
    b = bit(a)
    if b in lat:
        raise LatticeError(f"{{{a}}} is already an atom")
    if full_mask(U.n) & ~b not in lat:
        raise LatticeError(f"E - {a} must belong to the lattice")
    t = U.table
    L = list(flats(U))
    K = [A | b for A in L if t[lat.sup(A | b)] >= t[A] + 2]
    return FlatLattice(U.n, tuple(L + K))


def sup_inf_candidate(U: UMatroid) -> RankFunction:
    """The tempting closed form min(rho(sup S), rho(inf S) + e(S)) on 2^E.

    e(S) counts a in S - inf(S) with rho(sup(inf(S) + a)) > rho(inf(S)).  This
    is *not* the generous matroid extension in general and can even fail
    submodularity; it is kept as a negative reference.
    """
    n = U.n
    lat = U.lattice
    t = U.table
    boolean = DistLattice.boolean(n)

    def value(S):
        low = lat.inf(S)
        rl = t[low]
        extra = 0
        x = S & ~low
        while x:
            bb = x & -x
            if t[lat.sup(low | bb)] > rl:
                extra += 1
            x &= x - 1
        return min(t[lat.sup(S)], rl + extra)

    return RankFunction.from_function(boolean, value)
