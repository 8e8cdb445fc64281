"""Subspace arrangements over the rationals and the U-matroids they define.

A subspace is stored through a spanning set of its annihilator (normal
vectors), so codimension is the rank of that set.  All arithmetic is exact.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import GenericityError
from .extension import generous_atom_extension
from .lattice import DistLattice, Poset, order_ideals
from .umatroid import RankFunction, UMatroid, is_poset_matroid, validate

COEFF_RANGE = 1000
MAX_RETRIES = 10


def _integer_rows(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def matrix_rank(rows: Iterable[Sequence]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination."""
    M = _integer_rows(rows)
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nrows):
            a = M[r][col]
            row_r, row_p = M[r], M[rank]
            for k in range(col, ncols):
                row_r[k] = (p * row_r[k] - a * row_p[k]) // prev
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def independent_rows(rows: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """A maximal linearly independent subsequence, chosen greedily."""
    basis: list[tuple[Fraction, ...]] = []
    for row in rows:
        if matrix_rank(basis + [row]) > len(basis):
            basis.append(tuple(row))
    return basis


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    normals: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        normals = tuple(tuple(Fraction(x) for x in v) for v in self.normals)
        for v in normals:
            if len(v) != self.ambient_dim:
                raise ValueError(f"normal vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        object.__setattr__(self, "normals", normals)

    @property
    def codim(self) -> int:
        return matrix_rank(self.normals)

    def annihilator_basis(self) -> list[tuple[Fraction, ...]]:
        return independent_rows(self.normals)


@dataclass(frozen=True)
class Arrangement:
    dim: int
    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        spaces = tuple(self.spaces)
        for s in spaces:
            if s.ambient_dim != self.dim:
                raise ValueError("all subspaces must live in the same ambient space")
        object.__setattr__(self, "spaces", spaces)

    @classmethod
    def from_normals(cls, dim: int, spaces: Iterable[Iterable[Sequence]]) -> "Arrangement":
        return cls(dim, tuple(Subspace(dim, tuple(tuple(v) for v in s)) for s in spaces))

    @property
    def m(self) -> int:
        return len(self.spaces)

    @property
    def codims(self) -> tuple[int, ...]:
        return tuple(s.codim for s in self.spaces)


def codim_intersection(X: Arrangement, A: Iterable[int]) -> int:
    """codim of the intersection of the spaces indexed by A (1-based)."""
    rows = []
    for a in A:
        if not 1 <= a <= X.m:
            raise ValueError(f"space index {a} out of range 1..{X.m}")
        rows.extend(X.spaces[a - 1].normals)
    return matrix_rank(rows)


def polymatroid_rank(X: Arrangement) -> RankFunction:
    """rk_X on 2^[m], checked against the submodular-system axioms."""
    m = X.m
    boolean = DistLattice.boolean(m)
    bases = [X.spaces[i].annihilator_basis() for i in range(m)]

    def rk(S):
        rows = []
        for i in range(m):
            if S >> i & 1:
                rows.extend(bases[i])
        return matrix_rank(rows)

    rank = RankFunction.from_function(boolean, rk)
    report = validate(rank)
    if not report.is_submodular_system:
        raise AssertionError("arrangement rank is not a polymatroid: " + "; ".join(report.describe()))
    return rank


# --- block structure of the blown-up ground set ---------------------------


def block_masks(c: Sequence[int]) -> list[int]:
    """Bitmask of each block; block i holds elements c_1+...+c_{i-1}+1 onwards."""
    out, start = [], 0
    for ci in c:
        out.append(((1 << ci) - 1) << start)
        start += ci
    return out


def block_counts(S: int, c: Sequence[int]) -> tuple[int, ...]:
    return tuple((S & b).bit_count() for b in block_masks(c))


def chain_poset(c: Sequence[int]) -> Poset:
    """Disjoint union of chains, one per block, lowest index at the bottom."""
    rel, start = [], 0
    for ci in c:
        rel.extend((start + k, start + k + 1) for k in range(1, ci))
        start += ci
    return Poset.from_relations(sum(c), rel)


def chains_lattice(c: Sequence[int]) -> DistLattice:
    """[0,c_1] x ... x [0,c_m] as a sublattice of 2^E, blocks filled bottom-up."""
    return order_ideals(chain_poset(c))


def point_mask(b: Sequence[int], c: Sequence[int]) -> int:
    """The lattice member with b_i elements taken from block i."""
    if len(b) != len(c) or any(not 0 <= bi <= ci for bi, ci in zip(b, c)):
        raise ValueError(f"{tuple(b)} is not in the product of chains for c={tuple(c)}")
    out = 0
    for bi, blk in zip(b, block_masks(c)):
        low = blk & -blk
        out |= low * ((1 << bi) - 1)
    return out


def _min_formula(rk: RankFunction, counts: Sequence[int]) -> int:
    m = len(counts)
    t = rk.table
    best = None
    for A in range(1 << m):
        v = t[A] + sum(counts[i] for i in range(m) if not A >> i & 1)
        if best is None or v < best:
            best = v
    return best


def multisymmetric_lift(rk: RankFunction, c: Sequence[int]) -> UMatroid:
    """Minimal multisymmetric lift: rk_M(S) = min_A rk(A) + |S - pi^-1(A)|."""
    c = tuple(c)
    m = len(c)
    if rk.lattice != DistLattice.boolean(m):
        raise ValueError("lift needs a rank function on the full Boolean lattice of [m]")
    for i in range(m):
        if rk(1 << i) > c[i]:
            raise ValueError(f"rk({{{i + 1}}}) = {rk(1 << i)} exceeds block size {c[i]}")
    n = sum(c)
    blocks = block_masks(c)
    t = rk.table

    def value(S):
        best = None
        for A in range(1 << m):
            cover = 0
            for i in range(m):
                if A >> i & 1:
                    cover |= blocks[i]
            v = t[A] + (S & ~cover).bit_count()
            if best is None or v < best:
                best = v
        return best

    rank = RankFunction.from_function(DistLattice.boolean(n), value)
    by_counts: dict[tuple[int, ...], int] = {}
    for S, v in rank.items():
        key = block_counts(S, c)
        if by_counts.setdefault(key, v) != v:
            raise AssertionError("lift is not multisymmetric")
    return UMatroid(rank)


def arrangement_umatroid(X: Arrangement, *, check_poset_matroid: bool = True) -> UMatroid:
    """rho_X(b) = min_A rk_X(A) + sum_{i not in A} b_i on the product of chains."""
    c = X.codims
    rk = polymatroid_rank(X)
    lat = chains_lattice(c)
    rank = RankFunction.from_function(lat, lambda S: _min_formula(rk, block_counts(S, c)))
    U = UMatroid(rank)
    if check_poset_matroid:
        ok, witness = is_poset_matroid(U)
        if not ok:
            raise AssertionError(f"arrangement U-matroid fails the local chain property at {witness}")
    return U


# --- random sampling ---------------------------------------------------------


def _random_combo(rng: random.Random, basis: Sequence[Sequence[Fraction]], k: int) -> list[tuple[Fraction, ...]]:
    out = []
    for _ in range(k):
        coeffs = [rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in basis]
        out.append(tuple(sum((cf * v[j] for cf, v in zip(coeffs, basis)), Fraction(0)) for j in range(len(basis[0]))))
    return out


def _sample_superspace(rng, space: Subspace, b: int) -> list[tuple[Fraction, ...]]:
    """Normals of a random codim-b space containing ``space``."""
    if b == 0:
        return []
    basis = space.annihilator_basis()
    for _ in range(MAX_RETRIES):
        rows = _random_combo(rng, basis, b)
        if matrix_rank(rows) == b:
            return rows
    raise GenericityError(f"could not sample a codimension-{b} superspace")


def generic_rank_oracle(X: Arrangement, b: Sequence[int], trials: int = 20, seed: int = 0) -> int:
    """Max over random Y containing X (codim Y_i = b_i) of codim of the intersection.

    A lower bound for rho_X(b) that is attained with high probability.
    """
    c = X.codims
    point_mask(b, c)  # range check
    rng = random.Random(seed)
    best = 0
    for _ in range(max(1, trials)):
        rows = []
        for space, bi in zip(X.spaces, b):
            rows.extend(_sample_superspace(rng, space, bi))
        best = max(best, matrix_rank(rows))
    return best


@dataclass
class SplitReport:
    seed: int
    attempts: int
    codims: tuple[int, ...]
    agrees: bool
    split: Arrangement


def split_space(X: Arrangement, seed: int = 0, max_retries: int = MAX_RETRIES) -> tuple[Arrangement, SplitReport]:
    """Replace the last space by a generic pair (X'_m, H) with X'_m & H = X_m.

    The new arrangement's U-matroid is compared with the generous atom
    extension of the old one by the last element; a draw that disagrees is
    treated as degenerate and resampled.
    """
    c = X.codims
    if not c or c[-1] < 2:
        raise ValueError("the last space must have codimension at least 2")
    n = sum(c)
    base = arrangement_umatroid(X)
    expected = generous_atom_extension(base, n).matroid
    basis = X.spaces[-1].annihilator_basis()
    rng = random.Random(seed)
    for attempt in range(1, max_retries + 1):
        W = _random_combo(rng, basis, c[-1] - 1)
        h = _random_combo(rng, basis, 1)
        if matrix_rank(W) != c[-1] - 1 or matrix_rank(h) != 1 or matrix_rank(W + h) != c[-1]:
            continue
        # both contain X_m and their normals span its annihilator, so W & H = X_m
        Xs = Arrangement(X.dim, X.spaces[:-1] + (Subspace(X.dim, tuple(W)), Subspace(X.dim, tuple(h))))
        if arrangement_umatroid(Xs) == expected:
            return Xs, SplitReport(seed, attempt, Xs.codims, True, Xs)
    raise GenericityError(f"no generic split found in {max_retries} draws (seed {seed})")


def random_arrangement(
    rng: random.Random,
    dim: int,
    codims: Sequence[int],
    coeff: int = 3,
) -> Arrangement:
    """Random rational subspaces with the requested codimensions."""
    spaces = []
    for ci in codims:
        if ci > dim:
            raise ValueError("codimension exceeds ambient dimension")
        while True:
            rows = [
                tuple(Fraction(rng.randint(-coeff, coeff), rng.randint(1, coeff)) for _ in range(dim))
                for _ in range(ci)
            ]
            if matrix_rank(rows) == ci:
                break
        spaces.append(Subspace(dim, tuple(rows)))
    return Arrangement(dim, tuple(spaces))
