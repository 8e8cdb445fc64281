"""Pure complexes, Gale and lex orders, shellings and basis-system checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import UmxError
from .lattice import (
    MAX_LINEAR_EXTENSIONS,
    Poset,
    canonical_key,
    elements_of,
    linear_extensions,
    order_ideals,
)
from .umatroid import RankFunction, UMatroid, bases, rank_from_bases, validate


@dataclass(frozen=True)
class PureComplex:
    n: int
    facets: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(sorted(set(self.facets), key=canonical_key))
        if not fs:
            raise ValueError("a pure complex needs at least one facet")
        sizes = {f.bit_count() for f in fs}
        if len(sizes) != 1:
            raise ValueError("facets of a pure complex must all have the same size")
        object.__setattr__(self, "facets", fs)

    @property
    def r(self) -> int:
        return self.facets[0].bit_count()

    def faces(self) -> list[int]:
        out = set()
        for f in self.facets:
            sub = f
            while True:
                out.add(sub)
                if not sub:
                    break
                sub = (sub - 1) & f
        return sorted(out, key=canonical_key)


def _positions(sigma: Sequence[int]) -> dict[int, int]:
    return {e: i for i, e in enumerate(sigma)}


def _sorted_by(A: int, pos: dict[int, int]) -> list[int]:
    return sorted((pos[e] for e in elements_of(A)))


def lex_compare(A: int, B: int, sigma: Sequence[int]) -> int:
    """-1, 0 or 1 as A is lex-smaller, equal or larger than B under sigma."""
    if A.bit_count() != B.bit_count():
        raise ValueError("lex comparison needs sets of equal size")
    pos = _positions(sigma)
    a, b = _sorted_by(A, pos), _sorted_by(B, pos)
    return (a > b) - (a < b)


def gale_leq(A: int, B: int, sigma: Sequence[int]) -> bool:
    if A.bit_count() != B.bit_count():
        raise ValueError("Gale comparison needs sets of equal size")
    pos = _positions(sigma)
    return all(x <= y for x, y in zip(_sorted_by(A, pos), _sorted_by(B, pos)))


def lex_order(facets: Iterable[int], sigma: Sequence[int]) -> list[int]:
    pos = _positions(sigma)
    return sorted(facets, key=lambda F: _sorted_by(F, pos))


def lex_min(facets: Iterable[int], sigma: Sequence[int]) -> int:
    pos = _positions(sigma)
    return min(facets, key=lambda F: _sorted_by(F, pos))


def gale_min(facets: Iterable[int], sigma: Sequence[int]) -> int | None:
    """The unique Gale-minimum facet under sigma, or None."""
    pos = _positions(sigma)
    keyed = [(F, _sorted_by(F, pos)) for F in facets]
    for F, kf in keyed:
        if all(all(x <= y for x, y in zip(kf, kg)) for _, kg in keyed):
            return F
    return None


def is_shelling_order(order: Sequence[int]) -> tuple[bool, int | None]:
    """Check a facet order of a pure complex.

    B_j meets the earlier facets in a pure (r-1)-dimensional subcomplex iff
    every earlier B_i misses some element that an earlier ridge-neighbour
    B_k (|B_k & B_j| = r-1) also misses.  On failure the witness is B_j.
    """
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("facet order repeats a facet")
    if not order:
        return True, None
    r = order[0].bit_count()
    if any(F.bit_count() != r for F in order):
        raise ValueError("facets of a pure complex must all have the same size")
    for j in range(1, len(order)):
        Bj = order[j]
        X = 0  # elements of B_j whose removal gives a face already present
        for Bk in order[:j]:
            d = Bj & ~Bk
            if d.bit_count() == 1:
                X |= d
        for Bi in order[:j]:
            if not (Bj & ~Bi) & X:
                return False, Bj
    return True, None


def lex_shellings(facets: Iterable[int], n: int) -> dict[tuple[int, ...], bool]:
    """Shelling status of the sigma-lex order for every total order of [n]."""
    from itertools import permutations

    facets = list(facets)
    out = {}
    for sigma in permutations(range(1, n + 1)):
        out[sigma] = is_shelling_order(lex_order(facets, sigma))[0]
    return out


@dataclass
class BasisSystemReport:
    is_basis_system: bool
    criteria: dict[str, bool]
    witnesses: dict[str, object] = field(default_factory=dict)
    rank: RankFunction | None = None


def check_basis_system(P: Poset, facets: Iterable[int], cap: int = MAX_LINEAR_EXTENSIONS) -> BasisSystemReport:
    """Decide whether ``facets`` is the basis system of a U-matroid on J(P).

    Evaluates surjectivity of sigma -> lex-min (B1), existence of a unique
    Gale-minimum (B2), and the two shelling conditions (B1', B2') over all
    linear extensions.  The verdict is B1 and B2, cross-checked against the
    rank function reconstructed as max |B & A|.

    B1' and B2' together imply the verdict but are not implied by it: some
    U-matroids that are not poset matroids have a linear extension whose lex
    order fails to shell, e.g. bases 123, 135, 234, 245, 345 over 3<1, 4<2
    with sigma 5<3<1<4<2.
    """
    cx = PureComplex(P.n, tuple(facets))
    B = cx.facets
    covered: set[int] = set()
    w: dict[str, object] = {}
    b2 = b2p = True
    # lex order depends only on the relative order of the facets, so memoize
    seen_orders: dict[tuple[int, ...], bool] = {}
    for sigma in linear_extensions(P, cap):
        pos = _positions(sigma)
        keyed = tuple(sorted(B, key=lambda F: _sorted_by(F, pos)))
        covered.add(keyed[0])
        if b2 and gale_min(B, sigma) is None:
            b2 = False
            w["B2"] = sigma
        if keyed not in seen_orders:
            seen_orders[keyed] = is_shelling_order(keyed)[0]
        if b2p and not seen_orders[keyed]:
            b2p = False
            w["B2'"] = sigma
    b1 = covered == set(B)
    if not b1:
        w["B1"] = w["B1'"] = sorted(set(B) - covered, key=canonical_key)[0]
    crit = {"B1": b1, "B2": b2, "B1'": b1, "B2'": b2p}
    lat = order_ideals(P)
    rho = rank_from_bases(B, lat)
    reconstructed = False
    if validate(rho).ok:
        reconstructed = bases(UMatroid(rho, _checked=True)) == list(B)
    left, right = b1 and b2, b1 and b2p
    if left != reconstructed or (right and not left):
        raise UmxError(
            f"basis-system criteria disagree: B1&B2={left}, B1'&B2'={right}, "
            f"reconstruction={reconstructed}"
        )
    return BasisSystemReport(reconstructed, crit, w, rho if reconstructed else None)


def pseudo_independence_complex(U: UMatroid) -> PureComplex:
    return PureComplex(U.n, tuple(bases(U)))
