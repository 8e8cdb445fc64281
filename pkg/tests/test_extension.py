import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umx.errors import CapExceeded, LatticeError
from umx.extension import (
    dominates,
    enumerate_matroid_extensions,
    flats_after_atom_extension,
    flats_after_restriction,
    generous_atom_extension,
    generous_extension,
    is_sheared,
    magnanimous_extension,
    restrict,
    sup_inf_candidate,
    zero_one_points,
)
from umx.lattice import DistLattice, Poset, atoms, linear_extensions, order_ideals
from umx.umatroid import (
    RankFunction,
    UMatroid,
    bases,
    flats,
    rank_from_bases,
    uniform_matroid,
    validate,
)
from umx.complexes import lex_min

from oracles import (
    all_rank_tables,
    is_matroid_brute,
    parse,
    random_poset,
    random_umatroid,
)


def masks(*words):
    return sorted((parse(w) for w in words), key=lambda m: (bin(m).count("1"), m))


def stalactite_extension(extra):
    """The matroid on [4] whose bases are the stalactite's plus ``extra``."""
    B = masks(12, 13, 14, 23, *extra)
    return UMatroid(rank_from_bases(B, DistLattice.boolean(4)))


# --- restriction --------------------------------------------------------------------


def test_uniform_restricts_to_stalactite(stalactite):
    assert restrict(uniform_matroid(2, 4), stalactite.lattice) == stalactite
    assert restrict(stalactite, stalactite.lattice) == stalactite


def test_restrict_rejects_non_sublattice(stalactite):
    with pytest.raises(LatticeError):
        restrict(stalactite, DistLattice.boolean(4))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_restriction_bases_are_lex_minima(n, seed):
    rng = random.Random(seed)
    U = random_umatroid(rng, n, p=0.0)  # a matroid
    sub = order_ideals(random_poset(rng, n))
    R = restrict(U, sub)
    B = bases(U)
    expected = {lex_min(B, s) for s in linear_extensions(sub.poset)}
    assert set(bases(R)) == expected


# --- generous atom extension ------------------------------------------------------------


def test_stalactite_atom_extension(stalactite):
    ext = generous_atom_extension(stalactite, 4)
    r = ext.matroid
    assert ext.provenance == (4,)
    assert r(parse(4)) == 1
    assert r(parse(24)) == r(parse(34)) == 2
    assert r == uniform_matroid(2, 4)
    assert all(r(A) == stalactite(A) for A in stalactite.lattice.sets)


def test_atom_extension_of_zero_rank():
    U = UMatroid.from_function(order_ideals(Poset.chain(3)), lambda A: 0)
    ext = generous_atom_extension(U, 3).matroid
    assert set(ext.table.values()) == {0}


def test_atom_extension_rejects_atom(stalactite):
    with pytest.raises(LatticeError):
        generous_atom_extension(stalactite, 1)


# --- generous matroid extension -----------------------------------------------------------


def test_stalactite_generous_is_uniform(stalactite):
    assert generous_extension(stalactite, verify_order=True).matroid == uniform_matroid(2, 4)


def test_matroid_generous_is_itself():
    M = uniform_matroid(2, 4)
    res = generous_extension(M)
    assert res.matroid == M and res.provenance == ()


def test_generous_to_intermediate_lattice():
    U = UMatroid.from_function(order_ideals(Poset.chain(3)), lambda A: min(A.bit_count(), 1))
    mid = order_ideals(Poset.from_relations(3, [(1, 3)]))
    res = generous_extension(U, mid).matroid
    assert res.lattice == mid
    assert res == restrict(generous_extension(U).matroid, mid)


def test_atom_order_must_be_permutation(stalactite):
    with pytest.raises(ValueError):
        generous_extension(stalactite, atom_order=[1])


def test_debug_env_checks_reverse_order(monkeypatch):
    monkeypatch.setenv("UMX_DEBUG", "1")
    U = UMatroid.from_function(order_ideals(Poset.chain(4)), lambda A: min(A.bit_count(), 2))
    assert generous_extension(U).matroid == uniform_matroid(2, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_restriction_round_trip(n, seed):
    U = random_umatroid(random.Random(seed), n)
    G = generous_extension(U).matroid
    assert G.lattice.is_boolean()
    assert is_matroid_brute(G.table, n)
    assert restrict(G, U.lattice) == U
    assert is_sheared(G, U)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32))
def test_order_independence(n, seed):
    U = random_umatroid(random.Random(seed), n, p=0.5)
    missing = sorted(set(range(1, n + 1)) - atoms(U.lattice))
    results = {generous_extension(U, atom_order=list(p)).matroid for p in permutations(missing)}
    assert len(results) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32))
def test_generous_dominates_all_matroid_extensions(n, seed):
    U = random_umatroid(random.Random(seed), n, p=0.5)
    G = generous_extension(U).matroid.rank
    exts = list(enumerate_matroid_extensions(U))
    assert G in exts
    assert all(dominates(G, phi) for phi in exts)


# --- enumeration oracle -------------------------------------------------------------------


def test_stalactite_has_three_matroid_extensions(stalactite):
    exts = list(enumerate_matroid_extensions(stalactite))
    assert len(exts) == 3
    expected = {stalactite_extension(e).rank for e in ((24,), (34,), (24, 34))}
    assert set(exts) == expected
    assert uniform_matroid(2, 4).rank in exts


def test_matroid_has_one_extension():
    M = uniform_matroid(2, 4)
    assert list(enumerate_matroid_extensions(M)) == [M.rank]


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        next(enumerate_matroid_extensions(uniform_matroid(1, 6)))


def test_enumeration_matches_exhaustive_search():
    U = UMatroid.from_function(order_ideals(Poset.chain(3)), lambda A: min(A.bit_count(), 2))
    found = set(enumerate_matroid_extensions(U))
    boolean = DistLattice.boolean(3)
    brute = set()
    for t in all_rank_tables(range(8), 3, 2):
        if all(t[A] == U(A) for A in U.lattice.sets) and is_matroid_brute(t, 3):
            brute.add(RankFunction.from_mapping(boolean, t))
    assert found == brute


# --- domination and shearing --------------------------------------------------------------


def test_dominates_reflexive(stalactite):
    assert dominates(stalactite.rank, stalactite.rank)


def test_uniform_dominates_stalactite_extensions(stalactite):
    G = generous_extension(stalactite).matroid.rank
    for phi in enumerate_matroid_extensions(stalactite):
        assert dominates(G, phi)
    low = stalactite_extension((24,)).rank
    assert not dominates(low, G)


def test_sheared(stalactite):
    assert is_sheared(uniform_matroid(2, 4), stalactite)
    assert is_sheared(stalactite, stalactite)
    for extra in ((24,), (34,)):
        M = stalactite_extension(extra)
        assert is_sheared(M, stalactite)
        assert set(bases(stalactite)) < set(bases(M))


def test_not_sheared_when_ranks_differ(stalactite):
    assert not is_sheared(uniform_matroid(3, 4), stalactite)


# --- magnanimous extension --------------------------------------------------------------------


def test_magnanimous_breaks_unit_increase():
    D = DistLattice(2, masks("", 1, 12))
    rank = RankFunction.from_function(D, lambda A: A.bit_count())
    ext = magnanimous_extension(rank, DistLattice.boolean(2))
    assert ext(parse(2)) == 2
    report = validate(ext)
    assert report.is_submodular_system and not report.passed("unit_increase")


def test_magnanimous_keeps_members(stalactite):
    ext = magnanimous_extension(stalactite.rank, DistLattice.boolean(4))
    assert all(ext(A) == stalactite(A) for A in stalactite.lattice.sets)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_magnanimous_is_submodular(n, seed):
    U = random_umatroid(random.Random(seed), n, p=0.5)
    ext = magnanimous_extension(U.rank, DistLattice.boolean(n))
    assert validate(ext).is_submodular_system


# --- 0/1 points ---------------------------------------------------------------------------------


def test_stalactite_zero_one_points(stalactite):
    assert zero_one_points(stalactite) == masks(12, 13, 23, 14, 24, 34)


def test_zero_rank_points():
    U = UMatroid.from_function(order_ideals(Poset.chain(3)), lambda A: 0)
    assert zero_one_points(U) == [0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_zero_one_points_are_generous_bases(n, seed):
    U = random_umatroid(random.Random(seed), n)
    G = generous_extension(U).matroid
    pts = zero_one_points(U)
    assert pts == bases(G)
    assert set(bases(U)) <= set(pts)
    assert rank_from_bases(pts, U.lattice) == U.rank
    indep = zero_one_points(U, independent=True)
    assert indep == sorted(
        (A for A in range(1 << n) if G(A) == A.bit_count()), key=lambda m: (bin(m).count("1"), m)
    )


# --- flats under restriction and atom extension --------------------------------------------------


def test_flats_after_restriction_uniform(stalactite):
    F = flats_after_restriction(uniform_matroid(2, 4), stalactite.lattice)
    assert list(F) == masks("", 1, 2, 3, 1234)
    assert flats_after_restriction(stalactite, stalactite.lattice) == flats(stalactite)


def test_flats_after_atom_extension_stalactite(stalactite):
    F = flats_after_atom_extension(stalactite, 4)
    assert list(F) == masks("", 1, 2, 3, 4, 1234)
    assert F == flats(uniform_matroid(2, 4))


def test_flats_after_atom_extension_requires_coatom():
    U = UMatroid.from_function(order_ideals(Poset.chain(3)), lambda A: min(A.bit_count(), 2))
    with pytest.raises(LatticeError):
        flats_after_atom_extension(U, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_flats_formulas_match_direct(n, seed):
    rng = random.Random(seed)
    U = random_umatroid(rng, n, p=0.5)
    sub = order_ideals(Poset.from_relations(n, _extend_relations(rng, U.poset)))
    assert flats_after_restriction(U, sub) == flats(restrict(U, sub))
    top = (1 << n) - 1
    for a in range(1, n + 1):
        b = 1 << (a - 1)
        if b in U.lattice or top & ~b not in U.lattice:
            continue
        assert flats_after_atom_extension(U, a) == flats(generous_atom_extension(U, a).matroid)


def _extend_relations(rng, P):
    rels = [(a, b) for a in range(1, P.n + 1) for b in range(1, P.n + 1) if a != b and P.leq(a, b)]
    # orienting new relations along a linear extension keeps the order acyclic
    sigma = next(linear_extensions(P))
    for i in range(P.n):
        for j in range(i + 1, P.n):
            if rng.random() < 0.2:
                rels.append((sigma[i], sigma[j]))
    return rels


def test_atom_extension_flats_with_no_new_flats():
    # rank 1 on a chain: adjoining the top element adds no flat of rank >= 2
    U = UMatroid.from_function(order_ideals(Poset.from_relations(2, [(1, 2)])), lambda A: min(A.bit_count(), 1))
    assert flats_after_atom_extension(U, 2) == flats(U)


# --- the closed-form candidate --------------------------------------------------------------------


def test_candidate_fails_but_generous_passes(closed_form_counterexample):
    U = closed_form_counterexample
    cand = sup_inf_candidate(U)
    assert (cand(parse(4)), cand(parse(56)), cand(parse(456))) == (1, 1, 3)
    assert not validate(cand).passed("submodularity")
    G = generous_extension(U, verify_order=True).matroid
    assert validate(G.rank).ok
    assert restrict(G, U.lattice) == U
