import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umx.errors import CapExceeded, LatticeError, NotALinearExtension, PosetError
from umx.lattice import (
    DistLattice,
    Poset,
    adjoin_atom,
    adjoin_set,
    atoms,
    check_linear_extension,
    count_linear_extensions,
    dual_lattice,
    inf_D,
    initial_segments,
    irr_poset,
    is_accessible,
    linear_extensions,
    mask_of,
    order_ideals,
    sup_D,
)

from oracles import ideals_brute, linear_extensions_brute, parse, random_relations


def sets_of(*words):
    return {parse(w) for w in words}


@pytest.fixture
def stalactite_lattice():
    return order_ideals(Poset.from_relations(4, [(1, 4)]))


# --- posets -------------------------------------------------------------------


def test_poset_closes_relations_transitively():
    P = Poset.from_relations(3, [(1, 2), (2, 3)])
    assert P.leq(1, 3)
    assert P.relations() == [(1, 2), (2, 3)]


def test_poset_rejects_cycle_with_witness():
    with pytest.raises(PosetError) as exc:
        Poset.from_relations(3, [(1, 2), (2, 3), (3, 1)])
    assert exc.value.witness is not None


def test_dual_poset_reverses_relations():
    P = Poset.from_relations(4, [(1, 4)])
    assert P.dual().relations() == [(4, 1)]


# --- order ideals -------------------------------------------------------------


def test_antichain_ideals_are_boolean():
    assert set(order_ideals(Poset.antichain(2)).sets) == sets_of("", 1, 2, 12)


def test_stalactite_ideals(stalactite_lattice):
    expected = {A for A in range(16) if not (A & 8) or (A & 1)}
    assert set(stalactite_lattice.sets) == expected
    assert len(stalactite_lattice) == 12


def test_chain_ideals():
    assert set(order_ideals(Poset.chain(2)).sets) == sets_of("", 1, 12)


def test_order_ideals_canonical_order(stalactite_lattice):
    s = stalactite_lattice.sets
    assert list(s) == sorted(s, key=lambda m: (bin(m).count("1"), m))


def test_order_ideals_cap():
    with pytest.raises(CapExceeded):
        order_ideals(Poset.antichain(6), cap=10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32))
def test_order_ideals_match_brute_force(n, seed):
    rels = random_relations(random.Random(seed), n)
    lat = order_ideals(Poset.from_relations(n, rels))
    assert list(lat.sets) == ideals_brute(n, rels)
    assert is_accessible(lat.sets, n) == (True, None)


# --- irr poset ------------------------------------------------------------------


def test_irr_poset_single_relation():
    D = DistLattice(3, sets_of("", 1, 2, 12, 23, 123))
    assert irr_poset(D).relations() == [(2, 3)]


def test_irr_poset_boolean_is_antichain():
    assert irr_poset(DistLattice.boolean(4)).is_antichain()


def test_irr_poset_stalactite(stalactite_lattice):
    fresh = DistLattice(4, stalactite_lattice.sets)
    assert irr_poset(fresh).relations() == [(1, 4)]


# --- accessibility ----------------------------------------------------------------


def test_accessible_chain():
    assert is_accessible(sets_of("", 1, 12), 2) == (True, None)


def test_inaccessible_witness():
    assert is_accessible(sets_of("", 12), 2) == (False, parse(12))


def test_not_a_lattice_has_witness_pair():
    with pytest.raises(LatticeError) as exc:
        is_accessible(sets_of("", 1, 2, 123), 3)
    assert exc.value.witness == (parse(1), parse(2))


def test_constructor_rejects_inaccessible():
    with pytest.raises(LatticeError):
        DistLattice(2, sets_of("", 12))


# --- sup / inf --------------------------------------------------------------------


def test_sup_inf_small_chain():
    D = DistLattice(2, sets_of("", 1, 12))
    assert sup_D(D, parse(2)) == parse(12)
    assert inf_D(D, parse(2)) == 0


def test_sup_inf_fixed_on_members(stalactite_lattice):
    for A in stalactite_lattice.sets:
        assert sup_D(stalactite_lattice, A) == A == inf_D(stalactite_lattice, A)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**32), st.data())
def test_sup_inf_operators(n, seed, data):
    D = order_ideals(Poset.from_relations(n, random_relations(random.Random(seed), n)))
    A = data.draw(st.integers(0, (1 << n) - 1))
    B = data.draw(st.integers(0, (1 << n) - 1))
    sA, iA = D.sup(A), D.inf(A)
    # brute-force definitions
    assert sA == min((M for M in D.sets if M & A == A), key=lambda m: bin(m).count("1"))
    above = [M for M in D.sets if M & A == A]
    assert all(M & sA == sA for M in above)
    assert iA == max((M for M in D.sets if M & A == M), key=lambda m: bin(m).count("1"))
    # closure / interior operator laws
    assert D.sup(sA) == sA and D.inf(iA) == iA
    assert sA & A == A and iA & A == iA
    if A & B == A:
        assert D.sup(B) & D.sup(A) == D.sup(A)
        assert D.inf(B) & D.inf(A) == D.inf(A)
    assert D.sup(A | B) == D.sup(A) | D.sup(B)


# --- linear extensions --------------------------------------------------------------


def test_linear_extension_counts():
    assert len(list(linear_extensions(Poset.antichain(3)))) == 6
    assert len(list(linear_extensions(Poset.from_relations(4, [(1, 4)])))) == 12
    assert list(linear_extensions(Poset.chain(4))) == [(1, 2, 3, 4)]


def test_linear_extensions_lexicographic():
    les = list(linear_extensions(Poset.from_relations(4, [(1, 4)])))
    assert les == sorted(les)


def test_linear_extension_cap():
    with pytest.raises(CapExceeded):
        list(linear_extensions(Poset.antichain(5), cap=100))


def test_check_linear_extension():
    P = Poset.from_relations(4, [(1, 4)])
    assert check_linear_extension(P, (2, 1, 4, 3)) == (2, 1, 4, 3)
    with pytest.raises(NotALinearExtension):
        check_linear_extension(P, (4, 1, 2, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32))
def test_linear_extensions_match_brute_force(n, seed):
    rels = random_relations(random.Random(seed), n, 0.4)
    P = Poset.from_relations(n, rels)
    les = list(linear_extensions(P))
    assert les == linear_extensions_brute(n, rels)
    assert count_linear_extensions(P) == len(les)
    members = set(order_ideals(P).sets)
    for sigma in les:
        segs = initial_segments(sigma)
        assert len(segs) == n + 1 and all(A in members for A in segs)


def test_maximal_chains_biject_with_linear_extensions():
    P = Poset.from_relations(5, [(1, 3), (2, 3), (4, 5)])
    D = order_ideals(P)
    members = set(D.sets)

    def chains(A):
        if A == D.top:
            return [[A]]
        out = []
        for e in D.covers_up(A):
            out += [[A] + c for c in chains(A | 1 << (e - 1))]
        return out

    all_chains = {tuple(c) for c in chains(0)}
    from_les = {tuple(initial_segments(s)) for s in linear_extensions(P)}
    assert all_chains == from_les
    assert all(len(c) == 6 for c in all_chains)
    assert all(A in members for c in all_chains for A in c)


# --- adjoining atoms, duals ----------------------------------------------------------


def test_adjoin_atom_stalactite(stalactite_lattice):
    assert adjoin_atom(stalactite_lattice, 4).is_boolean()


def test_adjoin_atom_chain():
    D = DistLattice(2, sets_of("", 1, 12))
    assert set(adjoin_atom(D, 2).sets) == sets_of("", 1, 2, 12)


def test_adjoin_atom_rejects_existing_atom(stalactite_lattice):
    with pytest.raises(LatticeError):
        adjoin_atom(stalactite_lattice, 2)


def test_adjoin_atom_frees_the_element():
    P = Poset.from_relations(5, [(1, 3), (2, 3), (3, 4), (3, 5)])
    D2 = adjoin_atom(order_ideals(P), 3)
    Q = irr_poset(D2)
    expected = {(a, b) for a, b in P_relations_all(P) if b != 3}
    assert set(P_relations_all(Q)) == expected


def P_relations_all(P):
    return [(a, b) for a in range(1, P.n + 1) for b in range(1, P.n + 1) if a != b and P.leq(a, b)]


def test_adjoin_set(stalactite_lattice):
    assert adjoin_set(stalactite_lattice, 0) == stalactite_lattice
    assert adjoin_set(stalactite_lattice, parse(4)).is_boolean()
    assert adjoin_set(order_ideals(Poset.chain(4)), 15).is_boolean()


def test_dual_lattice(stalactite_lattice):
    B = DistLattice.boolean(3)
    assert dual_lattice(B) == B
    dual = dual_lattice(stalactite_lattice)
    assert irr_poset(DistLattice(4, dual.sets)).relations() == [(4, 1)]
    assert dual_lattice(dual) == stalactite_lattice


def test_atoms(stalactite_lattice):
    assert atoms(DistLattice.boolean(3)) == {1, 2, 3}
    assert atoms(stalactite_lattice) == {1, 2, 3}
    assert atoms(DistLattice(2, sets_of("", 1, 12))) == {1}


# --- Birkhoff round trip ----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32))
def test_birkhoff_round_trip(n, seed):
    P = Poset.from_relations(n, random_relations(random.Random(seed), n))
    D = order_ideals(P)
    assert irr_poset(DistLattice(n, D.sets)) == P
    assert order_ideals(irr_poset(D)) == D


def test_mask_of_rejects_zero():
    with pytest.raises(ValueError):
        mask_of([0])
