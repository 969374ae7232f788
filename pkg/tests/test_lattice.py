from __future__ import annotations

import itertools

import numpy as np
import oracles
import pytest

from rmquot import linalg
from rmquot.gf import field_of_order, make_field
from rmquot.glaction import (
    GroupElement,
    action_matrix_direct,
    all_gl,
    generators,
    sample_gl,
)
from rmquot.lattice import (
    PosetIdeal,
    TPoset,
    antichains,
    closure_oracle,
    digit_transfer,
    enumerate_signatures,
    ideals_enumerate,
    invariant_monomial_sets_bruteforce,
    invariant_monomial_sets_graph,
    module_of_ideal,
    signatures_by_conditions,
    support_respects_order,
    t_signature,
    transfer_neighbours,
    verify_theorem38,
)
from rmquot.linalg import Subspace
from rmquot.polyfun import HElement, digit_matrix, enumerate_omega, from_digit_matrix

SIGS_848 = {(0, 0, 8), (0, 4, 8), (0, 8, 8), (2, 4, 8), (2, 8, 8), (4, 4, 8), (4, 8, 8)}
TABLE1_BOUNDARIES = [
    [], [(0, 0)], [(0, 4)], [(2, 4)], [(0, 8)], [(4, 4)], [(0, 8), (2, 4)], [(2, 8)],
    [(0, 8), (4, 4)], [(2, 8), (4, 4)], [(4, 8)],
]
# fibre sizes of T on Omega_{8,4,8}, frozen from oracles.fibre_sizes
FIBRES_848 = {(0, 0, 8): 6, (0, 4, 8): 24, (0, 8, 8): 1, (2, 4, 8): 96, (4, 4, 8): 4,
              (2, 8, 8): 24, (4, 8, 8): 6}

SMALL_CASES = [(q, n) for q in (2, 3, 4, 5, 7, 8, 9) for n in (1, 2, 3, 4) if q**n <= 4096]


def unit(size, k):
    v = np.zeros(size, dtype=np.int64)
    v[k] = 1
    return v


# -- signatures ----------------------------------------------------------------------------

def test_signature_examples():
    assert t_signature((1, 3), 2, 2) == (2, 4)
    assert t_signature((2, 2), 2, 2) == (0, 4)
    for i in enumerate_omega(5, 3, 6):
        assert t_signature(i, 5, 1) == (6,)


@pytest.mark.parametrize("q,n", SMALL_CASES)
def test_signature_conditions_hold(q, n):
    F = field_of_order(q)
    p, m = F.p, F.m
    for r in range(n * (q - 1) + 1):
        for i in enumerate_omega(q, n, r):
            t = t_signature(i, p, m)
            assert t == oracles.signature(i, p, m)
            assert t[-1] == r
            for k in range(m):
                assert t[k] + p ** (k + 1) * sum(x // p ** (k + 1) for x in i) == r
                s_k = (t[k] - (t[k - 1] if k else 0)) // p**k
                assert 0 <= s_k <= n * (p - 1)


@pytest.mark.parametrize("q,n", SMALL_CASES)
def test_two_routes_agree(q, n):
    F = field_of_order(q)
    for r in range(n * (q - 1) + 1):
        poset = enumerate_signatures(q, n, r)
        assert list(poset.nodes) == signatures_by_conditions(q, n, r)
        assert set(poset.nodes) == set(oracles.fibre_sizes(q, F.p, F.m, n, r))
        if F.m == 1:
            assert poset.nodes == ((r,),)


def test_signatures_and_fibres_848():
    poset = enumerate_signatures(8, 4, 8)
    assert set(poset.nodes) == SIGS_848
    assert {t: len(v) for t, v in poset.fibers.items()} == FIBRES_848
    assert FIBRES_848 == oracles.fibre_sizes(8, 2, 3, 4, 8)


def test_small_chain_poset():
    poset = enumerate_signatures(4, 2, 4)
    assert poset.nodes == ((0, 4), (2, 4))
    assert len(ideals_enumerate(poset)) == 3


# -- ideals -------------------------------------------------------------------------------------

def test_ideal_boundaries_848():
    ideals = ideals_enumerate(enumerate_signatures(8, 4, 8))
    got = sorted(tuple(sorted(I.boundary)) for I in ideals)
    expected = sorted(tuple(sorted((a, b, 8) for a, b in bnd)) for bnd in TABLE1_BOUNDARIES)
    assert got == expected


def test_ideal_order_deterministic():
    ideals = ideals_enumerate(enumerate_signatures(8, 4, 8))
    sizes = [len(I) for I in ideals]
    assert sizes == sorted(sizes)
    assert ideals[0].members == frozenset() and len(ideals[-1]) == 7


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_antichain_poset_has_2k_ideals(k):
    nodes = tuple((j, k - j) for j in range(k))  # pairwise incomparable
    poset = TPoset(0, 0, 0, nodes, {t: () for t in nodes})
    ideals = ideals_enumerate(poset)
    assert len(ideals) == 2**k
    assert {I.members for I in ideals} == set(oracles.ideals_by_subsets(list(nodes)))


@pytest.mark.parametrize("q,n", [(4, 2), (4, 3), (8, 2), (8, 3), (9, 2), (16, 2)])
def test_ideals_match_subset_filter(q, n):
    for r in range(n * (q - 1) + 1):
        poset = enumerate_signatures(q, n, r)
        got = [I.members for I in ideals_enumerate(poset)]
        assert len(got) == len(set(got))
        assert set(got) == set(oracles.ideals_by_subsets(list(poset.nodes)))
        for I in ideals_enumerate(poset):
            assert poset.down_set(I.boundary) == I
            bnd = I.boundary
            assert all(not oracles.leq(a, b) for a in bnd for b in bnd if a != b)
        assert len(antichains(poset)) == len(got)


def test_ideal_json():
    poset = enumerate_signatures(8, 4, 8)
    I = poset.down_set([(0, 8, 8), (2, 4, 8)])
    data = I.to_json()
    assert data["boundary"] == [[0, 8, 8], [2, 4, 8]]
    assert len(data["members"]) == 4


# -- submodules --------------------------------------------------------------------------------

def test_module_of_ideal_examples():
    poset = enumerate_signatures(8, 4, 8)
    assert module_of_ideal(poset, PosetIdeal(frozenset())).dim == 0
    assert module_of_ideal(poset, poset.full()).dim == 161
    I4 = poset.down_set([(0, 8, 8)])
    mod = module_of_ideal(poset, I4)
    reps = {tuple(sorted(i, reverse=True)) for i in mod.monomials}
    assert reps == {(4, 4, 0, 0), (6, 2, 0, 0), (4, 2, 2, 0), (2, 2, 2, 2)}
    perms = set()
    for rep in reps:
        perms |= set(itertools.permutations(rep))
    assert set(mod.monomials) == perms and mod.dim == 31
    with pytest.raises(ValueError):
        module_of_ideal(poset, [(2, 4, 8)])


def test_closure_examples():
    F = make_field(2, 2)
    assert closure_oracle([HElement(F, 2, 4, {})]).dim == 0
    W = closure_oracle([HElement(F, 2, 4, {(2, 2): 1})])
    assert W.dim == 1 and W.contains(HElement(F, 2, 4, {(2, 2): 1}).to_vector())
    assert closure_oracle([HElement(F, 2, 4, {(3, 1): 1})]).dim == 3
    with pytest.raises(ValueError):
        closure_oracle([np.array([1, 0, 0])])


@pytest.mark.parametrize("q,n,r", [(4, 2, 3), (4, 2, 4), (3, 2, 2), (8, 2, 5), (2, 3, 2)])
def test_closure_equals_group_orbit_span(q, n, r):
    F = field_of_order(q)
    mats = [action_matrix_direct(A, r) for A in all_gl(n, F)]
    size = len(enumerate_omega(q, n, r))
    rng = np.random.default_rng(r)
    for _ in range(4):
        v = rng.integers(0, q, size)
        orbit_span = Subspace(F, size, np.vstack([linalg.matvec(F, v, M) for M in mats]))
        assert closure_oracle([v], F, n, r) == orbit_span


def test_invariant_sets_two_ways():
    for q, n, r in [(4, 2, 4), (4, 3, 4), (8, 2, 3), (9, 2, 4)]:
        F = field_of_order(q)
        assert set(invariant_monomial_sets_bruteforce(F, n, r)) == set(invariant_monomial_sets_graph(F, n, r))


# -- digit transfers and triangularity ----------------------------------------------------------

def test_digit_transfer_example():
    D = digit_matrix((1, 3), 2, 2)
    moved = digit_transfer(D, 1, 0, 1, 2)
    assert from_digit_matrix(moved, 2) == (3, 1)
    assert t_signature((3, 1), 2, 2) == t_signature((1, 3), 2, 2)
    with pytest.raises(ValueError):
        digit_transfer(D, 0, 1, 1, 2)  # source digit is zero
    with pytest.raises(ValueError):
        digit_transfer(D, 0, 1, 0, 2)  # target digit already p - 1
    with pytest.raises(ValueError):
        digit_transfer(D, 0, 0, 0, 2)


@pytest.mark.parametrize("q,n", [(4, 3), (8, 2), (9, 2), (27, 2)])
def test_transfers_preserve_signature(q, n):
    F = field_of_order(q)
    for r in range(0, n * (q - 1) + 1, 3):
        for i in enumerate_omega(q, n, r):
            for j in transfer_neighbours(i, F.p, F.m):
                assert t_signature(j, F.p, F.m) == t_signature(i, F.p, F.m)


@pytest.mark.parametrize("r", range(7))
def test_transfer_targets_in_closure(r):
    F = make_field(2, 2)
    for i in enumerate_omega(4, 2, r):
        W = closure_oracle([HElement(F, 2, r, {i: 1})])
        for j in transfer_neighbours(i, 2, 2):
            assert W.contains(HElement(F, 2, r, {j: 1}).to_vector())


@pytest.mark.parametrize("q,n", SMALL_CASES)
def test_support_below_signature(q, n):
    F = field_of_order(q)
    for r in range(n * (q - 1) + 1):
        poset = enumerate_signatures(q, n, r)
        for A in generators(n, F):
            assert support_respects_order(poset, A)


@pytest.mark.parametrize("q", [4, 8, 9])
def test_monomials_of_f_in_closure(q):
    F = field_of_order(q)
    rng = np.random.default_rng(q)
    for _ in range(10):
        r = int(rng.integers(0, 2 * (q - 1) + 1))
        size = len(enumerate_omega(q, 2, r))
        v = rng.integers(0, q, size)
        W = closure_oracle([v], F, 2, r)
        for k in np.nonzero(v)[0]:
            assert W.contains(unit(size, k))


@pytest.mark.parametrize("q,n", [(4, 2), (8, 2), (9, 2), (4, 3)])
def test_vandermonde_slices(q, n):
    F = field_of_order(q)
    diag = np.eye(n, dtype=np.int64)
    diag[-1, -1] = F.gamma
    D = GroupElement.linear(F, diag)
    rng = np.random.default_rng(q * n)
    for _ in range(10):
        r = int(rng.integers(0, n * (q - 1) + 1))
        basis = enumerate_omega(q, n, r)
        usable = [i for i in basis if i[-1] <= q - 2]
        if not usable:
            continue
        f = {i: int(rng.integers(1, q)) for i in usable if rng.random() < 0.6}
        W = closure_oracle([HElement(F, n, r, f)], gens=[D])
        for k in {i[-1] for i in f}:
            slice_k = HElement(F, n, r, {i: c for i, c in f.items() if i[-1] == k})
            assert W.contains(slice_k.to_vector())


@pytest.mark.parametrize("q,n", [(4, 2), (8, 2), (4, 3)])
def test_lattice_homomorphism(q, n):
    for r in range(n * (q - 1) + 1):
        poset = enumerate_signatures(q, n, r)
        ideals = ideals_enumerate(poset)
        mods = {I.members: module_of_ideal(poset, I).subspace for I in ideals}
        for I, J in itertools.product(ideals, repeat=2):
            meet = mods[I.members & J.members]
            join = mods[I.members | J.members]
            assert mods[I.members].intersection(mods[J.members]) == meet
            assert mods[I.members] + mods[J.members] == join


def test_lattice_homomorphism_848():
    poset = enumerate_signatures(8, 4, 8)
    ideals = ideals_enumerate(poset)
    mods = {I.members: module_of_ideal(poset, I).subspace for I in ideals}
    for I, J in itertools.combinations(ideals, 2):
        assert mods[I.members].intersection(mods[J.members]) == mods[I.members & J.members]
        assert mods[I.members] + mods[J.members] == mods[I.members | J.members]


# -- ideal correspondence ------------------------------------------------------------------

def test_ideal_correspondence_small_examples():
    rep = verify_theorem38(4, 2, 4)
    assert rep.ok and rep.details["ideals"] == 3 and rep.details["invariant_subsets"] == 3
    rep = verify_theorem38(2, 3, 2)
    assert rep.ok and rep.details["signatures"] == 1 and rep.details["ideals"] == 2


def test_ideal_correspondence_budget_skips_exhaustive():
    rep = verify_theorem38(8, 2, 7, exhaustive_budget=4)
    assert rep.checks["exhaustive"] == "skipped" and rep.ok


def test_ideal_correspondence_848():
    rep = verify_theorem38(8, 4, 8)
    assert rep.ok, rep.to_json()
    assert rep.details["ideals"] == 11
    assert rep.checks["graph"] == "pass"


@pytest.mark.parametrize("q,n,r", [(4, 2, 5), (8, 2, 9), (9, 2, 8), (16, 2, 17)])
def test_ideal_correspondence_more(q, n, r):
    assert verify_theorem38(q, n, r, samples=4).ok


def test_random_elements_respect_order():
    F = field_of_order(8)
    poset = enumerate_signatures(8, 3, 9)
    for A in sample_gl(3, F, 1, 5):
        assert support_respects_order(poset, A)
