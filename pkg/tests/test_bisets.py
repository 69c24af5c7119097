import numpy as np
import pytest

from bfk.bisets import (
    ConcreteBiset,
    canonical_stabilizer,
    compose,
    defres_biset,
    deflation_biset,
    identity_biset,
    indinf_biset,
    induction_biset,
    inflation_biset,
    is_biset_iso,
    iso_biset,
    left_orbits,
    left_quotient_biset,
    left_transporter,
    opposite,
    orbit_decompose,
    restriction_biset,
    right_transporter,
    section_transport,
)
from bfk.bisets import double_coset_reps as point_orbit_reps
from bfk.groups import (
    analysis,
    center,
    cyclic_group,
    direct_product,
    double_coset_reps,
    extraspecial_group,
)


X27 = extraspecial_group(3)
C9x3 = direct_product(cyclic_group(9), cyclic_group(3))


def test_constructors_validate_everywhere():
    for G in (X27, C9x3):
        ana = analysis(G)
        identity_biset(G).validate()
        for sec in ana.sections():
            indinf_biset(sec).validate()
            defres_biset(sec).validate()
            inflation_biset(ana, sec).validate()
            deflation_biset(ana, sec).validate()


def test_validate_catches_bad_tables():
    U = identity_biset(cyclic_group(3))
    shifted = ConcreteBiset(U.left_group, U.right_group, U.left,
                            U.right[:, [1, 0, 2]])
    with pytest.raises(ValueError):
        shifted.validate()
    # right action written on the wrong side fails in a nonabelian group
    wrong_side = ConcreteBiset(X27, X27, X27.table, X27.table.T.copy())
    with pytest.raises(ValueError):
        wrong_side.validate()


def test_indinf_of_whole_group_is_identity():
    ana = analysis(X27)
    sec = ana.section_at(range(27), (0,))
    assert is_biset_iso(indinf_biset(sec), identity_biset(X27))


def test_full_deflation_has_one_point():
    ana = analysis(X27)
    sec = ana.section_at(range(27), range(27))
    U = defres_biset(sec)
    assert U.size == 1 and U.left_group.order == 1


def test_opposite_of_induction_is_restriction():
    ana = analysis(X27)
    for ci in ana.class_reps:
        mem = ana.subgroup_members[ci]
        ind = induction_biset(ana, mem)
        res = restriction_biset(ana, mem)
        assert is_biset_iso(opposite(ind), res)
        assert is_biset_iso(opposite(res), ind)


def test_opposite_is_an_involution():
    ana = analysis(X27)
    sec = ana.section_at(range(27), center(X27).members)
    U = indinf_biset(sec)
    UU = opposite(opposite(U))
    assert np.array_equal(UU.left, U.left)
    assert np.array_equal(UU.right, U.right)


def test_identity_composition():
    ana = analysis(C9x3)
    for sec in ana.sections()[:10]:
        U = indinf_biset(sec)
        assert is_biset_iso(compose(identity_biset(C9x3), U), U)
        assert is_biset_iso(compose(U, identity_biset(sec.group)), U)


def test_indinf_factors_through_induction_and_inflation():
    for G in (X27, C9x3):
        ana = analysis(G)
        for sec in ana.sections():
            whole = indinf_biset(sec)
            steps = compose(induction_biset(ana, sec.top.members),
                            inflation_biset(ana, sec))
            assert whole.size == steps.size
            assert is_biset_iso(whole, steps)


def test_defres_factors_through_deflation_and_restriction():
    for G in (X27, C9x3):
        ana = analysis(G)
        for sec in ana.sections():
            whole = defres_biset(sec)
            steps = compose(deflation_biset(ana, sec),
                            restriction_biset(ana, sec.top.members))
            assert is_biset_iso(whole, steps)


def test_mackey_orbit_count():
    for G in (X27, C9x3):
        ana = analysis(G)
        for ti in ana.class_reps:
            for wi in ana.class_reps:
                T = ana.subgroup_members[ti]
                W = ana.subgroup_members[wi]
                U = compose(restriction_biset(ana, T), induction_biset(ana, W))
                want = len(double_coset_reps(G, T, W))
                assert len(orbit_decompose(U)) == want


def test_orbit_sizes_match_stabilizers():
    ana = analysis(X27)
    T = next(m for m in ana.subgroup_members if len(m) == 9)
    U = compose(restriction_biset(ana, T), induction_biset(ana, T))
    total = 0
    for rep, orbit, stab in orbit_decompose(U):
        assert len(orbit) * len(stab) == U.left_group.order * U.right_group.order
        assert rep == orbit[0] == min(orbit)
        total += len(orbit)
    assert total == U.size


def test_left_orbits_of_restriction():
    ana = analysis(X27)
    Z = center(X27).members
    U = restriction_biset(ana, Z)
    orbs = left_orbits(U)
    # Z acting on the 27 points of the parent from the left: free orbits
    assert len(orbs) == 9
    assert all(stab == (0,) for _, stab in orbs)


def test_opposite_reverses_composition():
    ana = analysis(X27)
    Z = center(X27).members
    M = next(m for m in ana.subgroup_members if len(m) == 9)
    V = defres_biset(ana.section_at(range(27), Z))
    U = indinf_biset(ana.section_at(M, Z))
    lhs = opposite(compose(V, U))
    rhs = compose(opposite(U), opposite(V))
    assert is_biset_iso(lhs, rhs)


def test_composition_is_associative_up_to_iso():
    ana = analysis(X27)
    Z = center(X27).members
    M = next(m for m in ana.subgroup_members if len(m) == 9)
    sec_m = ana.section_at(M, Z)
    W = defres_biset(ana.section_at(range(27), Z))     # quotient <- X
    V = induction_biset(ana, M)                        # X <- M
    U = inflation_biset(ana, sec_m)                    # M <- M/Z
    left = compose(compose(W, V), U)
    right = compose(W, compose(V, U))
    assert is_biset_iso(left, right)


def test_coset_counts():
    ana = analysis(X27)
    for sec in ana.sections():
        ns = sec.bottom.order
        assert indinf_biset(sec).size == 27 // ns
        assert defres_biset(sec).size == 27 // ns


def test_iso_biset_rejects_non_homomorphism():
    C9 = cyclic_group(9)
    f = np.array([0, 2, 1, 3, 4, 5, 6, 7, 8])
    with pytest.raises(ValueError):
        iso_biset(C9, C9, f)


def test_section_transport_and_cocycle():
    ana = analysis(X27)
    L = next(m for m in ana.subgroup_members
             if len(m) == 3 and m != center(X27).members)
    N = ana.normalizer_members(ana.index_of(L))
    sec = ana.section_at(N, L)
    u = next(x for x in range(27) if x not in N)
    tgt, cu = section_transport(ana, sec, u)
    assert tgt.key != sec.key
    cu.validate()
    # transporting twice by u lands at the conjugate by u.u
    tgt2, cuu = section_transport(ana, sec, X27.mul(u, u))
    mid, cu2 = section_transport(ana, tgt, u)
    assert mid.key == tgt2.key
    assert is_biset_iso(compose(cu2, cu), cuu)


def test_non_isomorphic_transitive_bisets_detected():
    ana = analysis(X27)
    Z = center(X27).members
    M1, M2 = [m for m in ana.subgroup_members if len(m) == 9][:2]
    U1 = indinf_biset(ana.section_at(M1, Z))
    U2 = indinf_biset(ana.section_at(M2, Z))
    assert U1.size == U2.size == 9
    assert np.array_equal(U1.right_group.table, U2.right_group.table)
    assert not is_biset_iso(U1, U2)


def test_transport_compatible_with_indinf():
    ana = analysis(X27)
    L = next(m for m in ana.subgroup_members
             if len(m) == 3 and m != center(X27).members)
    N = ana.normalizer_members(ana.index_of(L))
    sec = ana.section_at(N, L)
    u = next(x for x in range(27) if x not in N)
    tgt, cu = section_transport(ana, sec, u)
    assert is_biset_iso(compose(indinf_biset(tgt), cu), indinf_biset(sec))


def test_canonical_stabilizer_is_conjugation_invariant():
    ana = analysis(X27)
    L = next(m for m in ana.subgroup_members
             if len(m) == 3 and m != center(X27).members)
    U = induction_biset(ana, L)
    labels = set()
    for rep, _, stab in orbit_decompose(U):
        labels.add(canonical_stabilizer(U.left_group, U.right_group, stab))
    assert len(labels) == 1


def test_trivial_transporters_are_stabilizers():
    ana = analysis(X27)
    Z = center(X27).members
    U = indinf_biset(ana.section_at(range(27), Z))
    for u in range(U.size):
        assert left_transporter(U, u, [0]) == \
            [y for y in range(27) if U.left[y, u] == u]
        assert right_transporter(U, [0], u) == \
            [x for x in range(U.right_group.order) if U.right[u, x] == u]


def test_left_transporter_of_induction_is_conjugation():
    # induction points are the parent's elements in their own labels
    ana = analysis(X27)
    M = next(m for m in ana.subgroup_members if len(m) == 9)
    U = induction_biset(ana, M)
    T = U.right_group
    emb = [int(U.right[0, t]) for t in range(T.order)]
    for u in (0, 4, 11, 25):
        got = left_transporter(U, u, range(T.order))
        want = sorted(X27.mul(X27.mul(u, m), X27.inv_of(u)) for m in emb)
        assert got == want


def test_transporters_move_with_the_point():
    ana = analysis(X27)
    Z = center(X27).members
    M = next(m for m in ana.subgroup_members if len(m) == 9)
    U = induction_biset(ana, M)
    Q, T = U.left_group, U.right_group
    S = [t for t in range(T.order) if int(U.right[0, t]) in set(Z)]
    L = next(m for m in ana.subgroup_members
             if len(m) == 3 and m != Z)
    for u in (1, 7, 20):
        A = right_transporter(U, L, u)
        B = left_transporter(U, u, S)
        for x in (1, 2, 5):
            moved = right_transporter(U, L, int(U.right[u, x]))
            assert sorted(T.mul(T.mul(T.inv_of(x), a), x) for a in A) == moved
        for y in (1, 4, 9):
            moved = left_transporter(U, int(U.left[y, u]), S)
            assert sorted(Q.mul(Q.mul(y, b), Q.inv_of(y)) for b in B) == moved


def test_composite_transporters_through_pair_map():
    ana = analysis(X27)
    Z = center(X27).members
    M = next(m for m in ana.subgroup_members if len(m) == 9)
    U = induction_biset(ana, M)
    V = opposite(U)
    W, pairs = compose(V, U, return_pairs=True)
    assert pairs.shape == (V.size, U.size)
    assert sorted(set(pairs.ravel().tolist())) == list(range(W.size))
    S = [t for t in range(U.right_group.order) if int(U.right[0, t]) in set(Z)]
    for v in (0, 3, 12):
        for u in (0, 5, 17):
            w = int(pairs[v, u])
            step = right_transporter(U, right_transporter(V, S, v), u)
            assert step == right_transporter(W, S, w)
            step = left_transporter(V, v, left_transporter(U, u, S))
            assert step == left_transporter(W, w, S)


def test_point_orbit_reps_match_group_double_cosets():
    for G in (X27, C9x3):
        ana = analysis(G)
        for ti in ana.class_reps:
            for wi in ana.class_reps:
                T = ana.subgroup_members[ti]
                W = ana.subgroup_members[wi]
                U = induction_biset(ana, W)
                reps = point_orbit_reps(U, T)
                assert reps[0] == 0
                assert len(reps) == len(double_coset_reps(G, T, W))


def test_left_quotient_validates_and_rejects():
    ana = analysis(X27)
    M = next(m for m in ana.subgroup_members if len(m) == 9)
    U = induction_biset(ana, M)
    Z = center(X27).members
    Wq = left_quotient_biset(U, Z).validate()
    assert Wq.size == 9
    same = left_quotient_biset(U, [0])
    assert np.array_equal(same.left, U.left)
    with pytest.raises(ValueError):
        left_quotient_biset(U, [0, 3])
    L = next(m for m in ana.subgroup_members
             if len(m) == 3 and m != Z)
    with pytest.raises(ValueError):
        left_quotient_biset(U, L)


def test_quotient_interchanges_with_composition():
    # collapsing before or after composing agrees once the middle group
    # acts trivially on the collapsed side
    a9 = analysis(cyclic_group(9))
    V = induction_biset(a9, [0, 3, 6])
    Wq = left_quotient_biset(V, [0, 3, 6])
    B = V.right_group
    A = [b for b in range(B.order)
         if all(int(Wq.right[x, b]) == x for x in range(Wq.size))]
    assert A == [0, 1, 2]
    U = identity_biset(B)
    lhs = compose(Wq, left_quotient_biset(U, A))
    rhs = left_quotient_biset(compose(V, U), [0, 3, 6])
    assert is_biset_iso(lhs, rhs)
