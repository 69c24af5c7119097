import itertools
import threading

import numpy as np
import pytest

from bfk.groups import (
    DescriptorError,
    FiniteGroup,
    GroupTooLarge,
    Subgroup,
    all_subgroups,
    analysis,
    center,
    classify_group,
    conjugacy_classes_of_subgroups,
    conjugate_subgroup,
    cyclic_group,
    default_order_bound,
    direct_product,
    elementary_abelian_group,
    extraspecial_group,
    frattini,
    group_from_table,
    group_section,
    is_normal,
    load_group_file,
    moebius,
    normalizer,
    parse_descriptor,
    save_group_file,
    sections_in_class,
    trivial_group,
)


def naive_closure(G, gens):
    cur = {0, *gens}
    while True:
        new = {int(G.table[a, b]) for a in cur for b in cur} - cur
        if not new:
            return tuple(sorted(cur))
        cur |= new


def brute_subgroups(G):
    """Oracle independent of the layered search: close every generating set
    of size <= log_p |G|, which covers any subgroup of a p-group."""
    k = 0
    n = G.order
    while G.prime ** k < n:
        k += 1
    out = {(0,)}
    for r in range(1, k + 1):
        for gens in itertools.combinations(range(1, n), r):
            out.add(naive_closure(G, gens))
    return sorted(out, key=lambda m: (len(m), m))


def test_cyclic_basics():
    G = cyclic_group(9)
    assert G.prime == 3 and G.order == 9
    assert G.mul(4, 7) == 2
    assert G.inv_of(2) == 7
    assert G.power(1, 9) == 0
    assert G.is_abelian
    assert G.exponent == 9
    orders = G.element_orders()
    assert orders[0] == 1 and orders[3] == 3 and orders[1] == 9


def test_cyclic_rejects_bad_orders():
    with pytest.raises(ValueError):
        cyclic_group(6)
    with pytest.raises(ValueError):
        cyclic_group(8)  # even prime not allowed
    with pytest.raises(DescriptorError):
        cyclic_group(1)


def test_extraspecial_is_a_group_of_exponent_p():
    X = extraspecial_group(3)
    assert X.order == 27
    assert not X.is_abelian
    assert X.exponent == 3
    # full associativity via the ingestion validator
    group_from_table(3, X.table, name="copy")
    assert center(X).order == 3


def test_direct_product_and_names():
    G = direct_product(cyclic_group(9), cyclic_group(3))
    assert G.order == 27 and G.is_abelian and G.exponent == 9
    H = direct_product(cyclic_group(3), cyclic_group(3), cyclic_group(3))
    assert H.order == 27 and H.exponent == 3
    with pytest.raises(ValueError):
        direct_product(cyclic_group(9))


def test_parse_descriptor():
    assert parse_descriptor("cyclic:27").order == 27
    assert parse_descriptor("elab:3:2").order == 9
    assert parse_descriptor("xsp:3").order == 27
    G = parse_descriptor("prod:cyclic:9,elab:3:1")
    assert G.order == 27
    for bad in ["", "cyclic", "cyclic:x", "elab:3", "prod:cyclic:9", "spam:1"]:
        with pytest.raises(DescriptorError):
            parse_descriptor(bad)


def test_group_file_round_trip(tmp_path):
    X = extraspecial_group(3)
    path = tmp_path / "x27.grp"
    save_group_file(X, path)
    Y = load_group_file(path)
    assert Y.prime == 3 and Y.order == 27
    assert np.array_equal(Y.table, X.table)
    assert Y.content_hash() == X.content_hash()


def test_group_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.grp"
    path.write_text("p 3\norder 2\n0 1\n1 0\n")
    with pytest.raises(ValueError):
        load_group_file(path)  # order not a power of 3
    path.write_text("p 3\norder 3\n0 1 2\n")
    with pytest.raises(DescriptorError):
        load_group_file(path)


def test_content_hash_distinguishes():
    a = cyclic_group(27).content_hash()
    b = extraspecial_group(3).content_hash()
    c = elementary_abelian_group(3, 3).content_hash()
    assert len({a, b, c}) == 3
    assert cyclic_group(27).content_hash() == a


def test_subgroups_match_brute_force_on_x27():
    X = extraspecial_group(3)
    got = [s.members for s in all_subgroups(X)]
    assert got == brute_subgroups(X)
    assert len(got) == 19
    by_order = {}
    for m in got:
        by_order[len(m)] = by_order.get(len(m), 0) + 1
    assert by_order == {1: 1, 3: 13, 9: 4, 27: 1}


def test_subgroups_match_brute_force_on_c9xc3():
    G = direct_product(cyclic_group(9), cyclic_group(3))
    got = [s.members for s in all_subgroups(G)]
    assert got == brute_subgroups(G)


def test_subgroup_counts_elementary_abelian():
    assert len(all_subgroups(elementary_abelian_group(3, 2))) == 6
    assert len(all_subgroups(elementary_abelian_group(3, 3))) == 28
    ana = analysis(elementary_abelian_group(3, 4))
    assert ana.n_sub == 212
    sizes = {}
    for m in ana.subgroup_members:
        sizes[len(m)] = sizes.get(len(m), 0) + 1
    assert sizes == {1: 1, 3: 40, 9: 130, 27: 40, 81: 1}


def test_conjugacy_classes_x27():
    X = extraspecial_group(3)
    classes = conjugacy_classes_of_subgroups(X)
    assert len(classes) == 11
    sizes = sorted(len(c) for c in classes)
    assert sizes == [1, 1, 1, 1, 1, 1, 1, 3, 3, 3, 3]
    ana = analysis(X)
    assert len(ana.cyclic_class_positions) == 6
    # classes are closed under conjugation and reps are lattice-least
    for cls in ana.classes:
        mem = ana.subgroup_members[cls[0]]
        orbit = {ana.index_of(ana.conjugate_members(x, mem)) for x in range(27)}
        assert tuple(sorted(orbit)) == cls


def test_abelian_classes_are_singletons():
    G = elementary_abelian_group(3, 2)
    assert all(len(c) == 1 for c in analysis(G).classes)


def test_moebius_values():
    assert moebius_of(elementary_abelian_group(3, 2)) == 3
    assert moebius_of(elementary_abelian_group(3, 3)) == -27
    assert moebius_of(cyclic_group(3)) == -1
    assert moebius_of(cyclic_group(9)) == 0
    assert moebius_of(cyclic_group(27)) == 0


def moebius_of(G):
    subs = all_subgroups(G)
    return moebius(subs[0], subs[-1])


def test_moebius_defining_recursion_on_x27():
    X = extraspecial_group(3)
    ana = analysis(X)
    for ti in range(ana.n_sub):
        below = [si for si in range(ana.n_sub) if ana.leq[si, ti]]
        for si in below:
            total = sum(ana.moebius(si, ui) for ui in below if ana.leq[si, ui] and ana.leq[ui, ti])
            assert total == (1 if si == ti else 0)


def test_frattini():
    assert frattini(cyclic_group(9)).order == 3
    assert frattini(cyclic_group(27)).order == 9
    assert frattini(elementary_abelian_group(3, 3)).order == 1
    X = extraspecial_group(3)
    assert frattini(X).members == center(X).members


def test_normality_and_normalizer():
    X = extraspecial_group(3)
    subs = all_subgroups(X)
    Z = center(X)
    assert is_normal(Z, subs[-1])
    noncentral = next(s for s in subs if s.order == 3 and s.members != Z.members)
    assert not is_normal(noncentral, subs[-1])
    N = normalizer(noncentral)
    assert N.order == 9
    assert is_normal(noncentral, N)
    y = next(x for x in range(27) if x not in N.members)
    assert conjugate_subgroup(y, noncentral).members != noncentral.members


def test_classify_group():
    assert classify_group(trivial_group(3)).rank == 0
    assert classify_group(cyclic_group(3)) == classify_group(cyclic_group(3))
    assert classify_group(cyclic_group(3)).kind == "elab"
    assert classify_group(cyclic_group(9)).kind == "other"
    assert classify_group(elementary_abelian_group(3, 2)).rank == 2
    assert classify_group(extraspecial_group(3)).kind == "xsp"
    assert classify_group(direct_product(extraspecial_group(3), cyclic_group(3))).kind == "other"


def test_sections_of_c3_squared():
    G = elementary_abelian_group(3, 2)
    ana = analysis(G)
    assert len(ana.sections()) == 15
    assert len(sections_in_class(G, "E")) == 15
    assert len(sections_in_class(G, "E2")) == 15
    # quotient projection is a homomorphism with identity coset first
    for sec in ana.sections():
        assert sec.proj[sec.top.members[0]] == 0 or sec.top.members[0] != 0
        for a in sec.top.members:
            for b in sec.top.members:
                ab = G.mul(a, b)
                assert sec.group.table[sec.proj[a], sec.proj[b]] == sec.proj[ab]
        assert sec.reps[0] == min(sec.bottom.members)


def test_sections_of_x27():
    X = extraspecial_group(3)
    secs = sections_in_class(X, "X3")
    assert len(secs) == 58
    by_top = {}
    for sec in secs:
        by_top[sec.top.order] = by_top.get(sec.top.order, 0) + 1
    assert by_top == {1: 1, 3: 26, 9: 24, 27: 7}
    # only the full section has an extraspecial quotient
    xsp = [sec for sec in secs if sec.label.is_extraspecial_exp_p]
    assert len(xsp) == 1
    assert xsp[0].top.order == 27 and xsp[0].bottom.order == 1
    # dropping the extraspecial kind loses exactly the X/1 section,
    # and no section here has elementary abelian rank above 2
    assert len(sections_in_class(X, "E3")) == 57
    assert len(sections_in_class(X, "E2")) == 57
    assert len(sections_in_class(X, "E")) == 57


def test_section_count_c3_4():
    G = elementary_abelian_group(3, 4)
    assert len(sections_in_class(G, "E")) == 2193
    assert len(sections_in_class(G, "E3")) == 2192
    assert len(sections_in_class(G, "X3")) == 2192


def test_section_quotient_labels():
    X = extraspecial_group(3)
    ana = analysis(X)
    Zm = center(X).members
    sec = ana.section_at(tuple(range(27)), Zm)
    assert sec.label.kind == "elab" and sec.label.rank == 2
    full = group_section(X)
    assert full.group.order == 27 and full.label.kind == "xsp"
    with pytest.raises(ValueError):
        ana.section_at(tuple(range(27)), (0, 1))


def test_section_preimage_and_image():
    X = extraspecial_group(3)
    sec = group_section(X)
    for s in all_subgroups(X):
        img = sec.image_members(s.members)
        back = sec.preimage(img)
        assert back == s.members


def test_enumeration_bound():
    big = elementary_abelian_group(3, 5)
    with pytest.raises(GroupTooLarge):
        analysis(big)
    assert default_order_bound(3) == 81
    assert default_order_bound(5) == 125


def test_analysis_is_shared_across_threads():
    G = elementary_abelian_group(3, 3)
    seen = []

    def grab():
        seen.append(analysis(G))

    threads = [threading.Thread(target=grab) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(a is seen[0] for a in seen)


def test_subgroup_value_semantics():
    G = cyclic_group(3)
    a = Subgroup(G, (0, 1, 2))
    b = Subgroup(G, (0, 1, 2))
    assert a == b and hash(a) == hash(b)
    assert a != Subgroup(G, (0,))
