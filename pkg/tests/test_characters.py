"""Character tables, lambda operations, and the twisted-pair separation."""

import random

import pytest

from pgroupcoh.characters import (
    GeneratorMatchFailed,
    NotGenuine,
    RepRingElement,
    has_entry,
    irreducible_characters,
    lambda2,
    lambda3,
    tables_equivalent,
    verify_mod3_rep_ring_iso,
    verify_rep_ring_relations,
)
from pgroupcoh.cyclotomic import Cyclotomic, cyclo_sum
from pgroupcoh.pcgroups import enumerate_group, make_group


def test_counts_for_g41():
    # forced by |G_ab| = 9 and the degree mass: 9 linear + 8 of degree 3,
    # cross-checked against the number of conjugacy classes
    T = irreducible_characters(make_group("G", 4, 1))
    degrees = T.degrees()
    assert degrees.count(1) == 9
    assert degrees.count(3) == 8
    assert T.nclasses == 17
    assert len(degrees) == T.nclasses


def test_counts_for_extraspecial():
    T = irreducible_characters(make_group("E"))
    degrees = T.degrees()
    assert degrees.count(1) == 9
    assert degrees.count(3) == 2
    assert T.nclasses == 11


def test_trivial_character_present():
    for name, n, eps in (("G", 4, 1), ("E", None, None), ("wreath", None, None)):
        T = irreducible_characters(make_group(name, n, eps))
        one = Cyclotomic.one().sort_key()
        assert any(
            all(v.sort_key() == one for v in row) for row in T.irreducibles
        )


def test_row_orthogonality_exact():
    for spec in (("G", 4, 1), ("E", None, None)):
        T = irreducible_characters(make_group(*spec))
        for i, u in enumerate(T.irreducibles):
            for j, v in enumerate(T.irreducibles):
                expected = Cyclotomic.one() if i == j else Cyclotomic.zero()
                assert T.inner(u, v) == expected


def test_abelian_table_is_linear():
    T = irreducible_characters(make_group("M", 4))
    assert set(T.degrees()) == {1}
    assert T.nclasses == 27


def test_induction_restriction_adjunction():
    # <Ind phi, chi>_G = <phi, Res chi>_M for every linear phi of M
    from fractions import Fraction
    from pgroupcoh.pcgroups import maximal_subgroups, is_abelian
    from pgroupcoh.pcgroups import abelianization as pc_ab
    from pgroupcoh.characters import _value_of_linear

    G = make_group("G", 4, 1)
    enum = enumerate_group(G)
    T = irreducible_characters(G)
    M = next(H for H in maximal_subgroups(G) if is_abelian(H.pres))
    ab = pc_ab(M.pres)
    members = sorted(M.members)
    g = min(x for x in range(len(enum)) if x not in M.members)
    transversal = [0, g, enum.mul(g, g)]
    cls_of = T._class_of_index()

    import itertools

    for params in itertools.islice(
        itertools.product(*[range(d) for d in ab.torsion]), 27
    ):
        def phi(x):
            return _value_of_linear(ab, params, ab.coords(M.word_of[x]))

        ind_values = []
        for rep_word in T.class_reps:
            x = enum.index[rep_word]
            if x not in M.members:
                ind_values.append(Cyclotomic.zero())
            else:
                ind_values.append(
                    cyclo_sum(phi(enum.conjugate(x, t)) for t in transversal)
                )
        for row in T.irreducibles:
            lhs = T.inner(ind_values, row)
            rhs = cyclo_sum(
                phi(x) * row[cls_of[x]].conjugate() for x in members
            ) / len(members)
            assert lhs == rhs


def test_lambda2_of_linear_character_vanishes():
    T = irreducible_characters(make_group("G", 4, 1))
    theta = next(
        T.row(i) for i, row in enumerate(T.irreducibles)
        if int(row[0].rational_value()) == 1
    )
    assert all(c == 0 for c in lambda2(theta).coeffs)


def test_lambda2_sum_rule():
    # lambda^2(x + y) = lambda^2(x) + x*y + lambda^2(y)
    T = irreducible_characters(make_group("G", 4, -1))
    rng = random.Random(2)
    rows = len(T.irreducibles)
    for _ in range(5):
        xc = [0] * rows
        yc = [0] * rows
        for _ in range(2):
            xc[rng.randrange(rows)] += 1
            yc[rng.randrange(rows)] += 1
        x = RepRingElement(T, tuple(xc))
        y = RepRingElement(T, tuple(yc))
        assert lambda2(x + y).coeffs == (lambda2(x) + x * y + lambda2(y)).coeffs


def test_lambda_rejects_non_genuine():
    T = irreducible_characters(make_group("E"))
    x = RepRingElement(T, tuple([-1] + [0] * (len(T.irreducibles) - 1)))
    with pytest.raises(NotGenuine):
        lambda2(x)


def test_tables_equivalent_reflexive():
    T = irreducible_characters(make_group("G", 4, 1))
    assert tables_equivalent(T, T)


def test_character_table_separation_at_order_81():
    T1 = irreducible_characters(make_group("G", 4, 1))
    T2 = irreducible_characters(make_group("G", 4, -1))
    Tp = irreducible_characters(make_group("G'", eps=-1))
    assert not tables_equivalent(T1, T2)
    assert tables_equivalent(Tp, T2)
    assert not tables_equivalent(Tp, T1)
    # the cube map is extra data: it does separate the equal-table pair
    assert not tables_equivalent(Tp, T2, require_cube_map=True)
    assert tables_equivalent(Tp, Tp, require_cube_map=True)


def test_class_sizes_equal_but_tables_differ():
    from pgroupcoh.pcgroups import conjugacy_classes

    assert conjugacy_classes(make_group("G", 4, 1)) == conjugacy_classes(
        make_group("G", 4, -1)
    )
    T1 = irreducible_characters(make_group("G", 4, 1))
    T2 = irreducible_characters(make_group("G", 4, -1))
    assert not tables_equivalent(T1, T2)


def test_has_entry_locates_the_marker_value():
    for n in (4, 5):
        Tplus = irreducible_characters(make_group("G", n, 1))
        Tminus = irreducible_characters(make_group("G", n, -1))
        assert has_entry(Tplus, n, 1)
        assert not has_entry(Tplus, n, -1)
        assert has_entry(Tminus, n, -1)
        assert not has_entry(Tminus, n, 1)


def test_table_contains_trivial_value():
    T = irreducible_characters(make_group("G", 4, 1))
    assert T.contains_value(Cyclotomic.one())


def test_rep_ring_relations_order81():
    for eps in (1, -1):
        report = verify_rep_ring_relations(4, eps)
        assert report.ok, report.failures()


def test_rep_ring_relations_need_valid_range():
    with pytest.raises(GeneratorMatchFailed):
        verify_rep_ring_relations(3, 1)


def test_mod3_rep_ring_map():
    report = verify_mod3_rep_ring_iso(5)
    assert report.ok, report.failures()
    with pytest.raises(GeneratorMatchFailed):
        verify_mod3_rep_ring_iso(4)
