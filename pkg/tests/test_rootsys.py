import pytest

from weylres.rootsys import coxeter_data, heights, positive_roots, root_order_by_height


@pytest.mark.parametrize("name,count", [("A1", 1), ("A2", 3), ("A3", 6), ("A4", 10), ("B2", 4),
                                        ("D4", 12), ("D5", 20)])
def test_counts_and_coxeter_identities(name, count):
    rs = positive_roots(name)
    assert len(rs.roots) == count
    h, exps = coxeter_data(rs)
    assert sum(exps) == count
    assert h * rs.rank == 2 * count
    assert rs.meta.coxeter_number == max(rs.meta.heights) + 1
    assert sum(rs.meta.simple_flags) == rs.rank


def test_b2_roots():
    assert set(positive_roots("B2").roots) == {(1, 0), (0, 1), (1, -1), (1, 1)}
    assert coxeter_data(positive_roots("B2")) == (4, (1, 3))


def test_a3_roots_and_order():
    rs = positive_roots("A", 3)
    assert all(sorted(r) == [-1, 0, 0, 1] for r in rs.roots)
    order = root_order_by_height(rs)
    assert order[0] == (1, 0, 0, -1)
    hs = heights(rs)
    assert [hs[r] for r in order] == sorted(hs.values(), reverse=True)
    assert coxeter_data(rs) == (4, (1, 2, 3))


def test_a2_order_and_data():
    rs = positive_roots("A2")
    order = root_order_by_height(rs)
    assert order[0] == (1, 0, -1)
    assert set(order[1:]) == set(rs.simple)
    assert coxeter_data(rs) == (3, (1, 2))


def test_ties_are_lexicographic():
    order = root_order_by_height(positive_roots("A3"))
    # height-2 roots x1-x3 and x2-x4: the larger coefficient vector comes first
    assert order[1:3] == [(1, 0, -1, 0), (0, 1, 0, -1)]


def test_closed_under_addition():
    for name in ("A3", "B2", "D4"):
        rs = positive_roots(name)
        roots = set(rs.roots)
        for a in roots:
            for b in roots:
                s = tuple(x + y for x, y in zip(a, b))
                # any positive-root sum of two stored roots is stored
                if s in roots:
                    assert a in roots and b in roots


def test_essential_forms_a():
    rs = positive_roots("A2")
    assert sorted(rs.essential_forms()) == sorted([(1, -1), (1, 0), (0, 1)])


@pytest.mark.parametrize("bad", ["E6", "B3", "D3", "A0", "x"])
def test_unsupported(bad):
    with pytest.raises(ValueError):
        positive_roots(bad)
