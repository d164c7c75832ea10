from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ogdegen.combin import (
    codim_w, dimension, enumerate_admissible, enumerate_tree, left_child, partition_data,
    path_to, right_child, root, signs_from_str, signs_from_T, signs_to_str, T_from_signs,
    validate_pair,
)
from ogdegen.errors import NotAllowed, SaturatedPair


def subsets(n):
    items = range(1, n)
    return [c for m in range(n) for c in combinations(items, m)]


def test_validate_examples():
    p = validate_pair(6, (), (3,))
    assert (p.case, p.j, p.k) == ("iii", 3, 6)
    p = validate_pair(6, (4, 5), (3,))
    assert (p.case, p.j, p.k) == ("iv", 0, 3)
    with pytest.raises(NotAllowed, match="intersect"):
        validate_pair(4, (1,), (1, 2))


def test_rejects_unstructured_pair():
    with pytest.raises(NotAllowed, match="none of the five"):
        validate_pair(8, (4, 6), (1, 3, 5))
    with pytest.raises(NotAllowed, match="outside"):
        validate_pair(4, (4,), ())


def test_children_of_small_pairs():
    r = root(4)
    assert left_child(r).key() == (4, (), (1,))
    assert right_child(r).key() == (4, (1, 2, 3), ())
    p = validate_pair(4, (), (1,))
    assert left_child(p).key() == (4, (), (2,))
    assert right_child(p).key() == (4, (2, 3), (1,))
    with pytest.raises(SaturatedPair):
        left_child(validate_pair(3, (1,), (2,)))


def test_path_to_n9_leaf():
    target = validate_pair(9, (1, 4, 5, 6, 8), (2, 3, 7))
    word = path_to(target)
    p = root(9)
    for step in word:
        p = left_child(p) if step == "L" else right_child(p)
    assert p == target
    assert len(word) == 15


@pytest.mark.parametrize("n", range(2, 9))
def test_tree_counts_and_leaves(n):
    t = enumerate_tree(n)
    nodes = list(t.walk())
    keys = [nd.pair.key() for nd in nodes]
    assert len(keys) == len(set(keys))
    leaves = t.leaves()
    assert len(leaves) == 2 ** (n - 1)
    assert len(nodes) == 2 ** n - 1
    want = {(tuple(I), tuple(v for v in range(1, n) if v not in I)) for I in subsets(n)}
    assert {(lf.pair.I, lf.pair.Iprime) for lf in leaves} == want
    for nd in nodes:
        again = validate_pair(n, nd.pair.I, nd.pair.Iprime)
        assert (again.j, again.k, again.case) == (nd.pair.j, nd.pair.k, nd.pair.case)


def test_small_trees():
    t2 = [nd.pair.key() for nd in enumerate_tree(2).walk()]
    assert t2 == [(2, (), ()), (2, (), (1,)), (2, (1,), ())]
    t4 = enumerate_tree(4)
    assert len(list(t4.walk())) == 15 and len(t4.leaves()) == 8


def test_left_child_drops_one_dimension():
    for n in range(2, 8):
        for nd in enumerate_tree(n).walk():
            if nd.left is not None:
                d = dimension(nd.pair)
                assert dimension(nd.left.pair) == d - 1
                assert dimension(nd.right.pair) < d


def test_codim_w():
    assert codim_w((4, 6, 7)) == 17
    assert codim_w(()) == 0
    for n in range(2, 10):
        for I in subsets(n):
            Ic = [v for v in range(1, n) if v not in I]
            assert codim_w(I) + codim_w(Ic) == n * (n - 1) // 2


@given(st.integers(2, 10).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(1, n - 1)))))
def test_partition_complement(data):
    n, I = data
    pd = partition_data(n, I)
    assert list(pd.lam) == sorted(I, reverse=True)
    assert list(pd.mu) == sorted(pd.mu, reverse=True)
    # n - lam and mu split {0, ..., n-1}
    assert sorted([n - x for x in pd.lam] + list(pd.mu)) == list(range(n))
    assert len(pd.mu) == n - pd.s


def test_admissible_sets():
    assert sorted(enumerate_admissible(2, maximal_only=True)) == sorted(
        [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert len(enumerate_admissible(3)) == 27
    assert [s for s in enumerate_admissible(1) if any(s)] == [(1,), (-1,)]


@given(st.lists(st.sampled_from((1, 0, -1)), min_size=1, max_size=8))
def test_sign_codecs(signs):
    signs = tuple(signs)
    assert signs_from_str(signs_to_str(signs)) == signs
    full = tuple(e if e else 1 for e in signs)
    assert signs_from_T(len(full), T_from_signs(full)) == full
