import random
from fractions import Fraction

import pytest

from ogdegen import exactnum as en
from ogdegen.chart import (
    ZERO, build_shape, col_index, random_plus, reconstruct_chart, solve_stars, torus_scale,
)
from ogdegen.combin import enumerate_tree, left_child, right_child, root, validate_pair
from ogdegen.degen import (
    active_coordinate, build_family, cascade, degenerate, draw_nicest_root, is_nicest,
    limit_left, limit_right, pr_left, pr_right, pr_right_preimage, right_scaled_family,
)

EXAMPLE = validate_pair(6, (), (3,))


def nicest_plus(pair, seed):
    rng = random.Random(seed)
    shape = build_shape(pair)
    while True:
        plus = random_plus(shape, rng)
        if is_nicest(pair, plus):
            return plus


def test_active_coordinate():
    for n in range(2, 7):
        assert active_coordinate(build_shape(root(n))) == (0, n)
    assert active_coordinate(build_shape(EXAMPLE)) == (0, col_index(6, -4))


def test_family_at_one_is_the_chart():
    plus = nicest_plus(EXAMPLE, 0)
    step = build_family(EXAMPLE, plus)
    at_one = tuple(tuple(v(1) for v in r) for r in step.At.entries)
    assert at_one == solve_stars(build_shape(EXAMPLE), plus).entries
    act = active_coordinate(step.At.shape)
    assert step.At.entries[act[0]][act[1]] == plus[act] * en.T


def test_left_limit_of_example_kills_two_entries():
    lpair, lim = limit_left(build_family(EXAMPLE, nicest_plus(EXAMPLE, 1)))
    assert lpair.key() == (6, (), (4,))
    assert lim.entries[0][col_index(6, -4)] == 0
    assert lim.entries[3][col_index(6, 3)] == 0
    assert lim.shape.grid[3][col_index(6, 3)] == ZERO


def test_right_limit_targets():
    rpair, _ = limit_right(build_family(root(4), nicest_plus(root(4), 2)))
    assert rpair.key() == (4, (1, 2, 3), ())
    rpair, lim = limit_right(build_family(EXAMPLE, nicest_plus(EXAMPLE, 3)))
    assert rpair.key() == (6, (4, 5), (3,))
    assert len(lim.shape.plus_positions) == 9


def test_n2_left_limit_shape():
    lpair, lim = limit_left(build_family(root(2), nicest_plus(root(2), 4)))
    assert lpair.key() == (2, (), (1,))
    assert lim.shape.grid == build_shape(lpair).grid


def test_limits_are_distinct_components():
    for seed in range(5):
        step = build_family(root(4), nicest_plus(root(4), seed))
        _, a = limit_left(step)
        _, b = limit_right(step)
        assert en.mat_rank(list(a.entries) + list(b.entries)) > 4


def test_projections_of_example():
    plus = nicest_plus(EXAMPLE, 5)
    n = 6
    left = pr_left(root(n), nicest_plus(root(n), 5))
    assert len(left) == len(build_shape(root(n)).plus_positions) - 1
    assert (0, n) not in left
    right = pr_right(EXAMPLE, plus)
    assert len(right) == 9
    top = [right[(0, col_index(n, -q))] for q in (4, 3, 2)]
    assert top == [plus[(0, col_index(n, -q))] for q in (4, 3, 2)]


@pytest.mark.parametrize("seed", range(25))
def test_symbolic_identity(seed):
    """Row 4 of the example family: entry at 3 = -(entry at 4) * t * a(1,4bar) / a(1,3bar)."""
    rng = random.Random(seed)
    shape = build_shape(EXAMPLE)
    plus = random_plus(shape, rng)
    n = 6
    a4, a3 = plus[(0, col_index(n, -4))], plus[(0, col_index(n, -3))]
    step = build_family(EXAMPLE, plus)
    A = step.At.entries
    assert A[3][col_index(n, 3)] == -A[3][col_index(n, 4)] * a4 * en.T / a3
    dagger = right_scaled_family(step)
    _, lim_l = limit_left(step)
    assert en.eval_at_zero(dagger[3][col_index(n, 3)]) == -lim_l.entries[3][col_index(n, 4)] * a4 / a3


@pytest.mark.parametrize("n", [3, 4, 5])
def test_pr_right_is_dominant(n):
    rng = random.Random(n)
    pairs = [nd.pair for nd in enumerate_tree(n).walk() if not nd.pair.saturated]
    for i in range(200):
        pair = pairs[i % len(pairs)]
        rshape = build_shape(right_child(pair))
        target = random_plus(rshape, rng)
        pre = pr_right_preimage(pair, target, rng)
        assert pr_right(pair, pre) == target


def test_is_nicest_examples():
    rng = random.Random(0)
    for leaf in enumerate_tree(4).leaves():
        assert is_nicest(leaf.pair, random_plus(build_shape(leaf.pair), rng))
    plus = nicest_plus(root(4), 0)
    plus[(0, 4)] = Fraction(0)
    assert not is_nicest(root(4), plus)


def test_nicest_rate():
    hits = sum(is_nicest(root(5), random_plus(build_shape(root(5)), random.Random(s)))
               for s in range(200))
    assert hits >= 198


def test_torus_equivariance():
    rng = random.Random(7)
    for pair in (root(4), validate_pair(5, (), (2,)), validate_pair(6, (4, 5), (3,))):
        n = pair.n
        step = build_family(pair, nicest_plus(pair, 7))
        c = [Fraction(rng.choice((-3, -2, 2, 3, 5)), rng.choice((1, 2, 7))) for _ in range(n)]
        lpair, lim_l = limit_left(step)
        B = [[en.eval_at_zero(v) for v in r] for r in torus_scale(step.At, c).entries]
        assert reconstruct_chart(B, lpair).entries == \
            reconstruct_chart(torus_scale(lim_l, c).entries, lpair).entries
        rpair, lim_r = limit_right(step)
        scaled = torus_scale(en.ExactMatrix(right_scaled_family(step)), c)
        B = [[en.eval_at_zero(v) for v in r] for r in scaled.entries]
        assert reconstruct_chart(B, rpair).entries == \
            reconstruct_chart(torus_scale(lim_r, c).entries, rpair).entries


def test_degenerate_single_step():
    rec = degenerate(EXAMPLE, nicest_plus(EXAMPLE, 8))
    assert rec["left"] == rec["right"] == "match"


def test_cascade_small_leaves():
    rep = cascade(3, 0)
    assert rep.ok
    assert sorted((lf["pair"].I, lf["pair"].Iprime) for lf in rep.leaves) == [
        ((), (1, 2)), ((1,), (2,)), ((1, 2), ()), ((2,), (1,))]
    rep = cascade(4, 1)
    want = {nd.pair.key() for nd in enumerate_tree(4).leaves()}
    assert sorted(lf["pair"].key() for lf in rep.leaves) == sorted(want)
    assert all(lf["multiplicity"] == 1 for lf in rep.leaves)


@pytest.mark.parametrize("n", [5, 6])
def test_cascades_are_coherent(n):
    for seed in range(3):
        rep = cascade(n, seed)
        assert rep.ok, rep.failures
        assert len(rep.leaves) == 2 ** (n - 1)
        assert len(rep.steps) == 2 ** (n - 1) - 1


def test_cascade_is_deterministic():
    a = cascade(4, 11).to_json(dump_matrices=True)
    b = cascade(4, 11).to_json(dump_matrices=True)
    assert a == b
    assert draw_nicest_root(4, 11) == draw_nicest_root(4, 11)
