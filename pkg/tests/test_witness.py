import numpy as np
import pytest

from emlab.colorings import PairColoring, is_fallow, is_transitive
from emlab.errors import (
    ChainStalled,
    GroupingShortfall,
    InsufficientInput,
    NotSubset,
    PreconditionError,
    Shortfall,
    SplitFailed,
)
from emlab.finset import FinSet
from emlab.largeness import is_alpha_large
from emlab.ordinal import Ordinal
from emlab.witness import (
    Grouping,
    build_grouping,
    em_witness,
    fallow_base_witness,
    nominal_preconditions,
    stabilize,
    verify_grouping,
)

BIG = FinSet.range(4, 3130)


def greedy_trace(X, color, a):
    """Independent re-implementation of the pigeonhole chain."""
    pool = list(X)
    out = []
    for i in range(a + 1):
        x = pool.pop(0)
        out.append(x)
        if i == a:
            break
        classes = {}
        for y in pool:
            classes.setdefault(color(x, y), []).append(y)
        best = max(sorted(classes), key=lambda c: len(classes[c]))
        pool = classes[best]
    return out


def test_base_constant():
    assert fallow_base_witness(BIG, PairColoring.constant(BIG, 4)) == FinSet.range(4, 8)


def test_base_mod4_matches_trace():
    P = PairColoring.from_vectorized(BIG, 4, lambda xs, ys: ys % 4)
    Y = fallow_base_witness(BIG, P)
    assert list(Y) == greedy_trace(BIG, lambda x, y: y % 4, 4)


def test_base_insufficient():
    X = FinSet((4, 5, 6))
    with pytest.raises(InsufficientInput):
        fallow_base_witness(X, PairColoring.constant(X, 4))


def test_base_non_strict_may_stall():
    X = FinSet.range(4, 9)
    P = PairColoring.from_function(X, 4, lambda x, y: y % 4)
    with pytest.raises(ChainStalled) as exc:
        fallow_base_witness(X, P, strict=False)
    assert len(exc.value.partial) < 5


def test_base_preconditions():
    X = FinSet.range(4, 20)
    with pytest.raises(PreconditionError):
        fallow_base_witness(X, PairColoring.constant(X, 5), strict=False)
    with pytest.raises(NotSubset):
        fallow_base_witness(X, PairColoring.constant(FinSet.range(5, 20), 4), strict=False)


@pytest.mark.parametrize("seed", range(10))
def test_base_invariants(seed):
    P = PairColoring.random(BIG, 4, np.random.default_rng(seed))
    Y = fallow_base_witness(BIG, P)
    assert len(Y) == 5 and Y.min() == 4
    els = list(Y)
    for i, x in enumerate(els[:-1]):
        assert len({P(x, y) for y in els[i + 1 :]}) == 1
    assert is_fallow(P, Y) and is_transitive(P, Y)
    assert is_alpha_large(Y, Ordinal.omega_power(1))


def test_stabilize_no_anchors():
    X = FinSet.range(10, 30)
    P = PairColoring.constant(X, 2)
    assert stabilize(X, FinSet(), P, 0) == X.without_min()


def test_stabilize_constant():
    ground = FinSet((4, 5) + tuple(range(16, 301)))
    P = PairColoring.constant(ground, 2)
    X = FinSet.range(16, 300)
    Y = stabilize(X, FinSet((4, 5)), P, 0, c=2)
    assert len(Y) >= 1
    for x in (4, 5):
        assert len({P(x, y) for y in Y}) == 1


@pytest.mark.parametrize("seed", range(5))
def test_stabilize_random_constancy(seed):
    ground = FinSet((4, 5) + tuple(range(16, 400)))
    P = PairColoring.random(ground, 2, np.random.default_rng(seed))
    Y = stabilize(FinSet.range(16, 399), FinSet((4, 5)), P, 0, c=2)
    for x in (4, 5):
        assert len({P(x, y) for y in Y}) == 1


def test_stabilize_anchors_above():
    ground = FinSet.range(4, 400)
    P = PairColoring.random(ground, 2, np.random.default_rng(9))
    Y = stabilize(FinSet.range(4, 300), FinSet((398, 399)), P, 0, direction="anchors-above", c=2)
    for x in (398, 399):
        assert len({P(y, x) for y in Y}) == 1


def test_stabilize_split_failed():
    ground = FinSet.range(4, 20)
    P = PairColoring.constant(ground, 2)
    with pytest.raises(SplitFailed) as exc:
        stabilize(FinSet.range(9, 19), FinSet((4, 5)), P, 0, c=2)
    assert exc.value.round_index == 0


def test_stabilize_preconditions():
    ground = FinSet.range(4, 40)
    P = PairColoring.constant(ground, 3, 2)
    with pytest.raises(PreconditionError):
        stabilize(FinSet.range(10, 40), FinSet((4, 5)), P, 0, c=2)  # color 2 >= c
    with pytest.raises(PreconditionError):
        stabilize(FinSet.range(10, 40), FinSet((20,)), P, 0, c=3)  # anchor inside X
    with pytest.raises(PreconditionError):
        stabilize(FinSet.range(10, 40), FinSet((4, 5, 6)), P, 0, c=2)


def test_grouping_trivial():
    X = FinSet.range(4, 40)
    g = build_grouping(X, PairColoring.constant(X, 2), 0, 0)
    assert g.blocks == (FinSet((4,)),)
    assert verify_grouping(g, PairColoring.constant(X, 2)) == []


def test_grouping_constant_singletons():
    X = FinSet.range(16, 200)
    g = build_grouping(X, PairColoring.constant(X, 2), 0, 1)
    assert len(g.blocks) == 17 and all(len(b) == 1 for b in g.blocks)
    assert g.maxes == FinSet.range(16, 32)


def test_grouping_adversarial_shortfall():
    X = FinSet.range(4, 33)
    # each block element splits the survivors four ways by a fresh base-4 digit
    P = PairColoring.from_function(X, 4, lambda x, y: (y >> (2 * (x - 4) % 12)) & 3)
    with pytest.raises(GroupingShortfall) as exc:
        build_grouping(X, P, 0, 1)
    partial = exc.value.partial
    assert verify_grouping(partial, P) and all(v.condition == 3 for v in verify_grouping(partial, P))


@pytest.mark.parametrize("seed", range(4))
def test_grouping_round_trip(seed):
    X = FinSet.range(8, 4000)
    P = PairColoring.random(X, 2, np.random.default_rng(seed))
    for n, k in [(0, 1), (1, 0), (0, 0)]:
        try:
            g = build_grouping(X, P, n, k)
        except Shortfall:
            continue
        assert verify_grouping(g, P) == []


def test_grouping_nested_k2():
    X = FinSet.range(4, 3000)
    P = PairColoring.constant(X, 2)
    g = build_grouping(X, P, 0, 2, level_gap=1)
    assert verify_grouping(g, P) == []
    assert is_alpha_large(g.maxes, Ordinal.omega_power(2))


def test_verify_grouping_examples():
    X = FinSet.range(4, 20)
    P = PairColoring.constant(X, 2)
    single = Grouping(tuple(FinSet((x,)) for x in range(4, 9)), Ordinal.finite(1), Ordinal.finite(5))
    assert verify_grouping(single, P) == []
    overlap = Grouping((FinSet((4, 6)), FinSet((5, 7))), Ordinal.finite(1), Ordinal.finite(1))
    assert any(v.condition == 1 for v in verify_grouping(overlap, P))
    short = Grouping(tuple(FinSet((x,)) for x in range(4, 7)), Ordinal.finite(1), Ordinal.omega_power(1))
    bad = verify_grouping(short, P)
    assert [v.condition for v in bad] == [3] and bad[0].detail["residue"] == "2"
    Q = PairColoring.from_function(X, 2, lambda x, y: int(x == 4 and y == 6))
    mixed = Grouping((FinSet((4,)), FinSet((5, 6))), Ordinal.finite(1), Ordinal.finite(1))
    assert [v.condition for v in verify_grouping(mixed, Q)] == [4]


def test_em_n1_delegates():
    P = PairColoring.random(BIG, 4, np.random.default_rng(3))
    assert em_witness(BIG, P, 1) == fallow_base_witness(BIG, P)
    assert em_witness(BIG, PairColoring.constant(BIG, 4), 1) == FinSet.range(4, 8)


def test_em_genuine_shortfall():
    X = FinSet.range(4, 300)
    with pytest.raises(Shortfall):
        em_witness(X, PairColoring.constant(X, 4), 2)


def test_em_preconditions():
    X = FinSet.range(4, 30)
    with pytest.raises(PreconditionError):
        em_witness(X, PairColoring.constant(X, 4), 0)


def test_nominal_preconditions_recorded():
    rec = nominal_preconditions("stabilize", FinSet.range(16, 300), 0, 2)
    assert rec["4^(c^2) <= min X"] is False
    assert rec["w^3-sparse"] is False
    assert nominal_preconditions("em", FinSet.range(4, 30), 2)["w^36-large"] is False
