import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import finsets, ordinals
from emlab import validate
from emlab.errors import InsufficientLargeness, PreconditionError, ResourceLimit
from emlab.finset import FinSet, Interval
from emlab.largeness import (
    decompose_large,
    endpoint_by_stepping,
    fold,
    is_alpha_large,
    is_alpha_sparse,
    large_prefix,
    least_large_endpoint,
    residue,
    sparsify,
    union_split,
)
from emlab.ordinal import ZERO, Ordinal, make_sum, parse_ordinal

W = parse_ordinal


@pytest.mark.parametrize(
    "X, alpha, expected",
    [
        ((), "0", True),
        ((4, 5, 6, 7, 8), "w", True),
        ((4, 5, 6, 7), "w", False),
        ((5, 6, 7), "3", True),
        ((5, 6), "3", False),
        ((4, 5, 6, 7, 8, 9, 10), "w+1", True),
        ((4, 5, 6, 7, 8, 9), "w+1", False),
    ],
)
def test_large_examples(X, alpha, expected):
    assert is_alpha_large(FinSet(X), W(alpha)) is expected


def test_residue_reports_shortfall():
    assert residue(FinSet((4, 5, 6, 7)), W("w")) == Ordinal.finite(1)
    assert residue(FinSet.range(4, 8), W("w")) == ZERO


def test_fold_interval_matches_set():
    for alpha in ("w", "w.3+2", "w^2"):
        a = fold(Interval(4, 200), W(alpha))
        b = fold(FinSet(tuple(range(4, 200))), W(alpha))
        assert a == b


@pytest.mark.parametrize(
    "X, alpha, expected",
    [((4,), "w^3", True), ((4, 12), "w", True), ((3, 100), "w", False), ((4, 8), "w", False), ((), "w", True)],
)
def test_sparse_examples(X, alpha, expected):
    assert is_alpha_sparse(FinSet(X), W(alpha)) is expected


@pytest.mark.parametrize(
    "alpha, a, expected",
    [("w", 4, 8), ("w.2", 4, 18), ("w^2", 4, 94), ("5", 10, 14), ("w^2+w", 4, 2**9 * 11 - 2)],
)
def test_endpoint_examples(alpha, a, expected):
    assert least_large_endpoint(W(alpha), a) == expected
    assert endpoint_by_stepping(W(alpha), a) == expected


def test_endpoint_is_least():
    for alpha in ("w", "w.2+3", "w^2", "7"):
        N = least_large_endpoint(W(alpha), 5)
        assert is_alpha_large(Interval(5, N + 1), W(alpha))
        assert not is_alpha_large(Interval(5, N), W(alpha))


@pytest.mark.parametrize("k", range(1, 9))
@pytest.mark.parametrize("m", [0, 3, 8])
def test_closed_form_agreement(k, m):
    for a in range(4, 13):
        alpha = make_sum([Ordinal.omega_power(1, k), Ordinal.finite(m)])
        assert least_large_endpoint(alpha, a) == 2**k * (a + m + 1) - 2
    for a in range(4, 8):
        assert least_large_endpoint(Ordinal.omega_power(2, 1), a) == 2**a * (a + 2) - 2


def test_endpoint_omega_sq_k_by_stepping():
    for k in (1, 2):
        for a in range(4, 8):
            assert endpoint_by_stepping(Ordinal.omega_power(2, k), a) == least_large_endpoint(
                Ordinal.omega_power(2, k), a
            )


def test_endpoint_errors():
    with pytest.raises(PreconditionError):
        least_large_endpoint(W("w"), 3)
    with pytest.raises(ResourceLimit):
        least_large_endpoint(W("w^3"), 4)
    with pytest.raises(ResourceLimit):
        least_large_endpoint(W("w^2.3"), 4, digit_budget=1000)


def test_decompose_examples():
    assert decompose_large(FinSet.range(4, 12), [W("2"), W("w")]) == [
        FinSet((4, 5)),
        FinSet.range(6, 12),
    ]
    with pytest.raises(InsufficientLargeness):
        decompose_large(FinSet((4, 5, 6)), [W("w")])
    assert decompose_large(FinSet.range(4, 12), []) == []


def test_decompose_leftovers_go_to_last_block():
    blocks = decompose_large(FinSet.range(4, 20), [W("w")])
    assert blocks == [FinSet.range(4, 20)]


def test_union_split_examples():
    assert union_split(FinSet.range(4, 20), FinSet((30,)), 1, 1).side == 0
    rep = union_split(FinSet((4,)), FinSet((5,)), 1, 1)
    assert rep.side is None and not rep.found and not rep.lemma_falsified
    big = FinSet.range(4, least_large_endpoint(W("w.4"), 4))
    assert union_split(big, big, 1, 1).side == 0
    assert "union_large" in union_split(big, big, 1, 1).to_json()["preconditions"]


def test_sparsify_examples():
    assert sparsify(FinSet.range(4, 222), 1, 1) == FinSet((4, 9, 19, 39, 79))
    assert sparsify(FinSet.range(4, 222), 1, 0) == FinSet((4, 5, 6, 7, 8))
    with pytest.raises(InsufficientLargeness):
        sparsify(FinSet((4, 5, 6)), 1, 1)
    with pytest.raises(PreconditionError):
        sparsify(FinSet((3, 5)), 1, 1)


def test_sparsify_output_is_sparse_and_large():
    out = sparsify(FinSet.range(5, 5000), 1, 1)
    assert is_alpha_sparse(out, W("w")) and is_alpha_large(out, W("w"))


def test_quadratic_gap_surrogate():
    # a symbolic w^3-sparse stand-in: successors beyond 4^(x^2)
    X = [4, 4**16 + 1]
    assert all(4 ** (x * x) < y for x, y in zip(X, X[1:]))
    assert is_alpha_sparse(FinSet((4,)), W("w^3"))


@settings(max_examples=200, deadline=None)
@given(finsets(lo=0, hi=80, max_size=25), ordinals(max_degree=2, max_coef=3))
def test_large_matches_naive(X, alpha):
    assert is_alpha_large(FinSet(X), alpha) == validate.naive_large(X, alpha.terms)


@settings(max_examples=200, deadline=None)
@given(finsets(lo=4, hi=200, max_size=40), st.data(), ordinals(max_degree=2, max_coef=3))
def test_superset_monotone(X, data, alpha):
    Y = tuple(x for x in X if data.draw(st.booleans()))
    if is_alpha_large(FinSet(Y), alpha):
        assert is_alpha_large(FinSet(X), alpha)


@settings(max_examples=200, deadline=None)
@given(finsets(lo=4, hi=300, max_size=60), ordinals(max_degree=2, max_coef=3))
def test_large_prefix_is_shortest(X, alpha):
    pre = large_prefix(X, alpha)
    if pre is None:
        assert not is_alpha_large(FinSet(X), alpha)
    else:
        assert is_alpha_large(pre, alpha)
        assert len(pre) == 0 or not is_alpha_large(pre[:-1], alpha)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(
        ordinals(max_degree=1, max_coef=3).filter(lambda o: len(o.terms) == 1), min_size=1, max_size=3
    ),
    st.integers(4, 10),
)
def test_decompose_round_trip(parts, start):
    parts = sorted(parts, key=lambda o: o.degree)
    # concatenate minimal blocks built independently ...
    blocks, x = [], start
    for p in parts:
        n = least_large_endpoint(p, x)
        blocks.append(FinSet.range(x, n))
        x = n + 1
    X = FinSet(tuple(v for b in blocks for v in b))
    total = make_sum(reversed(parts))
    # ... the union is large for the sum, and decomposition recovers the blocks
    assert is_alpha_large(X, total)
    assert decompose_large(X, parts) == blocks


@settings(max_examples=150, deadline=None)
@given(finsets(lo=4, hi=80, max_size=8), ordinals(max_degree=1, max_coef=3))
def test_sparse_neighbours_match_all_pairs(X, alpha):
    all_pairs = all(
        validate.naive_large(range(x, y), alpha.terms) for i, x in enumerate(X) for y in X[i + 1 :]
    )
    assert is_alpha_sparse(FinSet(X), alpha) == all_pairs
