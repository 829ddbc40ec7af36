"""Every compiled kernel agrees with its pure-Python reference."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import BACKENDS, finsets, ordinals
from emlab import _backend, _pykernels, validate
from emlab.errors import ResourceLimit
from emlab.ordinal import to_arrays

needs_two = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")


def test_active_backend_is_listed():
    assert _backend.kernels in BACKENDS
    assert _backend.BACKEND in {m.BACKEND for m in BACKENDS}


def test_for_values_routes_wide_ints_to_python():
    assert _backend.for_values(1 << 70) is _pykernels


@settings(max_examples=300, deadline=None)
@given(finsets(lo=0, hi=100, max_size=30), ordinals(max_degree=3, max_coef=4))
def test_fold_agrees(X, alpha):
    exps, coefs = to_arrays(alpha)
    results = {m.BACKEND: m.fold(exps, coefs, X, 10**6) for m in BACKENDS}
    ref = results["python"]
    for r in results.values():
        assert (r[0], list(r[1]), list(r[2])) == (ref[0], list(ref[1]), list(ref[2]))
    assert (ref[0] >= 0) == validate.naive_large(X, alpha.terms)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 50), st.integers(0, 300), ordinals(max_degree=2, max_coef=3))
def test_fold_range_agrees(lo, width, alpha):
    exps, coefs = to_arrays(alpha)
    ref = _pykernels.fold(exps, coefs, list(range(lo, lo + width)), 10**6)
    for m in BACKENDS:
        r = m.fold_range(exps, coefs, lo, lo + width, 10**6)
        assert (r[0], list(r[1]), list(r[2])) == (ref[0], list(ref[1]), list(ref[2]))


def test_fold_cap(kern):
    with pytest.raises(ResourceLimit):
        kern.fold([1], [1], [10**7], 10**6)


def _random_values(rng, n, k):
    return rng.integers(0, k, n * (n - 1) // 2, dtype=np.int32)


@pytest.mark.parametrize("seed", range(40))
def test_triple_scans_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, 12))
    vals = _random_values(rng, n, int(rng.integers(1, 4)))
    for name in ("fallow_violation", "transitive_violation"):
        outs = {m.BACKEND: getattr(m, name)(vals, n) for m in BACKENDS}
        assert len({None if o is None else tuple(o) for o in outs.values()}) == 1


@pytest.mark.parametrize("seed", range(30))
def test_search_agrees(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    elems = sorted(rng.choice(np.arange(4, 20), n, replace=False).tolist())
    vals = _random_values(rng, n, 3)
    exps, coefs = ([1], [1]) if seed % 2 else ([0], [3])
    masks = {m.BACKEND: m.search_fallow_large(vals, n, elems, exps, coefs, 10**6) for m in BACKENDS}
    assert len(set(masks.values())) == 1
    mask = masks["python"]
    terms = tuple(zip(exps, coefs))
    # the answer is right: either a fallow large subset or none exists
    col = {}
    for j in range(n):
        for i in range(j):
            col[(elems[i], elems[j])] = int(vals[j * (j - 1) // 2 + i])
    if mask >= 0:
        Y = [elems[i] for i in range(n) if mask >> i & 1]
        assert validate.naive_large(Y, terms)
        assert validate.naive_fallow(lambda a, b: col[(a, b)], Y)
    else:
        for r in range(n + 1):
            for Y in itertools.combinations(elems, r):
                assert not (validate.naive_large(Y, terms) and validate.naive_fallow(lambda a, b: col[(a, b)], Y))


def test_first_unsolvable_agrees():
    elems = [4, 5, 6, 7]
    outs = {m.BACKEND: m.first_unsolvable(4, 4, elems, [0], [3], 10**6, 0, 4**6) for m in BACKENDS}
    assert len(set(outs.values())) == 1
    outs = {m.BACKEND: m.first_unsolvable(4, 4, elems, [0], [2], 10**6, 0, 4**6) for m in BACKENDS}
    assert set(outs.values()) == {-1}


@pytest.mark.parametrize("seed", range(20))
def test_argmax_agrees(seed):
    rng = np.random.default_rng(seed)
    u, horizon = int(rng.integers(1, 5)), int(rng.integers(0, 9))
    rows = rng.integers(0, 4, (u, horizon)).tolist()
    outs = [list(m.argmax_packed(rows, horizon)) for m in BACKENDS]
    assert all(o == outs[0] for o in outs)


@needs_two
def test_sweep_agrees():
    outs = {m.BACKEND: tuple(m.sweep_fallow(3, 1, 4)) for m in BACKENDS}
    assert len(set(outs.values())) == 1
