"""Named property checks, shared by ``emlab suite run`` and the test-suite.

Every check is a function ``(seed) -> dict`` whose result is deterministic
for a fixed seed: ``{"name", "passed", "details"}``. Timings are added by the
runner only when stable output is not requested.
"""

from __future__ import annotations

import itertools
import time
from typing import Callable

import numpy as np

from . import validate
from .colorings import (
    PairColoring,
    bit,
    encode_family,
    indicator,
    is_fallow,
    is_transitive,
    zero_homogeneous_quadruples,
)
from .density import check_em_alpha_large, check_em_dense, refute_density, revalidate
from .errors import InsufficientLargeness, Shortfall
from .finset import FinSet
from .largeness import decompose_large, endpoint_by_stepping, is_alpha_large, least_large_endpoint
from .limitmin import (
    ValueTable,
    argmax_coloring,
    candidate_table,
    exhaustive_sweep,
    fallow_scan,
    qmin,
)
from .ordinal import Ordinal, make_sum
from .witness import em_witness, fallow_base_witness

CHECKS: dict[str, Callable[[int], dict]] = {}


def check(name: str):
    def deco(fn):
        CHECKS[name] = fn
        return fn

    return deco


def _result(name: str, passed: bool, **details) -> dict:
    return {"name": name, "passed": bool(passed), "details": details}


# --- 1: endpoints ------------------------------------------------------------


def _closed_omega_sq(a: int) -> int:
    return 2**a * (a + 2) - 2


def hardy_cases():
    """(label, ordinal, a, closed form) for every endpoint comparison."""
    for k in range(1, 21):
        for a in range(4, 13):
            yield f"{k}", Ordinal.finite(k), a, a + k - 1
    for k in range(1, 9):
        for a in range(4, 11):
            yield f"w.{k}", Ordinal.omega_power(1, k), a, 2**k * (a + 1) - 2
    for a in range(4, 11):
        yield "w^2", Ordinal.omega_power(2), a, _closed_omega_sq(a)
        yield "w^2.2", Ordinal.omega_power(2, 2), a, _closed_omega_sq(_closed_omega_sq(a) + 1)


@check("hardy-endpoints")
def check_hardy(seed: int = 0) -> dict:
    mismatches = []
    count = 0
    for label, alpha, a, closed in hardy_cases():
        # finite ordinals are stepped one element at a time, literally
        stepped = endpoint_by_stepping(alpha, a, collapse_finite=not alpha.is_finite)
        library = least_large_endpoint(alpha, a)
        count += 1
        if not stepped == library == closed:
            mismatches.append({"alpha": label, "a": a})
    return _result("hardy-endpoints", not mismatches, cases=count, mismatches=mismatches)


# --- 2: base extractor -------------------------------------------------------

BASE_GROUND = FinSet.range(4, 3130)


def _base_problems(Y: FinSet, P: PairColoring) -> list[str]:
    problems = []
    if len(Y) != 5 or Y.min() != 4:
        problems.append("shape")
    if not validate.naive_large(Y, validate.OMEGA_TERMS) or not is_alpha_large(Y, Ordinal.omega_power(1)):
        problems.append("w-large")
    if not is_fallow(P, Y) or not validate.naive_fallow(P, Y):
        problems.append("fallow")
    if not is_transitive(P, Y):
        problems.append("transitive")
    return problems


@check("base-extractor")
def check_base_extractor(seed: int = 0, trials: int = 200) -> dict:
    failures = []
    for t in range(trials):
        P = PairColoring.random(BASE_GROUND, 4, np.random.default_rng([seed, t]))
        Y = fallow_base_witness(BASE_GROUND, P)
        problems = _base_problems(Y, P)
        if problems:
            failures.append({"trial": t, "witness": list(Y), "problems": problems})
    return _result("base-extractor", not failures, trials=trials, failures=failures)


# --- 3: encode / indicator equivalence --------------------------------------

QUAD = FinSet((4, 5, 6, 7))


def _all_colorings(ground: FinSet, k: int):
    p = len(ground) * (len(ground) - 1) // 2
    for digits in itertools.product(range(k), repeat=p):
        yield PairColoring(ground, k, digits)


@check("encoding-equivalence")
def check_equivalence(seed: int = 0) -> dict:
    exceptions = []
    families = 0
    twos = list(_all_colorings(QUAD, 2))
    for size in (1, 2):
        for fam in itertools.product(twos, repeat=size):
            families += 1
            E = encode_family(list(fam))
            if any(bit(E, i) != c for i, c in enumerate(fam)):
                exceptions.append({"kind": "bit round-trip", "family": [c.rank() for c in fam]})
            inds = all(is_transitive(indicator(E, i)) for i in range(E.colors))
            if inds != bool(is_fallow(E)):
                exceptions.append({"kind": "family equivalence", "family": [c.rank() for c in fam]})
            if is_fallow(E) and not all(is_transitive(c) for c in fam):
                exceptions.append({"kind": "members", "family": [c.rank() for c in fam]})
    colorings = 0
    for k in range(1, 5):
        for c in _all_colorings(QUAD, k):
            colorings += 1
            inds = [indicator(c, i) for i in range(k)]
            rebuilt = sum(i * ind.values for i, ind in enumerate(inds))
            if not np.array_equal(rebuilt, c.values) or any(ind.values.sum() != (c.values == i).sum()
                                                            for i, ind in enumerate(inds)):
                exceptions.append({"kind": "indicator round-trip", "k": k, "rank": c.rank()})
            if all(is_transitive(ind) for ind in inds) != bool(is_fallow(c)):
                exceptions.append({"kind": "equivalence", "k": k, "rank": c.rank()})
    return _result("encoding-equivalence", not exceptions, families=families, colorings=colorings,
                   exceptions=exceptions)


# --- 4: decomposition --------------------------------------------------------


def _random_parts(rng) -> list[Ordinal]:
    """Trailing-first summands whose sum stays below w^3.2."""
    pool = []
    for _ in range(int(rng.integers(1, 5))):
        kind = int(rng.integers(0, 10))
        if kind < 4:
            pool.append(Ordinal.finite(int(rng.integers(1, 30))))
        elif kind < 8:
            pool.append(Ordinal.omega_power(1, int(rng.integers(1, 5))))
        elif kind < 9:
            pool.append(Ordinal.omega_power(2))
        else:
            pool.append(Ordinal.omega_power(3))
    pool.sort(key=lambda o: o.degree)
    # at most one w^2 (a second is far beyond |X| <= 10^4) and one w^3
    out, seen = [], set()
    for p in pool:
        if p.degree >= 2 and p.degree in seen:
            continue
        seen.add(p.degree)
        out.append(p)
    return out


def _random_set(rng) -> FinSet:
    start = int(rng.integers(4, 12))
    size = int(rng.integers(1, 10**4 + 1)) if rng.random() < 0.1 else int(rng.integers(1, 600))
    gaps = rng.integers(1, int(rng.integers(2, 4)), size - 1)
    return FinSet(tuple(np.concatenate([[start], start + np.cumsum(gaps)]).tolist()))


@check("decomposition")
def check_decomposition(seed: int = 0, fixtures: int = 500) -> dict:
    rng = np.random.default_rng([seed, 4])
    exceptions = []
    successes = 0
    for t in range(fixtures):
        parts = _random_parts(rng)
        X = _random_set(rng)
        total = make_sum(reversed(parts))
        large = is_alpha_large(X, total)
        try:
            blocks = decompose_large(X, parts)
        except InsufficientLargeness:
            if large:
                exceptions.append({"fixture": t, "kind": "refused a large set"})
            continue
        successes += 1
        if not large:
            exceptions.append({"fixture": t, "kind": "split a non-large set"})
        flat = [x for b in blocks for x in b]
        ok = flat == list(X) and all(
            validate.naive_large(b, p.terms) for b, p in zip(blocks, parts)
        )
        if not ok or len(blocks) != len(parts):
            exceptions.append({"fixture": t, "kind": "blocks failed re-verification"})
    return _result("decomposition", not exceptions, fixtures=fixtures, successes=successes,
                   exceptions=exceptions)


# --- 5: density base ---------------------------------------------------------


@check("density-base")
def check_density_base(seed: int = 0) -> dict:
    a = check_em_dense([4, 5, 6, 7, 8], 0)
    b = check_em_dense([3, 4, 5, 6, 7], 0)
    c = check_em_dense([4, 5, 6, 7, 8], 1, mode="exact", budget=4**10)
    problems = revalidate(c)
    passed = a.verdict is True and b.verdict is False and c.verdict is False and not problems
    return _result("density-base", passed, dense0=a.verdict, low_min=b.verdict,
                   dense1=c.verdict, evidence=c.evidence, revalidation=problems)


@check("density-alpha")
def check_density_alpha(seed: int = 0) -> dict:
    c = check_em_alpha_large([4, 5, 6, 7, 8], Ordinal.omega_power(1), budget=4**10)
    zero = check_em_alpha_large([4, 5, 6, 7, 8], Ordinal())
    ref = refute_density([4, 5, 6, 7, 8], 1, 10**4, seed=1)
    problems = revalidate(c)
    ref_problems = validate.validate_partition_evidence(
        (4, 5, 6, 7, 8), ref.evidence["partition"], 1) if ref and ref.clause == 2 else ["no refutation"]
    passed = c.verdict is False and zero.verdict is True and not problems and not ref_problems
    return _result("density-alpha", passed, em_w_large=c.verdict, evidence=c.evidence,
                   revalidation=problems, refutation=ref.to_json() if ref else None)


# --- 6: triple coloring -------------------------------------------------------


@check("triple-coloring")
def check_triple(seed: int = 0) -> dict:
    exceptions = []
    count = 0
    for k in range(1, 5):
        for c in _all_colorings(QUAD, k):
            count += 1
            if zero_homogeneous_quadruples(c):
                exceptions.append({"k": k, "rank": c.rank()})
    return _result("triple-coloring", not exceptions, colorings=count, exceptions=exceptions)


# --- 7: window minima ----------------------------------------------------------


def _maximizers(q):
    top = max(q)
    return {x for x, v in enumerate(q) if v == top}


@check("limitmin-identities")
def check_limitmin(seed: int = 0, tables: int = 10**4) -> dict:
    rng = np.random.default_rng([seed, 7])
    split_fail, argmax_fail = [], []
    for t in range(tables):
        u = int(rng.integers(1, 6))
        horizon = int(rng.integers(3, 13))
        h = ValueTable.random(u, horizon, rng, vmax=int(rng.integers(1, 8)))
        q = {(a, b): qmin(h, a, b) for a in range(horizon) for b in range(a + 1, horizon + 1)}
        for a, b, c in itertools.combinations(range(horizon + 1), 3):
            qac, qab, qbc = q[a, c], q[a, b], q[b, c]
            if qac != [min(s, v) for s, v in zip(qab, qbc)]:
                split_fail.append({"table": t, "window": [a, b, c]})
            common = _maximizers(qab) & _maximizers(qbc)
            if not common <= _maximizers(qac):
                argmax_fail.append({"table": t, "window": [a, b, c]})
    sweeps = [exhaustive_sweep(u, 3, 5) for u in (1, 2)]
    sweep_ok = all(s["violating"] == 0 for s in sweeps)
    cand = candidate_table()
    cand_scan = fallow_scan(cand)
    f = argmax_coloring(cand)
    passed = not split_fail and not argmax_fail and sweep_ok
    return _result(
        "limitmin-identities",
        passed,
        tables=tables,
        split_failures=split_fail[:10],
        argmax_failures=argmax_fail[:10],
        sweeps=sweeps,
        # reported, not asserted
        candidate={"table": cand.to_json(), "f": [f(0, 1), f(1, 2), f(0, 2)],
                   "fallow_scan": [list(t) for t in cand_scan]},
        u3_sweep=exhaustive_sweep(3, 1, 4),
    )


# --- 8: witness pipeline ---------------------------------------------------


def nested_fixture() -> FinSet:
    """Ground on which the toy-base n=2 run lands exactly: nine minimal
    w-large blocks {4..8}, {9..18}, ..., {1279..2558}."""
    return FinSet.range(4, 2558)


def toy_base(M: FinSet, P: PairColoring) -> FinSet:
    """Accept every block maximum; sound when P is constant."""
    return M


@check("witness-pipeline")
def check_witness(seed: int = 0, seeds: int = 50) -> dict:
    mismatches = []
    for s in range(seeds):
        P = PairColoring.random(BASE_GROUND, 4, np.random.default_rng([seed, 8, s]))
        a = fallow_base_witness(BASE_GROUND, P)
        b = em_witness(BASE_GROUND, P, 1)
        if repr(a.to_json()) != repr(b.to_json()):
            mismatches.append(s)
    X = nested_fixture()
    C = PairColoring.constant(X, 4)
    H = em_witness(X, C, 2, base=toy_base, strict=False, grouping_exponents=lambda n: (1, 1))
    toy = {
        "size": len(H), "min": H.min(), "max": H.max(),
        "fallow": bool(is_fallow(C, H)),
        "w^2-large": is_alpha_large(H, Ordinal.omega_power(2)),
    }
    try:
        em_witness(X, C, 2)
        genuine = {"error": None}
    except Shortfall as exc:
        genuine = {"error": type(exc).__name__, "message": str(exc)}
    passed = not mismatches and toy["fallow"] and toy["w^2-large"] and genuine["error"] is not None
    return _result("witness-pipeline", passed, seeds=seeds, mismatches=mismatches, toy=toy,
                   genuine=genuine)


# --- runner ------------------------------------------------------------------


def run_suite(seed: int = 0, name_filter: str | None = None, stable: bool = False,
              shard: tuple[int, int] = (0, 1)) -> dict:
    names = [n for n in CHECKS if name_filter is None or name_filter in n]
    i, count = shard
    names = [n for j, n in enumerate(names) if j % count == i]
    results = []
    for name in names:
        t0 = time.perf_counter()
        res = CHECKS[name](seed)
        if not stable:
            res["seconds"] = round(time.perf_counter() - t0, 3)
        results.append(res)
    return {"seed": seed, "checks": results, "passed": all(r["passed"] for r in results)}


def merge_reports(reports: list[dict]) -> dict:
    """Combine shard reports; order follows check registration."""
    order = {n: i for i, n in enumerate(CHECKS)}
    checks = sorted((c for r in reports for c in r["checks"]), key=lambda c: order[c["name"]])
    return {"seed": reports[0]["seed"], "checks": checks, "passed": all(c["passed"] for c in checks)}
