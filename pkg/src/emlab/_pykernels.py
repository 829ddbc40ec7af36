"""Pure-Python kernels; the reference for, and fallback to, ``_kernels.pyx``.

Every function here has an identically named, identically behaving
counterpart in the compiled module. Colorings are passed packed: the color of
the index pair ``i < j`` lives at ``j*(j-1)//2 + i``. Ordinals are passed as
parallel exponent/coefficient lists in CNF order.
"""

from .errors import ResourceLimit

BACKEND = "python"


def _fold(exps, coefs, n, elem, cap):
    te = list(exps)
    tc = list(coefs)
    i = 0
    while True:
        if not te:
            return i, [], []
        if i >= n:
            return -1, te, tc
        e = te[-1]
        if e == 0:
            # a finite tail k just eats the next k elements
            k = tc[-1]
            rem = n - i
            if rem < k:
                tc[-1] = k - rem
                return -1, te, tc
            i += k
            te.pop()
            tc.pop()
            continue
        m = elem(i)
        i += 1
        if tc[-1] == 1:
            te.pop()
            tc.pop()
        else:
            tc[-1] -= 1
        if m > 0:
            if m > cap:
                raise ResourceLimit(f"coefficient {m} exceeds cap {cap}")
            te.append(e - 1)
            tc.append(m)


def fold(exps, coefs, elems, cap):
    """Step the ordinal through ``elems`` in order.

    Returns ``(consumed, res_exps, res_coefs)``: ``consumed`` is how many
    elements were used when the ordinal reached 0 (``-1`` if it never did)
    and the residue is what is left after all elements.
    """
    return _fold(exps, coefs, len(elems), elems.__getitem__, cap)


def fold_range(exps, coefs, lo, hi, cap):
    """:func:`fold` over the interval ``[lo, hi)``."""
    return _fold(exps, coefs, max(hi - lo, 0), lambda i: lo + i, cap)


def fallow_violation(values, n):
    for i in range(n):
        for j in range(i + 1, n):
            cij = values[j * (j - 1) // 2 + i]
            for k in range(j + 1, n):
                base = k * (k - 1) // 2
                cik = values[base + i]
                if cik != cij and cik != values[base + j]:
                    return (i, j, k)
    return None


def transitive_violation(values, n):
    for i in range(n):
        for j in range(i + 1, n):
            cij = values[j * (j - 1) // 2 + i]
            for k in range(j + 1, n):
                base = k * (k - 1) // 2
                if cij == values[base + j] and values[base + i] != cij:
                    return (i, j, k)
    return None


def search_fallow_large(values, n, elems, exps, coefs, cap):
    """Find ``Y`` (as an index bitmask) on which the coloring is fallow and
    that is large for the given ordinal; ``-1`` if none exists.

    Backtracks from the largest element down, so a fallowness violation is
    always caught at the newest (smallest) element.
    """
    chosen = []

    def large(idx):
        return fold(exps, coefs, [elems[j] for j in idx], cap)[0] >= 0

    def rec(i):
        asc = chosen[::-1]
        if large(asc):
            return True
        if i < 0 or not large(list(range(i + 1)) + asc):
            return False
        ok = True
        for a in range(len(chosen)):
            z = chosen[a]
            zb = z * (z - 1) // 2
            ciz = values[zb + i]
            for y in chosen[a + 1:]:
                if ciz != values[y * (y - 1) // 2 + i] and ciz != values[zb + y]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            chosen.append(i)
            if rec(i - 1):
                return True
            chosen.pop()
        return rec(i - 1)

    if not rec(n - 1):
        return -1
    mask = 0
    for j in chosen:
        mask |= 1 << j
    return mask


def first_unsolvable(n, k, elems, exps, coefs, cap, rank_lo, rank_hi):
    """Scan colorings with ranks in ``[rank_lo, rank_hi)`` (base-``k`` digits,
    pair 0 least significant) and return the first rank admitting no fallow
    large subset, or ``-1``."""
    p = n * (n - 1) // 2
    digits = []
    r = rank_lo
    for _ in range(p):
        digits.append(r % k)
        r //= k
    for rank in range(rank_lo, rank_hi):
        if search_fallow_large(digits, n, elems, exps, coefs, cap) < 0:
            return rank
        for t in range(p):
            digits[t] += 1
            if digits[t] < k:
                break
            digits[t] = 0
    return -1


def argmax_packed(rows, horizon):
    """Packed ``f(a, b)`` on ground ``[0, horizon)``: the largest row index
    maximizing the window minimum of ``rows[x][a:b]``."""
    u = len(rows)
    out = [0] * (horizon * (horizon - 1) // 2)
    for a in range(horizon):
        q = None
        for b in range(a + 1, horizon):
            col = b - 1
            if q is None:
                q = [rows[x][col] for x in range(u)]
            else:
                q = [min(q[x], rows[x][col]) for x in range(u)]
            best = 0
            for x in range(1, u):
                if q[x] >= q[best]:
                    best = x
            out[b * (b - 1) // 2 + a] = best
    return out


def sweep_fallow(u, vcap, horizon):
    """Exhaustively test fallowness of the argmax coloring for every
    ``u x horizon`` table with entries in ``[0, vcap]``.

    Returns ``(tables, violating, first_violating_rank)``. Entry ``(x, z)`` is
    digit ``z*u + x`` of the rank. The last column never enters a window on
    ground ``[0, horizon)``, so only the lower digits are enumerated and the
    counts scaled; the first violating rank is unaffected because the last
    column holds the most significant digits.
    """
    base = vcap + 1
    free = u * max(horizon - 1, 0)
    scale = base ** (u * horizon - free)
    n = horizon
    violating = 0
    first = -1
    digits = [0] * free
    for rank in range(base**free):
        rows = [[digits[z * u + x] for z in range(horizon - 1)] + [0] for x in range(u)]
        if fallow_violation(argmax_packed(rows, horizon), n) is not None:
            violating += 1
            if first < 0:
                first = rank
        for t in range(free):
            digits[t] += 1
            if digits[t] < base:
                break
            digits[t] = 0
    return base**free * scale, violating * scale, first
