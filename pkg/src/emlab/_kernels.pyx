# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; behaviour mirrors ``emlab._pykernels`` exactly."""

from libc.stdlib cimport malloc, free

from emlab.errors import ResourceLimit

BACKEND = "cython"

ctypedef long long i64


cdef inline i64 rk(i64 i, i64 j) noexcept nogil:
    return j * (j - 1) // 2 + i


cdef struct OrdBuf:
    i64* e
    i64* c
    int len
    int size


cdef int ord_init(OrdBuf* b, exps, coefs, int extra) except -1:
    cdef int n = len(exps)
    cdef int i, top = 0
    for i in range(n):
        if exps[i] > top:
            top = exps[i]
    b.size = n + top + extra + 2
    b.e = <i64*> malloc(b.size * sizeof(i64))
    b.c = <i64*> malloc(b.size * sizeof(i64))
    if b.e == NULL or b.c == NULL:
        raise MemoryError()
    for i in range(n):
        b.e[i] = exps[i]
        b.c[i] = coefs[i]
    b.len = n
    return 0


cdef void ord_free(OrdBuf* b):
    free(b.e)
    free(b.c)


# Returns consumed count (>= 0), -1 if not reached, -2 on cap overflow.
# Works in place on (te, tc, tlen); elements come from arr or lo + i.
cdef i64 fold_c(i64* te, i64* tc, int* tlen, i64 n, i64* arr, i64 lo, i64 cap) noexcept nogil:
    cdef i64 i = 0, e, k, rem, m
    while True:
        if tlen[0] == 0:
            return i
        if i >= n:
            return -1
        e = te[tlen[0] - 1]
        if e == 0:
            k = tc[tlen[0] - 1]
            rem = n - i
            if rem < k:
                tc[tlen[0] - 1] = k - rem
                return -1
            i += k
            tlen[0] -= 1
            continue
        if arr != NULL:
            m = arr[i]
        else:
            m = lo + i
        i += 1
        if tc[tlen[0] - 1] == 1:
            tlen[0] -= 1
        else:
            tc[tlen[0] - 1] -= 1
        if m > 0:
            if m > cap:
                return -2
            te[tlen[0]] = e - 1
            tc[tlen[0]] = m
            tlen[0] += 1


cdef i64 _pycap(cap):
    if cap == float("inf") or cap >= (1 << 62):
        return (1 << 62)
    return <i64> cap


cdef _fold_common(exps, coefs, i64 n, i64* arr, i64 lo, cap):
    cdef OrdBuf b
    ord_init(&b, exps, coefs, 0)
    cdef i64 r
    cdef i64 c = _pycap(cap)
    try:
        r = fold_c(b.e, b.c, &b.len, n, arr, lo, c)
        if r == -2:
            raise ResourceLimit(f"coefficient exceeds cap {cap}")
        if r >= 0:
            return r, [], []
        return -1, [b.e[i] for i in range(b.len)], [b.c[i] for i in range(b.len)]
    finally:
        ord_free(&b)


def fold(exps, coefs, elems, cap):
    cdef i64 n = len(elems)
    cdef i64* arr = <i64*> malloc((n + 1) * sizeof(i64))
    if arr == NULL:
        raise MemoryError()
    cdef i64 i
    try:
        for i in range(n):
            arr[i] = elems[i]
        return _fold_common(exps, coefs, n, arr, 0, cap)
    finally:
        free(arr)


def fold_range(exps, coefs, lo, hi, cap):
    cdef i64 n = hi - lo
    if n < 0:
        n = 0
    return _fold_common(exps, coefs, n, NULL, lo, cap)


cdef i64 fallow_c(int* v, i64 n, i64* out) noexcept nogil:
    cdef i64 i, j, k, base
    cdef int cij, cik
    for i in range(n):
        for j in range(i + 1, n):
            cij = v[rk(i, j)]
            for k in range(j + 1, n):
                base = k * (k - 1) // 2
                cik = v[base + i]
                if cik != cij and cik != v[base + j]:
                    out[0] = i; out[1] = j; out[2] = k
                    return 1
    return 0


cdef i64 transitive_c(int* v, i64 n, i64* out) noexcept nogil:
    cdef i64 i, j, k, base
    cdef int cij
    for i in range(n):
        for j in range(i + 1, n):
            cij = v[rk(i, j)]
            for k in range(j + 1, n):
                base = k * (k - 1) // 2
                if cij == v[base + j] and v[base + i] != cij:
                    out[0] = i; out[1] = j; out[2] = k
                    return 1
    return 0


cdef int* _pack(values, i64 p) except NULL:
    cdef int* v = <int*> malloc((p + 1) * sizeof(int))
    if v == NULL:
        raise MemoryError()
    cdef i64 t
    for t in range(p):
        v[t] = values[t]
    return v


def fallow_violation(values, n):
    cdef i64 out[3]
    cdef int* v = _pack(values, n * (n - 1) // 2)
    try:
        if fallow_c(v, n, out):
            return (out[0], out[1], out[2])
        return None
    finally:
        free(v)


def transitive_violation(values, n):
    cdef i64 out[3]
    cdef int* v = _pack(values, n * (n - 1) // 2)
    try:
        if transitive_c(v, n, out):
            return (out[0], out[1], out[2])
        return None
    finally:
        free(v)


cdef struct Search:
    int* v
    int n
    i64* elems
    i64* oe        # the ordinal, pristine
    i64* oc
    int olen
    i64* we        # scratch for folding
    i64* wc
    i64 cap
    int* chosen    # indices, descending
    int nch
    i64* scratch   # element buffer
    int overflow


cdef int large_c(Search* s, int upto) noexcept nogil:
    # Is {elems[0..upto)} plus chosen large? Chosen are all >= upto.
    cdef int t, m = 0, tlen
    cdef i64 r
    for t in range(upto):
        s.scratch[m] = s.elems[t]
        m += 1
    for t in range(s.nch - 1, -1, -1):
        s.scratch[m] = s.elems[s.chosen[t]]
        m += 1
    for t in range(s.olen):
        s.we[t] = s.oe[t]
        s.wc[t] = s.oc[t]
    tlen = s.olen
    r = fold_c(s.we, s.wc, &tlen, m, s.scratch, 0, s.cap)
    if r == -2:
        s.overflow = 1
        return 0
    return r >= 0


cdef int rec_c(Search* s, int i) noexcept nogil:
    cdef int a, b, z, y, ok, ciz
    cdef i64 zb
    if large_c(s, 0):
        return 1
    if s.overflow or i < 0:
        return 0
    if not large_c(s, i + 1):
        return 0
    ok = 1
    for a in range(s.nch):
        z = s.chosen[a]
        zb = z * (z - 1) // 2
        ciz = s.v[zb + i]
        for b in range(a + 1, s.nch):
            y = s.chosen[b]
            if ciz != s.v[rk(i, y)] and ciz != s.v[zb + y]:
                ok = 0
                break
        if not ok:
            break
    if ok:
        s.chosen[s.nch] = i
        s.nch += 1
        if rec_c(s, i - 1):
            return 1
        s.nch -= 1
        if s.overflow:
            return 0
    return rec_c(s, i - 1)


cdef int search_setup(Search* s, int n, elems, exps, coefs, cap) except -1:
    cdef int t, top = 0
    s.n = n
    s.olen = len(exps)
    for t in range(s.olen):
        if exps[t] > top:
            top = exps[t]
    size = s.olen + top + n + 2
    s.elems = <i64*> malloc((n + 1) * sizeof(i64))
    s.scratch = <i64*> malloc((n + 1) * sizeof(i64))
    s.chosen = <int*> malloc((n + 1) * sizeof(int))
    s.oe = <i64*> malloc(size * sizeof(i64))
    s.oc = <i64*> malloc(size * sizeof(i64))
    s.we = <i64*> malloc(size * sizeof(i64))
    s.wc = <i64*> malloc(size * sizeof(i64))
    s.v = NULL
    if not (s.elems and s.scratch and s.chosen and s.oe and s.oc and s.we and s.wc):
        raise MemoryError()
    for t in range(n):
        s.elems[t] = elems[t]
    for t in range(s.olen):
        s.oe[t] = exps[t]
        s.oc[t] = coefs[t]
    s.cap = _pycap(cap)
    s.nch = 0
    s.overflow = 0
    return 0


cdef void search_free(Search* s):
    free(s.elems); free(s.scratch); free(s.chosen)
    free(s.oe); free(s.oc); free(s.we); free(s.wc)
    free(s.v)


def search_fallow_large(values, n, elems, exps, coefs, cap):
    cdef Search s
    cdef int found
    search_setup(&s, n, elems, exps, coefs, cap)
    try:
        s.v = _pack(values, n * (n - 1) // 2)
        found = rec_c(&s, n - 1)
        if s.overflow:
            raise ResourceLimit(f"coefficient exceeds cap {cap}")
        if not found:
            return -1
        mask = 0
        for t in range(s.nch):
            mask |= 1 << s.chosen[t]
        return mask
    finally:
        search_free(&s)


def first_unsolvable(n, k, elems, exps, coefs, cap, rank_lo, rank_hi):
    cdef Search s
    cdef i64 p = n * (n - 1) // 2
    cdef i64 rank, lo = rank_lo, hi = rank_hi
    cdef int t, kk = k, nn = n
    search_setup(&s, n, elems, exps, coefs, cap)
    try:
        s.v = <int*> malloc((p + 1) * sizeof(int))
        if s.v == NULL:
            raise MemoryError()
        r = rank_lo
        for t in range(p):
            s.v[t] = r % k
            r //= k
        with nogil:
            rank = lo
            while rank < hi:
                s.nch = 0
                if not rec_c(&s, nn - 1):
                    break
                for t in range(p):
                    s.v[t] += 1
                    if s.v[t] < kk:
                        break
                    s.v[t] = 0
                rank += 1
        if s.overflow:
            raise ResourceLimit(f"coefficient exceeds cap {cap}")
        return rank if rank < hi else -1
    finally:
        search_free(&s)


cdef void argmax_c(i64* rows, int u, int horizon, int* out, i64* q) noexcept nogil:
    # rows is u x horizon, row-major
    cdef int a, b, x, best, col
    cdef i64 val
    for a in range(horizon):
        for b in range(a + 1, horizon):
            col = b - 1
            for x in range(u):
                val = rows[x * horizon + col]
                if b == a + 1 or val < q[x]:
                    q[x] = val
            best = 0
            for x in range(1, u):
                if q[x] >= q[best]:
                    best = x
            out[rk(a, b)] = best


def argmax_packed(rows, horizon):
    cdef int u = len(rows), h = horizon, x, z
    cdef i64 p = h * (h - 1) // 2
    cdef i64* r = <i64*> malloc((u * h + 1) * sizeof(i64))
    cdef i64* q = <i64*> malloc((u + 1) * sizeof(i64))
    cdef int* out = <int*> malloc((p + 1) * sizeof(int))
    try:
        if r == NULL or q == NULL or out == NULL:
            raise MemoryError()
        for x in range(u):
            for z in range(h):
                r[x * h + z] = rows[x][z]
        argmax_c(r, u, h, out, q)
        return [out[t] for t in range(p)]
    finally:
        free(r); free(q); free(out)


def sweep_fallow(u, vcap, horizon):
    cdef int uu = u, h = horizon, base = vcap + 1, t, x, z
    cdef int entries = uu * h
    cdef i64 p = h * (h - 1) // 2
    cdef i64 total = 1
    cdef i64 rank, violating = 0, first = -1
    cdef i64 tri[3]
    cdef int* dig = <int*> malloc((entries + 1) * sizeof(int))
    cdef i64* rows = <i64*> malloc((entries + 1) * sizeof(i64))
    cdef i64* q = <i64*> malloc((uu + 1) * sizeof(i64))
    cdef int* out = <int*> malloc((p + 1) * sizeof(int))
    try:
        if not (dig and rows and q and out):
            raise MemoryError()
        for t in range(entries):
            dig[t] = 0
            total *= base
        with nogil:
            for rank in range(total):
                for z in range(h):
                    for x in range(uu):
                        rows[x * h + z] = dig[z * uu + x]
                argmax_c(rows, uu, h, out, q)
                if fallow_c(out, h, tri):
                    violating += 1
                    if first < 0:
                        first = rank
                for t in range(entries):
                    dig[t] += 1
                    if dig[t] < base:
                        break
                    dig[t] = 0
        return total, violating, first
    finally:
        free(dig); free(rows); free(q); free(out)
