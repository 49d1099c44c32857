# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Fixed-width compiled kernel for short-vector enumeration.

Mirrors the pure-Python search in ``latk._enum_pure.run`` exactly.  All
arithmetic runs in 128-bit signed integers; callers must check the plan's
exact magnitude bound against the 124-bit capacity before dispatching here
(the dispatcher in ``latk.roots`` does).
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef inline i128 _from_py(object v):
    cdef long long hi = <long long> (v >> 64)
    cdef unsigned long long lo = <unsigned long long> (v & 0xFFFFFFFFFFFFFFFF)
    return (<i128> hi) * ((<i128> 1) << 64) + <i128> lo


cdef inline object _to_py(i128 v):
    cdef long long hi = <long long> (v >> 64)
    cdef unsigned long long lo = <unsigned long long> v
    cdef object high = hi  # Python int, so the wide shift below is exact
    return (high << 64) + lo


cdef inline i128 _isqrt(i128 v) noexcept:
    """Exact integer square root by Newton iteration."""
    cdef i128 x, y, t
    cdef int bits = 0
    if v <= 0:
        return 0
    t = v
    while t:
        t >>= 1
        bits += 1
    x = (<i128> 1) << ((bits + 2) >> 1)
    y = (x + v / x) >> 1
    while y < x:
        x = y
        y = (x + v / x) >> 1
    return x


cdef inline i128 _floordiv(i128 a, i128 b) noexcept:
    # b > 0 always; C division truncates toward zero
    cdef i128 q = a / b
    if a % b != 0 and a < 0:
        q -= 1
    return q


cdef struct SearchState:
    int size
    i128 *scale
    i128 *weight
    i128 *rows
    int *offsets
    i128 *x


cdef void _emit(SearchState *st, list out):
    cdef int i
    cdef bint nonzero = False
    for i in range(st.size):
        if st.x[i] != 0:
            nonzero = True
            break
    if not nonzero:
        return
    vec = []
    for i in range(st.size):
        vec.append(_to_py(st.x[i]))
    out.append(tuple(vec))


cdef void _descend(SearchState *st, int level, i128 rem, bint zeros_above, list out):
    cdef i128 sn = 0, w, s, y, xi, lo, hi, ymax
    cdef int k, start = st.offsets[level], stop = st.offsets[level + 1]
    for k in range(start, stop):
        if st.rows[k] != 0:
            sn += st.rows[k] * st.x[level + 1 + (k - start)]
    w = st.weight[level]
    s = st.scale[level]
    ymax = _isqrt(rem / w)
    lo = -_floordiv(ymax + sn, s)
    hi = _floordiv(ymax - sn, s)
    if zeros_above and lo < 0:
        lo = 0
    if level == 0:
        xi = lo
        while xi <= hi:
            y = xi * s + sn
            if rem == w * y * y:
                st.x[0] = xi
                _emit(st, out)
            xi += 1
        st.x[0] = 0
    else:
        xi = lo
        while xi <= hi:
            y = xi * s + sn
            st.x[level] = xi
            _descend(st, level - 1, rem - w * y * y, zeros_above and xi == 0, out)
            xi += 1
        st.x[level] = 0


def run(int n, scale, weight, rows, budget):
    """Execute the search plan; returns raw solutions, one per ± pair.

    Arguments mirror the fields of ``latk._enum_pure.EnumPlan``; the result
    uses the same raw sign convention as ``latk._enum_pure.run`` (the last
    nonzero coordinate of each representative is positive).
    """
    if n <= 0:
        return []
    cdef SearchState st
    cdef int i, j, total = 0
    cdef list out = []
    for i in range(n):
        total += len(rows[i])
    st.size = n
    st.scale = <i128 *> malloc(n * sizeof(i128))
    st.weight = <i128 *> malloc(n * sizeof(i128))
    st.rows = <i128 *> malloc((total if total else 1) * sizeof(i128))
    st.offsets = <int *> malloc((n + 1) * sizeof(int))
    st.x = <i128 *> malloc(n * sizeof(i128))
    if not (st.scale and st.weight and st.rows and st.offsets and st.x):
        free(st.scale); free(st.weight); free(st.rows); free(st.offsets); free(st.x)
        raise MemoryError
    try:
        st.offsets[0] = 0
        for i in range(n):
            st.scale[i] = _from_py(scale[i])
            st.weight[i] = _from_py(weight[i])
            st.x[i] = 0
            row = rows[i]
            st.offsets[i + 1] = st.offsets[i] + len(row)
            for j in range(len(row)):
                st.rows[st.offsets[i] + j] = _from_py(row[j])
        _descend(&st, n - 1, _from_py(budget), True, out)
    finally:
        free(st.scale); free(st.weight); free(st.rows); free(st.offsets); free(st.x)
    return out
