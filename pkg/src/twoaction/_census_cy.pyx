# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled census kernel: same loop as _census_py, C speed.

Iterates all permutations of {0..m-1} in lexicographic order and classifies
every candidate by its increments.  Counts use unsigned 64-bit integers,
which covers m <= 20 comfortably.
"""

from libc.stdlib cimport free, malloc


cdef inline bint _next_permutation(int* p, int m) noexcept nogil:
    # Lexicographic successor in place; False once the last permutation passed.
    cdef int i = m - 2
    cdef int j, tmp, lo, hi
    while i >= 0 and p[i] >= p[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = m - 1
    while p[j] <= p[i]:
        j -= 1
    tmp = p[i]; p[i] = p[j]; p[j] = tmp
    lo = i + 1
    hi = m - 1
    while lo < hi:
        tmp = p[lo]; p[lo] = p[hi]; p[hi] = tmp
        lo += 1
        hi -= 1
    return True


def census_increment(int m, v, sigma):
    """Candidate and equilibrium counts per face class; see _census_py."""
    cdef int i, j, t, k, g, s, n_zero, ok
    cdef unsigned long long boundary, n_assign
    cdef int* perm = <int*> malloc(m * sizeof(int))
    cdef int* vv = <int*> malloc(m * sizeof(int))
    cdef int* sig = <int*> malloc(m * m * sizeof(int))
    cdef int* fixed = <int*> malloc(m * sizeof(int))
    cdef int* base = <int*> malloc(m * sizeof(int))
    cdef unsigned long long* cand = <unsigned long long*> malloc((m + 1) * sizeof(unsigned long long))
    cdef unsigned long long* eq = <unsigned long long*> malloc((m + 1) * sizeof(unsigned long long))
    if not (perm and vv and sig and fixed and base and cand and eq):
        free(perm); free(vv); free(sig); free(fixed); free(base); free(cand); free(eq)
        raise MemoryError()
    try:
        for i in range(m):
            perm[i] = i
            vv[i] = v[i]
            for j in range(m):
                sig[j * m + i] = sigma[j][i]
        for i in range(m + 1):
            cand[i] = 0
            eq[i] = 0
        with nogil:
            while True:
                k = 0
                for i in range(m):
                    if perm[i] == i:
                        fixed[k] = i
                        k += 1
                cand[k] += 1ULL << k
                if k == 0:
                    eq[0] += 1
                else:
                    for t in range(k):
                        i = fixed[t]
                        s = 1 + vv[i]
                        for j in range(m):
                            if perm[j] != j and sig[j * m + perm[j]] >= sig[j * m + i]:
                                s += 1
                        base[t] = s & 1
                    n_assign = 1ULL << k
                    for boundary in range(n_assign):
                        n_zero = 0
                        for t in range(k):
                            if not (boundary >> t) & 1:
                                n_zero += 1
                        ok = 1
                        for t in range(k):
                            g = (boundary >> t) & 1
                            if (base[t] + g + n_zero - (1 - g)) & 1:
                                ok = 0
                                break
                        if ok:
                            eq[k] += 1
                if not _next_permutation(perm, m):
                    break
        return [cand[i] for i in range(m + 1)], [eq[i] for i in range(m + 1)]
    finally:
        free(perm); free(vv); free(sig); free(fixed); free(base); free(cand); free(eq)
