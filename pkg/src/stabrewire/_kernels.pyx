# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.  Same contract as ``_kernels_py``; limited to
n <= 64 qubits and <= 64 constraints (the wrapper falls back otherwise)."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef int _XS[3]
cdef int _ZS[3]
_XS[:] = [1, 1, 0]
_ZS[:] = [0, 1, 1]


cdef inline bint _excluded(uint64_t x, uint64_t z, int m, uint64_t* ex, uint64_t* ez,
                           int* pz, int* pb) nogil:
    cdef int i
    for i in range(m):
        if pz[i]:
            if (z >> pb[i]) & 1:
                x ^= ex[i]
                z ^= ez[i]
        else:
            if (x >> pb[i]) & 1:
                x ^= ex[i]
                z ^= ez[i]
    return x == 0 and z == 0


def weight_search(int n, cons_x, cons_z, rhs, excl, int max_weight, int limit, int min_weight=1):
    cdef int m = len(cons_x)
    cdef int me = len(excl)
    cdef int q, l, i, w, j
    cdef uint64_t s, x, z, target = <uint64_t>rhs
    cdef uint64_t* table = <uint64_t*>malloc(sizeof(uint64_t) * 3 * (n if n > 0 else 1))
    cdef uint64_t* ex = <uint64_t*>malloc(sizeof(uint64_t) * (me if me > 0 else 1))
    cdef uint64_t* ez = <uint64_t*>malloc(sizeof(uint64_t) * (me if me > 0 else 1))
    cdef int* pz = <int*>malloc(sizeof(int) * (me if me > 0 else 1))
    cdef int* pb = <int*>malloc(sizeof(int) * (me if me > 0 else 1))
    cdef int idx[64]
    cdef int let[64]
    cdef uint64_t full = (<uint64_t>0 - 1) if n == 64 else ((<uint64_t>1 << n) - 1)
    cdef uint64_t cx, cz
    found = []
    try:
        for q in range(n):
            for l in range(3):
                s = 0
                for i in range(m):
                    cx = <uint64_t>cons_x[i]
                    cz = <uint64_t>cons_z[i]
                    if ((_XS[l] & (cz >> q)) ^ (_ZS[l] & (cx >> q))) & 1:
                        s |= (<uint64_t>1) << i
                table[3 * q + l] = s
        for i in range(me):
            piv, vec = excl[i]
            ex[i] = <uint64_t>(vec & full)
            ez[i] = <uint64_t>((vec >> n) & full)
            if piv >= n:
                pz[i] = 1
                pb[i] = piv - n
            else:
                pz[i] = 0
                pb[i] = piv
        w = min_weight if min_weight > 1 else 1
        while w <= max_weight and w <= n:
            for j in range(w):
                idx[j] = j
            while True:
                for j in range(w):
                    let[j] = 0
                while True:
                    s = 0
                    for j in range(w):
                        s ^= table[3 * idx[j] + let[j]]
                    if s == target:
                        x = 0
                        z = 0
                        for j in range(w):
                            x |= (<uint64_t>_XS[let[j]]) << idx[j]
                            z |= (<uint64_t>_ZS[let[j]]) << idx[j]
                        if me == 0 or not _excluded(x, z, me, ex, ez, pz, pb):
                            found.append((int(x), int(z)))
                            if len(found) >= limit:
                                return w, found
                    # next letter assignment, last qubit fastest
                    j = w - 1
                    while j >= 0 and let[j] == 2:
                        let[j] = 0
                        j -= 1
                    if j < 0:
                        break
                    let[j] += 1
                # next combination
                j = w - 1
                while j >= 0 and idx[j] == n - w + j:
                    j -= 1
                if j < 0:
                    break
                idx[j] += 1
                for i in range(j + 1, w):
                    idx[i] = idx[i - 1] + 1
            if found:
                return w, found
            w += 1
        return -1, []
    finally:
        free(table)
        free(ex)
        free(ez)
        free(pz)
        free(pb)


def coset_min_weight(int n, v0x, v0z, basis_x, basis_z, int limit):
    cdef int d = len(basis_x)
    cdef uint64_t x = <uint64_t>v0x
    cdef uint64_t z = <uint64_t>v0z
    cdef uint64_t* bx = <uint64_t*>malloc(sizeof(uint64_t) * (d if d > 0 else 1))
    cdef uint64_t* bz = <uint64_t*>malloc(sizeof(uint64_t) * (d if d > 0 else 1))
    cdef unsigned long long k, total
    cdef int j, w, best, nhits
    cdef list hits
    try:
        for j in range(d):
            bx[j] = <uint64_t>basis_x[j]
            bz[j] = <uint64_t>basis_z[j]
        best = __builtin_popcountll(x | z)
        hits = [(int(x), int(z))]
        nhits = 1
        total = (<unsigned long long>1) << d
        k = 1
        while k < total:
            j = __builtin_popcountll((k & (0 - k)) - 1)
            x ^= bx[j]
            z ^= bz[j]
            w = __builtin_popcountll(x | z)
            if w < best:
                best = w
                hits = [(int(x), int(z))]
                nhits = 1
            elif w == best and nhits < limit:
                hits.append((int(x), int(z)))
                nhits += 1
            k += 1
        return best, hits
    finally:
        free(bx)
        free(bz)
