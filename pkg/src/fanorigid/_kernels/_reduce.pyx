# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled mod-p polynomial reduction.

Polynomials are passed as ``(exps, coeffs)`` pairs: ``exps`` is a C-contiguous
``int32[n, N]`` array sorted in strictly decreasing grevlex order, ``coeffs`` an
``int64[n]`` array of canonical residues.  Semantics match ``pyreduce`` exactly.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t

cnp.import_array()


cdef inline int _cmp(const int32_t[:, ::1] A, Py_ssize_t i, int32_t da,
                     const int32_t[:, ::1] B, Py_ssize_t j, const int32_t[::1] s, int32_t db,
                     Py_ssize_t N) noexcept nogil:
    # grevlex comparison of A[i] against B[j] + s; degrees passed in.
    cdef Py_ssize_t k
    cdef int32_t a, b
    if da != db:
        return 1 if da > db else -1
    for k in range(N - 1, -1, -1):
        a = A[i, k]
        b = B[j, k] + s[k]
        if a != b:
            return 1 if a < b else -1
    return 0


cdef inline int32_t _rowdeg(const int32_t[:, ::1] A, Py_ssize_t i, Py_ssize_t N) noexcept nogil:
    cdef int32_t d = 0
    cdef Py_ssize_t k
    for k in range(N):
        d += A[i, k]
    return d


cdef inline bint _divides(const int32_t[:, ::1] A, Py_ssize_t i,
                          const int32_t[:, ::1] B, Py_ssize_t j, Py_ssize_t N) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(N):
        if A[i, k] > B[j, k]:
            return False
    return True


cdef Py_ssize_t _merge_sub(const int32_t[:, ::1] Ae, const int64_t[::1] Ac, Py_ssize_t a0, Py_ssize_t a1,
                           int64_t c,
                           const int32_t[:, ::1] Be, const int64_t[::1] Bc, Py_ssize_t b0, Py_ssize_t b1,
                           const int32_t[::1] s, int32_t sdeg,
                           int32_t[:, ::1] Oe, int64_t[::1] Oc,
                           Py_ssize_t N, int64_t p) noexcept nogil:
    # O = A[a0:a1] - c * x^s * B[b0:b1]; returns number of output terms.
    cdef Py_ssize_t i = a0, j = b0, o = 0, k
    cdef int r
    cdef int64_t v
    cdef int32_t da, db
    while i < a1 and j < b1:
        da = _rowdeg(Ae, i, N)
        db = _rowdeg(Be, j, N) + sdeg
        r = _cmp(Ae, i, da, Be, j, s, db, N)
        if r > 0:
            for k in range(N):
                Oe[o, k] = Ae[i, k]
            Oc[o] = Ac[i]
            o += 1
            i += 1
        elif r < 0:
            for k in range(N):
                Oe[o, k] = Be[j, k] + s[k]
            Oc[o] = (p - (c * Bc[j]) % p) % p
            o += 1
            j += 1
        else:
            v = (Ac[i] - (c * Bc[j]) % p) % p
            if v < 0:
                v += p
            if v != 0:
                for k in range(N):
                    Oe[o, k] = Ae[i, k]
                Oc[o] = v
                o += 1
            i += 1
            j += 1
    while i < a1:
        for k in range(N):
            Oe[o, k] = Ae[i, k]
        Oc[o] = Ac[i]
        o += 1
        i += 1
    while j < b1:
        for k in range(N):
            Oe[o, k] = Be[j, k] + s[k]
        Oc[o] = (p - (c * Bc[j]) % p) % p
        o += 1
        j += 1
    return o


def nf_modp(cnp.ndarray f_exps, cnp.ndarray f_coeffs, list basis, int64_t p):
    """Full normal form of ``f`` modulo the monic ``basis`` (first divisor wins)."""
    cdef Py_ssize_t N = f_exps.shape[1]
    cdef Py_ssize_t n = f_exps.shape[0]
    cdef Py_ssize_t nb = len(basis)
    cdef Py_ssize_t cap = max(2 * n + 16, 64)
    cdef Py_ssize_t start = 0, end = n, g, k, nr = 0, m, newlen
    cdef int64_t c
    cdef int32_t sdeg
    cdef bint found

    lead = np.empty((max(nb, 1), N), dtype=np.int32)
    cdef int32_t[:, ::1] L = lead
    glist_e = []
    glist_c = []
    for g in range(nb):
        ge, gc = basis[g]
        ge = np.ascontiguousarray(ge, dtype=np.int32)
        gc = np.ascontiguousarray(gc, dtype=np.int64)
        glist_e.append(ge)
        glist_c.append(gc)
        for k in range(N):
            L[g, k] = ge[0, k]

    bufA_e = np.empty((cap, N), dtype=np.int32)
    bufA_c = np.empty(cap, dtype=np.int64)
    bufB_e = np.empty((cap, N), dtype=np.int32)
    bufB_c = np.empty(cap, dtype=np.int64)
    cdef int32_t[:, ::1] Ae = bufA_e
    cdef int64_t[::1] Ac = bufA_c
    cdef int32_t[:, ::1] Be = bufB_e
    cdef int64_t[::1] Bc = bufB_c
    bufA_e[:n] = f_exps
    bufA_c[:n] = f_coeffs

    rcap = max(n, 16)
    res_e = np.empty((rcap, N), dtype=np.int32)
    res_c = np.empty(rcap, dtype=np.int64)
    cdef int32_t[:, ::1] Re = res_e
    cdef int64_t[::1] Rc = res_c

    shift_arr = np.empty(N, dtype=np.int32)
    cdef int32_t[::1] s = shift_arr
    cdef int32_t[:, ::1] Ge
    cdef int64_t[::1] Gc

    while start < end:
        found = False
        for g in range(nb):
            if _divides(L, g, Ae, start, N):
                found = True
                break
        if not found:
            if nr == rcap:
                rcap *= 2
                res_e = np.concatenate([res_e, np.empty_like(res_e)])
                res_c = np.concatenate([res_c, np.empty_like(res_c)])
                Re = res_e
                Rc = res_c
            for k in range(N):
                Re[nr, k] = Ae[start, k]
            Rc[nr] = Ac[start]
            nr += 1
            start += 1
            continue
        Ge = glist_e[g]
        Gc = glist_c[g]
        m = Ge.shape[0]
        c = Ac[start]
        sdeg = 0
        for k in range(N):
            s[k] = Ae[start, k] - Ge[0, k]
            sdeg += s[k]
        newlen = (end - start - 1) + (m - 1)
        if newlen > Be.shape[0]:
            cap = 2 * newlen + 16
            grownA_e = np.empty((cap, N), dtype=np.int32)
            grownA_c = np.empty(cap, dtype=np.int64)
            grownA_e[: end - start] = bufA_e[start:end]
            grownA_c[: end - start] = bufA_c[start:end]
            bufA_e, bufA_c = grownA_e, grownA_c
            end -= start
            start = 0
            bufB_e = np.empty((cap, N), dtype=np.int32)
            bufB_c = np.empty(cap, dtype=np.int64)
            Ae = bufA_e
            Ac = bufA_c
            Be = bufB_e
            Bc = bufB_c
        with nogil:
            newlen = _merge_sub(Ae, Ac, start + 1, end, c, Ge, Gc, 1, m, s, sdeg, Be, Bc, N, p)
        bufA_e, bufB_e = bufB_e, bufA_e
        bufA_c, bufB_c = bufB_c, bufA_c
        Ae = bufA_e
        Ac = bufA_c
        Be = bufB_e
        Bc = bufB_c
        start = 0
        end = newlen
    return res_e[:nr].copy(), res_c[:nr].copy()


def spoly_modp(cnp.ndarray e1, cnp.ndarray c1, cnp.ndarray e2, cnp.ndarray c2, int64_t p):
    """S-polynomial of two monic polynomials: x^u1 g1 - x^u2 g2."""
    cdef Py_ssize_t N = e1.shape[1]
    cdef Py_ssize_t n1 = e1.shape[0], n2 = e2.shape[0], k, i, o
    cdef const int32_t[:, ::1] E1 = np.ascontiguousarray(e1, dtype=np.int32)
    cdef const int64_t[::1] C1 = np.ascontiguousarray(c1, dtype=np.int64)
    cdef const int32_t[:, ::1] E2 = np.ascontiguousarray(e2, dtype=np.int32)
    cdef const int64_t[::1] C2 = np.ascontiguousarray(c2, dtype=np.int64)
    u1 = np.empty(N, dtype=np.int32)
    u2 = np.empty(N, dtype=np.int32)
    cdef int32_t[::1] U1 = u1
    cdef int32_t[::1] U2 = u2
    cdef int32_t d1 = 0, d2 = 0, lc
    for k in range(N):
        lc = E1[0, k] if E1[0, k] > E2[0, k] else E2[0, k]
        U1[k] = lc - E1[0, k]
        U2[k] = lc - E2[0, k]
        d1 += U1[k]
        d2 += U2[k]
    # shift g1 into a scratch array then merge-subtract g2
    a_e = np.empty((max(n1 - 1, 1), N), dtype=np.int32)
    a_c = np.empty(max(n1 - 1, 1), dtype=np.int64)
    cdef int32_t[:, ::1] Ae = a_e
    cdef int64_t[::1] Ac = a_c
    for i in range(1, n1):
        for k in range(N):
            Ae[i - 1, k] = E1[i, k] + U1[k]
        Ac[i - 1] = C1[i]
    out_e = np.empty((n1 + n2, N), dtype=np.int32)
    out_c = np.empty(n1 + n2, dtype=np.int64)
    cdef int32_t[:, ::1] Oe = out_e
    cdef int64_t[::1] Oc = out_c
    with nogil:
        o = _merge_sub(Ae, Ac, 0, n1 - 1, 1, E2, C2, 1, n2, U2, d2, Oe, Oc, N, p)
    return out_e[:o].copy(), out_c[:o].copy()
