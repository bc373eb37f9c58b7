# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels over the integer-encoded group Z_p^D.

A point is the code sum(d_i * p^i). Every function here has a twin with the
same signature in ``_pykernels``; ``quasilee.kernels`` picks one at import.
All loops release the GIL so callers may split work across threads.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def sumset_into(const cnp.int64_t[::1] a_codes, const cnp.int64_t[:, ::1] h_digits, long p,
                unsigned char[::1] out):
    """Mark out[a + h] = 1 for every a in a_codes, h in the rows of h_digits."""
    cdef Py_ssize_t na = a_codes.shape[0]
    cdef Py_ssize_t m = h_digits.shape[0]
    cdef int D = <int>h_digits.shape[1]
    cdef cnp.int64_t[::1] pw = np.array([p ** i for i in range(D)], dtype=np.int64)
    cdef cnp.int64_t[::1] ad = np.zeros(D, dtype=np.int64)
    cdef Py_ssize_t s, j
    cdef int i
    cdef long a, rest, code
    with nogil:
        for s in range(na):
            a = a_codes[s]
            rest = a
            for i in range(D):
                ad[i] = rest % p
                rest = rest // p
            for j in range(m):
                code = 0
                for i in range(D):
                    code = code + ((ad[i] + h_digits[j, i]) % p) * pw[i]
                out[code] = 1


def bfs_distances(const cnp.int64_t[:, ::1] h_digits, long p, int D):
    """Graph distance from 0 in Cay(Z_p^D, H); -1 marks unreachable vertices."""
    cdef long N = p ** D
    cdef Py_ssize_t m = h_digits.shape[0]
    dist_arr = np.full(N, -1, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    cdef cnp.int64_t[::1] queue = np.zeros(N, dtype=np.int64)
    cdef cnp.int64_t[::1] pw = np.array([p ** i for i in range(D)], dtype=np.int64)
    cdef cnp.int64_t[::1] ud = np.zeros(D, dtype=np.int64)
    cdef long head = 0, tail = 0, u, v, rest
    cdef Py_ssize_t j
    cdef int i
    with nogil:
        dist[0] = 0
        queue[tail] = 0
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            rest = u
            for i in range(D):
                ud[i] = rest % p
                rest = rest // p
            for j in range(m):
                v = 0
                for i in range(D):
                    v = v + ((ud[i] + h_digits[j, i]) % p) * pw[i]
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue[tail] = v
                    tail += 1
    return dist_arr


def lee_layer(const cnp.int64_t[:, ::1] colmul, int n, int D, long p, int w,
              cnp.int64_t[::1] syn, int[:, ::1] pos, int[:, ::1] val):
    """Enumerate all length-n vectors of Lee weight exactly w, lexicographically.

    colmul[j, r*D + d] holds (r * column_j[d]) mod p. Row t of pos/val receives
    the support of the t-th vector (padded with -1 / 0); syn[t] its syndrome code.
    Returns the number of vectors written.
    """
    cdef int h = <int>((p - 1) // 2)
    cdef int* cur = <int*>malloc(n * sizeof(int))
    cdef int* rem = <int*>malloc((n + 1) * sizeof(int))
    cdef long* sd = <long*>malloc((n + 1) * D * sizeof(long))
    cdef long* pw = <long*>malloc(D * sizeof(long))
    cdef int depth, r, lw, i, d, slot
    cdef long code
    cdef Py_ssize_t count = 0
    if cur == NULL or rem == NULL or sd == NULL or pw == NULL:
        free(cur); free(rem); free(sd); free(pw)
        raise MemoryError()
    with nogil:
        pw[0] = 1
        for d in range(1, D):
            pw[d] = pw[d - 1] * p
        for d in range(D):
            sd[d] = 0
        rem[0] = w
        depth = 0
        if n == 0:
            if w == 0:
                syn[0] = 0
                count = 1
        else:
            cur[0] = -1
            while depth >= 0:
                if depth == n:
                    code = 0
                    for d in range(D):
                        code = code + sd[n * D + d] * pw[d]
                    syn[count] = code
                    slot = 0
                    for i in range(n):
                        if cur[i] != 0:
                            pos[count, slot] = i
                            val[count, slot] = cur[i]
                            slot += 1
                    while slot < w:
                        pos[count, slot] = -1
                        val[count, slot] = 0
                        slot += 1
                    count += 1
                    depth -= 1
                    continue
                r = cur[depth] + 1
                while r < p:
                    lw = r if r <= h else <int>(p - r)
                    if lw <= rem[depth] and rem[depth] - lw <= (n - depth - 1) * h:
                        break
                    r += 1
                if r >= p:
                    cur[depth] = -1
                    depth -= 1
                    continue
                cur[depth] = r
                rem[depth + 1] = rem[depth] - lw
                for d in range(D):
                    sd[(depth + 1) * D + d] = (sd[depth * D + d] + colmul[depth, r * D + d]) % p
                depth += 1
                if depth < n:
                    cur[depth] = -1
    free(cur); free(rem); free(sd); free(pw)
    return count


def char_sums(const cnp.int64_t[:, ::1] func, const cnp.int64_t[:, ::1] h_digits, long p,
              double[::1] out_re, double[::1] out_im):
    """out[c] = sum_j exp(2 pi i <func[c], h_j> / p) over the rows h_j."""
    cdef Py_ssize_t C = func.shape[0]
    cdef Py_ssize_t m = h_digits.shape[0]
    cdef int D = <int>func.shape[1]
    cdef double[::1] ct = np.cos(2 * np.pi * np.arange(p) / p)
    cdef double[::1] st = np.sin(2 * np.pi * np.arange(p) / p)
    cdef Py_ssize_t c, j
    cdef int i
    cdef long e
    cdef double re, im
    with nogil:
        for c in range(C):
            re = 0.0
            im = 0.0
            for j in range(m):
                e = 0
                for i in range(D):
                    e = e + func[c, i] * h_digits[j, i]
                e = e % p
                re = re + ct[e]
                im = im + st[e]
            out_re[c] = re
            out_im[c] = im
