"""Pure-Python/numpy fallback for the compiled kernels in ``_ckernels``.

Signatures and output layouts match the Cython module exactly.
"""

import numpy as np

_CHUNK = 1 << 16


def _powers(p, D):
    return np.array([p**i for i in range(D)], dtype=np.int64)


def _digits(codes, p, D):
    return (np.asarray(codes, dtype=np.int64)[:, None] // _powers(p, D)[None, :]) % p


def sumset_into(a_codes, h_digits, p, out):
    D = h_digits.shape[1]
    pw = _powers(p, D)
    h = np.asarray(h_digits, dtype=np.int64)
    a_codes = np.asarray(a_codes, dtype=np.int64)
    step = max(1, _CHUNK // max(1, h.shape[0]))
    for s in range(0, len(a_codes), step):
        ad = _digits(a_codes[s : s + step], p, D)
        sums = ((ad[:, None, :] + h[None, :, :]) % p) @ pw
        out[sums.ravel()] = 1


def bfs_distances(h_digits, p, D):
    N = p**D
    dist = np.full(N, -1, dtype=np.int32)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    pw = _powers(p, D)
    h = np.asarray(h_digits, dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        fd = _digits(frontier, p, D)
        nb = np.unique((((fd[:, None, :] + h[None, :, :]) % p) @ pw).ravel())
        nb = nb[dist[nb] < 0]
        dist[nb] = level
        frontier = nb
    return dist


def _layer_vectors(n, p, w):
    h = (p - 1) // 2
    cur = [0] * n

    def rec(i, rem):
        if i == n:
            yield tuple(cur)
            return
        for r in range(p):
            lw = r if r <= h else p - r
            if lw <= rem and rem - lw <= (n - i - 1) * h:
                cur[i] = r
                yield from rec(i + 1, rem - lw)
        cur[i] = 0

    if n == 0:
        if w == 0:
            yield ()
        return
    yield from rec(0, w)


def lee_layer(colmul, n, D, p, w, syn, pos, val):
    pw = _powers(p, D)
    count = 0
    for vec in _layer_vectors(n, p, w):
        digits = np.zeros(D, dtype=np.int64)
        slot = 0
        for i, r in enumerate(vec):
            if r:
                digits += colmul[i, r * D : (r + 1) * D]
                pos[count, slot] = i
                val[count, slot] = r
                slot += 1
        pos[count, slot:w] = -1
        val[count, slot:w] = 0
        syn[count] = int(((digits % p) * pw).sum())
        count += 1
    return count


def char_sums(func, h_digits, p, out_re, out_im):
    ang = 2 * np.pi * np.arange(p) / p
    ct, st = np.cos(ang), np.sin(ang)
    ht = np.asarray(h_digits, dtype=np.int64).T
    step = max(1, _CHUNK // max(1, ht.shape[1]))
    for s in range(0, func.shape[0], step):
        e = (np.asarray(func[s : s + step], dtype=np.int64) @ ht) % p
        out_re[s : s + step] = ct[e].sum(axis=1)
        out_im[s : s + step] = st[e].sum(axis=1)
