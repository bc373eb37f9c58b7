"""The p-ary code C(Gamma, H): parity-check matrix, Lee metric, syndrome decoding."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import CapExceeded, SpanningError
from .field import FieldParams
from .generators import GeneratorSet, Point

DEFAULT_CAP = 1 << 22
LAYER_CAP = 1 << 26


@dataclass(frozen=True)
class ParityCheckMatrix:
    p: int
    matrix: np.ndarray  # rows x n, residues in [0, p-1]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.p
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def gamma_size(self) -> int:
        return self.p**self.rows

    def column_codes(self) -> np.ndarray:
        pw = self.p ** np.arange(self.rows, dtype=np.int64)
        return pw @ self.matrix


def flatten(pt: Point) -> tuple[int, ...]:
    return pt.flatten()


def build_parity_check(reps: Sequence[Point]) -> ParityCheckMatrix:
    """Columns are flatten(beta_j) in the given order."""
    if not reps:
        raise ValueError("need at least one representative")
    p = reps[0].first.field.p
    return ParityCheckMatrix(p, np.array([flatten(b) for b in reps], dtype=np.int64).T)


# --------------------------------------------------------------------------
# Lee metric


def lee_weight(v, p: int) -> int:
    v = np.asarray(v, dtype=np.int64) % p
    return int(np.minimum(v, p - v).sum())


def lee_distance(u, v, p: int) -> int:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return lee_weight(u - v, p)


def syndrome(v, pcm: ParityCheckMatrix) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if v.shape[-1] != pcm.cols:
        raise ValueError(f"vector length {v.shape[-1]} != code length {pcm.cols}")
    return (pcm.matrix @ v.T).T % pcm.p


def syndrome_code(s, p: int) -> int:
    return int(sum(int(x) * p**i for i, x in enumerate(s)))


# --------------------------------------------------------------------------
# linear algebra over F_p


def rref(matrix, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and the pivot columns (leftmost-first)."""
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod_p(matrix, p: int) -> int:
    return len(rref(matrix, p)[1])


def kernel_basis(pcm: ParityCheckMatrix) -> np.ndarray:
    """Basis of {c : H c = 0}, one row per non-pivot column, from the RREF."""
    red, pivots = rref(pcm.matrix, pcm.p)
    n = pcm.cols
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-red[r, f]) % pcm.p
    return basis


# --------------------------------------------------------------------------
# the code object


@dataclass(frozen=True)
class LeeCode:
    pcm: ParityCheckMatrix
    gen: np.ndarray
    params: FieldParams | None = None
    genset: GeneratorSet | None = field(default=None, repr=False)

    @classmethod
    def from_generator_set(cls, H: GeneratorSet) -> "LeeCode":
        pcm = build_parity_check(H.reps)
        return cls(pcm, kernel_basis(pcm), H.params, H)

    @classmethod
    def from_matrix(cls, matrix, p: int) -> "LeeCode":
        pcm = ParityCheckMatrix(p, np.atleast_2d(np.asarray(matrix, dtype=np.int64)))
        return cls(pcm, kernel_basis(pcm))

    @property
    def p(self) -> int:
        return self.pcm.p

    @property
    def n(self) -> int:
        return self.pcm.cols

    @property
    def rank(self) -> int:
        return self.n - self.dimension

    @property
    def dimension(self) -> int:
        return self.gen.shape[0]

    def reps(self) -> tuple[Point, ...]:
        if self.genset is None:
            raise ValueError("code was not built from a generator set")
        return self.genset.reps

    def metadata(self) -> dict:
        out = {
            "p": self.p,
            "n": self.n,
            "rows": self.pcm.rows,
            "dimension": self.dimension,
            "rank": self.rank,
        }
        if self.params is not None:
            out["field"] = self.params.to_dict()
        if self.genset is not None:
            out["family"] = self.genset.family.value
            out["ordering"] = self.genset.ordering.value
            if self.genset.delta is not None:
                out["delta"] = list(self.genset.delta.coeffs)
            if self.genset.form is not None:
                out["form"] = self.genset.form.to_dict()
        return out


# --------------------------------------------------------------------------
# weight-layered enumeration


def layer_count(n: int, p: int, w: int) -> int:
    """Number of vectors in F_p^n of Lee weight exactly w."""
    h = (p - 1) // 2
    per = [1] + [2] * h
    poly = [1]
    for _ in range(n):
        nxt = [0] * min(len(poly) + h, w + 1)
        for i, a in enumerate(poly):
            if a:
                for j, b in enumerate(per):
                    if i + j <= w:
                        nxt[i + j] += a * b
        poly = nxt
    return poly[w] if w < len(poly) else 0


def _colmul(pcm: ParityCheckMatrix) -> np.ndarray:
    p = pcm.p
    cols = pcm.matrix.T  # n x D
    r = np.arange(p, dtype=np.int64)
    return ((r[None, :, None] * cols[:, None, :]) % p).reshape(pcm.cols, p * pcm.rows)


def enumerate_layer(pcm: ParityCheckMatrix, w: int, *, impl=None, cap: int = LAYER_CAP):
    """All vectors of Lee weight w in lexicographic order, as (syndrome codes, pos, val).

    Row t describes the t-th vector sparsely: positions ``pos[t]`` (padded
    with -1) carry residues ``val[t]``.
    """
    count = layer_count(pcm.cols, pcm.p, w)
    if count > cap:
        raise CapExceeded(f"weight-{w} layer has {count} vectors (cap {cap})")
    return kernels.lee_layer(_colmul(pcm), pcm.cols, pcm.rows, pcm.p, w, count, impl=impl)


def sparse_to_dense(pos, val, n: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    for i, r in zip(pos, val):
        if i >= 0:
            v[i] = r
    return v


@dataclass(frozen=True)
class CosetTable:
    """Minimum-Lee-weight coset leader for every syndrome (lexicographic ties)."""

    pcm: ParityCheckMatrix
    weight: np.ndarray  # per syndrome code
    row: np.ndarray  # index into layers[weight]
    layers: tuple  # per weight: (pos, val) arrays of the selected leaders

    @property
    def max_weight(self) -> int:
        return int(self.weight.max())

    def leader(self, s) -> np.ndarray:
        code = s if isinstance(s, (int, np.integer)) else syndrome_code(s, self.pcm.p)
        w = int(self.weight[code])
        if w == 0:
            return np.zeros(self.pcm.cols, dtype=np.int64)
        pos, val = self.layers[w]
        i = int(self.row[code])
        return sparse_to_dense(pos[i], val[i], self.pcm.cols)


def build_coset_table(code: LeeCode | ParityCheckMatrix, cap: int = DEFAULT_CAP, *, impl=None) -> CosetTable:
    pcm = code.pcm if isinstance(code, LeeCode) else code
    N = pcm.gamma_size
    if N > cap:
        raise CapExceeded(f"{N} syndromes exceed the coset-table cap {cap}")
    weight = np.full(N, -1, dtype=np.int32)
    row = np.zeros(N, dtype=np.int64)
    weight[0] = 0
    layers = [(np.zeros((1, 0), np.int32), np.zeros((1, 0), np.int32))]
    filled = 1
    max_w = pcm.cols * ((pcm.p - 1) // 2)
    w = 0
    while filled < N:
        w += 1
        if w > max_w:
            raise SpanningError(f"only {filled} of {N} syndromes are reachable")
        syn, pos, val = enumerate_layer(pcm, w, impl=impl)
        uniq, first = np.unique(syn, return_index=True)
        new = weight[uniq] < 0
        targets, idx = uniq[new], first[new]
        order = np.argsort(idx)
        targets, idx = targets[order], idx[order]
        weight[targets] = w
        row[targets] = np.arange(len(idx))
        layers.append((pos[idx], val[idx]))
        filled += len(targets)
    for a in (weight, row):
        a.setflags(write=False)
    return CosetTable(pcm, weight, row, tuple(layers))


def syndrome_decode(received, table: CosetTable) -> tuple[np.ndarray, np.ndarray]:
    """(codeword, error) with error the coset leader of the received syndrome."""
    r = np.asarray(received, dtype=np.int64) % table.pcm.p
    e = table.leader(syndrome_code(syndrome(r, table.pcm), table.pcm.p))
    return (r - e) % table.pcm.p, e


# --------------------------------------------------------------------------
# export formats


def matrix_text(m) -> str:
    return "".join(" ".join(str(int(x)) for x in r) + "\n" for r in np.atleast_2d(m))


def matrix_csv(m) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(np.atleast_2d(m).tolist())
    return buf.getvalue()


def matrix_json(m, p: int, k: int | None = None) -> str:
    m = np.atleast_2d(m)
    return json.dumps({"p": p, "k": k, "n": int(m.shape[1]), "rows": m.tolist()})


def format_matrix(m, fmt: str, p: int, k: int | None = None) -> str:
    if fmt == "text":
        return matrix_text(m)
    if fmt == "csv":
        return matrix_csv(m)
    if fmt == "json":
        return matrix_json(m, p, k) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
