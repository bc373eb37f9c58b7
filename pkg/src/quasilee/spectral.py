"""Spectra of abelian Cayley graphs Cay(F_q^2, H) via additive character sums.

The characters of Gamma = F_q^2 are psi_(s,t)(x, y) = exp(2 pi i Tr(sx + ty)/p).
Since the trace is F_p-linear, Tr(s*x) is a dot product between the
coefficients of x and the vector (Tr(s), Tr(s*alpha), ...); the kernels work on
those integer vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapExceeded, DegenerateSpectrum
from .field import FieldElement, FieldParams, trace_to_prime
from .generators import GeneratorSet
from .verify import digits, point_codes

DEFAULT_CAP = 1 << 22
RAMANUJAN_TOL = 1e-9
TIE_TOL = 1e-12


def trace_functionals(params: FieldParams) -> np.ndarray:
    """Row s (by code) holds Tr(s * alpha^i) for i < k."""
    basis = [params.from_code(params.p**i) for i in range(params.k)]
    out = np.zeros((params.q, params.k), dtype=np.int64)
    for s in params.elements():
        out[s.code] = [trace_to_prime(s * b) for b in basis]
    if len({tuple(r) for r in out}) != params.q:
        raise AssertionError("trace pairing is degenerate")
    return out


def character_table(params: FieldParams) -> np.ndarray:
    """Functional for each character, indexed by code(s) + q * code(t)."""
    w = trace_functionals(params)
    q = params.q
    s_idx = np.tile(np.arange(q), q)
    t_idx = np.repeat(np.arange(q), q)
    return np.hstack([w[s_idx], w[t_idx]])


def character_eigenvalue(H: GeneratorSet, s: FieldElement, t: FieldElement) -> float:
    """sum over (x, y) in H of cos(2 pi Tr(s x + t y) / p), evaluated with field arithmetic."""
    p = H.params.p
    re = im = 0.0
    for pt in H.points:
        e = trace_to_prime(s * pt.first + t * pt.second)
        re += math.cos(2 * math.pi * e / p)
        im += math.sin(2 * math.pi * e / p)
    if abs(im) > 1e-9 * max(1, len(H)):
        raise AssertionError(f"non-real eigenvalue at ({s}, {t}): imaginary part {im}")
    return re


def chung_bound(lambda_max: float, d: int, N: int) -> tuple[int, bool]:
    """ceil(log(N-1) / log(d/lambda)); quotients within 1e-12 of an integer round down (flagged)."""
    if lambda_max >= d:
        raise DegenerateSpectrum(f"lambda_max={lambda_max} >= d={d}")
    if N <= 2:
        return 1, False
    if lambda_max <= 0:
        return 1, False
    x = math.log(N - 1) / math.log(d / lambda_max)
    r = round(x)
    if abs(x - r) <= TIE_TOL:
        return int(r), True
    return math.ceil(x), False


def chung_diameter_bound(report: "SpectralReport") -> int:
    return chung_bound(report.lambda_max, report.degree, report.N)[0]


def bfs_distances(H: GeneratorSet) -> np.ndarray:
    p, D = H.params.p, 2 * H.params.k
    return kernels.bfs_distances(digits(point_codes(H.points), p, D), p, D)


def bfs_diameter(H: GeneratorSet) -> int | float:
    """Eccentricity of 0, which is the diameter by vertex-transitivity; inf if disconnected."""
    dist = bfs_distances(H)
    if (dist < 0).any():
        return math.inf
    return int(dist.max())


def unreached_count(H: GeneratorSet) -> int:
    return int((bfs_distances(H) < 0).sum())


@dataclass
class SpectralReport:
    q: int
    degree: int
    N: int
    eigenvalues: np.ndarray = field(repr=False)  # indexed by code(s) + q*code(t)
    lambda_max: float
    imag_residue: float
    sum_eig: float
    sum_eig_sq: float
    chung: int
    chung_tie: bool
    bfs_diameter: int | float
    unreached: int

    @property
    def ramanujan_bound(self) -> float:
        return 2 * math.sqrt(self.degree - 1)

    @property
    def weil_bound(self) -> float:
        return 2 * math.sqrt(self.q)

    @property
    def is_ramanujan(self) -> bool:
        return self.lambda_max <= self.ramanujan_bound + RAMANUJAN_TOL

    @property
    def within_weil(self) -> bool:
        return self.lambda_max <= self.weil_bound + RAMANUJAN_TOL

    @property
    def almost_ratio(self) -> float:
        return self.lambda_max / self.ramanujan_bound

    def histogram(self) -> list[dict]:
        width = 0.1 * math.sqrt(self.q)
        lo = math.floor(self.eigenvalues.min() / width)
        hi = math.floor(self.eigenvalues.max() / width) + 1
        edges = np.arange(lo, hi + 1) * width
        counts, _ = np.histogram(self.eigenvalues, bins=edges)
        return [
            {"lo": round(float(a), 12), "hi": round(float(b), 12), "count": int(c)}
            for a, b, c in zip(edges[:-1], edges[1:], counts)
            if c
        ]

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "degree": self.degree,
            "N": self.N,
            "lambda_max": float(f"{self.lambda_max:.12g}"),
            "ramanujan_bound": float(f"{self.ramanujan_bound:.12g}"),
            "weil_bound": float(f"{self.weil_bound:.12g}"),
            "is_ramanujan": self.is_ramanujan,
            "within_weil": self.within_weil,
            "almost_ratio": float(f"{self.almost_ratio:.12g}"),
            "chung_bound": {"value": self.chung, "provenance": "formula", "tie": self.chung_tie},
            "bfs_diameter": {
                "value": self.bfs_diameter if self.bfs_diameter != math.inf else "inf",
                "provenance": "enumerated",
                "unreached": self.unreached,
            },
            "sum_eigenvalues": self.sum_eig,
            "sum_eigenvalues_sq": self.sum_eig_sq,
            "histogram": self.histogram(),
        }

    def to_csv(self) -> str:
        q = self.q
        lines = ["s_index,t_index,eigenvalue"]
        for c, v in enumerate(self.eigenvalues):
            lines.append(f"{c % q},{c // q},{v:.12g}")
        return "\n".join(lines) + "\n"


def spectrum_values(H: GeneratorSet, *, impl=None) -> tuple[np.ndarray, np.ndarray]:
    params = H.params
    func = character_table(params)
    hd = digits(point_codes(H.points), params.p, 2 * params.k)
    return kernels.char_sums(func, hd, params.p, impl=impl)


def full_spectrum(H: GeneratorSet, cap: int = DEFAULT_CAP, *, impl=None) -> SpectralReport:
    params = H.params
    q = params.q
    N = q * q
    if N > cap:
        raise CapExceeded(f"{N} characters exceed the spectrum cap {cap}")
    d = len(H)
    re, im = spectrum_values(H, impl=impl)
    if re[0] != d:
        raise AssertionError(f"trivial eigenvalue {re[0]} != degree {d}")
    imag = float(np.abs(im).max())
    if imag > 1e-9 * d:
        raise AssertionError(f"imaginary residue {imag} too large")
    if (re[1:] <= -d + 1e-9).any():
        raise AssertionError("-d is an eigenvalue, but an odd-order group has no bipartite Cayley graph")
    lam = float(np.abs(re[1:]).max())
    dist = bfs_distances(H)
    unreached = int((dist < 0).sum())
    diameter = math.inf if unreached else int(dist.max())
    if lam >= d:
        chung, tie = -1, False
    else:
        chung, tie = chung_bound(lam, d, N)
    return SpectralReport(
        q=q,
        degree=d,
        N=N,
        eigenvalues=re,
        lambda_max=lam,
        imag_residue=imag,
        sum_eig=float(re.sum()),
        sum_eig_sq=float((re * re).sum()),
        chung=chung,
        chung_tie=tie,
        bfs_diameter=diameter,
        unreached=unreached,
    )


def adjacency_matrix(H: GeneratorSet) -> np.ndarray:
    """Dense 0/1 adjacency of Cay(Gamma, H), built from element codes."""
    p, D = H.params.p, 2 * H.params.k
    N = p**D
    verts = digits(np.arange(N), p, D)
    pw = p ** np.arange(D, dtype=np.int64)
    A = np.zeros((N, N), dtype=np.float64)
    for h in point_codes(H.points):
        nb = ((verts + digits([h], p, D)[0]) % p) @ pw
        A[np.arange(N), nb] = 1.0
    return A


def dense_spectrum(H: GeneratorSet) -> np.ndarray:
    """Sorted eigenvalues of the dense adjacency matrix (numerical oracle)."""
    return np.sort(np.linalg.eigvalsh(adjacency_matrix(H)))
