"""Backend selection and thread-splitting wrappers for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy fallback ``_pykernels`` takes over. Set ``QUASILEE_PURE_PYTHON=1`` to
force the fallback. Results never depend on the backend or thread count.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels

log = logging.getLogger(__name__)

try:
    if os.environ.get("QUASILEE_PURE_PYTHON"):
        raise ImportError("fallback forced by QUASILEE_PURE_PYTHON")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError as exc:  # pragma: no cover - depends on the build
    log.debug("compiled kernels unavailable (%s); using numpy fallback", exc)
    _impl = _pykernels
    BACKEND = "python"

_threads = os.cpu_count() or 1


def set_threads(n: int | None) -> None:
    global _threads
    _threads = max(1, int(n)) if n else (os.cpu_count() or 1)


def get_threads() -> int:
    return _threads


def available_backends() -> dict:
    out = {"python": _pykernels}
    if BACKEND == "cython":
        out["cython"] = _impl
    else:
        try:
            from . import _ckernels

            out["cython"] = _ckernels
        except ImportError:
            pass
    return out


def _chunks(total: int, parts: int):
    parts = max(1, min(parts, total))
    bounds = np.linspace(0, total, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def sumset_bits(a_codes, h_digits, p: int, size: int, impl=None) -> np.ndarray:
    """Bitset of {a + h}; worker results are OR-merged (set-bit writes are idempotent)."""
    impl = impl or _impl
    a_codes = np.ascontiguousarray(a_codes, dtype=np.int64)
    h_digits = np.ascontiguousarray(h_digits, dtype=np.int64)
    out = np.zeros(size, dtype=np.uint8)
    spans = _chunks(len(a_codes), _threads if impl is not _pykernels else 1)
    if len(spans) <= 1:
        impl.sumset_into(a_codes, h_digits, p, out)
        return out.astype(bool)
    with ThreadPoolExecutor(len(spans)) as pool:
        list(pool.map(lambda s: impl.sumset_into(a_codes[s[0] : s[1]], h_digits, p, out), spans))
    return out.astype(bool)


def bfs_distances(h_digits, p: int, D: int, impl=None) -> np.ndarray:
    impl = impl or _impl
    return impl.bfs_distances(np.ascontiguousarray(h_digits, dtype=np.int64), p, D)


def lee_layer(colmul, n: int, D: int, p: int, w: int, count: int, impl=None):
    """All ``count`` vectors of exact Lee weight ``w``: (syndromes, positions, values)."""
    impl = impl or _impl
    width = max(w, 1)
    syn = np.zeros(max(count, 1), dtype=np.int64)
    pos = np.zeros((max(count, 1), width), dtype=np.int32)
    val = np.zeros((max(count, 1), width), dtype=np.int32)
    got = impl.lee_layer(np.ascontiguousarray(colmul, dtype=np.int64), n, D, p, w, syn, pos, val)
    if got != count:
        raise AssertionError(f"lee_layer wrote {got} vectors, expected {count}")
    return syn[:count], pos[:count, :w], val[:count, :w]


def char_sums(func, h_digits, p: int, impl=None):
    """Real and imaginary parts of sum_h exp(2 pi i <f, h>/p) for each row f."""
    impl = impl or _impl
    func = np.ascontiguousarray(func, dtype=np.int64)
    h_digits = np.ascontiguousarray(h_digits, dtype=np.int64)
    re = np.zeros(func.shape[0])
    im = np.zeros(func.shape[0])
    spans = _chunks(func.shape[0], _threads if impl is not _pykernels else 1)

    def run(span):
        a, b = span
        r = np.zeros(b - a)
        i = np.zeros(b - a)
        impl.char_sums(func[a:b], h_digits, p, r, i)
        re[a:b] = r
        im[a:b] = i

    if len(spans) <= 1:
        for s in spans:
            run(s)
    else:
        with ThreadPoolExecutor(len(spans)) as pool:
            list(pool.map(run, spans))
    return re, im
