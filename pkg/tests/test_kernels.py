"""The compiled and numpy kernels must agree bit-for-bit (floats to 1e-9)."""

import os
import subprocess
import sys

import numpy as np
import pytest

from quasilee import kernels
from quasilee.code import LeeCode, _colmul, layer_count
from quasilee.field import FieldParams
from quasilee.generators import cubic_set, norm_one_set
from quasilee.spectral import character_table
from quasilee.verify import digits, point_codes

BACKENDS = kernels.available_backends()
needs_both = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def inputs(F, H):
    p, D = F.p, 2 * F.k
    return digits(point_codes(H.points), p, D), p, D


@pytest.fixture(params=[(17, 1), (5, 2), (3, 2)], ids=["q17", "q25", "q9"])
def case(request):
    F = FieldParams.create(*request.param)
    H = norm_one_set(F) if F.p < 5 else cubic_set(F)
    return F, H


@needs_both
def test_sumset_parity(case):
    F, H = case
    hd, p, D = inputs(F, H)
    N = p**D
    a = np.arange(0, N, 3)
    outs = [kernels.sumset_bits(a, hd, p, N, impl=m) for m in BACKENDS.values()]
    assert all(np.array_equal(outs[0], o) for o in outs)


@needs_both
def test_bfs_parity(case):
    F, H = case
    hd, p, D = inputs(F, H)
    outs = [kernels.bfs_distances(hd, p, D, impl=m) for m in BACKENDS.values()]
    assert all(np.array_equal(outs[0], o) for o in outs)


@needs_both
def test_char_sum_parity(case):
    F, H = case
    hd, p, D = inputs(F, H)
    func = character_table(F)
    outs = [kernels.char_sums(func, hd, p, impl=m) for m in BACKENDS.values()]
    for re, im in outs[1:]:
        assert np.allclose(re, outs[0][0], atol=1e-9) and np.allclose(im, outs[0][1], atol=1e-9)


@needs_both
@pytest.mark.parametrize("w", [0, 1, 2, 3])
def test_layer_parity(w):
    code = LeeCode.from_generator_set(cubic_set(FieldParams.create(13)))
    pcm = code.pcm
    cnt = layer_count(pcm.cols, pcm.p, w)
    outs = [kernels.lee_layer(_colmul(pcm), pcm.cols, pcm.rows, pcm.p, w, cnt, impl=m) for m in BACKENDS.values()]
    for o in outs[1:]:
        assert all(np.array_equal(x, y) for x, y in zip(outs[0], o))


@pytest.mark.parametrize("threads", [1, 2, 5])
def test_threads_do_not_change_results(threads, f17):
    H = cubic_set(f17)
    hd, p, D = inputs(f17, H)
    func = character_table(f17)
    kernels.set_threads(1)
    ref = kernels.sumset_bits(np.arange(289), hd, p, 289), kernels.char_sums(func, hd, p)
    kernels.set_threads(threads)
    try:
        got = kernels.sumset_bits(np.arange(289), hd, p, 289), kernels.char_sums(func, hd, p)
    finally:
        kernels.set_threads(None)
    assert np.array_equal(ref[0], got[0])
    assert np.array_equal(ref[1][0], got[1][0])


def test_fallback_selected_by_env():
    env = dict(os.environ, QUASILEE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from quasilee import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
