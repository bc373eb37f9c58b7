"""Time the compiled kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--q 49] [--repeat 3]

Every kernel's outputs are compared between backends before timing is reported.
"""

import argparse
import time

import numpy as np

from quasilee import kernels
from quasilee.code import LeeCode, _colmul, layer_count
from quasilee.field import FieldParams
from quasilee.generators import cubic_set
from quasilee.spectral import character_table
from quasilee.verify import digits, point_codes


def field_for(q):
    for p in range(5, q + 1):
        k = 1
        while p**k < q:
            k += 1
        if p**k == q:
            return FieldParams.create(p, k)
    raise SystemExit(f"q={q} is not an odd prime power >= 5")


def timed(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if a.dtype.kind == "f":
        return np.allclose(a, b, atol=1e-9)
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=121)
    ap.add_argument("--layer-q", type=int, default=23, help="field for the Lee-layer kernel")
    ap.add_argument("--weight", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the numpy fallback is available")

    F = field_for(args.q)
    H = cubic_set(F)
    p, D = F.p, 2 * F.k
    N = p**D
    hd = digits(point_codes(H.points), p, D)
    a_codes = np.flatnonzero(kernels.sumset_bits([0], hd, p, N))
    a_codes = np.flatnonzero(kernels.sumset_bits(a_codes, hd, p, N))
    func = character_table(F)

    code = LeeCode.from_generator_set(cubic_set(field_for(args.layer_q)))
    pcm = code.pcm
    cm = _colmul(pcm)
    cnt = layer_count(pcm.cols, pcm.p, args.weight)

    cases = {
        f"sumset  (|A|={len(a_codes)}, q={F.q})": lambda impl: kernels.sumset_bits(a_codes, hd, p, N, impl=impl),
        f"bfs     (N={N})": lambda impl: kernels.bfs_distances(hd, p, D, impl=impl),
        f"layer   (n={pcm.cols}, w={args.weight}, {cnt} vectors)": lambda impl: kernels.lee_layer(
            cm, pcm.cols, pcm.rows, pcm.p, args.weight, cnt, impl=impl
        ),
        f"charsum (N={N}, d={len(H)})": lambda impl: kernels.char_sums(func, hd, p, impl=impl),
    }
    print(f"threads={kernels.get_threads()} default backend={kernels.BACKEND}")
    print(f"{'kernel':44} " + " ".join(f"{b:>10}" for b in backends) + "   speedup  match")
    for name, fn in cases.items():
        times, outs = {}, {}
        for b, impl in backends.items():
            times[b], outs[b] = timed(lambda: fn(impl), args.repeat)
        ok = all(same(outs["python"], o) for o in outs.values())
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        cols = " ".join(f"{times[b]:10.4f}" for b in backends)
        print(f"{name:44} {cols}   {speed:7.1f}x  {'yes' if ok else 'NO'}")


if __name__ == "__main__":
    main()
