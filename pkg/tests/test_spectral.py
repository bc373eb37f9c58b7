import math

import numpy as np
import pytest

from quasilee.errors import CapExceeded, DegenerateSpectrum
from quasilee.field import FieldParams
from quasilee.generators import (
    Family,
    GeneratorSet,
    Ordering,
    Point,
    cubic_set,
    hyperbola_set,
    li_norm_set,
    norm_one_set,
)
from quasilee.spectral import (
    bfs_diameter,
    character_eigenvalue,
    chung_bound,
    dense_spectrum,
    full_spectrum,
    trace_functionals,
    unreached_count,
)


@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_character_sums_match_dense_eigenvalues(q):
    F = FieldParams.create(q)
    for H in (cubic_set(F), hyperbola_set(F), norm_one_set(F)):
        r = full_spectrum(H)
        assert np.abs(np.sort(r.eigenvalues) - dense_spectrum(H)).max() < 1e-6


def test_dense_oracle_extension_field():
    F = FieldParams.create(3, 2)
    H = norm_one_set(F)
    assert np.abs(np.sort(full_spectrum(H).eigenvalues) - dense_spectrum(H)).max() < 1e-6


def test_eigenvalue_direct_field_arithmetic(f25):
    H = cubic_set(f25)
    r = full_spectrum(H)
    q = f25.q
    for code in (0, 1, 7, 26, 300, 624):
        s, t = f25.from_code(code % q), f25.from_code(code // q)
        assert abs(character_eigenvalue(H, s, t) - r.eigenvalues[code]) < 1e-9


def test_trace_functionals_nondegenerate(f25):
    w = trace_functionals(f25)
    assert w.shape == (25, 2) and len({tuple(x) for x in w}) == 25


@pytest.mark.parametrize("q", [17, 25])
def test_spectral_identities(q):
    F = FieldParams.create(5, 2) if q == 25 else FieldParams.create(q)
    for H in (cubic_set(F), hyperbola_set(F), li_norm_set(F)):
        r = full_spectrum(H)
        N, d = r.N, r.degree
        assert r.eigenvalues[0] == d
        assert abs(r.sum_eig) <= 1e-6 * N
        assert abs(r.sum_eig_sq - N * d) <= 1e-6 * N * d
        assert r.imag_residue < 1e-9
        assert r.lambda_max <= 2 * math.sqrt(q) + 1e-9


@pytest.mark.parametrize("q", [13, 17, 25])
def test_li_graph_ramanujan(q):
    F = FieldParams.create(5, 2) if q == 25 else FieldParams.create(q)
    r = full_spectrum(li_norm_set(F))
    assert r.is_ramanujan and r.degree == q + 1


def test_cubic_spectrum_at_q13_exceeds_2sqrtq():
    # the character sum runs over F_q^* (one term short of a complete sum), so
    # only 2 sqrt(q) + 1 is guaranteed; at q = 13 the gap is visible
    r = full_spectrum(cubic_set(FieldParams.create(13)))
    assert 2 * math.sqrt(13) < r.lambda_max <= 2 * math.sqrt(13) + 1


@pytest.mark.parametrize("pk", [(17, 1), (19, 1), (23, 1), (5, 2)])
def test_diameter_three(pk):
    H = cubic_set(FieldParams.create(*pk))
    assert bfs_diameter(H) == 3
    r = full_spectrum(H)
    assert r.bfs_diameter == 3 <= r.chung


def test_chung_bound_rounding():
    assert chung_bound(1.0, 4, 17) == (2, True)  # log 16 / log 4 = 2 exactly
    assert chung_bound(1.0, 4, 18) == (3, False)
    with pytest.raises(DegenerateSpectrum):
        chung_bound(4.0, 4, 100)


def test_disconnected_diameter():
    F = FieldParams.create(5)
    one = Point(F.one, F.zero)
    H = GeneratorSet(Family.CUBIC, F, frozenset({one, -one}), (one,), Ordering.LEX)
    assert bfs_diameter(H) == math.inf and unreached_count(H) == 20


def test_spectrum_cap(f17):
    with pytest.raises(CapExceeded):
        full_spectrum(cubic_set(f17), cap=100)


def test_report_outputs(f17):
    r = full_spectrum(cubic_set(f17))
    d = r.to_dict()
    assert d["bfs_diameter"] == {"value": 3, "provenance": "enumerated", "unreached": 0}
    assert sum(b["count"] for b in d["histogram"]) == r.N
    lines = r.to_csv().splitlines()
    assert lines[0] == "s_index,t_index,eigenvalue" and len(lines) == r.N + 1
