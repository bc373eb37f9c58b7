import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasilee.errors import FieldError
from quasilee.field import (
    FieldParams,
    TowerElement,
    find_irreducible,
    find_primitive,
    is_irreducible,
    is_square,
    norm_by_power,
    norm_tower,
    parse_polynomial,
    smallest_nonsquare,
    sqrt,
    tower_primitive,
    trace_to_prime,
)

FIELDS = [(5, 1), (17, 1), (5, 2), (7, 2), (3, 3), (3, 4), (11, 2)]


@pytest.fixture(scope="module", params=FIELDS, ids=lambda pk: f"{pk[0]}^{pk[1]}")
def F(request):
    return FieldParams.create(*request.param)


def test_find_irreducible_matches_known_choice():
    assert find_irreducible(5, 2) == (2, 0, 1)
    assert find_irreducible(7, 1) == (0, 1)


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (3, 4), (5, 3), (7, 2)])
def test_irreducible_against_root_free_brute_force(p, k):
    # brute force: a reducible poly of degree <= 3 has a root; degree 4 may
    # split into two quadratics, so compare against explicit products there
    f = find_irreducible(p, k)
    assert is_irreducible(f, p)
    if k == 4:
        quads = [(a, b, 1) for a in range(p) for b in range(p)]
        prods = set()
        for u in quads:
            for v in quads:
                prod = [0] * 5
                for i, x in enumerate(u):
                    for j, y in enumerate(v):
                        prod[i + j] = (prod[i + j] + x * y) % p
                prods.add(tuple(prod))
        assert tuple(f) not in prods


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        FieldParams.create(5, 2, modulus=[-1, 0, 1])


@pytest.mark.parametrize("bad", [1, 4, 15, 2])
def test_bad_prime_rejected(bad):
    with pytest.raises(FieldError):
        FieldParams.create(bad)


def test_non_primitive_override_rejected():
    with pytest.raises(FieldError):
        FieldParams.create(17, primitive=[2])  # 2^8 = 1 mod 17


def test_parse_mini_syntax():
    assert parse_polynomial("x2-2", 5) == [3, 0, 1]
    assert parse_polynomial("3+4s", 5) == [3, 4]
    assert parse_polynomial("x^3+x+2", 7) == [2, 1, 0, 1]
    with pytest.raises(FieldError):
        parse_polynomial("", 5)


def test_q25_field_overrides(f25):
    g = f25.generator
    assert g.coeffs == (3, 4)
    assert f25.modulus == (3, 0, 1)
    assert find_primitive(f25, g) == g


def test_primitive_generates(F):
    g = F.generator
    seen = set()
    x = F.one
    for _ in range(F.q - 1):
        seen.add(x.code)
        x = x * g
    assert len(seen) == F.q - 1 and x == F.one


def test_axioms_exhaustive_small():
    F = FieldParams.create(3, 2)
    els = list(F.elements())
    for a in els:
        assert a + F.zero == a and a * F.one == a and a + (-a) == F.zero
        if not a.is_zero():
            assert a * a.inverse() == F.one
        for b in els:
            assert a + b == b + a and a * b == b * a
            for c in els:
                assert a * (b + c) == a * b + a * c
                assert (a * b) * c == a * (b * c)


def test_randomized_field_identities_seeded():
    """At least 10^4 seeded cases of the ring axioms and trace linearity."""
    rng = random.Random(12345)
    pool = [FieldParams.create(p, k) for p, k in FIELDS]
    for i in range(10_000):
        F = pool[i % len(pool)]
        a, b, c = (F.from_code(rng.randrange(F.q)) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert trace_to_prime(a + b) == (trace_to_prime(a) + trace_to_prime(b)) % F.p
        lam = rng.randrange(F.p)
        assert trace_to_prime(lam * a) == lam * trace_to_prime(a) % F.p
        assert trace_to_prime(a**F.p) == trace_to_prime(a)
        if not a.is_zero():
            assert a ** (F.q - 1) == F.one
            assert (a / a) == F.one


def test_zero_inverse_raises(F):
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()


def test_trace_is_onto_and_balanced(F):
    counts = [0] * F.p
    for a in F.elements():
        counts[trace_to_prime(a)] += 1
    assert counts == [F.q // F.p] * F.p


def test_squares_and_sqrt(F):
    squares = {(a * a).code for a in F.nonzero()}
    assert len(squares) == (F.q - 1) // 2
    for a in F.nonzero():
        assert is_square(a) == (a.code in squares)
        r = sqrt(a)
        if a.code in squares:
            assert r * r == a and r.code <= (-r).code
        else:
            assert r is None
    d = smallest_nonsquare(F)
    assert not is_square(d)
    assert all(is_square(x) for x in F.nonzero() if x.code < d.code)


def test_norm_two_ways_random():
    rng = random.Random(99)
    for F in (FieldParams.create(13), FieldParams.create(5, 2), FieldParams.create(3, 3)):
        d = F.nonsquare
        for _ in range(300):
            z = TowerElement(F.from_code(rng.randrange(F.q)), F.from_code(rng.randrange(F.q)), d)
            assert norm_tower(z) == norm_by_power(z)
            w = TowerElement(F.from_code(rng.randrange(F.q)), F.from_code(rng.randrange(F.q)), d)
            assert norm_by_power(z * w) == norm_by_power(z) * norm_by_power(w)


def test_tower_primitive_order():
    F = FieldParams.create(7)
    u = tower_primitive(F, F.nonsquare)
    one = TowerElement(F.one, F.zero, F.nonsquare)
    assert u ** 48 == one and u ** 24 != one and u ** 16 != one


def test_tower_rejects_square_delta():
    F = FieldParams.create(7)
    with pytest.raises(FieldError):
        TowerElement(F.one, F.zero, F.element(2))


def test_descriptor_roundtrip(f25):
    d = f25.to_dict()
    again = FieldParams.create(d["p"], d["k"], modulus=d["modulus"], primitive=d["primitive"], delta=d["delta"])
    assert again == f25


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
def test_hypothesis_field_laws_q49(x, y, z):
    F = FieldParams.create(7, 2)
    a, b, c = F.from_code(x), F.from_code(y), F.from_code(z)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 168), st.integers(0, 1000))
def test_hypothesis_power_laws_q169(x, e):
    F = FieldParams.create(13, 2)
    a = F.from_code(x)
    assert a**e == a ** (e % (F.q - 1))
    assert a ** (e + 1) == a**e * a
