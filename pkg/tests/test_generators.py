import random

import pytest

from quasilee.errors import FormError, GeneratorSetError, UnsupportedCharacteristic
from quasilee.field import FieldParams
from quasilee.generators import (
    Family,
    FormClass,
    Ordering,
    Point,
    QuadraticForm,
    build_generator_set,
    check_equivalence,
    classify_form,
    cubic_set,
    equivalence_transform,
    hyperbola_set,
    li_norm_set,
    norm_one_set,
    q_minus,
    q_plus,
    quadratic_unit_set,
    split_representatives,
    target_form,
)


def brute_points(F, pred):
    return {Point(x, y) for x in F.elements() for y in F.elements() if pred(x, y)}


@pytest.mark.parametrize("q", [5, 7, 13, 17, 25, 49])
def test_family_sizes_and_membership(q):
    F = FieldParams.create(5, 2) if q == 25 else FieldParams.create(7, 2) if q == 49 else FieldParams.create(q)
    C = cubic_set(F)
    assert C.points == brute_points(F, lambda x, y: not x.is_zero() and y == x * x * x)
    Hm = hyperbola_set(F)
    assert Hm.points == brute_points(F, lambda x, y: x * y == F.one)
    Hp = norm_one_set(F)
    d = F.nonsquare
    assert Hp.points == brute_points(F, lambda x, y: x * x - d * y * y == F.one)
    assert (len(C), len(Hm), len(Hp)) == (q - 1, q - 1, q + 1)
    for H in (C, Hm, Hp):
        assert H.n * 2 == len(H)
        assert set(H.reps) | {-r for r in H.reps} == H.points


def test_cubic_needs_p5():
    with pytest.raises(UnsupportedCharacteristic):
        cubic_set(FieldParams.create(3, 2))


def test_default_orderings(f17, f25):
    assert cubic_set(f17).ordering is Ordering.BY_VALUE
    assert cubic_set(f25).ordering is Ordering.BY_PRIMITIVE_POWER
    assert norm_one_set(f17).ordering is Ordering.BY_PRIMITIVE_POWER
    Q = QuadraticForm.of(f17, 1, 0, 1)
    assert quadratic_unit_set(Q).ordering is Ordering.LEX


def test_by_value_p17_columns(f17):
    reps = cubic_set(f17).reps
    assert [r.first.code for r in reps] == list(range(1, 9))
    assert [r.second.code for r in reps] == [1, 8, 10, 13, 6, 12, 3, 2]


def test_q25_power_order(f25):
    reps = cubic_set(f25).reps
    g = f25.generator
    for i, r in enumerate(reps):
        assert r.first == g**i and r.second == g ** (3 * i)


def test_orderings_give_same_set(f17):
    sets = {o: cubic_set(f17, o) for o in Ordering}
    assert len({s.points for s in sets.values()}) == 1
    lex = sets[Ordering.LEX].reps
    assert [r.flatten() for r in lex] == sorted(r.flatten() for r in lex)


def test_split_rejects_bad_sets(f17):
    one = Point(f17.one, f17.zero)
    with pytest.raises(GeneratorSetError):
        split_representatives({one}, Ordering.LEX)
    with pytest.raises(GeneratorSetError):
        split_representatives({one, -one, Point(f17.zero, f17.zero)}, Ordering.LEX)
    with pytest.raises(GeneratorSetError):
        split_representatives({one, -one}, Ordering.BY_PRIMITIVE_POWER)


def test_norm_orbit_covers_circle():
    F = FieldParams.create(13)
    H = norm_one_set(F)
    assert len(set(H.reps)) == H.n == 7


@pytest.mark.parametrize("q", [13, 17, 25])
def test_li_matches_norm(q):
    F = FieldParams.create(5, 2) if q == 25 else FieldParams.create(q)
    assert li_norm_set(F).points == norm_one_set(F).points


def test_norm_rejects_square_delta(f17):
    with pytest.raises(GeneratorSetError):
        norm_one_set(f17, delta=f17.element(4))


def test_build_generator_set_dispatch(f17):
    assert build_generator_set("cubic", f17).family is Family.CUBIC
    assert build_generator_set("li", f17).family is Family.LI_NORM
    with pytest.raises(FormError):
        build_generator_set("quadratic", f17)


def test_classification():
    F5, F7 = FieldParams.create(5), FieldParams.create(7)
    assert classify_form(QuadraticForm.of(F5, 1, 1, 1)) is FormClass.PLUS
    assert classify_form(QuadraticForm.of(F7, 1, 1, 1)) is FormClass.MINUS
    assert classify_form(QuadraticForm.of(F7, 1, 2, 1)) is FormClass.DEGENERATE
    assert classify_form(q_plus(F7)) is FormClass.PLUS
    assert classify_form(q_minus(F7)) is FormClass.MINUS


def test_unit_sphere_of_reference_forms(f17):
    assert quadratic_unit_set(q_plus(f17)).points == norm_one_set(f17).points
    assert quadratic_unit_set(q_minus(f17)).points == hyperbola_set(f17).points


def test_degenerate_form_rejected(f17):
    with pytest.raises(FormError):
        quadratic_unit_set(QuadraticForm.of(f17, 1, 2, 1))
    with pytest.raises(FormError):
        equivalence_transform(QuadraticForm.of(f17, 1, 2, 1), FormClass.PLUS)


def test_wrong_target_rejected(f17):
    with pytest.raises(FormError):
        equivalence_transform(QuadraticForm.of(f17, 1, 0, 1), FormClass.PLUS)


@pytest.mark.parametrize("pk", [(5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2), (7, 2), (11, 2)])
def test_equivalence_random_forms(pk):
    """Every non-degenerate form maps to its reference form; checked exhaustively for q <= 49."""
    F = FieldParams.create(*pk)
    rng = random.Random(pk[0] * 100 + pk[1])
    done = 0
    while done < 6:
        Q = QuadraticForm(*(F.from_code(rng.randrange(F.q)) for _ in range(3)))
        cls = classify_form(Q)
        if cls is FormClass.DEGENERATE:
            continue
        A = equivalence_transform(Q, cls)  # checks internally
        check_equivalence(Q, target_form(F, cls), A)
        done += 1


def test_equivalence_sampled_large_field():
    F = FieldParams.create(101)
    Q = QuadraticForm.of(F, 3, 5, 7)
    A = equivalence_transform(Q, classify_form(Q), seed=4)
    check_equivalence(Q, target_form(F, classify_form(Q)), A, seed=11)


def test_form_without_x2_term():
    F = FieldParams.create(13)
    for Q in (QuadraticForm.of(F, 0, 1, 3), QuadraticForm.of(F, 0, 5, 0), QuadraticForm.of(F, 2, 0, 0)):
        cls = classify_form(Q)
        if cls is not FormClass.DEGENERATE:
            equivalence_transform(Q, cls)
