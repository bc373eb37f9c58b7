"""Inverse-closed generator sets H in F_q^2 and binary quadratic forms.

Families: the cubic curve {(a, a^3)}, the norm-one circle x^2 - delta*y^2 = 1
(computed two ways, directly and as the kernel of z -> z^(1+q)), the hyperbola
xy = 1, and unit spheres E_Q of arbitrary non-degenerate forms.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import FormError, GeneratorSetError, UnsupportedCharacteristic
from .field import (
    FieldElement,
    FieldParams,
    TowerElement,
    is_square,
    norm_by_power,
    sqrt,
    tower_pow,
    tower_primitive,
)


class Family(str, enum.Enum):
    CUBIC = "cubic"
    NORM_ONE = "norm"
    HYPERBOLA = "hyperbola"
    QUADRATIC_UNIT = "quadratic"
    LI_NORM = "li"


class Ordering(str, enum.Enum):
    BY_VALUE = "value"
    BY_PRIMITIVE_POWER = "power"
    LEX = "lex"


class FormClass(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    DEGENERATE = "degenerate"


@dataclass(frozen=True, slots=True)
class Point:
    first: FieldElement
    second: FieldElement

    def __add__(self, other: "Point") -> "Point":
        return Point(self.first + other.first, self.second + other.second)

    def __neg__(self) -> "Point":
        return Point(-self.first, -self.second)

    def is_zero(self) -> bool:
        return self.first.is_zero() and self.second.is_zero()

    def flatten(self) -> tuple[int, ...]:
        return self.first.coeffs + self.second.coeffs

    @property
    def code(self) -> int:
        return self.first.code + self.first.field.q * self.second.code

    def __repr__(self):
        return f"({self.first!r}, {self.second!r})"


def point_from_code(params: FieldParams, code: int) -> Point:
    q = params.q
    return Point(params.from_code(code % q), params.from_code(code // q))


@dataclass(frozen=True)
class QuadraticForm:
    """Q(x, y) = a*x^2 + b*x*y + c*y^2 over F_q."""

    a: FieldElement
    b: FieldElement
    c: FieldElement

    @classmethod
    def of(cls, params: FieldParams, a, b, c) -> "QuadraticForm":
        return cls(params.element(a), params.element(b), params.element(c))

    @property
    def params(self) -> FieldParams:
        return self.a.field

    def __call__(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.a * x * x + self.b * x * y + self.c * y * y

    @property
    def discriminant(self) -> FieldElement:
        return self.b * self.b - 4 * self.a * self.c

    def to_dict(self) -> dict:
        return {"a": list(self.a.coeffs), "b": list(self.b.coeffs), "c": list(self.c.coeffs)}


def q_plus(params: FieldParams, delta: FieldElement | None = None) -> QuadraticForm:
    d = delta if delta is not None else params.nonsquare
    return QuadraticForm(params.one, params.zero, -d)


def q_minus(params: FieldParams) -> QuadraticForm:
    return QuadraticForm(params.zero, params.one, params.zero)


# --------------------------------------------------------------------------
# the generator-set container


@dataclass(frozen=True)
class GeneratorSet:
    family: Family
    params: FieldParams
    points: frozenset
    reps: tuple
    ordering: Ordering
    delta: FieldElement | None = None
    form: QuadraticForm | None = None

    def __post_init__(self):
        zero = Point(self.params.zero, self.params.zero)
        if zero in self.points:
            raise GeneratorSetError("generator set contains 0")
        for h in self.points:
            if -h not in self.points:
                raise GeneratorSetError(f"not inverse-closed: {h} in H but -{h} is not")
        halves = set(self.reps) | {-r for r in self.reps}
        if len(self.reps) * 2 != len(self.points) or halves != self.points:
            raise GeneratorSetError("reps do not split the set as S and -S")

    @property
    def n(self) -> int:
        return len(self.reps)

    def __len__(self):
        return len(self.points)

    def to_dict(self) -> dict:
        out = {
            "family": self.family.value,
            "params": self.params.to_dict(),
            "ordering": self.ordering.value,
            "reps": [list(r.flatten()) for r in self.reps],
        }
        if self.delta is not None:
            out["delta"] = list(self.delta.coeffs)
        if self.form is not None:
            out["form"] = self.form.to_dict()
        return out


def split_representatives(
    points: Iterable[Point],
    ordering: Ordering,
    orbit: Sequence[Point] | None = None,
) -> tuple[Point, ...]:
    """Choose S with H = S + (-S) disjointly, ordered per ``ordering``.

    ``orbit`` lists the points along a cyclic parametrization (point(g^0),
    point(g^1), ...) and is required for BY_PRIMITIVE_POWER.
    """
    pts = set(points)
    for h in pts:
        if h.is_zero():
            raise GeneratorSetError("0 cannot be a generator")
        if -h not in pts:
            raise GeneratorSetError(f"not inverse-closed: {h} in H but -{h} is not")
    n = len(pts) // 2
    ordering = Ordering(ordering)
    if ordering is Ordering.BY_PRIMITIVE_POWER:
        if orbit is None:
            raise GeneratorSetError("ordering by primitive power needs a parametrization")
        reps = tuple(orbit[:n])
    elif ordering is Ordering.BY_VALUE:
        # keep the point whose first nonzero residue lies in 1..(p-1)/2
        half = (next(iter(pts)).first.field.p - 1) // 2 if pts else 0
        chosen = [h for h in pts if next(c for c in h.flatten() if c) <= half]
        reps = tuple(sorted(chosen, key=lambda h: (h.first.code, h.second.code)))
    else:
        chosen = {min(h.flatten(), (-h).flatten()): h if h.flatten() <= (-h).flatten() else -h for h in pts}
        reps = tuple(chosen[key] for key in sorted(chosen))
    if len(reps) != n or len(set(reps) | {-r for r in reps}) != len(pts):
        raise GeneratorSetError("representatives do not split H into S and -S")
    return reps


def _default_ordering(family: Family, params: FieldParams) -> Ordering:
    if family is Family.QUADRATIC_UNIT:
        return Ordering.LEX
    if family in (Family.CUBIC, Family.HYPERBOLA) and params.k == 1:
        return Ordering.BY_VALUE
    return Ordering.BY_PRIMITIVE_POWER


def _finish(family, params, points, orbit, ordering, delta=None, form=None) -> GeneratorSet:
    ordering = Ordering(ordering) if ordering is not None else _default_ordering(family, params)
    reps = split_representatives(points, ordering, orbit)
    return GeneratorSet(family, params, frozenset(points), reps, ordering, delta, form)


def _power_orbit(params: FieldParams, fn) -> list[Point]:
    g = params.generator
    x = params.one
    out = []
    for _ in range(params.q - 1):
        out.append(fn(x))
        x = x * g
    return out


# --------------------------------------------------------------------------
# families


def cubic_set(params: FieldParams, ordering: Ordering | str | None = None) -> GeneratorSet:
    """H = {(a, a^3) : a != 0}."""
    if params.p < 5:
        raise UnsupportedCharacteristic(f"the cubic family needs p >= 5 (got p={params.p})")
    orbit = _power_orbit(params, lambda a: Point(a, a * a * a))
    return _finish(Family.CUBIC, params, orbit, orbit, ordering)


def hyperbola_set(params: FieldParams, ordering: Ordering | str | None = None) -> GeneratorSet:
    """H_- = {(x, 1/x) : x != 0}."""
    orbit = _power_orbit(params, lambda a: Point(a, a.inverse()))
    return _finish(Family.HYPERBOLA, params, orbit, orbit, ordering)


def _check_delta(params: FieldParams, delta) -> FieldElement:
    d = params.nonsquare if delta is None else params.element(delta)
    if d.is_zero() or is_square(d):
        raise GeneratorSetError(f"delta={d} must be a non-square in F_{params.q}")
    return d


def norm_one_orbit(params: FieldParams, delta: FieldElement) -> list[Point]:
    """The norm-one circle along powers of w = u^(q-1), u primitive in F_q[sqrt(delta)]."""
    q = params.q
    u = tower_primitive(params, delta)
    w = tower_pow(u, q - 1)
    z = TowerElement(params.one, params.zero, delta)
    out = []
    for _ in range(q + 1):
        out.append(Point(z.x, z.y))
        z = z * w
    return out


def norm_one_set(
    params: FieldParams, delta=None, ordering: Ordering | str | None = None
) -> GeneratorSet:
    """H_+ = {(x, y) : x^2 - delta*y^2 = 1}, by direct scan of the formula."""
    d = _check_delta(params, delta)
    pts = []
    for x in params.elements():
        for y in params.elements():
            if x * x - d * y * y == 1:
                pts.append(Point(x, y))
    orbit = norm_one_orbit(params, d)
    return _finish(Family.NORM_ONE, params, pts, orbit, ordering, delta=d)


def li_norm_set(
    params: FieldParams, delta=None, ordering: Ordering | str | None = None
) -> GeneratorSet:
    """N_2 = {z in F_{q^2} : z^(1+q) = 1}, each z tested by exponentiation in the tower."""
    d = _check_delta(params, delta)
    pts = []
    for x in params.elements():
        for y in params.elements():
            z = TowerElement(x, y, d)
            if not z.is_zero() and norm_by_power(z) == 1:
                pts.append(Point(x, y))
    orbit = norm_one_orbit(params, d)
    return _finish(Family.LI_NORM, params, pts, orbit, ordering, delta=d)


def form_unit_points(Q: QuadraticForm) -> list[Point]:
    """All (x, y) with Q(x, y) = 1, by a full q^2 scan."""
    params = Q.params
    q = params.q
    if q <= 1024:
        t = params.tables
        codes = np.arange(q)
        xx = t.mul[codes, codes]
        X = np.repeat(codes, q)
        Y = np.tile(codes, q)
        val = t.add[
            t.add[t.mul[Q.a.code, xx[X]], t.mul[Q.b.code, t.mul[X, Y]]],
            t.mul[Q.c.code, xx[Y]],
        ]
        hits = np.flatnonzero(val == 1)
        return [Point(params.from_code(int(X[i])), params.from_code(int(Y[i]))) for i in hits]
    return [Point(x, y) for x in params.elements() for y in params.elements() if Q(x, y) == 1]


def quadratic_unit_set(Q: QuadraticForm, ordering: Ordering | str | None = None) -> GeneratorSet:
    """E_Q = {(x, y) : Q(x, y) = 1}."""
    cls = classify_form(Q)
    if cls is FormClass.DEGENERATE:
        raise FormError("E_Q needs a non-degenerate form")
    params = Q.params
    pts = form_unit_points(Q)
    expected = params.q - 1 if cls is FormClass.MINUS else params.q + 1
    if len(pts) != expected:
        raise AssertionError(f"|E_Q| = {len(pts)} but a {cls.value} form should give {expected}")
    return _finish(Family.QUADRATIC_UNIT, params, pts, None, ordering, form=Q)


def build_generator_set(
    family: Family | str,
    params: FieldParams,
    *,
    delta=None,
    form: QuadraticForm | None = None,
    ordering: Ordering | str | None = None,
) -> GeneratorSet:
    family = Family(family)
    if family is Family.CUBIC:
        return cubic_set(params, ordering)
    if family is Family.HYPERBOLA:
        return hyperbola_set(params, ordering)
    if family is Family.NORM_ONE:
        return norm_one_set(params, delta, ordering)
    if family is Family.LI_NORM:
        return li_norm_set(params, delta, ordering)
    if form is None:
        raise FormError("the quadratic family needs a form")
    return quadratic_unit_set(form, ordering)


# --------------------------------------------------------------------------
# quadratic forms: classification and explicit equivalences

Matrix2 = tuple[tuple[FieldElement, FieldElement], tuple[FieldElement, FieldElement]]


def classify_form(Q: QuadraticForm) -> FormClass:
    disc = Q.discriminant
    if disc.is_zero():
        return FormClass.DEGENERATE
    return FormClass.MINUS if is_square(disc) else FormClass.PLUS


def mat_apply(A: Matrix2, pt: Point) -> Point:
    (a, b), (c, d) = A
    return Point(a * pt.first + b * pt.second, c * pt.first + d * pt.second)


def mat_mul(A: Matrix2, B: Matrix2) -> Matrix2:
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_det(A: Matrix2) -> FieldElement:
    (a, b), (c, d) = A
    return a * d - b * c


def mat_inv(A: Matrix2) -> Matrix2:
    (a, b), (c, d) = A
    det = mat_det(A)
    if det.is_zero():
        raise FormError("matrix is singular")
    di = det.inverse()
    return ((d * di, -b * di), (-c * di, a * di))


def _diagonalize(Q: QuadraticForm):
    """P, d1, d2 with Q(P w) = d1*w1^2 + d2*w2^2 (requires a or c nonzero)."""
    F = Q.params
    one, zero = F.one, F.zero
    disc = Q.discriminant
    if not Q.a.is_zero():
        # a(x + b/(2a) y)^2 - disc/(4a) y^2
        P = ((one, -Q.b / (2 * Q.a)), (zero, one))
        return P, Q.a, -disc / (4 * Q.a)
    # c(y + b/(2c) x)^2 - disc/(4c) x^2, with x = w2 and y = w1 - b/(2c) w2
    P = ((zero, one), (one, -Q.b / (2 * Q.c)))
    return P, Q.c, -disc / (4 * Q.c)


def target_form(params: FieldParams, target: FormClass, delta=None) -> QuadraticForm:
    return q_plus(params, delta) if FormClass(target) is FormClass.PLUS else q_minus(params)


def equivalence_transform(
    Q: QuadraticForm, target: FormClass | str, delta=None, *, seed: int = 0
) -> Matrix2:
    """Invertible A with Q_target(v) = Q(A v) for every v.

    Q_minus is xy; Q_plus is x^2 - delta*y^2 with the field's canonical
    non-square unless ``delta`` is given.
    """
    target = FormClass(target)
    cls = classify_form(Q)
    if cls is FormClass.DEGENERATE or cls is not target:
        raise FormError(f"form classifies as {cls.value}, not {target.value}")
    F = Q.params
    one, zero = F.one, F.zero
    if Q.a.is_zero() and Q.c.is_zero():
        # Q = b*x*y is already hyperbolic
        A = ((Q.b.inverse(), zero), (zero, one))
    else:
        P, d1, d2 = _diagonalize(Q)
        if target is FormClass.MINUS:
            # d1*w1^2 + d2*w2^2 = d1 (w1 - s w2)(w1 + s w2) with s^2 = -d2/d1
            s = sqrt(-d2 / d1)
            half = F.element(2).inverse()
            M = ((half / d1, half), (-half / (s * d1), half / s))
        else:
            d = _check_delta(F, delta)
            e1 = None
            for w2 in F.elements():
                w1 = sqrt((1 - d2 * w2 * w2) / d1)
                if w1 is not None:
                    e1 = (w1, w2)
                    break
            assert e1 is not None, "a non-degenerate binary form represents 1"
            # f is B-orthogonal to e1 with Q(f) = d1*d2 = -delta * r^2
            f = (d2 * e1[1], -d1 * e1[0])
            r = sqrt(-(d1 * d2) / d)
            f = (f[0] / r, f[1] / r)
            M = ((e1[0], f[0]), (e1[1], f[1]))
        A = mat_mul(P, M)
    check_equivalence(Q, target_form(F, target, delta), A, seed=seed)
    return A


def check_equivalence(Q: QuadraticForm, Qt: QuadraticForm, A: Matrix2, *, seed: int = 0) -> None:
    """Assert Qt(v) = Q(A v): exhaustively for q <= 49, on 100 seeded samples above."""
    F = Q.params
    if mat_det(A).is_zero():
        raise AssertionError("transform is singular")
    if F.q <= 49:
        vs = ((x, y) for x in F.elements() for y in F.elements())
    else:
        rng = random.Random(seed)
        vs = ((F.from_code(rng.randrange(F.q)), F.from_code(rng.randrange(F.q))) for _ in range(100))
    for x, y in vs:
        img = mat_apply(A, Point(x, y))
        if Qt(x, y) != Q(img.first, img.second):
            raise AssertionError(f"equivalence fails at {(x, y)}")


def transform_points(A: Matrix2, points: Iterable[Point]) -> set[Point]:
    return {mat_apply(A, pt) for pt in points}
