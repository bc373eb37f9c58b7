"""Arithmetic in F_p, F_{p^k} and the quadratic tower F_q[sqrt(delta)].

Elements of F_q = F_p[x]/(f) are coefficient vectors in the power basis
(1, alpha, ..., alpha^(k-1)), constant term first. Each element also has an
integer *code* sum(c_i * p^i); the code is what the bitset kernels index by,
and ascending code order is the canonical enumeration order used for every
"first element such that ..." search in this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import FieldError

MAX_Q = 1 << 20
TABLE_MAX_Q = 1024


# --------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in ascending order."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --------------------------------------------------------------------------
# polynomials over F_p as coefficient lists, constant term first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim([c % p for c in m])
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def poly_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return poly_mod(prod, m, p)


def poly_powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, m, p)
        base = poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p.

    Degree <= 3: a reducible polynomial must have a linear factor, so the
    absence of roots decides it. Degree >= 4: Ben-Or's test,
    gcd(f, x^(p^i) - x) = 1 for every i <= deg/2.
    """
    f = _trim([c % p for c in poly])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if k <= 3:
        return all(sum(c * pow(r, i, p) for i, c in enumerate(f)) % p for r in range(p))
    xp = [0, 1]
    for _ in range(k // 2):
        xp = poly_powmod(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(f, diff, p)) > 1:
            return False
    return True


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``k`` over F_p.

    Candidates are the lower coefficients (c_0, ..., c_{k-1}) taken in
    ascending order of sum(c_i * p^i); for (5, 2) this yields x^2 + 2.
    """
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if k == 1:
        return (0, 1)
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("unreachable: irreducible polynomials of every degree exist")


# --------------------------------------------------------------------------
# mini-syntax: "x2-2" == x^2 - 2, "3+4s" == 3 + 4*alpha

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(?:\*?\s*([a-z])\^?(\d*))?")


def parse_polynomial(text: str, p: int, var: str | None = None) -> list[int]:
    """Parse ``"x2-2"``, ``"x^3+x+2"`` or ``"3+4s"`` into a coefficient list mod p.

    A single letter is the indeterminate; digits right after it are the exponent.
    """
    s = text.replace(" ", "").lower()
    if not s:
        raise FieldError("empty polynomial")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise FieldError(f"cannot parse polynomial {text!r}")
        sign, num, letter, exp = m.groups()
        if not num and not letter:
            raise FieldError(f"cannot parse polynomial {text!r}")
        if letter and var is not None and letter != var:
            raise FieldError(f"unexpected variable {letter!r} in {text!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if letter else 0
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    deg = max(coeffs)
    return [coeffs.get(i, 0) % p for i in range(deg + 1)]


# --------------------------------------------------------------------------
# field context


@dataclass(frozen=True)
class FieldTables:
    """Dense lookup tables on element codes (only built for small q)."""

    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    cube: np.ndarray


@dataclass(frozen=True)
class FieldParams:
    """Immutable description of F_q with q = p^k.

    Build instances with :meth:`create`, which validates overrides and fills
    in the canonical modulus, primitive element and non-square.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    primitive: tuple[int, ...] = ()
    delta: tuple[int, ...] = ()
    _powers: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def create(
        cls,
        p: int,
        k: int = 1,
        modulus: Sequence[int] | None = None,
        primitive: Sequence[int] | None = None,
        delta: Sequence[int] | None = None,
    ) -> "FieldParams":
        if not is_prime(p) or p < 3:
            raise FieldError(f"p={p} must be an odd prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if p**k > MAX_Q:
            raise FieldError(f"q={p}^{k} exceeds the supported maximum {MAX_Q}")
        if modulus is None:
            mod = find_irreducible(p, k)
        else:
            mod = tuple(c % p for c in modulus)
            if len(mod) != k + 1 or mod[-1] != 1:
                raise FieldError(f"modulus {list(modulus)} is not monic of degree {k}")
            if not is_irreducible(mod, p):
                raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}")
        bare = cls(p=p, k=k, modulus=mod, _powers=tuple(p**i for i in range(k)))
        prim = find_primitive(bare, primitive)
        with_prim = cls(p=p, k=k, modulus=mod, primitive=prim.coeffs, _powers=bare._powers)
        if delta is None:
            d = smallest_nonsquare(with_prim)
        else:
            d = with_prim.element(delta)
            if d.is_zero() or is_square(d):
                raise FieldError(f"delta={d} is not a non-square in F_{p**k}")
        return cls(
            p=p, k=k, modulus=mod, primitive=prim.coeffs, delta=d.coeffs, _powers=bare._powers
        )

    @property
    def q(self) -> int:
        return self.p**self.k

    # element constructors -------------------------------------------------

    def element(self, value) -> "FieldElement":
        """Coerce an int (prime-field residue), coefficient sequence or element."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise FieldError(f"expected at most {self.k} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs + (0,) * (self.k - len(coeffs)))

    def from_code(self, code: int) -> "FieldElement":
        p = self.p
        return FieldElement(self, tuple((code // pw) % p for pw in self._powers))

    def parse(self, text: str) -> "FieldElement":
        poly = parse_polynomial(text, self.p)
        return self.element(poly_mod(poly, self.modulus, self.p) if len(poly) > self.k else poly)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.k)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self, self.primitive)

    @property
    def nonsquare(self) -> "FieldElement":
        return FieldElement(self, self.delta)

    def elements(self) -> Iterator["FieldElement"]:
        """All q elements in ascending code order."""
        for code in range(self.q):
            yield self.from_code(code)

    def nonzero(self) -> Iterator["FieldElement"]:
        for code in range(1, self.q):
            yield self.from_code(code)

    # raw coefficient arithmetic -----------------------------------------

    def _mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                # x^k = -(m_0 + ... + m_{k-1} x^{k-1})
                for i in range(k):
                    prod[d - k + i] -= c * mod[i]
        return tuple(c % p for c in prod[:k])

    # tables ------------------------------------------------------------

    @cached_property
    def tables(self) -> FieldTables:
        """Addition/multiplication tables on codes; q <= TABLE_MAX_Q only."""
        q, p = self.q, self.p
        if q > TABLE_MAX_Q:
            raise FieldError(f"lookup tables limited to q <= {TABLE_MAX_Q}")
        codes = np.arange(q, dtype=np.int64)
        pw = np.array(self._powers, dtype=np.int64)
        digits = (codes[:, None] // pw[None, :]) % p
        add = (((digits[:, None, :] + digits[None, :, :]) % p) @ pw).astype(np.int32)
        neg = (((-digits) % p) @ pw).astype(np.int32)
        exp = np.zeros(q - 1, dtype=np.int64)
        g = self.generator
        x = self.one
        for i in range(q - 1):
            exp[i] = x.code
            x = x * g
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        nz = codes[1:]
        mul = np.zeros((q, q), dtype=np.int32)
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int32)
        inv[1:] = exp[(-log[nz]) % (q - 1)]
        cube = mul[codes, mul[codes, codes]]
        for t in (add, mul, neg, inv, cube):
            t.setflags(write=False)
        return FieldTables(add=add, mul=mul, neg=neg, inv=inv, cube=cube)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "modulus": list(self.modulus),
            "primitive": list(self.primitive),
            "delta": list(self.delta),
        }

    def describe(self) -> str:
        if self.k == 1:
            return f"F_{self.p}"
        return f"F_{self.q} = F_{self.p}[x]/({format_poly(self.modulus)})"


def format_poly(coeffs: Sequence[int], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


class FieldElement:
    """Element of F_{p^k} as a length-k coefficient tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, fld: FieldParams, coeffs: tuple[int, ...]):
        self.field = fld
        self.coeffs = coeffs

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldError("mixing elements of different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.element(int(other))
        return None

    @property
    def code(self) -> int:
        return sum(c * pw for c, pw in zip(self.coeffs, self.field._powers))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        fld = self.field
        result = fld.one.coeffs
        base = self.coeffs
        while e:
            if e & 1:
                result = fld._mul(result, base)
            base = fld._mul(base, base)
            e >>= 1
        return FieldElement(fld, result)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coeffs == other.coeffs and (
                other.field is self.field or other.field == self.field
            )
        if isinstance(other, (int, np.integer)):
            return self.coeffs == self.field.element(int(other)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other: "FieldElement"):
        return self.code < other.code

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.coeffs[0]

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        return format_poly(self.coeffs, "s")


# --------------------------------------------------------------------------
# multiplicative structure


def multiplicative_order_ok(g: FieldElement) -> int | None:
    """Return None if ``g`` generates F_q*, else the offending prime divisor of q-1."""
    q = g.field.q
    if g.is_zero():
        return prime_factors(q - 1)[0] if q > 2 else 1
    for d in prime_factors(q - 1):
        if g ** ((q - 1) // d) == 1:
            return d
    return None


def find_primitive(params: FieldParams, override: Sequence[int] | FieldElement | None = None) -> FieldElement:
    """First generator of F_q* in code order, or a validated override."""
    if override is not None:
        g = override if isinstance(override, FieldElement) else params.element(override)
        bad = multiplicative_order_ok(g)
        if bad is not None:
            raise FieldError(
                f"{g} is not primitive in F_{params.q}: g^((q-1)/{bad}) = 1"
            )
        return g
    for g in params.nonzero():
        if multiplicative_order_ok(g) is None:
            return g
    raise AssertionError("unreachable: F_q* is cyclic")


def trace_to_prime(z: FieldElement) -> int:
    """Absolute trace Tr_{q/p}(z) = z + z^p + ... + z^(p^(k-1))."""
    p = z.field.p
    acc = z.field.zero
    w = z
    for _ in range(z.field.k):
        acc = acc + w
        w = w**p
    if not acc.in_prime_field():
        raise AssertionError(f"trace of {z} left the prime field: {acc}")
    return acc.coeffs[0]


def is_square(a: FieldElement) -> bool:
    """Euler's criterion. Zero is rejected; callers handle it separately."""
    if a.is_zero():
        raise ValueError("is_square is undefined for 0")
    return a ** ((a.field.q - 1) // 2) == 1


def smallest_nonsquare(params: FieldParams) -> FieldElement:
    for a in params.nonzero():
        if not is_square(a):
            return a
    raise AssertionError("unreachable for odd q")


def sqrt(a: FieldElement) -> FieldElement | None:
    """A square root of ``a`` (the one with smaller code), or None if a is a non-square.

    Tonelli-Shanks in the cyclic group F_q*.
    """
    fld = a.field
    if a.is_zero():
        return a
    if not is_square(a):
        return None
    q = fld.q
    s, m = 0, q - 1
    while m % 2 == 0:
        s, m = s + 1, m // 2
    z = fld.nonsquare if fld.delta else smallest_nonsquare(fld)
    c = z**m
    x = a ** ((m + 1) // 2)
    t = a**m
    r = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2
            i += 1
        b = c ** (1 << (r - i - 1))
        x = x * b
        c = b * b
        t = t * c
        r = i
    assert x * x == a
    other = -x
    return x if x.code <= other.code else other


# --------------------------------------------------------------------------
# quadratic tower F_{q^2} = F_q[sqrt(delta)]


@dataclass(frozen=True)
class TowerElement:
    """x + y*sqrt(delta) with x, y in F_q and delta a fixed non-square."""

    x: FieldElement
    y: FieldElement
    delta: FieldElement

    def __post_init__(self):
        if __debug__ and (self.delta.is_zero() or is_square(self.delta)):
            raise FieldError(f"delta={self.delta} is not a non-square")

    def __mul__(self, other: "TowerElement") -> "TowerElement":
        d = self.delta
        return TowerElement(
            self.x * other.x + d * self.y * other.y,
            self.x * other.y + self.y * other.x,
            d,
        )

    def __pow__(self, e: int) -> "TowerElement":
        return tower_pow(self, e)

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def conjugate(self) -> "TowerElement":
        return TowerElement(self.x, -self.y, self.delta)


def _tower_mul_raw(fld, d, a, b):
    ax, ay = a
    bx, by = b
    m = fld._mul
    p = fld.p
    xx = m(ax, bx)
    yy = m(m(ay, by), d)
    xy = m(ax, by)
    yx = m(ay, bx)
    return (
        tuple((u + v) % p for u, v in zip(xx, yy)),
        tuple((u + v) % p for u, v in zip(xy, yx)),
    )


def tower_pow(z: TowerElement, e: int) -> TowerElement:
    """Square-and-multiply in F_q[sqrt(delta)]."""
    fld = z.x.field
    d = z.delta.coeffs
    result = (fld.one.coeffs, fld.zero.coeffs)
    base = (z.x.coeffs, z.y.coeffs)
    while e:
        if e & 1:
            result = _tower_mul_raw(fld, d, result, base)
        base = _tower_mul_raw(fld, d, base, base)
        e >>= 1
    return TowerElement(FieldElement(fld, result[0]), FieldElement(fld, result[1]), z.delta)


def norm_by_power(z: TowerElement) -> FieldElement:
    """N_{q^2/q}(z) = z^(1+q), computed in the tower."""
    w = tower_pow(z, z.x.field.q + 1)
    if not w.y.is_zero():
        raise AssertionError(f"z^(1+q) not in F_q: {w}")
    return w.x


def norm_tower(z: TowerElement) -> FieldElement:
    """x^2 - delta*y^2; debug builds cross-check it against z^(1+q)."""
    n = z.x * z.x - z.delta * z.y * z.y
    assert n == norm_by_power(z), f"norm mismatch for {z}"
    return n


def tower_primitive(params: FieldParams, delta: FieldElement) -> TowerElement:
    """First generator of F_{q^2}* in order of code(x) + q*code(y)."""
    q = params.q
    order = q * q - 1
    divisors = prime_factors(order)
    one = params.one
    for code in range(1, q * q):
        z = TowerElement(params.from_code(code % q), params.from_code(code // q), delta)
        if tower_pow(z, order) != TowerElement(one, params.zero, delta):
            continue
        if all(
            tower_pow(z, order // d) != TowerElement(one, params.zero, delta) for d in divisors
        ):
            return z
    raise AssertionError("unreachable: F_{q^2}* is cyclic")
