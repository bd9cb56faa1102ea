"""Exact arithmetic in the real cyclotomic field Q(c), c = 2cos(pi/N).

Elements are rational coefficient vectors in the power basis 1, c, ..., c^(d-1),
always reduced modulo the minimal polynomial of c.  No floating point is used:
the minimal polynomial is obtained from the cyclotomic polynomial Phi_{2N} by
the substitution y = x + 1/x.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

INFINITY = None  # marker for an infinite bond m(s, s') = oo

Rational = Union[int, Fraction]


class FieldError(ArithmeticError):
    pass


# --- integer / rational polynomial helpers (coefficient lists, low degree first)

def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: Sequence, q: Sequence) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def poly_divmod(p: Sequence, q: Sequence) -> tuple[list, list]:
    """Division with remainder; exact when q is monic or coefficients are Fractions."""
    p = list(p)
    q = _trim(list(q))
    if len(q) == 1 and q[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    lead = q[-1]
    if len(p) < len(q):
        return [0], _trim(p)
    quot = [0] * (len(p) - len(q) + 1)
    for k in range(len(p) - len(q), -1, -1):
        coef = p[k + len(q) - 1]
        if coef == 0:
            continue
        if lead != 1:
            coef = Fraction(coef) / lead
        quot[k] = coef
        for j, b in enumerate(q):
            p[k + j] -= coef * b
    return _trim(quot), _trim(p[: len(q) - 1] or [0])


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Phi_n as an integer coefficient tuple, by exact division of x^n - 1."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = poly_divmod(num, cyclotomic(d))
            assert rem == [0], (n, d)
    return tuple(int(c) for c in num)


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def minimal_polynomial(N: int) -> tuple[int, ...]:
    """Minimal polynomial of 2cos(pi/N) over Q (monic, integer coefficients)."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    if N == 1:
        # 2cos(pi) = -2
        return (2, 1)
    phi = cyclotomic(2 * N)
    k = (len(phi) - 1) // 2
    # x^j + x^-j = P_j(y) with P_0 = 2, P_1 = y, P_{j+1} = y P_j - P_{j-1}
    P = [[2], [0, 1]]
    for j in range(2, k + 1):
        P.append(_poly_sub(poly_mul([0, 1], P[j - 1]), P[j - 2]))
    g = [phi[k]]
    for j in range(1, k + 1):
        g = _poly_add(g, [phi[k + j] * a for a in P[j]])
    g = _trim(g)
    assert g[-1] == 1 and len(g) - 1 == _totient(2 * N) // 2
    return tuple(g)


def _poly_add(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _poly_sub(p: Sequence, q: Sequence) -> list:
    return _poly_add(p, [-a for a in q])


# --- field objects


@dataclass(frozen=True)
class FieldSpec:
    """The field Q(2cos(pi/N))."""

    N: int
    minpoly: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def __call__(self, value: Union[Rational, Sequence[Rational]]) -> "FieldElement":
        if isinstance(value, (int, Fraction)):
            return FieldElement.from_rational(self, value)
        return FieldElement.from_coeffs(self, value)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement.from_rational(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement.from_rational(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The generator c = 2cos(pi/N)."""
        return FieldElement.from_coeffs(self, [0, 1])

    def companion_matrix(self) -> list[list[int]]:
        d = self.degree
        C = [[0] * d for _ in range(d)]
        for i in range(1, d):
            C[i][i - 1] = 1
        for i in range(d):
            C[i][d - 1] = -self.minpoly[i]
        return C


def make_field(N: int) -> FieldSpec:
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer")
    return FieldSpec(N, minimal_polynomial(N))


class FieldElement:
    __slots__ = ("spec", "coeffs", "_hash")

    def __init__(self, spec: FieldSpec, coeffs: tuple[Fraction, ...]):
        # callers must pass reduced coefficients of length spec.degree
        self.spec = spec
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def from_rational(cls, spec: FieldSpec, value: Rational) -> "FieldElement":
        return cls(spec, (Fraction(value),) + (Fraction(0),) * (spec.degree - 1))

    @classmethod
    def from_coeffs(cls, spec: FieldSpec, coeffs: Iterable[Rational]) -> "FieldElement":
        return cls(spec, _reduce(spec, [Fraction(c) for c in coeffs]))

    # -- predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise FieldError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash(self.coeffs)
        return self._hash

    # -- arithmetic

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_rational(self.spec, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.spec, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.spec, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.spec, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self * other.coeffs[0]
        if self.is_rational():
            return other * self.coeffs[0]
        return FieldElement(self.spec, _reduce(self.spec, poly_mul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in field")
        if self.is_rational():
            return FieldElement.from_rational(self.spec, 1 / self.coeffs[0])
        # extended Euclid in Q[x]: find u with u*a = 1 mod minpoly
        r0, r1 = [Fraction(c) for c in self.spec.minpoly], _trim(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while not (len(r1) == 1 and r1[0] == 0):
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_poly_sub(s0, poly_mul(q, s1)))
        # r0 is a nonzero constant since minpoly is irreducible
        assert len(r0) == 1
        return FieldElement.from_coeffs(self.spec, [c / r0[0] for c in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in field")
            return FieldElement(self.spec, tuple(a / other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.spec.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            mono = "" if i == 0 else ("c" if i == 1 else f"c^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}" if mono else str(a))
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list[str]:
        return [str(a) for a in self.coeffs]


def _reduce(spec: FieldSpec, coeffs: list) -> tuple[Fraction, ...]:
    d = spec.degree
    if len(coeffs) > d:
        _, coeffs = poly_divmod(coeffs, spec.minpoly)
    out = [Fraction(c) for c in coeffs] + [Fraction(0)] * (d - len(coeffs))
    return tuple(out[:d])


def two_cos_multiple(spec: FieldSpec, k: int) -> FieldElement:
    """2cos(k*pi/N) as a field element, via c_{j+1} = c*c_j - c_{j-1}."""
    k = abs(k) % (2 * spec.N)
    prev, cur = spec(2), spec.gen
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, spec.gen * cur - prev
    return cur


def cos_value(spec: FieldSpec, m) -> FieldElement:
    """cos(pi/m) for a finite m dividing N; m = INFINITY gives 1."""
    if m is INFINITY:
        return spec.one
    if m < 1:
        raise ValueError("m must be >= 1")
    if spec.N % m:
        raise FieldError(f"conductor mismatch: m={m} does not divide N={spec.N}")
    return two_cos_multiple(spec, spec.N // m) / 2


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)
