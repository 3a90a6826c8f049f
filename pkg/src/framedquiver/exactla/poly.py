"""Univariate polynomials over an exact field, coefficients lowest degree first."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from .fields import Field, GaussianRational, GaussianRationalField, RationalField

ENUMERATION_LIMIT = 4096


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence):
        self.field = field
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, [field.zero, field.one])

    @classmethod
    def const(cls, field: Field, a) -> "Poly":
        return cls(field, [field.coerce(a)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.field.name}, {[self.field.format(c) for c in self.coeffs]})"

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return Poly(F, out)

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly(F, [])
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if F.is_zero(x):
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, a) -> "Poly":
        return Poly(self.field, [self.field.mul(a, c) for c in self.coeffs])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = F.inv(other.lead())
        quot = [F.zero] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            coef = rem[i]
            if F.is_zero(coef):
                continue
            t = F.mul(coef, inv_lead)
            quot[i - dq] = t
            for j, y in enumerate(other.coeffs):
                rem[i - dq + j] = F.sub(rem[i - dq + j], F.mul(t, y))
        return Poly(F, quot), Poly(F, rem[:dq] if dq > 0 else [])

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        result = Poly.const(self.field, self.field.one) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def __call__(self, a):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs) if i > 0])

    # -- finite-field structure --------------------------------------------
    def _frobenius_power(self, L: int, modulus: "Poly") -> "Poly":
        """x^(q^L) mod ``modulus``."""
        q = self.field.order
        r = Poly.x(self.field) % modulus
        for _ in range(L):
            r = r.powmod(q, modulus)
        return r

    def is_irreducible(self) -> bool:
        """Rabin's test over a finite field."""
        F = self.field
        if not F.is_finite:
            raise ValueError("irreducibility test only over finite fields")
        k = self.degree
        if k < 1:
            return False
        if k == 1:
            return True
        f = self.monic()
        x = Poly.x(F)
        if not (f._frobenius_power(k, f) - x).is_zero():
            return False
        for r in _prime_factors(k):
            h = f._frobenius_power(k // r, f) - x
            if f.gcd(h).degree > 0:
                return False
        return True

    def splits_over_degree(self, L: int) -> bool:
        """True iff every irreducible factor has degree dividing ``L`` (finite fields)."""
        F = self.field
        h = self.monic()
        x = Poly.x(F)
        while h.degree > 0:
            g = h.gcd(h._frobenius_power(L, h) - x)
            if g.degree == 0:
                return False
            h = h // g
        return True

    def splitting_degree(self, cap: int) -> int | None:
        """Smallest L <= cap such that the polynomial splits over F_{q^L}; None if above cap."""
        if self.degree <= 1:
            return 1
        for L in range(1, cap + 1):
            if self.splits_over_degree(L):
                return L
        return None

    # -- roots ---------------------------------------------------------------
    def roots(self) -> list:
        """Distinct roots lying in the base field, in a deterministic order."""
        if self.is_zero():
            raise ValueError("zero polynomial has every element as a root")
        if self.degree <= 0:
            return []
        F = self.field
        if F.is_finite:
            found = _finite_roots(self)
        elif isinstance(F, RationalField):
            found = _rational_roots(self)
        elif isinstance(F, GaussianRationalField):
            found = _gaussian_roots(self)
        else:  # pragma: no cover
            raise ValueError(f"no root search for {F.name}")
        return found

    def roots_with_multiplicity(self) -> list[tuple[object, int]]:
        F = self.field
        out = []
        for r in self.roots():
            m = 0
            g = self
            lin = Poly(F, [F.neg(r), F.one])
            while True:
                qt, rem = g.divmod(lin)
                if not rem.is_zero():
                    break
                g = qt
                m += 1
            out.append((r, m))
        return out


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _finite_roots(f: Poly) -> list:
    F = f.field
    if F.order <= ENUMERATION_LIMIT:
        return [a for a in F.elements() if F.is_zero(f(a))]
    if F.characteristic == 2:
        raise ValueError(f"root search over {F.name} exceeds the enumeration limit")
    x = Poly.x(F)
    g = f.monic().gcd(x.powmod(F.order, f.monic()) - x)
    rng = random.Random(0)
    roots = []
    _cz_split(g, rng, roots)
    order = {}
    for r in roots:
        order[r] = True
    return sorted(order, key=lambda a: a if isinstance(a, int) else tuple(reversed(a)))


def _cz_split(g: Poly, rng: random.Random, out: list) -> None:
    """Cantor-Zassenhaus equal-degree splitting for a product of distinct linear factors."""
    F = g.field
    if g.degree <= 0:
        return
    if g.degree == 1:
        out.append(F.neg(g.monic().coeffs[0]))
        return
    e = (F.order - 1) // 2
    while True:
        a = F.random_element(rng)
        h = Poly(F, [a, F.one]).powmod(e, g) - Poly.const(F, F.one)
        d = g.gcd(h)
        if 0 < d.degree < g.degree:
            _cz_split(d, rng, out)
            _cz_split(g // d, rng, out)
            return


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(f: Poly) -> list[Fraction]:
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    roots = []
    shift = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        shift += 1
    if shift:
        roots.append(Fraction(0))
    if len(ints) <= 1:
        return roots
    g = Poly(f.field, [Fraction(c) for c in ints])
    cands = set()
    for u in _divisors(ints[0]):
        for w in _divisors(ints[-1]):
            cands.add(Fraction(u, w))
            cands.add(Fraction(-u, w))
    roots.extend(r for r in sorted(cands) if g(r) == 0)
    return roots


def _gaussian_divisor_candidates(re: int, im: int) -> list[tuple[int, int]]:
    """All Gaussian integers u with N(u) dividing N(re + i*im)."""
    norm = re * re + im * im
    out = []
    for m in _divisors(norm):
        x = -math.isqrt(m)
        while x * x <= m:
            y2 = m - x * x
            y = math.isqrt(y2)
            if y * y == y2:
                out.append((x, y))
                if y:
                    out.append((x, -y))
            x += 1
    return out


def _gaussian_roots(f: Poly) -> list[GaussianRational]:
    F = f.field
    den = 1
    for c in f.coeffs:
        for part in (c.re, c.im):
            den = den * part.denominator // math.gcd(den, part.denominator)
    ints = [(int(c.re * den), int(c.im * den)) for c in f.coeffs]
    roots = []
    while ints and ints[0] == (0, 0):
        ints.pop(0)
        if not roots:
            roots.append(F.zero)
    if len(ints) <= 1:
        return roots
    g = Poly(F, [GaussianRational(Fraction(a), Fraction(b)) for a, b in ints])
    seen = set()
    for u in _gaussian_divisor_candidates(*ints[0]):
        for w in _gaussian_divisor_candidates(*ints[-1]):
            if w == (0, 0):
                continue
            r = F.div(F.coerce(u), F.coerce(w))
            if r in seen:
                continue
            seen.add(r)
            if F.is_zero(g(r)):
                roots.append(r)
    roots.sort(key=lambda z: (z.re, z.im))
    return roots
