"""Exact scalar fields: Q, Q(i), F_p and F_{p^k}.

Field elements are plain Python values (``Fraction``, :class:`GaussianRational`,
``int`` residues, coefficient tuples) and all arithmetic goes through the
owning :class:`Field`.  :class:`Scalar` wraps a value together with its field
for operator-style use.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator, Sequence


class FieldError(ValueError):
    """Malformed field description or incompatible field operands."""


class ParseError(ValueError):
    """A scalar string does not parse under the field's text encoding."""


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


@dataclass(frozen=True, slots=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    def __str__(self) -> str:
        return GAUSSIAN.format(self)


class Field:
    kind: str
    is_finite: bool = False

    zero: Any
    one: Any

    # -- arithmetic ---------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def from_int(self, n: int):
        raise NotImplementedError

    def coerce(self, x):
        """Turn ``x`` (int, Fraction, string, or native value) into an element."""
        raise NotImplementedError

    # -- text & identity ----------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    @property
    def name(self) -> str:
        raise NotImplementedError

    def random_element(self, rng: random.Random, bound: int = 3):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise FieldError(f"{self.name} is infinite; cannot enumerate elements")

    def __repr__(self) -> str:
        return f"<Field {self.name}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(repr(sorted(self.descriptor().items())))


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ParseError("empty scalar")
    try:
        if "/" in text:
            num, den = text.split("/")
            if not den.strip() or int(den) == 0:
                raise ParseError(f"bad denominator in {text!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {text!r}") from exc


def _format_fraction(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class RationalField(Field):
    kind = "rationals"
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise FieldError(f"cannot coerce {x!r} into Q")

    def parse(self, text):
        return _parse_fraction(text)

    def format(self, a):
        return _format_fraction(a)

    def descriptor(self):
        return {"kind": self.kind}

    @property
    def name(self):
        return "Q"

    def random_element(self, rng, bound=3):
        return Fraction(rng.randint(-bound, bound))


class GaussianRationalField(Field):
    kind = "gaussian-rationals"
    zero = GaussianRational(Fraction(0), Fraction(0))
    one = GaussianRational(Fraction(1), Fraction(0))
    i = GaussianRational(Fraction(0), Fraction(1))

    def add(self, a, b):
        return GaussianRational(a.re + b.re, a.im + b.im)

    def sub(self, a, b):
        return GaussianRational(a.re - b.re, a.im - b.im)

    def mul(self, a, b):
        return GaussianRational(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)

    def neg(self, a):
        return GaussianRational(-a.re, -a.im)

    def conj(self, a):
        return GaussianRational(a.re, -a.im)

    def norm(self, a) -> Fraction:
        return a.re * a.re + a.im * a.im

    def inv(self, a):
        n = self.norm(a)
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(a.re / n, -a.im / n)

    def from_int(self, n):
        return GaussianRational(Fraction(n), Fraction(0))

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (int, Fraction)):
            return GaussianRational(Fraction(x), Fraction(0))
        if isinstance(x, tuple) and len(x) == 2:
            return GaussianRational(Fraction(x[0]), Fraction(x[1]))
        raise FieldError(f"cannot coerce {x!r} into Q(i)")

    def parse(self, text):
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty scalar")
        if not s.endswith("i"):
            return GaussianRational(_parse_fraction(s), Fraction(0))
        body = s[:-1]
        if body.endswith("*"):
            body = body[:-1]
        # split real and imaginary parts at the last top-level sign
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0:
            re_part, im_part = body[:cut], body[cut:]
        else:
            re_part, im_part = "0", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        if im_part.startswith("+"):
            im_part = im_part[1:]
        return GaussianRational(_parse_fraction(re_part), _parse_fraction(im_part))

    def format(self, a):
        if a.im == 0:
            return _format_fraction(a.re)
        im = f"{_format_fraction(a.im)}*i"
        if a.re == 0:
            return im
        sign = "" if a.im < 0 else "+"
        return f"{_format_fraction(a.re)}{sign}{im}"

    def descriptor(self):
        return {"kind": self.kind}

    @property
    def name(self):
        return "Q(i)"

    def random_element(self, rng, bound=3):
        return GaussianRational(Fraction(rng.randint(-bound, bound)), Fraction(rng.randint(-bound, bound)))


class PrimeField(Field):
    kind = "prime-field"
    is_finite = True
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p >= 2**31:
            raise FieldError("prime fields are limited to p < 2^31")
        self.p = p
        self.order = p
        self.characteristic = p
        self.degree = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        raise FieldError(f"cannot coerce {x!r} into F_{self.p}")

    def parse(self, text):
        try:
            v = int(text.strip())
        except ValueError as exc:
            raise ParseError(f"not a residue: {text!r}") from exc
        if not 0 <= v < self.p:
            raise ParseError(f"residue {v} outside [0, {self.p})")
        return v

    def format(self, a):
        return str(a)

    def descriptor(self):
        return {"kind": self.kind, "p": self.p}

    @property
    def name(self):
        return f"F{self.p}"

    def random_element(self, rng, bound=3):
        return rng.randrange(self.p)

    def elements(self):
        return iter(range(self.p))


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> tuple:
    """Multiply coefficient vectors modulo a monic ``modulus`` over F_p."""
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        top = prod[d]
        if top:
            for j in range(k):
                prod[d - k + j] = (prod[d - k + j] - top * modulus[j]) % p
    return tuple(prod[:k])


def poly_is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over F_p by trial division.

    Fine for the degrees used here (k <= 12 with small p); every monic
    factor of degree <= k/2 is tried.
    """
    from .poly import Poly

    fp = PrimeField(p)
    f = Poly(fp, [c % p for c in modulus])
    k = f.degree
    if k <= 0:
        return False
    if k == 1:
        return True
    return f.is_irreducible()


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ``k`` over F_p."""
    if k == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=k):
        coeffs = tuple(reversed(tail)) + (1,)
        if coeffs[0] == 0:
            continue
        if poly_is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


class ExtensionField(Field):
    """F_{p^k} = F_p[x]/(modulus); elements are coefficient tuples, lowest degree first."""

    kind = "extension-field"
    is_finite = True

    def __init__(self, p: int, k: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if modulus is None:
            modulus = find_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {k}: {modulus}")
        if not poly_is_irreducible_mod_p(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.degree = k
        self.modulus = modulus
        self.order = p**k
        self.characteristic = p
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)
        self._inv_cache: dict[tuple, tuple] = {}

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        if self.k == 1:
            return ((a[0] * b[0]) % self.p,)
        return _poly_mulmod(a, b, self.modulus, self.p)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        hit = self._inv_cache.get(a)
        if hit is None:
            hit = self.pow(a, self.order - 2)
            self._inv_cache[a] = hit
        return hit

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def generator(self):
        """The class of x (a primitive root of the modulus, not necessarily of the group)."""
        if self.k == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.k - 2)

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_int(x.numerator * pow(x.denominator, -1, self.p))
        if isinstance(x, (tuple, list)) and len(x) == self.k:
            return tuple(int(c) % self.p for c in x)
        raise FieldError(f"cannot coerce {x!r} into {self.name}")

    def parse(self, text):
        parts = [t.strip() for t in text.split(",")]
        if len(parts) != self.k:
            raise ParseError(f"expected {self.k} coefficients, got {text!r}")
        try:
            coeffs = tuple(int(t) for t in parts)
        except ValueError as exc:
            raise ParseError(f"not a coefficient list: {text!r}") from exc
        if any(not 0 <= c < self.p for c in coeffs):
            raise ParseError(f"coefficient outside [0, {self.p}) in {text!r}")
        return coeffs

    def format(self, a):
        return ",".join(str(c) for c in a)

    def descriptor(self):
        return {"kind": self.kind, "p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @property
    def name(self):
        return f"F{self.p}^{self.k}"

    def random_element(self, rng, bound=3):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def elements(self):
        # integer order of the base-p digit encoding, lowest coefficient fastest
        for tail in itertools.product(range(self.p), repeat=self.k):
            yield tuple(reversed(tail))

    def encode(self, a) -> int:
        return sum(c * self.p**i for i, c in enumerate(a))

    @cached_property
    def element_list(self) -> list:
        return list(self.elements())


QQ = RationalField()
GAUSSIAN = GaussianRationalField()


def field_from_descriptor(desc: dict | str) -> Field:
    """Build a field from a document descriptor or a CLI string (Q, Q(i), F5, F5^2)."""
    if isinstance(desc, str):
        return parse_field(desc)
    try:
        kind = desc["kind"]
        if kind == "rationals":
            return QQ
        if kind == "gaussian-rationals":
            return GAUSSIAN
        if kind == "prime-field":
            return PrimeField(int(desc["p"]))
        if kind == "extension-field":
            return ExtensionField(int(desc["p"]), int(desc["k"]), desc.get("modulus"))
    except (KeyError, TypeError) as exc:
        raise FieldError(f"malformed field descriptor {desc!r}") from exc
    raise FieldError(f"unknown field kind {kind!r}")


def parse_field(text: str) -> Field:
    s = text.strip().replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    if s in ("Q(i)", "QI", "Qi"):
        return GAUSSIAN
    if s.startswith("F") or s.startswith("GF"):
        body = s[2:] if s.startswith("GF") else s[1:]
        if "^" in body:
            p, k = body.split("^", 1)
            try:
                return ExtensionField(int(p), int(k))
            except ValueError as exc:
                raise FieldError(f"bad field {text!r}") from exc
        try:
            return PrimeField(int(body))
        except ValueError as exc:
            raise FieldError(f"bad field {text!r}") from exc
    raise FieldError(f"unknown field {text!r}")


class Scalar:
    """A field element bundled with its field; supports the usual operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = field.coerce(value)

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError("scalars from different fields")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (FieldError, ParseError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self.field.name}, {self})"


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


_EMBED_CACHE: dict = {}


def embed_element(source: Field, target: "ExtensionField", a, image_of_generator=None):
    """Image of ``a`` under a fixed embedding of ``source`` into ``target``.

    Prime fields embed as constants.  An extension F_p[x]/(m) embeds by sending
    x to the first root of m in ``target`` (deterministic), unless an image is given.
    """
    if isinstance(source, PrimeField) or (isinstance(source, ExtensionField) and source.k == 1 and source is not target):
        v = a if isinstance(a, int) else a[0]
        return target.from_int(v)
    if source == target:
        return a
    if not isinstance(source, ExtensionField) or source.p != target.p or target.k % source.k:
        raise FieldError(f"cannot embed {source.name} into {target.name}")
    g = image_of_generator
    if g is None:
        key = (source.descriptor()["modulus"].__repr__(), source.p, target.k, tuple(target.modulus))
        g = _EMBED_CACHE.get(key)
        if g is None:
            from .poly import Poly

            m = Poly(target, [target.from_int(c) for c in source.modulus])
            g = m.roots()[0]
            _EMBED_CACHE[key] = g
    acc = target.zero
    for coef in reversed(a):
        acc = target.add(target.mul(acc, g), target.from_int(coef))
    return acc
