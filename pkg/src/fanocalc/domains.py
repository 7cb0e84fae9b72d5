"""Exact scalar domains: the rational field and prime fields.

Every coefficient in the engine lives in one of these two domains.  Rational
values are ``fractions.Fraction`` instances (always in lowest terms with a
positive denominator); prime-field values are plain ints reduced into
``[0, p)``.  No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class DomainError(ValueError):
    """Invalid domain construction or a scalar that cannot be coerced."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Rationals:
    """The field of rational numbers."""

    is_prime_field = False
    characteristic = 0

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("QQ")

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def coerce(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise DomainError(f"cannot coerce {value!r} into QQ")

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        return a - b

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise DomainError("division by zero in QQ")
        return 1 / a

    def fmt(self, a: Fraction) -> str:
        return str(a)


class PrimeField:
    """The field Z/p for a prime modulus p."""

    is_prime_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise DomainError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def coerce(self, value) -> int:
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise DomainError(f"denominator of {value} vanishes mod {p}")
            return value.numerator % p * pow(den, p - 2, p) % p
        if isinstance(value, str):
            return self.coerce(Fraction(value))
        raise DomainError(f"cannot coerce {value!r} into GF({p})")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DomainError(f"division by zero in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def fmt(self, a: int) -> str:
        return str(a % self.p)


def _fraction_sqrt(a: Fraction):
    """Exact square root of a non-negative rational, or None."""
    if a < 0:
        return None
    num = _isqrt_exact(a.numerator)
    den = _isqrt_exact(a.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def _modular_sqrt(a: int, p: int):
    """A square root of a mod p, or None (Tonelli-Shanks, deterministic)."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks with the smallest quadratic non-residue as generator
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class QuadraticExtension:
    """The quotient field base[s]/(s^2 - m) for a non-square m.

    Elements are pairs (x, y) standing for x + y*s.  Used for conic
    splittings that only exist over a quadratic extension.
    """

    is_prime_field = False

    def __init__(self, base, m):
        if isinstance(base, QuadraticExtension):
            raise DomainError("nested quadratic extensions are not supported")
        m = base.coerce(m)
        if m == 0 or base_square_root(base, m) is not None:
            raise DomainError(f"{m} is a square in the base field")
        self.base = base
        self.m = m
        self.characteristic = base.characteristic

    def __repr__(self) -> str:
        return f"{self.base!r}(sqrt({self.base.fmt(self.m)}))"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuadraticExtension)
            and other.base == self.base
            and other.m == self.m
        )

    def __hash__(self) -> int:
        return hash(("quadext", self.base, self.m))

    @property
    def zero(self):
        return (self.base.zero, self.base.zero)

    @property
    def one(self):
        return (self.base.one, self.base.zero)

    @property
    def sqrt_gen(self):
        return (self.base.zero, self.base.one)

    def coerce(self, value):
        if isinstance(value, tuple) and len(value) == 2:
            return (self.base.coerce(value[0]), self.base.coerce(value[1]))
        return (self.base.coerce(value), self.base.zero)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def sub(self, a, b):
        return (self.base.sub(a[0], b[0]), self.base.sub(a[1], b[1]))

    def mul(self, a, b):
        bb = self.base
        x = bb.add(bb.mul(a[0], b[0]), bb.mul(self.m, bb.mul(a[1], b[1])))
        y = bb.add(bb.mul(a[0], b[1]), bb.mul(a[1], b[0]))
        return (x, y)

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def inv(self, a):
        bb = self.base
        norm = bb.sub(bb.mul(a[0], a[0]), bb.mul(self.m, bb.mul(a[1], a[1])))
        if norm == 0:
            raise DomainError("division by zero in quadratic extension")
        ninv = bb.inv(norm)
        return (bb.mul(a[0], ninv), bb.neg(bb.mul(a[1], ninv)))

    def fmt(self, a) -> str:
        x, y = a
        if y == 0:
            return self.base.fmt(x)
        s = f"sqrt({self.base.fmt(self.m)})"
        if x == 0:
            return f"{self.base.fmt(y)}*{s}"
        return f"{self.base.fmt(x)} + {self.base.fmt(y)}*{s}"


def base_square_root(domain, a):
    """A square root of ``a`` inside the domain itself, or None."""
    if isinstance(domain, Rationals):
        return _fraction_sqrt(a)
    if isinstance(domain, PrimeField):
        return _modular_sqrt(a, domain.p)
    if isinstance(domain, QuadraticExtension):
        # only roots of base-field elements are needed here
        if a[1] == 0:
            r = base_square_root(domain.base, a[0])
            if r is not None:
                return (r, domain.base.zero)
            quot = domain.base.mul(a[0], domain.base.inv(domain.m))
            r = base_square_root(domain.base, quot)
            if r is not None:
                return (domain.base.zero, r)
        return None
    raise DomainError(f"no square-root routine for {domain!r}")


QQ = Rationals()
