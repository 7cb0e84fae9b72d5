"""Sparse exact multivariate polynomials.

A polynomial is a dict mapping exponent tuples to nonzero domain scalars.
Values are immutable by convention: no operation mutates its arguments, so
everything is safe to share across threads.

The text grammar (round-trips bit-exactly through ``parse_poly``/``str``):
variables match ``[a-zA-Z][a-zA-Z0-9_]*``; integer and rational (``num/den``)
literals; operators ``+ - * ^`` and parentheses.  Canonical printing lists
terms in decreasing display order, e.g. ``2*a^4 + 3*a^2*b*c + b^2*c^2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

from .domains import QQ, DomainError, PrimeField, Rationals
from .orders import GREVLEX, BoundOrder


class PolyError(ValueError):
    """Malformed polynomial input or incompatible operands."""


class PolyRing:
    """Ordered variable names plus a scalar domain (and a display order)."""

    __slots__ = ("names", "domain", "order", "_index", "_bound")

    def __init__(self, names, domain=QQ, order=GREVLEX):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise PolyError("duplicate variable names")
        for nm in names:
            if not re.fullmatch(r"[a-zA-Z][a-zA-Z0-9_]*", nm):
                raise PolyError(f"invalid variable name {nm!r}")
        self.names = names
        self.domain = domain
        self.order = order
        self._index = {nm: i for i, nm in enumerate(names)}
        self._bound = order.bind(len(names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def bound_order(self) -> BoundOrder:
        return self._bound

    def bind(self, order) -> BoundOrder:
        return order.bind(self.nvars)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"undeclared variable {name!r}") from None

    def var(self, name: str) -> "Polynomial":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return Polynomial(self, {tuple(exp): self.domain.one})

    def gens(self):
        return [self.var(nm) for nm in self.names]

    def const(self, value) -> "Polynomial":
        c = self.domain.coerce(value)
        if c == 0:
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c})

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)

    def with_domain(self, domain) -> "PolyRing":
        return PolyRing(self.names, domain, self.order)

    def without(self, drop_names) -> "PolyRing":
        drop = set(drop_names)
        return PolyRing([n for n in self.names if n not in drop], self.domain, self.order)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyRing)
            and other.names == self.names
            and other.domain == self.domain
            and other.order == self.order
        )

    def __hash__(self) -> int:
        return hash((self.names, self.domain, self.order))

    def __repr__(self) -> str:
        return f"PolyRing({', '.join(self.names)}; {self.domain!r})"


class Polynomial:
    """An immutable sparse polynomial over its ring's scalar domain."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict, _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            self.terms = {m: c for m, c in terms.items() if c != 0}

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_value(self):
        if not self.terms:
            return self.ring.domain.zero
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def variables(self):
        """Names of variables actually occurring."""
        seen = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    seen.add(i)
        return {self.ring.names[i] for i in seen}

    def coeff(self, monomial):
        return self.terms.get(tuple(monomial), self.ring.domain.zero)

    def sorted_terms(self, bound: BoundOrder | None = None):
        """Terms as (exponent, coeff) pairs in decreasing order."""
        bound = bound or self.ring.bound_order
        return sorted(self.terms.items(), key=lambda t: bound.key(t[0]), reverse=True)

    def leading(self, bound: BoundOrder | None = None):
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        bound = bound or self.ring.bound_order
        m = max(self.terms, key=bound.key)
        return m, self.terms[m]

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise PolyError("ring mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        dom = self.ring.domain
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = dom.add(out.get(m, dom.zero), c)
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial(self.ring, out, _clean=True)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        dom = self.ring.domain
        return Polynomial(self.ring, {m: dom.neg(c) for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return (self.__neg__()).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        dom = self.ring.domain
        out: dict = {}
        if len(self.terms) < len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                s = dom.add(out.get(m, dom.zero), dom.mul(c1, c2))
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Polynomial(self.ring, out, _clean=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise PolyError("negative exponent")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, value):
        c = self.ring.domain.coerce(value)
        if c == 0:
            return self.ring.zero
        dom = self.ring.domain
        return Polynomial(self.ring, {m: dom.mul(v, c) for m, v in self.terms.items()}, _clean=True)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return (
            isinstance(other, Polynomial)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    __hash__ = None  # mutable-dict payload; polynomials are not dict keys

    # -- calculus and substitution ----------------------------------------

    def derivative(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        dom = self.ring.domain
        out: dict = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = m[:i] + (e - 1,) + m[i + 1 :]
            s = dom.add(out.get(dm, dom.zero), dom.mul(c, dom.coerce(e)))
            if s == 0:
                out.pop(dm, None)
            else:
                out[dm] = s
        return Polynomial(self.ring, out, _clean=True)

    def specialize(self, assignments: dict, excluded: dict | None = None) -> "Polynomial":
        """Evaluate some variables at scalars, landing in the smaller ring.

        ``excluded`` maps variable names to values at which specialization is
        declared invalid (recorded poles of cleared coefficients).
        """
        ring = self.ring
        dom = ring.domain
        values = {}
        for name, raw in assignments.items():
            idx = ring.index(name)
            val = dom.coerce(raw)
            if excluded and name in excluded:
                bad = {dom.coerce(v) for v in excluded[name]}
                if val in bad:
                    raise DomainError(f"{name} = {raw} lies in the excluded set")
            values[idx] = val
        keep = [i for i in range(ring.nvars) if i not in values]
        small = PolyRing([ring.names[i] for i in keep], dom, ring.order)
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                acc = dom.one
                for _ in range(e):
                    acc = dom.mul(acc, values[i])
                powers[key] = acc
            return powers[key]

        out: dict = {}
        for m, c in self.terms.items():
            for i in values:
                e = m[i]
                if e:
                    c = dom.mul(c, power(i, e))
                if c == 0:
                    break
            if c == 0:
                continue
            mm = tuple(m[i] for i in keep)
            s = dom.add(out.get(mm, dom.zero), c)
            if s == 0:
                out.pop(mm, None)
            else:
                out[mm] = s
        return Polynomial(small, out, _clean=True)

    def substitute(self, mapping: dict) -> "Polynomial":
        """Replace variables by polynomials of the same ring."""
        ring = self.ring
        repl = {ring.index(nm): p for nm, p in mapping.items()}
        for p in repl.values():
            self._check(p)
        power_cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = repl[i] ** e
            return power_cache[key]

        result = ring.zero
        for m, c in self.terms.items():
            base = tuple(0 if i in repl else e for i, e in enumerate(m))
            piece = Polynomial(ring, {base: c}, _clean=True)
            for i, e in enumerate(m):
                if e and i in repl:
                    piece = piece * power(i, e)
            result = result + piece
        return result

    def map_domain(self, domain) -> "Polynomial":
        """Reinterpret the coefficients in another domain."""
        ring = PolyRing(self.ring.names, domain, self.ring.order)
        out: dict = {}
        for m, c in self.terms.items():
            v = domain.coerce(c)
            if v != 0:
                out[m] = v
        return Polynomial(ring, out, _clean=True)

    # -- canonical scaling -------------------------------------------------

    def canonical_scaled(self) -> "Polynomial":
        """Normalize up to a nonzero scalar.

        Rational domain: integer-primitive content, positive leading
        coefficient.  Prime field: monic.
        """
        if not self.terms:
            return self
        dom = self.ring.domain
        if not isinstance(dom, Rationals):
            _, lc = self.leading()
            return self.scale(dom.inv(lc))
        den_lcm = 1
        for c in self.terms.values():
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, c.numerator * den_lcm // c.denominator)
        factor = Fraction(den_lcm, num_gcd)
        _, lc = self.leading()
        if lc < 0:
            factor = -factor
        return self.scale(factor)

    def proportional_to(self, other: "Polynomial") -> bool:
        """Equality up to a nonzero scalar."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.canonical_scaled() == other.canonical_scaled()

    # -- key-space conversion ----------------------------------------------

    def to_keydict(self, bound: BoundOrder) -> dict:
        key = bound.key
        return {key(m): c for m, c in self.terms.items()}

    @classmethod
    def from_keydict(cls, ring: PolyRing, bound: BoundOrder, kd: dict) -> "Polynomial":
        unkey = bound.exp
        return cls(ring, {unkey(k): c for k, c in kd.items() if c != 0}, _clean=True)

    # -- printing -----------------------------------------------------------

    def _fmt_monomial(self, m) -> str:
        parts = []
        for name, e in zip(self.ring.names, m):
            if e == 0:
                continue
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        dom = self.ring.domain
        rational = isinstance(dom, Rationals)
        chunks = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono = self._fmt_monomial(m)
            if rational and c < 0:
                sign = "-"
                mag = -c
            else:
                sign = "+"
                mag = c
            if not mono:
                body = dom.fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{dom.fmt(mag)}*{mono}"
            if i == 0:
                chunks.append(body if sign == "+" else f"-{body}")
            else:
                chunks.append(f" {sign} {body}")
        return "".join(chunks)

    def __repr__(self) -> str:
        return f"<{self}>"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*^()/]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolyError(f"malformed syntax near {text[pos:pos+12]!r}")
            break
        if m.group("num") is not None:
            out.append(("num", int(m.group("num"))))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, ring: PolyRing):
        self.toks = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise PolyError(f"malformed syntax: expected {op!r}")

    def parse_expr(self) -> Polynomial:
        kind, val = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        result = self.parse_term()
        if negate:
            result = -result
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.parse_term()
                result = result - rhs if val == "-" else result + rhs
            else:
                return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.parse_factor()
            elif kind == "op" and val == "/":
                self.take()
                divisor = self.parse_factor()
                if not divisor.is_constant() or divisor.is_zero():
                    raise PolyError("division by a non-unit scalar")
                result = result.scale(self.ring.domain.inv(divisor.constant_value()))
            else:
                return result

    def parse_factor(self) -> Polynomial:
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.parse_factor()
        base = self.parse_atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, e = self.take()
            if kind != "num":
                raise PolyError("malformed syntax: exponent must be an integer")
            return base**e
        return base

    def parse_atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise PolyError("malformed syntax")


def parse_poly(text: str, ring: PolyRing) -> Polynomial:
    """Parse an expression in the polynomial grammar into canonical form."""
    parser = _Parser(_tokenize(text), ring)
    result = parser.parse_expr()
    if parser.peek()[0] != "end":
        raise PolyError("malformed syntax: trailing input")
    return result
