"""Exterior algebra on a rank-7 space with its integer torus grading.

Basis vectors are e_0 .. e_6; the weight of e_j is j - 3, so the standard
one-parameter torus acts on e_j with weight j - 3 and weights add under
wedge.  Coefficients are either domain scalars or polynomials (the latter is
what makes symbolic wedge computations with undetermined Pluecker
coordinates possible).
"""

from __future__ import annotations

from itertools import combinations

from .domains import PrimeField, Rationals
from .poly import Polynomial, PolyRing

RANK = 7

TorusWeight = int  # weight of e_j is j - 3


class ExteriorError(ValueError):
    """Grade overflow, mixed weights, or malformed input."""


class ScalarContext:
    """Coefficient operations for a plain scalar domain."""

    def __init__(self, domain):
        self.domain = domain

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def coerce(self, x):
        return self.domain.coerce(x)

    def add(self, a, b):
        return self.domain.add(a, b)

    def mul(self, a, b):
        return self.domain.mul(a, b)

    def neg(self, a):
        return self.domain.neg(a)

    def is_zero(self, a):
        return a == 0

    def fmt(self, a):
        return self.domain.fmt(a)

    def __eq__(self, other):
        return isinstance(other, ScalarContext) and other.domain == self.domain

    def __hash__(self):
        return hash(("scalar", self.domain))


class PolyContext:
    """Coefficient operations for polynomial coefficients in a fixed ring."""

    def __init__(self, ring: PolyRing):
        self.ring = ring

    @property
    def zero(self):
        return self.ring.zero

    @property
    def one(self):
        return self.ring.one

    def coerce(self, x):
        if isinstance(x, Polynomial):
            if x.ring != self.ring:
                raise ExteriorError("coefficient ring mismatch")
            return x
        return self.ring.const(x)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def fmt(self, a):
        return f"({a})"

    def __eq__(self, other):
        return isinstance(other, PolyContext) and other.ring == self.ring

    def __hash__(self):
        return hash(("poly", self.ring))


def context_for(carrier):
    if isinstance(carrier, PolyRing):
        return PolyContext(carrier)
    if isinstance(carrier, (Rationals, PrimeField)):
        return ScalarContext(carrier)
    raise ExteriorError(f"unsupported coefficient carrier {carrier!r}")


def merge_sign(a, b):
    """Merge two strictly increasing index tuples; Koszul sign or None.

    Returns (sign, merged) with sign in {1, -1}, or (0, ()) on a repeated
    index.  The sign counts the transpositions that sort a + b.
    """
    inversions = 0
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return 0, ()
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            inversions += len(a) - i
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (1 if inversions % 2 == 0 else -1), tuple(out)


class MultiVector:
    """A graded exterior-algebra element keyed by sorted index subsets."""

    __slots__ = ("context", "grade", "terms")

    def __init__(self, context, grade: int, terms: dict, _clean: bool = False):
        if not 0 <= grade <= RANK:
            raise ExteriorError(f"grade {grade} out of range")
        self.context = context
        self.grade = grade
        if _clean:
            self.terms = terms
        else:
            cleaned = {}
            for key, c in terms.items():
                key = tuple(key)
                if len(key) != grade or list(key) != sorted(set(key)):
                    raise ExteriorError(f"bad index tuple {key} for grade {grade}")
                if any(not 0 <= i < RANK for i in key):
                    raise ExteriorError(f"index out of range in {key}")
                if not context.is_zero(c):
                    cleaned[key] = c
            self.terms = cleaned

    @classmethod
    def zero(cls, context, grade: int) -> "MultiVector":
        return cls(context, grade, {}, _clean=True)

    @classmethod
    def basis(cls, context, indices) -> "MultiVector":
        indices = tuple(indices)
        return cls(context, len(indices), {indices: context.one})

    @classmethod
    def vector(cls, context, coeffs) -> "MultiVector":
        """Grade-1 element from a length-7 coefficient sequence."""
        terms = {(i,): context.coerce(c) for i, c in enumerate(coeffs)}
        return cls(context, 1, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultiVector)
            and other.context == self.context
            and other.grade == self.grade
            and other.terms == self.terms
        )

    __hash__ = None

    def __add__(self, other: "MultiVector") -> "MultiVector":
        if other.grade != self.grade or other.context != self.context:
            raise ExteriorError("grade or context mismatch in addition")
        ctx = self.context
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = ctx.add(out.get(k, ctx.zero), c)
            if ctx.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return MultiVector(ctx, self.grade, out, _clean=True)

    def __neg__(self) -> "MultiVector":
        ctx = self.context
        return MultiVector(ctx, self.grade, {k: ctx.neg(c) for k, c in self.terms.items()}, _clean=True)

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def scale(self, value) -> "MultiVector":
        ctx = self.context
        c0 = ctx.coerce(value)
        out = {}
        for k, c in self.terms.items():
            v = ctx.mul(c, c0)
            if not ctx.is_zero(v):
                out[k] = v
        return MultiVector(ctx, self.grade, out, _clean=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ctx = self.context
        parts = []
        for key in sorted(self.terms):
            mono = "^".join(f"e_{i}" for i in key) if key else "1"
            parts.append(f"{ctx.fmt(self.terms[key])}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self}>"


def wedge(a: MultiVector, b: MultiVector) -> MultiVector:
    """Exterior product with Koszul signs from sorting the index tuples."""
    if a.context != b.context:
        raise ExteriorError("context mismatch in wedge")
    grade = a.grade + b.grade
    if grade > RANK:
        raise ExteriorError("grade overflow in wedge")
    ctx = a.context
    out: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign, key = merge_sign(ka, kb)
            if sign == 0:
                continue
            c = ctx.mul(ca, cb)
            if sign < 0:
                c = ctx.neg(c)
            s = ctx.add(out.get(key, ctx.zero), c)
            if ctx.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
    return MultiVector(ctx, grade, out, _clean=True)


def index_weight(i: int) -> TorusWeight:
    return i - 3


def torus_weight(a: MultiVector) -> TorusWeight:
    """Common torus weight of all terms; mixed weights are an error."""
    if a.is_zero():
        raise ExteriorError("the zero multivector has no weight")
    weights = {sum(i - 3 for i in key) for key in a.terms}
    if len(weights) > 1:
        raise ExteriorError(f"inhomogeneous multivector: weights {sorted(weights)}")
    return weights.pop()


def pairing_to_scalar(a: MultiVector, b: MultiVector):
    """Coefficient of e_0^...^e_6 in a wedge b (complementary grades)."""
    if a.grade + b.grade != RANK:
        raise ExteriorError("grades are not complementary")
    ctx = a.context
    if ctx != b.context:
        raise ExteriorError("context mismatch in pairing")
    total = ctx.zero
    for ka, ca in a.terms.items():
        comp = tuple(i for i in range(RANK) if i not in ka)
        cb = b.terms.get(comp)
        if cb is None:
            continue
        sign, _ = merge_sign(ka, comp)
        c = ctx.mul(ca, cb)
        if sign < 0:
            c = ctx.neg(c)
        total = ctx.add(total, c)
    return total


def ksubsets(n: int, k: int):
    """All k-subsets of range(n) in colexicographic order."""
    subs = list(combinations(range(n), k))
    subs.sort(key=lambda t: tuple(reversed(t)))
    return subs


def parse_form(text: str, context) -> MultiVector:
    """Parse the serialized form ``c*e_i^e_j + ...`` (scalar contexts)."""
    text = text.replace("-", "+-").replace("++-", "+-")
    chunks = [c.strip() for c in text.split("+") if c.strip()]
    grade = None
    terms: dict = {}
    for chunk in chunks:
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:].strip()
        pieces = [p.strip() for p in chunk.split("*")]
        coeff_parts = [p for p in pieces if not p.startswith("e_")]
        index_parts = [p for p in pieces if p.startswith("e_")]
        idx = []
        for p in index_parts:
            for atom in p.split("^"):
                if not atom.startswith("e_"):
                    raise ExteriorError(f"malformed basis factor {atom!r}")
                idx.append(int(atom[2:]))
        key = tuple(idx)
        if sorted(set(idx)) != idx:
            raise ExteriorError(f"indices must be strictly increasing: {key}")
        if grade is None:
            grade = len(key)
        elif grade != len(key):
            raise ExteriorError("mixed grades in serialized form")
        c = context.one
        for p in coeff_parts:
            c = context.mul(c, context.coerce(p if not p.isdigit() else int(p)))
        if neg:
            c = context.neg(c)
        old = terms.get(key)
        terms[key] = c if old is None else context.add(old, c)
    if grade is None:
        raise ExteriorError("empty form")
    return MultiVector(context, grade, terms)
