"""Pluecker ideals of Grassmannians and loci cut by exterior-form conditions.

Coordinates p_{i1..ik} are indexed by sorted k-subsets of range(n) in
colexicographic order, the classical listing (p_0123, p_0124, p_0134, ...).
Generators are the quadratic shuffle relations, thinned to a linearly
independent set by exact row reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .domains import QQ
from .exterior import MultiVector, PolyContext, context_for, ksubsets, wedge
from .groebner import Budget, Ideal, set_cached_basis
from .linalg import sparse_rref
from .poly import Polynomial, PolyRing


class GrassmannError(ValueError):
    """Out-of-range parameters or malformed forms."""


def coordinate_name(subset) -> str:
    return "p_" + "".join(str(i) for i in subset)


class PlueckerRing:
    """The polynomial ring on the C(n,k) Pluecker coordinates of G(k,n)."""

    def __init__(self, k: int, n: int, domain=QQ):
        if not 1 <= k < n <= 9:
            raise GrassmannError(f"G({k},{n}) out of supported range")
        self.k = k
        self.n = n
        self.subsets = ksubsets(n, k)
        self.ring = PolyRing([coordinate_name(s) for s in self.subsets], domain)
        self._subset_index = {s: i for i, s in enumerate(self.subsets)}

    def var_index(self, subset) -> int:
        return self._subset_index[tuple(subset)]

    def coordinate(self, subset) -> Polynomial:
        return self.ring.var(coordinate_name(subset))

    def signed_index(self, indices):
        """(sign, position) of a possibly unsorted index tuple; sign 0 if repeated."""
        indices = tuple(indices)
        if len(set(indices)) != len(indices):
            return 0, None
        srt = tuple(sorted(indices))
        sign = 1
        arr = list(indices)
        for i in range(len(arr)):
            for j in range(len(arr) - 1 - i):
                if arr[j] > arr[j + 1]:
                    arr[j], arr[j + 1] = arr[j + 1], arr[j]
                    sign = -sign
        return sign, self._subset_index[srt]


@dataclass
class GrassmannIdeal:
    """A PlueckerRing together with its ideal of quadratic relations."""

    pring: PlueckerRing
    ideal: Ideal
    generator_count: int = field(init=False)

    def __post_init__(self):
        self.generator_count = len(self.ideal.gens)


def shuffle_relations(pring: PlueckerRing):
    """All quadratic shuffle relations of G(k,n), duplicates removed."""
    k, n = pring.k, pring.n
    ring = pring.ring
    nv = ring.nvars
    seen = set()
    out = []
    for alpha in combinations(range(n), k - 1):
        aset = set(alpha)
        for beta in combinations(range(n), k + 1):
            terms: dict = {}
            for j, bj in enumerate(beta):
                if bj in aset:
                    continue
                sign = -1 if j % 2 else 1
                s1, i1 = pring.signed_index(alpha + (bj,))
                rest = beta[:j] + beta[j + 1 :]
                i2 = pring.var_index(rest)
                if s1 == 0:
                    continue
                exp = [0] * nv
                exp[i1] += 1
                exp[i2] += 1
                key = tuple(exp)
                c = terms.get(key, 0) + sign * s1
                if c:
                    terms[key] = c
                else:
                    terms.pop(key, None)
            if not terms:
                continue
            rel = Polynomial(ring, {m: ring.domain.coerce(c) for m, c in terms.items()})
            if rel.is_zero():
                continue
            rel = rel.canonical_scaled()
            fingerprint = tuple(sorted(rel.terms.items()))
            if fingerprint in seen:
                continue
            seen.add(fingerprint)
            out.append(rel)
    return out


def pluecker_ideal(k: int, n: int, domain=QQ, assume_basis: bool = True) -> GrassmannIdeal:
    """The Pluecker ideal of G(k,n): independent quadratic shuffle relations.

    With ``assume_basis`` the generators are installed as a grevlex Groebner
    basis; the straightening law makes them one, and the Buchberger
    certificate in the test suite validates the shortcut.
    """
    pring = PlueckerRing(k, n, domain)
    ring = pring.ring
    rels = shuffle_relations(pring)
    if not rels:
        gi = GrassmannIdeal(pring, Ideal(ring, ()))
        if assume_basis:
            set_cached_basis(gi.ideal, ring.order, ())
        return gi
    bound = ring.bound_order
    rows = [{m: c for m, c in rel.terms.items()} for rel in rels]
    cols = sorted({m for row in rows for m in row}, key=bound.key, reverse=True)
    rank_of = {m: i for i, m in enumerate(cols)}
    pivots, _ = sparse_rref(rows, ring.domain, lambda m: rank_of[m])
    gens = [
        Polynomial(ring, row).canonical_scaled()
        for _, row in sorted(pivots.items(), key=lambda kv: bound.key(kv[0]))
    ]
    gi = GrassmannIdeal(pring, Ideal(ring, gens))
    if assume_basis:
        set_cached_basis(gi.ideal, ring.order, tuple(gens))
    return gi


def expected_generator_count(k: int, n: int) -> int:
    """Independent quadric count: dim Sym^2(Λ^k) minus the degree-2
    coordinate ring of G(k,n) (hook content formula for the 2^k column
    partition)."""
    nk = comb(n, k)
    sym2 = nk * (nk + 1) // 2
    # partition with k rows of length 2
    num = 1
    den = 1
    for i in range(k):
        for j in range(2):
            num *= n + j - i
            den *= (1 - j) + (k - i - 1) + 1  # arm + leg + 1
    return sym2 - num // den


def symbolic_point(pring: PlueckerRing) -> MultiVector:
    """The generic grade-k multivector whose coefficients are the coordinates."""
    ctx = PolyContext(pring.ring)
    terms = {s: pring.coordinate(s) for s in pring.subsets}
    return MultiVector(ctx, pring.k, terms)


def form_zero_locus(omega: MultiVector, gi: GrassmannIdeal, budget: Budget | None = None) -> Ideal:
    """Locus in G(4,7) of 4-spaces annihilated by wedging with a 2-form.

    Adds to the Pluecker ideal the 7 linear forms given by the coefficients
    of alpha wedge omega in the rank-7 top grade; low-rank forms can make
    some of them vanish identically.
    """
    if omega.is_zero():
        raise GrassmannError("the zero form does not cut a locus")
    if omega.grade + gi.pring.k + 1 != 7 + 1:
        raise GrassmannError("grade mismatch: need grade + k = 7 - 1")
    ring = gi.pring.ring
    ctx = PolyContext(ring)
    lifted = MultiVector(
        ctx, omega.grade, {key: ring.const(c) for key, c in omega.terms.items()}
    )
    alpha = symbolic_point(gi.pring)
    product = wedge(alpha, lifted)
    linear = [c for c in product.terms.values() if not c.is_zero()]
    return Ideal(ring, tuple(gi.ideal.gens) + tuple(linear))


def evaluate_at_point(f: Polynomial, point) -> object:
    """Evaluate a Pluecker polynomial at a coordinate vector."""
    dom = f.ring.domain
    total = dom.zero
    for m, c in f.terms.items():
        v = c
        for i, e in enumerate(m):
            for _ in range(e):
                v = dom.mul(v, point[i])
        total = dom.add(total, v)
    return total


def decomposable_point(pring: PlueckerRing, vectors):
    """Pluecker coordinates of the span of k explicit vectors (k x n minors)."""
    k, n = pring.k, pring.n
    dom = pring.ring.domain
    if len(vectors) != k or any(len(v) != n for v in vectors):
        raise GrassmannError("need k vectors of length n")
    ctx = context_for(dom)
    mv = MultiVector.vector(ctx, vectors[0])
    for v in vectors[1:]:
        mv = wedge(mv, MultiVector.vector(ctx, v))
    return [mv.terms.get(s, dom.zero) for s in pring.subsets]
