"""Buchberger Groebner engine and the ideal-theory toolbox.

The engine works in key space (see :mod:`fanocalc.orders`): a polynomial is a
dict mapping order-key tuples to coefficients, the leading term is the dict
max, and monomial products are componentwise key sums.  Over a prime field
coefficients are ints mod p; over the rationals the engine is fraction-free
(integer coefficients, content-stripped), so no Fraction arithmetic occurs in
the hot loop.

Pair selection uses the normal strategy (minimal lcm in the order, ties by
generator indices) together with the Buchberger coprimality and chain
criteria.  All tie-breaks are resolved by total orders on indices, so the
reduced basis is byte-for-byte reproducible.
"""

from __future__ import annotations

import heapq
import os
from fractions import Fraction
from math import gcd

from .domains import PrimeField, Rationals
from .orders import GREVLEX, BlockElim, exp_lcm
from .poly import Polynomial, PolyRing

ENV_BUDGET_STEPS = "FANOCALC_BUDGET_STEPS"


class BudgetExceeded(RuntimeError):
    """A resource cap was hit; distinct from any mathematical failure."""

    def __init__(self, kind: str, limit):
        super().__init__(f"{kind} budget exceeded (limit {limit})")
        self.kind = kind
        self.limit = limit


class Budget:
    """Step and degree caps shared across one logical computation."""

    __slots__ = ("max_steps", "max_degree", "steps")

    def __init__(self, max_steps=None, max_degree=None):
        if max_steps is None:
            env = os.environ.get(ENV_BUDGET_STEPS)
            max_steps = int(env) if env else None
        self.max_steps = max_steps
        self.max_degree = max_degree
        self.steps = 0

    def tick(self, n: int = 1):
        self.steps += n
        if self.max_steps is not None and self.steps > self.max_steps:
            raise BudgetExceeded("step", self.max_steps)

    def check_degree(self, deg: int):
        if self.max_degree is not None and deg > self.max_degree:
            raise BudgetExceeded("degree", self.max_degree)


class Ideal:
    """A generator list with cached reduced Groebner bases per order."""

    __slots__ = ("ring", "gens", "_bases")

    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        cleaned = []
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator ring mismatch")
            if not g.is_zero():
                cleaned.append(g)
        self.gens = tuple(cleaned)
        self._bases = {}

    def cached_basis(self, order=None):
        order = order or self.ring.order
        return self._bases.get(self.ring.bind(order).signature)

    def __repr__(self) -> str:
        return f"Ideal({len(self.gens)} gens in {self.ring!r})"


# -- key-space normal form ----------------------------------------------------


def _neg(k):
    return tuple(-x for x in k)


def _nf_keydict(work, basis, bound, domain, budget):
    """Normal form of ``work`` (consumed) against prepared ``basis`` rows.

    Basis rows are (lm_key, lc, tail_items) with unit-normalized or
    primitive-integer coefficients depending on the domain.  Returns the
    remainder keydict; over the rationals the remainder is primitive up to
    the final content strip done by the caller.
    """
    modp = isinstance(domain, PrimeField)
    rational = isinstance(domain, Rationals)
    p = domain.p if modp else 0
    divides = bound.divides
    rem = {}
    heap = [_neg(k) for k in work]
    heapq.heapify(heap)
    lms = [row[0] for row in basis]
    strip_countdown = 64
    while heap:
        k = _neg(heapq.heappop(heap))
        c = work.get(k)
        if c is None:
            continue
        reducer = None
        for idx, lm in enumerate(lms):
            if divides(lm, k):
                reducer = basis[idx]
                break
        if reducer is None:
            del work[k]
            rem[k] = c
            continue
        budget.tick()
        del work[k]
        lm, lc, tail = reducer
        u = tuple(x - y for x, y in zip(k, lm))
        if not modp and not rational:
            factor = domain.mul(c, domain.inv(lc))
            zero = domain.zero
            for kt, ct in tail:
                kk = tuple(x + y for x, y in zip(u, kt))
                prev = work.get(kk)
                if prev is None:
                    v = domain.neg(domain.mul(factor, ct))
                    if v != zero:
                        work[kk] = v
                        heapq.heappush(heap, _neg(kk))
                else:
                    v = domain.sub(prev, domain.mul(factor, ct))
                    if v != zero:
                        work[kk] = v
                    else:
                        del work[kk]
            continue
        if modp:
            factor = c * pow(lc, p - 2, p) % p
            for kt, ct in tail:
                kk = tuple(x + y for x, y in zip(u, kt))
                prev = work.get(kk)
                if prev is None:
                    v = -factor * ct % p
                    if v:
                        work[kk] = v
                        heapq.heappush(heap, _neg(kk))
                else:
                    v = (prev - factor * ct) % p
                    if v:
                        work[kk] = v
                    else:
                        del work[kk]
        else:
            g = gcd(c, lc)
            cf = c // g
            gf = lc // g
            if gf < 0:
                gf, cf = -gf, -cf
            if gf != 1:
                for kk in work:
                    work[kk] *= gf
                for kk in rem:
                    rem[kk] *= gf
            for kt, ct in tail:
                kk = tuple(x + y for x, y in zip(u, kt))
                prev = work.get(kk)
                if prev is None:
                    v = -cf * ct
                    if v:
                        work[kk] = v
                        heapq.heappush(heap, _neg(kk))
                else:
                    v = prev - cf * ct
                    if v:
                        work[kk] = v
                    else:
                        del work[kk]
            strip_countdown -= 1
            if strip_countdown == 0:
                strip_countdown = 64
                _strip_content_pair(work, rem)
        # note: tail keys are strictly below k, so every key is processed once
    if rational:
        _strip_content_pair(rem, None)
    return rem


def _strip_content_pair(a, b):
    g = 0
    for v in a.values():
        g = gcd(g, v)
        if g == 1:
            return
    if b:
        for v in b.values():
            g = gcd(g, v)
            if g == 1:
                return
    if g > 1:
        for k in a:
            a[k] //= g
        if b:
            for k in b:
                b[k] //= g


def _prepare_rows(keydicts, domain):
    """Turn basis keydicts into (lm, lc, tail) rows for the reducer."""
    rows = []
    for kd in keydicts:
        lm = max(kd)
        lc = kd[lm]
        tail = tuple((k, c) for k, c in kd.items() if k != lm)
        rows.append((lm, lc, tail))
    return rows


def _normalize_keydict(kd, domain):
    """Monic over a field; integer-primitive positive-lead over QQ."""
    if not kd:
        return kd
    if isinstance(domain, PrimeField):
        p = domain.p
        lc = kd[max(kd)]
        if lc != 1:
            inv = pow(lc, p - 2, p)
            return {k: c * inv % p for k, c in kd.items()}
        return kd
    if not isinstance(domain, Rationals):
        lc = kd[max(kd)]
        if lc != domain.one:
            inv = domain.inv(lc)
            return {k: domain.mul(c, inv) for k, c in kd.items()}
        return kd
    den = 1
    for c in kd.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = {k: int(c * den) if isinstance(c, Fraction) else c * den for k, c in kd.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if ints[max(ints)] < 0:
        g = -g
    return {k: v // g for k, v in ints.items()}


# -- Buchberger ---------------------------------------------------------------


def _buchberger_engine(keydicts, bound, domain, budget):
    """Reduced Groebner basis of the input keydicts, deterministically."""
    basis = []
    exps = []
    rows = []
    for kd in keydicts:
        kd = _normalize_keydict(kd, domain)
        if kd and kd not in basis:
            basis.append(kd)
            exps.append(bound.exp(max(kd)))
            rows.append(_prepare_rows([kd], domain)[0])
    pairs = []
    done = set()

    def push_pairs(j):
        ej = exps[j]
        for i in range(j):
            lcm = exp_lcm(exps[i], ej)
            heapq.heappush(pairs, (bound.key(lcm), i, j))

    for j in range(len(basis)):
        push_pairs(j)

    modp = isinstance(domain, PrimeField)
    rational = isinstance(domain, Rationals)
    p = domain.p if modp else 0

    while pairs:
        lcm_key, i, j = heapq.heappop(pairs)
        done.add((i, j))
        ei, ej = exps[i], exps[j]
        lcm = exp_lcm(ei, ej)
        budget.check_degree(sum(lcm))
        # coprimality criterion
        if all(x == 0 or y == 0 for x, y in zip(ei, ej)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            ek = exps[k]
            if all(a <= b for a, b in zip(ek, lcm)):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in done and pjk in done:
                    skip = True
                    break
        if skip:
            continue
        # s-polynomial
        fi, fj = basis[i], basis[j]
        lmi, lmj = max(fi), max(fj)
        klcm = bound.key(lcm)
        ui = tuple(x - y for x, y in zip(klcm, lmi))
        uj = tuple(x - y for x, y in zip(klcm, lmj))
        ci, cj = fi[lmi], fj[lmj]
        if modp:
            s = {}
            for k, c in fi.items():
                s[tuple(x + y for x, y in zip(ui, k))] = c * cj % p
            for k, c in fj.items():
                kk = tuple(x + y for x, y in zip(uj, k))
                v = (s.get(kk, 0) - c * ci) % p
                if v:
                    s[kk] = v
                else:
                    s.pop(kk, None)
        elif rational:
            g = gcd(ci, cj)
            mi, mj = cj // g, ci // g
            s = {}
            for k, c in fi.items():
                s[tuple(x + y for x, y in zip(ui, k))] = c * mi
            for k, c in fj.items():
                kk = tuple(x + y for x, y in zip(uj, k))
                v = s.get(kk, 0) - c * mj
                if v:
                    s[kk] = v
                else:
                    s.pop(kk, None)
        else:
            zero = domain.zero
            s = {}
            for k, c in fi.items():
                s[tuple(x + y for x, y in zip(ui, k))] = domain.mul(c, cj)
            for k, c in fj.items():
                kk = tuple(x + y for x, y in zip(uj, k))
                v = domain.sub(s.get(kk, zero), domain.mul(c, ci))
                if v != zero:
                    s[kk] = v
                else:
                    s.pop(kk, None)
        if not s:
            continue
        r = _nf_keydict(s, rows, bound, domain, budget)
        if r:
            r = _normalize_keydict(r, domain)
            basis.append(r)
            exps.append(bound.exp(max(r)))
            rows.append(_prepare_rows([r], domain)[0])
            push_pairs(len(basis) - 1)

    return _interreduce(basis, bound, domain, budget)


def _interreduce(basis, bound, domain, budget):
    """Minimalize and tail-reduce: the unique reduced basis, sorted by lead."""
    order = sorted(range(len(basis)), key=lambda i: max(basis[i]))
    kept = []
    for i in order:
        lm = max(basis[i])
        if any(bound.divides(max(g), lm) for g in kept):
            continue
        kept.append(basis[i])
    reduced = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1 :]
        if not others:
            reduced.append(_normalize_keydict(g, domain))
            continue
        rows = _prepare_rows(others, domain)
        r = _nf_keydict(dict(g), rows, bound, domain, budget)
        if r:
            reduced.append(_normalize_keydict(r, domain))
    reduced.sort(key=max)
    return reduced


def _to_engine(polys, bound, domain):
    out = []
    for f in polys:
        kd = f.to_keydict(bound)
        out.append(_normalize_keydict(kd, domain))
    return out


def _from_engine(ring, bound, keydicts):
    dom = ring.domain
    polys = []
    for kd in keydicts:
        if isinstance(dom, Rationals):
            kd = {k: Fraction(c) for k, c in kd.items()}
        polys.append(Polynomial.from_keydict(ring, bound, kd))
    return tuple(polys)


def groebner_basis(ideal: Ideal, order=None, budget: Budget | None = None):
    """Reduced Groebner basis of ``ideal`` for ``order`` (cached).

    Deterministic for fixed input and order.  Basis elements are normalized
    to canonical scaling (integer-primitive positive-lead over QQ, monic over
    a prime field) and sorted by increasing leading monomial.
    """
    ring = ideal.ring
    order = order or ring.order
    bound = ring.bind(order)
    cached = ideal._bases.get(bound.signature)
    if cached is not None:
        return cached
    budget = budget or Budget()
    engine_in = _to_engine(ideal.gens, bound, ring.domain)
    engine_out = _buchberger_engine(engine_in, bound, ring.domain, budget)
    basis = _from_engine(ring, bound, engine_out)
    basis = tuple(f.canonical_scaled() for f in basis)
    ideal._bases[bound.signature] = basis
    return basis


def set_cached_basis(ideal: Ideal, order, basis):
    """Install a known reduced basis (validated elsewhere by certificate)."""
    bound = ideal.ring.bind(order)
    ideal._bases[bound.signature] = tuple(basis)


def normal_form(f: Polynomial, ideal: Ideal, order=None) -> Polynomial:
    """Unique remainder of f modulo the ideal's cached reduced basis."""
    ring = ideal.ring
    if f.ring != ring:
        raise ValueError("ring mismatch")
    order = order or ring.order
    bound = ring.bind(order)
    basis = ideal._bases.get(bound.signature)
    if basis is None:
        raise ValueError("basis missing: compute groebner_basis first")
    if not basis:
        return f
    if isinstance(ring.domain, Rationals):
        return _nf_rational(f, basis, bound)
    rows = _prepare_rows(_to_engine(basis, bound, ring.domain), ring.domain)
    rem = _nf_keydict(f.to_keydict(bound), rows, bound, ring.domain, Budget())
    return Polynomial.from_keydict(ring, bound, rem)


def _nf_rational(f: Polynomial, basis, bound) -> Polynomial:
    """Exact rational normal form (tracks the true scalar)."""
    ring = f.ring
    rows = []
    for g in basis:
        kd = g.to_keydict(bound)
        lm = max(kd)
        rows.append((lm, kd[lm], tuple((k, c) for k, c in kd.items() if k != lm)))
    divides = bound.divides
    work = f.to_keydict(bound)
    rem = {}
    heap = [_neg(k) for k in work]
    heapq.heapify(heap)
    while heap:
        k = _neg(heapq.heappop(heap))
        c = work.get(k)
        if c is None:
            continue
        reducer = None
        for lm, lc, tail in rows:
            if divides(lm, k):
                reducer = (lm, lc, tail)
                break
        if reducer is None:
            del work[k]
            rem[k] = c
            continue
        del work[k]
        lm, lc, tail = reducer
        u = tuple(x - y for x, y in zip(k, lm))
        factor = c / lc
        for kt, ct in tail:
            kk = tuple(x + y for x, y in zip(u, kt))
            prev = work.get(kk)
            if prev is None:
                v = -factor * ct
                if v:
                    work[kk] = v
                    heapq.heappush(heap, _neg(kk))
            else:
                v = prev - factor * ct
                if v:
                    work[kk] = v
                else:
                    del work[kk]
    return Polynomial.from_keydict(ring, bound, rem)


def ideal_contains(ideal: Ideal, f: Polynomial, order=None, budget=None) -> bool:
    order = order or ideal.ring.order
    groebner_basis(ideal, order, budget)
    return normal_form(f, ideal, order).is_zero()


def ideal_subset(a: Ideal, b: Ideal, order=None, budget=None) -> bool:
    """Whether a is contained in b."""
    return all(ideal_contains(b, g, order, budget) for g in a.gens)


def ideal_equal(a: Ideal, b: Ideal, order=None, budget=None) -> bool:
    return ideal_subset(a, b, order, budget) and ideal_subset(b, a, order, budget)


def is_unit_ideal(ideal: Ideal, order=None, budget=None) -> bool:
    basis = groebner_basis(ideal, order, budget)
    return any(f.is_constant() and not f.is_zero() for f in basis)


# -- derived operations -------------------------------------------------------


def eliminate(ideal: Ideal, drop_names, budget: Budget | None = None) -> Ideal:
    """Generators of the elimination ideal in the subring without ``drop``.

    Implemented with a block order putting the dropped block in front.
    """
    ring = ideal.ring
    drop = set(drop_names)
    for nm in drop:
        ring.index(nm)
    if not drop:
        return Ideal(ring, ideal.gens)
    front = tuple(ring.index(nm) for nm in sorted(drop, key=ring.index))
    order = BlockElim(front)
    basis = groebner_basis(ideal, order, budget)
    small = ring.without(drop)
    keep_idx = [i for i, nm in enumerate(ring.names) if nm not in drop]
    gens = []
    for f in basis:
        if f.variables() & drop:
            continue
        gens.append(Polynomial(small, {tuple(m[i] for i in keep_idx): c for m, c in f.terms.items()}))
    return Ideal(small, gens)


def _insert_var(ring: PolyRing, name: str) -> PolyRing:
    return PolyRing((name,) + ring.names, ring.domain, ring.order)


def _lift(f: Polynomial, big: PolyRing) -> Polynomial:
    return Polynomial(big, {(0,) + m: c for m, c in f.terms.items()}, _clean=True)


def _fresh_name(ring: PolyRing, stem: str = "t") -> str:
    if stem not in ring.names:
        return stem
    i = 0
    while f"{stem}{i}" in ring.names:
        i += 1
    return f"{stem}{i}"


def intersect(a: Ideal, b: Ideal, budget: Budget | None = None) -> Ideal:
    """Ideal intersection via one auxiliary variable: t*a + (1-t)*b, drop t."""
    if a.ring != b.ring:
        raise ValueError("ring mismatch")
    ring = a.ring
    if not a.gens:
        return Ideal(ring, ())
    if not b.gens:
        return Ideal(ring, ())
    tname = _fresh_name(ring)
    big = _insert_var(ring, tname)
    t = big.var(tname)
    one = big.one
    gens = [t * _lift(f, big) for f in a.gens]
    gens += [(one - t) * _lift(g, big) for g in b.gens]
    elim = eliminate(Ideal(big, gens), {tname}, budget)
    back = []
    for f in elim.gens:
        back.append(Polynomial(ring, dict(f.terms), _clean=True))
    return Ideal(ring, back)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact quotient f/g; raises if g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    bound = ring.bound_order
    dom = ring.domain
    work = f.to_keydict(bound)
    gk = g.to_keydict(bound)
    lmg = max(gk)
    lcg = gk[lmg]
    quot = {}
    while work:
        k = max(work)
        c = work[k]
        if not bound.divides(lmg, k):
            raise ValueError("not divisible")
        u = tuple(x - y for x, y in zip(k, lmg))
        q = dom.mul(c, dom.inv(lcg))
        quot[u] = q
        for kk, cc in gk.items():
            kx = tuple(x + y for x, y in zip(u, kk))
            v = dom.sub(work.get(kx, dom.zero), dom.mul(q, cc))
            if v == 0:
                work.pop(kx, None)
            else:
                work[kx] = v
    return Polynomial.from_keydict(ring, bound, quot)


def quotient_by_poly(ideal: Ideal, f: Polynomial, budget=None) -> Ideal:
    """(I : f) computed from I ∩ (f) divided through by f."""
    ring = ideal.ring
    if f.is_zero():
        raise ValueError("quotient by zero")
    inter = intersect(ideal, Ideal(ring, (f,)), budget)
    return Ideal(ring, [exact_divide(g, f) for g in inter.gens])


def quotient(ideal: Ideal, other: Ideal, budget=None) -> Ideal:
    """(I : J) as the intersection of the single-polynomial quotients."""
    if not other.gens:
        raise ValueError("quotient by the zero ideal")
    result = None
    for f in other.gens:
        q = quotient_by_poly(ideal, f, budget)
        result = q if result is None else intersect(result, q, budget)
    return result


def saturate(ideal: Ideal, other: Ideal, budget=None, max_rounds: int = 50) -> Ideal:
    """(I : J^infinity) by iterated quotient until mutual inclusion."""
    current = ideal
    for _ in range(max_rounds):
        nxt = quotient(current, other, budget)
        if ideal_subset(nxt, current, budget=budget):
            return current
        current = nxt
    raise BudgetExceeded("saturation rounds", max_rounds)


def spolynomial(f: Polynomial, g: Polynomial, order=None) -> Polynomial:
    """The S-polynomial, for certificates and tests."""
    ring = f.ring
    bound = ring.bind(order or ring.order)
    mf, cf = f.leading(bound)
    mg, cg = g.leading(bound)
    lcm = exp_lcm(mf, mg)
    uf = tuple(a - b for a, b in zip(lcm, mf))
    ug = tuple(a - b for a, b in zip(lcm, mg))
    dom = ring.domain
    tf = Polynomial(ring, {uf: dom.mul(dom.one, cg)}, _clean=True)
    tg = Polynomial(ring, {ug: dom.mul(dom.one, cf)}, _clean=True)
    return f * tf - g * tg


def buchberger_certificate(basis, order=None, include_coprime: bool = False) -> bool:
    """Check that every S-polynomial of basis pairs reduces to zero.

    Pairs with coprime leading monomials reduce to zero by Buchberger's
    product criterion and are skipped unless ``include_coprime`` is set.
    """
    if not basis:
        return True
    ring = basis[0].ring
    bound = ring.bind(order or ring.order)
    tmp = Ideal(ring, basis)
    set_cached_basis(tmp, order or ring.order, tuple(basis))
    leads = [f.leading(bound)[0] for f in basis]
    n = len(basis)
    for i in range(n):
        for j in range(i + 1, n):
            if not include_coprime and all(
                a == 0 or b == 0 for a, b in zip(leads[i], leads[j])
            ):
                continue
            s = spolynomial(basis[i], basis[j], order)
            if not normal_form(s, tmp, order).is_zero():
                return False
    return True


def is_reduced_basis(basis, order=None) -> bool:
    """No head divides another; every tail monomial is head-irreducible."""
    if not basis:
        return True
    ring = basis[0].ring
    bound = ring.bind(order or ring.order)
    leads = [f.leading(bound)[0] for f in basis]
    for i, f in enumerate(basis):
        for j, lm in enumerate(leads):
            if i == j:
                continue
            for m in f.terms:
                if all(a <= b for a, b in zip(lm, m)):
                    return False
    return True
