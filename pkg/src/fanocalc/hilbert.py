"""Hilbert series of lead-term ideals: projective dimension and degree.

The numerator of the Hilbert series over the full denominator (1-t)^n is
computed by the standard monomial-ideal recursion, pivoting on a variable of
a minimal generator, with memoization and a split into variable-disjoint
components.  Monomials are handled sparsely as sorted ((var, exp), ...)
tuples, so the ambient variable count never enters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groebner import Budget, Ideal, groebner_basis


@dataclass(frozen=True)
class HilbertReport:
    """Projective dimension (-1 for empty), degree, series numerator."""

    dimension: int
    degree: int
    numerator: tuple


# -- dense little polynomials in t -------------------------------------------


def _t_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return tuple(out)


def _t_add(a, b):
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _t_shift(a, k):
    return (0,) * k + tuple(a)


_ONE_MINUS_T = (1, -1)


def _t_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a) if a else (0,)


# -- sparse monomials ----------------------------------------------------------


def _divides(a, b) -> bool:
    db = dict(b)
    for v, e in a:
        if db.get(v, 0) < e:
            return False
    return True


def _minimalize(gens):
    gens = sorted(set(gens), key=lambda g: (sum(e for _, e in g), g))
    kept = []
    for g in gens:
        if not any(_divides(h, g) for h in kept):
            kept.append(g)
    return kept


def _components(gens):
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for v, _ in g:
            parent.setdefault(v, v)
    for g in gens:
        vs = [v for v, _ in g]
        for v in vs[1:]:
            a, b = find(vs[0]), find(v)
            if a != b:
                parent[a] = b
    groups = {}
    for g in gens:
        root = find(g[0][0])
        groups.setdefault(root, []).append(g)
    return list(groups.values())


def _numerator(gens, memo):
    """Hilbert numerator of the monomial ideal generated by ``gens``."""
    gens = _minimalize(gens)
    if not gens:
        return (1,)
    if gens[0] == ():
        return (0,)
    key = tuple(gens)
    hit = memo.get(key)
    if hit is not None:
        return hit
    comps = _components(gens)
    if len(comps) > 1:
        result = (1,)
        for comp in comps:
            result = _t_mul(result, _numerator(comp, memo))
        result = _t_trim(result)
        memo[key] = result
        return result
    if all(len(g) == 1 for g in gens):
        result = (1,)
        for g in gens:
            result = _t_mul(result, _t_add(_ONE_MINUS_T[:1], _t_shift((-1,), g[0][1])))
        result = _t_trim(result)
        memo[key] = result
        return result
    counts = {}
    for g in gens:
        if len(g) > 1:
            for v, _ in g:
                counts[v] = counts.get(v, 0) + 1
    pivot = max(counts, key=lambda v: (counts[v], -v))
    quot = []
    rest = []
    for g in gens:
        entry = dict(g)
        if pivot in entry:
            if entry[pivot] == 1:
                del entry[pivot]
            else:
                entry[pivot] -= 1
            quot.append(tuple(sorted(entry.items())))
        else:
            quot.append(g)
            rest.append(g)
    n_quot = _numerator(quot, memo)
    n_rest = _numerator(rest, memo)
    result = _t_trim(_t_add(_t_shift(n_quot, 1), _t_mul(_ONE_MINUS_T, n_rest)))
    memo[key] = result
    return result


def _sparse(exp):
    return tuple((i, e) for i, e in enumerate(exp) if e)


def hilbert_numerator(lead_exponents):
    """Numerator of the Hilbert series over (1-t)^n, as int coefficients."""
    memo: dict = {}
    return _numerator([_sparse(e) for e in lead_exponents], memo)


def _strip_one_minus_t(num):
    """Factor the numerator as (1-t)^s * M with M(1) != 0; return (s, M)."""
    num = list(_t_trim(num))
    if num == [0]:
        return None, (0,)
    s = 0
    while sum(num) == 0:
        # synthetic division by (1 - t): running prefix sums
        acc = 0
        out = []
        for a in num[:-1]:
            acc += a
            out.append(acc)
        num = out if out else [0]
        s += 1
    return s, _t_trim(num)


def hilbert_dim_degree(ideal: Ideal, order=None, budget: Budget | None = None) -> HilbertReport:
    """Projective dimension and degree from the lead-term ideal.

    Requires homogeneous generators.  Dimension -1 means the projective
    scheme is empty (the ideal contains a power of every variable).
    """
    for g in ideal.gens:
        if not g.is_homogeneous():
            raise ValueError("non-homogeneous generator")
    ring = ideal.ring
    order = order or ring.order
    basis = groebner_basis(ideal, order, budget)
    bound = ring.bind(order)
    leads = [f.leading(bound)[0] for f in basis]
    num = hilbert_numerator(leads)
    s, m = _strip_one_minus_t(num)
    if s is None:
        # unit ideal: empty scheme with nothing left
        return HilbertReport(dimension=-1, degree=0, numerator=(0,))
    affine_dim = ring.nvars - s
    return HilbertReport(dimension=affine_dim - 1, degree=sum(m), numerator=num)


def dimension_only(ideal: Ideal, order=None, budget: Budget | None = None) -> int:
    """Projective dimension via a minimum hitting set of the lead supports.

    The vanishing locus of a monomial ideal is a union of coordinate
    subspaces; its dimension is n minus the smallest variable set meeting
    every generator's support.  Cheaper than the full numerator for large
    squarefree lead ideals.
    """
    ring = ideal.ring
    order = order or ring.order
    basis = groebner_basis(ideal, order, budget)
    bound = ring.bind(order)
    supports = []
    for f in basis:
        lead = f.leading(bound)[0]
        supports.append(frozenset(i for i, e in enumerate(lead) if e))
    if not supports:
        return ring.nvars - 1
    if frozenset() in supports:
        return -1
    supports = sorted(set(supports), key=lambda s: (len(s), sorted(s)))
    minimal = []
    for s in supports:
        if not any(t <= s for t in minimal):
            minimal.append(s)
    best = [len({v for s in minimal for v in s})]

    def search(idx, chosen, count):
        if count >= best[0]:
            return
        while idx < len(minimal) and minimal[idx] & chosen:
            idx += 1
        if idx == len(minimal):
            best[0] = count
            return
        for v in sorted(minimal[idx]):
            search(idx + 1, chosen | {v}, count + 1)

    search(0, frozenset(), 0)
    affine_dim = ring.nvars - best[0]
    return affine_dim - 1
