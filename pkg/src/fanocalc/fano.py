"""Genus-12 Fano threefolds in G(4,7) from invariant planes of 2-forms.

Everything downstream of a 3-plane of 2-forms lives here: the 21 linear
equations of the ambient P^13, the threefold ideal in 14 surviving
coordinates, the weight spectrum of fixed anticanonical divisors, affine
divisor equations by elimination, and the reconstruction of their
d-dependence by interpolation.

Index convention: internal basis indices 0..6 carry torus weight j - 3, so
the classical e_{-3}..e_3 notation maps onto e_0..e_6.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .domains import QQ, DomainError, PrimeField
from .exterior import MultiVector, ScalarContext, context_for, torus_weight, wedge
from .grassmann import GrassmannIdeal, PlueckerRing, coordinate_name, pluecker_ideal
from .groebner import Budget, Ideal, eliminate, groebner_basis, is_unit_ideal
from .linalg import sparse_rref, substitution_map
from .poly import Polynomial, PolyRing


class FanoError(ValueError):
    """Degenerate plane, bad selector, or a failed structural assertion."""


def subset_weight(subset) -> int:
    return sum(i - 3 for i in subset)


@dataclass(frozen=True)
class InvariantPlane:
    """A 3-plane of 2-forms spanned by ``forms``, with its symmetry tag.

    For the torus tag the forms are ordered by weight (-1, 0, +1); for the
    additive tag they are the three displayed generators of the invariant
    plane.  ``d`` records the family parameter when there is one.
    """

    forms: tuple
    tag: str
    d: Fraction | None
    domain: object

    def map_domain(self, domain) -> "InvariantPlane":
        ctx = context_for(domain)
        forms = tuple(
            MultiVector(ctx, f.grade, {k: domain.coerce(c) for k, c in f.terms.items()})
            for f in self.forms
        )
        return InvariantPlane(forms, self.tag, self.d, domain)


def canonical_plane(d, domain=QQ) -> InvariantPlane:
    """The one-parameter torus-invariant family, in its standard basis.

    d = -1 is the maximal-symmetry member (tau = 1); all d are admitted
    here, with degeneracies surfacing downstream where recorded.
    """
    d = Fraction(d)
    ctx = context_for(domain)
    dd = domain.coerce(d)
    one = domain.one
    w_minus = MultiVector(ctx, 2, {(0, 5): one, (1, 4): one, (2, 3): one})
    w_zero = MultiVector(ctx, 2, {(0, 6): domain.neg(dd), (1, 5): one, (2, 4): one})
    w_plus = MultiVector(ctx, 2, {(1, 6): one, (2, 5): one, (3, 4): one})
    return InvariantPlane((w_minus, w_zero, w_plus), "torus", d, domain)


def divisor_table_plane(d, domain=QQ) -> InvariantPlane:
    """The family normalization under which the bundled divisor fixtures hold.

    Same one-parameter family as :func:`canonical_plane`, but with the
    parameter carried on the other end of the weight-0 form (its modulus is
    -1/d instead of -d).  The fixed-divisor equations shipped as fixtures
    are reproduced verbatim from this normalization; the two parametrizations
    meet at the maximal-symmetry member d = -1.
    """
    d = Fraction(d)
    ctx = context_for(domain)
    dd = domain.coerce(d)
    one = domain.one
    w_minus = MultiVector(ctx, 2, {(0, 5): one, (1, 4): one, (2, 3): one})
    w_zero = MultiVector(ctx, 2, {(0, 6): one, (1, 5): one, (2, 4): domain.neg(dd)})
    w_plus = MultiVector(ctx, 2, {(1, 6): one, (2, 5): one, (3, 4): one})
    return InvariantPlane((w_minus, w_zero, w_plus), "torus", d, domain)


def additive_plane(domain=QQ) -> InvariantPlane:
    """The plane invariant under the unipotent one-parameter group."""
    ctx = context_for(domain)

    def form(spec):
        return MultiVector(ctx, 2, {k: domain.coerce(c) for k, c in spec.items()})

    w1 = form({(1, 6): 1, (2, 5): -5, (3, 4): 10, (5, 6): 1})
    w2 = form({(0, 6): 1, (1, 5): -4, (2, 4): 5, (3, 6): 2, (4, 5): -6, (4, 6): 1, (5, 6): 2})
    w3 = form(
        {(0, 5): 1, (1, 4): -5, (2, 3): 10, (2, 6): 1, (3, 5): -2, (3, 6): 1, (4, 5): -2, (4, 6): 1, (5, 6): 1}
    )
    return InvariantPlane((w1, w2, w3), "additive", None, domain)


# coefficient slots of the weight-graded basis, in internal indices
_TAU_SLOTS = {
    "u_m12": (2, 5),
    "u_m23": (1, 6),
    "v_m11": (2, 4),
    "v_m33": (0, 6),
    "w_m21": (1, 4),
    "w_m32": (0, 5),
}


def modulus_tau(plane: InvariantPlane):
    """The square-root-free modulus of a torus-invariant plane.

    Reads the six coefficient slots of the weight-graded normal form; a zero
    in any referenced slot means the plane cannot define a smooth member.
    """
    if plane.tag != "torus":
        raise FanoError("modulus is defined for torus-invariant planes")
    dom = plane.domain
    w_minus, w_zero, w_plus = plane.forms
    vals = {
        "u_m12": w_plus.terms.get(_TAU_SLOTS["u_m12"]),
        "u_m23": w_plus.terms.get(_TAU_SLOTS["u_m23"]),
        "v_m11": w_zero.terms.get(_TAU_SLOTS["v_m11"]),
        "v_m33": w_zero.terms.get(_TAU_SLOTS["v_m33"]),
        "w_m21": w_minus.terms.get(_TAU_SLOTS["w_m21"]),
        "w_m32": w_minus.terms.get(_TAU_SLOTS["w_m32"]),
    }
    for slot, v in vals.items():
        if v is None or v == 0:
            raise FanoError(f"zero coefficient in slot {slot}")
    num = dom.mul(dom.mul(vals["u_m12"], vals["v_m33"]), vals["w_m21"])
    den = dom.mul(dom.mul(vals["u_m23"], vals["v_m11"]), vals["w_m32"])
    return dom.mul(num, dom.inv(den))


@dataclass
class LinearSection:
    """The hyperplane equations cut by a plane on the Pluecker P^34."""

    vectors: list  # dicts var_index -> coeff, 21 of them (7 per form)
    rank: int
    pivots: dict  # var_index -> normalized RREF row
    free_indices: tuple


def linear_section(plane: InvariantPlane, pring: PlueckerRing, avoid=()) -> LinearSection:
    """The 21 linear forms alpha -> <alpha, omega ^ e_i> with their RREF.

    Pivots prefer columns outside ``avoid`` so chart and target coordinates
    stay addressable downstream.
    """
    dom = pring.ring.domain
    ctx = context_for(dom)
    vectors = []
    for form in plane.forms:
        for i in range(7):
            prod = wedge(form, MultiVector.basis(ctx, (i,)))
            vec = {}
            for T_idx, T in enumerate(pring.subsets):
                comp = tuple(j for j in range(7) if j not in T)
                c = prod.terms.get(comp)
                if c is None or c == 0:
                    continue
                from .exterior import merge_sign

                sign, _ = merge_sign(T, comp)
                vec[T_idx] = c if sign > 0 else dom.neg(c)
            if vec:
                vectors.append(vec)
    avoid_idx = {pring.ring.index(nm) for nm in avoid}

    def rank_of(col):
        return (1 if col in avoid_idx else 0, col)

    pivots, _ = sparse_rref(vectors, dom, rank_of)
    free = tuple(i for i in range(pring.ring.nvars) if i not in pivots)
    return LinearSection(vectors, len(pivots), pivots, free)


def _line_map(pring, pivots, free_indices, small: PolyRing, domain, chart_index=None):
    """Each ambient coordinate as a linear polynomial in the small ring.

    Pivot coordinates become minus their RREF tails; the chart coordinate,
    when given, becomes the constant 1.
    """
    sub = substitution_map(pivots)
    line = {}
    small_index = {}
    for i in free_indices:
        if i == chart_index:
            continue
        small_index[i] = small.index(pring.ring.names[i])
    nv = small.nvars

    def var_poly(i):
        if i == chart_index:
            return small.one
        exp = [0] * nv
        exp[small_index[i]] = 1
        return Polynomial(small, {tuple(exp): domain.one}, _clean=True)

    for i in free_indices:
        line[i] = var_poly(i)
    for piv, tail in sub.items():
        acc = small.zero
        for col, c in tail.items():
            acc = acc - var_poly(col).scale(c)
        line[piv] = acc
    return line


def _substituted_quadrics(gi: GrassmannIdeal, line: dict, small: PolyRing):
    """Push the Pluecker quadrics through a linear substitution and thin
    them to an independent set by row reduction on quadric monomials."""
    out = []
    seen = set()
    for q in gi.ideal.gens:
        acc = small.zero
        for m, c in q.terms.items():
            factors = [i for i, e in enumerate(m) for _ in range(e)]
            piece = line[factors[0]] * line[factors[1]]
            acc = acc + piece.scale(c)
        if acc.is_zero():
            continue
        acc = acc.canonical_scaled()
        fp = tuple(sorted(acc.terms.items()))
        if fp not in seen:
            seen.add(fp)
            out.append(acc)
    rows = [dict(f.terms) for f in out]
    cols = sorted({m for r in rows for m in r}, key=small.bound_order.key, reverse=True)
    rank_of = {m: i for i, m in enumerate(cols)}
    pivots, _ = sparse_rref(rows, small.domain, lambda m: rank_of[m])
    return [
        Polynomial(small, row).canonical_scaled()
        for _, row in sorted(pivots.items(), key=lambda kv: small.bound_order.key(kv[0]))
    ]


class V12Model:
    """The threefold of a rank-21 plane, in its 14 surviving coordinates."""

    def __init__(self, plane: InvariantPlane, modulus: int | None = None, budget: Budget | None = None):
        domain = PrimeField(modulus) if modulus else plane.domain
        plane = plane.map_domain(domain) if domain != plane.domain else plane
        self.plane = plane
        self.domain = domain
        self.gi: GrassmannIdeal = pluecker_ideal(4, 7, domain)
        self.pring = self.gi.pring
        self.section = linear_section(plane, self.pring)
        if self.section.rank != 21:
            raise FanoError(f"degenerate plane: section rank {self.section.rank} != 21")
        self.free_names = tuple(self.pring.ring.names[i] for i in self.section.free_indices)
        self.ring = PolyRing(self.free_names, domain)
        line = _line_map(self.pring, self.section.pivots, self.section.free_indices, self.ring, domain)
        self.ideal = Ideal(self.ring, _substituted_quadrics(self.gi, line, self.ring))

    def coordinate_weights(self) -> dict:
        """Weight -> multiplicity over the 14 surviving coordinates."""
        out: dict = {}
        for i in self.section.free_indices:
            w = subset_weight(self.pring.subsets[i])
            out[w] = out.get(w, 0) + 1
        return out


def v12_ideal(plane: InvariantPlane, modulus: int | None = None, budget=None) -> V12Model:
    """Build the threefold model (rank check, substitution, quadric ideal)."""
    return V12Model(plane, modulus, budget)


def fixed_divisor_spectrum(plane: InvariantPlane, modulus: int | None = None) -> dict:
    """Weight multiplicities of the surviving coordinates; total is 14.

    The multiset {0: 2, +-1..+-6: 1} is the fixed locus shape: twelve
    isolated fixed hyperplane classes and a one-parameter family at weight
    zero.
    """
    if plane.tag != "torus":
        raise FanoError("spectrum is defined for torus-invariant planes")
    model = V12Model(plane, modulus)
    weights = model.coordinate_weights()
    if sum(weights.values()) != 14:
        raise FanoError("quotient dimension is not 14")
    return weights


# -- fixed divisors and their affine equations --------------------------------


@dataclass(frozen=True)
class DivisorSpec:
    """Chart and target bookkeeping for one fixed divisor."""

    item: int
    selector: str | None  # cutting coordinate, or None for the pencil
    pencil: tuple | None  # (name_a, name_b): cut by name_a - b*name_b
    chart: str
    targets: tuple
    excluded_d: tuple
    printed: bool


DIVISOR_TABLE = {
    1: DivisorSpec(1, "p_0123", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (Fraction(-1),), True),
    2: DivisorSpec(2, "p_0124", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (), True),
    3: DivisorSpec(3, "p_0125", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (), True),
    4: DivisorSpec(4, "p_0135", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (), True),
    5: DivisorSpec(5, "p_0136", None, "p_3456", ("p_0124", "p_0125", "p_0135"), (), True),
    6: DivisorSpec(6, "p_0146", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (), True),
    7: DivisorSpec(7, "p_0256", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (), True),
    8: DivisorSpec(8, "p_0356", None, "p_3456", ("p_1356", "p_1456", "p_2456"), (), True),
    9: DivisorSpec(9, "p_1356", None, "p_3456", ("p_0356", "p_1456", "p_2456"), (Fraction(-1),), False),
    10: DivisorSpec(10, "p_1456", None, "p_3456", ("p_0356", "p_0456", "p_2456"), (Fraction(-1),), False),
    11: DivisorSpec(11, "p_2456", None, "p_3456", ("p_0356", "p_0456", "p_1456"), (Fraction(-1),), False),
    12: DivisorSpec(12, "p_3456", None, "p_0123", ("p_0124", "p_0125", "p_0135"), (Fraction(-1),), True),
    13: DivisorSpec(13, None, ("p_0156", "p_0246"), "p_0123", ("p_0124", "p_0125", "p_0135"), (), True),
}


def _selector_vector(pring: PlueckerRing, spec: DivisorSpec, b):
    dom = pring.ring.domain
    if spec.pencil is None:
        return {pring.ring.index(spec.selector): dom.one}
    if b is None:
        raise FanoError("pencil divisor needs a parameter b")
    na, nb = spec.pencil
    return {
        pring.ring.index(na): dom.one,
        pring.ring.index(nb): dom.neg(dom.coerce(b)),
    }


def divisor_chart_ideal(plane: InvariantPlane, spec: DivisorSpec, b=None, modulus=None):
    """The divisor's ideal in its affine chart, quadrics only.

    The 21 section forms plus the cutting form are row-reduced with pivots
    kept away from the chart and target coordinates, then substituted into
    the Pluecker quadrics with the chart coordinate set to 1.
    """
    domain = PrimeField(modulus) if modulus else plane.domain
    plane = plane.map_domain(domain) if domain != plane.domain else plane
    model_avoid = set(spec.targets) | {spec.chart}
    gi = pluecker_ideal(4, 7, domain)
    pring = gi.pring
    section = linear_section(plane, pring, avoid=model_avoid)
    if section.rank != 21:
        raise FanoError(f"degenerate plane: section rank {section.rank}")
    rows = list(section.vectors)
    rows.append(_selector_vector(pring, spec, b))
    avoid_idx = {pring.ring.index(nm) for nm in model_avoid}

    def rank_of(col):
        return (1 if col in avoid_idx else 0, col)

    pivots, _ = sparse_rref(rows, domain, rank_of)
    if len(pivots) != 22:
        raise FanoError(f"cutting form dependent on the section (rank {len(pivots)})")
    bad = avoid_idx & set(pivots)
    if bad:
        names = sorted(pring.ring.names[i] for i in bad)
        raise FanoError(f"chart/target coordinates not free on this divisor: {names}")
    chart_index = pring.ring.index(spec.chart)
    free = [i for i in range(pring.ring.nvars) if i not in pivots and i != chart_index]
    small = PolyRing([pring.ring.names[i] for i in free], domain)
    line = _line_map(
        pring, pivots, tuple(free) + (chart_index,), small, domain, chart_index=chart_index
    )
    gens = _substituted_quadrics(gi, line, small)
    return Ideal(small, gens)


def divisor_affine_equation(
    plane: InvariantPlane,
    item: int,
    b=None,
    modulus: int | None = None,
    budget: Budget | None = None,
) -> Polynomial:
    """Principal generator of the divisor's elimination down to 3 variables."""
    spec = DIVISOR_TABLE[item]
    if plane.d is not None and Fraction(plane.d) in spec.excluded_d:
        raise DomainError(f"item {item} is degenerate at d = {plane.d}")
    chart = divisor_chart_ideal(plane, spec, b=b, modulus=modulus)
    drop = [nm for nm in chart.ring.names if nm not in spec.targets]
    elim = eliminate(chart, drop, budget)
    target_ring = PolyRing(spec.targets, chart.ring.domain)
    gens = []
    for g in elim.gens:
        gens.append(Polynomial(target_ring, {
            tuple(m[elim.ring.index(nm)] for nm in spec.targets): c
            for m, c in g.terms.items()
        }))
    if len(gens) != 1:
        raise FanoError(
            f"elimination ideal for item {item} is not principal ({len(gens)} generators)"
        )
    return gens[0].canonical_scaled()


def divisor_is_smooth(plane: InvariantPlane, item: int, b=None, budget=None) -> bool:
    """Jacobian criterion on the affine chart hypersurface."""
    f = divisor_affine_equation(plane, item, b=b, budget=budget)
    ring = f.ring
    jac = [f] + [f.derivative(nm) for nm in ring.names]
    return is_unit_ideal(Ideal(ring, jac), budget=budget)


# -- d-dependence by interpolation ---------------------------------------------


@dataclass
class DParametric:
    """A polynomial whose coefficients are rational in d: numerator over a
    declared denominator in d."""

    numerator: Polynomial  # in PolyRing(('d',) + variables)
    denominator: Polynomial  # in PolyRing(('d',))

    def specialize(self, d, excluded=None) -> Polynomial:
        dom = self.numerator.ring.domain
        d = dom.coerce(Fraction(d))
        den = self.denominator.specialize({"d": d}).constant_value()
        if den == 0:
            raise DomainError(f"denominator vanishes at d = {d}")
        f = self.numerator.specialize({"d": d}, excluded=excluded)
        return f.scale(dom.inv(den)).canonical_scaled()


def _interp_polynomial(points):
    """Exact Newton interpolation through distinct rational points."""
    xs = [Fraction(p[0]) for p in points]
    ys = [Fraction(p[1]) for p in points]
    n = len(points)
    table = list(ys)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    # Newton form to dense coefficients
    coeffs = [Fraction(0)] * n
    acc = [Fraction(1)]  # product (x - x0)...(x - x_{k-1})
    for k in range(n):
        for i, c in enumerate(acc):
            coeffs[i] += table[k] * c
        new_acc = [Fraction(0)] * (len(acc) + 1)
        for i, c in enumerate(acc):
            new_acc[i] -= xs[k] * c
            new_acc[i + 1] += c
        acc = new_acc
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def interpolate_in_d(
    item: int,
    samples,
    b=None,
    budget: Budget | None = None,
    max_numerator_degree: int = 8,
) -> DParametric:
    """Reconstruct a divisor equation's d-dependence from rational samples.

    Every sampled run must succeed with identical monomial support; each
    coefficient is fit as q(d)/(d+1) with deg q bounded, interpolating on all
    but the last two samples and validating on those two.
    """
    samples = [Fraction(s) for s in samples]
    banned = {Fraction(-1), Fraction(0), Fraction(1)}
    if len(samples) < 10:
        raise FanoError("need at least 10 sample values")
    if len(set(samples)) != len(samples) or banned & set(samples):
        raise FanoError("samples must be distinct and avoid {-1, 0, 1}")
    spec = DIVISOR_TABLE[item]
    results = []
    for d in samples:
        plane = divisor_table_plane(d)
        f = divisor_affine_equation(plane, item, b=b, budget=budget)
        _, lead_c = f.leading()
        results.append(f.scale(QQ.inv(lead_c)))
    support = set(results[0].terms)
    for f in results[1:]:
        if set(f.terms) != support:
            raise FanoError("inconsistent monomial support across samples")
    hold = samples[-2:]
    dring = PolyRing(("d",) + spec.targets, QQ)
    num_terms: dict = {}
    for m in sorted(support):
        vals = []
        for d, f in zip(samples, results):
            vals.append(f.terms.get(m, Fraction(0)) * (d + 1))
        pts = list(zip(samples[:-2], vals[:-2]))
        coeffs = _interp_polynomial(pts)
        if len(coeffs) - 1 > max_numerator_degree:
            raise FanoError(
                f"coefficient of {m} needs degree {len(coeffs)-1} > {max_numerator_degree}"
            )
        for d, v in zip(hold, vals[-2:]):
            pred = sum(c * d**i for i, c in enumerate(coeffs))
            if pred != v:
                raise FanoError("validation mismatch on held-out samples")
        for i, c in enumerate(coeffs):
            if c != 0:
                num_terms[(i,) + m] = c
    numerator = Polynomial(dring, num_terms)
    den_ring = PolyRing(("d",), QQ)
    denominator = den_ring.parse("d + 1")
    # cancel the declared denominator when every coefficient allows it
    try:
        from .groebner import exact_divide

        dpoly = dring.parse("d + 1")
        numerator_over = exact_divide(numerator, dpoly)
        return DParametric(numerator_over, den_ring.one)
    except ValueError:
        return DParametric(numerator, denominator)


# -- the unipotent one-parameter matrix ----------------------------------------


@dataclass
class OneParamMatrix:
    """7x7 upper-triangular binomial flow: entries polynomial in one t."""

    ring: PolyRing
    rows: tuple  # 7 tuples of 7 Polynomials


def cplus_matrix(ring: PolyRing | None = None, tname: str = "t") -> OneParamMatrix:
    """M(t)_{ij} = C(6-i, j-i) t^(j-i): the standard unipotent action on
    one-forms; M(0) is the identity and M(s)M(t) = M(s+t)."""
    ring = ring or PolyRing((tname,), QQ)
    t = ring.var(tname)
    rows = []
    for i in range(7):
        row = []
        for j in range(7):
            if j < i:
                row.append(ring.zero)
            else:
                row.append((t ** (j - i)).scale(comb(6 - i, j - i)))
        rows.append(tuple(row))
    return OneParamMatrix(ring, tuple(rows))


def matrix_at(m: OneParamMatrix, value, domain=QQ):
    """Evaluate the matrix at a scalar parameter value."""
    out = []
    for row in m.rows:
        out.append([
            domain.coerce(p.specialize({m.ring.names[0]: Fraction(value)}).constant_value())
            for p in row
        ])
    return out


def transform_two_form(rows, form: MultiVector, context) -> MultiVector:
    """Image of a 2-form under e_i -> sum_j rows[i][j] e_j."""
    images = [MultiVector.vector(context, rows[i]) for i in range(7)]
    out = MultiVector.zero(context, 2)
    for (i, j), c in form.terms.items():
        out = out + wedge(images[i], images[j]).scale(c)
    return out


def additive_plane_is_invariant(points=60) -> bool:
    """Certify invariance of the additive plane under the unipotent flow.

    The span condition is a rank-3 statement on a 21x6 matrix whose entries
    are polynomials of degree <= 12 in t, so its 4x4 minors have degree
    <= 48: rank 3 at more than 48 distinct rational points forces rank 3
    identically.
    """
    from .linalg import dense_rref

    plane = additive_plane()
    ctx = ScalarContext(QQ)
    pairs = [(i, j) for i in range(7) for j in range(i + 1, 7)]
    base_cols = []
    for f in plane.forms:
        base_cols.append([Fraction(f.terms.get(p, 0)) for p in pairs])
    for t0 in range(1, points + 1):
        rows = matrix_at(cplus_matrix(), Fraction(t0))
        cols = list(base_cols)
        for f in plane.forms:
            img = transform_two_form(rows, f, ctx)
            cols.append([Fraction(img.terms.get(p, 0)) for p in pairs])
        mat = [[cols[c][r] for c in range(6)] for r in range(len(pairs))]
        _, pivots = dense_rref(mat)
        if len(pivots) != 3:
            return False
    return True
