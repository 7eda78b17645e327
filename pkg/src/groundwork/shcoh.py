"""Sheaves of finite abelian groups on finite spaces and their cohomology.

A sheaf on a finite (Alexandrov) space is stored as its stalk diagram: one
group per point and one homomorphism stalk_p -> stalk_q whenever q lies in
the minimal open U_p (this category is equivalent to sheaves on the space;
sections over U are the compatible families over the points of U).

Derived-functor cohomology follows the Godement route: embed each stalk in
its divisible hull, take products over points of minimal opens (pushforward
from points of injective groups, hence injective sheaves), iterate on
cokernels and take cohomology of the global-section complex.  Divisible
values are carried by the span+lattice machinery and reports are always
finite.  The long exact sequence uses the discrete (flasque) variant of
the same resolution, which is functorial and exact and keeps every group
finite so connecting maps can be built by explicit zig-zag.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .fpgroup import (FpAbGroup, FpMorphism, fp_direct_sum, fp_from_factors,
                      fp_from_presentation, fp_kernel_cokernel,
                      fp_zero_morphism, fp_exact_at, fp_identity, fp_trivial)
from .intmat import IntMatrix
from .intmat import solve as int_solve
from .latpair import (LatticePairGroup, SpanLattice, latpair_kernel_image,
                      quotient_type)
from .site import FiniteSpace


class SheafError(ValueError):
    pass


class NotACover(ValueError):
    pass


# -- small fpgroup helpers ---------------------------------------------------


def _fp_add(f: FpMorphism, g: FpMorphism) -> FpMorphism:
    return FpMorphism(f.source, f.target, f.matrix.add(g.matrix))

def _fp_sub(f: FpMorphism, g: FpMorphism) -> FpMorphism:
    return FpMorphism(f.source, f.target, f.matrix.add(g.matrix.neg()))


def _gen_elem(G: FpAbGroup, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(len(G.invariant_factors)))


def fp_preimage(f: FpMorphism, y: tuple):
    """One x with f(x) = y (deterministic), or None."""
    A = f.matrix.hstack(f.target.relations)
    sol = int_solve(A, f.target.lift(y))
    if sol is None:
        return None
    x = tuple(sol)[:f.source.gens]
    return f.source.normal_form(x)


def _factor_through(incl: FpMorphism, g: FpMorphism) -> FpMorphism:
    """h with incl ∘ h = g, given im(g) ⊆ im(incl)."""
    A = incl.matrix.hstack(incl.target.relations)
    cols = []
    for j in range(g.matrix.cols):
        sol = int_solve(A, g.matrix.col(j))
        if sol is None:
            raise SheafError("map does not factor through the subgroup")
        cols.append(list(sol)[:incl.source.gens])
    if incl.source.gens == 0 or not cols:
        mat = IntMatrix.zeros(incl.source.gens, g.matrix.cols)
    else:
        mat = IntMatrix.from_cols(cols, rows=incl.source.gens)
    return FpMorphism(g.source, incl.source, mat).check()


def fp_cohomology_at(d_prev, d: FpMorphism):
    """Cohomology ker(d)/im(d_prev) of a complex of finite groups.

    Returns (H, K, incl): H shares its generators with the kernel group K,
    so K-coordinates project to H classes by normal_form."""
    (K, incl), _ = fp_kernel_cokernel(d)
    if d_prev is None:
        H = fp_from_presentation(K.gens, K.relations)
    else:
        factored = _factor_through(incl, d_prev)
        H = fp_from_presentation(K.gens, K.relations.hstack(factored.matrix))
    return H, K, incl


# -- finite sheaves as stalk diagrams ---------------------------------------


@dataclass(frozen=True, eq=False)
class AbelianSheaf:
    """Stalk diagram: stalks[p] an FpAbGroup; comaps[(p, q)] : stalk_p ->
    stalk_q for every q in the minimal open U_p (including q = p)."""
    space: FiniteSpace
    stalks: dict
    comaps: dict

    def stalk(self, p) -> FpAbGroup:
        return self.stalks[p]


def validate_sheaf(X: FiniteSpace, stalks, comaps) -> AbelianSheaf:
    for p in X.points:
        if p not in stalks:
            raise SheafError("missing stalk at %r" % (p,))
        for q in X.minimal_open(p):
            f = comaps.get((p, q))
            if f is None:
                raise SheafError("missing comap %r" % ((p, q),))
            if f.source is not stalks[p] or f.target is not stalks[q]:
                raise SheafError("comap %r has wrong endpoints" % ((p, q),))
            f.check()
        if not _same_fp_map(comaps[(p, p)], fp_identity(stalks[p])):
            raise SheafError("comap at %r is not the identity" % (p,))
    for p in X.points:
        for q in X.minimal_open(p):
            for r in X.minimal_open(q):
                left = comaps[(q, r)].compose(comaps[(p, q)])
                if not _same_fp_map(left, comaps[(p, r)]):
                    raise SheafError("comaps do not compose at %r"
                                     % ((p, q, r),))
    return AbelianSheaf(X, dict(stalks), dict(comaps))


def _same_fp_map(f: FpMorphism, g: FpMorphism) -> bool:
    for j in range(f.matrix.cols):
        if f.target.normal_form(f.matrix.col(j)) != \
                g.target.normal_form(g.matrix.col(j)):
            return False
    return True


def constant_sheaf(X: FiniteSpace, factors) -> AbelianSheaf:
    G = fp_from_factors(factors)
    stalks = {p: G for p in X.points}
    comaps = {(p, q): fp_identity(G)
              for p in X.points for q in X.minimal_open(p)}
    return validate_sheaf(X, stalks, comaps)


def zero_sheaf(X: FiniteSpace) -> AbelianSheaf:
    return constant_sheaf(X, [])


def skyscraper_sheaf(X: FiniteSpace, point, factors) -> AbelianSheaf:
    """Pushforward of the group from the point: F(U) = A iff point ∈ U."""
    if point not in X.points:
        raise SheafError("unknown point %r" % (point,))
    A = fp_from_factors(factors)
    Z = fp_trivial()
    stalks = {p: (A if point in X.minimal_open(p) else Z) for p in X.points}
    comaps = {}
    for p in X.points:
        for q in X.minimal_open(p):
            s, t = stalks[p], stalks[q]
            if s is A and t is A:
                comaps[(p, q)] = fp_identity(A)
            else:
                comaps[(p, q)] = fp_zero_morphism(s, t)
    return validate_sheaf(X, stalks, comaps)


@dataclass(frozen=True, eq=False)
class SheafMap:
    source: AbelianSheaf
    target: AbelianSheaf
    components: dict    # point -> FpMorphism

    def check(self) -> "SheafMap":
        for p in self.source.space.points:
            f = self.components[p]
            if f.source is not self.source.stalks[p] or \
                    f.target is not self.target.stalks[p]:
                raise SheafError("component at %r has wrong endpoints" % (p,))
            f.check()
            for q in self.source.space.minimal_open(p):
                left = self.components[q].compose(self.source.comaps[(p, q)])
                right = self.target.comaps[(p, q)].compose(f)
                if not _same_fp_map(left, right):
                    raise SheafError(
                        "map does not commute with comaps at %r" % ((p, q),))
        return self

    def compose(self, other: "SheafMap") -> "SheafMap":
        return SheafMap(other.source, self.target,
                        {p: self.components[p].compose(other.components[p])
                         for p in self.source.space.points})


def sheaf_direct_sum(F: AbelianSheaf, G: AbelianSheaf):
    """Pointwise direct sum; returns (S, inclusions, projections)."""
    X = F.space
    stalks, incs, projs = {}, ({}, {}), ({}, {})
    for p in X.points:
        total, i_list, p_list = fp_direct_sum([F.stalks[p], G.stalks[p]])
        stalks[p] = total
        incs[0][p], incs[1][p] = i_list
        projs[0][p], projs[1][p] = p_list
    comaps = {}
    for p in X.points:
        for q in X.minimal_open(p):
            comaps[(p, q)] = _fp_add(
                incs[0][q].compose(F.comaps[(p, q)]).compose(projs[0][p]),
                incs[1][q].compose(G.comaps[(p, q)]).compose(projs[1][p]))
    S = validate_sheaf(X, stalks, comaps)
    return (S,
            (SheafMap(F, S, incs[0]).check(), SheafMap(G, S, incs[1]).check()),
            (SheafMap(S, F, projs[0]).check(),
             SheafMap(S, G, projs[1]).check()))


# -- sections ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SectionSpace:
    """F(U) as the kernel of the compatibility map out of ∏_{p∈U} stalk_p."""
    group: FpAbGroup
    incl: FpMorphism        # group -> prod
    prod: FpAbGroup
    points: tuple
    incs: tuple             # stalk -> prod per point
    projs: tuple            # prod -> stalk per point


def sections(F: AbelianSheaf, U) -> SectionSpace:
    pts = sorted(U)
    prod, incs, projs = fp_direct_sum([F.stalks[p] for p in pts])
    index = {p: i for i, p in enumerate(pts)}
    edges = [(p, q) for p in pts
             for q in sorted(F.space.minimal_open(p)) if q != p]
    targets = [F.stalks[q] for (_, q) in edges]
    T, tincs, _ = fp_direct_sum(targets)
    delta = fp_zero_morphism(prod, T)
    for (p, q), tinc in zip(edges, tincs):
        c = _fp_sub(projs[index[q]],
                    F.comaps[(p, q)].compose(projs[index[p]]))
        delta = _fp_add(delta, tinc.compose(c))
    (K, incl), _ = fp_kernel_cokernel(delta)
    return SectionSpace(K, incl, prod, tuple(pts), tuple(incs), tuple(projs))


def global_sections(F: AbelianSheaf) -> FpAbGroup:
    return sections(F, F.space.points).group


def section_restriction(F: AbelianSheaf, su: SectionSpace,
                        sv: SectionSpace) -> FpMorphism:
    """Restriction F(U) -> F(V) for V ⊆ U (coordinate projection)."""
    pick = fp_zero_morphism(su.prod, sv.prod)
    for i, q in enumerate(sv.points):
        j = su.points.index(q)
        pick = _fp_add(pick, sv.incs[i].compose(su.projs[j]))
    return _factor_through(sv.incl, pick.compose(su.incl))


def gamma_map(phi: SheafMap, su: SectionSpace,
              sv: SectionSpace) -> FpMorphism:
    """Induced map on section spaces over the same open."""
    big = fp_zero_morphism(su.prod, sv.prod)
    for i, p in enumerate(su.points):
        big = _fp_add(big, sv.incs[i].compose(
            phi.components[p]).compose(su.projs[i]))
    return _factor_through(sv.incl, big.compose(su.incl))


# -- cohomology reports ------------------------------------------------------


def _iso_line(factors) -> str:
    factors = [d for d in factors if d != 0]
    if not factors:
        return "0"
    return " ⊕ ".join("Z/%d" % d for d in factors)


@dataclass(frozen=True)
class CohomologyReport:
    degrees: tuple      # of FpAbGroup

    def lines(self):
        return ["H^%d = %s" % (n, _iso_line(G.invariant_factors))
                for n, G in enumerate(self.degrees)]

    def __str__(self):
        return "\n".join(self.lines())


# -- Čech cohomology ---------------------------------------------------------


def cech_cohomology(F: AbelianSheaf, cover, n_max: int) -> CohomologyReport:
    """Alternating Čech complex over the ordered cover (list of open sets)."""
    X = F.space
    cover = [frozenset(U) for U in cover]
    for U in cover:
        if U not in X.opens:
            raise NotACover("%r is not open" % (sorted(U),))
    if frozenset().union(*cover) != frozenset(X.points):
        raise NotACover("the given opens do not cover the space")
    m = len(cover)

    def inter(combo):
        s = frozenset(X.points)
        for i in combo:
            s = s & cover[i]
        return s

    levels = []     # per degree: (chain group, combos, per-combo data)
    for k in range(n_max + 2):
        combos = list(itertools.combinations(range(m), k + 1))
        secs = [sections(F, inter(c)) for c in combos]
        total, incs, projs = fp_direct_sum([s.group for s in secs])
        levels.append((total, combos, secs, incs, projs))
    diffs = []
    for k in range(n_max + 1):
        src_total, src_combos, src_secs, _, src_projs = levels[k]
        dst_total, dst_combos, dst_secs, dst_incs, _ = levels[k + 1]
        pos = {c: i for i, c in enumerate(src_combos)}
        d = fp_zero_morphism(src_total, dst_total)
        for t, T in enumerate(dst_combos):
            for j in range(len(T)):
                S = T[:j] + T[j + 1:]
                i = pos[S]
                r = section_restriction(F, src_secs[i], dst_secs[t])
                term = dst_incs[t].compose(r).compose(src_projs[i])
                if j % 2 == 1:
                    term = FpMorphism(term.source, term.target,
                                      term.matrix.neg())
                d = _fp_add(d, term)
        diffs.append(d)
    out = []
    for n in range(n_max + 1):
        H, _, _ = fp_cohomology_at(diffs[n - 1] if n else None, diffs[n])
        out.append(fp_from_factors(
            [x for x in H.invariant_factors if x != 0]))
    return CohomologyReport(tuple(out))


# -- divisible-valued sheaves (span+lattice stalks) --------------------------


def _rows_of_fp(f: FpMorphism):
    """The induced linear map on pair coordinates, where Z/d is embedded
    as (1/d)Z / Z: a smith-matrix entry M_rc becomes M_rc * d_c / d_r."""
    ds = f.source.invariant_factors
    dt = f.target.invariant_factors
    cols = [f.apply(_gen_elem(f.source, i)) for i in range(len(ds))]
    return tuple(tuple(Fraction(cols[c][r] * ds[c], dt[r])
                       for c in range(len(ds)))
                 for r in range(len(dt)))


def _rows_identity(n):
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                 for i in range(n))


def _rows_compose(A, B):
    """A ∘ B on column vectors."""
    if not A:
        return ()
    inner = len(B)
    return tuple(tuple(sum((a_row[t] * B[t][j] for t in range(inner)),
                           Fraction(0)) for j in range(len(B[0]) if B else 0))
                 for a_row in A)


def _rows_apply(A, v):
    return tuple(sum((row[j] * Fraction(v[j]) for j in range(len(v))),
                     Fraction(0)) for row in A)


def pair_of_group(G: FpAbGroup) -> LatticePairGroup:
    """A finite group Z/d1 + ... as the pair ((1/d_i)Z^k) / Z^k."""
    k = len(G.invariant_factors)
    num = SpanLattice.make(k, lattice_vectors=[
        [Fraction(1, d) if i == j else Fraction(0) for i in range(k)]
        for j, d in enumerate(G.invariant_factors)])
    den = SpanLattice.make(k, lattice_vectors=[
        [Fraction(1 if i == j else 0) for i in range(k)] for j in range(k)])
    return LatticePairGroup(num, den)


def hull_pair(P: LatticePairGroup) -> LatticePairGroup:
    """Divisible hull: replace the numerator by the subspace it spans."""
    num = SpanLattice.make(P.ambient,
                           span_vectors=list(P.numerator.span) +
                           [list(c) for c in P.numerator.lattice])
    return LatticePairGroup(num, P.denominator)


def pair_product(pairs):
    """Product of LatticePairGroups; returns (pair, offsets)."""
    offsets = []
    total = 0
    for P in pairs:
        offsets.append(total)
        total += P.ambient
    def emb(v, off, amb):
        out = [Fraction(0)] * total
        for i, x in enumerate(v):
            out[off + i] = Fraction(x)
        return out
    num_span, num_lat, den_span, den_lat = [], [], [], []
    for P, off in zip(pairs, offsets):
        num_span += [emb(v, off, P.ambient) for v in P.numerator.span]
        num_lat += [emb(v, off, P.ambient) for v in P.numerator.lattice]
        den_span += [emb(v, off, P.ambient) for v in P.denominator.span]
        den_lat += [emb(v, off, P.ambient) for v in P.denominator.lattice]
    num = SpanLattice.make(total, num_span, num_lat)
    den = SpanLattice.make(total, den_span, den_lat)
    return LatticePairGroup(num, den), offsets


@dataclass(frozen=True, eq=False)
class PairSheaf:
    """Sheaf with span+lattice-quotient stalks; comaps are rational rows."""
    space: FiniteSpace
    stalks: dict        # point -> LatticePairGroup
    comaps: dict        # (p, q) -> rows


@dataclass(frozen=True, eq=False)
class PairSheafMap:
    source: PairSheaf
    target: PairSheaf
    components: dict    # point -> rows


def as_pair_sheaf(F: AbelianSheaf) -> PairSheaf:
    stalks = {p: pair_of_group(F.stalks[p]) for p in F.space.points}
    comaps = {key: _rows_of_fp(f) for key, f in F.comaps.items()}
    return PairSheaf(F.space, stalks, comaps)


def godement_embedding(F):
    """(G⁰, embedding): G⁰ stalk at p is ∏_{q∈U_p} (divisible hull of the
    stalk at q); the embedding is the tuple of comaps.  Accepts finite
    sheaves or PairSheaves; the result is always a PairSheaf."""
    if isinstance(F, AbelianSheaf):
        F = as_pair_sheaf(F)
    X = F.space
    hulls = {q: hull_pair(F.stalks[q]) for q in X.points}
    layouts = {}
    stalks = {}
    for p in X.points:
        qs = sorted(X.minimal_open(p))
        pair, offs = pair_product([hulls[q] for q in qs])
        stalks[p] = pair
        layouts[p] = (qs, offs)
    comaps = {}
    for p in X.points:
        qs, offs = layouts[p]
        amb = stalks[p].ambient
        for p2 in X.minimal_open(p):
            qs2, offs2 = layouts[p2]
            amb2 = stalks[p2].ambient
            rows = [[Fraction(0)] * amb for _ in range(amb2)]
            for q, off2 in zip(qs2, offs2):
                off = offs[qs.index(q)]
                for i in range(hulls[q].ambient):
                    rows[off2 + i][off + i] = Fraction(1)
            comaps[(p, p2)] = tuple(tuple(r) for r in rows)
    components = {}
    for p in X.points:
        qs, _ = layouts[p]
        rows = []
        for q in qs:
            for r in F.comaps[(p, q)]:
                rows.append(tuple(Fraction(x) for x in r))
        components[p] = tuple(rows)
    G = PairSheaf(X, stalks, comaps)
    return G, PairSheafMap(F, G, components)


def pair_sheaf_cokernel(e: PairSheafMap):
    """Stalkwise cokernel of a pair-sheaf map; returns (Q, proj)."""
    X = e.target.space
    stalks = {}
    for p in X.points:
        t = e.target.stalks[p]
        img = e.source.stalks[p].numerator.image(e.components[p])
        stalks[p] = LatticePairGroup(t.numerator, t.denominator.add(img))
    Q = PairSheaf(X, stalks, dict(e.target.comaps))
    proj = PairSheafMap(e.target, Q,
                        {p: _rows_identity(e.target.stalks[p].ambient)
                         for p in X.points})
    return Q, proj


def pair_global_sections(F: PairSheaf):
    """Γ(F) as a LatticePairGroup inside the product over all points.

    Returns (pair, points, offsets)."""
    X = F.space
    pts = sorted(X.points)
    prod, offs = pair_product([F.stalks[p] for p in pts])
    index = {p: i for i, p in enumerate(pts)}
    edges = [(p, q) for p in pts
             for q in sorted(X.minimal_open(p)) if q != p]
    if not edges:
        return prod, tuple(pts), tuple(offs)
    epairs = [F.stalks[q] for (_, q) in edges]
    E, eoffs = pair_product(epairs)
    if E.ambient == 0:
        return prod, tuple(pts), tuple(offs)
    rows = [[Fraction(0)] * prod.ambient for _ in range(E.ambient)]
    for (p, q), eoff in zip(edges, eoffs):
        amb_q = F.stalks[q].ambient
        off_p = offs[index[p]]
        off_q = offs[index[q]]
        comap = F.comaps[(p, q)]
        for i in range(amb_q):
            rows[eoff + i][off_q + i] += Fraction(1)
            for j in range(F.stalks[p].ambient):
                rows[eoff + i][off_p + j] -= comap[i][j]
    rows = tuple(tuple(r) for r in rows)
    kernel, _ = latpair_kernel_image(rows, prod, E)
    return kernel, tuple(pts), tuple(offs)


def sheaf_cohomology(F, n_max: int) -> CohomologyReport:
    """Derived-functor H^0..H^n_max via the divisible Godement resolution.

    The cochain group Γ(G^k) is computed through the Godement identity
    Γ(God(S)) = ∏_p S_p, which avoids solving the compatibility system:
    with Q^{-1} = F and Q^k the stalkwise cokernel of the embedding into
    G^k = God(hull(Q^{k-1})), the k-th cochain group is
    ∏_p hull(stalk_p Q^{k-1}) and the differential copies the U_p-indexed
    coordinate blocks of a family into the block of each point p."""
    cur = as_pair_sheaf(F) if isinstance(F, AbelianSheaf) else F
    X = cur.space
    pts = sorted(X.points)
    index = {p: i for i, p in enumerate(pts)}
    gammas = []         # (pair, offsets aligned with pts) per level
    hull_levels = []    # point -> hull of the stalk of Q^{k-1}
    for _ in range(n_max + 2):
        hulls = {p: hull_pair(cur.stalks[p]) for p in pts}
        hull_levels.append(hulls)
        gammas.append(pair_product([hulls[p] for p in pts]))
        G, e = godement_embedding(cur)
        cur, _ = pair_sheaf_cokernel(e)
    out = []
    prev_image = None
    for n in range(n_max + 1):
        src_pair, offs_src = gammas[n]
        dst_pair, offs_dst = gammas[n + 1]
        rows = [[Fraction(0)] * src_pair.ambient
                for _ in range(dst_pair.ambient)]
        for p in pts:
            local = 0
            for q in sorted(X.minimal_open(p)):
                amb_q = hull_levels[n][q].ambient
                o_s = offs_src[index[q]]
                o_d = offs_dst[index[p]] + local
                for i in range(amb_q):
                    rows[o_d + i][o_s + i] = Fraction(1)
                local += amb_q
        rows = tuple(tuple(r) for r in rows)
        kernel, image = latpair_kernel_image(rows, src_pair, dst_pair)
        base = prev_image.numerator if prev_image is not None \
            else src_pair.denominator
        t = quotient_type(kernel.numerator, base)
        if not t.is_finite():
            raise SheafError("cohomology in degree %d is not finite: %s"
                             % (n, t))
        out.append(fp_from_factors(t.finite_factors))
        prev_image = image
    return CohomologyReport(tuple(out))


# -- long exact sequence via the discrete Godement resolution ----------------


def check_ses(alpha: SheafMap, beta: SheafMap):
    """Stalkwise exactness of 0 -> F' -> F -> F'' -> 0."""
    alpha.check()
    beta.check()
    for p in alpha.source.space.points:
        a, b = alpha.components[p], beta.components[p]
        if not a.is_monic():
            raise SheafError("first map not monic at %r" % (p,))
        if not b.is_epic():
            raise SheafError("second map not epic at %r" % (p,))
        if not fp_exact_at(a, b):
            raise SheafError("sequence not exact at %r" % (p,))


def _godement_finite(F: AbelianSheaf):
    """Discrete Godement sheaf: stalk at p is ⊕_{q∈U_p} F_q (flasque)."""
    X = F.space
    stalks, layout = {}, {}
    for p in X.points:
        qs = sorted(X.minimal_open(p))
        total, incs, projs = fp_direct_sum([F.stalks[q] for q in qs])
        stalks[p] = total
        layout[p] = (qs, incs, projs)
    comaps = {}
    for p in X.points:
        qs, _, projs = layout[p]
        for p2 in X.minimal_open(p):
            qs2, incs2, _ = layout[p2]
            m = fp_zero_morphism(stalks[p], stalks[p2])
            for q, inc2 in zip(qs2, incs2):
                m = _fp_add(m, inc2.compose(projs[qs.index(q)]))
            comaps[(p, p2)] = m
    G = AbelianSheaf(X, stalks, comaps)
    components = {}
    for p in X.points:
        qs, incs, _ = layout[p]
        m = fp_zero_morphism(F.stalks[p], stalks[p])
        for q, inc in zip(qs, incs):
            m = _fp_add(m, inc.compose(F.comaps[(p, q)]))
        components[p] = m
    embed = SheafMap(F, G, components)
    return G, embed, layout


def _godement_finite_map(phi: SheafMap, layA, GA, layB, GB) -> SheafMap:
    comps = {}
    for p in phi.source.space.points:
        qsA, _, projsA = layA[p]
        qsB, incsB, _ = layB[p]
        m = fp_zero_morphism(GA.stalks[p], GB.stalks[p])
        for q, inc in zip(qsB, incsB):
            m = _fp_add(m, inc.compose(
                phi.components[q]).compose(projsA[qsA.index(q)]))
        comps[p] = m
    return SheafMap(GA, GB, comps)


def _sheaf_cokernel_finite(e: SheafMap):
    X = e.target.space
    stalks, projs = {}, {}
    for p in X.points:
        (_, _), (coker, proj) = fp_kernel_cokernel(e.components[p])
        stalks[p] = coker
        projs[p] = proj
    comaps = {}
    for p in X.points:
        for q in X.minimal_open(p):
            comaps[(p, q)] = FpMorphism(
                stalks[p], stalks[q],
                e.target.comaps[(p, q)].matrix).check()
    Q = AbelianSheaf(X, stalks, comaps)
    return Q, SheafMap(e.target, Q, projs)


def _coker_induced(phiG: SheafMap, QA: AbelianSheaf,
                   QB: AbelianSheaf) -> SheafMap:
    comps = {p: FpMorphism(QA.stalks[p], QB.stalks[p],
                           phiG.components[p].matrix).check()
             for p in QA.space.points}
    return SheafMap(QA, QB, comps)


@dataclass(frozen=True, eq=False)
class LongExactSequence:
    """H^0(F') -> H^0(F) -> H^0(F'') -δ-> H^1(F') -> ... with maps."""
    groups: tuple       # flattened groups along the sequence
    maps: tuple         # morphisms between consecutive groups
    labels: tuple

    def verify(self):
        if not self.maps[0].is_monic():
            raise SheafError("H^0(F') -> H^0(F) is not monic")
        for i in range(len(self.maps) - 1):
            if not fp_exact_at(self.maps[i], self.maps[i + 1]):
                raise SheafError("long sequence not exact at %s"
                                 % self.labels[i + 1])
        return self


def long_exact_sequence(alpha: SheafMap, beta: SheafMap,
                        n_max: int) -> LongExactSequence:
    """Cohomology LES of 0 -> F' -> F -> F'' -> 0 with connecting maps.

    Built from the discrete Godement resolution (flasque, functorial,
    exact), connecting maps by explicit zig-zag with deterministic
    preimage choice."""
    check_ses(alpha, beta)
    L = n_max + 1
    triple = (alpha.source, alpha.target, beta.target)
    maps2 = (alpha, beta)
    # build towers of Godement terms with sheaf-level differentials and
    # induced chain maps
    towers = [[] for _ in range(3)]      # Godement sheaves per side
    tower_maps = [[] for _ in range(2)]  # induced alpha/beta at each level
    sheaf_diffs = [[] for _ in range(3)]
    cur = triple
    cur_maps = maps2
    prev_data = None
    for k in range(L + 1):
        gods = [_godement_finite(F) for F in cur]
        Gs = [g[0] for g in gods]
        embeds = [g[1] for g in gods]
        lays = [g[2] for g in gods]
        phis = [_godement_finite_map(cur_maps[0], lays[0], Gs[0],
                                     lays[1], Gs[1]),
                _godement_finite_map(cur_maps[1], lays[1], Gs[1],
                                     lays[2], Gs[2])]
        for i in range(3):
            towers[i].append(Gs[i])
        for i in range(2):
            tower_maps[i].append(phis[i])
        if prev_data is not None:
            prev_projs = prev_data
            for i in range(3):
                sheaf_diffs[i].append(embeds[i].compose(prev_projs[i]))
        coks = [_sheaf_cokernel_finite(e) for e in embeds]
        Qs = [c[0] for c in coks]
        projs = [c[1] for c in coks]
        cur = tuple(Qs)
        cur_maps = (_coker_induced(phis[0], Qs[0], Qs[1]),
                    _coker_induced(phis[1], Qs[1], Qs[2]))
        prev_data = projs
    # global-section complexes
    secs = [[sections(G, G.space.points) for G in towers[i]]
            for i in range(3)]
    C_diffs = [[gamma_map(sheaf_diffs[i][k], secs[i][k], secs[i][k + 1])
                for k in range(L)] for i in range(3)]
    C_alpha = [gamma_map(tower_maps[0][k], secs[0][k], secs[1][k])
               for k in range(L + 1)]
    C_beta = [gamma_map(tower_maps[1][k], secs[1][k], secs[2][k])
              for k in range(L + 1)]
    # cohomology in degrees 0..n_max (degree n uses d^n : C^n -> C^{n+1};
    # at the top degree treat the missing differential as the zero map)
    H = [[], [], []]
    Kdata = [[], [], []]
    for i in range(3):
        for n in range(n_max + 1):
            d_prev = C_diffs[i][n - 1] if n else None
            d = C_diffs[i][n]
            Hn, K, incl = fp_cohomology_at(d_prev, d)
            H[i].append(Hn)
            Kdata[i].append((K, incl))

    def h_map(chain_map, i_src, i_dst, n):
        K_s, incl_s = Kdata[i_src][n]
        K_d, incl_d = Kdata[i_dst][n]
        f = _factor_through(incl_d, chain_map.compose(incl_s))
        return FpMorphism(H[i_src][n], H[i_dst][n], f.matrix).check()

    def connecting(n):
        Ks, incl_s = Kdata[2][n]
        Kd, incl_d = Kdata[0][n + 1]
        cols = []
        for j in range(Ks.gens):
            x = Ks.normal_form(tuple(1 if t == j else 0
                                     for t in range(Ks.gens)))
            v = incl_s.apply(x)
            u = fp_preimage(C_beta[n], v)
            if u is None:
                raise SheafError("flasque surjectivity failed")
            w = C_diffs[1][n].apply(u)
            z = fp_preimage(C_alpha[n + 1], w)
            if z is None:
                raise SheafError("zig-zag preimage failed")
            zk = fp_preimage(incl_d, z)
            if zk is None:
                raise SheafError("connecting image not a cocycle")
            cols.append(list(Kd.lift(zk)))
        if Kd.gens == 0 or not cols:
            mat = IntMatrix.zeros(Kd.gens, Ks.gens)
        else:
            mat = IntMatrix.from_cols(cols, rows=Kd.gens)
        return FpMorphism(H[2][n], H[0][n + 1], mat).check()

    groups, maps, labels = [], [], []
    for n in range(n_max + 1):
        groups += [H[0][n], H[1][n], H[2][n]]
        labels += ["H^%d(F')" % n, "H^%d(F)" % n, "H^%d(F'')" % n]
        maps.append(h_map(C_alpha[n], 0, 1, n))
        maps.append(h_map(C_beta[n], 1, 2, n))
        if n < n_max:
            maps.append(connecting(n))
    return LongExactSequence(tuple(groups), tuple(maps), tuple(labels))
