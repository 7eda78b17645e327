"""Finitely presented abelian groups and their morphisms.

A group is a free abelian group on `gens` generators modulo the column
lattice of `relations`.  The Smith normal form of the relation matrix gives
the canonical invariant factors (unit factors dropped, 0 encoding a free
summand) and a working coordinate system for element arithmetic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .intmat import (IntMatrix, hnf, inverse_unimodular, kernel,
                     lattices_equal, snf)
from .intmat import solve as int_solve


class IllDefinedMorphism(ValueError):
    pass


@dataclass(frozen=True)
class FpAbGroup:
    gens: int
    relations: IntMatrix  # gens rows, one relation per column
    # derived, filled by fp_from_presentation:
    invariant_factors: tuple = field(default=())
    _moduli: tuple = field(default=())      # modulus per smith coordinate
    _to_smith: IntMatrix = field(default=None)    # U: gen coords -> smith
    _from_smith: IntMatrix = field(default=None)  # U^{-1}

    # -- structure ---------------------------------------------------------

    def order(self):
        """Group order, or None if infinite."""
        n = 1
        for d in self.invariant_factors:
            if d == 0:
                return None
            n *= d
        return n

    def is_finite(self) -> bool:
        return self.order() is not None

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    # -- element arithmetic (canonical tuples in smith coordinates) --------

    def normal_form(self, x) -> tuple:
        """Canonical form of the element given by generator coordinates x."""
        if len(x) != self.gens:
            raise ValueError("coordinate length mismatch")
        y = self._to_smith.mul_vec(tuple(x))
        out = []
        for yi, m in zip(y, self._moduli):
            if m == 1:
                continue
            out.append(yi % m if m else yi)
        return tuple(out)

    def lift(self, elem: tuple) -> tuple:
        """Generator coordinates of a canonical element."""
        if len(elem) != len(self.invariant_factors):
            raise ValueError("element length mismatch")
        it = iter(elem)
        y = [0 if m == 1 else next(it) for m in self._moduli]
        return self._from_smith.mul_vec(tuple(y))

    def zero(self) -> tuple:
        return tuple(0 for _ in self.invariant_factors)

    def add(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % m if m else x + y
                     for x, y, m in zip(a, b, self.invariant_factors))

    def neg(self, a: tuple) -> tuple:
        return tuple((-x) % m if m else -x
                     for x, m in zip(a, self.invariant_factors))

    def smul(self, c: int, a: tuple) -> tuple:
        return tuple((c * x) % m if m else c * x
                     for x, m in zip(a, self.invariant_factors))

    def elements(self):
        """All elements (finite groups only), in lexicographic order."""
        if not self.is_finite():
            raise ValueError("infinite group")
        return [tuple(e) for e in
                itertools.product(*(range(d) for d in self.invariant_factors))]

    def element_order(self, a: tuple) -> int:
        n = 1
        for x, m in zip(a, self.invariant_factors):
            if m == 0:
                if x != 0:
                    raise ValueError("element of infinite order")
                continue
            if x:
                n = math.lcm(n, m // math.gcd(m, x))
        return n

    # -- presentation ------------------------------------------------------

    def relation_lattice(self) -> IntMatrix:
        return hnf(self.relations)

    def iso_type(self) -> str:
        if not self.invariant_factors:
            return "0"
        parts = []
        free = sum(1 for d in self.invariant_factors if d == 0)
        for d in self.invariant_factors:
            if d:
                parts.append("Z/%d" % d)
        if free == 1:
            parts.append("Z")
        elif free > 1:
            parts.append("Z^%d" % free)
        return " + ".join(parts)

    def same_iso_type(self, other: "FpAbGroup") -> bool:
        return self.invariant_factors == other.invariant_factors


def fp_from_presentation(gens: int, rels: IntMatrix) -> FpAbGroup:
    """Group on `gens` generators with the columns of rels as relations."""
    if rels.rows != gens:
        raise ValueError("relation matrix must have one row per generator")
    D, U, _V = snf(rels)
    moduli = []
    for i in range(gens):
        d = D[i, i] if i < min(D.rows, D.cols) else 0
        moduli.append(d)
    factors = tuple(d for d in moduli if d != 1)
    # invariant factors: finite parts keep SNF divisibility order, zeros last
    return FpAbGroup(gens=gens, relations=rels,
                     invariant_factors=factors,
                     _moduli=tuple(moduli),
                     _to_smith=U,
                     _from_smith=inverse_unimodular(U))


def fp_from_factors(factors) -> FpAbGroup:
    """Group presented directly as a direct sum of cyclic factors."""
    factors = [int(d) for d in factors]
    return fp_from_presentation(len(factors), IntMatrix.diagonal(factors))


def fp_trivial() -> FpAbGroup:
    return fp_from_presentation(0, IntMatrix.zeros(0, 0))


def fp_cyclic(n: int) -> FpAbGroup:
    return fp_from_factors([n])


def fp_free(rank: int) -> FpAbGroup:
    return fp_from_presentation(rank, IntMatrix.zeros(rank, 0))


def fp_direct_sum(groups):
    """Direct sum with inclusion and projection morphisms."""
    groups = list(groups)
    gens = sum(g.gens for g in groups)
    total_rel_cols = sum(g.relations.cols for g in groups)
    rows = []
    col_off = 0
    row_off = 0
    rels = [[0] * total_rel_cols for _ in range(gens)]
    for g in groups:
        for i in range(g.gens):
            for j in range(g.relations.cols):
                rels[row_off + i][col_off + j] = g.relations[i, j]
        row_off += g.gens
        col_off += g.relations.cols
    total = fp_from_presentation(gens, IntMatrix.from_rows(rels) if gens
                                 else IntMatrix.zeros(0, 0))
    inclusions, projections = [], []
    row_off = 0
    for g in groups:
        inc = [[0] * g.gens for _ in range(gens)]
        proj = [[0] * gens for _ in range(g.gens)]
        for i in range(g.gens):
            inc[row_off + i][i] = 1
            proj[i][row_off + i] = 1
        inclusions.append(FpMorphism(g, total, IntMatrix.from_rows(inc)
                                     if gens else IntMatrix.zeros(0, g.gens)))
        projections.append(FpMorphism(total, g, IntMatrix.from_rows(proj)
                                      if g.gens else IntMatrix.zeros(0, gens)))
        row_off += g.gens
    return total, inclusions, projections


@dataclass(frozen=True)
class FpMorphism:
    source: FpAbGroup
    target: FpAbGroup
    matrix: IntMatrix  # target.gens x source.gens, acting on generator coords

    def __post_init__(self):
        if self.matrix.rows != self.target.gens or \
                self.matrix.cols != self.source.gens:
            raise IllDefinedMorphism("matrix shape does not match groups")

    def is_well_defined(self) -> bool:
        for j in range(self.source.relations.cols):
            r = self.source.relations.col(j)
            img = self.matrix.mul_vec(r)
            if any(x != 0 for x in self.target.normal_form(img)):
                return False
        return True

    def check(self) -> "FpMorphism":
        if not self.is_well_defined():
            raise IllDefinedMorphism(
                "matrix does not map relations into relations")
        return self

    def apply(self, elem: tuple) -> tuple:
        """Apply to a canonical element of the source."""
        x = self.source.lift(elem)
        return self.target.normal_form(self.matrix.mul_vec(x))

    def compose(self, other: "FpMorphism") -> "FpMorphism":
        """self ∘ other."""
        if other.target is not self.source and \
                other.target.relations.entries != self.source.relations.entries:
            raise IllDefinedMorphism("composition endpoint mismatch")
        return FpMorphism(other.source, self.target,
                          self.matrix.mul(other.matrix))

    def is_zero(self) -> bool:
        for j in range(self.matrix.cols):
            col = self.matrix.col(j)
            if any(x != 0 for x in self.target.normal_form(col)):
                return False
        return True

    def image_lattice(self) -> IntMatrix:
        """Preimage in Z^{target.gens} of the image subgroup (canonical)."""
        return hnf(self.matrix.hstack(self.target.relations))

    def kernel_lattice(self) -> IntMatrix:
        """Lattice {x in Z^{source.gens} : f(x) = 0}, canonical HNF."""
        big = kernel(self.matrix.hstack(self.target.relations))
        cols = [list(big.col(j))[:self.source.gens]
                for j in range(big.cols)]
        cols.extend(self.source.relations.columns())
        return hnf(IntMatrix.from_cols(cols, rows=self.source.gens))

    def is_monic(self) -> bool:
        return lattices_equal(self.kernel_lattice(),
                              self.source.relations)

    def is_epic(self) -> bool:
        return lattices_equal(self.image_lattice(),
                              IntMatrix.identity(self.target.gens))


def fp_identity(G: FpAbGroup) -> FpMorphism:
    return FpMorphism(G, G, IntMatrix.identity(G.gens))


def fp_zero_morphism(A: FpAbGroup, B: FpAbGroup) -> FpMorphism:
    return FpMorphism(A, B, IntMatrix.zeros(B.gens, A.gens))


def fp_kernel_cokernel(f: FpMorphism):
    """Kernel with inclusion and cokernel with projection.

    Returns ((ker, incl), (coker, proj)); incl: ker -> source and
    proj: target -> coker are witness morphisms.
    """
    f.check()
    K = f.kernel_lattice()
    ker_gens = K.cols
    # relations of the kernel: source relations written in the K-basis
    rel_cols = []
    for j in range(f.source.relations.cols):
        r = f.source.relations.col(j)
        c = int_solve(K, r)
        if c is None:
            raise RuntimeError("relation lattice not inside kernel lattice")
        rel_cols.append(list(c))
    ker = fp_from_presentation(
        ker_gens, IntMatrix.from_cols(rel_cols, rows=ker_gens)
        if rel_cols else IntMatrix.zeros(ker_gens, 0))
    incl = FpMorphism(ker, f.source, K)
    coker = fp_from_presentation(
        f.target.gens, f.target.relations.hstack(f.matrix))
    proj = FpMorphism(f.target, coker, IntMatrix.identity(f.target.gens))
    return (ker, incl), (coker, proj)


def fp_image_group(f: FpMorphism) -> FpAbGroup:
    """The image of f up to isomorphism (as source modulo kernel)."""
    return fp_from_presentation(f.source.gens, f.kernel_lattice())


def fp_exact_at(f: FpMorphism, g: FpMorphism) -> bool:
    """Is im(f) = ker(g) inside f.target (= g.source)?"""
    return lattices_equal(f.image_lattice(), g.kernel_lattice())


def fp_hom_group(A: FpAbGroup, B: FpAbGroup):
    """The group H ≅ Hom(A, B) together with element decoding.

    Returns (H, decode) where decode maps a canonical element of H to the
    corresponding FpMorphism A -> B.
    """
    a_factors = A.invariant_factors
    b_factors = B.invariant_factors
    pairs = []     # (i, j, factor, generator multiplier)
    hom_factors = []
    for i, a in enumerate(a_factors):
        for j, b in enumerate(b_factors):
            if a == 0:
                c = b  # Hom(Z, Z/b) = Z/b; Hom(Z, Z) = Z
                mult = 1
            elif b == 0:
                continue  # Hom(Z/a, Z) = 0
            else:
                g = math.gcd(a, b)
                if g == 1:
                    continue
                c = g
                mult = b // g
            pairs.append((i, j, c, mult))
            hom_factors.append(c)
    H = fp_from_factors(hom_factors)

    def decode(elem: tuple) -> FpMorphism:
        if len(elem) != len(pairs):
            raise ValueError("element length mismatch")
        # smith-coordinate matrix for the morphism
        M = [[0] * len(a_factors) for _ in range(len(b_factors))]
        for k, (i, j, _c, mult) in enumerate(pairs):
            M[j][i] += elem[k] * mult
        # convert: generator coords -> smith coords of A, then M, then lift in B
        cols = []
        for i in range(A.gens):
            e = tuple(1 if t == i else 0 for t in range(A.gens))
            sa = A.normal_form(e)
            sb = tuple(sum(M[j][t] * sa[t] for t in range(len(sa)))
                       for j in range(len(b_factors)))
            sb = tuple(x % m if m else x
                       for x, m in zip(sb, b_factors))
            cols.append(list(B.lift(sb)))
        mat = IntMatrix.from_cols(cols, rows=B.gens) if A.gens \
            else IntMatrix.zeros(B.gens, 0)
        return FpMorphism(A, B, mat)

    return H, decode
