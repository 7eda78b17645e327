"""Tests for the three-sorted formula checker.

The Δ0 oracle is an independent recursion over the AST implementing the
textbook inductive definition (atoms are Δ0; connectives preserve Δ0;
only bounded quantifiers preserve Δ0), compared against the library on
1000 seeded random formulas.
"""
import random

import pytest

from groundwork.mttchk import (AbstractError, BinOp, Eq, Formula,
                               Membership, Not, ParseError, Quant, SortError,
                               Var, abstract_wf, is_delta0,
                               is_set_theoretic, normalize_bounds,
                               parse_formula, parse_term, rule6_reduce,
                               separation_instance, substitute, to_text)

R_N_FORMULA = (
    "∃n∈N. ∀y∈𝒫(N×R). (y∈V ↔ "
    "((∀p∈y. ∃a∈{x∈N | x∈n}. ∃b∈R. p = ⟨a,b⟩)"
    " ∧ (∀a2∈{x2∈N | x2∈n}. ∃b2∈R. ⟨a2,b2⟩∈y)"
    " ∧ (∀a3∈{x3∈N | x3∈n}. ∀b3∈R. ∀c∈R."
    " ((⟨a3,b3⟩∈y ∧ ⟨a3,c⟩∈y) → b3 = c))))")

ITERATED_POWERSET = (
    "exists f. (forall p in f. exists i in n. exists u. p = <i,u>)"
    " and (forall i in n. forall u. forall w."
    " ((<i,u> in f and <i,w> in f) -> u = w))")


# -- parsing -----------------------------------------------------------------


def test_parse_basic_and_unicode_ascii_equivalence():
    a = parse_formula("∀x∈A. x=x")
    b = parse_formula("forall x in A. x = x")
    assert a == b
    assert isinstance(a.root, Quant) and a.root.bound is not None


def test_parse_unbounded_exists():
    f = parse_formula("∃P1. ∀x. (x∈P1 ↔ x⊆N)")
    assert isinstance(f.root, Quant) and f.root.bound is None
    assert not is_delta0(f)
    assert is_set_theoretic(f)


def test_parse_class_sorted_quantifier():
    f = parse_formula("∀X:Class. X∈₂B0")
    assert f.sorts["X"] == "Class"
    assert f.sorts["B0"] == "Collection"
    assert not is_set_theoretic(f)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_formula("forall x in A x = x")     # missing dot
    assert "at" in str(e.value)
    with pytest.raises(ParseError):
        parse_formula("x ∈")
    with pytest.raises(ParseError):
        parse_formula("forall x:Nope. x = x")


def test_sort_errors():
    with pytest.raises(SortError):
        parse_formula("forall X:Class. X = X")       # no class identity
    with pytest.raises(SortError):
        parse_formula("x in y and x in1 y")          # y both Set and Class
    with pytest.raises(SortError):
        parse_formula("forall X:Class in A. X in2 B")  # bound on a class


def test_round_trip_on_pinned_formulas():
    for text in [R_N_FORMULA, ITERATED_POWERSET,
                 "forall x. (x in1 A1 -> x in1 B1)",
                 "∀X:Class. (X∈₂A2 → X∈₂B2)",
                 "not forall x. (x = x or exists y in x. y in x)"]:
        f = parse_formula(text)
        printed = to_text(f)
        assert parse_formula(printed) == f
        assert to_text(parse_formula(printed)) == printed


# -- Δ0 and set-theoreticity ---------------------------------------------------


def test_rn_formula_is_delta0():
    f = parse_formula(R_N_FORMULA)
    assert is_delta0(f)


def test_unbounded_and_bounded_pinned():
    assert not is_delta0(parse_formula("∃P1. ∀x. (x∈P1 ↔ x⊆N)"))
    assert is_delta0(parse_formula("∀x∈A. ∃y∈B. ⟨x,y⟩∈F"))


def test_delta0_rejects_higher_sorts():
    with pytest.raises(SortError):
        is_delta0(parse_formula("forall x. x in1 A1"))


def test_class_inclusion_set_theoretic_collection_inclusion_not():
    assert is_set_theoretic(
        parse_formula("forall x. (x in1 A1 -> x in1 B1)"))
    assert not is_set_theoretic(
        parse_formula("forall X:Class. (X in2 A2 -> X in2 B2)"))
    assert is_set_theoretic(parse_formula("forall x in A. x = x"))


def test_subset_sugar_expands_by_level():
    f = parse_formula("A sub B")            # sets: bounded, Δ0
    assert is_delta0(f)
    g = parse_formula("x in1 A1 and x in1 B1 and A1 sub B1")
    assert is_set_theoretic(g)              # unbounded set quantifier only
    h = parse_formula("A2 in2 F2 and A2 in2 G2 and F2 sub G2")
    assert not is_set_theoretic(h)          # quantifies over classes


# -- abstracts -----------------------------------------------------------------


def test_abstract_intersection_is_class():
    a = parse_term("{x | x in1 A3 and x in1 B3}")
    assert str(abstract_wf(a)) == "Class"


def test_abstract_five_tuple():
    a = parse_term("{<o,m,d,c,e> | (forall t in m. t in m)"
                   " and (forall t2 in o. t2 in m)}")
    assert str(abstract_wf(a)) == "Class of 5-tuples"


def test_abstract_of_class_variable_is_collection():
    a = parse_term("{X:Class | forall x. (x in1 X -> x in1 A1)}")
    assert str(abstract_wf(a)) == "Collection"


def test_abstract_rejects_higher_sort_quantifier():
    a = parse_term("{x | forall Y:Class. x in1 Y}")
    with pytest.raises(AbstractError):
        abstract_wf(a)


def test_rule6_reduction_and_invariant():
    a = parse_term("{x | x in1 A3 and x in1 B3}")
    red = rule6_reduce(a, [parse_term("w")])
    assert to_text(red) == "(w ∈₁ A3 ∧ w ∈₁ B3)"
    assert is_set_theoretic(red)
    # mixed tuple: an abstract substituted into a class position
    b = parse_term("{X:Class | forall x. x in1 X}")
    red2 = rule6_reduce(b, [parse_term("{y | y in z}")])
    assert is_set_theoretic(red2)


def test_rule6_arity_and_sort_mismatch():
    a = parse_term("{<u,v> | u in v}")
    with pytest.raises(AbstractError):
        rule6_reduce(a, [parse_term("w")])
    b = parse_term("{X:Class | forall x. x in1 X}")
    with pytest.raises(AbstractError):
        rule6_reduce(b, [parse_term("w")])   # set term in class position


# -- sugar recognizer ----------------------------------------------------------


def test_normalize_bounds_recognizes_sugar():
    f = parse_formula("forall x. (x in A -> exists y. (y in B and x = y))")
    g = normalize_bounds(f)
    assert is_delta0(g)
    assert to_text(g) == "∀x ∈ A. ∃y ∈ B. x = y"


def test_normalize_bounds_respects_variable_capture():
    # the bound mentions the quantified variable: not sugar
    f = parse_formula("forall x. (x in x -> x = x)")
    g = normalize_bounds(f)
    assert not is_delta0(g)


# -- separation ----------------------------------------------------------------


def test_separation_rn_licensed():
    v = separation_instance(parse_term("P(P(N*R))"),
                            parse_formula(R_N_FORMULA))
    assert v.licensed
    assert v.report().startswith("licensed")


def test_separation_iterated_powerset_refused():
    v = separation_instance(parse_term("N"),
                            parse_formula(ITERATED_POWERSET))
    assert not v.licensed
    assert "∃f" in v.unbounded
    assert "∃u" in v.unbounded


def test_separation_bounded_body_licensed():
    v = separation_instance(parse_term("N"), parse_formula("x in n"))
    assert v.licensed


# -- random formulas vs independent oracle --------------------------------------


def oracle_delta0(node) -> bool:
    """Independent recursion: the inductive definition of Δ0."""
    if isinstance(node, (Membership, Eq)):
        return True
    if isinstance(node, Not):
        return oracle_delta0(node.body)
    if isinstance(node, BinOp):
        return oracle_delta0(node.left) and oracle_delta0(node.right)
    if isinstance(node, Quant):
        return node.bound is not None and oracle_delta0(node.body)
    raise AssertionError("unexpected node %r" % (node,))


def gen_formula(rng, depth, pool, fresh):
    if depth == 0 or rng.random() < 0.25:
        a, b = rng.choice(pool), rng.choice(pool)
        if rng.random() < 0.5:
            return Membership("in", Var(a), Var(b))
        return Eq(Var(a), Var(b))
    kind = rng.choice(["not", "bin", "bin", "forall", "exists",
                       "forall_b", "exists_b"])
    if kind == "not":
        return Not(gen_formula(rng, depth - 1, pool, fresh))
    if kind == "bin":
        op = rng.choice(["and", "or", "->", "<->"])
        return BinOp(op, gen_formula(rng, depth - 1, pool, fresh),
                     gen_formula(rng, depth - 1, pool, fresh))
    v = "v%d" % next(fresh)
    q = "forall" if kind.startswith("forall") else "exists"
    bound = Var(rng.choice(pool)) if kind.endswith("_b") else None
    return Quant(q, Var(v), bound,
                 gen_formula(rng, depth - 1, pool + [v], fresh))


def test_thousand_random_formulas_match_oracle():
    import itertools
    rng = random.Random(20260823)
    for i in range(1000):
        fresh = itertools.count()
        root = gen_formula(rng, rng.randint(1, 5), ["a0", "b0", "c0"],
                           fresh)
        names = set()
        stack = [root]
        while stack:
            n = stack.pop()
            if isinstance(n, Var):
                names.add(n.name)
            elif isinstance(n, (Membership, Eq, BinOp)):
                stack += [n.left, n.right]
            elif isinstance(n, Not):
                stack.append(n.body)
            elif isinstance(n, Quant):
                stack.append(n.var)
                stack.append(n.body)
                if n.bound is not None:
                    stack.append(n.bound)
        F = Formula(root, {n: "Set" for n in names})
        assert is_delta0(F) == oracle_delta0(root), "case %d" % i
        # round trip through the printer
        assert parse_formula(to_text(F)) == F, "case %d" % i


def test_delta0_closed_under_connectives_and_bounded_quantifiers():
    rng = random.Random(7)
    import itertools
    fresh = itertools.count()
    d0 = []
    while len(d0) < 20:
        root = gen_formula(rng, 3, ["a0", "b0"], fresh)
        F = Formula(root, {n: "Set" for n in set().union(
            *[set()], set(x for x in _names(root)))})
        if is_delta0(F):
            d0.append(F)
    for i in range(0, 20, 2):
        f, g = d0[i].root, d0[i + 1].root
        names = set(_names(f)) | set(_names(g)) | {"w9"}
        sorts = {n: "Set" for n in names}
        for op in ["and", "or", "->", "<->"]:
            assert is_delta0(Formula(BinOp(op, f, g), sorts))
        assert is_delta0(Formula(Not(f), sorts))
        assert is_delta0(
            Formula(Quant("forall", Var("w9"), Var("a0"), f), sorts))
        assert not is_delta0(
            Formula(Quant("exists", Var("w9"), None, f), sorts))


def _names(node):
    if isinstance(node, Var):
        yield node.name
    elif isinstance(node, (Membership, Eq, BinOp)):
        yield from _names(node.left)
        yield from _names(node.right)
    elif isinstance(node, Not):
        yield from _names(node.body)
    elif isinstance(node, Quant):
        yield node.var.name
        if node.bound is not None:
            yield from _names(node.bound)
        yield from _names(node.body)


def test_substitution_preserves_delta0():
    f = parse_formula("∀x∈A. ∃y∈B. ⟨x,y⟩∈F")
    t = parse_term("P(N*R)")
    g = Formula(substitute(f.root, {"A": t.root}), dict(f.sorts))
    assert is_delta0(g)
    h = parse_formula("∃P1. ∀x. x∈P1")
    k = Formula(substitute(h.root, {"P1": t.root}), dict(h.sorts))
    assert not is_delta0(k)     # substitution cannot create bounds
