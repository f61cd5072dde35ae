import random

import pytest

from substruct.algebra import battery_check
from substruct.formula import BOT, ONE, TOP, ZERO, Var, conj, imp, node_count
from substruct.generate import all_formulas, count_formulas, random_corpus, random_formula
from substruct.hierarchy import (
    BudgetError,
    HierarchyLevel,
    LevelError,
    OracleBoundError,
    classify,
    classify_oracle,
    normalize_n,
    normalize_p,
)
from substruct.syntax import parse

from oracles import CINTULA_TEXT, quotient_classify_check

p, q, r = Var("p"), Var("q"), Var("r")


@pytest.mark.parametrize("text, p_level, n_level", [
    ("p", 0, 0),
    ("1", 1, 2),
    ("bot", 1, 2),
    ("0", 2, 1),
    ("top", 2, 1),
    ("p * q", 1, 2),
    ("p /\\ q", 2, 1),
    ("p -> (q -> p)", 2, 1),
    ("(p -> q) \\/ (q -> p)", 2, 3),
    ("p \\/ (p -> 0)", 2, 3),
    ("0 -> p", 3, 2),
    ("p /\\ 1", 3, 2),
    (CINTULA_TEXT, 5, 4),
])
def test_classify_examples(text, p_level, n_level):
    phi = parse(text)
    assert classify(phi) == HierarchyLevel(p_level, n_level)
    assert classify_oracle(phi) == classify(phi)


def test_oracle_bound():
    with pytest.raises(OracleBoundError):
        classify_oracle(parse(CINTULA_TEXT), k_max=3)


def test_literal_exhaustive_depth_two():
    atoms = [p, q, ZERO, ONE]
    n = 0
    for phi in all_formulas(2, atoms):
        assert classify(phi) == classify_oracle(phi, 6)
        n += 1
    assert n == count_formulas(2, 4) == 18500


def test_quotient_agrees_with_literal_count():
    total, _, mismatches = quotient_classify_check(2, [p, q, ZERO, ONE], 6)
    assert total == 18500 and not mismatches


def test_quotient_depth_five_three_variables():
    atoms = [p, q, r, ZERO, ONE, BOT, TOP]
    total, _, mismatches = quotient_classify_check(5, atoms, 9)
    assert total == count_formulas(5, len(atoms))
    assert mismatches == []


@pytest.mark.parametrize("phi", random_corpus(300, seed=11, constants=(ZERO, ONE, BOT, TOP)))
def test_level_invariants(phi):
    lv = classify(phi)
    assert abs(lv.p - lv.n) <= 1
    assert (lv.p == lv.n == 0) == isinstance(phi, Var)
    for child in (getattr(phi, "left", None), getattr(phi, "right", None)):
        if child is not None:
            c = classify(child)
            assert c.p <= lv.p + 1 and c.n <= lv.n + 1


def test_normalize_examples():
    nf = normalize_n(parse("p -> (q /\\ r)"), 1)
    assert nf.conjuncts == (((p,), q), ((p,), r))
    assert normalize_p(p, 1).disjuncts == ((p,),)
    assert normalize_n(parse("p -> (q -> r)"), 1).conjuncts == (((p, q), r),)


def test_normalize_units():
    assert normalize_n(TOP, 1).conjuncts == ()
    assert normalize_n(TOP, 1).to_formula() == TOP
    assert normalize_p(ONE, 1).disjuncts == ((),)
    assert normalize_p(BOT, 1).disjuncts == ()
    assert normalize_n(imp(p, ZERO), 1).conjuncts == (((p,), ZERO),)


def test_normalize_split_antecedent():
    nf = normalize_n(parse("p \\/ q -> r"), 1)
    assert nf.conjuncts == (((p,), r), ((q,), r))


def test_normalize_precondition():
    with pytest.raises(LevelError):
        normalize_n(parse("0 -> p"), 1)
    with pytest.raises(LevelError):
        normalize_p(parse("p -> q"), 1)
    with pytest.raises(ValueError):
        normalize_n(p, 0)


def test_normalize_budget():
    phi = parse("(p \\/ q) * (p \\/ q) * (p \\/ q) -> r")
    with pytest.raises(BudgetError):
        normalize_n(phi, 2, budget=3)
    assert normalize_n(phi, 2).shape_ok()


def _normalizable(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        phi = random_formula(rng, max_depth=4)
        if node_count(phi) <= 25:
            out.append(phi)
    return out


@pytest.mark.parametrize("phi", _normalizable(3, 100))
def test_normal_form_shapes(phi):
    lv = classify(phi)
    nf = normalize_n(phi, max(lv.n, 1))
    assert nf.shape_ok()
    pf = normalize_p(phi, max(lv.p, 1))
    assert pf.shape_ok()


@pytest.mark.slow
def test_normal_forms_equivalent(small_catalog):
    phis = _normalizable(4, 30)
    items = []
    for phi in phis:
        a = normalize_n(phi, max(classify(phi).n, 1)).to_formula()
        b = normalize_p(phi, max(classify(phi).p, 1)).to_formula()
        items += [imp(phi, a), imp(a, phi), imp(phi, b), imp(b, phi)]
    assert battery_check(items, small_catalog).ok


def test_p_and_one():
    assert classify_oracle(conj(p, ONE), 4).n == 2
