import pytest

from substruct.algebra import battery_check
from substruct.formula import ONE, Var, conj, fuse, imp, mk_equiv, mk_sq_arrow, product_factors, substitute, variables
from substruct.generate import random_corpus
from substruct.hierarchy import classify
from substruct.syntax import parse
from substruct.translate import (
    Mode,
    Sharing,
    allocate,
    alpha_equivalent,
    extension_axiom_mono,
    inverse_sigma,
    translate,
    translate_equiv,
    translate_mono,
)

from oracles import CINTULA_TEXT, cintula_plus, cintula_prime

p, q, x = Var("p"), Var("q"), Var("x")


def fresh(res):
    return set(res.allocation.mapping.values())


def test_cintula_mono_golden():
    res = translate_mono(parse(CINTULA_TEXT))
    assert len(res.factors) == 13
    golden, names = cintula_plus()
    assert alpha_equivalent(res.output, golden, fresh(res), names) is not None
    assert classify(res.output).n == 3


def test_cintula_equiv_golden():
    res = translate_equiv(parse(CINTULA_TEXT), n=1)
    assert len(res.factors) == 19
    golden, names = cintula_prime()
    # factor order differs from post-order for three variable occurrences
    assert alpha_equivalent(res.output, golden, fresh(res), names) is None
    assert alpha_equivalent(res.output, golden, fresh(res), names, commute_factors=True) is not None
    assert classify(res.output).n == 3


def test_alpha_rejects_non_bijection():
    f = imp(fuse(Var("a"), Var("b")), Var("a"))
    g = imp(fuse(Var("c"), Var("c")), Var("c"))
    assert alpha_equivalent(f, g, {"a", "b"}, {"c"}) is None
    h = imp(fuse(Var("d"), Var("e")), Var("d"))
    assert alpha_equivalent(f, h, {"a", "b"}, {"d", "e"}) == {"a": "d", "b": "e"}
    # free variables must match exactly
    assert alpha_equivalent(imp(p, Var("a")), imp(q, Var("d")), {"a"}, {"d"}) is None


def test_mono_on_a_variable():
    res = translate_mono(p)
    assert res.output == imp(ONE, p)
    assert res.factors == ()


def test_mono_on_a_product():
    res = translate_mono(fuse(p, q))
    (v,) = fresh(res)
    assert res.output == imp(mk_sq_arrow(fuse(p, q), Var(v)), Var(v))


def test_equiv_on_a_variable():
    res = translate_equiv(p)
    (v,) = fresh(res)
    assert res.output == imp(conj(mk_equiv(Var(v), p), ONE), Var(v))


def test_equiv_power():
    res = translate_equiv(fuse(p, q), n=2)
    assert len(res.factors) == 3
    assert all(f == fuse(g, g) for f, g in zip(res.factors, (product_factors(f)[-1] for f in res.factors)))
    with pytest.raises(ValueError):
        translate_equiv(p, n=0)


def test_extension_axiom_shapes():
    phi = parse("(p * q -> 0) -> p /\\ q")
    res = translate_mono(phi)
    names = res.allocation.mapping
    L = 0
    pq = Var(names[(L, L)])
    assert res.factors[0] == mk_sq_arrow(fuse(p, q), pq)  # positive: two flips
    with pytest.raises(ValueError):
        from substruct.polarity import Polarity
        extension_axiom_mono(phi, (L, L, L), Polarity.POSITIVE, res.allocation)


def test_fresh_names_avoid_source_variables():
    phi = parse("x0 -> x1 * x0")
    res = translate_mono(phi)
    assert not fresh(res) & set(variables(phi))


def test_sharing_per_formula():
    phi = parse(CINTULA_TEXT)
    a = translate_mono(phi, Sharing.PER_OCCURRENCE)
    b = translate_mono(phi, Sharing.PER_FORMULA)
    assert len(fresh(a)) == 13
    assert len(fresh(b)) == 10  # the four occurrences of 0 share a name
    assert len(b.factors) == 13


def test_aliases():
    alloc = allocate(parse(CINTULA_TEXT))
    aliases = set(alloc.aliases.values())
    assert {"p[0,0]", "p[0,3]", "p[r * q]"} <= aliases


def test_sigma_undoes_allocation():
    phi = parse(CINTULA_TEXT)
    res = translate_mono(phi)
    sigma = inverse_sigma(res)
    assert substitute(sigma, Var(res.allocation.mapping[()])) == phi
    for path, name in res.allocation.mapping.items():
        assert sigma[name] is not None


@pytest.mark.parametrize("phi", random_corpus(150, seed=23))
def test_output_levels(phi):
    mono = translate(phi, Mode.MONO)
    equiv = translate(phi, Mode.EQUIV)
    assert classify(mono.output).n <= 3
    assert classify(equiv.output).n <= 3


@pytest.mark.slow
def test_soundness_sample(small_catalog):
    items = []
    for phi in random_corpus(20, seed=99, max_depth=4):
        res = translate_mono(phi)
        items += [imp(substitute(res.sigma, res.output), phi), imp(phi, res.output)]
        items.append(imp(phi, translate_equiv(phi).output))
    assert battery_check(items, small_catalog).ok
