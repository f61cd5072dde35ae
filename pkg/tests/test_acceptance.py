"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION n: PASS|FAIL ...`` line (visible with
the test output and again in the terminal summary) before asserting.
"""

import json
import subprocess
import sys
import time

import pytest

from substruct import algebra
from substruct.algebra import Exhaustive, battery_check, is_rule_valid, is_valid
from substruct.cli import main
from substruct.deduction import deduction_transform, default_base, parse_derivation, premise_use_count, premises_of
from substruct.enumeration import canonical_key, enumerate_monoid_first, enumerate_size
from substruct.formula import BOT, ONE, TOP, ZERO, Bin, Var, conj, imp, mk_equiv, mk_power, substitute
from substruct.generate import OPS, all_formulas, count_formulas, random_corpus
from substruct.hierarchy import classify, classify_oracle, normalize_n
from substruct.syntax import parse, to_text
from substruct.translate import alpha_equivalent, translate_equiv, translate_mono

from oracles import CINTULA_TEXT, CORPUS_TEXTS, cintula_plus, cintula_prime, quotient_classify_check

SEED = algebra.DEFAULT_SEED
RESULTS: dict[int, str] = {}


def record(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[n] = line
    print("\n" + line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(500, seed=SEED, max_depth=5) + [parse(t) for t in CORPUS_TEXTS]


def test_criterion_01_cintula_golden(capsys):
    start = time.perf_counter()
    outs = {}
    for mode in ("mono", "equiv"):
        main(["translate", CINTULA_TEXT, "--mode", mode, "--n", "1"])
        outs[mode] = json.loads(capsys.readouterr().out)["results"]
    elapsed = time.perf_counter() - start
    plus, plus_names = cintula_plus()
    prime, prime_names = cintula_prime()
    mono_ok = (outs["mono"]["factors"] == 13 and alpha_equivalent(
        parse(outs["mono"]["output"]), plus, set(outs["mono"]["sigma"]), plus_names) is not None)
    equiv_ok = alpha_equivalent(parse(outs["equiv"]["output"]), prime, set(outs["equiv"]["sigma"]),
                                prime_names, commute_factors=True) is not None
    with capsys.disabled():
        record(1, mono_ok and equiv_ok and elapsed < 1.0,
               f"mono 13 factors alpha-equivalent={mono_ok}, equiv alpha-equivalent={equiv_ok}, "
               f"{elapsed:.3f}s")


def test_criterion_02_classification_corpus(capsys):
    phi = parse(CINTULA_TEXT)
    checks = {
        "cintula n=4": classify(phi).n == 4,
        "phi+ n<=3": classify(translate_mono(phi).output).n <= 3,
        "phi' n<=3": classify(translate_equiv(phi).output).n <= 3,
        "weakening n=1": classify(parse("p -> (q -> p)")).n == 1,
        "linearity p=2": classify(parse("(p -> q) \\/ (q -> p)")).p == 2,
        "excluded middle p=2": classify(parse("p \\/ (p -> 0)")).p == 2,
        "right weakening n=2": classify(parse("0 -> p")).n == 2,
    }
    bad = [k for k, v in checks.items() if not v]
    with capsys.disabled():
        record(2, not bad, f"{len(checks) - len(bad)}/{len(checks)} exact" + (f" failed: {bad}" if bad else ""))


def test_criterion_03_oracle_equivalence(capsys):
    start = time.perf_counter()
    atoms = [Var("p"), Var("q"), ZERO, ONE]
    literal = 0
    for phi in all_formulas(2, atoms):
        assert classify(phi) == classify_oracle(phi, 6)
        literal += 1
    total, classes, mismatches = quotient_classify_check(4, atoms, 8)
    elapsed = time.perf_counter() - start
    ok = total == count_formulas(4, 4) and not mismatches and literal == 18500 and elapsed < 60
    with capsys.disabled():
        record(3, ok, f"{total} formulas of depth <= 4 covered via {classes} class representatives "
                      f"(+{literal} literal at depth <= 2), {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_04_soundness_sigma(corpus, catalog, capsys):
    items = []
    for phi in corpus:
        res = translate_mono(phi)
        items.append(imp(substitute(res.sigma, res.output), phi))
    start = time.perf_counter()
    rep = battery_check(items, catalog)
    policies = set(rep.policies())
    bad = len(rep.counterexamples)
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        record(4, bad == 0 and policies == {"exhaustive"},
               f"{len(items)} formulas x {len(catalog)} models, policy {sorted(policies)}, "
               f"{bad} counterexamples, {elapsed:.1f}s")


def test_criterion_05_soundness_forward(corpus, catalog, capsys):
    start = time.perf_counter()
    items = []
    for phi in corpus:
        items.append(imp(phi, translate_mono(phi).output))
        items.append(imp(phi, translate_equiv(phi, 1).output))
    rep = battery_check(items, catalog, seed=SEED)
    elapsed = time.perf_counter() - start
    n_bad = len(rep.counterexamples)
    with capsys.disabled():
        record(5, rep.ok and elapsed < 600,
               f"{len(items)} implications x {len(catalog)} models, policies {rep.policies()}, "
               f"{n_bad} counterexamples, {elapsed:.1f}s")


def _schema_battery():
    a, a1, b, b1, c = (Var(x) for x in ("a", "a1", "b", "b1", "c"))
    sq = lambda x, y: conj(imp(x, y), ONE)  # noqa: E731
    formulas = [
        ("sq transitivity", imp(Bin(OPS[1], sq(a, b), sq(b, c)), sq(a, c))),
        ("sq antitone/monotone ->", imp(Bin(OPS[1], sq(a1, a), sq(b, b1)), sq(imp(a, b), imp(a1, b1)))),
    ]
    for op in OPS[1:]:
        formulas.append((f"sq monotone {op.value}", imp(Bin(OPS[1], sq(a, a1), sq(b, b1)),
                                               sq(Bin(op, a, b), Bin(op, a1, b1)))))
    formulas.append(("equiv refl", mk_equiv(a, a)))
    rules = [
        ("equiv transitivity", (mk_equiv(a, b), mk_equiv(a, c)), mk_equiv(b, c)),
        ("equiv mp", (a, mk_equiv(a, b)), b),
        ("mp", (a, imp(a, b)), b),
        ("adj", (a,), conj(a, ONE)),
    ]
    for op in OPS:
        rules.append((f"equiv congruence {op.value}", (mk_equiv(a, a1), mk_equiv(b, b1)),
                      mk_equiv(Bin(op, a, b), Bin(op, a1, b1))))
    return formulas, rules


def test_criterion_06_schema_battery(catalog, capsys):
    formulas, rules = _schema_battery()
    failed = []
    for name, phi in formulas:
        if not all(is_valid(A, phi, Exhaustive()).valid for A in catalog):
            failed.append(name)
    for name, prem, concl in rules:
        if not all(is_rule_valid(A, prem, concl, Exhaustive()).valid for A in catalog):
            failed.append(name)
    total = len(formulas) + len(rules)
    with capsys.disabled():
        record(6, not failed, f"{total - len(failed)}/{total} schemata and rules valid on "
                              f"{len(catalog)} models, exhaustive" + (f" failed: {failed}" if failed else ""))


def test_criterion_07_enumeration(capsys):
    c1, c2 = len(enumerate_size(1)), len(enumerate_size(2))
    ours = {canonical_key(A.leq.tolist(), A.fuse.tolist(), A.unit, A.zero) for A in enumerate_size(3)}
    theirs = {canonical_key(*rep) for rep in enumerate_monoid_first(3)}
    models = [A for n in range(1, 6) for A in enumerate_size(n)]
    residuated = all(A.residuation_holds() for A in models)
    ok = c1 == 1 and c2 == 2 and ours == theirs and residuated
    with capsys.disabled():
        record(7, ok, f"sizes 1,2 -> {c1},{c2}; size 3 order-first {len(ours)} vs monoid-first "
                      f"{len(theirs)}; residuation on all triples of {len(models)} algebras "
                      f"(sizes 1..5): {residuated}")


def test_criterion_08_normal_forms(catalog, capsys):
    phis = random_corpus(200, seed=SEED + 8, max_depth=5)
    shapes = 0
    items = []
    for phi in phis:
        nf = normalize_n(phi, max(classify(phi).n, 1))
        shapes += nf.shape_ok()
        back = nf.to_formula()
        items += [imp(phi, back), imp(back, phi)]
    rep = battery_check(items, catalog)
    with capsys.disabled():
        record(8, shapes == len(phis) and rep.ok,
               f"{shapes}/{len(phis)} shapes ok, equivalence {len(items)} implications x "
               f"{len(catalog)} models, policies {rep.policies()}, {len(rep.counterexamples)} counterexamples")


def test_criterion_09_deduction(catalog, capsys):
    from pathlib import Path

    base = default_base()
    files = sorted((Path(__file__).parent / "fixtures" / "derivations").glob("*.drv"))
    good = 0
    for path in files:
        text = path.read_text()
        phi = parse(next(ln.split(":", 1)[1] for ln in text.splitlines() if ln.startswith("# discharge")))
        d = parse_derivation(text)
        gamma = [f for f in premises_of(d) if f != phi]
        res = deduction_transform(d, gamma, phi, base)
        n = premise_use_count(d, phi)
        shape = res.n == n and res.formula == imp(mk_power(conj(phi, ONE), n), res.conclusion)
        valid = all(is_rule_valid(A, gamma, res.formula).valid for A in catalog)
        good += shape and valid
    with capsys.disabled():
        record(9, len(files) >= 10 and good == len(files),
               f"{good}/{len(files)} derivations transformed with n = premise uses and rule-valid "
               f"on {len(catalog)} models")


def test_criterion_10_round_trip(capsys):
    phis = random_corpus(10**4, seed=SEED, max_depth=6, constants=(ZERO, ONE, BOT, TOP))
    round_trip = sum(parse(to_text(phi)) == phi for phi in phis)
    cmd = [sys.executable, "-m", "substruct", "translate", CINTULA_TEXT, "--mode", "equiv", "--verify",
           "--seed", str(SEED)]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    stable = first == second and len(first) > 0
    with capsys.disabled():
        record(10, round_trip == len(phis) and stable,
               f"{round_trip}/{len(phis)} parse(print(phi)) == phi; reports byte-identical: {stable}")
