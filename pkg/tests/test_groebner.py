import random

import pytest

from operadgb.elements import OperadElement
from operadgb.groebner import (
    BasisFormatError,
    BudgetExceededError,
    buchberger,
    load_basis,
    reduce_element,
    reduce_random,
    s_polynomials,
    save_basis,
    validate_interreduced,
)
from operadgb.hilbert import count_normal_monomials, emit_table, normal_monomials
from operadgb.presentation import builtin_presentations, shuffle_images
from operadgb.trees import all_trees, leaf, node

from oracles import quotient_dimension

BUILTINS = builtin_presentations()


@pytest.fixture(scope="module")
def lie6():
    return buchberger(BUILTINS["lie"], 6)


@pytest.fixture(scope="module")
def gd4():
    return buchberger(BUILTINS["gd"], 4)


@pytest.fixture(scope="module")
def gd5():
    return buchberger(BUILTINS["gd"], 5)


def test_lie_is_complete_with_jacobi_alone(lie6):
    assert lie6.rule_counts() == {3: 1}
    assert [count_normal_monomials(lie6, n) for n in range(1, 7)] == \
        [1, 1, 2, 6, 24, 120]


def test_lie_jacobi_self_spolys_reduce_to_zero(lie6):
    rule = lie6.rules[0]
    spolys = s_polynomials(rule, rule, 4, lie6.generators)
    assert spolys  # the classical overlaps exist
    for s in spolys:
        assert reduce_element(s, lie6).is_zero()


def test_spoly_count_symmetric(gd4):
    r1, r2 = gd4.rules[0], gd4.rules[6]
    a = s_polynomials(r1, r2, 4, gd4.generators)
    b = s_polynomials(r2, r1, 4, gd4.generators)
    assert len(a) == len(b)


def test_relations_reduce_to_zero(gd4):
    for rel in BUILTINS["gd"].relations:
        assert reduce_element(rel, gd4).is_zero()


def test_reduce_rule_element_to_zero(gd4):
    for rule in gd4.rules[:8]:
        assert reduce_element(rule.as_element(), gd4).is_zero()


def test_reduce_idempotent_and_graded(gd4):
    rng = random.Random(5)
    mons = all_trees(gd4.generators, 4)
    for _ in range(25):
        f = OperadElement(
            {m: rng.randint(-4, 4) for m in rng.sample(mons, 3)}, 4)
        nf = reduce_element(f, gd4)
        assert reduce_element(nf, gd4) == nf
        for t in nf.terms:
            assert gd4.reducer.find_divisor(t) is None


def test_dimensions_match_bruteforce_oracle():
    """Normal-monomial counts agree with quotient dimensions computed by
    independent linear algebra over the full monomial basis."""
    for name in ("lie", "novikov", "gd"):
        p = BUILTINS[name]
        basis = buchberger(p, 4)
        for n in range(1, 5):
            assert count_normal_monomials(basis, n) == quotient_dimension(p, n), \
                (name, n)


def test_wsgd_dimension_drop_at_arity4():
    gd = buchberger(BUILTINS["gd"], 4)
    ws = buchberger(BUILTINS["wsgd"], 4)
    assert count_normal_monomials(gd, 4) == 140
    assert count_normal_monomials(ws, 4) == 130


def test_dimension_monotone_under_more_relations():
    gd = buchberger(BUILTINS["gd"], 4)
    ws = buchberger(BUILTINS["wsgd"], 4)
    for n in range(1, 5):
        assert count_normal_monomials(ws, n) <= count_normal_monomials(gd, n)


def test_interreduced_invariant(gd4):
    validate_interreduced(gd4)


def test_emit_table(gd4):
    table = emit_table(gd4, 4)
    assert table.entries == {1: 1, 2: 3, 3: 17, 4: 140}
    assert table.as_rows().splitlines()[0] == "1,1"
    assert "140" in table.as_text()
    with pytest.raises(BudgetExceededError):
        emit_table(gd4, 5)


def test_order_invariance_of_dimensions():
    for order_id in ("pathlex", "revpathlex"):
        basis = buchberger(BUILTINS["gd"], 4, order_id=order_id)
        assert [count_normal_monomials(basis, n) for n in (3, 4)] == [17, 140]


def test_normal_monomials_are_normal(gd4):
    for t in normal_monomials(gd4, 4):
        assert gd4.reducer.find_divisor(t) is None
    # and the reducible ones are exactly the complement
    total = len(all_trees(gd4.generators, 4))
    assert total - count_normal_monomials(gd4, 4) == \
        sum(1 for t in all_trees(gd4.generators, 4)
            if gd4.reducer.find_divisor(t) is not None)


def test_spec1_nonzero_mod_gd(gd4):
    images = shuffle_images("spec1")
    residues = [reduce_element(e, gd4) for e in images]
    assert any(not r.is_zero() for r in residues)


def test_church_rosser_random_strategies(gd4):
    rng = random.Random(17)
    mons = all_trees(gd4.generators, 4)
    for _ in range(30):
        f = OperadElement(
            {m: rng.randint(-3, 3) for m in rng.sample(mons, 3)}, 4)
        det = reduce_element(f, gd4)
        ran = reduce_random(f, gd4, rng)
        assert det == ran


def test_budget_errors(gd4):
    five = OperadElement.monomial(
        node("z", [node("z", [node("z", [node("z", [leaf(1), leaf(2)]),
                                         leaf(3)]), leaf(4)]), leaf(5)]))
    with pytest.raises(BudgetExceededError):
        reduce_element(five, gd4)
    with pytest.raises(BudgetExceededError):
        buchberger(BUILTINS["wsgd"], 3)


def test_save_load_roundtrip(tmp_path, gd4):
    path = tmp_path / "gd4.basis"
    save_basis(gd4, str(path))
    loaded = load_basis(str(path))
    assert loaded.presentation_name == gd4.presentation_name
    assert loaded.order_id == gd4.order_id
    assert loaded.max_arity == gd4.max_arity
    assert {(r.lead, r.tail) for r in loaded.rules} == \
        {(r.lead, r.tail) for r in gd4.rules}
    assert count_normal_monomials(loaded, 4) == 140


def test_load_rejects_tampered_file(tmp_path, gd4):
    path = tmp_path / "gd4.basis"
    save_basis(gd4, str(path))
    text = path.read_text()
    lines = text.splitlines()
    lines[8] = lines[8].replace("1*", "2*", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(BasisFormatError):
        load_basis(str(path))


def test_load_rejects_wrong_magic(tmp_path):
    path = tmp_path / "junk.basis"
    path.write_text("not a basis\n")
    with pytest.raises(BasisFormatError):
        load_basis(str(path))


def test_spolys_empty_without_overlap(gd4):
    # no common multiple fits below the leads' own arity
    r = gd4.rules[0]
    assert s_polynomials(r, r, r.arity, gd4.generators) == []


def test_wsgd_equals_gd_up_to_arity3():
    gd = buchberger(BUILTINS["gd"], 4)
    ws = buchberger(BUILTINS["wsgd"], 4)
    for n in (1, 2, 3):
        assert count_normal_monomials(ws, n) == count_normal_monomials(gd, n)
