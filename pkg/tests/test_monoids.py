import itertools

import pytest

from varcross.catalog import load_catalog
from varcross.identities import parse_identity, dualize
from varcross.monoids import (ClosureError, FiniteMonoid, MonoidError,
                              aperiodicity, close_presentation, direct_product,
                              dual_monoid, find_isomorphism, format_monoid_file,
                              green, idempotents_central, idempotents_commute,
                              is_completely_regular, is_j_trivial,
                              parse_monoid_file, quotient_by_classes,
                              rees_quotient)
from varcross.satisfaction import satisfies
from varcross.words import Word, parse_word, reverse


@pytest.fixture(scope="module")
def cat():
    return load_catalog()


def two_sided_ideal(m, a):
    # independent oracle: direct double loop, no reuse of green()
    return frozenset(m.table[m.table[x][a]][y]
                     for x in range(m.order) for y in range(m.order))


def test_trivial_table():
    m = FiniteMonoid([[0]], 0)
    assert m.order == 1 and m.zero == 0


def test_association_failure_names_triple():
    # corrupt a copy of the stored order-5 table: with e*f = f the triple
    # (f, e, f) associates two different ways
    cat = load_catalog()
    a0 = cat.monoid("A0")
    table = [list(row) for row in a0.table]
    table[1][2] = 2
    with pytest.raises(MonoidError, match="not associative.*f"):
        FiniteMonoid(table, a0.identity, a0.labels)


def test_identity_law_checked():
    with pytest.raises(MonoidError, match="identity law"):
        FiniteMonoid([[0, 1], [0, 0]], 0)


def test_rees_quotient_examples():
    m = rees_quotient([parse_word("x y")])
    assert m.order == 5
    assert set(m.labels) == {"1", "x", "y", "xy", "0"}
    m = rees_quotient([parse_word("x h x")])
    assert m.order == 7
    assert set(m.labels) == {"1", "x", "h", "xh", "hx", "xhx", "0"}
    m = rees_quotient([Word()])
    assert m.order == 2 and set(m.labels) == {"1", "0"}


def test_rees_zero_product():
    m = rees_quotient([parse_word("x y")])
    x, y = m.element("x"), m.element("y")
    assert m.labels[m.mul(x, y)] == "xy"
    assert m.mul(y, x) == m.zero
    assert m.mul(x, x) == m.zero


def test_rees_jtrivial_exhaustive_small():
    # every factor monoid of at most two words of length <= 4 over {x, y}
    alphabet = ("x", "y")
    pool = [Word(p) for n in range(1, 5) for p in itertools.product(alphabet, repeat=n)]
    for word in pool:
        assert is_j_trivial(rees_quotient([word]))
    for first, second in itertools.combinations(pool, 2):
        assert is_j_trivial(rees_quotient([first, second]))


def test_close_presentation_expected_sets(cat):
    q = close_presentation(
        "abe",
        [("a e", "0"), ("b a", "0"), ("e b", "0"), ("b e", "b"), ("e a", "a"),
         ("e e", "e"), ("a a", "0"), ("b b", "0")],
        expected=["1", "a", "b", "e", "ab", "0"])
    assert q.order == 6
    assert find_isomorphism(q, cat.monoid("Q")) is not None

    with pytest.raises(MonoidError, match="mismatch"):
        close_presentation("e", [("e e", "e")], expected=["1", "e", "0"])


def test_close_presentation_cap():
    # the free monoid on one generator never closes
    with pytest.raises(ClosureError):
        close_presentation("a", [], cap=50)


def test_direct_product(cat):
    a0, q = cat.monoid("A0"), cat.monoid("Q")
    prod = direct_product(a0, q)
    assert prod.order == 30
    trivial = cat.monoid("trivial")
    again = direct_product(a0, trivial)
    assert find_isomorphism(again, a0) is not None


def test_product_satisfaction_is_conjunction(cat):
    a0, q = cat.monoid("A0"), cat.monoid("Q")
    prod = direct_product(a0, q)
    for text in ["x h x t x = x h t x", "x^2 y^2 = y^2 x^2",
                 "x^3 = x^2", "x y = y x"]:
        idy = parse_identity(text)
        both = satisfies(a0, idy).verdict and satisfies(q, idy).verdict
        assert satisfies(prod, idy).verdict == both


def test_dual_monoid(cat):
    trivial = cat.monoid("trivial")
    assert dual_monoid(trivial).table == trivial.table
    e = cat.monoid("E")
    d = dual_monoid(e)
    assert d.table == tuple(tuple(e.table[b][a] for b in range(4)) for a in range(4))
    assert dual_monoid(d).table == e.table
    assert satisfies(d, parse_identity("x h x = x^2 h")).verdict is False


def test_satisfaction_duality(cat):
    import random

    from varcross.identities import Identity
    rng = random.Random(7)
    names = ["A0", "E", "Q", "Rqx", "Rqxy", "H3"]
    letters = ["x", "y", "h"]
    for _ in range(60):
        m = cat.monoid(rng.choice(names))
        u = Word(rng.choices(letters, k=rng.randint(0, 4)))
        v = Word(rng.choices(letters, k=rng.randint(0, 4)))
        idy = Identity(u, v)
        assert satisfies(m, idy).verdict == \
            satisfies(dual_monoid(m), dualize(idy)).verdict


def test_green_and_jtriviality(cat):
    rqxy = cat.monoid("Rqxy")
    ideals = {two_sided_ideal(rqxy, a) for a in range(rqxy.order)}
    assert len(ideals) == rqxy.order  # pairwise distinct: the oracle route
    assert is_j_trivial(rqxy)

    brandt = cat.monoid("B")
    ideals = [two_sided_ideal(brandt, a) for a in range(brandt.order)]
    assert len(set(ideals)) < brandt.order
    assert not is_j_trivial(brandt)

    assert is_j_trivial(cat.monoid("trivial"))


def test_green_h_is_l_meet_r(cat):
    for name in ["A0", "Q", "H3", "B", "K"]:
        data = green(cat.monoid(name))
        meet = {}
        for a in range(cat.monoid(name).order):
            meet.setdefault((data.left_ideals[a], data.right_ideals[a]), []).append(a)
        assert sorted(tuple(v) for v in meet.values()) == sorted(data.h_classes)


def test_jtrivial_implies_trivial_classes_and_aperiodic(cat):
    for name, m in cat.monoids.items():
        if is_j_trivial(m):
            data = green(m)
            assert all(len(c) == 1 for c in data.l_classes)
            assert all(len(c) == 1 for c in data.r_classes)
            assert all(len(c) == 1 for c in data.h_classes)
            assert aperiodicity(m).aperiodic


def test_aperiodicity_examples(cat):
    assert aperiodicity(cat.monoid("Rqx")).index == 2
    assert aperiodicity(cat.monoid("A0")).index == 2
    z2 = FiniteMonoid([[0, 1], [1, 0]], 0, ["1", "g"])
    result = aperiodicity(z2)
    assert not result.aperiodic and result.witness == 1


def test_completely_regular_and_idempotents(cat):
    rq1 = cat.monoid("Rq1")
    assert is_completely_regular(rq1)
    assert idempotents_central(rq1)
    assert not is_completely_regular(cat.monoid("Rqx"))
    a0 = cat.monoid("A0")
    assert not idempotents_commute(a0)
    e, f = a0.element("e"), a0.element("f")
    assert a0.mul(f, e) == a0.zero and a0.mul(e, f) != a0.zero


def test_find_isomorphism(cat):
    a0 = cat.monoid("A0")
    assert find_isomorphism(a0, a0) == list(range(a0.order))
    assert find_isomorphism(a0, dual_monoid(a0)) is not None
    e = cat.monoid("E")
    assert find_isomorphism(e, dual_monoid(e)) is None
    assert find_isomorphism(a0, cat.monoid("Q")) is None  # order mismatch


def test_quotient_congruence(cat):
    k = cat.monoid("K")
    kmod = quotient_by_classes(k, [["ba", "ba2"], ["ea", "ea2"]])
    assert kmod.order == 10
    assert find_isomorphism(kmod, cat.monoid("Kmod")) is not None
    with pytest.raises(MonoidError, match="congruence"):
        quotient_by_classes(k, [["a", "b"]])


def test_monoid_file_roundtrip(cat):
    a0 = cat.monoid("A0")
    parsed, presentation, checks = parse_monoid_file(format_monoid_file(a0), "A0")
    assert parsed.table == a0.table and parsed.labels == a0.labels
    assert presentation is None and checks == {}


def test_spec_table_layout():
    # the documented file layout: identity may sit at any index
    text = """
order 5
identity 4
names 0 e f ef 1
table
0 0 0 0 0
0 1 3 3 1
0 0 2 0 2
0 0 3 0 3
0 1 2 3 4
"""
    m, _, _ = parse_monoid_file(text, "sample")
    assert m.identity == 4 and m.zero == 0
    cat = load_catalog()
    assert find_isomorphism(m, cat.monoid("A0")) is not None
