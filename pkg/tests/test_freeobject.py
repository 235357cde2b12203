import itertools

import pytest

from varcross.catalog import load_catalog
from varcross.freeobject import (build_free_object, is_isoterm,
                                 word_class_count)
from varcross.identities import Identity
from varcross.monoids import dual_monoid, rees_quotient
from varcross.satisfaction import satisfies
from varcross.words import Word, parse_word, reverse


@pytest.fixture(scope="module")
def cat():
    return load_catalog()


def test_zero_generators(cat):
    auto = build_free_object(cat.monoid("Q"), 0)
    assert auto.n_states == 1 and auto.complete


def test_free_object_orders(cat):
    auto = build_free_object(cat.monoid("Rqx"), 1)
    assert auto.n_states == 3  # classes of 1, x, and all higher powers
    auto = build_free_object(cat.monoid("Rq1"), 2)
    assert auto.n_states == 4  # the free semilattice monoid on two letters


def test_states_separate_exactly_the_satisfied_identities(cat):
    words = [Word(p) for n in range(6) for p in itertools.product(("g1", "g2"), repeat=n)]
    for name in ["Rq1", "Rqx", "Rqxy", "E"]:
        m = cat.monoid(name)
        auto = build_free_object(m, 2)
        for u, v in itertools.combinations(words, 2):
            same = auto.run(u) == auto.run(v)
            assert same == satisfies(m, Identity(u, v)).verdict, (name, u, v)


def test_representatives_are_shortest(cat):
    auto = build_free_object(cat.monoid("Rqxy"), 2)
    seen = {}
    words = [Word(p) for n in range(7) for p in itertools.product(("g1", "g2"), repeat=n)]
    for w in words:
        seen.setdefault(auto.run(w), w)  # shortlex-first enumeration
    for state, shortest in seen.items():
        assert len(auto.representative(state)) == len(shortest)


def test_isoterm_examples(cat):
    assert is_isoterm(cat.monoid("Rqxhx"), parse_word("x h x")).status == "isoterm"
    assert is_isoterm(cat.monoid("Rqxy"), parse_word("x y")).status == "isoterm"
    res = is_isoterm(cat.monoid("Rqx"), parse_word("x y"))
    assert res.status == "not-isoterm"
    assert res.witness == parse_word("y x")
    assert is_isoterm(cat.monoid("Rqxy"), parse_word("x")).status == "isoterm"


def test_isoterm_empty_word(cat):
    # the empty word is an isoterm unless some power collapses to 1
    from varcross.monoids import FiniteMonoid
    assert is_isoterm(cat.monoid("Rqxy"), Word()).status == "isoterm"
    z2 = FiniteMonoid([[0, 1], [1, 0]], 0, ["1", "g"])
    res = is_isoterm(z2, Word())
    assert res.status == "not-isoterm" and res.witness is not None


def test_isoterm_duality(cat):
    words = [parse_word(t) for t in ["x", "x y", "x y x", "x^2", "x y y"]]
    for name in ["Rq1", "Rqx", "Rqxy", "E", "A0"]:
        m = cat.monoid(name)
        for w in words:
            assert is_isoterm(m, w).status == \
                is_isoterm(dual_monoid(m), reverse(w)).status, (name, w)


def test_word_class_counts(cat):
    assert word_class_count(cat.monoid("Rqxhx"), parse_word("x h x")).value == 1
    infinite = word_class_count(cat.monoid("Rq1"), parse_word("x y"))
    assert infinite.kind == "infinite"
    assert word_class_count(cat.monoid("Rqxy"), Word()).value == 1


def test_word_class_count_cap_and_pumping(cat):
    # all powers from the square up coincide, so that class is infinite
    assert word_class_count(cat.monoid("Rqx"), parse_word("x^2")).kind == "infinite"
    capped = word_class_count(cat.monoid("Rqxhx"), parse_word("x h x"), cap=0)
    assert capped.kind == "at-least" and capped.value == 0


def test_state_cap_gives_inconclusive(cat):
    res = is_isoterm(cat.monoid("Rqxhx"), parse_word("x h x"), state_cap=3)
    assert res.status == "inconclusive"
    out = word_class_count(cat.monoid("Rqxhx"), parse_word("x h x"), state_cap=3)
    assert out.kind == "inconclusive"


def test_dump_format(cat):
    auto = build_free_object(cat.monoid("Rqx"), 1, generators=("x",))
    lines = auto.dump()
    assert lines[0].startswith("0 [1] : x -> ")
    assert len(lines) == 3
