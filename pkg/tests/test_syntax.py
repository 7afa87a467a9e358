import random

import pytest
from hypothesis import given, settings, strategies as st

from nre.corpus import random_nre
from nre.syntax import (Alt, Atom, Concat, Epsilon, Nest, NreSyntaxError, Star, Symbol, atom, labels,
                        nesting_depth, parse, plus, render, size)


def test_parse_paper_style_query():
    assert parse("creator^- . partOf . series") == Concat(
        Atom(Symbol("creator", True)), Concat(atom("partOf"), atom("series")))


@pytest.mark.parametrize("text", ["eps", "()", " eps "])
def test_epsilon_spellings(text):
    assert parse(text) == Epsilon()


def test_precedence():
    assert parse("(a | b)* . [c^-]") == Concat(Star(Alt(atom("a"), atom("b"))), Nest(atom("c^-")))
    assert parse("a . b | c") == Alt(Concat(atom("a"), atom("b")), atom("c"))
    assert parse("a . b*") == Concat(atom("a"), Star(atom("b")))


def test_binary_operators_associate_right():
    assert parse("a . b . c") == Concat(atom("a"), Concat(atom("b"), atom("c")))
    assert parse("a | b | c") == Alt(atom("a"), Alt(atom("b"), atom("c")))


def test_plus_is_sugar():
    assert parse("a+") == plus(atom("a")) == Concat(atom("a"), Star(atom("a")))


@pytest.mark.parametrize("e, text", [
    (Epsilon(), "eps"),
    (atom("a^-"), "a^-"),
    (Star(Alt(atom("a"), atom("b"))), "(a | b)*"),
    (Concat(Concat(atom("a"), atom("b")), atom("c")), "(a . b) . c"),
    (Nest(Alt(atom("a"), atom("b"))), "[a | b]"),
])
def test_render(e, text):
    assert render(e) == text
    assert parse(text) == e


@pytest.mark.parametrize("text, pos", [
    ("a . (b", 6),
    ("a .", 3),
    ("a | | b", 4),
    ("[a", 2),
    ("a ^ b", 2),
    ("", 0),
    ("a b", 2),
])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(NreSyntaxError) as info:
        parse(text)
    assert info.value.position == pos
    assert f"position {pos}" in str(info.value)


@pytest.mark.parametrize("text", ["a%b", "a&", "$", "x . $y"])
def test_reserved_characters_rejected(text):
    with pytest.raises(NreSyntaxError, match="reserved"):
        parse(text)


@pytest.mark.parametrize("text", ["S", "E . a"])
def test_marker_labels_rejected(text):
    with pytest.raises(NreSyntaxError, match="reserved"):
        parse(text)


def test_symbol_inverse_is_involution():
    s = Symbol("knows")
    assert s.inv().inv() == s
    assert str(s.inv()) == "knows^-"
    assert Symbol.parse("knows^-") == s.inv()
    with pytest.raises(ValueError):
        Symbol("a.b")


@pytest.mark.parametrize("text, depth", [("a", 1), ("[[a] . b]", 3), ("(a . [b])*", 2), ("eps", 1), ("[eps]", 2)])
def test_nesting_depth(text, depth):
    assert nesting_depth(parse(text)) == depth


def test_size_and_labels():
    e = parse("(a | b^-)* . [c]")
    assert size(e) == 7
    assert labels(e) == {"a", "b", "c"}


def test_render_roundtrip_seeded():
    rng = random.Random(7)
    for _ in range(1000):
        e = random_nre(rng, max_size=12, labels=("a", "b", "c"), max_depth=None)
        assert parse(render(e)) == e


leaf = st.one_of(
    st.just(Epsilon()),
    st.builds(lambda b, inv: Atom(Symbol(b, inv)), st.sampled_from(["a", "b", "x1"]), st.booleans()),
)
nres = st.recursive(leaf, lambda kids: st.one_of(
    st.builds(Concat, kids, kids), st.builds(Alt, kids, kids), st.builds(Star, kids), st.builds(Nest, kids)),
    max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(nres)
def test_roundtrip_property(e):
    assert parse(render(e)) == e


@settings(max_examples=200, deadline=None)
@given(nres)
def test_depth_rules(e):
    assert nesting_depth(Nest(e)) == nesting_depth(e) + 1
    assert nesting_depth(Star(e)) == nesting_depth(e)
