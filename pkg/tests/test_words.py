import pytest
from hypothesis import given, strategies as st

from sclforge.words import (A, B, Generator, GroupHom, ONE_RELATOR_ALPHABET, Word, WordParseError, comm,
                            conj, one_relator_words, parse_word, power_expansion, product,
                            quotient_hom, relation_identity_rhs, surface_alphabet, surface_relator,
                            surface_x, verify_free_identity, verify_power_expansion)
from strategies import naive_reduce, words

a, b = Word.gen(A), Word.gen(B)


def test_generator_names():
    assert str(Generator("a", 3)) == "a3"
    with pytest.raises(ValueError):
        Generator("A")
    assert sorted(surface_alphabet(2)) == [Generator("a", 1), Generator("a", 2), Generator("b", 1), Generator("b", 2)]


@pytest.mark.parametrize("text, expected", [
    ("1", Word()),
    ("a b a^-1", a * b * a.inverse()),
    ("[a,b]", a * b * a.inverse() * b.inverse()),
    ("c(b, a)", b * a * b.inverse()),
    ("(a b)^2", a * b * a * b),
    ("a^-2 a^2", Word()),
    ("c(b a^2, b^-1)", b * a ** 2 * b.inverse() * a ** -2 * b.inverse()),
])
def test_parse_examples(text, expected):
    assert parse_word(text) == expected


def test_parse_longest_name_in_surface_alphabet():
    alph = surface_alphabet(12)
    w = parse_word("a1 b12 a1^-1", alph)
    assert [str(g) for g, _ in w.blocks] == ["a1", "b12", "a1"]


@pytest.mark.parametrize("text, pos", [("a b x", 4), ("[a,b", 4), ("a^", 2), ("c(a b)", 5)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(WordParseError) as info:
        parse_word(text)
    assert info.value.position == pos


@given(words())
def test_reduction_matches_naive_stack(w):
    letters = list(w.letters())
    assert naive_reduce(letters) == letters


@given(st.lists(st.tuples(st.sampled_from((A, B)), st.sampled_from((-1, 1))), max_size=30))
def test_word_construction_reduces(letters):
    assert list(Word(letters).letters()) == naive_reduce(letters)


@given(words(), words(), words())
def test_group_laws(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert (u * u.inverse()).is_identity()
    assert (u * v).inverse() == v.inverse() * u.inverse()


@given(words(), st.integers(-6, 6))
def test_power_matches_repeated_product(w, n):
    expected = Word()
    for _ in range(abs(n)):
        expected = expected * (w if n > 0 else w.inverse())
    assert w ** n == expected


@given(words())
def test_str_parse_round_trip(w):
    assert parse_word(str(w)) == w


@pytest.mark.parametrize("ell", range(2, 13))
def test_relation_identity(ell):
    ok, witness = verify_free_identity("lemma-relation", ell=ell)
    assert ok and witness.is_identity()


@pytest.mark.parametrize("ell", [2, 3, 7])
def test_relation_rhs_second_form(ell):
    pw = one_relator_words(ell)
    assert relation_identity_rhs(ell) == conj(pw.u, pw.relator) * comm(pw.y, pw.z)


@given(words(max_len=6), words(max_len=6), st.integers(1, 10), st.sampled_from(("left", "right")))
def test_power_expansion(g, h, n, side):
    ok, witness = verify_power_expansion(g, h, n, side)
    assert ok and witness.is_identity()
    assert len(power_expansion(g, h, n, side)) == n


def test_power_expansion_rejects_bad_input():
    with pytest.raises(ValueError):
        power_expansion(a, b, 0)
    with pytest.raises(ValueError):
        power_expansion(a, b, 2, "up")
    with pytest.raises(ValueError):
        verify_free_identity("nope")


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_family_exponent_sums(ell):
    pw = one_relator_words(ell)
    assert len(pw.g) == len(pw.w) == ell - 1
    for w in pw.w:
        assert w.exponent_sums(ONE_RELATOR_ALPHABET) == (0, 0)
    assert pw.y.exponent_sums(ONE_RELATOR_ALPHABET) == (0, -1)
    assert pw.z.exponent_sums(ONE_RELATOR_ALPHABET) == (-ell, 0)
    assert pw.g[0] == parse_word("b a b^-1")


@pytest.mark.parametrize("ell", [2, 3])
def test_quotient_sends_surface_relator_to_power(ell):
    q = quotient_hom(ell)
    assert q(surface_relator(ell)) == comm(a, b) ** ell
    pw = one_relator_words(ell)
    assert q(surface_x(ell, 3)) == comm(pw.y ** 3, pw.z) ** ell


def test_group_hom_identity_on_unlisted():
    h = GroupHom({A: b})
    assert h(a * b) == b * b


def test_product_and_len():
    assert product([a, a.inverse(), b]) == b
    assert len(parse_word("a^3 b^-2")) == 5
    assert str(Word()) == "1"
