import pytest
from hypothesis import given

from sclforge.nilpotent import Nil2Element, RelatorLattice, gamma3_membership, magnus2, nil2_mul
from sclforge.words import (A, B, ONE_RELATOR_ALPHABET, Word, comm, one_relator_words, parse_word,
                            surface_alphabet, surface_relator, surface_x)
from strategies import series_magnus, words

a, b = Word.gen(A), Word.gen(B)
SURF2 = surface_alphabet(2)


@given(words(SURF2, 12))
def test_magnus_matches_series_oracle(w):
    m = magnus2(w, SURF2)
    assert (m.v, m.E) == series_magnus(w, SURF2)


@given(words(), words())
def test_mul_matches_concatenation(u, v):
    assert nil2_mul(magnus2(u, 2), magnus2(v, 2)) == magnus2(u * v, 2)


@given(words())
def test_inverse_and_symmetric_part(w):
    m = magnus2(w, 2)
    assert m.inverse() == magnus2(w.inverse(), 2)
    assert m * m.inverse() == Nil2Element.identity(2)
    assert all(x == 0 for row in m.symmetric_defect() for x in row)


@given(words(SURF2), words(SURF2))
def test_commutators_are_antisymmetric(u, v):
    m = magnus2(comm(u, v), SURF2)
    assert m.v == (0,) * 4
    assert all(m.E[i][j] == -m.E[j][i] for i in range(4) for j in range(4))


def test_rank_shorthand():
    assert magnus2(a, 2).v == (1, 0)
    assert magnus2(Word.gen(SURF2[2]), 4).v == (0, 0, 1, 0)
    with pytest.raises(ValueError):
        nil2_mul(magnus2(a, 2), magnus2(Word.gen(SURF2[0]), 4))


def test_single_commutator_coordinates():
    m = magnus2(comm(a, b), 2)
    assert m.E == ((0, 1), (-1, 0))


def test_gamma3_free():
    free = RelatorLattice.free(2)
    assert gamma3_membership(parse_word("[[a,b],a]"), free, ONE_RELATOR_ALPHABET).member
    res = gamma3_membership(comm(a, b), free, ONE_RELATOR_ALPHABET)
    assert not res.member and "lattice" in res.reason
    assert gamma3_membership(a, free, ONE_RELATOR_ALPHABET).reason == "nonzero abelianization"


@pytest.mark.parametrize("ell", [2, 3, 4, 7])
def test_gamma3_onerelator(ell):
    lat = RelatorLattice.onerelator(ell)
    pw = one_relator_words(ell)
    res = gamma3_membership(comm(pw.y, pw.z), lat)
    assert res.member
    # [y, z] picks up exactly ell copies of the relator's degree-2 part
    assert res.E == ((0, -ell), (ell, 0))
    assert gamma3_membership(comm(a, b) ** ell, lat).member
    assert not gamma3_membership(comm(a, b), lat).member


@pytest.mark.parametrize("ell", [2, 3])
def test_gamma3_surface(ell):
    lat = RelatorLattice.surface(ell)
    for n in (1, 2, 5):
        assert gamma3_membership(surface_x(ell, n), lat).member
        assert not gamma3_membership(surface_x(ell, n), RelatorLattice.free(2 * ell), lat.alphabet).member
    assert gamma3_membership(surface_relator(ell), lat).member
    a1, b1 = Word.gen(lat.alphabet[0]), Word.gen(lat.alphabet[1])
    assert not gamma3_membership(comm(a1, b1), lat).member


def test_free_lattice_has_no_alphabet():
    with pytest.raises(ValueError):
        RelatorLattice.free(2).alphabet
