from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from sclforge.circle import (BreakpointBudgetExceeded, InvalidMap, LiftedMapR, PLMap, TauInterval,
                             WordProgram, certified_tau, circle_equal, commutator, displacement_extrema,
                             floor, pl_compose, pl_equal, pl_eval, pl_invert, tau_estimate, tau_real,
                             tau_word, translation, word_eval, word_map)
from sclforge.ehn import build_rep_onerelator, north_south_pair
from sclforge.words import A, B, Word, comm, parse_word
from strategies import frac_eval, plmaps, random_plmap, small_q, words

N = 256


def test_floor_is_exact_for_tiny_negatives():
    assert floor(mpq(-1, 10 ** 40)) == -1
    assert floor(mpq(7, 2)) == 3


def test_translation_canonical_form():
    t = translation(Fraction(7, 3))
    assert t.is_translation() and len(t) == 1
    assert t.translation_amount() == mpq(7, 3)
    assert PLMap([(0, 0), (Fraction(1, 2), Fraction(1, 2))]) == PLMap.identity()


def test_collinear_breakpoints_are_dropped():
    f = PLMap([(0, 0), (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3)),
               (Fraction(1, 2), Fraction(3, 4))])
    assert len(f) == 2


@pytest.mark.parametrize("pts", [
    [(0, 0), (Fraction(1, 2), 0)],
    [(0, 0), (Fraction(1, 2), Fraction(3, 2))],
    [(0, 0), (0, Fraction(1, 2))],
    [],
])
def test_invalid_maps(pts):
    with pytest.raises(InvalidMap):
        PLMap(pts)


def test_two_breakpoint_interpolation():
    # slope 2 on [0, 1/4], slope 2/3 on the rest
    f = PLMap([(0, 0), (Fraction(1, 4), Fraction(1, 2))])
    assert f(Fraction(1, 8)) == mpq(1, 4)
    assert f(Fraction(5, 8)) == mpq(1, 2) + mpq(2, 3) * mpq(3, 8)
    assert f.slopes == (2, mpq(2, 3))


@given(plmaps(), small_q)
def test_eval_matches_fraction_oracle(f, x):
    assert pl_eval(f, x) == frac_eval(f, x)


@given(plmaps(), small_q)
def test_equivariance(f, x):
    assert f(x + 1) == f(x) + 1
    assert f.inv(f(x)) == x


@given(plmaps())
def test_json_round_trip(f):
    assert PLMap.from_json(f.to_json()) == f
    e = LiftedMapR(f, Fraction(2, 7))
    assert LiftedMapR.from_dict(e.to_dict()) == e


@given(plmaps(), plmaps(), small_q)
def test_compose_pointwise(f, g, x):
    assert pl_compose(f, g)(x) == f(g(x))
    h = f * g
    for bx in g.xs:
        assert h(bx) == frac_eval(f, frac_eval(g, bx))


@given(plmaps(), plmaps(), plmaps())
def test_group_laws(f, g, h):
    assert pl_equal((f * g) * h, f * (g * h))
    assert pl_invert(pl_invert(f)) == f
    assert f * f.inverse() == PLMap.identity()


@given(small_q, small_q)
def test_translations_add(x, y):
    assert translation(x) * translation(y) == translation(x + y)


def test_breakpoint_cap():
    f = PLMap([(0, 0), (Fraction(1, 3), Fraction(1, 2)), (Fraction(2, 3), Fraction(3, 4))])
    g = PLMap([(Fraction(1, 5), 0), (Fraction(1, 2), Fraction(1, 7)), (Fraction(4, 5), Fraction(2, 3))])
    with pytest.raises(BreakpointBudgetExceeded) as info:
        f.compose(g, cap=3)
    assert info.value.cap == 3 and "3" in str(info.value)


def test_circle_equal_modulo_deck():
    f = PLMap([(0, 0), (Fraction(1, 3), Fraction(1, 2))])
    assert not pl_equal(translation(1) * f, f)
    assert circle_equal(translation(1) * f, f)
    assert not circle_equal(translation(Fraction(1, 2)) * f, f)


@given(plmaps())
def test_displacement_extrema_oracle(f):
    lo, hi = displacement_extrema(f)
    samples = [Fraction(k, 97) for k in range(97)] + [Fraction(int(x.numerator), int(x.denominator)) for x in f.xs]
    d = [frac_eval(f, x) - x for x in samples]
    assert lo <= min(d) and max(d) <= hi
    assert lo in [f.ys[i] - f.xs[i] for i in range(len(f))]
    g = f * translation(1)
    assert displacement_extrema(g) == (lo + 1, hi + 1)


def test_displacement_of_translation_and_north_south():
    assert displacement_extrema(translation(Fraction(3, 5))) == (mpq(3, 5), mpq(3, 5))
    g = north_south_pair(Fraction(2, 3)).map
    lo, hi = displacement_extrema(g)
    d = [y - x for x, y in g.breakpoints]
    assert (lo, hi) == (min(d), max(d)) and lo < 0 < hi


def test_tau_shortcuts():
    assert tau_estimate(translation(Fraction(1, 3))) == TauInterval(Fraction(1, 3), 0)
    assert tau_real(LiftedMapR(translation(Fraction(2, 3)), 5)) == TauInterval(Fraction(17, 3), 0)
    g = north_south_pair(Fraction(1, 2)).map
    assert tau_estimate(g) == TauInterval(0, 0)
    assert tau_estimate(g.shifted(3)) == TauInterval(3, 0)


def _conjugated_rotation(h, p, q):
    return h * translation(Fraction(p, q)) * h.inverse()


@given(plmaps(), st.integers(-5, 5), st.integers(1, 7))
def test_iteration_bound_on_known_tau(h, p, q):
    # h T_{p/q} h^-1 has translation number p/q; check |f^N(x) - x - N tau| < 1
    f = _conjugated_rotation(h, p, q)
    tau = Fraction(p, q)
    for x in (Fraction(0), Fraction(1, 3)):
        y = Fraction(x)
        for n in range(1, 40):
            y = frac_eval(f, y)
            assert abs(y - x - n * tau) < 1
    assert tau_estimate(f, N).contains(tau)


@given(plmaps())
def test_certified_radius(f):
    iv = tau_estimate(f, N)
    assert iv.radius <= mpq(1, N)
    assert displacement_extrema(f)[0] <= iv.lo and iv.hi <= displacement_extrema(f)[1]


def test_certified_interval_contains_plain_iteration(rng):
    for _ in range(20):
        f = random_plmap(rng)
        iv = certified_tau([f], 64)
        y = Fraction(0)
        for _ in range(64):
            y = frac_eval(f, y)
        assert iv.lo <= y / 64 + Fraction(1, 64) and y / 64 - Fraction(1, 64) <= iv.hi


@given(plmaps(), plmaps())
def test_tau_defect(f, g):
    d = tau_estimate(f * g, N).center - tau_estimate(f, N).center - tau_estimate(g, N).center
    assert abs(d) <= 1 + mpq(3, N)


@given(plmaps(), st.integers(2, 5))
def test_tau_homogeneity(f, m):
    d = tau_estimate(f ** m, N).center - m * tau_estimate(f, N).center
    assert abs(d) <= mpq(m + 1, N)


@given(plmaps(), plmaps())
def test_tau_conjugation_invariance(f, h):
    assert tau_estimate(f, N).intersects(tau_estimate(h * f * h.inverse(), N))


@given(plmaps(), plmaps(), st.integers(-2, 2), st.integers(-2, 2))
def test_commutator_lift_independence(f, g, m, n):
    assert commutator(f * translation(m), g * translation(n)) == commutator(f, g)


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_word_eval_examples(ell):
    rep = build_rep_onerelator(ell)
    a, b = Word.gen(A), Word.gen(B)
    assert word_eval(rep.maps, Word(), Fraction(1, 3)) == mpq(1, 3)
    assert word_eval(rep.maps, a * b * b.inverse(), Fraction(1, 3)) == rep.maps[A](Fraction(1, 3))
    assert word_eval(rep.maps, comm(a, b), 0) == mpq(ell - 1, ell)


@given(words(max_len=8), small_q)
def test_word_eval_matches_symbolic(w, x):
    rep = build_rep_onerelator(3)
    assert word_eval(rep.maps, w, x) == word_map(rep.maps, w)(x)
    assert WordProgram(rep.maps, w)(x) == word_map(rep.maps, w)(x)


def test_unbound_generator():
    with pytest.raises(KeyError):
        word_eval({A: translation(0)}, parse_word("a b"), 0)


def test_word_program_tau_matches_symbolic():
    rep = build_rep_onerelator(3)
    w = parse_word("(a b^-1 a^2)^7 b^3 (a b)^5")
    f = word_map(rep.maps, w)
    assert tau_word(rep.maps, w).intersects(tau_estimate(f))


def test_lifted_map_central_part():
    e = LiftedMapR(translation(Fraction(5, 2)), 0)
    assert e.map(0) == mpq(1, 2) and e.r == 2
    assert word_eval({A: e}, Word.gen(A), 0) == mpq(1, 2)
    assert tau_word({A: e}, Word.gen(A) ** 3) == TauInterval(Fraction(15, 2), 0)


def test_interval_arithmetic():
    i = TauInterval.from_bounds(1, 2)
    assert (i.center, i.radius) == (mpq(3, 2), mpq(1, 2))
    assert (-i).contains(-1) and (i - 1).contains(0) and i.scale(-2).contains(-4)
    assert i.abs_lower() == 1 and TauInterval(0, 1).abs_lower() == 0
    with pytest.raises(ValueError):
        TauInterval(0, -1)
