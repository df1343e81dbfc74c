"""Values of the rotation quasimorphism on products of mixed commutators,
Bavard-type lower bounds, and non-equivalence certificates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from .circle import Q, TauInterval, WordProgram, floor, qstr, word_eval
from .nilpotent import RelatorLattice, gamma3_membership
from .words import (A, B, ONE_RELATOR_ALPHABET, Word, comm, conj, one_relator_words, product,
                    surface_alphabet, surface_relator, surface_x)

DEFECT = 1  # certified defect bound for every mu_rho used here


class NotInNormalSubgroup(ValueError):
    def __init__(self, index, sums):
        super().__init__(f"pair {index}: w has exponent sums {sums}, not in the commutator subgroup")
        self.index = index


class PathDisagreement(AssertionError):
    pass


class BoundViolation(AssertionError):
    pass


@dataclass(frozen=True)
class CommExpr:
    """prod [g_i, w_i] with each w_i in the commutator subgroup.

    source, when set, lists pairs (y_j, z_j) such that prod [y_j, z_j] equals
    the expression in the ambient group; k is their number.
    """

    pairs: tuple
    group: str = "free"
    ell: int = 0
    source: tuple = ()
    relator_power: int = 0  # product word = source product * relator^relator_power, when known

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("empty expression")
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        object.__setattr__(self, "source", tuple(tuple(p) for p in self.source))

    @property
    def alphabet(self):
        if self.group == "surface":
            return surface_alphabet(self.ell)
        if self.group == "onerelator":
            return ONE_RELATOR_ALPHABET
        gens = set()
        for g, w in self.pairs:
            gens |= g.generators() | w.generators()
        return tuple(sorted(gens))

    @property
    def k(self):
        return len(self.source) if self.source else len(self.pairs)

    def product_word(self):
        return product(comm(g, w) for g, w in self.pairs)

    def source_word(self):
        return product(comm(y, z) for y, z in self.source) if self.source else self.product_word()

    def check_normal(self):
        alph = self.alphabet
        for i, (_, w) in enumerate(self.pairs):
            sums = w.exponent_sums(alph)
            if any(sums) or w.generators() - set(alph):
                raise NotInNormalSubgroup(i, sums)

    def conjugate(self, h):
        return CommExpr(tuple((conj(h, g), conj(h, w)) for g, w in self.pairs), self.group, self.ell,
                        tuple((conj(h, y), conj(h, z)) for y, z in self.source), self.relator_power)

    def __add__(self, other):
        return CommExpr(self.pairs + other.pairs, self.group, self.ell, self.source + other.source,
                        self.relator_power + other.relator_power)

    def to_dict(self):
        return {
            "group": self.group,
            "ell": self.ell,
            "pairs": [[str(g), str(w)] for g, w in self.pairs],
            "source": [[str(y), str(z)] for y, z in self.source],
        }


def onerelator_expression(ell):
    """[y, z] in R_ell as the product of ell - 1 mixed commutators [g_i, w_i]."""
    pw = one_relator_words(ell)
    return CommExpr(tuple(zip(pw.g, pw.w)), "onerelator", ell, ((pw.y, pw.z),), 1)


def expand_power(e, side, n):
    """prod [g_i^n, w_i] (left) or prod [g_i, w_i^n] (right) as n*k mixed commutators."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return e
    out = []
    for g, w in e.pairs:
        if side == "left":
            out += [(g, conj(g ** j, w)) for j in range(n - 1, -1, -1)]
        elif side == "right":
            out += [(conj(w ** j, g), w) for j in range(n)]
        else:
            raise ValueError(f"unknown side {side!r}")
    src = tuple((g ** n, w) if side == "left" else (g, w ** n) for g, w in e.pairs)
    res = CommExpr(tuple(out), e.group, e.ell, src)
    if res.product_word() != res.source_word():
        raise AssertionError("expansion does not reduce to the powered product")
    return res


def expand_source_power(e, side, n):
    """For a single source pair (y, z): [y^n, z] or [y, z^n] as conjugates of the base expression."""
    if len(e.source) != 1:
        raise ValueError("needs exactly one source pair")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return e
    (y, z), = e.source
    if side == "left":
        hs = [y ** j for j in range(n - 1, -1, -1)]
        src = ((y ** n, z),)
    elif side == "right":
        hs = [z ** j for j in range(n)]
        src = ((y, z ** n),)
    else:
        raise ValueError(f"unknown side {side!r}")
    pairs = []
    for h in hs:
        pairs += [(conj(h, g), conj(h, w)) for g, w in e.pairs]
    return CommExpr(tuple(pairs), e.group, e.ell, src, n * e.relator_power)


def surface_expression(ell, n):
    """x_n in the surface group as an explicit product of mixed commutators.

    The product word equals x_n * r^(n*ell) in the free group, r the surface
    relator. Each [y_t, z_t] is rewritten through the one-relator identity,
    leaving conjugates of [a_t, b_t]^-ell; those are split as [h, v] v, the
    bare v are pushed to the right, and the leftover product times r^(n*ell)
    is collected into commutators of elements of the commutator subgroup.
    """
    alph = surface_alphabet(ell)
    mixed = []   # (g, w) in order
    bare = []    # (t, sign) symbols of c_t = [a_t, b_t], in order
    bare_word = Word()
    cs = []
    for t in range(ell):
        a_t, b_t = Word.gen(alph[2 * t]), Word.gen(alph[2 * t + 1])
        cs.append(comm(a_t, b_t))
    for t in range(ell):
        pw = one_relator_words(ell, alph[2 * t], alph[2 * t + 1])
        ct = cs[t]
        for j in range(n - 1, -1, -1):
            h = pw.y ** j
            # c(h, c(u, c_t^-ell)) = [h u, c_t^-ell] c_t^-ell
            hu = h * pw.u
            v = ct ** (-ell)
            mixed.append(_pushed((hu, v), bare_word))
            bare += [(t, -1)] * ell
            bare_word = bare_word * v
            for g, w in zip(pw.g, pw.w):
                mixed.append(_pushed((conj(h, g), conj(h, w)), bare_word))
    m = n * ell
    seq = bare + [(t, 1) for _ in range(m) for t in range(ell)]
    collected = _collect(seq, cs)
    e = CommExpr(tuple(mixed + collected), "surface", ell,
                 tuple(_surface_source(ell, n)), m)
    target = surface_x(ell, n) * surface_relator(ell) ** m
    if e.product_word() != target:
        raise AssertionError("surface expansion does not reduce to x_n r^m")
    return e


def _surface_source(ell, n):
    alph = surface_alphabet(ell)
    for t in range(ell):
        pw = one_relator_words(ell, alph[2 * t], alph[2 * t + 1])
        yield (pw.y ** n, pw.z)


def _pushed(pair, prefix):
    """A pair moved right past the bare product `prefix`: v M = (v M v^-1) v."""
    g, w = pair
    return (conj(prefix, g), conj(prefix, w))


def _collect(seq, cs):
    """Write the product of c_t^s over seq (exponents per t summing to 0) as mixed commutators.

    Repeatedly take the first symbol s, find the next inverse symbol, and use
    s B s^-1 = [s, B] B with B the product in between.
    """
    seq = list(seq)
    out = []
    while seq:
        t, s = seq[0]
        for k in range(1, len(seq)):
            if seq[k] == (t, -s):
                break
        else:
            raise ValueError("exponent sums do not cancel")
        mid = seq[1:k]
        if mid:
            Bw = product(cs[tt] ** ss for tt, ss in mid)
            out.append((cs[t] ** s, Bw))
        seq = mid + seq[k + 1:]
    return out


@dataclass
class MuValue:
    interval: TauInterval
    N: int
    exact: bool
    word_length: int
    lift_offsets: list | None = None

    @property
    def center(self):
        return self.interval.center

    @property
    def radius(self):
        return self.interval.radius


def canonical_lift_offsets(rep, e):
    """Integers k with T_-k rho(word) the canonical lift (value at 0 in [0, 1))."""
    out = []
    for g, w in e.pairs:
        out.append((floor(word_eval(rep.maps, g, 0)), floor(word_eval(rep.maps, w, 0))))
    return out


def mu_eval(rep, e, N=1024, record_lifts=None):
    """-tau_R of the product of lifted commutators.

    Changing a lift by an integer translation does not change a commutator,
    so the value equals -tau of the image of the reduced product word.
    """
    e.check_normal()
    for g in e.alphabet:
        if g not in rep.maps and any(g in (p.generators() | q.generators()) for p, q in e.pairs):
            raise KeyError(f"generator {g} is not bound")
    P = e.product_word()
    if record_lifts is None:
        record_lifts = sum(len(g) + len(w) for g, w in e.pairs) <= 2000
    offsets = canonical_lift_offsets(rep, e) if record_lifts else None
    prog = WordProgram(rep.maps, P)
    iv = -prog.tau(N)
    return MuValue(iv, N, iv.exact(), len(P), offsets)


def closed_form_mu(rep, ell, n, N=1024):
    """-tau(c(b a^2, [b^-n, a^-ell])) - n(ell - 1)."""
    a_, b_ = Word.gen(A), Word.gen(B)
    K = conj(b_ * a_ ** 2, comm(b_ ** -n, a_ ** -ell))
    iv = -WordProgram(rep.maps, K).tau(N) - n * (ell - 1)
    return MuValue(iv, N, iv.exact(), len(K))


@dataclass
class SequenceRow:
    n: int
    mu: TauInterval
    mu_closed: TauInterval
    paper_bound: object
    bavard_lower: object
    cl_upper: int

    @property
    def ratio(self):
        return self.bavard_lower / self.cl_upper

    def csv_fields(self):
        return [self.n, self.mu.center, self.mu.radius, self.paper_bound, self.bavard_lower,
                self.cl_upper, self.ratio]


def sequence_report(rep, ell, n_values, N=1024):
    base = onerelator_expression(ell)
    rows = []
    for n in n_values:
        ea = expand_source_power(base, "left", n)
        mu_a = mu_eval(rep, ea, N).interval
        mu_b = closed_form_mu(rep, ell, n, N).interval
        if not mu_a.intersects(mu_b):
            raise PathDisagreement(f"ell={ell} n={n}: {mu_a} vs {mu_b}")
        bound = n * (ell - 1) - 1
        if abs(mu_a.center) < bound - 2 * mu_a.radius:
            raise BoundViolation(f"ell={ell} n={n}: |mu| below {bound}")
        rows.append(SequenceRow(n, mu_a, mu_b, mpq(bound), mu_a.abs_lower() / (2 * DEFECT), 1))
    return rows


@dataclass
class SurfaceRow:
    n: int
    value: TauInterval
    direct: TauInterval | None
    paper_bound: object
    bavard_lower: object
    cl_upper: int
    member: bool

    @property
    def ratio(self):
        return self.bavard_lower / self.cl_upper

    def csv_fields(self):
        return [self.n, self.value.center, self.value.radius, self.paper_bound, self.bavard_lower,
                self.cl_upper, self.ratio]


def surface_pullback_report(rep, ell, n_values, N=1024, cross_check=True, surface_rep=None):
    """ell * mu([y^n, z]) for x_n in the surface group, via the quotient a_i -> a, b_i -> b."""
    from .ehn import build_rep_surface

    base = onerelator_expression(ell)
    lattice = RelatorLattice.surface(ell)
    if cross_check and surface_rep is None:
        from .words import quotient_hom
        surface_rep = rep.pullback(quotient_hom(ell), surface_alphabet(ell))
    rows = []
    for n in n_values:
        member = gamma3_membership(surface_x(ell, n), lattice).member
        if not member:
            raise BoundViolation(f"x_{n} is not in [G, G']")
        mu = mu_eval(rep, expand_source_power(base, "left", n), N).interval
        value = mu.scale(ell)
        direct = None
        if cross_check:
            direct = mu_eval(surface_rep, surface_expression(ell, n), N, record_lifts=False).interval
            if not direct.intersects(value):
                raise PathDisagreement(f"surface ell={ell} n={n}: {direct} vs {value}")
        bound = ell * (n * (ell - 1) - 1)
        if abs(value.center) < bound - 2 * value.radius:
            raise BoundViolation(f"surface ell={ell} n={n}: |value| below {bound}")
        rows.append(SurfaceRow(n, value, direct, mpq(bound), value.abs_lower() / (2 * DEFECT), ell, member))
    return rows


@dataclass
class Certificate:
    verdict: str
    path: str | None
    group: str
    ell: int
    k: int
    expression: dict
    mu: TauInterval | None
    threshold: object
    scl_lower: object
    iterations: int
    representation: dict = field(default_factory=dict)
    derivation: str = ""
    witness_n: int | None = None
    rows: list = field(default_factory=list)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "path": self.path,
            "group": self.group,
            "ell": self.ell,
            "k": self.k,
            "defect_bound": DEFECT,
            "scl_G_upper": self.k,
            "scl_GN_lower": qstr(self.scl_lower) if self.scl_lower is not None else None,
            "threshold": qstr(self.threshold) if self.threshold is not None else None,
            "mu": None if self.mu is None else {"center": qstr(self.mu.center), "radius": qstr(self.mu.radius)},
            "iterations": self.iterations,
            "witness_n": self.witness_n,
            "expression": self.expression,
            "representation": self.representation,
            "derivation": self.derivation,
            "rows": self.rows,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def overflow_certify(rep, e_base, N=1024, lattice=None):
    """Certified when |mu(base)| - radius > (2k - 1) D.

    Then |mu(prod [y_i^n, z_i]) - n mu(prod [y_i, z_i])| <= (n(2k-1) - 1) D
    forces |mu| of the n-th power expression to grow linearly, so the
    powers are unbounded in scl_{G,N} while scl_G stays <= k.
    """
    e_base.check_normal()
    if lattice is None:
        lattice = (RelatorLattice.onerelator(e_base.ell) if e_base.group == "onerelator"
                   else RelatorLattice.surface(e_base.ell) if e_base.group == "surface"
                   else RelatorLattice.free(len(e_base.alphabet)))
    for i, (y, z) in enumerate(e_base.source):
        if any(comm(y, z).exponent_sums(e_base.alphabet)):
            raise ValueError(f"condition (i) fails for source pair {i}")
    mem = gamma3_membership(e_base.source_word(), lattice, e_base.alphabet)
    if not mem.member:
        raise ValueError(f"condition (ii) fails: {mem.reason}")
    mu = mu_eval(rep, e_base, N).interval
    k = e_base.k
    threshold = mpq((2 * k - 1) * DEFECT)
    excess = mu.abs_lower()
    ok = excess > threshold
    return Certificate(
        "certified" if ok else "inconclusive", "overflow" if ok else None, e_base.group, e_base.ell, k,
        e_base.to_dict(), mu, threshold, mu.abs_lower() / (2 * DEFECT), N, dict(rep.meta and _meta(rep)),
        "|mu(prod[y_i^n,z_i]) - n mu(prod[y_i,z_i])| <= (n(2k-1)-1) D, D = 1; "
        f"|mu(base)| - radius = {qstr(excess)} {'>' if ok else '<='} (2k-1) D = {qstr(threshold)}")


def growth_certify(rep, ell, n_max=50, N=1024, ratio=5, cross_check=False):
    """Surface sequence x_n: first n whose Bavard lower bound beats ratio * k (k = ell)."""
    k = ell
    target = ratio * k
    rows = []
    for row in surface_pullback_report(rep, ell, range(1, n_max + 1), N, cross_check=cross_check):
        rows.append({"n": row.n, "value": qstr(row.value.center), "radius": qstr(row.value.radius),
                     "bavard_lower": qstr(row.bavard_lower), "cl_upper": k})
        if row.bavard_lower > target:
            return Certificate(
                "certified", "growth", "surface", ell, k, {"sequence": "x_n", "n": row.n}, row.value,
                mpq(target), row.bavard_lower, N, _meta(rep),
                f"scl_(G,N)(x_n) >= (|mu(x_n)| - radius)/(2D) = {qstr(row.bavard_lower)} > "
                f"{ratio} * k = {target} while cl_G(x_n) <= k = {k}",
                witness_n=row.n, rows=rows)
    return Certificate("inconclusive", None, "surface", ell, k, {"sequence": "x_n", "n_max": n_max}, None,
                       mpq(target), None, N, _meta(rep), "growth threshold not reached", rows=rows)


def _meta(rep):
    return {k: (v if isinstance(v, (str, bool, int)) else qstr(v)) for k, v in rep.meta.items()}
