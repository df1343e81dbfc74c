"""Commutator-length bounds from displacement and exact PL commutators
equal to small translations, plus the resulting representation of the
one-relator group <a, b | [a,b]^ell>."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from .circle import (PLMap, LiftedMapR, Q, floor, qstr, circle_equal, commutator,
                     word_map, translation)
from .words import A, B, Generator, Word, comm, surface_alphabet


@dataclass(frozen=True)
class EHNBound:
    n: int
    single_commutator: bool
    m_lo: object
    m_hi: object


def cl_bound_ehn(f):
    """Least n >= 1 with m_lo < 2n - 1 and m_hi > 1 - 2n; then cl <= n."""
    if isinstance(f, LiftedMapR):
        # (f, r) lies in the image of H~ only for integer r, where it is T_r f
        if Q(f.r).denominator != 1:
            raise ValueError("central part must vanish modulo the integer deck shifts")
        f = f.map.shifted(f.r)
    m_lo, m_hi = f.displacement_extrema()
    n1 = floor((m_lo + 1) / 2) + 1
    n2 = floor((1 - m_hi) / 2) + 1
    n = max(1, n1, n2)
    return EHNBound(n, n == 1, m_lo, m_hi)


class NotNorthSouth(ValueError):
    pass


class InfeasibleParameters(ValueError):
    pass


class ConjugatorError(RuntimeError):
    pass


def _fixed_points(f):
    """Exact fixed points in [0, 1) with the slope on each side."""
    xs, ys = f.xs, f.ys
    n = len(xs)
    out = []
    for i in range(n):
        x0, d0 = xs[i], ys[i] - xs[i]
        if i + 1 < n:
            x1, d1 = xs[i + 1], ys[i + 1] - xs[i + 1]
        else:
            x1, d1 = xs[0] + 1, ys[0] - xs[0]
        if d0 == 0 and d1 == 0:
            raise NotNorthSouth("an interval of fixed points")
        if d0 == 0:
            out.append(x0)
        elif d0 * d1 < 0:
            z = x0 - d0 * (x1 - x0) / (d1 - d0)
            out.append(z - floor(z))
    return sorted(set(out))


@dataclass(frozen=True)
class NorthSouthMap:
    map: PLMap
    repeller: object
    attractor: object
    expansion: object
    contraction: object

    @classmethod
    def from_map(cls, f):
        if f.is_translation():
            raise NotNorthSouth("translations have no isolated fixed points")
        fps = _fixed_points(f)
        if len(fps) != 2:
            raise NotNorthSouth(f"expected 2 fixed points per period, found {len(fps)}")
        rep = att = None
        for z in fps:
            left, right = f.slope_at(z, -1), f.slope_at(z, 1)
            if left != right:
                raise NotNorthSouth(f"fixed point {qstr(z)} sits on a breakpoint")
            if left > 1:
                rep, lam = z, left
            elif left < 1:
                att, mu = z, left
        if rep is None or att is None:
            raise NotNorthSouth("need one repelling and one attracting fixed point")
        return cls(f, rep, att, lam, mu)

    def __call__(self, x):
        return self.map(x)


def ns_profile_amplitude(lam, mu):
    """Displacement range of the two-breakpoint north-south map."""
    return (lam - 1) * (1 - mu) / (lam - mu)


def default_multipliers(c):
    lam = mpq(2)
    while ns_profile_amplitude(lam, 1 / lam) <= abs(Q(c)):
        lam *= 2
    return lam, 1 / lam


def north_south_pair(c, expansion=None, contraction=None):
    """North-south g with T_c g north-south too, same multipliers.

    g has slope lam on an arc of length (1-mu)/(lam-mu) and slope mu on the
    rest, so its displacement rises by A = (lam-1)(1-mu)/(lam-mu) and falls
    back. Placing the minimum at -(c + A)/2 makes both 0 and -c regular values
    crossed once up and once down, which needs A > |c|. The repeller of g is
    moved to 0.
    """
    c = Q(c)
    if c == 0 or abs(c) >= 1:
        raise InfeasibleParameters("need 0 < |c| < 1")
    if expansion is None:
        lam, mu = default_multipliers(c)
    else:
        lam = Q(expansion)
        mu = Q(contraction) if contraction is not None else 1 / lam
    if not (lam > 1 and 0 < mu < 1):
        raise InfeasibleParameters("need expansion > 1 and 0 < contraction < 1")
    L = (1 - mu) / (lam - mu)
    amp = (lam - 1) * L
    if amp <= abs(c):
        raise InfeasibleParameters(
            f"constraint (lam-1)(1-mu)/(lam-mu) > |c| fails: {qstr(amp)} <= {qstr(abs(c))}")
    d0 = -(c + amp) / 2
    p = -d0 / (lam - 1)
    g = PLMap([(-p, d0 - p), (L - p, L + d0 + amp - p)])
    ns = NorthSouthMap.from_map(g)
    h = NorthSouthMap.from_map(g.shifted(c))
    if (ns.expansion, ns.contraction) != (lam, mu) or (h.expansion, h.contraction) != (lam, mu):
        raise InfeasibleParameters("multipliers not realised")
    return ns


def _interp(pts, x):
    """Evaluate the PL function through sorted (x, y) pairs at x."""
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise ValueError("outside known range")


def _interp_inv(pts, y):
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if y0 <= y <= y1:
            return x0 + (x1 - x0) * (y - y0) / (y1 - y0)
    raise ValueError("outside known range")


def _strictly_inside(F, lo, hi):
    return [b for b in F.breakpoints_in(lo, hi) if lo < b < hi]


def _collinear(pts, z1, z2):
    x0, y0 = pts[0]
    s = (y0 - z2) / (x0 - z1)
    return all(y - z2 == s * (x - z1) for x, y in pts)


def _germ_anchor(w1, w2, rep1, att1, rep2, att2, anchor):
    """Move the anchor toward the repeller until both maps are linear from the
    repeller to it; then the arc-affine map already intertwines there."""
    u = Q(anchor)
    for _ in range(200):
        u2 = rep2 + (u - rep1) * (att2 - rep2) / (att1 - rep1)
        if (not _strictly_inside(w1.map, *sorted((rep1, u)))
                and not _strictly_inside(w2.map, *sorted((rep2, u2)))):
            return u, u2
        u = rep1 + (u - rep1) / 2
    raise ConjugatorError(f"no anchor inside the linear germs near {qstr(rep1)}")


def _transport_arc(w1, w2, rep1, att1, rep2, att2, anchor, max_steps):
    """Graph points of a conjugator on the arc between rep1 and att1."""
    u, u2 = _germ_anchor(w1, w2, rep1, att1, rep2, att2, anchor)
    known = {u: u2, w1(u): w2(u2)}
    F1, F2 = w1.map, w2.map
    directions = [(F1, F2, att1, att2), (F1.inverse(), F2.inverse(), rep1, rep2)]
    for F, G, z1, z2 in directions:
        lo, hi = sorted((u, w1(u)))
        dom = sorted((x, known[x]) for x in known if lo <= x <= hi)
        for step in range(max_steps):
            s, t = dom[0][0], dom[-1][0]
            cand = {x for x, _ in dom}
            cand.update(F.breakpoints_in(s, t))
            for b in G.breakpoints_in(dom[0][1], dom[-1][1]):
                cand.add(_interp_inv(dom, b))
            new = sorted((F(x), G(_interp(dom, x))) for x in cand)
            for x, y in new:
                known[x] = y
            dom = new
            s, t = dom[0][0], dom[-1][0]
            h_lo, h_hi = min(s, z1), max(t, z1)
            k_lo, k_hi = min(dom[0][1], z2), max(dom[-1][1], z2)
            if (not _strictly_inside(F, h_lo, h_hi) and not _strictly_inside(G, k_lo, k_hi)
                    and _collinear(dom, z1, z2)):
                known[z1] = z2
                break
        else:
            raise ConjugatorError(
                f"transport toward {qstr(z1)} did not reach the linear germs in {max_steps} steps; "
                f"last domain [{qstr(dom[0][0])}, {qstr(dom[-1][0])}] with {len(dom)} points")
    return known


def pl_conjugator(w1, w2, anchors=None, max_steps=200):
    """Exact PL f with f o w1 = w2 o f.

    On each arc between fixed points, f is fixed on one fundamental domain
    [u, w1(u)] as the affine map matching the arc endpoints, then pushed
    toward both ends with f = w2 f w1^-1 (and its inverse) until the pieces
    sit inside the linear germs of both maps and line up with the fixed
    points; from there on f is that line.
    """
    if (w1.expansion, w1.contraction) != (w2.expansion, w2.contraction):
        raise ValueError("multipliers differ; no PL conjugacy with linear germs")
    p1, q1 = w1.repeller, w1.attractor
    p2, q2 = w2.repeller, w2.attractor
    q1 = q1 if q1 > p1 else q1 + 1
    q2 = q2 if q2 > p2 else q2 + 1
    if anchors is None:
        anchors = ((p1 + q1) / 2, (q1 + p1 + 1) / 2)
    known = {}
    known.update(_transport_arc(w1, w2, p1, q1, p2, q2, anchors[0], max_steps))
    known.update(_transport_arc(w1, w2, p1 + 1, q1, p2 + 1, q2, anchors[1], max_steps))
    pts = [(x, y) for x, y in known.items() if p1 <= x < p1 + 1]
    f = PLMap(pts)
    if f * w1.map != w2.map * f:
        raise ConjugatorError("constructed map does not intertwine")
    return f


def translation_as_commutator(c, expansion=None, contraction=None):
    """Exact (f, g) with f g f^-1 g^-1 = T_c."""
    c = Q(c)
    if abs(c) >= 1:
        raise ValueError("|c| >= 1: a translation with m_lo = m_hi = c >= 1 is not a single commutator")
    if c == 0:
        raise ValueError("c must be nonzero")
    if c < 0:
        f, g = translation_as_commutator(-c, expansion, contraction)
        return g, f
    ns = north_south_pair(c, expansion, contraction)
    h = NorthSouthMap.from_map(ns.map.shifted(c))
    f = pl_conjugator(ns, h)
    g = ns.map
    if commutator(f, g) != translation(c):
        raise ConjugatorError("commutator check failed")
    return f, g


@dataclass
class Representation:
    """Generators bound to lifted maps, plus construction metadata."""

    maps: dict
    kind: str = "exact-PL"
    meta: dict = field(default_factory=dict)

    def __getitem__(self, g):
        return self.maps[g]

    def image(self, w, cap=None):
        return word_map(self.maps, w, cap)

    def pullback(self, hom, domain):
        """Representation of the domain group: g -> image of hom(g)."""
        maps = {g: self.image(hom(Word.gen(g))) for g in domain}
        return Representation(maps, self.kind, dict(self.meta, pullback=True))

    def to_dict(self):
        return {
            "kind": self.kind,
            "generators": {str(g): m.to_dict() for g, m in sorted(self.maps.items())},
            "meta": {k: (qstr(v) if not isinstance(v, (str, bool, int)) else v) for k, v in self.meta.items()},
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        maps = {}
        for name, md in d["generators"].items():
            g = _generator_from_text(name)
            if "matrix" in md:
                from .fuchsian import MobiusMap
                maps[g] = MobiusMap.from_dict(md)
            else:
                maps[g] = LiftedMapR.from_dict(md) if "r" in md else PLMap.from_dict(md)
        return cls(maps, d.get("kind", "exact-PL"), dict(d.get("meta", {})))

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def _generator_from_text(name):
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return Generator(head, int(tail) if tail else None)


def build_rep_onerelator(ell, expansion=None, contraction=None):
    """a -> f, b -> g with [f, g] = T_{(ell-1)/ell}; the relator lifts to T_{ell-1}."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    c = mpq(ell - 1, ell)
    f, g = translation_as_commutator(c, expansion, contraction)
    lam, mu = (Q(expansion), Q(contraction) if contraction is not None else 1 / Q(expansion)) \
        if expansion is not None else default_multipliers(c)
    rep = Representation({A: f, B: g}, "exact-PL",
                         {"ell": ell, "c": c, "expansion": lam, "contraction": mu})
    rel = rep.image(comm(Word.gen(A), Word.gen(B)) ** ell)
    if rel != translation(ell - 1) or not circle_equal(rel, PLMap.identity()):
        raise ConjugatorError("relator check failed")
    return rep


def build_rep_surface(ell, **kw):
    """a_i -> f, b_i -> g, i.e. the one-relator representation composed with a_i -> a, b_i -> b."""
    from .words import quotient_hom

    base = build_rep_onerelator(ell, **kw)
    rep = base.pullback(quotient_hom(ell), surface_alphabet(ell))
    rep.meta["group"] = "surface"
    return rep
