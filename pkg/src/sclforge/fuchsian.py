"""Floating-point Fuchsian representation of the genus-ell surface group.

Quarantined numerics: nothing here is certified. Circle coordinate: a line
through the origin at angle pi*x, so x is defined modulo 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .words import comm, surface_alphabet, surface_relator

DET_TOL = 1e-12
RELATOR_TOL = 1e-9


class RelatorCheckFailed(AssertionError):
    pass


class FitDegenerate(ValueError):
    pass


def _rot(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class MobiusMap:
    """SL(2,R) matrix with its canonical lift: polar part first, then rotation.

    M = R(theta) P with P symmetric positive definite; P moves every line by
    less than a quarter turn, which fixes a continuous lift, and theta is
    taken in (-pi, pi].
    """

    m: tuple

    def __post_init__(self):
        M = np.asarray(self.m, dtype=float)
        if abs(np.linalg.det(M) - 1) > DET_TOL * max(1.0, np.abs(M).max() ** 2):
            raise ValueError(f"determinant {np.linalg.det(M)} is not 1")
        object.__setattr__(self, "m", tuple(map(tuple, M)))

    @property
    def matrix(self):
        return np.array(self.m)

    @classmethod
    def rotation(cls, theta):
        """Boundary rotation by theta; it turns lines by theta/2."""
        return cls(_rot(theta / 2))

    def __matmul__(self, other):
        return MobiusMap(self.matrix @ other.matrix)

    def inverse(self):
        (a, b), (c, d) = self.m
        return MobiusMap(((d, -b), (-c, a)))

    def trace(self):
        return self.m[0][0] + self.m[1][1]

    def is_hyperbolic(self):
        return abs(self.trace()) > 2

    def polar(self):
        M = self.matrix
        # rotation angle of the orthogonal polar factor
        theta = math.atan2(M[1, 0] - M[0, 1], M[0, 0] + M[1, 1])
        P = _rot(-theta) @ M
        return theta, (P + P.T) / 2

    def lift(self):
        return LiftedMobius.canonical(self)

    def to_dict(self):
        return {"matrix": [[repr(float(x)) for x in row] for row in self.m]}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(tuple(float(x) for x in row) for row in d["matrix"]))


@dataclass(frozen=True)
class LiftedMobius:
    """A lift x -> P~(x) + theta/pi + k to the real line."""

    theta: float
    p: tuple
    k: int = 0

    @classmethod
    def canonical(cls, M):
        theta, P = M.polar()
        return cls(theta, tuple(map(tuple, P)))

    def __call__(self, x):
        (p00, p01), (p10, p11) = self.p
        t = math.pi * x
        c, s = math.cos(t), math.sin(t)
        u, v = p00 * c + p01 * s, p10 * c + p11 * s
        return x + math.atan2(c * v - s * u, c * u + s * v) / math.pi + self.theta / math.pi + self.k


class AngleLift:
    """Continuous bookkeeping for a word acting on the line: the letters are
    grouped into chunks whose matrix norm stays moderate, and each chunk gets
    the integer offset that matches the letter-by-letter lift."""

    def __init__(self, maps, w, norm_cap=1e3):
        lifts = {}
        for g, M in maps.items():
            lifts[(g, 1)] = M.lift()
            lifts[(g, -1)] = M.inverse().lift()
        self.chunks = []
        cur, letters = None, []
        # apply rightmost letter first
        for g, s in reversed(list(w.letters())):
            M = maps[g] if s > 0 else maps[g].inverse()
            nxt = M.matrix if cur is None else M.matrix @ cur
            if cur is not None and np.abs(nxt).max() > norm_cap:
                self.chunks.append(self._close(cur, letters, lifts))
                nxt, letters = M.matrix, []
            cur = nxt
            letters.append(lifts[(g, s)])
        if cur is not None:
            self.chunks.append(self._close(cur, letters, lifts))

    @staticmethod
    def _close(M, letters, lifts):
        L = LiftedMobius.canonical(MobiusMap(M))
        x0 = 0.0
        for f in letters:
            x0 = f(x0)
        k = round(x0 - L(0.0))
        return LiftedMobius(L.theta, L.p, k)

    def __call__(self, x):
        for f in self.chunks:
            x = f(x)
        return x


@dataclass
class TauNumeric:
    estimate: float
    uncertainty: float


def tau_numeric(maps, w, iters=256):
    """Translation number of the lifted word action, by iteration at 0."""
    F = AngleLift(maps, w)
    if not F.chunks:
        return TauNumeric(0.0, 0.0)
    x = 0.0
    for _ in range(iters):
        x = F(x)
    drift = 1e-12 * iters * len(F.chunks)
    return TauNumeric(x / iters, 1 / iters + drift)


def _side_pairing(phi_i, phi_j, r):
    """Isometry of the disk taking side i to side j of the regular polygon."""
    # translation along the real axis by 2r, in SU(1,1)
    T = np.array([[math.cosh(r), math.sinh(r)], [math.sinh(r), math.cosh(r)]], dtype=complex)

    def R(t):
        return np.array([[np.exp(1j * t / 2), 0], [0, np.exp(-1j * t / 2)]])

    return R(phi_j) @ T @ R(math.pi - phi_i)


def _to_sl2r(U):
    C = np.array([[1, -1j], [1, 1j]])
    M = np.linalg.inv(C) @ U @ C
    if np.abs(M.imag).max() > 1e-9 * max(1.0, np.abs(M).max()):
        raise ValueError("Cayley transform is not real")
    M = M.real
    return M / math.sqrt(np.linalg.det(M))


def fuchsian_rep(ell):
    """Side pairings of the regular 4*ell-gon with angles pi/(2 ell)."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    from .ehn import Representation

    n_sides = 4 * ell
    r = math.acosh(1 / math.tan(math.pi / n_sides))
    phi = [2 * math.pi * k / n_sides for k in range(n_sides)]
    alph = surface_alphabet(ell)
    rel = surface_relator(ell)
    # side labels a_t b_t a_t^-1 b_t^-1 going around; a_t: side 4t+2 -> 4t, b_t: side 4t+1 -> 4t+3
    maps = {}
    for t in range(ell):
        maps[alph[2 * t]] = MobiusMap(_to_sl2r(_side_pairing(phi[4 * t + 2], phi[4 * t], r)))
        maps[alph[2 * t + 1]] = MobiusMap(_to_sl2r(_side_pairing(phi[4 * t + 1], phi[4 * t + 3], r)))
    res = relator_residual(maps, rel)
    if res > RELATOR_TOL:
        raise RelatorCheckFailed(f"relator residual {res:.3g} exceeds {RELATOR_TOL}")
    return Representation(maps, "numeric-Mobius", {"ell": ell, "residual": f"{res:.3g}"})


def word_matrix(maps, w):
    M = np.eye(2)
    for g, s in w.letters():
        M = M @ (maps[g].matrix if s > 0 else maps[g].inverse().matrix)
    return M


def relator_residual(maps, rel):
    M = word_matrix(maps, rel)
    return min(np.abs(M - np.eye(2)).max(), np.abs(M + np.eye(2)).max())


def mu_numeric(rep, e, iters=256):
    """-tau of the lifted product of an expression's commutators."""
    t = tau_numeric(rep.maps, e.product_word(), iters)
    return TauNumeric(-t.estimate, t.uncertainty)


@dataclass
class AffineFit:
    slope: float
    intercept: float
    r2: float

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2}


def affine_fit(ns, values):
    ns, values = np.asarray(ns, float), np.asarray(values, float)
    if len(ns) < 3 or np.ptp(ns) == 0:
        raise FitDegenerate("need at least three distinct n")
    s, t = np.polyfit(ns, values, 1)
    resid = values - (s * ns + t)
    tot = ((values - values.mean()) ** 2).sum()
    if tot == 0:
        raise FitDegenerate("values are constant")
    return AffineFit(float(s), float(t), float(1 - (resid ** 2).sum() / tot))


@dataclass
class NumericRow:
    n: int
    mu: float
    uncertainty: float
    cl_upper: int

    @property
    def bavard_lower(self):
        return max(0.0, abs(self.mu) - self.uncertainty) / 2

    def csv_fields(self):
        return [self.n, self.mu, self.uncertainty, "", self.bavard_lower, self.cl_upper,
                self.bavard_lower / self.cl_upper]


def mu_numeric_report(ell, n_values, iters=256, rep=None):
    from .qm import surface_expression

    rep = rep or fuchsian_rep(ell)
    rows = []
    for n in n_values:
        m = mu_numeric(rep, surface_expression(ell, n), iters)
        rows.append(NumericRow(n, m.estimate, m.uncertainty, ell))
    fit = affine_fit([r.n for r in rows], [r.mu for r in rows])
    if fit.slope == 0:
        raise FitDegenerate("zero slope")
    return rows, fit


def single_commutator_values(rep, pairs, iters=256):
    out = []
    for g, w in pairs:
        t = tau_numeric(rep.maps, comm(g, w), iters)
        out.append(TauNumeric(-t.estimate, t.uncertainty))
    return out
