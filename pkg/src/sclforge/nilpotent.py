"""Degree-2 truncated Magnus coordinates.

An element of the free 2-step nilpotent quotient is stored as (v, E): v the
abelianization vector and E the integer matrix of degree-2 coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import surface_alphabet, ONE_RELATOR_ALPHABET


@dataclass(frozen=True)
class Nil2Element:
    v: tuple
    E: tuple  # tuple of row tuples

    @classmethod
    def identity(cls, rank):
        return cls((0,) * rank, tuple((0,) * rank for _ in range(rank)))

    @property
    def rank(self):
        return len(self.v)

    def __mul__(self, other):
        return nil2_mul(self, other)

    def inverse(self):
        r = self.rank
        v = tuple(-x for x in self.v)
        E = tuple(tuple(-self.E[i][j] + self.v[i] * self.v[j] for j in range(r)) for i in range(r))
        return Nil2Element(v, E)

    def symmetric_defect(self):
        """E + E^T - v v^T + diag(v); zero for every group element."""
        r = self.rank
        return tuple(tuple(self.E[i][j] + self.E[j][i] - self.v[i] * self.v[j] + (self.v[i] if i == j else 0)
                           for j in range(r)) for i in range(r))


def nil2_mul(p, q):
    if p.rank != q.rank:
        raise ValueError("rank mismatch")
    r = p.rank
    v = tuple(p.v[i] + q.v[i] for i in range(r))
    E = tuple(tuple(p.E[i][j] + q.E[i][j] + p.v[i] * q.v[j] for j in range(r)) for i in range(r))
    return Nil2Element(v, E)


def magnus2(w, alphabet):
    """Truncated Magnus image of w; coordinates follow the alphabet order.

    An integer rank is read as (a, b) for rank 2 and a1, b1, a2, ... otherwise.
    """
    if isinstance(alphabet, int):
        alphabet = ONE_RELATOR_ALPHABET if alphabet == 2 else surface_alphabet(alphabet // 2)
    pos = {g: i for i, g in enumerate(alphabet)}
    r = len(alphabet)
    v = [0] * r
    E = [[0] * r for _ in range(r)]
    for g, k in w.blocks:
        if g not in pos:
            raise KeyError(f"generator {g} not in alphabet")
        i = pos[g]
        # right-multiply by g^k: cross term v_j * k on column i, then the block itself
        for j in range(r):
            E[j][i] += v[j] * k
        E[i][i] += k * (k - 1) // 2
        v[i] += k
    return Nil2Element(tuple(v), tuple(map(tuple, E)))


@dataclass(frozen=True)
class RelatorLattice:
    """Lattice of antisymmetric E-parts generated by the relator images."""

    kind: str  # free | onerelator | surface
    ell: int = 0
    rank: int = 2

    @classmethod
    def free(cls, rank):
        return cls("free", 0, rank)

    @classmethod
    def onerelator(cls, ell):
        return cls("onerelator", ell, 2)

    @classmethod
    def surface(cls, ell):
        return cls("surface", ell, 2 * ell)

    @property
    def alphabet(self):
        if self.kind == "onerelator":
            return ONE_RELATOR_ALPHABET
        if self.kind == "surface":
            return surface_alphabet(self.ell)
        raise ValueError("free lattice has no fixed alphabet")

    def contains(self, S):
        """S is an antisymmetric integer matrix."""
        r = self.rank
        if self.kind == "free":
            return all(S[i][j] == 0 for i in range(r) for j in range(r))
        if self.kind == "onerelator":
            return S[0][1] % self.ell == 0
        if self.kind == "surface":
            c = S[0][1]
            for i in range(r):
                for j in range(i + 1, r):
                    want = c if (i % 2 == 0 and j == i + 1) else 0
                    if S[i][j] != want:
                        return False
            return True
        raise ValueError(f"unknown lattice kind {self.kind!r}")


@dataclass(frozen=True)
class Gamma3Result:
    member: bool
    v: tuple
    E: tuple
    reason: str


def gamma3_membership(w, lattice, alphabet=None):
    """Is w in the third lower central term of the presented group?

    The free nilpotent quotient of class 2 detects this exactly: w must be
    trivial in the abelianization and its degree-2 commutator part must lie in
    the span of the relator images.
    """
    alph = alphabet if alphabet is not None else lattice.alphabet
    m = magnus2(w, alph)
    # with v = 0 the matrix E is antisymmetric
    S = m.E
    if any(m.v):
        return Gamma3Result(False, m.v, S, "nonzero abelianization")
    if not lattice.contains(S):
        return Gamma3Result(False, m.v, S, "commutator part outside relator lattice")
    return Gamma3Result(True, m.v, S, "ok")
