"""Free group words stored as run-length blocks, plus the fixed words used
throughout the package (the g_i, w_i, y, z family and the surface x_n)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class Generator:
    name: str
    index: int | None = None

    def __post_init__(self):
        if not re.fullmatch(r"[a-z][a-z_]*", self.name):
            raise ValueError(f"bad generator name {self.name!r}")

    def _key(self):
        return (self.name, -1 if self.index is None else self.index)

    def __lt__(self, other):
        return self._key() < other._key()

    def __str__(self):
        return self.name if self.index is None else f"{self.name}{self.index}"

    def __repr__(self):
        return f"Generator({str(self)!r})"


A = Generator("a")
B = Generator("b")
ONE_RELATOR_ALPHABET = (A, B)


def surface_alphabet(ell):
    """a1, b1, a2, b2, ... ; coordinates follow this order."""
    out = []
    for i in range(1, ell + 1):
        out += [Generator("a", i), Generator("b", i)]
    return tuple(out)


def _reduce(blocks):
    stack = []
    for g, e in blocks:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            e2 = stack[-1][1] + e
            stack.pop()
            if e2:
                stack.append((g, e2))
        else:
            stack.append((g, e))
    return tuple(stack)


class Word:
    """Freely reduced word; blocks are (Generator, nonzero int) pairs."""

    __slots__ = ("blocks", "_hash")

    def __init__(self, blocks=()):
        self.blocks = _reduce(blocks)
        self._hash = None

    @classmethod
    def gen(cls, g, k=1):
        return cls(((g, k),))

    @classmethod
    def identity(cls):
        return cls()

    def __mul__(self, other):
        return Word(self.blocks + other.blocks)

    def inverse(self):
        return Word(tuple((g, -e) for g, e in reversed(self.blocks)))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0 or not self.blocks:
            return Word()
        out = Word()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, Word) and self.blocks == other.blocks

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.blocks)
        return self._hash

    def __len__(self):
        return sum(abs(e) for _, e in self.blocks)

    def __bool__(self):
        return bool(self.blocks)

    def is_identity(self):
        return not self.blocks

    def letters(self):
        for g, e in self.blocks:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield g, s

    def exponent_sum(self, g):
        return sum(e for h, e in self.blocks if h == g)

    def exponent_sums(self, alphabet):
        return tuple(self.exponent_sum(g) for g in alphabet)

    def generators(self):
        return {g for g, _ in self.blocks}

    def __str__(self):
        if not self.blocks:
            return "1"
        parts = []
        for g, e in self.blocks:
            parts.append(str(g) if e == 1 else f"{g}^{e}")
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self)!r})"


def conj(h, z):
    """h z h^-1"""
    return h * z * h.inverse()


def comm(u, v):
    return u * v * u.inverse() * v.inverse()


def product(words):
    blocks = []
    for w in words:
        blocks.extend(w.blocks)
    return Word(blocks)


class WordParseError(ValueError):
    def __init__(self, msg, position):
        super().__init__(f"{msg} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text, alphabet):
        self.s = text
        self.i = 0
        self.names = sorted(((str(g), g) for g in alphabet), key=lambda t: -len(t[0]))

    def error(self, msg):
        raise WordParseError(msg, self.i)

    def skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def parse(self):
        w = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return w

    def expr(self):
        out = Word()
        while self.peek() and self.peek() not in ",)]":
            out = out * self.factor()
        return out

    def factor(self):
        w = self.atom()
        if self.peek() == "^":
            self.i += 1
            self.skip()
            m = re.compile(r"-?\d+").match(self.s, self.i)
            if not m:
                self.error("expected integer exponent")
            self.i = m.end()
            w = w ** int(m.group())
        return w

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            w = self.expr()
            self.expect(")")
            return w
        if ch == "[":
            self.i += 1
            u = self.expr()
            self.expect(",")
            v = self.expr()
            self.expect("]")
            return comm(u, v)
        if ch == "1":
            self.i += 1
            return Word()
        if self.s.startswith("c(", self.i):
            self.i += 2
            h = self.expr()
            self.expect(",")
            z = self.expr()
            self.expect(")")
            return conj(h, z)
        for name, g in self.names:
            if self.s.startswith(name, self.i):
                nxt = self.s[self.i + len(name): self.i + len(name) + 1]
                if nxt.isdigit():
                    continue
                self.i += len(name)
                return Word.gen(g)
        if ch:
            self.error(f"unknown generator or symbol {ch!r}")
        self.error("unexpected end of input")


def parse_word(text, alphabet=ONE_RELATOR_ALPHABET):
    return _Parser(text, alphabet).parse()


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism out of a free group, given on generators."""

    images: dict = field(hash=False)

    def __call__(self, w):
        blocks = []
        for g, e in w.blocks:
            img = self.images.get(g, Word.gen(g))
            blocks.extend((img ** e).blocks)
        return Word(blocks)


def power_expansion(g, h, n, side="left"):
    """Conjugates of [g,h] whose product is [g^n,h] (left) or [g,h^n] (right)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = comm(g, h)
    if side == "left":
        return [conj(g ** j, base) for j in range(n - 1, -1, -1)]
    if side == "right":
        return [conj(h ** j, base) for j in range(n)]
    raise ValueError(f"unknown side {side!r}")


@dataclass
class WordFamily:
    ell: int
    g: list
    w: list
    y: Word
    z: Word
    u: Word
    relator: Word


def one_relator_words(ell, a=A, b=B):
    if ell < 2:
        raise ValueError("ell must be >= 2")
    a_, b_ = Word.gen(a), Word.gen(b)
    g = [b_ * a_ * b_.inverse()]
    w = [comm(b_, a_)]
    for i in range(2, ell):
        h = b_ * a_ ** (2 - i) * b_.inverse()
        g.append(conj(h, a_ ** (i - 1)))
        w.append(conj(h, comm(b_, a_.inverse())))
    y = conj(b_ * a_ ** 2, b_.inverse())
    z = conj(b_ * a_ ** 2, a_ ** (-ell))
    u = b_ * a_ ** 2 * b_.inverse() * a_ ** -2
    return WordFamily(ell, g, w, y, z, u, comm(a_, b_) ** ell)


def surface_x(ell, n):
    """x_n = prod_i [y_i^n, z_i] in the surface alphabet."""
    alph = surface_alphabet(ell)
    out = Word()
    for i in range(ell):
        pw = one_relator_words(ell, alph[2 * i], alph[2 * i + 1])
        out = out * comm(pw.y ** n, pw.z)
    return out


def surface_relator(ell):
    alph = surface_alphabet(ell)
    return product(comm(Word.gen(alph[2 * i]), Word.gen(alph[2 * i + 1])) for i in range(ell))


def quotient_hom(ell):
    """a_i -> a, b_i -> b"""
    return GroupHom({g: Word.gen(A if g.name == "a" else B) for g in surface_alphabet(ell)})


def relation_identity_rhs(ell):
    a_, b_ = Word.gen(A), Word.gen(B)
    return (b_ * a_ ** 2 * b_.inverse() * a_ ** -2 * comm(a_, b_) ** ell
            * a_ ** (2 - ell) * b_ * a_ ** (ell - 2) * b_.inverse())


def verify_relation_identity(ell):
    pw = one_relator_words(ell)
    lhs = product(comm(g, w) for g, w in zip(pw.g, pw.w))
    rhs = relation_identity_rhs(ell)
    # second form: c(u, [a,b]^ell) [y,z]
    rhs2 = conj(pw.u, pw.relator) * comm(pw.y, pw.z)
    witness = lhs * rhs.inverse()
    return witness.is_identity() and rhs == rhs2, witness


def verify_power_expansion(g, h, n, side="left"):
    lhs = comm(g ** n, h) if side == "left" else comm(g, h ** n)
    witness = lhs * product(power_expansion(g, h, n, side)).inverse()
    return witness.is_identity(), witness


def verify_free_identity(kind, **kw):
    """Returns (holds, witness) where witness is the reduced lhs * rhs^-1."""
    if kind == "lemma-relation":
        return verify_relation_identity(kw["ell"])
    if kind == "power-expansion":
        return verify_power_expansion(kw["g"], kw["h"], kw["n"], kw.get("side", "left"))
    raise ValueError(f"unknown identity {kind!r}")
