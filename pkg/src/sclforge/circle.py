"""Exact piecewise-linear lifts of circle homeomorphisms.

Maps are stored by their breakpoints over one period, x in [0, 1), and extended
by f(x + 1) = f(x) + 1. Coordinates are gmpy2 rationals (mpq), which compare
and hash like fractions.Fraction.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq, mpz

DEFAULT_BREAKPOINT_CAP = 100_000
_config = {"cap": DEFAULT_BREAKPOINT_CAP}


def set_breakpoint_cap(cap):
    """Process-wide cap used when no explicit cap is passed."""
    if cap < 2:
        raise ValueError("cap must be >= 2")
    _config["cap"] = int(cap)


def breakpoint_cap():
    return _config["cap"]


def Q(x):
    if isinstance(x, str):
        return mpq(Fraction(x))
    return mpq(x)


def floor(x):
    if isinstance(x, int):
        return x
    x = mpq(x)
    return int(x.numerator // x.denominator)


def qstr(x):
    """Lowest-terms p/q text (integers print without a denominator)."""
    x = mpq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class InvalidMap(ValueError):
    pass


class BreakpointBudgetExceeded(RuntimeError):
    def __init__(self, count, cap):
        super().__init__(f"composition needs {count} breakpoints, over the cap of {cap}")
        self.count = count
        self.cap = cap


class PLMap:
    """Lift of a PL circle homeomorphism, kept in a canonical reduced form."""

    __slots__ = ("xs", "ys", "slopes", "_hash")

    def __init__(self, points, _sorted=False):
        pts = []
        for x, y in points:
            x, y = Q(x), Q(y)
            if not _sorted:
                k = floor(x)
                x, y = x - k, y - k
            pts.append((x, y))
        if not pts:
            raise InvalidMap("a map needs at least one breakpoint")
        if not _sorted:
            pts.sort()
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        n = len(xs)
        for i in range(n - 1):
            if xs[i] == xs[i + 1]:
                raise InvalidMap(f"repeated breakpoint x={qstr(xs[i])}")
            if ys[i] >= ys[i + 1]:
                raise InvalidMap("map is not increasing")
        if ys[-1] >= ys[0] + 1:
            raise InvalidMap("map is not increasing across the wrap")
        slopes = [None] * n
        for i in range(n - 1):
            slopes[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        slopes[-1] = (ys[0] + 1 - ys[-1]) / (xs[0] + 1 - xs[-1])
        keep = [i for i in range(n) if slopes[i - 1] != slopes[i]]
        if not keep:
            c = ys[0] - xs[0]
            self.xs, self.ys, self.slopes = (mpq(0),), (c,), (mpq(1),)
        elif len(keep) == n:
            self.xs, self.ys, self.slopes = tuple(xs), tuple(ys), tuple(slopes)
        else:
            self.xs = tuple(xs[i] for i in keep)
            self.ys = tuple(ys[i] for i in keep)
            self.slopes = tuple(slopes[i] for i in keep)
        self._hash = None

    # constructors
    @classmethod
    def translation(cls, c):
        return cls([(0, Q(c))])

    @classmethod
    def identity(cls):
        return cls.translation(0)

    @classmethod
    def from_points(cls, points):
        return cls(points)

    # basic queries
    def __len__(self):
        return len(self.xs)

    @property
    def breakpoints(self):
        return list(zip(self.xs, self.ys))

    def is_translation(self):
        return len(self.xs) == 1 and self.slopes[0] == 1

    def translation_amount(self):
        return self.ys[0] - self.xs[0] if self.is_translation() else None

    def __call__(self, x):
        x = Q(x)
        k = floor(x)
        r = x - k
        i = bisect_right(self.xs, r) - 1
        if i < 0:
            return self.ys[0] + self.slopes[-1] * (r - self.xs[0]) + k
        return self.ys[i] + self.slopes[i] * (r - self.xs[i]) + k

    def inv(self, y):
        """Evaluate the inverse map at y."""
        y = Q(y)
        k = floor(y - self.ys[0])
        r = y - k
        i = bisect_right(self.ys, r) - 1
        return self.xs[i] + (r - self.ys[i]) / self.slopes[i] + k

    def slope_at(self, x, side=1):
        """Slope just right (side=1) or just left (side=-1) of x."""
        x = Q(x)
        r = x - floor(x)
        i = bisect_right(self.xs, r) - 1
        if side < 0 and i >= 0 and self.xs[i] == r:
            i -= 1
        return self.slopes[i]

    def breakpoints_in(self, lo, hi):
        """All lifted breakpoint x-coordinates in [lo, hi]."""
        out = []
        for k in range(floor(lo) - 1, floor(hi) + 1):
            for x in self.xs:
                if lo <= x + k <= hi:
                    out.append(x + k)
        return out

    # group operations
    def compose(self, other, cap=None):
        """self after other."""
        if cap is None:
            cap = _config["cap"]
        if other.is_translation():
            c = other.ys[0]
            cand = sorted({x - c - floor(x - c) for x in self.xs})
            pts = [(x, self(x + c)) for x in cand]
        elif self.is_translation():
            c = self.ys[0]
            pts = [(x, y + c) for x, y in zip(other.xs, other.ys)]
        else:
            cand = set(other.xs)
            for x in self.xs:
                t = other.inv(x)
                cand.add(t - floor(t))
            cand = sorted(cand)
            pts = [(x, self(y)) for x, y in zip(cand, map(other, cand))]
        if len(pts) > cap:
            out = PLMap(pts, _sorted=True)
            if len(out) > cap:
                raise BreakpointBudgetExceeded(len(out), cap)
            return out
        return PLMap(pts, _sorted=True)

    def __mul__(self, other):
        return self.compose(other)

    def inverse(self):
        return PLMap(list(zip(self.ys, self.xs)))

    def __pow__(self, k):
        return pl_power(self, k)

    def shifted(self, k):
        """T_k after self."""
        k = Q(k)
        return PLMap([(x, y + k) for x, y in zip(self.xs, self.ys)], _sorted=True)

    # displacement
    def displacement_extrema(self):
        d = [y - x for x, y in zip(self.xs, self.ys)]
        return min(d), max(d)

    # equality
    def _key(self):
        return (self.xs, self.ys)

    def __eq__(self, other):
        return isinstance(other, PLMap) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        if self.is_translation():
            return f"PLMap.translation({qstr(self.ys[0])})"
        inner = ", ".join(f"({qstr(x)}, {qstr(y)})" for x, y in zip(self.xs, self.ys))
        return f"PLMap([{inner}])"

    # persistence
    def to_dict(self):
        return {"breakpoints": [{"x": qstr(x), "y": qstr(y)} for x, y in zip(self.xs, self.ys)]}

    @classmethod
    def from_dict(cls, d):
        return cls([(Q(p["x"]), Q(p["y"])) for p in d["breakpoints"]])

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def translation(c):
    return PLMap.translation(c)


def pl_eval(f, x):
    return f(x)


def pl_compose(f, g, cap=None):
    return f.compose(g, cap)


def pl_invert(f):
    return f.inverse()


def pl_equal(f, g):
    return f == g


def circle_equal(f, g):
    k = f(0) - g(0)
    if k.denominator != 1:
        return False
    return f == g.shifted(k)


def displacement_extrema(f):
    return f.displacement_extrema()


@lru_cache(maxsize=4096)
def pl_power(f, k):
    if k == 0:
        return PLMap.identity()
    if k < 0:
        return pl_power(f.inverse(), -k)
    if k == 1:
        return f
    half = pl_power(f, k // 2)
    out = half.compose(half)
    return out.compose(f) if k % 2 else out


def commutator(f, g):
    return f * g * f.inverse() * g.inverse()


@dataclass(frozen=True)
class LiftedMapR:
    """Element (f, r) of the real central extension; (f, r) ~ (f T_1, r - 1)."""

    map: PLMap
    r: object = 0

    def __post_init__(self):
        k = floor(self.map(0))
        if k:
            object.__setattr__(self, "map", self.map.shifted(-k))
        object.__setattr__(self, "r", Q(self.r) + k)

    def __mul__(self, other):
        return LiftedMapR(self.map * other.map, self.r + other.r)

    def inverse(self):
        return LiftedMapR(self.map.inverse(), -self.r)

    def to_dict(self):
        d = self.map.to_dict()
        d["r"] = qstr(self.r)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(PLMap.from_dict(d), Q(d.get("r", "0")))


@dataclass(frozen=True)
class TauInterval:
    center: object
    radius: object

    def __post_init__(self):
        object.__setattr__(self, "center", Q(self.center))
        object.__setattr__(self, "radius", Q(self.radius))
        if self.radius < 0:
            raise ValueError("negative radius")

    @classmethod
    def from_bounds(cls, lo, hi):
        lo, hi = Q(lo), Q(hi)
        return cls((lo + hi) / 2, (hi - lo) / 2)

    @property
    def lo(self):
        return self.center - self.radius

    @property
    def hi(self):
        return self.center + self.radius

    def contains(self, x):
        return self.lo <= Q(x) <= self.hi

    def intersects(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def __add__(self, other):
        if isinstance(other, TauInterval):
            return TauInterval(self.center + other.center, self.radius + other.radius)
        return TauInterval(self.center + Q(other), self.radius)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TauInterval) else -Q(other))

    def __neg__(self):
        return TauInterval(-self.center, self.radius)

    def scale(self, k):
        k = Q(k)
        return TauInterval(self.center * k, self.radius * abs(k))

    def abs_lower(self):
        """Certified lower bound for the absolute value."""
        return max(abs(self.center) - self.radius, mpq(0))

    def exact(self):
        return self.radius == 0

    def __str__(self):
        return f"{float(self.center):.12g} +- {float(self.radius):.3g}"


# -- certified iteration ---------------------------------------------------


class _Scaled:
    """Outward-rounded evaluation of a PLMap on integers scaled by 2^P."""

    __slots__ = ("P", "one", "T", "A", "B", "D")

    def __init__(self, f, P):
        self.P = P
        self.one = mpz(1) << P
        starts, segs = [], []
        xs, ys, ss = f.xs, f.ys, f.slopes
        if xs[0] > 0:
            starts.append(mpq(0))
            segs.append((ss[-1], ys[0] - ss[-1] * xs[0]))
        for i in range(len(xs)):
            starts.append(xs[i])
            segs.append((ss[i], ys[i] - ss[i] * xs[i]))
        self.T = [-((-(s.numerator << P)) // s.denominator) for s in starts]
        self.A, self.B, self.D = [], [], []
        for s, t in segs:
            self.A.append(mpz(s.numerator * t.denominator))
            self.B.append(mpz(t.numerator * s.denominator) << P)
            self.D.append(mpz(s.denominator * t.denominator))


def _iterate(chunks, N, P):
    """Lower and upper scaled bounds for W^N(0), W = chunks[-1] o ... o chunks[0]."""
    sc = [_Scaled(c, P) for c in chunks]
    table = [(s.T, s.A, s.B, s.D) for s in sc]
    one = mpz(1) << P
    lo = mpz(0)
    hi = mpz(0)
    for _ in range(N):
        for T, A, B, D in table:
            q, r = divmod(lo, one)
            i = bisect_right(T, r) - 1
            lo = (A[i] * r + B[i]) // D[i] + q * one
            q, r = divmod(hi, one)
            i = bisect_right(T, r) - 1
            hi = -((-(A[i] * r + B[i])) // D[i]) + q * one
    return lo, hi


def certified_tau(chunks, N, P=256, max_P=1 << 14):
    """Translation number of the composed chunk program with a certified radius.

    If W^N(0) lies in [k, k+1) then N*tau(W) lies in [k, k+1], by monotonicity
    and commutation with integer translations. Rounding is outward, so the
    floors of the bounds bracket k.
    """
    while True:
        lo, hi = _iterate(chunks, N, P)
        klo = lo >> P
        khi = hi >> P
        if khi - klo <= 1 or P >= max_P:
            break
        P *= 2
    if lo == hi and (lo & ((mpz(1) << P) - 1)) == 0:
        return TauInterval(mpq(int(klo), N), 0)
    return TauInterval.from_bounds(mpq(int(klo), N), mpq(int(khi) + 1, N))


def tau_shortcut(f):
    """Exact translation number when it can be read off, else None."""
    if f.is_translation():
        return TauInterval(f.ys[0] - f.xs[0], 0)
    m_lo, m_hi = f.displacement_extrema()
    k = -floor(-m_lo)
    if k <= m_hi:
        return TauInterval(k, 0)
    return None


def tau_estimate(f, N=1024):
    hit = tau_shortcut(f)
    if hit is not None:
        return hit
    m_lo, m_hi = f.displacement_extrema()
    iv = certified_tau([f], N)
    # tau also lies between the displacement extrema
    lo, hi = max(iv.lo, m_lo), min(iv.hi, m_hi)
    return TauInterval.from_bounds(lo, hi)


def tau_real(e, N=1024):
    return tau_estimate(e.map, N) + e.r


# -- words acting through a representation ---------------------------------


def _split(maps):
    """Generator -> (PLMap, r) from a mapping of PLMap / LiftedMapR values."""
    out = {}
    for g, m in maps.items():
        if isinstance(m, LiftedMapR):
            out[g] = (m.map, m.r)
        else:
            out[g] = (m, mpq(0))
    return out


def _lookup(table, g):
    try:
        return table[g]
    except KeyError:
        raise KeyError(f"generator {g} is not bound") from None


def word_eval(maps, w, x):
    """Image of x under the word, letter by letter (rightmost letter first).

    For LiftedMapR bindings this is the value of the H~ part; the central part
    is word_central_shift.
    """
    table = _split(maps)
    x = Q(x)
    for g, s in reversed(list(w.letters())):
        f, _ = _lookup(table, g)
        x = f(x) if s > 0 else f.inv(x)
    return x


def word_central_shift(maps, w):
    table = _split(maps)
    return sum((_lookup(table, g)[1] * e for g, e in w.blocks), mpq(0))


def word_map(maps, w, cap=None):
    """Symbolic composition of the word image."""
    table = _split(maps)
    out = PLMap.identity()
    for g, e in w.blocks:
        out = out.compose(pl_power(_lookup(table, g)[0], e), cap)
    return out


def _tandem(seq, min_gain=4):
    """Best (start, period, repeats) tandem repeat in seq, or None."""
    import numpy as np

    L = len(seq)
    if L < 4:
        return None
    ids = {}
    arr = np.array([ids.setdefault(s, len(ids)) for s in seq])
    best = None
    for p in range(1, L // 2 + 1):
        eq = arr[:-p] == arr[p:]
        if not eq.any():
            continue
        # runs of equal positions of length >= p
        padded = np.concatenate(([False], eq, [False]))
        d = np.diff(padded.astype(np.int8))
        starts = np.flatnonzero(d == 1)
        ends = np.flatnonzero(d == -1)
        runs = ends - starts
        ok = runs >= p
        for st, rl in zip(starts[ok], runs[ok]):
            k = 1 + rl // p
            gain = p * (k - 1)
            if gain >= min_gain and (best is None or gain > best[3]):
                best = (int(st), p, int(k), gain)
    return best[:3] if best else None


class WordProgram:
    """A word compiled into a short list of exact chunk maps.

    Repeated factors are composed once and raised to powers symbolically, and
    neighbouring pieces are merged while the breakpoint count stays below
    chunk_cap. The program is exact; only tau iteration rounds (outward).
    """

    def __init__(self, maps, w, chunk_cap=192, power_cap=4096):
        self.table = _split(maps)
        self.word = w
        self.chunk_cap = chunk_cap
        self.power_cap = power_cap
        self.shift = word_central_shift(maps, w)
        seq = []
        for g, e in w.blocks:
            _lookup(self.table, g)
            seq.append((g, e))
        self.chunks = self._merge(self._compile(seq))  # application order

    def _block_map(self, blk):
        g, e = blk
        return pl_power(self.table[g][0], e)

    def _compile(self, seq):
        """Pieces of seq as maps in application order (rightmost block first)."""
        if not seq:
            return []
        t = _tandem(seq) if len(seq) >= 4 else None
        if t is None:
            return [self._block_map(b) for b in reversed(seq)]
        st, p, k = t
        left, unit, right = seq[:st], seq[st:st + p], seq[st + p * k:]
        return self._compile(right) + self._power_pieces(self._compile(unit), k) + self._compile(left)

    def _power_pieces(self, pieces, k):
        u = _collapse(pieces, self.power_cap)
        if u is None:
            return pieces * k
        out = []
        base = u
        while k:
            if k & 1:
                out.append(base)
            k >>= 1
            if k:
                try:
                    base = base.compose(base, self.power_cap)
                except BreakpointBudgetExceeded:
                    out.extend([base] * (2 * k))
                    break
        return out

    def _merge(self, pieces):
        out = []
        for f in pieces:
            if out and len(out[-1]) + len(f) <= self.chunk_cap:
                # f is applied after out[-1]
                out[-1] = f.compose(out[-1])
            else:
                out.append(f)
        return out or [PLMap.identity()]

    def __call__(self, x):
        x = Q(x)
        for f in self.chunks:
            x = f(x)
        return x

    def as_map(self):
        return _collapse(self.chunks, _config["cap"])

    def tau(self, N=1024):
        """Certified interval for tau_R of the word image (central part included)."""
        if len(self.chunks) == 1:
            f = self.chunks[0]
            iv = tau_estimate(f, N)
        else:
            iv = certified_tau(self.chunks, N)
        return iv + self.shift


def _collapse(pieces, cap):
    out = PLMap.identity()
    try:
        for f in pieces:
            out = f.compose(out, cap)
    except BreakpointBudgetExceeded:
        return None
    return out


def tau_word(maps, w, N=1024, **kw):
    return WordProgram(maps, w, **kw).tau(N)
