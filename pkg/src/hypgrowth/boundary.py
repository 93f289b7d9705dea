"""Exact ideal points.

Upper half-plane boundary points are kept as elements of a real
quadratic field (``QuadIrrational``) or as ``INFINITY``; fixed points of
integer and rational matrices always land there, so equality of ideal
points is decided exactly.  Tree ends are eventually periodic reduced
sequences (``TreeEnd``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __float__(self):
        return math.inf

    def __hash__(self):
        return hash("hypgrowth-infinity")

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _strip_squares(n: int) -> tuple[int, int]:
    """Return (k, m) with n = k**2 * m, removing small square factors only."""
    k = 1
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        pp = p * p
        while n % pp == 0:
            n //= pp
            k *= p
    return k, n


class QuadIrrational:
    """The real number ``p + q*sqrt(d)`` with rational p, q and integer d > 0.

    ``d`` is not required to be squarefree; equality is decided by
    checking whether the two radicals are commensurable.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q=0, d=1):
        p, q = Fraction(p), Fraction(q)
        d = int(d)
        if d < 0:
            raise ValueError("negative radicand")
        if q == 0 or d == 0:
            q, d = Fraction(0), 1
        elif _is_square(d):
            p, q, d = p + q * isqrt(d), Fraction(0), 1
        else:
            k, d = _strip_squares(d)
            q *= k
        self.p, self.q, self.d = p, q, d

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def __float__(self):
        if self.q == 0:
            return float(self.p)
        try:
            root = math.sqrt(self.d)
        except OverflowError:
            root = math.exp(0.5 * math.log(self.d))
        return float(self.p) + float(self.q) * root

    def conjugate(self) -> "QuadIrrational":
        return QuadIrrational(self.p, -self.q, self.d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadIrrational(other)
        if not isinstance(other, QuadIrrational):
            return NotImplemented
        if self.p != other.p:
            return False
        if self.q == 0 or other.q == 0:
            return self.q == other.q
        prod = self.d * other.d
        if not _is_square(prod):
            return False
        # sqrt(d2) = (m / d1) * sqrt(d1)
        m = isqrt(prod)
        return self.q == other.q * Fraction(m, self.d)

    def __hash__(self):
        # Equal values share their rational part; the radical may be written differently.
        return hash(("quad", self.p, self.q == 0))

    def __repr__(self):
        if self.q == 0:
            return f"QuadIrrational({self.p})"
        return f"QuadIrrational({self.p}, {self.q}, {self.d})"

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        sign = "+" if self.q > 0 else "-"
        return f"{self.p} {sign} {abs(self.q)}*sqrt({self.d})"

    def to_json(self):
        return {"p": str(self.p), "q": str(self.q), "d": self.d, "approx": float(self)}


def mobius_exact(m, z):
    """Apply the matrix ``m = (a, b, c, d)`` to an exact boundary point."""
    a, b, c, d = m
    if z is INFINITY:
        return INFINITY if c == 0 else QuadIrrational(Fraction(a) / Fraction(c))
    if isinstance(z, (int, Fraction)):
        z = QuadIrrational(z)
    p, q, D = z.p, z.q, z.d
    den_r = c * p + d
    den_i = c * q
    if den_r == 0 and den_i == 0:
        return INFINITY
    num_r = a * p + b
    num_i = a * q
    norm = den_r * den_r - den_i * den_i * D
    re = (num_r * den_r - num_i * den_i * D) / norm
    im = (num_i * den_r - num_r * den_i) / norm
    return QuadIrrational(re, im, D)


def ideal_float(z) -> float:
    if z is INFINITY:
        return math.inf
    return float(z)


def ideal_to_json(z):
    if z is INFINITY:
        return "inf"
    if isinstance(z, (QuadIrrational, TreeEnd)):
        return z.to_json()
    return float(z)


# --------------------------------------------------------------------- trees


def invert_letter(ch: str) -> str:
    return ch.swapcase()


def invert_word(w: str) -> str:
    return w[::-1].swapcase()


def reduce_word(w: str) -> str:
    out: list[str] = []
    for ch in w:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def is_reduced(w: str) -> bool:
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def _primitive_root(w: str) -> str:
    n = len(w)
    for k in range(1, n + 1):
        if n % k == 0 and w[:k] * (n // k) == w:
            return w[:k]
    return w


@dataclass(frozen=True)
class TreeEnd:
    """The infinite reduced word ``prefix + period + period + ...``.

    Instances are normalized (primitive period, shortest prefix) so that
    dataclass equality is equality of ends.
    """

    prefix: str
    period: str

    def __post_init__(self):
        prefix, period = self.prefix, self.period
        if not period:
            raise ValueError("tree end needs a nonempty period")
        if not is_reduced(period + period) or not is_reduced(prefix + period):
            raise ValueError(f"({prefix!r}, {period!r}) does not describe a reduced sequence")
        period = _primitive_root(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def letter(self, k: int) -> str:
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> str:
        if n <= len(self.prefix):
            return self.prefix[:n]
        extra = n - len(self.prefix)
        reps = extra // len(self.period) + 1
        return (self.prefix + self.period * reps)[:n]

    def translate(self, g: str) -> "TreeEnd":
        """Image under left multiplication by the reduced word ``g``."""
        reps = len(g) // len(self.period) + 2
        head = reduce_word(g + self.prefix + self.period * reps)
        return TreeEnd(head, self.period)

    def __str__(self):
        return f"{self.prefix}({self.period})^inf"

    def to_json(self):
        return {"prefix": self.prefix, "period": self.period}


def meet_length(u, v) -> int:
    """Length of the common prefix of two words or ends."""
    if isinstance(u, str) and isinstance(v, str):
        n = min(len(u), len(v))
        k = 0
        while k < n and u[k] == v[k]:
            k += 1
        return k
    if isinstance(u, str):
        u, v = v, u
    if isinstance(v, str):
        k = 0
        while k < len(v) and v[k] == u.letter(k):
            k += 1
        return k
    if u == v:
        raise ValueError("equal ends have no finite meet")
    bound = len(u.prefix) + len(v.prefix) + len(u.period) * len(v.period) + 1
    k = 0
    while k <= bound and u.letter(k) == v.letter(k):
        k += 1
    return k


def take(e, n: int) -> str:
    return e[:n] if isinstance(e, str) else e.take(n)
