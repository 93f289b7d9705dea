"""Exact 2x2 matrices of determinant 1, taken up to sign.

Matrices are 4-tuples ``(a, b, c, d)`` of ints or Fractions.  The sign is
normalized so the first nonzero entry of the top row is positive, which
makes the tuple a canonical key for an element of PSL(2).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import PresetError

ID = (1, 0, 0, 1)


def normalize(m):
    a, b, c, d = m
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b, -c, -d)
    return m


def mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return normalize((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))


def inv(m):
    a, b, c, d = m
    return normalize((d, -b, -c, a))


def mpow(m, k: int):
    if k < 0:
        m, k = inv(m), -k
    result, base = ID, m
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def det(m):
    a, b, c, d = m
    return a * d - b * c


def trace(m):
    return m[0] + m[3]


def is_identity(m) -> bool:
    return normalize(m) == ID


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def parse_matrices(text: str):
    """Parse ``"1,2,0,1;1,0,2,1"`` (rows a,b,c,d per matrix, ``;`` between matrices)."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 4:
            raise PresetError(f"matrix {chunk!r} needs four entries")
        try:
            entries = tuple(_tidy(Fraction(p)) for p in parts)
        except (ValueError, ZeroDivisionError) as exc:
            raise PresetError(f"bad matrix entry in {chunk!r}") from exc
        if det(entries) != 1:
            raise PresetError(f"matrix {chunk!r} is not unimodular (det = {det(entries)})")
        out.append(normalize(entries))
    if not out:
        raise PresetError("no matrices given")
    return out


def float_entries(m):
    """Float approximations scaled to avoid overflow; the Möbius map is unchanged."""
    vals = [Fraction(x) for x in m]
    big = max(abs(v) for v in vals)
    if big == 0:
        raise ValueError("zero matrix")
    shift = 0
    if big > 2**900:
        shift = int(math.floor(math.log2(big))) - 900
    elif big < 2**-900:
        shift = int(math.floor(math.log2(big))) + 900
    scale = Fraction(2) ** (-shift)
    return tuple(float(v * scale) for v in vals)


def mod_p(m, p: int):
    """Reduce an integer matrix modulo p (not sign-normalized)."""
    return tuple(int(x) % p for x in m)


def mul_mod(m, n, p: int):
    a, b, c, d = m
    e, f, g, h = n
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def pow_mod(m, k: int, p: int):
    if k < 0:
        a, b, c, d = m
        m, k = ((d) % p, (-b) % p, (-c) % p, (a) % p), -k
    result, base = (1, 0, 0, 1), m
    while k:
        if k & 1:
            result = mul_mod(result, base, p)
        base = mul_mod(base, base, p)
        k >>= 1
    return result


def is_pm_identity_mod(m, p: int) -> bool:
    a, b, c, d = m
    return b % p == 0 and c % p == 0 and (a - d) % p == 0 and (a * a - 1) % p == 0
