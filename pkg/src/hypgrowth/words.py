"""Words in a generating set, with compressed powers.

A word is a tuple of syllables ``(atom, exponent)``.  An atom is either a
generator index or another word, so ``((STTT)^104)^19690`` costs three
syllables no matter how long it is when spelled out.  Generators are named
by single characters; the inverse of a generator is written with the
opposite case (``a``/``A``, ``T``/``t``).
"""

from __future__ import annotations

import re
from typing import Callable, Sequence

from .errors import WordParseError

Word = tuple  # tuple[tuple[int | Word, int], ...]

IDENTITY: Word = ()


def gen(i: int, e: int = 1) -> Word:
    return ((i, e),) if e else ()


def length(w: Word) -> int:
    total = 0
    for atom, e in w:
        total += abs(e) * (1 if isinstance(atom, int) else length(atom))
    return total


def inverse(w: Word) -> Word:
    return tuple((atom, -e) for atom, e in reversed(w))


def power(w: Word, k: int) -> Word:
    if k == 0 or not w:
        return ()
    if k == 1:
        return w
    if len(w) == 1:
        atom, e = w[0]
        return ((atom, e * k),)
    return ((w, k),)


def concat(*words: Word) -> Word:
    out: list = []
    for w in words:
        for atom, e in w:
            if out and out[-1][0] == atom:
                e2 = out[-1][1] + e
                out.pop()
                if e2:
                    out.append((atom, e2))
            else:
                out.append((atom, e))
    return tuple(out)


def letters(w: Word) -> list[tuple[int, int]]:
    """Spell the word out as (generator, +-1) letters.  Only for short words."""
    out: list[tuple[int, int]] = []
    for atom, e in w:
        if isinstance(atom, int):
            out.extend([(atom, 1 if e > 0 else -1)] * abs(e))
        else:
            inner = letters(atom) if e > 0 else letters(inverse(atom))
            out.extend(inner * abs(e))
    return out


def from_letters(seq: Sequence[tuple[int, int]]) -> Word:
    return concat(*[gen(i, e) for i, e in seq])


def evaluate(w: Word, values: Sequence, mul: Callable, inv: Callable, one, pw: Callable | None = None):
    """Evaluate a word in any group given generator values.

    ``pw(x, k)`` computes nonnegative powers; it defaults to square-and-multiply.
    """

    def _pow(x, k):
        if pw is not None:
            return pw(x, k)
        result, base = one, x
        while k:
            if k & 1:
                result = mul(result, base)
            base = mul(base, base)
            k >>= 1
        return result

    acc = one
    for atom, e in w:
        x = values[atom] if isinstance(atom, int) else evaluate(atom, values, mul, inv, one, pw)
        if e < 0:
            x = inv(x)
        acc = mul(acc, x if abs(e) == 1 else _pow(x, abs(e)))
    return acc


_TOKEN = re.compile(r"\s*(?:(\()|(\))|\^\s*(-?\d+)|([A-Za-z])|(1))")


def parse(text: str, names: str) -> Word:
    """Parse ``text`` over generator names such as ``"ST"`` or ``"ab"``.

    Accepts letters (opposite case for inverses), ``^n`` and ``^-n`` after a
    letter or a parenthesized group, and ``1`` or the empty string for the
    identity.
    """
    pos = 0
    text = text.strip()
    # each level holds (is_group, word) items so exponents know what they bind to
    stack: list[list[tuple[bool, Word]]] = [[]]
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordParseError(f"cannot parse {text!r} at position {pos}")
        pos = m.end()
        lpar, rpar, exp, letter, one = m.groups()
        if lpar:
            stack.append([])
        elif rpar:
            if len(stack) == 1:
                raise WordParseError(f"unbalanced ')' in {text!r}")
            inner = concat(*[w for _, w in stack.pop()])
            stack[-1].append((True, inner))
        elif exp is not None:
            cur = stack[-1]
            if not cur:
                raise WordParseError(f"exponent without a base in {text!r}")
            is_group, w = cur.pop()
            k = int(exp)
            if is_group or len(w) != 1:
                cur.append((True, power(w, k)))
            else:
                atom, e = w[0]
                cur.append((False, gen(atom, e * k)))
        elif letter:
            if letter in names:
                stack[-1].append((False, gen(names.index(letter), 1)))
            elif letter.swapcase() in names:
                stack[-1].append((False, gen(names.index(letter.swapcase()), -1)))
            else:
                raise WordParseError(f"unknown generator {letter!r}; alphabet is {names!r}")
        elif one:
            stack[-1].append((True, ()))
    if len(stack) != 1:
        raise WordParseError(f"unbalanced '(' in {text!r}")
    return concat(*[w for _, w in stack[0]])


def format_word(w: Word, names: str) -> str:
    if not w:
        return "1"
    out = []
    for atom, e in w:
        if isinstance(atom, int):
            ch = names[atom] if e > 0 else names[atom].swapcase()
            out.append(ch * abs(e) if abs(e) <= 3 else f"{names[atom]}^{e}")
        else:
            inner = format_word(atom, names)
            out.append(f"({inner})^{e}" if e != 1 else f"({inner})")
    return "".join(out)


def free_reduce(seq: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for i, e in seq:
        if out and out[-1] == (i, -e):
            out.pop()
        else:
            out.append((i, e))
    return out
