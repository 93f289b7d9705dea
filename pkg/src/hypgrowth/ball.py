"""Breadth-first enumeration of word-metric spheres with exact dedup.

Elements are tracked by their realization (reduced tree word, normalized
matrix, residue), which is a canonical key.  Each element keeps the
shortlex-first word reaching it: frontiers are processed in shortlex order
and letters in a fixed order, so the first word found is the smallest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import CapExceeded
from .presets import Group
from .words import Word, concat, inverse


@dataclass(frozen=True)
class Letter:
    name: str
    word: Word  # word in the group's own generators
    value: object  # realization


def letters_for(group: Group, gens: Sequence[Word] | None = None, names: Sequence[str] | None = None):
    """Letters of S together with inverses; an inverse equal to a letter already present is dropped."""
    if gens is None:
        gens = [((i, 1),) for i in range(len(group.gens))]
    if names is None:
        names = [group.names[i] if len(group.gens) == len(gens) else f"s{i}" for i in range(len(gens))]
    out, seen = [], set()
    for w, nm in zip(gens, names):
        for word, label in ((w, nm), (inverse(w), _inverse_name(nm))):
            val = group.realize(word)
            if val in seen or group.is_identity(val):
                continue
            seen.add(val)
            out.append(Letter(label, word, val))
    return out


def _inverse_name(nm: str) -> str:
    return nm.swapcase() if len(nm) == 1 else f"({nm})^-1"


def spheres(group: Group, letters: Sequence[Letter], max_len: int, cap: int | None = None,
            paths: bool = True) -> Iterator[list[tuple[object, tuple[int, ...]]]]:
    """Yield spheres S(0), S(1), ... as lists of (realization, letter-index path).

    Only the two most recent spheres are kept for dedup: a neighbour of the
    sphere of radius n lies at radius n-1, n or n+1.  With ``paths=False``
    the paths are left empty, which is faster for pure counting.
    """
    one = group.identity
    prev: dict = {}
    cur = {one: ()}
    total = 1
    yield [(one, ())]
    for _ in range(max_len):
        nxt: dict = {}
        for val, path in cur.items():
            for j, let in enumerate(letters):
                x = group.mul(val, let.value)
                if x in cur or x in prev or x in nxt:
                    continue
                nxt[x] = path + (j,) if paths else ()
        total += len(nxt)
        if cap is not None and total > cap:
            raise CapExceeded(f"ball enumeration passed the cap of {cap} elements", partial=total - len(nxt))
        if not nxt:
            return
        yield list(nxt.items())
        prev, cur = cur, nxt


def path_word(letters: Sequence[Letter], path: Sequence[int]) -> Word:
    return concat(*[letters[j].word for j in path])


def path_name(letters: Sequence[Letter], path: Sequence[int]) -> str:
    return "".join(letters[j].name for j in path) or "1"
