"""Group presets: generators, their realizations and the space they act on.

Three kinds of realization are supported:

* ``tree``: elements are reduced words of a free group acting on its Cayley
  tree by left multiplication;
* ``matrix``: elements of PSL(2, Q) acting on the upper half-plane;
* ``rotation``: residues mod n acting as rotations about ``i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import matrices as mx
from .boundary import invert_word, reduce_word
from .errors import PresetError
from .geometry import SpaceModel
from .words import Word, evaluate, parse


@dataclass(frozen=True, eq=False)
class Group:
    id: str
    kind: str  # "tree" | "matrix" | "rotation"
    names: str
    gens: tuple
    model: SpaceModel
    order: int | None = None
    free_basis: bool = False
    relations: tuple = ()
    cusped: bool = False
    description: str = ""
    _extra: dict = field(default_factory=dict, compare=False)

    # -- realization arithmetic
    @property
    def identity(self):
        return {"tree": "", "matrix": mx.ID, "rotation": 0}[self.kind]

    def mul(self, x, y):
        if self.kind == "tree":
            if len(y) == 1:
                return x[:-1] if x and x[-1] == y.swapcase() else x + y
            return reduce_word(x + y)
        if self.kind == "matrix":
            return mx.mul(x, y)
        return (x + y) % self.order

    def inv(self, x):
        if self.kind == "tree":
            return invert_word(x)
        if self.kind == "matrix":
            return mx.inv(x)
        return (-x) % self.order

    def pow(self, x, k: int):
        if self.kind == "matrix":
            return mx.mpow(x, k)
        if self.kind == "rotation":
            return (x * k) % self.order
        if k < 0:
            x, k = invert_word(x), -k
        return _tree_pow(x, k)

    def realize(self, w: Word):
        return evaluate(w, self.gens, self.mul, self.inv, self.identity, self.pow)

    def is_identity(self, x) -> bool:
        return x == self.identity

    def parse(self, text: str) -> Word:
        return parse(text, self.names)

    def letters(self):
        """Generator letters (index, sign) with inverses, duplicates of involutions dropped."""
        out, seen = [], set()
        for i in range(len(self.gens)):
            for e in (1, -1):
                x = self.gens[i] if e == 1 else self.inv(self.gens[i])
                if x in seen:
                    continue
                seen.add(x)
                out.append((i, e))
        return out

    def letter_name(self, i: int, e: int) -> str:
        return self.names[i] if e > 0 else self.names[i].swapcase()

    def to_json(self):
        out = {"id": self.id, "kind": self.kind, "generators": list(self.names),
               "model": self.model.to_json()}
        if self.kind == "matrix":
            out["matrices"] = [[str(v) for v in m] for m in self.gens]
        elif self.kind == "tree":
            out["tree_words"] = list(self.gens)
        else:
            out["order"] = self.order
        return out


def _tree_pow(x: str, k: int) -> str:
    # conjugate-reduce so the power is a plain repetition
    if not x or k == 0:
        return ""
    i = 0
    while i < len(x) // 2 and x[i] == x[-1 - i].swapcase():
        i += 1
    u, v = x[:i], x[i:len(x) - i]
    return u + v * k + invert_word(u)


def _selfcheck(group: Group) -> Group:
    for rel in group.relations:
        if not group.is_identity(group.realize(group.parse(rel))):
            raise PresetError(f"preset {group.id}: relation {rel} fails")
    if group.kind == "matrix":
        for m in group.gens:
            if mx.det(m) != 1:
                raise PresetError(f"preset {group.id}: generator is not unimodular")
    return group


def free_group(rank: int) -> Group:
    if rank < 2:
        raise PresetError("free presets need rank >= 2; use 'cyclic' for Z")
    if rank > 26:
        raise PresetError("rank too large")
    names = "abcdefghijklmnopqrstuvwxyz"[:rank]
    return _selfcheck(Group(f"free({rank})" if rank != 2 else "free2", "tree", names,
                            tuple(names), SpaceModel.tree(2 * rank), free_basis=True,
                            description=f"free group of rank {rank} on its Cayley tree"))


def modular(delta: float = 1.0) -> Group:
    s = (0, 1, -1, 0)  # normalized form of [[0,-1],[1,0]]
    t = (1, 1, 0, 1)
    return _selfcheck(Group("modular", "matrix", "ST", (s, t), SpaceModel.h2(delta),
                            relations=("SS", "STSTST"), cusped=True,
                            description="PSL(2,Z) generated by S = [[0,-1],[1,0]], T = [[1,1],[0,1]]"))


def sanov(delta: float = 1.0) -> Group:
    return _selfcheck(Group("sanov", "matrix", "ab", ((1, 2, 0, 1), (1, 0, 2, 1)),
                            SpaceModel.h2(delta), cusped=True,
                            description="Sanov subgroup generated by [[1,2],[0,1]] and [[1,0],[2,1]]"))


def cyclic() -> Group:
    return _selfcheck(Group("cyclic", "tree", "t", ("a",), SpaceModel.tree(4),
                            description="infinite cyclic group, t acting as a on the tree of F2"))


def finite_cyclic(n: int, delta: float = 1.0) -> Group:
    if n < 1:
        raise PresetError("finite-cyclic needs n >= 1")
    return _selfcheck(Group(f"finite-cyclic({n})", "rotation", "r", (1 % n,), SpaceModel.h2(delta),
                            order=n, relations=(f"r^{n}",),
                            description=f"Z/{n} acting by rotations about i"))


def custom(matrices_text: str, delta: float = 1.0) -> Group:
    mats = tuple(mx.parse_matrices(matrices_text))
    if len(mats) > 26:
        raise PresetError("too many generators")
    names = "abcdefghijklmnopqrstuvwxyz"[: len(mats)]
    cusped = all(isinstance(v, int) for m in mats for v in m)
    return _selfcheck(Group("custom", "matrix", names, mats, SpaceModel.h2(delta), cusped=cusped,
                            description="user-supplied matrices"))


def get_preset(spec: str, delta: float | None = None, matrices: str | None = None) -> Group:
    """Look up a preset by id: free2, free(r), modular, sanov, cyclic, finite-cyclic(n), custom."""
    spec = spec.strip()
    kw = {} if delta is None else {"delta": delta}
    if spec == "free2":
        return free_group(2)
    m = re.fullmatch(r"free\((\d+)\)|free(\d+)", spec)
    if m:
        return free_group(int(m.group(1) or m.group(2)))
    if spec == "modular":
        return modular(**kw)
    if spec == "sanov":
        return sanov(**kw)
    if spec == "cyclic":
        return cyclic()
    m = re.fullmatch(r"finite-cyclic\((\d+)\)|finite-cyclic(\d+)|Z/(\d+)", spec)
    if m:
        return finite_cyclic(int(next(g for g in m.groups() if g)), **kw)
    if spec == "custom":
        if not matrices:
            raise PresetError("custom preset needs --matrices")
        return custom(matrices, **kw)
    raise PresetError(f"unknown preset {spec!r}")


def parse_gens(group: Group, text: str | None) -> list[Word]:
    """Parse a comma-separated generating set; defaults to the preset generators."""
    if not text:
        return [((i, 1),) for i in range(len(group.gens))]
    out = [group.parse(part) for part in text.split(",") if part.strip()]
    if not out:
        raise PresetError("empty generating set")
    return out
