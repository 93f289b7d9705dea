"""Group elements acting as isometries: action, classification, axes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import matrices as mx
from .boundary import INFINITY, QuadIrrational, TreeEnd, invert_word, reduce_word
from .errors import ClassificationError, HypothesisNotSatisfied, ModelMismatchError
from .geometry import (
    H2Point,
    TreePoint,
    distance,
    fermi_distance,
    from_fermi,
    line,
    uhp_distance,
)
from .presets import Group
from .words import Word, concat, format_word, inverse, length, power


@dataclass(frozen=True, eq=False)
class GroupElement:
    group: Group
    word: Word

    @cached_property
    def realization(self):
        return self.group.realize(self.word)

    @property
    def name(self) -> str:
        return format_word(self.word, self.group.names)

    @property
    def word_length(self) -> int:
        return length(self.word)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, concat(self.word, other.word))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, inverse(self.word))

    def power(self, k: int) -> "GroupElement":
        return GroupElement(self.group, power(self.word, k))

    def conjugate_by(self, h: "GroupElement") -> "GroupElement":
        """h * self * h^-1"""
        return GroupElement(self.group, concat(h.word, self.word, inverse(h.word)))

    def realize_mod(self, p: int):
        """Matrix realization reduced mod p, computed without the exact entries."""
        if self.group.kind != "matrix":
            raise ModelMismatchError("modular reduction needs a matrix group")
        gens = [mx.mod_p(m, p) for m in self.group.gens]
        from .words import evaluate

        return evaluate(self.word, gens, lambda x, y: mx.mul_mod(x, y, p),
                        lambda x: mx.pow_mod(x, -1, p), (1, 0, 0, 1),
                        lambda x, k: mx.pow_mod(x, k, p))

    def __repr__(self):
        return f"GroupElement({self.group.id}, {self.name})"

    def to_json(self):
        out = {"word": self.name, "word_length": self.word_length}
        if self.group.kind == "matrix" and _cheap(self):
            out["matrix"] = [str(v) for v in self.realization]
        elif self.group.kind == "tree" and self.word_length <= 10_000:
            out["tree_word"] = self.realization
        elif self.group.kind == "rotation":
            out["residue"] = self.realization
        return out


def _cheap(g: GroupElement) -> bool:
    return "realization" in g.__dict__ or g.word_length <= 4096


def element(group: Group, text: str) -> GroupElement:
    return GroupElement(group, group.parse(text))


def identity(group: Group) -> GroupElement:
    return GroupElement(group, ())


@dataclass(frozen=True)
class Classification:
    kind: str  # "identity" | "elliptic" | "parabolic" | "hyperbolic"
    fixed_points: tuple = ()
    translation_length: float = 0.0
    trace: object = None
    plus: object = None  # attracting end
    minus: object = None  # repelling end

    def to_json(self):
        from .boundary import ideal_to_json

        out = {"kind": self.kind, "translation_length": self.translation_length,
               "fixed_points": [ideal_to_json(z) for z in self.fixed_points]}
        if self.trace is not None:
            out["trace"] = str(self.trace)
            out["abs_trace"] = str(abs(self.trace))
        if self.kind == "hyperbolic":
            out["attracting"] = ideal_to_json(self.plus)
            out["repelling"] = ideal_to_json(self.minus)
        return out


def _model_of(g: GroupElement):
    return g.group.model


def mobius_float(fe, x, y):
    a, b, c, d = fe
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    den = c * z + d
    w = (a * z + b) / den
    im = (a * d - b * c) * np.asarray(y, dtype=float) / np.abs(den) ** 2
    return w.real, im


def _rotation_entries(k: int, n: int):
    th = 2.0 * math.pi * k / n
    c, s = math.cos(th / 2.0), math.sin(th / 2.0)
    return (c, s, -s, c)


def float_matrix(g: GroupElement):
    if g.group.kind == "matrix":
        return mx.float_entries(g.realization)
    if g.group.kind == "rotation":
        return _rotation_entries(g.realization, g.group.order)
    raise ModelMismatchError("tree elements have no matrix")


def apply(g: GroupElement, x):
    kind = g.group.kind
    if kind == "tree":
        if not isinstance(x, TreePoint):
            raise ModelMismatchError("tree element applied to a half-plane point")
        return TreePoint(reduce_word(g.realization + x.word))
    if not isinstance(x, H2Point):
        raise ModelMismatchError("matrix element applied to a tree vertex")
    u, v = mobius_float(float_matrix(g), x.x, x.y)
    return H2Point(float(u), float(v))


def displacement(g: GroupElement, x) -> float:
    return distance(x, apply(g, x))


def _split_conjugate(w: str) -> tuple[str, str]:
    i = 0
    while i < len(w) // 2 and w[i] == w[-1 - i].swapcase():
        i += 1
    return w[:i], w[i:len(w) - i]


def _sqrt_parts(disc: Fraction) -> tuple[Fraction, int]:
    """sqrt(disc) = coef * sqrt(radicand) with integer radicand."""
    num, den = disc.numerator, disc.denominator
    return Fraction(1, den), num * den


def _translation_from_trace(tr) -> float:
    t = abs(Fraction(tr))
    if t < 10**12:
        return 2.0 * math.acosh(float(t) / 2.0)
    lt = math.log(t.numerator) - math.log(t.denominator)
    # arccosh(x) = ln x + ln(1 + sqrt(1 - 1/x^2)) with x = |tr|/2
    return 2.0 * (lt - math.log(2.0) + math.log1p(math.sqrt(max(0.0, 1.0 - 4.0 * math.exp(-2.0 * lt)))))


def classify_matrix(m) -> Classification:
    a, b, c, d = m
    if mx.is_identity(m):
        return Classification("identity", trace=a + d)
    tr = a + d
    at = abs(tr)
    if at < 2:
        return Classification("elliptic", trace=tr)
    if at == 2:
        if c == 0:
            fp = (INFINITY,)
        else:
            fp = (QuadIrrational(Fraction(a - d) / (2 * c)),)
        return Classification("parabolic", fp, 0.0, trace=tr)
    length_ = _translation_from_trace(tr)
    sign = 1 if tr > 0 else -1
    if c == 0:
        other = QuadIrrational(Fraction(b) / Fraction(d - a))
        if abs(a) > 1:
            plus, minus = INFINITY, other
        else:
            plus, minus = other, INFINITY
    else:
        coef, rad = _sqrt_parts(Fraction(tr) ** 2 - 4)
        base = Fraction(a - d) / (2 * c)
        q = coef / (2 * c)
        plus = QuadIrrational(base, sign * q, rad)
        minus = QuadIrrational(base, -sign * q, rad)
    return Classification("hyperbolic", (plus, minus), length_, trace=tr, plus=plus, minus=minus)


def classify_tree_word(w: str) -> Classification:
    if not w:
        return Classification("identity")
    u, v = _split_conjugate(w)
    plus = TreeEnd(u, v)
    minus = TreeEnd(u, invert_word(v))
    return Classification("hyperbolic", (plus, minus), float(len(v)), plus=plus, minus=minus)


def classify(g: GroupElement) -> Classification:
    w = g.word
    if len(w) == 1 and abs(w[0][1]) > 1 and "realization" not in g.__dict__:
        atom, e = w[0]
        base = GroupElement(g.group, ((atom, 1),) if isinstance(atom, int) else atom)
        cb = classify(base)
        if cb.kind == "hyperbolic":
            plus, minus = (cb.plus, cb.minus) if e > 0 else (cb.minus, cb.plus)
            return Classification("hyperbolic", (plus, minus), abs(e) * cb.translation_length,
                                  plus=plus, minus=minus)
    kind = g.group.kind
    if kind == "tree":
        return classify_tree_word(g.realization)
    if kind == "matrix":
        return classify_matrix(g.realization)
    k = g.realization
    return Classification("identity" if k == 0 else "elliptic")


def is_hyperbolic(g: GroupElement) -> bool:
    return classify(g).kind == "hyperbolic"


def axis(g: GroupElement):
    cl = classify(g)
    if cl.kind != "hyperbolic":
        raise ClassificationError(f"{g.name} is {cl.kind}, not hyperbolic")
    return line(cl.minus, cl.plus, g.group.model)


def translation_variation(g: GroupElement, sample_count: int = 200, rng=None,
                          window: float = 10.0) -> float:
    """Spread of displacement over sampled points of the axis and its 2δ-neighborhood."""
    cl = classify(g)
    if cl.kind != "hyperbolic":
        raise ClassificationError(f"{g.name} is {cl.kind}, not hyperbolic")
    model = g.group.model
    if cl.translation_length < 200 * model.delta:
        raise HypothesisNotSatisfied(
            f"axis displacement {cl.translation_length:.6g} < 200*delta = {200 * model.delta:g}")
    ax = axis(g)
    if model.kind == "tree":
        # 2δ-neighborhood of the axis is the axis itself
        half = sample_count // 2
        vals = [displacement(g, ax.point(t)) for t in range(-half, sample_count - half)]
        return float(max(vals) - min(vals))
    rng = rng if rng is not None else np.random.default_rng(0)
    s = rng.uniform(-window, window, sample_count)
    r = rng.uniform(-2 * model.delta, 2 * model.delta, sample_count)
    r[: max(1, sample_count // 4)] = 0.0
    L = cl.translation_length
    if L < 25.0 and _cheap(g):
        # points are representable: use the actual Möbius action
        x, y = from_fermi(ax.frame, s, r)
        gx, gy = mobius_float(float_matrix(g), x, y)
        vals = uhp_distance(x, y, gx, gy)
    else:
        # the element translates its axis frame: (s, r) -> (s + L, r)
        vals = fermi_distance(s, r, s + L, r)
    return float(np.max(vals) - np.min(vals))


def fixed_ends_equal(u, v) -> bool:
    if u is INFINITY or v is INFINITY:
        return u is v
    return u == v


def apply_ideal(g: GroupElement, z):
    """Exact image of an ideal point."""
    from .boundary import mobius_exact

    if g.group.kind == "tree":
        return z.translate(g.realization)
    if g.group.kind == "matrix":
        return mobius_exact(g.realization, z)
    raise ModelMismatchError("rotations have no exact ideal action here")


def endpoint_relation(g: GroupElement, h: GroupElement) -> str:
    """Compare {h(g+), h(g-)} with {g+, g-}: 'same', 'disjoint' or 'partial'."""
    cl = classify(g)
    if cl.kind != "hyperbolic":
        raise ClassificationError(f"{g.name} is {cl.kind}, not hyperbolic")
    ends = (cl.plus, cl.minus)
    moved = [apply_ideal(h, z) for z in ends]
    hits = sum(any(fixed_ends_equal(m, z) for z in ends) for m in moved)
    if hits == 2:
        return "same"
    if hits == 0:
        return "disjoint"
    return "partial"
