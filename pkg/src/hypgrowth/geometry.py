"""Concrete hyperbolic spaces: regular trees and the upper half-plane.

Tree vertices are reduced words in the free group; the tree is its Cayley
graph, so it is 0-hyperbolic and every computation is exact.

Upper half-plane points are pairs ``(x, y)``.  Every complete geodesic
carries a *frame*: a real Möbius map (a, b, c, d) with positive
determinant sending the line to the imaginary axis, its backward end to 0,
its forward end to infinity and its base point (the apex of a semicircle,
height 1 on a vertical line) to ``i``.  In a frame a point has *Fermi
coordinates* ``(s, r)``: ``s`` is the arclength parameter of its
projection and ``r`` its signed distance to the line.  Fermi coordinates
stay accurate for points far out along the line, where ``(x, y)``
coordinates lose all precision, so the long-range machinery works in them.

The numerical kernels (``uhp_distance``, ``to_fermi``, ``fermi_map``, ...)
broadcast over numpy arrays; the class API wraps them for single points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .boundary import (
    INFINITY,
    QuadIrrational,
    TreeEnd,
    ideal_float,
    is_reduced,
    meet_length,
    take,
)
from .errors import (
    DegenerateGeodesicError,
    InvalidPointError,
    ModelMismatchError,
    PreconditionError,
)

LN2 = math.log(2.0)
DISTANCE_TOL = 1e-9
CHECK_TOL = 1e-6


@dataclass(frozen=True)
class SpaceModel:
    kind: str  # "tree" or "h2"
    delta: float
    tolerance: float = 0.0
    valence: int | None = None

    def __post_init__(self):
        if self.kind == "tree":
            if self.delta != 0:
                raise ValueError("tree model is 0-hyperbolic")
            if self.valence is None or self.valence < 3:
                raise ValueError("tree valence must be at least 3")
            if self.valence % 2:
                raise ValueError("only Cayley trees of free groups (even valence) are modelled")
        elif self.kind == "h2":
            if not self.delta > 0:
                raise ValueError("upper half-plane needs delta > 0")
            if self.tolerance < 0:
                raise ValueError("negative tolerance")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @classmethod
    def tree(cls, valence: int = 4) -> "SpaceModel":
        return cls("tree", 0.0, 0.0, valence)

    @classmethod
    def h2(cls, delta: float = 1.0, tolerance: float = DISTANCE_TOL) -> "SpaceModel":
        return cls("h2", float(delta), float(tolerance))

    @property
    def rank(self) -> int:
        return (self.valence or 0) // 2

    @property
    def alphabet(self) -> str:
        letters = "abcdefghijklmnopqrstuvwxyz"[: self.rank]
        return letters + letters.upper()

    def to_json(self):
        out = {"kind": self.kind, "delta": self.delta, "tolerance": self.tolerance}
        if self.kind == "tree":
            out["valence"] = self.valence
        return out


@dataclass(frozen=True)
class TreePoint:
    word: str = ""

    def __post_init__(self):
        if not is_reduced(self.word):
            raise InvalidPointError(f"{self.word!r} is not freely reduced")

    def __str__(self):
        return self.word or "1"


@dataclass(frozen=True)
class H2Point:
    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0) or not math.isfinite(self.x) or not math.isfinite(self.y):
            raise InvalidPointError(f"({self.x}, {self.y}) is not in the upper half-plane")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def __str__(self):
        return f"({self.x:.12g}, {self.y:.12g})"


Point = Union[TreePoint, H2Point]


@dataclass(frozen=True)
class Projection:
    point: Point
    param: float
    distance: float
    at_boundary: bool = False


# ----------------------------------------------------------- numeric kernels


def _log_cosh(r):
    a = np.abs(r)
    return a - LN2 + np.log1p(np.exp(-2.0 * a))


def _log_abs_sinh(x):
    a = np.abs(x)
    with np.errstate(divide="ignore"):
        small = np.log(np.abs(np.sinh(np.minimum(a, 30.0))))
    return np.where(a > 30.0, a - LN2, small)


def _asinh_exp(lv):
    """asinh(exp(lv)) without overflow."""
    lv = np.asarray(lv, dtype=float)
    big = lv > 20.0
    with np.errstate(over="ignore"):
        small = np.arcsinh(np.exp(np.minimum(lv, 20.0)))
    return np.where(big, lv + np.log1p(np.sqrt(1.0 + np.exp(-2.0 * np.maximum(lv, 20.0)))), small)


def uhp_distance(x1, y1, x2, y2):
    """Hyperbolic distance in the upper half-plane (broadcasts)."""
    chord = np.hypot(np.subtract(x1, x2), np.subtract(y1, y2))
    return 2.0 * np.arcsinh(chord / (2.0 * np.sqrt(np.multiply(y1, y2))))


def fermi_distance(s1, r1, s2, r2):
    """Distance between two points given in Fermi coordinates of one line."""
    with np.errstate(divide="ignore"):
        la = _log_cosh(r1) + _log_cosh(r2) + 2.0 * _log_abs_sinh(np.subtract(s1, s2) / 2.0)
        lb = 2.0 * _log_abs_sinh(np.subtract(r1, r2) / 2.0)
        half = 0.5 * np.logaddexp(la, lb)
    return 2.0 * _asinh_exp(half)


def frame_from_ends(xm, xp):
    """Frame of the line from ``xm`` to ``xp`` (floats, ``inf`` allowed)."""
    xm, xp = float(xm), float(xp)
    if math.isinf(xp):
        return (1.0, -xm, 0.0, 1.0)
    if math.isinf(xm):
        return (0.0, -1.0, 1.0, -xp)
    if xp > xm:
        return (1.0, -xm, -1.0, xp)
    return (1.0, -xm, 1.0, -xp)


def frame_inverse(f):
    a, b, c, d = f
    return (d, -b, -c, a)


def frame_compose(f, g):
    """Matrix product ``f @ g`` (apply g first)."""
    a, b, c, d = f
    e, f_, g_, h = g
    return (a * e + b * g_, a * f_ + b * h, c * e + d * g_, c * f_ + d * h)


def frame_shift(f, tau):
    """Frame whose parameter t corresponds to parameter t + tau of ``f``."""
    k = math.exp(-tau / 2.0)
    a, b, c, d = f
    return (a * k, b * k, c / k, d / k)


def to_fermi(f, x, y):
    """Fermi coordinates (s, r) of UHP points with respect to frame ``f``."""
    a, b, c, d = f
    det = a * d - b * c
    z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
    num = a * z + b
    den = c * z + d
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.log(np.abs(num)) - np.log(np.abs(den))
        im = det * np.asarray(y, dtype=float) / np.abs(den) ** 2
        re = (num / den).real
        r = np.arcsinh(re / im)
    return s, r


def from_fermi(f, s, r):
    """UHP coordinates of the point with Fermi coordinates (s, r)."""
    a, b, c, d = frame_inverse(f)
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    u = np.tanh(r) + 1j / np.cosh(r)
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        big = s > 0
        e_pos = np.exp(np.where(big, -s, 0.0))
        e_neg = np.exp(np.where(big, 0.0, s))
        inv_w = e_pos * np.conj(u)
        w = e_neg * u
        z_big = (a + b * inv_w) / (c + d * inv_w)
        z_small = (a * w + b) / (c * w + d)
        z = np.where(big, z_big, z_small)
    return z.real, z.imag


def fermi_map(n, s, r):
    """Transport Fermi coordinates through the Möbius map ``n``.

    ``n`` sends the frame plane of one line to the frame plane of another;
    the result is exact up to rounding even when the point is extremely far
    from both lines.
    """
    a, b, c, d = n
    det = a * d - b * c
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    u = np.tanh(r) + 1j * np.exp(-np.abs(r)) * 2.0 / (1.0 + np.exp(-2.0 * np.abs(r)))
    log_sech = -np.abs(r) + LN2 - np.log1p(np.exp(-2.0 * np.abs(r)))
    big = s >= 0
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        e_pos = np.exp(np.where(big, -s, 0.0))
        e_neg = np.exp(np.where(big, 0.0, s))
        inv_w = e_pos * np.conj(u)
        w = e_neg * u
        num = np.where(big, a + b * inv_w, a * w + b)
        den = np.where(big, c + d * inv_w, c * w + d)
        log_im = np.log(det) - np.abs(s) + log_sech - 2.0 * np.log(np.abs(den))
        s_new = np.log(np.abs(num)) - np.log(np.abs(den))
        re = (num / den).real
        lr = np.log(np.abs(re)) - log_im
        r_new = np.sign(re) * _asinh_exp(lr)
    r_new = np.where(re == 0, 0.0, r_new)
    return s_new, r_new


def rotate_about_i(theta, w):
    """Elliptic map fixing i, rotating tangent directions by ``theta``."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return (c * w + s) / (-s * w + c)


def offset_point(f, t, dist, theta):
    """UHP point at distance ``dist`` from the frame point (t, 0), direction ``theta``."""
    w = math.exp(t) * rotate_about_i(theta, 1j * math.exp(dist))
    a, b, c, d = frame_inverse(f)
    z = (a * w + b) / (c * w + d)
    return z.real, z.imag


def segment_frames(x1, y1, x2, y2):
    """Frames and end parameters of the geodesic segments z1 -> z2 (broadcasts)."""
    x1, y1, x2, y2 = (np.asarray(v, dtype=float) for v in (x1, y1, x2, y2))
    dx = x2 - x1
    chord = np.hypot(dx, y2 - y1)
    vertical = np.abs(dx) <= 1e-11 * np.maximum(chord, 1e-300)
    x0 = np.where(vertical, 0.5 * (x1 + x2), x1)
    up = y2 >= y1
    safe_dx = np.where(vertical, 1.0, dx)
    cen = ((x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1)) / (2.0 * safe_dx)
    rad = np.hypot(x1 - cen, y1)
    e1, e2 = cen - rad, cen + rad
    right = dx > 0
    one = np.ones_like(x1)
    zero = np.zeros_like(x1)
    # vertical up: (1, -x0, 0, 1); vertical down: (0, -1, 1, -x0)
    va = np.where(up, one, zero)
    vb = np.where(up, -x0, -one)
    vc = np.where(up, zero, one)
    vd = np.where(up, one, -x0)
    # circle moving right: (1, -e1, -1, e2); moving left: (1, -e2, 1, -e1)
    ca = one
    cb = np.where(right, -e1, -e2)
    cc = np.where(right, -one, one)
    cd = np.where(right, e2, -e1)
    f = (
        np.where(vertical, va, ca),
        np.where(vertical, vb, cb),
        np.where(vertical, vc, cc),
        np.where(vertical, vd, cd),
    )
    t1, _ = to_fermi(f, x1, y1)
    t2, _ = to_fermi(f, x2, y2)
    return f, t1, t2


def distance_to_segment(f, t1, t2, x1, y1, x2, y2, px, py):
    """Distance from points to segments given by frames (broadcasts)."""
    s, r = to_fermi(f, px, py)
    lo, hi = np.minimum(t1, t2), np.maximum(t1, t2)
    inside = (s >= lo) & (s <= hi)
    d_line = np.abs(r)
    d_end = np.minimum(uhp_distance(px, py, x1, y1), uhp_distance(px, py, x2, y2))
    return np.where(inside, d_line, d_end)


# -------------------------------------------------------------- geodesics


def _ideal_equal(u, v, tol=1e-12) -> bool:
    exact = (QuadIrrational, int, Fraction)
    if u is INFINITY or v is INFINITY:
        if u is INFINITY and v is INFINITY:
            return True
        other = v if u is INFINITY else u
        return isinstance(other, float) and math.isinf(other)
    if isinstance(u, exact) and isinstance(v, exact):
        return QuadIrrational(u) == QuadIrrational(v) if not isinstance(u, QuadIrrational) else u == (
            v if isinstance(v, QuadIrrational) else QuadIrrational(v)
        )
    fu, fv = ideal_float(u), ideal_float(v)
    if math.isinf(fu) or math.isinf(fv):
        return fu == fv
    return abs(fu - fv) <= tol * max(1.0, abs(fu), abs(fv))


@dataclass(frozen=True)
class H2Geodesic:
    """A geodesic segment, ray or line in the upper half-plane.

    ``point(t)`` is unit speed in ``t`` over ``[lo, hi]``; for a segment
    built from ``p`` to ``q`` the parameters of p and q are ``lo`` and
    ``hi`` (so ``hi - lo`` is its length).
    """

    model: SpaceModel
    frame: tuple
    kind: str
    lo: float = -math.inf
    hi: float = math.inf
    ends: tuple = ()

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def ideal_ends(self) -> tuple:
        """Float positions of the backward and forward ideal ends of the full line."""
        a, b, c, d = frame_inverse(self.frame)
        back = b / d if d != 0 else math.inf
        fwd = a / c if c != 0 else math.inf
        return back, fwd

    def point(self, t: float) -> H2Point:
        if not (self.lo - 1e-12 <= t <= self.hi + 1e-12):
            raise ValueError(f"parameter {t} outside [{self.lo}, {self.hi}]")
        x, y = from_fermi(self.frame, t, 0.0)
        return H2Point(float(x), float(y))

    def fermi(self, p: H2Point) -> tuple[float, float]:
        s, r = to_fermi(self.frame, p.x, p.y)
        return float(s), float(r)

    def locate(self, p: Point) -> Projection:
        if not isinstance(p, H2Point):
            raise ModelMismatchError("tree point projected onto a half-plane geodesic")
        s, r = self.fermi(p)
        if self.lo <= s <= self.hi:
            on_edge = self.kind != "line" and (s == self.lo or s == self.hi)
            return Projection(self.point(s), s, abs(r), on_edge)
        t = self.lo if s < self.lo else self.hi
        q = self.point(t)
        return Projection(q, t, distance(p, q), True)

    def distance_to(self, p: Point) -> float:
        return self.locate(p).distance

    def image(self, g_frame) -> "H2Geodesic":
        """Push forward by the Möbius map with float matrix ``g_frame``."""
        new = frame_compose(self.frame, frame_inverse(g_frame))
        return H2Geodesic(self.model, new, self.kind, self.lo, self.hi, ())

    def shifted(self, tau: float) -> "H2Geodesic":
        """Same image, parameter moved so that new(t) = old(t + tau)."""
        return H2Geodesic(self.model, frame_shift(self.frame, tau), self.kind,
                          self.lo - tau, self.hi - tau, self.ends)

    def sample(self, n: int, window: float = 10.0) -> np.ndarray:
        lo = self.lo if math.isfinite(self.lo) else -window
        hi = self.hi if math.isfinite(self.hi) else window
        return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class TreeGeodesic:
    """A geodesic in the Cayley tree; parameters are integers.

    Lines are parameterized from the vertex of the line nearest the root;
    segments and rays from their start vertex.
    """

    model: SpaceModel
    kind: str
    minus: object  # start vertex (str) or backward end (TreeEnd)
    plus: object  # end vertex (str) or forward end (TreeEnd)
    lo: float = -math.inf
    hi: float = math.inf
    _base: int = field(default=0, compare=False)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def ideal_ends(self) -> tuple:
        return (self.minus, self.plus)

    def vertex(self, t) -> str:
        t = _as_int(t)
        if not (self.lo <= t <= self.hi):
            raise ValueError(f"parameter {t} outside [{self.lo}, {self.hi}]")
        if self.kind == "line":
            base = self._base
            return take(self.plus, base + t) if t >= 0 else take(self.minus, base - t)
        p = self.minus
        m = meet_length(p, self.plus)
        up = len(p) - m
        if t <= up:
            return p[: len(p) - t]
        return take(self.plus, m + t - up)

    def point(self, t) -> TreePoint:
        return TreePoint(self.vertex(t))

    def param(self, v: str) -> int:
        """Parameter of a vertex known to lie on the geodesic."""
        if self.kind == "line":
            base = self._base
            if len(v) > base and meet_length(v, self.plus) == len(v):
                return len(v) - base
            if len(v) > base and meet_length(v, self.minus) == len(v):
                return -(len(v) - base)
            return 0
        return _tree_dist(self.minus, v)

    def locate(self, p: Point) -> Projection:
        if not isinstance(p, TreePoint):
            raise ModelMismatchError("half-plane point projected onto a tree geodesic")
        z = tree_median(p.word, self.minus, self.plus)
        t = self.param(z)
        on_edge = self.kind != "line" and (t == self.lo or t == self.hi)
        return Projection(TreePoint(z), t, _tree_dist(p.word, z), on_edge)

    def distance_to(self, p: Point) -> float:
        return self.locate(p).distance

    def image(self, g: str) -> "TreeGeodesic":
        from .boundary import reduce_word

        def move(e):
            return reduce_word(g + e) if isinstance(e, str) else e.translate(g)

        if self.kind == "line":
            return tree_line(move(self.minus), move(self.plus), self.model)
        if self.kind == "segment":
            return tree_segment(move(self.minus), move(self.plus), self.model)
        return tree_ray(move(self.minus), move(self.plus), self.model)

    def sample(self, n: int, window: float = 10.0) -> np.ndarray:
        lo = self.lo if math.isfinite(self.lo) else -window
        hi = self.hi if math.isfinite(self.hi) else window
        return np.arange(int(lo), int(hi) + 1)


GeodesicLine = Union[H2Geodesic, TreeGeodesic]


def _as_int(t) -> int:
    if isinstance(t, (int, np.integer)):
        return int(t)
    if float(t).is_integer():
        return int(t)
    raise ValueError("tree geodesics are parameterized by integers")


def _tree_dist(u: str, v: str) -> int:
    return len(u) + len(v) - 2 * meet_length(u, v)


def tree_median(u, v, w) -> str:
    """Median of three vertices/ends in the rooted Cayley tree."""
    pairs = [(u, v), (v, w), (u, w)]
    best, best_len = None, -1
    for x, y in pairs:
        if isinstance(x, TreeEnd) and isinstance(y, TreeEnd) and x == y:
            continue
        k = meet_length(x, y)
        if k > best_len:
            best, best_len = x, k
    return take(best, best_len)


def tree_line(xm: TreeEnd, xp: TreeEnd, model: SpaceModel | None = None) -> TreeGeodesic:
    if xm == xp:
        raise DegenerateGeodesicError("line endpoints coincide")
    model = model or _infer_tree_model(xm.prefix + xm.period + xp.prefix + xp.period)
    return TreeGeodesic(model, "line", xm, xp, -math.inf, math.inf, meet_length(xm, xp))


def tree_segment(p: str, q: str, model: SpaceModel | None = None) -> TreeGeodesic:
    model = model or _infer_tree_model(p + q)
    return TreeGeodesic(model, "segment", p, q, 0, _tree_dist(p, q))


def tree_ray(p: str, xi: TreeEnd, model: SpaceModel | None = None) -> TreeGeodesic:
    model = model or _infer_tree_model(p + xi.prefix + xi.period)
    return TreeGeodesic(model, "ray", p, xi, 0, math.inf)


def _infer_tree_model(letters: str) -> SpaceModel:
    rank = 2
    for ch in letters:
        rank = max(rank, ord(ch.lower()) - ord("a") + 1)
    return SpaceModel.tree(2 * rank)


# ------------------------------------------------------------- operations


def distance(p: Point, q: Point) -> float:
    if isinstance(p, TreePoint) and isinstance(q, TreePoint):
        return float(_tree_dist(p.word, q.word))
    if isinstance(p, H2Point) and isinstance(q, H2Point):
        return float(uhp_distance(p.x, p.y, q.x, q.y))
    raise ModelMismatchError(f"cannot measure between {type(p).__name__} and {type(q).__name__}")


def geodesic(p: Point, q: Point, model: SpaceModel | None = None) -> GeodesicLine:
    if type(p) is not type(q):
        raise ModelMismatchError("segment endpoints live in different models")
    if isinstance(p, TreePoint):
        if p.word == q.word:
            raise DegenerateGeodesicError("segment endpoints coincide")
        return tree_segment(p.word, q.word, model)
    if distance(p, q) <= DISTANCE_TOL:
        raise DegenerateGeodesicError("segment endpoints coincide")
    f, t1, t2 = segment_frames(p.x, p.y, q.x, q.y)
    f = tuple(float(v) for v in f)
    t1, t2 = float(t1), float(t2)
    return H2Geodesic(model or SpaceModel.h2(), f, "segment", t1, t2, (p, q))


def line(xm, xp, model: SpaceModel | None = None) -> GeodesicLine:
    """Complete geodesic from ideal point ``xm`` to ideal point ``xp``."""
    if isinstance(xm, TreeEnd) or isinstance(xp, TreeEnd):
        return tree_line(xm, xp, model)
    if _ideal_equal(xm, xp):
        raise DegenerateGeodesicError("line endpoints coincide")
    f = frame_from_ends(ideal_float(xm), ideal_float(xp))
    return H2Geodesic(model or SpaceModel.h2(), f, "line", -math.inf, math.inf, (xm, xp))


def ray(p: Point, xi, model: SpaceModel | None = None) -> GeodesicLine:
    """Geodesic ray from ``p`` to the ideal point ``xi``."""
    if isinstance(p, TreePoint):
        return tree_ray(p.word, xi, model)
    fx = ideal_float(xi)
    if math.isinf(fx):
        f = frame_from_ends(p.x, math.inf)
    elif abs(p.x - fx) <= 1e-14 * max(1.0, abs(fx)):
        f = frame_from_ends(math.inf, fx)
    else:
        cen = (p.x * p.x + p.y * p.y - fx * fx) / (2.0 * (p.x - fx))
        f = frame_from_ends(2.0 * cen - fx, fx)
    s, _ = to_fermi(f, p.x, p.y)
    return H2Geodesic(model or SpaceModel.h2(), f, "ray", float(s), math.inf, (p, xi))


def project(c: GeodesicLine, x: Point) -> Point:
    return c.locate(x).point


def project_by_search(c: H2Geodesic, x: H2Point, window: float = 40.0) -> float:
    """Projection parameter by golden-section search on the distance profile."""
    from scipy.optimize import minimize_scalar

    s0, _ = c.fermi(x)
    lo = max(c.lo, s0 - window) if math.isfinite(c.lo) else s0 - window
    hi = min(c.hi, s0 + window) if math.isfinite(c.hi) else s0 + window

    def prof(t):
        px, py = from_fermi(c.frame, t, 0.0)
        return float(uhp_distance(x.x, x.y, px, py))

    res = minimize_scalar(prof, bracket=(lo, 0.5 * (lo + hi), hi), method="golden",
                          options={"xtol": 1e-10})
    return float(min(max(res.x, lo), hi))


def same_ends(c1: GeodesicLine, c2: GeodesicLine) -> bool:
    if isinstance(c1, TreeGeodesic) and isinstance(c2, TreeGeodesic):
        return c1.minus == c2.minus and c1.plus == c2.plus
    if isinstance(c1, H2Geodesic) and isinstance(c2, H2Geodesic):
        a1, b1 = c1.ideal_ends
        a2, b2 = c2.ideal_ends
        return _float_end_eq(a1, a2) and _float_end_eq(b1, b2)
    raise ModelMismatchError("geodesics live in different models")


def _float_end_eq(u: float, v: float, tol: float = 1e-9) -> bool:
    if math.isinf(u) or math.isinf(v):
        return u == v or (abs(u) > 1e12 and abs(v) > 1e12)
    return abs(u - v) <= tol * max(1.0, abs(u), abs(v))


def hausdorff_same_endpoints(c1: GeodesicLine, c2: GeodesicLine, window: float = 10.0,
                             samples: int = 201) -> float:
    """Sampled symmetric Hausdorff distance between lines with common ends."""
    if c1.kind != "line" or c2.kind != "line":
        raise PreconditionError("Hausdorff comparison needs complete geodesics")
    if not same_ends(c1, c2):
        raise PreconditionError("geodesics do not share their ideal endpoints")
    worst = 0.0
    for a, b in ((c1, c2), (c2, c1)):
        for t in a.sample(samples, window):
            worst = max(worst, b.distance_to(a.point(t)))
    return worst


def thin_triangle_defect(p: Point, q: Point, r: Point, samples: int = 65) -> float:
    """Largest distance from a sampled edge point to the union of the other two edges."""
    pts = (p, q, r)
    if all(isinstance(v, TreePoint) for v in pts):
        return _tree_thin_defect(p.word, q.word, r.word)
    if not all(isinstance(v, H2Point) for v in pts):
        raise ModelMismatchError("triangle vertices live in different models")
    xs = np.array([[p.x, q.x, r.x]])
    ys = np.array([[p.y, q.y, r.y]])
    return float(h2_thin_defects(xs, ys, samples)[0])


def _tree_thin_defect(p: str, q: str, r: str) -> float:
    edges = [(p, q), (q, r), (r, p)]
    worst = 0
    for i, (u, v) in enumerate(edges):
        if u == v:
            continue
        seg = tree_segment(u, v)
        others = [edges[j] for j in range(3) if j != i]
        for t in range(int(seg.length) + 1):
            w = seg.vertex(t)
            dmin = min(_tree_point_to_segment(w, a, b) for a, b in others)
            worst = max(worst, dmin)
    return float(worst)


def _tree_point_to_segment(w: str, a: str, b: str) -> int:
    return _tree_dist(w, tree_median(w, a, b))


def h2_thin_defects(xs, ys, samples: int = 65) -> np.ndarray:
    """Thin-triangle defects for a batch of triangles.

    ``xs`` and ``ys`` have shape (n, 3).  Degenerate edges are measured as
    points.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    n = xs.shape[0]
    u = np.linspace(0.0, 1.0, samples)
    frames, t1s, t2s = [], [], []
    for i in range(3):
        j = (i + 1) % 3
        f, t1, t2 = segment_frames(xs[:, i], ys[:, i], xs[:, j], ys[:, j])
        frames.append(f)
        t1s.append(t1)
        t2s.append(t2)
    worst = np.zeros(n)
    for i in range(3):
        j = (i + 1) % 3
        f = frames[i]
        degenerate = uhp_distance(xs[:, i], ys[:, i], xs[:, j], ys[:, j]) <= DISTANCE_TOL
        tt = t1s[i][:, None] + (t2s[i] - t1s[i])[:, None] * u[None, :]
        fb = tuple(np.asarray(v)[:, None] for v in f)
        px, py = from_fermi(fb, tt, np.zeros_like(tt))
        px = np.where(degenerate[:, None], xs[:, i][:, None], px)
        py = np.where(degenerate[:, None], ys[:, i][:, None], py)
        dmin = np.full(px.shape, np.inf)
        for k in range(3):
            if k == i:
                continue
            kk = (k + 1) % 3
            fk = tuple(np.asarray(v)[:, None] for v in frames[k])
            deg_k = uhp_distance(xs[:, k], ys[:, k], xs[:, kk], ys[:, kk]) <= DISTANCE_TOL
            d_seg = distance_to_segment(
                fk, t1s[k][:, None], t2s[k][:, None],
                xs[:, k][:, None], ys[:, k][:, None], xs[:, kk][:, None], ys[:, kk][:, None],
                px, py,
            )
            d_pt = uhp_distance(px, py, xs[:, k][:, None], ys[:, k][:, None])
            dmin = np.minimum(dmin, np.where(deg_k[:, None], d_pt, d_seg))
        worst = np.maximum(worst, np.nanmax(dmin, axis=1))
    return worst
