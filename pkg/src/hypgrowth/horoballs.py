"""Horofunctions, Ford horoball systems, the truncated space and k1.

Horoballs are stored exactly: the ball at infinity is ``{y >= H}`` and a
ball at a rational point u is the closed Euclidean disk of diameter D
tangent to the real line at u.  Heights and diameters are Fractions (a
float h0 enters through its exact binary value), so transport under
integer Möbius maps and disjointness are decided exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import matrices as mx
from .ball import letters_for, spheres
from .boundary import INFINITY, QuadIrrational
from .errors import CapExceeded, K1Uncertified, SeparationViolation, UnsupportedCenterError
from .geometry import H2Point, TreePoint, distance, uhp_distance
from .isometry import GroupElement, mobius_float
from .presets import Group


def _as_rational_center(center):
    if center is INFINITY:
        return INFINITY
    if isinstance(center, QuadIrrational):
        if not center.is_rational:
            raise UnsupportedCenterError(f"center {center} is not rational")
        return center.p
    if isinstance(center, (int, Fraction)):
        return Fraction(center)
    if isinstance(center, float):
        if math.isinf(center) and center > 0:
            return INFINITY
        raise UnsupportedCenterError("float centers are not supported; pass a Fraction")
    raise UnsupportedCenterError(f"unsupported center {center!r}")


def _to_infinity(u: Fraction):
    """Integer matrix of determinant 1 sending the rational u to infinity."""
    p, q = u.numerator, u.denominator
    # find x, y with x*p + y*q = 1, then [[x, y], [-q, p]] has det x*p + y*q
    g, x, y = _egcd(p, q)
    assert g == 1
    return (x, y, -q, p)


def _egcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def busemann(center, x: H2Point, basepoint: H2Point = H2Point(0.0, 1.0)) -> float:
    """Busemann function about a rational or infinite center, zero at ``basepoint``.

    It decreases toward the center: about infinity it is -ln y (+ const).
    """
    c = _as_rational_center(center)
    if c is INFINITY:
        return -math.log(x.y) + math.log(basepoint.y)
    m = _to_infinity(c)
    fe = tuple(float(v) for v in m)
    _, y1 = mobius_float(fe, x.x, x.y)
    _, y0 = mobius_float(fe, basepoint.x, basepoint.y)
    return float(-math.log(y1) + math.log(y0))


@dataclass(frozen=True)
class Horofunction:
    """Horofunction in the increasing-toward-the-center convention.

    Along a geodesic ray toward the center it grows like arclength, which is
    the form of the slack inequality with constants ``c1`` and ``c2``.
    """

    center: object
    basepoint: H2Point = H2Point(0.0, 1.0)
    c1: float = 1.0
    c2: float = 4.0

    def __call__(self, x: H2Point) -> float:
        return -busemann(self.center, x, self.basepoint)

    def slack(self, x: H2Point, a: H2Point) -> float:
        return abs(self(a) - (self(x) + distance(x, a)))


def horofunction(center, delta: float = 1.0, basepoint: H2Point = H2Point(0.0, 1.0)) -> Horofunction:
    _as_rational_center(center)
    return Horofunction(center, basepoint, delta, 4 * delta)


@dataclass(frozen=True)
class Horoball:
    center: object  # INFINITY or Fraction
    size: Fraction  # height H for the ball at infinity, Euclidean diameter otherwise

    def contains_open(self, x: H2Point) -> bool:
        if self.center is INFINITY:
            return x.y > float(self.size)
        r = float(self.size) / 2.0
        return (x.x - float(self.center)) ** 2 + (x.y - r) ** 2 < r * r

    def image(self, m) -> "Horoball":
        """Exact image under the integer/rational matrix ``m``."""
        a, b, c, d = (Fraction(v) for v in m)
        if self.center is INFINITY:
            if c == 0:
                return Horoball(INFINITY, a * a * self.size)
            return Horoball(a / c, 1 / (c * c * self.size))
        u = self.center
        den = c * u + d
        if den == 0:
            return Horoball(INFINITY, 1 / (c * c * self.size))
        return Horoball((a * u + b) / den, self.size / (den * den))

    def to_json(self):
        if self.center is INFINITY:
            return {"center": "inf", "height": str(self.size), "height_approx": float(self.size)}
        return {"center": str(self.center), "diameter": str(self.size),
                "diameter_approx": float(self.size)}


def horoball_gap(b1: Horoball, b2: Horoball) -> tuple[bool, float]:
    """(interiors disjoint, hyperbolic distance between the balls) computed exactly then logged."""
    if b1.center is INFINITY and b2.center is INFINITY:
        return False, 0.0
    if b2.center is INFINITY:
        b1, b2 = b2, b1
    if b1.center is INFINITY:
        ratio = b1.size / b2.size  # H / D
    else:
        ratio = (b1.center - b2.center) ** 2 / (b1.size * b2.size)
    disjoint = ratio >= 1
    dist = _log_fraction(ratio) if ratio > 1 else 0.0
    return disjoint, dist


def _log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass
class HoroballSystem:
    Q: int
    h0: Fraction
    bound: int
    balls: dict = field(default_factory=dict)

    @property
    def parabolic_points(self):
        return list(self.balls)

    @property
    def separation(self) -> float:
        """Nominal pairwise separation 2 ln h0 (attained by Farey neighbours)."""
        return 2.0 * _log_fraction(self.h0) if self.h0 > 1 else 0.0

    def ball(self, center):
        return self.balls.get(center)

    def pairwise(self):
        """All listed pairs with exact disjointness and distance."""
        items = list(self.balls.values())
        out = []
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                ok, dist = horoball_gap(items[i], items[j])
                out.append((items[i].center, items[j].center, ok, dist))
        return out

    def to_json(self):
        pairs = self.pairwise()
        return {
            "Q": self.Q,
            "h0": float(self.h0),
            "numerator_bound": self.bound,
            "parabolic_points": [_center_json(c) for c in self.balls],
            "balls": [b.to_json() for b in self.balls.values()],
            "nominal_separation": self.separation,
            "min_pairwise_distance": min((p[3] for p in pairs), default=None),
            "all_interiors_disjoint": all(p[2] for p in pairs),
            "pair_count": len(pairs),
        }


def _center_json(c):
    return "inf" if c is INFINITY else str(c)


def ford_system(Q: int, h0=1, bound: int | None = None) -> HoroballSystem:
    """Ford horoballs scaled by h0: {y >= h0} at infinity, diameter 1/(h0 q^2) at p/q."""
    if Q < 1:
        raise ValueError("Q must be at least 1")
    h0 = Fraction(h0)
    if h0 < 1:
        raise SeparationViolation(f"h0 = {float(h0)} < 1 makes Ford disks overlap the ball at infinity")
    bound = 2 * Q if bound is None else bound
    sysm = HoroballSystem(Q, h0, bound)
    sysm.balls[INFINITY] = Horoball(INFINITY, h0)
    for q in range(1, Q + 1):
        for p in range(-bound, bound + 1):
            if gcd(p, q) == 1:
                sysm.balls[Fraction(p, q)] = Horoball(Fraction(p, q), 1 / (h0 * q * q))
    return sysm


def default_h0(delta: float) -> float:
    return math.exp(200.0 * delta)


@dataclass
class InvarianceReport:
    checked: list = field(default_factory=list)  # (generator, cusp, image cusp, ok)
    skipped: list = field(default_factory=list)  # (generator, cusp, image cusp)

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.checked)

    def to_json(self):
        return {
            "passed": self.passed,
            "checked_count": len(self.checked),
            "skipped_count": len(self.skipped),
            "failures": [
                {"generator": g, "cusp": _center_json(c), "image": _center_json(i)}
                for g, c, i, ok in self.checked if not ok
            ],
            "checked": [
                {"generator": g, "cusp": _center_json(c), "image": _center_json(i), "ok": ok}
                for g, c, i, ok in self.checked
            ],
            "skipped": [
                {"generator": g, "cusp": _center_json(c), "image": _center_json(i)}
                for g, c, i in self.skipped
            ],
        }


def _image_cusp(m, c):
    a, b, cc, d = (Fraction(v) for v in m)
    if c is INFINITY:
        return INFINITY if cc == 0 else a / cc
    den = cc * c + d
    if den == 0:
        return INFINITY
    return (a * c + b) / den


def invariance_check(sysm: HoroballSystem, gens) -> InvarianceReport:
    """Check g(B_xi) = B_g(xi) exactly for listed cusps whose images are listed."""
    rep = InvarianceReport()
    for g in gens:
        m = g.realization if isinstance(g, GroupElement) else g
        label = g.name if isinstance(g, GroupElement) else str(m)
        if isinstance(m, str) or isinstance(m, int):
            continue  # tree/rotation elements: no cusps to move
        for c, ball in sysm.balls.items():
            img = _image_cusp(m, c)
            target = sysm.balls.get(img)
            if target is None:
                rep.skipped.append((label, c, img))
                continue
            moved = ball.image(m)
            rep.checked.append((label, c, img, moved.center == target.center and moved.size == target.size))
    return rep


def truncated_contains(sysm: HoroballSystem | None, x) -> bool:
    """True iff x avoids every listed open horoball interior."""
    if sysm is None or isinstance(x, TreePoint):
        return True
    return not any(b.contains_open(x) for b in sysm.balls.values())


# ------------------------------------------------------------------- k1


def sample_basepoints(group: Group, sysm: HoroballSystem | None, count: int = 50):
    """Lattice points of a fundamental-domain approximation that lie in Y."""
    if group.model.kind == "tree" or group.kind == "rotation":
        return [TreePoint("")] if group.model.kind == "tree" else [H2Point(0.0, 1.0)]
    top = float(sysm.h0) if sysm is not None else 10.0
    top = min(top, 1e300)
    nx = 5
    ny = max(1, count // nx)
    pts = []
    if group.id == "sanov":
        # domain of the level-2 congruence subgroup: |x| <= 1, |z - 1/2| >= 1/2, |z + 1/2| >= 1/2
        xs = np.linspace(-1.0, 1.0, nx)
        floor = [math.sqrt(max(0.25 - (abs(x) - 0.5) ** 2, 0.0)) + 1e-3 for x in xs]
    else:
        xs = np.linspace(-0.5, 0.5, nx)
        floor = [math.sqrt(1.0 - x * x) + 1e-3 for x in xs]
    for x, lo in zip(xs, floor):
        for y in np.geomspace(max(lo, 1e-3), top, ny):
            p = H2Point(float(x), float(y))
            if truncated_contains(sysm, p):
                pts.append(p)
    return pts[:count]


@dataclass
class K1Result:
    k1: int
    threshold: float
    certified: bool
    cap: int
    radius_reached: int
    max_count: int
    counts: list  # per basepoint
    basepoints: list
    witness_elements: list = field(default_factory=list)

    def to_json(self):
        return {
            "k1": self.k1,
            "threshold": self.threshold,
            "certified": self.certified,
            "cap": self.cap,
            "radius_reached": self.radius_reached,
            "max_count": self.max_count,
            "basepoint_count": len(self.basepoints),
            "counts": self.counts,
        }


def _displacements(group: Group, val, pts) -> np.ndarray:
    if group.kind == "tree":
        from .boundary import meet_length, reduce_word

        out = []
        for p in pts:
            img = reduce_word(val + p.word)
            out.append(len(img) + len(p.word) - 2 * meet_length(img, p.word))
        return np.array(out, dtype=float)
    if group.kind == "rotation":
        from .isometry import _rotation_entries

        fe = _rotation_entries(val, group.order)
    else:
        fe = mx.float_entries(val)
    xs = np.array([p.x for p in pts])
    ys = np.array([p.y for p in pts])
    gx, gy = mobius_float(fe, xs, ys)
    return uhp_distance(xs, ys, gx, gy)


def _sphere_displacements(group: Group, vals, pts) -> np.ndarray:
    """Displacements, shape (len(vals), len(pts))."""
    if group.kind != "matrix":
        return np.array([_displacements(group, v, pts) for v in vals])
    fe = np.array([mx.float_entries(v) for v in vals])
    xs = np.array([p.x for p in pts])[None, :]
    ys = np.array([p.y for p in pts])[None, :]
    a, b, c, d = (fe[:, k][:, None] for k in range(4))
    gx, gy = mobius_float((a, b, c, d), xs, ys)
    return uhp_distance(xs, ys, gx, gy)


def compute_k1(group: Group, sysm: HoroballSystem | None, threshold: float | None = None,
               cap: int = 12, basepoints=None, raise_uncertified: bool = True,
               max_elements: int = 300_000) -> K1Result:
    """1 + the largest census of elements moving a sample basepoint at most ``threshold``.

    The census runs over balls of the word metric up to radius ``cap``.  It
    is certified once every element of the current sphere moves every
    basepoint more than threshold + 2*diam(sample).
    """
    if threshold is None:
        threshold = 200.0 * group.model.delta
    pts = basepoints if basepoints is not None else sample_basepoints(group, sysm)
    diam = 0.0
    if group.model.kind == "h2" and len(pts) > 1:
        xs = np.array([p.x for p in pts])
        ys = np.array([p.y for p in pts])
        diam = float(np.max(uhp_distance(xs[:, None], ys[:, None], xs[None, :], ys[None, :])))
    counts = np.zeros(len(pts), dtype=int)
    letters = letters_for(group)
    certified = False
    radius = 0
    exhausted = True
    try:
        for n, sphere in enumerate(spheres(group, letters, cap, cap=max_elements, paths=False)):
            radius = n
            d = _sphere_displacements(group, [val for val, _ in sphere], pts)
            counts += np.sum(d <= threshold, axis=0)
            if n >= 1 and float(d.min()) > threshold + 2.0 * diam:
                certified = True
                break
        else:
            # the enumeration ran out (finite group) before the cap: complete
            certified = radius < cap
    except CapExceeded:
        exhausted = False
    best = int(counts.max()) if len(counts) else 0
    res = K1Result(1 + max(1, best), float(threshold), certified, cap, radius, best,
                   [int(c) for c in counts], pts)
    if not certified and raise_uncertified:
        raise K1Uncertified(
            f"k1 census not certified within word length {radius if not exhausted else cap}; "
            f"partial value {res.k1}", partial=res)
    return res
