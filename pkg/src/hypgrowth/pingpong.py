"""Ping-pong tables for the pair g1 = s^(10 k1), g2 = gamma g1 gamma^-1.

In the half-plane every point is carried in Fermi coordinates (s, r) of
the frame of A1 = axis(s).  The frame of A2 = gamma(A1) is the pushed
forward frame, so both g1 and g2 act on their own frames as the shift
(s, r) -> (s + L, r) with the same L.  Passing between the two frames is a
single fixed Möbius map applied with ``fermi_map``, which stays accurate
at the enormous distances involved.  In the tree everything is exact word
arithmetic.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import matrices as mx
from .boundary import reduce_word
from .errors import (
    ClassificationError,
    DichotomyViolation,
    HypothesisNotSatisfied,
    NestingFailure,
    PreconditionError,
    RelationFound,
    VirtuallyCyclic,
)
from .geometry import (
    H2Geodesic,
    TreeGeodesic,
    TreePoint,
    fermi_distance,
    fermi_map,
    frame_compose,
    frame_inverse,
    tree_median,
)
from .isometry import GroupElement, axis, classify, endpoint_relation, float_matrix
from .words import concat, inverse

CHECK_TOL = 1e-6


def fixed_point_dichotomy(g: GroupElement, gamma: GroupElement) -> str:
    """'same' or 'disjoint' for the endpoint pairs of g and gamma(g)."""
    rel = endpoint_relation(g, gamma)
    if rel == "partial":
        raise DichotomyViolation(
            f"{gamma.name} moves exactly one fixed point of {g.name} onto the other pair")
    return rel


@dataclass
class Overlap:
    y: object
    z: object
    a: float
    b: float
    min_distance: float

    @property
    def length(self) -> float:
        return self.b - self.a

    def to_json(self):
        return {"a": self.a, "b": self.b, "y": str(self.y), "z": str(self.z), "length": self.length,
                "min_distance": self.min_distance}


def _transfer(A1: H2Geodesic, A2: H2Geodesic):
    """Möbius map taking frame-1 coordinates to frame-2 coordinates."""
    return frame_compose(A2.frame, frame_inverse(A1.frame))


def _closest_param(A1: H2Geodesic, A2: H2Geodesic) -> float:
    """Parameter on A1 of the point nearest A2 (crossing point or common perpendicular foot)."""
    a, b, c, d = frame_inverse(_transfer(A1, A2))
    e1 = b / d
    e2 = a / c
    return 0.5 * (math.log(abs(e1)) + math.log(abs(e2)))


def _dist_to_A2(N, t):
    _, r = fermi_map(N, t, 0.0)
    return float(abs(r))


def overlap_segment(A1, A2, delta: float | None = None):
    """Parameters on A1 where it comes 2δ-close to A2, or None when d(A1, A2) > 2δ."""
    if A1.kind != "line" or A2.kind != "line":
        raise PreconditionError("overlap needs complete geodesics")
    if isinstance(A1, TreeGeodesic):
        return _tree_overlap(A1, A2)
    ends1, ends2 = A1.ideal_ends, A2.ideal_ends
    for u in ends1:
        for v in ends2:
            if _close(u, v):
                raise PreconditionError("axes share an ideal endpoint")
    delta = A1.model.delta if delta is None else delta
    N = _transfer(A1, A2)
    t0 = _closest_param(A1, A2)
    dmin = _dist_to_A2(N, t0)
    if dmin > 2 * delta:
        return None
    f = lambda t: _dist_to_A2(N, t) - 2 * delta  # noqa: E731
    step = 1.0
    lo = t0 - step
    while f(lo) < 0:
        step *= 2
        lo = t0 - step
    hi_step = 1.0
    hi = t0 + hi_step
    while f(hi) < 0:
        hi_step *= 2
        hi = t0 + hi_step
    a = t0 if f(t0) == 0 else brentq(f, lo, t0, xtol=1e-13)
    b = t0 if f(t0) == 0 else brentq(f, t0, hi, xtol=1e-13)
    return Overlap(A1.point(a), A1.point(b), float(a), float(b), dmin)


def _close(u, v) -> bool:
    if math.isinf(u) or math.isinf(v):
        return u == v
    return abs(u - v) <= 1e-12 * max(1.0, abs(u))


def _tree_overlap(A1: TreeGeodesic, A2: TreeGeodesic):
    if {A1.minus, A1.plus} & {A2.minus, A2.plus}:
        raise PreconditionError("axes share an ideal endpoint")
    qm = tree_median(A1.minus, A1.plus, A2.minus)
    qp = tree_median(A1.minus, A1.plus, A2.plus)
    tm, tp = A1.param(qm), A1.param(qp)
    if qm != qp:
        a, b = sorted((tm, tp))
        return Overlap(TreePoint(A1.vertex(a)), TreePoint(A1.vertex(b)), a, b, 0.0)
    d = A2.distance_to(TreePoint(qm))
    if d > 0:
        return None
    return Overlap(TreePoint(qm), TreePoint(qm), tm, tm, 0.0)


def _tree_nearest(A1: TreeGeodesic, A2: TreeGeodesic):
    q = tree_median(A1.minus, A1.plus, A2.minus)
    return A1.param(q), A2.locate(TreePoint(q)).param, A2.distance_to(TreePoint(q))


def twoax_bound_check(g: GroupElement, gamma: GroupElement, k1: int) -> dict:
    """Overlap of the axes of g and gamma g gamma^-1 against 3 k1 d(x, g x)."""
    model = g.group.model
    cl = classify(g)
    rep = {"g": g.name, "gamma": gamma.name, "k1": k1, "status": "skipped"}
    if cl.kind != "hyperbolic":
        rep["reason"] = f"g is {cl.kind}"
        return rep
    if cl.translation_length < 200 * model.delta - CHECK_TOL:
        rep["reason"] = "axis displacement below 200 delta"
        return rep
    rel = endpoint_relation(g, gamma)
    if rel != "disjoint":
        rep["reason"] = f"fixed-point relation is {rel}"
        return rep
    A1 = axis(g)
    A2 = _image_axis(A1, gamma)
    ov = overlap_segment(A1, A2)
    length_ = ov.length if ov else 0.0
    bound = 3 * k1 * cl.translation_length
    rep.update(status="checked", overlap_length=length_, bound=bound,
               passed=bool(length_ <= bound + CHECK_TOL), displacement=cl.translation_length)
    return rep


def _image_axis(A1, gamma: GroupElement):
    if isinstance(A1, TreeGeodesic):
        return A1.image(gamma.realization)
    return A1.image(float_matrix(gamma))


# ----------------------------------------------------------------- geometry ops


class _H2Ops:
    """Points are triples (frame, s, r): Fermi coordinates in the frame of A1 or A2.

    Fermi coordinates are only accurate near their own line, so points stay
    in the frame they were created in and are converted only to read off a
    projection onto the other axis.
    """

    def __init__(self, A1: H2Geodesic, A2: H2Geodesic, L: float):
        self.A = (A1, A2)
        self.N = _transfer(A1, A2)
        self.Ninv = frame_inverse(self.N)
        self.L = L

    def to_frame(self, i, pts):
        k, s, r = pts
        if k == i:
            return np.asarray(s, float), np.asarray(r, float)
        return fermi_map(self.N if i == 2 else self.Ninv, s, r)

    def proj(self, i, pts):
        return self.to_frame(i, pts)[0]

    def act(self, i, n, pts):
        s, r = self.to_frame(i, pts)
        return (i, s + n * self.L, r)

    def on_axis(self, i, t):
        t = np.atleast_1d(np.asarray(t, float))
        return (i, t, np.zeros_like(t))

    def fiber(self, i, lo, hi, depth, count=9):
        ts = np.linspace(lo, hi, count) if hi > lo else np.array([lo])
        offs = [0.0]
        for o in depth:
            offs += [o, -o]
        S, R = np.meshgrid(ts, offs, indexing="ij")
        return (i, S.ravel(), R.ravel())

    def distance(self, p, q):
        s1, r1 = self.to_frame(p[0], p)
        s2, r2 = self.to_frame(p[0], q)
        return fermi_distance(s1, r1, s2, r2)

    def describe(self, pts, k=0):
        return {"frame": int(pts[0]), "s": float(pts[1][k]), "r": float(pts[2][k])}


class _TreeOps:
    """Points are lists of reduced words."""

    def __init__(self, A1: TreeGeodesic, A2: TreeGeodesic, g1: GroupElement, g2: GroupElement):
        self.A = (A1, A2)
        self.g = (g1.realization, g2.realization)
        self.group = g1.group

    def proj(self, i, pts):
        ax = self.A[i - 1]
        return np.array([ax.locate(TreePoint(v)).param for v in pts], dtype=float)

    def act(self, i, n, pts):
        gn = self.group.pow(self.g[i - 1], n)
        return [reduce_word(gn + v) for v in pts]

    def on_axis(self, i, t):
        ax = self.A[i - 1]
        return [ax.vertex(int(x)) for x in np.atleast_1d(t)]

    def fiber(self, i, lo, hi, depth, count=None):
        """Axis vertices over [lo, hi] plus off-axis vertices projecting onto them (depth <= 3)."""
        ax = self.A[i - 1]
        alphabet = ax.model.alphabet
        out = []
        for t in range(int(math.ceil(lo)), int(math.floor(hi)) + 1):
            z = ax.vertex(t)
            out.append(z)
            seen, frontier = {z}, [z]
            for _ in range(3):
                nxt = []
                for v in frontier:
                    for ch in alphabet:
                        w = reduce_word(v + ch)
                        if w in seen:
                            continue
                        seen.add(w)
                        loc = ax.locate(TreePoint(w))
                        if loc.param == t and loc.distance > 0:
                            nxt.append(w)
                frontier = nxt[:12]
                out.extend(frontier)
        return out

    def distance(self, p, q):
        from .boundary import meet_length

        return np.array([len(u) + len(v) - 2 * meet_length(u, v) for u, v in zip(p, q)], dtype=float)

    def describe(self, pts, k=0):
        return {"vertex": pts[k] or "1"}


# ----------------------------------------------------------------- the table


@dataclass
class PingPongTable:
    s: GroupElement
    gamma: GroupElement | None
    k1: int
    g1: GroupElement
    g2: GroupElement
    A1: object
    A2: object
    B1: tuple
    B2: tuple
    case: str  # "overlap" | "far" | "custom"
    L: float
    delta: float
    overlap: Overlap | None = None
    axis_distance: float = 0.0
    ops: object = field(default=None, repr=False)

    @property
    def B(self):
        return (self.B1, self.B2)

    def with_B(self, B1, B2) -> "PingPongTable":
        return PingPongTable(self.s, self.gamma, self.k1, self.g1, self.g2, self.A1, self.A2,
                             tuple(B1), tuple(B2), "custom", self.L, self.delta, self.overlap,
                             self.axis_distance, self.ops)

    def to_json(self):
        return {
            "s": self.s.to_json(),
            "gamma": self.gamma.to_json() if self.gamma is not None else None,
            "k1": self.k1,
            "g1": {"word": self.g1.name, "word_length": self.g1.word_length},
            "g2": {"word": self.g2.name, "word_length": self.g2.word_length},
            "case": self.case,
            "B1": list(self.B1),
            "B2": list(self.B2),
            "B1_length": self.B1[1] - self.B1[0],
            "B2_length": self.B2[1] - self.B2[0],
            "g_translation": self.L,
            "axis_distance": self.axis_distance,
            "overlap": self.overlap.to_json() if self.overlap else None,
        }


def build_table(s: GroupElement, gamma: GroupElement, k1: int) -> PingPongTable:
    cl = classify(s)
    if cl.kind != "hyperbolic":
        raise ClassificationError(f"{s.name} is {cl.kind}, not hyperbolic")
    model = s.group.model
    delta = model.delta
    if cl.translation_length < 200 * delta - CHECK_TOL:
        raise HypothesisNotSatisfied(
            f"axis displacement {cl.translation_length:.6g} of {s.name} is below 200 delta")
    rel = fixed_point_dichotomy(s, gamma)
    if rel == "same":
        raise VirtuallyCyclic(f"{gamma.name} preserves the endpoint pair of {s.name}")
    g1 = s.power(10 * k1)
    g2 = g1.conjugate_by(gamma)
    L = 10 * k1 * cl.translation_length
    A1 = axis(s)
    A2 = _image_axis(A1, gamma)
    ov = overlap_segment(A1, A2)
    if isinstance(A1, TreeGeodesic):
        ops = _TreeOps(A1, A2, g1, g2)
    else:
        ops = _H2Ops(A1, A2, L)
    if ov is None:
        if isinstance(A1, TreeGeodesic):
            t1, t2, dist = _tree_nearest(A1, A2)
        else:
            t1 = _closest_param(A1, A2)
            t2 = float(ops.proj(2, ops.on_axis(1, t1))[0])
            dist = _dist_to_A2(ops.N, t1)
        B1 = (t1 - 10 * delta, t1 + 10 * delta)
        B2 = (t2 - 10 * delta, t2 + 10 * delta)
        case = "far"
    else:
        dist = ov.min_distance
        yz = ops.proj(2, ops.on_axis(1, [ov.a, ov.b]))
        lo2, hi2 = float(np.min(yz)), float(np.max(yz))
        B1 = (ov.a - 20 * delta, ov.b + 20 * delta)
        B2 = (lo2 - 20 * delta, hi2 + 20 * delta)
        case = "overlap"
    return PingPongTable(s, gamma, k1, g1, g2, A1, A2, B1, B2, case, L, delta, ov, float(dist), ops)


def _inside(x, B, tol):
    return (x >= B[0] - tol) & (x <= B[1] + tol)


@dataclass
class NestingReport:
    passed: bool
    checked: int
    n_range: int
    margins: dict  # n -> smallest d(z, y'') - length(B_i)
    claim_max: float  # largest d(P(g^n u), g^n P(u)) observed, compared with 13δ
    claim_bound: float
    pingpong_checked: int
    witness: dict | None = None

    def to_json(self):
        return {"passed": self.passed, "checked": self.checked, "n_range": self.n_range,
                "margins": {str(k): v for k, v in sorted(self.margins.items())},
                "claim_max": self.claim_max, "claim_bound": self.claim_bound,
                "pingpong_checked": self.pingpong_checked, "witness": self.witness}


def check_nesting(table: PingPongTable, n_range: int = 5, strict: bool = False,
                  depths=None) -> NestingReport:
    """Sampled check that g_i^n moves the fiber over B_i off B_i, and the ping-pong nesting.

    For each i and n != 0 the fiber over B_i (points on B_i and transversal
    offsets) is pushed by g_i^n and must project outside B_i.  The same
    samples v are pulled back, u = g_i^-n v, and u must project into B_j
    (j != i): otherwise u lies in X_j but g_i^n u does not lie in X_i.
    """
    ops, delta = table.ops, table.delta
    tol = CHECK_TOL if delta > 0 else 0.0
    depths = depths if depths is not None else [2 * delta, 10 * delta, 50 * delta]
    depths = [d for d in depths if d > 0]
    margins: dict = {}
    checked = 0
    pp_checked = 0
    claim_max = 0.0
    witness = None
    for i in (1, 2):
        j = 3 - i
        Bi, Bj = table.B[i - 1], table.B[j - 1]
        lenB = Bi[1] - Bi[0]
        pts = ops.fiber(i, Bi[0], Bi[1], depths)
        z = ops.proj(i, pts)
        base = ops.on_axis(i, z)
        for n in [k for k in range(-n_range, n_range + 1) if k]:
            moved = ops.act(i, n, pts)
            y2 = ops.proj(i, moved)
            bad = _inside(y2, Bi, -tol)
            checked += len(z)
            margin = float(np.min(np.abs(y2 - z))) - lenB
            margins[n] = min(margins.get(n, math.inf), margin)
            # projection claim: P(g^n u) against g^n P(u)
            claim = ops.distance(ops.on_axis(i, y2), ops.act(i, n, base))
            claim_max = max(claim_max, float(np.max(claim)))
            if witness is None and np.any(bad):
                k = int(np.argmax(bad))
                witness = {"kind": "fiber-returns", "i": i, "n": n, "point": ops.describe(pts, k),
                           "projection_after": float(y2[k]), "B": list(Bi)}
            back = ops.act(i, -n, pts)
            pj = ops.proj(j, back)
            pp_checked += len(pj)
            out = ~_inside(pj, Bj, tol)
            if witness is None and np.any(out):
                k = int(np.argmax(out))
                witness = {"kind": "pingpong-nesting", "i": i, "j": j, "n": n,
                           "point": ops.describe(back, k), "projection_on_Aj": float(pj[k]),
                           "Bj": list(Bj),
                           "note": f"u lies in X_{j} but g_{i}^{n} u projects into B_{i}"}
    rep = NestingReport(witness is None, checked, n_range, margins, claim_max, 13 * delta,
                        pp_checked, witness)
    if strict and witness is not None:
        raise NestingFailure("ping-pong nesting fails at a sampled point", witness)
    return rep


@dataclass
class DisjointReport:
    passed: bool
    checked: int
    window: float
    tail_ok: bool
    worst_excess: float
    witness: dict | None = None

    def to_json(self):
        return {"passed": self.passed, "checked": self.checked, "window": self.window,
                "tail_ok": self.tail_ok, "worst_excess": self.worst_excess, "witness": self.witness}


def check_disjoint(table: PingPongTable, window: float | None = None) -> DisjointReport:
    """Sampled criterion for X1 and X2 being disjoint.

    Points w of A_i outside B_i, stepped along a window, must project into
    B_j shrunk by 6δ; beyond the window the projections of the ideal ends
    of A_i must also land there, with the sampled projections moving
    monotonically toward them.
    """
    ops, delta = table.ops, table.delta
    tree = isinstance(table.A1, TreeGeodesic)
    step = 1.0 if tree else delta
    if window is None:
        window = 100.0 if tree else 1000.0 * delta
    tol = 0.0 if tree else CHECK_TOL
    checked = 0
    worst = -math.inf
    witness = None
    tail_ok = True
    for i in (1, 2):
        j = 3 - i
        Bi, Bj = table.B[i - 1], table.B[j - 1]
        inner = (Bj[0] + 6 * delta, Bj[1] - 6 * delta)
        if inner[0] > inner[1]:
            mid = 0.5 * (Bj[0] + Bj[1])
            inner = (mid, mid)
        nsteps = int(round(window / step))
        right = Bi[1] + step * np.arange(1, nsteps + 1)
        left = Bi[0] - step * np.arange(1, nsteps + 1)
        for side, ts in (("forward", right), ("backward", left)):
            if tree:
                ts = np.unique(np.ceil(ts) if side == "forward" else np.floor(ts))
            pts = ops.on_axis(i, ts)
            pj = ops.proj(j, pts)
            checked += len(pj)
            excess = np.maximum(inner[0] - pj, pj - inner[1])
            worst = max(worst, float(np.max(excess)))
            bad = excess > tol
            if witness is None and np.any(bad):
                k = int(np.argmax(bad))
                witness = {"i": i, "side": side, "param_on_Ai": float(ts[k]),
                           "projection_on_Aj": float(pj[k]), "shrunk_Bj": list(inner)}
            # tail: projection of the ideal end of A_i onto A_j
            end_proj = _end_projection(table, i, j, side)
            if end_proj is None or not (inner[0] - tol <= end_proj <= inner[1] + tol):
                tail_ok = False
            else:
                last = pj[-min(len(pj), 20):]
                gaps = np.abs(last - end_proj)
                if np.any(np.diff(gaps) > max(tol, 1e-9)):
                    tail_ok = False
    return DisjointReport(witness is None and tail_ok, checked, window, tail_ok, worst, witness)


def _end_projection(table: PingPongTable, i: int, j: int, side: str):
    Ai, Aj = (table.A1, table.A2) if i == 1 else (table.A2, table.A1)
    if isinstance(Ai, TreeGeodesic):
        end = Ai.plus if side == "forward" else Ai.minus
        if end in (Aj.minus, Aj.plus):
            return None
        return float(Aj.param(tree_median(Aj.minus, Aj.plus, end)))
    # ideal end of A_i in frame-j coordinates: frame-i 0 or infinity pushed through the transfer
    ops = table.ops
    M = ops.N if i == 1 else ops.Ninv
    a, b, c, d = M
    x = (a / c) if side == "forward" else (b / d)
    if x == 0 or not math.isfinite(x):
        return None
    return math.log(abs(x))


# ----------------------------------------------------------------- the oracle


_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


@dataclass
class OracleReport:
    passed: bool
    max_len: int
    words_checked: int
    mode: str
    witness: str | None = None
    primes: tuple = ()

    def to_json(self):
        return {"passed": self.passed, "max_len": self.max_len, "words_checked": self.words_checked,
                "mode": self.mode, "witness": self.witness, "primes": [str(p) for p in self.primes]}


def _oracle_values(g1: GroupElement, g2: GroupElement):
    group = g1.group
    if group.kind == "matrix" and not (_small(g1) and _small(g2)):
        vals = []
        for g in (g1, g2):
            per = tuple(g.realize_mod(p) for p in _PRIMES)
            inv = tuple(mx.pow_mod(m, -1, p) for m, p in zip(per, _PRIMES))
            vals += [per, inv]
        return "modular", vals
    x1, x2 = g1.realization, g2.realization
    return "exact", [x1, group.inv(x1), x2, group.inv(x2)]


def _small(g: GroupElement) -> bool:
    if "realization" in g.__dict__:
        return True
    return g.word_length <= 20_000


def _branch(args):
    """Level-by-level enumeration of reduced words starting with one letter."""
    group, mode, values, first, max_len = args
    inv_of = (1, 0, 3, 2)

    def mul(x, y):
        if mode == "modular":
            return tuple(mx.mul_mod(a, b, p) for a, b, p in zip(x, y, _PRIMES))
        return group.mul(x, y)

    def trivial(x):
        if mode == "modular":
            return all(mx.is_pm_identity_mod(m, p) for m, p in zip(x, _PRIMES))
        return group.is_identity(x)

    level = [(values[first], (first,))]
    count = 0
    suspects = []
    for n in range(1, max_len + 1):
        for val, path in level:
            count += 1
            if trivial(val):
                if mode == "modular":
                    # keep going: a suspect may not survive the exact recheck
                    suspects.append(path)
                else:
                    return count, path
        if n == max_len:
            break
        nxt = []
        for val, path in level:
            last = path[-1]
            for k in range(4):
                if k == inv_of[last]:
                    continue
                nxt.append((mul(val, values[k]), path + (k,)))
        level = nxt
    return count, suspects or None


_LETTER = ("g1", "g1^-1", "g2", "g2^-1")


def _path_label(path) -> str:
    # compress runs: g1 g1 g2^-1 -> g1^2 g2^-1
    out = []
    i = 0
    while i < len(path):
        j = i
        while j < len(path) and path[j] == path[i]:
            j += 1
        base, e = ("g1", 1) if path[i] in (0, 1) else ("g2", 1)
        sign = 1 if path[i] in (0, 2) else -1
        k = (j - i) * sign
        out.append(base if k == 1 else f"{base}^{k}")
        i = j
    return " ".join(out)


def algebraic_free_oracle(g1: GroupElement, g2: GroupElement, max_len: int = 8, workers: int = 1,
                          strict: bool = False) -> OracleReport:
    """Check that no reduced word of length <= max_len in g1, g2 is trivial.

    Matrices with huge entries are checked modulo three large primes: a word
    that is not +-I modulo some prime is certainly not +-I.  Any word that
    looks trivial modulo every prime is re-evaluated exactly.
    """
    group = g1.group
    mode, values = _oracle_values(g1, g2)
    jobs = [(group, mode, values, first, max_len) for first in range(4)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, 4)) as pool:
            results = list(pool.map(_branch, jobs))
    else:
        results = [_branch(job) for job in jobs]
    total = sum(c for c, _ in results)
    candidates = []
    for _, found in results:
        if found is None:
            continue
        if mode == "modular":
            for path in found:
                if _exact_trivial(g1, g2, path):
                    candidates.append(path)
        else:
            candidates.append(found)
    witness = None
    if candidates:
        best = min(candidates, key=lambda p: (len(p), p))
        witness = _path_label(best)
    rep = OracleReport(witness is None, max_len, total, mode, witness,
                       _PRIMES if mode == "modular" else ())
    if strict and witness is not None:
        raise RelationFound(f"relation {witness} = 1", witness)
    return rep


def _exact_trivial(g1: GroupElement, g2: GroupElement, path) -> bool:
    w = concat(*[(g1.word, inverse(g1.word), g2.word, inverse(g2.word))[k] for k in path])
    return g1.group.is_identity(g1.group.realize(w))


# ----------------------------------------------------------------- certificate


@dataclass
class FreeCertificate:
    g1: GroupElement
    g2: GroupElement
    word_length_bound: int
    table: PingPongTable
    nesting: NestingReport
    disjoint: DisjointReport
    oracle: OracleReport
    twoax: dict
    caveats: list

    def to_json(self):
        return {
            "g1": {"word": self.g1.name, "word_length": self.g1.word_length},
            "g2": {"word": self.g2.name, "word_length": self.g2.word_length},
            "word_length_bound": self.word_length_bound,
            "table": self.table.to_json(),
            "geometric_transcript": {"nesting": self.nesting.to_json(),
                                     "disjoint": self.disjoint.to_json(), "twoax": self.twoax},
            "algebraic_transcript": self.oracle.to_json(),
            "caveats": self.caveats,
        }


def certify_free(s: GroupElement, gamma: GroupElement, k1: int, oracle_len: int = 8,
                 n_range: int = 5, workers: int = 1) -> FreeCertificate:
    table = build_table(s, gamma, k1)
    nest = check_nesting(table, n_range)
    disj = check_disjoint(table)
    oracle = algebraic_free_oracle(table.g1, table.g2, oracle_len, workers)
    if not oracle.passed:
        raise RelationFound(f"relation {oracle.witness} = 1 between g1 and g2", oracle.witness)
    caveats = []
    if not isinstance(table.A1, TreeGeodesic):
        caveats.append("sampled-window")
    # the exact word oracle is the gate; geometric failures only downgrade
    if not nest.passed:
        caveats.append("nesting-unverified")
    if not disj.passed:
        caveats.append("disjointness-unverified")
    twoax = twoax_bound_check(s, gamma, k1)
    bound = max(table.g1.word_length, table.g2.word_length)
    return FreeCertificate(table.g1, table.g2, bound, table, nest, disj, oracle, twoax, caveats)
