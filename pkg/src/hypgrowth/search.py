"""Searching for short hyperbolic elements and the constants around them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .ball import letters_for, path_name, path_word, spheres
from .errors import (
    CapExceeded,
    ClassificationError,
    K1TooSmall,
    N0Uncertified,
    NotFound,
    PreconditionError,
)
from .geometry import H2Point, TreePoint, distance, fermi_distance
from .horoballs import K1Result, _displacements, truncated_contains
from .isometry import (
    GroupElement,
    axis,
    classify,
    classify_matrix,
    displacement,
    endpoint_relation,
)
from .presets import Group
from .words import Word


@dataclass
class GeneratingSet:
    group: Group
    elements: list
    labels: list
    verified: bool = True

    @property
    def closed_under_inverse(self) -> bool:
        vals = {self.group.realize(e.word) for e in self.elements}
        return all(self.group.inv(v) in vals for v in vals)

    def letters(self):
        return letters_for(self.group, [e.word for e in self.elements], self.labels)

    def to_json(self):
        return {"group": self.group.id, "elements": [e.name for e in self.elements],
                "closed_under_inverse": self.closed_under_inverse, "verified": self.verified}


def generating_set(group: Group, words: list[Word] | None = None, labels=None) -> GeneratingSet:
    if words is None:
        words = [((i, 1),) for i in range(len(group.gens))]
    if not words:
        raise PreconditionError("empty generating set")
    elems = [GroupElement(group, w) for w in words]
    if labels is None:
        default = [((i, 1),) for i in range(len(group.gens))]
        labels = list(group.names) if list(words) == default else [e.name for e in elems]
    gs = GeneratingSet(group, elems, list(labels))
    gs.verified = _reaches_generators(gs)
    return gs


def _reaches_generators(S: GeneratingSet, radius: int = 6, cap: int = 200_000) -> bool:
    group = S.group
    targets = {group.gens[i] for i in range(len(group.gens))}
    try:
        for sphere in spheres(group, S.letters(), radius, cap, paths=False):
            for val, _ in sphere:
                targets.discard(val)
            if not targets:
                return True
    except CapExceeded:
        pass
    return not targets


def lambda_(x, F) -> float:
    """max over f in F of d(f(x), x)."""
    elems = F.elements if isinstance(F, GeneratingSet) else list(F)
    if not elems:
        raise PreconditionError("lambda of an empty set")
    return max(displacement(f, x) for f in elems)


def ball_generating_set(S: GeneratingSet, n: int, cap: int = 1_000_000) -> GeneratingSet:
    """All distinct elements of S-length at most n, as a new generating set."""
    if n < 1:
        raise PreconditionError("ball radius must be at least 1")
    letters = S.letters()
    elems, labels = [], []
    try:
        for sphere in spheres(S.group, letters, n, cap):
            for _, path in sphere:
                if not path:
                    continue
                elems.append(GroupElement(S.group, path_word(letters, path)))
                labels.append(path_name(letters, path))
    except CapExceeded as exc:
        raise CapExceeded(f"S({n}) has more than {cap} elements; refusing a truncated set") from exc
    out = GeneratingSet(S.group, elems, labels, S.verified)
    return out


def _is_hyperbolic_value(group: Group, val) -> bool:
    if group.kind == "tree":
        return val != ""
    if group.kind == "matrix":
        return classify_matrix(val).kind == "hyperbolic"
    return False


@dataclass
class KoubiResult:
    element: GroupElement | None
    status: str  # "found" | "hypothesis-failed" | "no-short-hyperbolic"
    lambda_min: float
    threshold: float
    worst_point: object = None
    word: str = ""

    def to_json(self):
        return {"status": self.status, "lambda_min": self.lambda_min, "threshold": self.threshold,
                "element": self.element.to_json() if self.element is not None else None,
                "word": self.word, "worst_point": str(self.worst_point)}


def _koubi_grid(group: Group):
    if group.model.kind == "tree":
        pts = [TreePoint("")]
        for sphere in spheres(group, letters_for(group), 2):
            pts.extend(TreePoint(v) for v, _ in sphere if v)
        return pts
    xs = np.linspace(-0.5, 0.5, 7)
    pts = []
    for x in xs:
        lo = math.sqrt(1.0 - x * x) + 1e-3
        for y in np.geomspace(lo, 10.0, 8):
            pts.append(H2Point(float(x), float(y)))
    return pts


def koubi_find(S: GeneratingSet, grid=None) -> KoubiResult:
    """Hyperbolic product of length <= 2 when the sampled lambda-minimum exceeds 100δ."""
    group = S.group
    thr = 100.0 * group.model.delta
    grid = grid if grid is not None else _koubi_grid(group)
    lam = [lambda_(x, S) for x in grid]
    i = int(np.argmin(lam))
    lmin = float(lam[i])
    if not lmin > thr:
        return KoubiResult(None, "hypothesis-failed", lmin, thr, grid[i])
    letters = S.letters()
    for sphere in spheres(group, letters, 2):
        for val, path in sphere:
            if path and _is_hyperbolic_value(group, val):
                g = GroupElement(group, path_word(letters, path))
                return KoubiResult(g, "found", lmin, thr, grid[i], path_name(letters, path))
    return KoubiResult(None, "no-short-hyperbolic", lmin, thr, grid[i])


@dataclass
class HyperbolicWitness:
    element: GroupElement
    radius: int
    label: str
    checked: list = field(default_factory=list)  # elements classified per radius

    def to_json(self):
        cl = classify(self.element)
        return {"element": self.element.to_json(), "label": self.label, "radius": self.radius,
                "classification": cl.to_json(), "sphere_sizes_checked": self.checked}


def find_hyperbolic_in_ball(S: GeneratingSet, n_max: int, cap: int = 10_000_000) -> HyperbolicWitness:
    """Smallest n <= n_max with a hyperbolic element in S(n); shortlex-first witness."""
    if n_max < 1:
        raise PreconditionError("n_max must be at least 1")
    group = S.group
    letters = S.letters()
    checked = []
    for n, sphere in enumerate(spheres(group, letters, n_max, cap)):
        checked.append(len(sphere))
        for val, path in sphere:
            if path and _is_hyperbolic_value(group, val):
                g = GroupElement(group, path_word(letters, path))
                return HyperbolicWitness(g, n, path_name(letters, path), checked)
    raise NotFound(f"no hyperbolic element of length <= {n_max} "
                   f"(searched {sum(checked)} elements)")


@dataclass
class BoostResult:
    element: GroupElement
    k: int
    point: object
    param: float
    displacement: float
    threshold: float

    def to_json(self):
        return {"element": self.element.to_json(), "k": self.k, "axis_param": self.param,
                "point": str(self.point), "displacement": self.displacement,
                "threshold": self.threshold}


def locate_axis_point(g: GroupElement, sysm=None, window: float | None = None):
    """First axis point in the truncated space, sweeping outward from the base point."""
    ax = axis(g)
    model = g.group.model
    if model.kind == "tree":
        return ax.point(0), 0.0
    step = model.delta
    window = 500.0 * model.delta if window is None else window
    n = int(window / step)
    for j in range(n + 1):
        for t in ((0.0,) if j == 0 else (j * step, -j * step)):
            p = ax.point(t)
            if truncated_contains(sysm, p):
                return p, t
    raise PreconditionError("no point of the axis avoids the horoballs in the sweep window")


def boost_displacement(g: GroupElement, k1: int, sysm=None) -> BoostResult:
    """Smallest power k <= k1 whose displacement at a located axis point reaches 200δ."""
    cl = classify(g)
    if cl.kind != "hyperbolic":
        raise ClassificationError(f"{g.name} is {cl.kind}, not hyperbolic")
    model = g.group.model
    thr = 200.0 * model.delta
    p, t = locate_axis_point(g, sysm)
    ell = cl.translation_length
    for k in range(1, k1 + 1):
        if model.kind == "tree":
            d = displacement(g.power(k), p)
        else:
            # on the axis the power translates the frame parameter by k*ell
            d = float(fermi_distance(t, 0.0, t + k * ell, 0.0))
        if d >= thr:
            return BoostResult(g.power(k), k, p, t, d, thr)
    raise K1TooSmall(f"no power k <= k1 = {k1} of {g.name} moves the axis point by {thr:g}")


def virtually_cyclic_detect(S: GeneratingSet, s: GroupElement) -> bool:
    """True iff every generator preserves the endpoint pair of s."""
    return all(endpoint_relation(s, h) == "same" for h in S.elements)


# ------------------------------------------------------------------- n0


@dataclass
class ConstantsLedger:
    group: str
    delta: float
    k1: int | None
    k1_certified: bool
    a: float
    basepoint: object
    thresholds: dict
    A_size: int = 0
    A_certified: bool = False
    A_radius: int = 0
    g0: GroupElement | None = None
    g0_displacement: float | None = None
    g0_method: str = ""
    n0: int | None = None
    n0_status: str = "uncertified"
    n0_bounds: tuple = (None, None)
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "group": self.group,
            "delta": self.delta,
            "k1": self.k1,
            "k1_certified": self.k1_certified,
            "a": self.a,
            "basepoint": str(self.basepoint),
            "thresholds": self.thresholds,
            "A_size": self.A_size,
            "A_certified": self.A_certified,
            "A_radius": self.A_radius,
            "g0": self.g0.to_json() if self.g0 is not None else None,
            "g0_displacement": self.g0_displacement,
            "g0_method": self.g0_method,
            "n0": self.n0,
            "n0_status": self.n0_status,
            "n0_bounds": list(self.n0_bounds),
            "notes": self.notes,
        }


def compact_sample(group: Group):
    """A fixed compact sample K, its base point p and diameter a."""
    if group.model.kind == "tree":
        return [TreePoint("")], TreePoint(""), 0.0
    if group.kind == "rotation":
        return [H2Point(0.0, 1.0)], H2Point(0.0, 1.0), 0.0
    xs = [-0.5, 0.0, 0.5]
    pts = []
    for x in xs:
        lo = math.sqrt(1.0 - x * x)
        for y in (lo, 0.5 * (lo + 2.0), 2.0):
            pts.append(H2Point(x, y))
    a = max(distance(p, q) for p in pts for q in pts)
    return pts, H2Point(0.0, 1.0), a


def _subset_generates(group: Group, subset_words, radius: int = 4, cap: int = 50_000) -> bool:
    S = generating_set(group, list(subset_words))
    return _reaches_generators(S, radius, cap)


def _subset_distance(group: Group, subset_words, target, max_radius: int, cap: int):
    """(exact distance or None, radius fully searched)."""
    S = GeneratingSet(group, [GroupElement(group, w) for w in subset_words],
                      [f"s{i}" for i in range(len(subset_words))])
    reached = 0
    try:
        for n, sphere in enumerate(spheres(group, S.letters(), max_radius, cap, paths=False)):
            reached = n
            if any(val == target for val, _ in sphere):
                return n, n
    except CapExceeded:
        pass
    return None, reached


def compute_n0(group: Group, cap: int = 6, sysm=None, k1: K1Result | None = None,
               subset_radius: int = 30, subset_cap: int = 200_000,
               raise_uncertified: bool = True) -> ConstantsLedger:
    """Desk-scale audit of the constants n0, a, A and g0."""
    delta = group.model.delta
    K, p, a = compact_sample(group)
    thr = 2.0 * a + 100.0 * delta
    ledger = ConstantsLedger(
        group.id, delta, k1.k1 if k1 else None, bool(k1 and k1.certified), a, p,
        {"100delta": 100.0 * delta, "200delta": 200.0 * delta, "20delta": 20.0 * delta,
         "A_threshold": thr, "g0_threshold": thr},
    )
    letters = letters_for(group)
    A_words = []
    radius = 0
    g0 = None
    try:
        for n, sphere in enumerate(spheres(group, letters, cap, 10_000_000)):
            radius = n
            d = np.array([_displacements(group, val, [p])[0] for val, _ in sphere])
            for (val, path), dv in zip(sphere, d):
                if dv <= thr:
                    A_words.append(path_word(letters, path))
                elif g0 is None:
                    g0 = (GroupElement(group, path_word(letters, path)), float(dv))
            if n >= 1 and d.min() > thr:
                ledger.A_certified = True
                break
        else:
            ledger.A_certified = radius < cap
    except CapExceeded:
        pass
    ledger.A_size = len(A_words)
    ledger.A_radius = radius
    if g0 is not None:
        ledger.g0, ledger.g0_displacement = g0
        ledger.g0_method = "bfs"
    elif group.model.kind == "h2" and group.kind == "matrix":
        ledger.g0, ledger.g0_displacement = _g0_by_powers(group, p, thr)
        ledger.g0_method = "powers of the shortest hyperbolic element"
    if not ledger.A_certified:
        ledger.n0_status = "uncertified"
        if raise_uncertified:
            raise N0Uncertified(f"A not certified complete within word length {cap}", partial=ledger)
        ledger.notes.append("A enumerated only up to the cap")
    nontrivial = [w for w in A_words if w]
    if not nontrivial:
        ledger.n0_status = "degenerate"
        ledger.notes.append("A contains only the identity; the pipeline searches balls directly")
        return ledger
    if ledger.g0 is None:
        ledger.notes.append("no g0 found")
        return ledger
    target = group.realize(ledger.g0.word)
    exact_family = len(nontrivial) <= 12
    if exact_family:
        family = [c for r in range(1, len(nontrivial) + 1) for c in combinations(nontrivial, r)]
    else:
        family = [(w,) for w in nontrivial] + [tuple(nontrivial)]
    best = None
    lower = None
    complete = True
    for subset in family:
        if not _subset_generates(group, subset):
            continue
        dist, reached = _subset_distance(group, subset, target, subset_radius, subset_cap)
        if dist is None:
            complete = False
            lower = reached + 1 if lower is None else max(lower, reached + 1)
            continue
        best = dist if best is None else max(best, dist)
    ledger.n0 = best
    ledger.n0_bounds = (max(filter(None, [best, lower]), default=None), None if not complete else best)
    if best is None and lower is None:
        ledger.n0_status = "no-generating-subset"
    elif not complete:
        ledger.n0_status = "uncertified"
    else:
        ledger.n0_status = "exact" if exact_family and ledger.A_certified else "heuristic"
    return ledger


def _g0_by_powers(group: Group, p, thr: float):
    S = generating_set(group)
    wit = find_hyperbolic_in_ball(S, 12)
    h = wit.element
    ax = axis(h)
    s, r = ax.fermi(p)
    ell = classify(h).translation_length
    k = 1
    while True:
        d = float(fermi_distance(s, r, s + k * ell, r))
        if d > thr:
            return h.power(k), d
        k += 1
