"""Ball counts, growth-rate bounds and the end-to-end uniform growth certificate."""

from __future__ import annotations

import csv
import io
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import product

from .ball import spheres
from .errors import CapExceeded, HypGrowthError, PreconditionError
from .horoballs import compute_k1, default_h0, ford_system
from .isometry import GroupElement, classify
from .pingpong import certify_free, fixed_point_dichotomy
from .presets import Group
from .search import (
    GeneratingSet,
    boost_displacement,
    compute_n0,
    find_hyperbolic_in_ball,
    generating_set,
)

DEFAULT_CAP = 10_000_000


@dataclass
class GrowthTable:
    group: str
    generators: list
    counts: list  # beta(k), k = 0..K
    lower_bound: float | None = None
    free_pair: tuple | None = None  # labels of a free basis pair inside S(ell)
    ell: int | None = None
    complete: bool = True

    @property
    def K(self) -> int:
        return len(self.counts) - 1

    @property
    def upper_bounds(self) -> list:
        """beta(k)^(1/k) for k >= 1 (None at k = 0)."""
        return [None] + [b ** (1.0 / k) for k, b in enumerate(self.counts) if k >= 1]

    def submultiplicative(self) -> bool:
        c = self.counts
        return all(c[m + n] <= c[m] * c[n] for m in range(len(c)) for n in range(len(c) - m))

    def to_json(self):
        return {
            "group": self.group,
            "generators": self.generators,
            "K": self.K,
            "complete": self.complete,
            "counts": self.counts,
            "upper_bounds": self.upper_bounds,
            "upper": omega_bounds(self)[0] if self.K >= 1 else None,
            "lower_bound": self.lower_bound,
            "free_pair": list(self.free_pair) if self.free_pair else None,
            "ell": self.ell,
            "submultiplicative": self.submultiplicative(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "beta", "upper_bound"])
        for k, (b, u) in enumerate(zip(self.counts, self.upper_bounds)):
            w.writerow([k, b, "" if u is None else repr(u)])
        return buf.getvalue()


def direct_free_pair(S: GeneratingSet):
    """Two letters of S forming part of the preset's free basis, or None."""
    if not S.group.free_basis:
        return None
    found = []
    for e, lab in zip(S.elements, S.labels):
        w = e.word
        if len(w) == 1 and isinstance(w[0][0], int) and abs(w[0][1]) == 1:
            if w[0][0] not in [i for i, _ in found]:
                found.append((w[0][0], lab))
    if len(found) < 2:
        return None
    return (found[0][1], found[1][1])


def beta(S: GeneratingSet, K: int, cap: int = DEFAULT_CAP) -> GrowthTable:
    """Exact ball counts beta(k) for k = 0..K by breadth-first enumeration."""
    if K < 0:
        raise PreconditionError("K must be non-negative")
    counts = []
    total = 0
    gens = [e.name for e in S.elements]
    try:
        for sphere in spheres(S.group, S.letters(), K, cap, paths=False):
            total += len(sphere)
            counts.append(total)
    except CapExceeded as exc:
        partial = GrowthTable(S.group.id, gens, counts, complete=False)
        raise CapExceeded(f"{exc}; completed k = 0..{len(counts) - 1}", partial=partial) from exc
    # a finite group stops early: the ball is then constant
    counts += [total] * (K + 1 - len(counts))
    table = GrowthTable(S.group.id, gens, counts)
    pair = direct_free_pair(S)
    if pair is not None:
        table.free_pair, table.ell, table.lower_bound = pair, 1, 3.0
    return table


def omega_bounds(table: GrowthTable):
    """(upper, lower): Fekete minimum of beta(k)^(1/k) and the free-pair bound, if any."""
    if table.K < 1:
        raise PreconditionError("need at least beta(1) for an upper bound")
    upper = min(u for u in table.upper_bounds if u is not None)
    return upper, table.lower_bound


def free_pair_lower_bound(ell: int) -> float:
    return 3.0 ** (1.0 / ell)


def free_pair_sphere_count(g1: GroupElement, g2: GroupElement, n: int) -> int:
    """Distinct elements among the reduced words of length exactly n in g1, g2."""
    group = g1.group
    vals = [g1.realization, group.inv(g1.realization), g2.realization, group.inv(g2.realization)]
    inv_of = (1, 0, 3, 2)
    seen = set()
    for path in product(range(4), repeat=n):
        if any(path[i + 1] == inv_of[path[i]] for i in range(n - 1)):
            continue
        x = group.identity
        for k in path:
            x = group.mul(x, vals[k])
        seen.add(x)
    return len(seen)


# ----------------------------------------------------------------- pipeline


@dataclass
class VirtuallyCyclicReport:
    group: str
    generators: list
    witness: dict
    dichotomy: dict  # generator label -> "same"

    def to_json(self):
        return {"kind": "virtually-cyclic", "group": self.group, "generators": self.generators,
                "witness": self.witness, "dichotomy": self.dichotomy,
                "conclusion": "every generator preserves the endpoint pair of the witness axis"}


@dataclass
class UniformGrowthCertificate:
    group: str
    generators: list
    witness: dict
    boost: dict
    dichotomy: dict
    gamma: str
    free: object  # FreeCertificate
    ell: int
    pipeline_lower_bound: float
    lower_bound: float
    log_lower_bound: float
    direct_pair: tuple | None
    constants: dict
    caveats: list = field(default_factory=list)

    def to_json(self):
        return {
            "kind": "uniform-growth-certificate",
            "group": self.group,
            "generators": self.generators,
            "witness": self.witness,
            "boost": self.boost,
            "dichotomy": self.dichotomy,
            "gamma": self.gamma,
            "free_pair": self.free.to_json(),
            "ell": self.ell,
            "pipeline_lower_bound": self.pipeline_lower_bound,
            "lower_bound": self.lower_bound,
            "log_lower_bound": self.log_lower_bound,
            "direct_pair": list(self.direct_pair) if self.direct_pair else None,
            "constants": self.constants,
            "caveats": self.caveats,
        }


@contextmanager
def _stage(name):
    """Prefix errors raised inside a pipeline stage with the stage name."""
    try:
        yield
    except HypGrowthError as exc:
        if not getattr(exc, "stage", None):
            exc.stage = name
            if exc.args:
                exc.args = (f"[{name}] {exc.args[0]}",) + exc.args[1:]
        raise


def uniform_growth_certificate(group: Group, S: GeneratingSet | None = None, n_max: int = 12,
                               k1_cap: int = 12, oracle_len: int = 8, n_range: int = 5,
                               workers: int = 1, with_n0: bool = True):
    """Run the whole chain: witness, boost, dichotomy scan, free pair, lower bound."""
    S = S if S is not None else generating_set(group)
    gens = [e.name for e in S.elements]
    caveats = []
    with _stage("search"):
        wit = find_hyperbolic_in_ball(S, n_max)
    sysm = None
    if group.cusped:
        with _stage("horoballs"):
            sysm = ford_system(3, default_h0(group.model.delta))
    with _stage("k1"):
        k1res = compute_k1(group, sysm, cap=k1_cap, raise_uncertified=False)
    if not k1res.certified:
        caveats.append("k1-uncertified")
    with _stage("boost"):
        boost = boost_displacement(wit.element, k1res.k1, sysm)
    s = boost.element
    dichotomy = {}
    gamma = None
    gamma_label = None
    with _stage("dichotomy"):
        for e, lab in zip(S.elements, S.labels):
            rel = fixed_point_dichotomy(s, e)
            dichotomy[lab] = rel
            if rel == "disjoint" and gamma is None:
                gamma, gamma_label = e, lab
    if gamma is None:
        return VirtuallyCyclicReport(group.id, gens, wit.to_json(), dichotomy)
    with _stage("pingpong"):
        free = certify_free(s, gamma, k1res.k1, oracle_len, n_range, workers)
    caveats += free.caveats
    # g1 = s^(10 k1) with s = w^k and |w|_S = radius; g2 = gamma g1 gamma^-1
    ell = wit.radius * boost.k * 10 * k1res.k1 + 2
    pipeline_lower = free_pair_lower_bound(ell)
    direct = direct_free_pair(S)
    lower = 3.0 if direct is not None else pipeline_lower
    constants = {"delta": group.model.delta, "k1": k1res.to_json(),
                 "thresholds": {"200delta": 200.0 * group.model.delta,
                                "20delta": 20.0 * group.model.delta}}
    if sysm is not None:
        constants["horoballs"] = {"Q": sysm.Q, "h0": float(sysm.h0),
                                  "nominal_separation": sysm.separation}
    if with_n0:
        with _stage("n0"):
            constants["n0"] = compute_n0(group, sysm=sysm, k1=k1res,
                                         raise_uncertified=False).to_json()
    cl = classify(wit.element)
    wjson = wit.to_json()
    wjson["translation_length"] = cl.translation_length
    return UniformGrowthCertificate(
        group.id, gens, wjson, boost.to_json(), dichotomy, gamma_label, free, ell,
        pipeline_lower, lower, math.log(lower), direct, constants, caveats)
