"""Acceptance criteria 1-9, each printing one PASS/FAIL line."""

import io
import json
import time

import pytest

from hypgrowth.cli import run
from hypgrowth.horoballs import ford_system, invariance_check
from hypgrowth.isometry import classify, element
from hypgrowth.pingpong import algebraic_free_oracle, build_table, certify_free, check_nesting
from hypgrowth.presets import get_preset
from hypgrowth.search import find_hyperbolic_in_ball, generating_set
from hypgrowth.verify import SUITES, TrialConfig, run_suite


def verdict(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv) + ["--deterministic"], out=buf)
    return code, buf.getvalue()


def test_criterion_1_free_growth_exact(capsys):
    t0 = time.perf_counter()
    code, text = cli("growth", "--group", "free2", "--radius", "12")
    elapsed = time.perf_counter() - t0
    counts = json.loads(text)["result"]["counts"]
    ok = code == 0 and counts == [2 * 3 ** k - 1 for k in range(13)] and elapsed < 10
    verdict(capsys, 1, ok, f"beta(12) = {counts[-1]}, {elapsed:.2f} s")


def test_criterion_2_bound_sandwich(capsys):
    code, text = cli("growth", "--group", "free2", "--radius", "12")
    res = json.loads(text)["result"]
    ok = code == 0 and 3.0 <= res["upper"] <= 3.2 and res["lower_bound"] == 3.0
    verdict(capsys, 2, ok, f"upper {res['upper']:.6f}, lower {res['lower_bound']}")


def test_criterion_3_sanov_oracle(capsys):
    sanov = get_preset("sanov")
    t0 = time.perf_counter()
    rep = algebraic_free_oracle(element(sanov, "a"), element(sanov, "b"), 10)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and rep.mode == "exact" and elapsed < 30
    verdict(capsys, 3, ok, f"{rep.words_checked} words up to length 10, {elapsed:.2f} s")


def test_criterion_4_modular_witness(capsys):
    S = generating_set(get_preset("modular"))
    wit = find_hyperbolic_in_ball(S, 6)
    trace = abs(int(classify(wit.element).to_json()["trace"]))
    # independent exhaustive pass: every word of length <= 3 in S, T, T^-1
    mod = get_preset("modular")
    short = [""]
    for _ in range(3):
        short = short + [w + c for w in short for c in "STt" if len(w + c) <= 3]
    none_short = all(classify(element(mod, w)).kind != "hyperbolic" for w in set(short) if w)
    example = classify(element(mod, "TTST"))
    ok = wit.radius == 4 and trace == 3 and none_short and example.kind == "hyperbolic"
    verdict(capsys, 4, ok, f"witness {wit.element.name} at length {wit.radius}, |trace| {trace}")


def test_criterion_5_lemma_suites(capsys):
    bad = []
    for model in ("h2", "tree"):
        for seed in range(1, 6):
            cfg = TrialConfig(model, seed=seed, trials=10_000, tolerance=1e-6, delta=1.0)
            for lemma in SUITES:
                rep = run_suite(lemma, cfg)
                if rep.failed or rep.passed + rep.skipped != 10_000:
                    bad.append((model, seed, lemma, rep.failed))
                if model == "tree" and rep.worst_margin not in (None, 0.0):
                    bad.append((model, seed, lemma, rep.worst_margin))
    verdict(capsys, 5, not bad, "all suites, seeds 1-5, 10^4 trials" if not bad else f"failures {bad}")


def test_criterion_6_modular_certificate(capsys):
    args = ("certify", "--group", "modular", "--gens", "S,T", "--seed", "0")
    code1, text1 = cli(*args)
    code2, text2 = cli(*args)
    res = json.loads(text1)["result"]
    oracle = res["free_pair"]["algebraic_transcript"]
    ok = (code1 == 0 and text1 == text2 and res["kind"] == "uniform-growth-certificate"
          and oracle["passed"] and oracle["max_len"] == 8
          and res["lower_bound"] == pytest.approx(3 ** (1 / res["ell"]), rel=1e-15)
          and res["lower_bound"] > 1)
    verdict(capsys, 6, ok, f"ell {res['ell']}, lower bound {res['lower_bound']!r}")


def test_criterion_7_ford_system(capsys):
    sysm = ford_system(3, 2)
    disjoint = all(ok for *_, ok, _ in sysm.pairwise())
    mod = get_preset("modular")
    inv = invariance_check(sysm, [element(mod, "S"), element(mod, "T")])
    ok = disjoint and inv.passed and len(inv.checked) > 0
    verdict(capsys, 7, ok, f"{len(sysm.pairwise())} pairs disjoint, {len(inv.checked)} images checked")


def test_criterion_8_virtually_cyclic(capsys):
    code, text = cli("certify", "--group", "cyclic", "--gens", "t")
    res = json.loads(text)["result"]
    ok = code == 0 and res["kind"] == "virtually-cyclic" and set(res["dichotomy"].values()) == {"same"}
    verdict(capsys, 8, ok, f"dichotomy {res['dichotomy']}")


def test_criterion_9_adversarial(capsys):
    mod = get_preset("modular")
    table = build_table(element(mod, "(TTST)^104"), element(mod, "T"), 2)
    c1, c2 = sum(table.B1) / 2, sum(table.B2) / 2
    nest = check_nesting(table.with_B((c1, c1), (c2, c2)))
    try:
        certify_free(element(mod, "T"), element(mod, "TT"), 1)
        relation = None
    except Exception as exc:  # T is parabolic, so the pipeline refuses it
        relation = exc
    rep = algebraic_free_oracle(element(mod, "T"), element(mod, "TT"), 8)
    code, _ = cli("pingpong", "--group", "modular", "--g1", "T", "--g2", "TT")
    ok = (not nest.passed and nest.witness is not None and not rep.passed
          and rep.witness is not None and relation is not None and code == 1)
    verdict(capsys, 9, ok, f"nesting witness {nest.witness['kind'] if nest.witness else None}, "
                           f"relation {rep.witness}")
