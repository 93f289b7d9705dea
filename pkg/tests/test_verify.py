import pytest

from hypgrowth.verify import SUITES, TrialConfig, calibrate_delta, run_all, run_suite


@pytest.mark.parametrize("lemma", SUITES)
def test_h2_suites_pass_small_run(lemma):
    rep = run_suite(lemma, TrialConfig("h2", seed=3, trials=300))
    assert rep.failed == 0
    assert rep.passed + rep.skipped == 300


@pytest.mark.parametrize("lemma", SUITES)
def test_tree_suites_are_exact(lemma):
    rep = run_suite(lemma, TrialConfig("tree", seed=3, trials=300))
    assert rep.failed == 0
    assert rep.bound == 0.0


def test_same_seed_same_report():
    a = run_suite("thin", TrialConfig("h2", seed=7, trials=200)).to_json()
    b = run_suite("thin", TrialConfig("h2", seed=7, trials=200)).to_json()
    assert a == b


def test_seed_changes_samples():
    a = run_suite("thin", TrialConfig("h2", seed=1, trials=200))
    b = run_suite("thin", TrialConfig("h2", seed=2, trials=200))
    assert a.worst_observed != b.worst_observed


def test_zero_trials():
    rep = run_suite("or1", TrialConfig("h2", trials=0))
    assert rep.trials == 0 and rep.worst_margin is None


def test_workers_do_not_change_results():
    one = run_suite("or1", TrialConfig("h2", seed=5, trials=2500, workers=1)).to_json()
    two = run_suite("or1", TrialConfig("h2", seed=5, trials=2500, workers=2)).to_json()
    assert one == two


def test_tree_config_forces_exact_tolerance():
    cfg = TrialConfig("tree", delta=3.0, tolerance=0.1)
    assert cfg.delta == 0.0 and cfg.tolerance == 0.0


def test_unknown_model():
    with pytest.raises(ValueError):
        TrialConfig("sphere")


def test_calibrated_delta_within_run_delta():
    out = run_all(TrialConfig("h2", seed=0, trials=200), ("thin", "hausdorff"))
    assert out["calibrated_delta"] is not None
    assert 0.0 <= out["calibrated_delta"] <= 1.0 + 1e-6
    assert calibrate_delta([]) is None
