import io
import json

import pytest

from hypgrowth import report
from hypgrowth.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv) + ["--deterministic"], out=buf)
    return code, buf.getvalue()


def doc_of(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_classify():
    code, doc = doc_of("classify", "--group", "modular", "--word", "TTST")
    assert code == 0
    assert doc["result"]["classification"]["kind"] == "hyperbolic"
    assert doc["result"]["classification"]["trace"] == "3"


def test_growth_csv():
    code, text = call("growth", "--group", "free2", "--radius", "3", "--format", "csv")
    assert code == 0
    assert text.splitlines()[-1].startswith("3,53,")


def test_growth_cap_exit_code():
    code, doc = doc_of("growth", "--group", "free2", "--radius", "10", "--cap", "50")
    assert code == 3 and doc["status"] == "cap-exceeded"
    assert doc["error"]["partial"]["complete"] is False


def test_pingpong_relation_exit_code():
    code, doc = doc_of("pingpong", "--group", "modular", "--g1", "T", "--g2", "TT")
    assert code == 1
    assert doc["error"]["type"] == "RelationFound"
    assert doc["error"]["witness"]


def test_certify_cyclic():
    code, doc = doc_of("certify", "--group", "cyclic", "--gens", "t")
    assert code == 0
    assert doc["result"]["kind"] == "virtually-cyclic"


def test_certify_finite_not_found():
    code, doc = doc_of("certify", "--group", "finite-cyclic(5)", "--max-radius", "4")
    assert code == 3 and doc["status"] == "not-found"
    assert doc["error"]["stage"] == "search"


def test_horoballs():
    code, doc = doc_of("horoballs", "--Q", "3", "--h0", "2")
    assert code == 0
    assert doc["result"]["system"]["all_interiors_disjoint"]
    assert doc["result"]["invariance"]["passed"]


def test_horoballs_bad_h0():
    code, doc = doc_of("horoballs", "--Q", "3", "--h0", "1/2")
    assert code != 0


def test_verify_lemmas_tree():
    code, doc = doc_of("verify-lemmas", "--model", "tree", "--trials", "50")
    assert code == 0
    assert all(r["failed"] == 0 for r in doc["result"]["reports"])


def test_constants_free2():
    code, doc = doc_of("constants", "--group", "free2")
    assert code == 0
    assert doc["result"]["k1_certified"]


@pytest.mark.parametrize("argv", [
    ["classify", "--group", "nope", "--word", "a"],
    ["growth", "--group", "custom", "--matrices", "2,0,0,2", "--radius", "2"],
    ["growth", "--group", "free2"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    code, _ = call(*argv)
    assert code == 2


def test_csv_only_for_growth():
    code, _ = call("classify", "--group", "free2", "--word", "a", "--format", "csv")
    assert code == 2


def test_table_format():
    code, text = call("growth", "--group", "free2", "--radius", "2", "--format", "table")
    assert code == 0 and "upper bound on omega" in text


def test_deterministic_output_is_byte_identical():
    args = ("certify", "--group", "free2", "--skip-n0")
    assert call(*args) == call(*args)


def test_documents_validate_against_schema():
    for argv in (["growth", "--group", "modular", "--radius", "4"],
                 ["find-hyperbolic", "--group", "modular"],
                 ["pingpong", "--group", "free2", "--s", "a", "--gamma", "b", "--k1", "1"]):
        code, doc = doc_of(*argv)
        assert code == 0
        report.validate(doc)


def test_timestamps_without_deterministic_flag():
    buf = io.StringIO()
    run(["classify", "--group", "free2", "--word", "a"], out=buf)
    doc = json.loads(buf.getvalue())
    assert "timestamp" in doc and "elapsed_seconds" in doc
