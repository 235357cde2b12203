import subprocess
import sys

import pytest

from varcross.catalog import CatalogError, load_catalog
from varcross.harness import (SearchSpec, count_monoids_naive,
                              count_monoids_up_to_isomorphism,
                              enumerate_monoid_tables, evaluate_claim,
                              parse_claim, parse_manifest,
                              parse_monoid_expression, run_manifest,
                              witness_search)
from varcross.identities import family_identity, parse_identity
from varcross.monoids import FiniteMonoid
from varcross.satisfaction import satisfies


@pytest.fixture(scope="module")
def cat():
    return load_catalog()


def test_expressions(cat):
    assert parse_monoid_expression("A0", cat).order == 5
    assert parse_monoid_expression("dual(E)", cat).order == 4
    assert parse_monoid_expression("A0 x Q", cat).order == 30
    assert parse_monoid_expression("rees(x h x y t y)", cat).order == 21
    assert parse_monoid_expression("dual(A0 x Q)", cat).order == 30
    assert parse_monoid_expression(
        "quotient(K, classes=[[ba,ba2],[ea,ea2]])", cat).order == 10
    with pytest.raises(CatalogError):
        parse_monoid_expression("A00", cat)
    with pytest.raises(ValueError):
        parse_monoid_expression("A0 Q", cat)


def test_claim_parsing():
    claim = parse_claim('satisfies A0 x Q "x y = y x"')
    assert claim.subject == "A0 x Q" and claim.object == "x y = y x"
    claim = parse_claim("fails Rqx a1")
    assert claim.object == "a1"
    claim = parse_claim("member H3 basis.H3")
    assert claim.object == "H3"
    claim = parse_claim("iso A0 dual(A0)")
    assert claim.subject == "A0" and claim.object == "dual(A0)"
    claim = parse_claim("not-iso dual(E) E")
    assert claim.subject == "dual(E)" and claim.object == "E"
    with pytest.raises(ValueError):
        parse_claim("becomes A0 Q")
    with pytest.raises(ValueError):
        parse_claim("member H3 H3")


def test_claim_evaluation_details(cat):
    res = evaluate_claim(parse_claim('fails Q "x h x t x = x h t x"'), cat)
    assert res.verdict == "pass" and "gives" in res.detail
    res = evaluate_claim(parse_claim("member H3 basis.H2"), cat)
    assert res.verdict == "fail" and "r2" in res.detail
    res = evaluate_claim(parse_claim('satisfies Zilch "x = x"'), cat)
    assert res.verdict == "error"


MANIFEST_OK = """
node A 0 0
node B 0 1
edge A B
satisfies A0 "x h x t x = x h t x"
jtrivial A0
note "nothing to see"
"""


def test_manifest_exit_codes(cat):
    report = run_manifest(parse_manifest(MANIFEST_OK, "ok"), cat)
    assert report.exit_code == 0
    failing = MANIFEST_OK + 'satisfies A0 "x^2 y^2 = y^2 x^2"\n'
    report = run_manifest(parse_manifest(failing, "bad"), cat)
    assert report.exit_code == 1
    slow = "satisfies K r3\n"
    report = run_manifest(parse_manifest(slow, "slow"), cat, budget=10)
    assert report.exit_code == 2
    broken = "jtrivial NoSuchThing\n"
    report = run_manifest(parse_manifest(broken, "broken"), cat)
    assert report.exit_code == 3


def test_reports_are_deterministic_across_workers(cat):
    text = MANIFEST_OK + 'fails A0 "x^2 y^2 = y^2 x^2"\nmember Q basis.Q\n' * 3
    manifest = parse_manifest(text, "d")
    lines1 = run_manifest(manifest, cat, jobs=1).record_lines()
    lines4 = run_manifest(manifest, cat, jobs=4).record_lines()
    assert lines1 == lines4
    assert lines1 == run_manifest(manifest, cat, jobs=1).record_lines()


def test_record_format(cat):
    report = run_manifest(parse_manifest(MANIFEST_OK, "fmt"), cat)
    first = report.record_lines()[0].split("\t")
    assert first[0] == "fmt:001"
    assert first[1] == "pass"
    assert first[2] == "0"  # millis suppressed for reproducibility


def test_enumeration_counts():
    assert count_monoids_up_to_isomorphism(1) == 1
    assert count_monoids_up_to_isomorphism(2) == 2
    assert count_monoids_up_to_isomorphism(3) == 7
    assert count_monoids_up_to_isomorphism(4) == 35


def test_enumeration_cross_checked_by_naive_oracle():
    assert count_monoids_naive(3) == count_monoids_up_to_isomorphism(3) == 7
    assert count_monoids_naive(4) == count_monoids_up_to_isomorphism(4) == 35


def test_enumerated_tables_are_monoids():
    for table in enumerate_monoid_tables(3):
        FiniteMonoid(table, 0)  # validates identity and associativity


def test_witness_search_finds_small_noncommutative():
    spec = SearchSpec([family_identity("a2"), family_identity("c2")],
                      [parse_identity("x y = y x")], max_order=5)
    outcome = witness_search(spec)
    assert outcome.monoid is not None
    assert outcome.monoid.order <= 5
    assert satisfies(outcome.monoid, family_identity("a2")).verdict
    assert satisfies(outcome.monoid, family_identity("c2")).verdict
    assert satisfies(outcome.monoid, parse_identity("x y = y x")).verdict is False


def test_witness_search_unsatisfiable():
    spec = SearchSpec([], [parse_identity("x = x")], max_order=4)
    outcome = witness_search(spec)
    assert outcome.monoid is None and not outcome.inconclusive


def test_cli_end_to_end(tmp_path):
    def run(*args):
        return subprocess.run([sys.executable, "-m", "varcross.cli", *args],
                              capture_output=True, text=True)

    done = run("selfcheck")
    assert done.returncode == 0, done.stdout + done.stderr

    done = run("manifest", "fig-a0vq", "--out", str(tmp_path / "rep"))
    assert done.returncode == 0
    assert (tmp_path / "rep" / "fig-a0vq.records").exists()
    assert (tmp_path / "rep" / "fig-a0vq.png").exists()

    done = run("proof", "head-swap")
    assert done.returncode == 0 and "VALID" in done.stdout

    done = run("probe", "props", "B")
    assert done.returncode == 0 and "jtrivial False" in done.stdout

    done = run("probe", "iso", "rees(x)", "x y")
    assert done.returncode == 0 and "not-isoterm" in done.stdout

    satisfy = tmp_path / "must.basis"
    satisfy.write_text("a2: x^3 = x^2\nc2: (x y)^2 = (y x)^2\n")
    fail = tmp_path / "avoid.basis"
    fail.write_text("com: x y = y x\n")
    done = run("search", "--satisfy", str(satisfy), "--fail", str(fail),
               "--max-order", "5")
    assert done.returncode == 0 and "witness of order" in done.stdout

    done = run("manifest", "no-such-manifest-anywhere")
    assert done.returncode == 3
