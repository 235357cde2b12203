import re
import time
from importlib import resources

import pytest

from varcross.catalog import CatalogError, load_catalog, selfcheck_report
from varcross.harness import parse_manifest
from varcross.identities import (dualize, family_identity, parse_identity,
                                 parse_proof_script, verify_proof_script)
from varcross.monoids import (ClosureError, MonoidError, close_presentation,
                              find_isomorphism, parse_monoid_file)
from varcross.satisfaction import satisfies, satisfies_all


@pytest.fixture(scope="module")
def cat():
    return load_catalog()


def _data_text(kind, name):
    return resources.files("varcross").joinpath("data", kind, name).read_text()


def _all_data(kind, suffix):
    folder = resources.files("varcross").joinpath("data", kind)
    return {item.name: item.read_text()
            for item in folder.iterdir() if item.name.endswith(suffix)}


def test_lookup_examples(cat):
    entry = cat.lookup("A0")
    assert entry.kind == "monoid" and entry.payload.order == 5
    entry = cat.lookup("basis.L")
    assert entry.kind == "basis" and len(entry.payload) == 4
    entry = cat.lookup("a2")
    assert entry.kind == "family"
    with pytest.raises(CatalogError, match="did you mean"):
        cat.lookup("A00")
    with pytest.raises(CatalogError):
        cat.lookup("nope")


def test_selfcheck_passes_quickly(cat):
    started = time.monotonic()
    ok, lines = load_catalog().selfcheck()
    elapsed = time.monotonic() - started
    assert ok, [line for line in lines if line.startswith("FAIL")]
    assert elapsed < 5.0


def test_catalog_orders(cat):
    expected = {"B": 6, "A0": 5, "B0": 5, "E": 4, "Q": 6, "F1": 6, "H3": 7,
                "K": 12, "Kmod": 10, "Rqxy": 5, "Rqxhx": 7, "Rq1": 2,
                "Rqx": 3, "Rq_xhxyty": 21, "Rq_x2": 15, "Rq_x3": 27}
    for name, order in expected.items():
        assert cat.monoid(name).order == order, name


def test_corrupt_table_is_rejected():
    text = _data_text("monoids", "A0.mon")
    rows = text.splitlines()
    # break one product inside the table block
    table_at = rows.index("table")
    broken = rows[table_at + 2].split()
    broken[2] = "2"
    rows[table_at + 2] = " ".join(broken)
    with pytest.raises(MonoidError, match="not associative"):
        parse_monoid_file("\n".join(rows), "A0")


def test_missing_relation_breaks_presentation_agreement(cat):
    text = _data_text("monoids", "K.mon")
    lines = [line for line in text.splitlines() if line.strip() != "rel b e = b"]
    monoid, presentation, _ = parse_monoid_file("\n".join(lines), "K")
    generators, relations = presentation
    try:
        closed = close_presentation(generators, relations, cap=500)
    except ClosureError:
        return  # also an acceptable report: the closure no longer settles
    assert closed.order != monoid.order
    assert find_isomorphism(closed, monoid) is None


def _family_pool():
    pool = []
    for n in range(5):
        pool.append(family_identity(f"a{n}"))
        pool.append(family_identity(f"c{n}"))
    for m in range(2, 8):
        pool.append(family_identity(f"r{m}"))
    return pool


def test_identity_coverage_closure(cat):
    """Every identity quoted in a shipped manifest or used as a proof-script
    axiom resolves to a catalog label (basis entry or family instance)."""
    known = {idy for basis in cat.bases.values() for idy in basis}
    known.update(_family_pool())
    used = []
    for name, text in _all_data("manifests", ".manifest").items():
        for quoted in re.findall(r'"([^"]*=[^"]*)"', text):
            used.append((name, parse_identity(quoted)))
    for name, text in _all_data("proofs", ".proof").items():
        script = parse_proof_script(text, name)
        for axiom in script.axioms:
            used.append((name, parse_identity(f"{axiom.lhs} = {axiom.rhs}")))
    assert used
    for source, idy in used:
        assert idy in known, f"{source} uses uncatalogued identity {idy}"


def test_dual_closure(cat):
    for name in ["Edual", "Hdual", "H3dual"]:
        base = cat.basis(name[:-4] if name != "H3dual" else "H3")
        dual = cat.basis(name)
        assert {dualize(a) for a in dual} == set(base)


def test_deduction_soundness_against_catalog(cat):
    """Birkhoff direction: a monoid satisfying a verified script's axioms
    satisfies its endpoints."""
    proofs = _all_data("proofs", ".proof")
    checked = 0
    for name, text in proofs.items():
        script = parse_proof_script(text, name)
        report = verify_proof_script(script)
        assert report.valid, name
        axioms = [script.resolve_axiom(step.axiom_label) for step in script.steps]
        endpoints = report.endpoints
        variables = set().union(*(a.variables() for a in axioms)) if axioms else set()
        for monoid in cat.monoids.values():
            if monoid.order ** max(len(variables), 1) > 200_000:
                continue
            if all(satisfies(monoid, a).verdict for a in axioms):
                assert satisfies(monoid, endpoints).verdict is True, (name, monoid.name)
                checked += 1
    assert checked > 50


def test_selfcheck_report_lines():
    ok, lines = selfcheck_report()
    assert ok and lines[-1].startswith("ok")
