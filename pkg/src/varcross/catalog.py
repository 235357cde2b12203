"""Curated monoids and identity bases, loaded from package data.

Every monoid entry is a validated table; entries that carry a
presentation are cross-checked against it (closure must be isomorphic to
the stored table), and ``check`` lines pin orders and structural facts.
"""

from __future__ import annotations

import difflib
import time
from dataclasses import dataclass, field
from importlib import resources

from .identities import AxiomSet, Identity, dualize, family_identity, parse_identity
from .monoids import (FiniteMonoid, close_presentation, find_isomorphism,
                      aperiodicity, is_j_trivial, parse_monoid_file,
                      quotient_by_classes, rees_quotient)
from .words import parse_word


class CatalogError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str  # "monoid" | "basis" | "family"
    payload: object
    note: str = ""


def _data_dir(sub):
    return resources.files("varcross").joinpath("data", sub)


def _read_all(sub, suffix):
    out = {}
    for item in sorted(_data_dir(sub).iterdir(), key=lambda p: p.name):
        if item.name.endswith(suffix):
            out[item.name[: -len(suffix)]] = item.read_text()
    return out


_FAMILY_NOTES = {
    "a": "powers collapse from the given exponent on",
    "c": "products commute once raised to the given power",
    "r": "leading swap fixed by an alternating tail",
    "i": "squared head against a permuted block and tagged tail",
}


class Catalog:
    def __init__(self):
        self.monoids = {}
        self.presentations = {}
        self.checks = {}
        self.notes = {}
        self.quotients = {}
        self.rees_words = {}
        self._basis_sources = {}
        self.bases = {}
        self._load()

    # -- loading -----------------------------------------------------------

    def _load(self):
        for name, text in _read_all("monoids", ".mon").items():
            monoid, presentation, checks = parse_monoid_file(text, name)
            self.monoids[name] = monoid
            self.checks[name] = checks
            first = text.splitlines()[0]
            self.notes[name] = first.lstrip("# ").strip() if first.startswith("#") else ""
            if presentation:
                self.presentations[name] = presentation
        for name, text in _read_all("monoids", ".quo").items():
            spec = self._parse_quotient(text)
            self.quotients[name] = spec
            base = self.monoids[spec["of"]]
            self.monoids[name] = quotient_by_classes(base, spec["classes"], name=name)
            self.checks[name] = spec["checks"]
            self.notes[name] = spec.get("note", "")
        rees_text = _data_dir("monoids").joinpath("rees.list").read_text()
        for line in rees_text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            name, word_text, order = (part.strip() for part in line.split(":"))
            word = parse_word(word_text)
            self.rees_words[name] = word
            self.monoids[name] = rees_quotient([word], name=name)
            self.checks[name] = {"order": order, "jtrivial": "yes"}
            self.notes[name] = f"factors of {word} with truncating product"
        self._basis_sources = _read_all("bases", ".basis")
        for name in self._basis_sources:
            self.bases[name] = self._resolve_basis(name, ())

    @staticmethod
    def _parse_quotient(text):
        spec = {"checks": {}}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                if raw.startswith("#"):
                    spec.setdefault("note", raw.lstrip("# ").strip())
                continue
            parts = line.split()
            if parts[0] == "name":
                spec["name"] = parts[1]
            elif parts[0] == "of":
                spec["of"] = parts[1]
            elif parts[0] == "classes":
                groups = " ".join(parts[1:]).split("|")
                spec["classes"] = [group.split() for group in groups]
            elif parts[0] == "check":
                spec["checks"][parts[1]] = parts[2]
        return spec

    def _resolve_basis(self, name, stack):
        if name in self.bases:
            return self.bases[name]
        if name in stack:
            raise CatalogError(f"basis include cycle at {name!r}")
        if name not in self._basis_sources:
            raise CatalogError(f"unknown basis {name!r}")
        axioms = AxiomSet()
        for raw in self._basis_sources[name].splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("include "):
                for axiom in self._resolve_basis(line.split()[1], stack + (name,)):
                    axioms.add(axiom)
            elif line.startswith("dual-of "):
                for axiom in self._resolve_basis(line.split()[1], stack + (name,)):
                    dual = dualize(axiom)
                    axioms.add(Identity(dual.lhs, dual.rhs, axiom.label + "~"))
            else:
                label, body = line.split(":", 1)
                axioms.add(parse_identity(body, label.strip()))
        self.bases[name] = axioms
        return axioms

    # -- lookup ------------------------------------------------------------

    def monoid(self, name) -> FiniteMonoid:
        if name not in self.monoids:
            raise CatalogError(self._unknown(name, self.monoids))
        return self.monoids[name]

    def basis(self, name) -> AxiomSet:
        if name not in self.bases:
            raise CatalogError(self._unknown(name, self.bases))
        return self.bases[name]

    def identity(self, token) -> Identity:
        try:
            return family_identity(token)
        except (KeyError, ValueError):
            raise CatalogError(self._unknown(token, {}))

    def lookup(self, name) -> CatalogEntry:
        if name.startswith("basis."):
            return CatalogEntry(name, "basis", self.basis(name[6:]))
        if name in self.monoids:
            return CatalogEntry(name, "monoid", self.monoids[name], self.notes.get(name, ""))
        try:
            idy = family_identity(name)
            return CatalogEntry(name, "family", idy, _FAMILY_NOTES.get(name[0], ""))
        except (KeyError, ValueError):
            pass
        raise CatalogError(self._unknown(name, self.monoids))

    def _unknown(self, name, pool):
        known = sorted(set(pool) | set(self.monoids) | {f"basis.{b}" for b in self.bases})
        near = difflib.get_close_matches(name, known, n=3)
        hint = f"; did you mean {', '.join(near)}?" if near else ""
        return f"unknown catalog name {name!r}{hint}"

    # -- validation --------------------------------------------------------

    def selfcheck(self):
        """Validate every entry; returns (ok, lines). Table laws are already
        enforced at parse time, so this focuses on the pinned expectations
        and the presentation/table agreement."""
        lines = []
        ok = True

        def report(entry, good, detail):
            nonlocal ok
            ok = ok and good
            lines.append(f"{'ok  ' if good else 'FAIL'} {entry}: {detail}")

        for name, monoid in sorted(self.monoids.items()):
            checks = self.checks.get(name, {})
            if "order" in checks:
                want = int(checks["order"])
                report(name, monoid.order == want,
                       f"order {monoid.order} (expected {want})")
            if "jtrivial" in checks:
                want = checks["jtrivial"] == "yes"
                got = is_j_trivial(monoid)
                report(name, got == want, f"jtrivial {got}")
                if want:
                    aper = aperiodicity(monoid)
                    report(name, aper.aperiodic, "jtrivial implies aperiodic")
            if "aperiodic-index" in checks:
                want = int(checks["aperiodic-index"])
                got = aperiodicity(monoid).index
                report(name, got == want, f"aperiodic index {got} (expected {want})")
            report(name, monoid.zero is not None, "zero element detected")
        for name, (generators, relations) in sorted(self.presentations.items()):
            try:
                closed = close_presentation(generators, relations, name=name)
            except Exception as exc:  # closure errors are check failures
                report(name, False, f"presentation closure failed: {exc}")
                continue
            iso = find_isomorphism(closed, self.monoids[name])
            report(name, iso is not None, "presentation closure matches stored table")
        for name, axioms in sorted(self.bases.items()):
            report(f"basis.{name}", len(axioms) > 0, f"{len(axioms)} identities")
            for axiom in axioms:
                double = dualize(dualize(axiom))
                if double != axiom:
                    report(f"basis.{name}", False, f"dualize not involutive on {axiom.label}")
        return ok, lines


_CATALOG = None


def load_catalog() -> Catalog:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = Catalog()
    return _CATALOG


def selfcheck_report():
    start = time.monotonic()
    ok, lines = load_catalog().selfcheck()
    elapsed = time.monotonic() - start
    lines.append(f"{'ok  ' if ok else 'FAIL'} catalog selfcheck in {elapsed:.2f}s")
    return ok, lines
