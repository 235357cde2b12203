"""Manifest runner, witness search, and monoid enumeration.

A manifest is a line-oriented claim file; claims name monoids through
small expressions (catalog names, dual(.), products, rees(.), explicit
quotients) and assert satisfaction, membership, structural facts, or
isoterm status.  Reports are deterministic: claims are emitted in input
order whatever the worker count, and the machine-readable records carry
no wall-clock content unless explicitly requested.
"""

from __future__ import annotations

import itertools
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .catalog import Catalog, CatalogError, load_catalog
from .freeobject import is_isoterm
from .identities import Identity, family_identity, parse_identity
from .monoids import (FiniteMonoid, aperiodicity, direct_product, dual_monoid,
                      find_isomorphism, is_j_trivial, quotient_by_classes,
                      rees_quotient)
from .satisfaction import DEFAULT_BUDGET, satisfies, satisfies_all
from .words import parse_word

# ---------------------------------------------------------------------------
# monoid expressions

_TOKEN_RE = re.compile(r"\s*([A-Za-z0-9_.]+|\(|\)|\[|\]|,|=)")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ValueError(f"cannot tokenize expression at {text[pos:]!r}")
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


class _ExprParser:
    def __init__(self, tokens, catalog: Catalog):
        self.tokens = tokens
        self.pos = 0
        self.catalog = catalog

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            raise ValueError(f"expected {expected!r}, got {token!r}")
        self.pos += 1
        return token

    def parse(self) -> FiniteMonoid:
        left = self.term()
        while self.peek() == "x":
            self.take()
            left = direct_product(left, self.term())
        return left

    def term(self) -> FiniteMonoid:
        token = self.take()
        if token == "dual":
            self.take("(")
            inner = self.parse()
            self.take(")")
            return dual_monoid(inner)
        if token == "rees":
            self.take("(")
            letters = []
            while self.peek() != ")":
                letters.append(self.take())
            self.take(")")
            return rees_quotient([parse_word(" ".join(letters))])
        if token == "quotient":
            self.take("(")
            base = self.catalog.monoid(self.take())
            self.take(",")
            self.take("classes")
            self.take("=")
            self.take("[")
            classes = []
            while self.peek() == "[":
                self.take("[")
                group = [self.take()]
                while self.peek() == ",":
                    self.take(",")
                    group.append(self.take())
                self.take("]")
                classes.append(group)
                if self.peek() == ",":
                    self.take(",")
            self.take("]")
            self.take(")")
            return quotient_by_classes(base, classes)
        if token == "(":
            inner = self.parse()
            self.take(")")
            return inner
        return self.catalog.monoid(token)


def parse_monoid_expression(text: str, catalog: Catalog) -> FiniteMonoid:
    parser = _ExprParser(_tokenize(text), catalog)
    result = parser.parse()
    if parser.peek() is not None:
        raise ValueError(f"trailing tokens in expression {text!r}")
    return result


# ---------------------------------------------------------------------------
# claims and manifests

CLAIM_KINDS = ("satisfies", "fails", "member", "not-member", "jtrivial",
               "not-jtrivial", "aperiodic", "isoterm", "not-isoterm",
               "iso", "not-iso")

_QUOTED = re.compile(r'"([^"]*)"')


@dataclass(frozen=True)
class Claim:
    kind: str
    subject: str           # monoid expression text
    object: str = ""       # identity text / basis name / word text / second expression
    text: str = ""         # canonical one-line rendering

    def render(self):
        return self.text


@dataclass
class Manifest:
    name: str
    claims: list = field(default_factory=list)
    nodes: dict = field(default_factory=dict)   # label -> (x, y)
    edges: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    budget: int = DEFAULT_BUDGET


def parse_claim(line: str) -> Claim:
    kind = line.split(None, 1)[0]
    if kind not in CLAIM_KINDS:
        raise ValueError(f"unknown claim kind {kind!r}")
    rest = line[len(kind):].strip()
    if kind in ("satisfies", "fails", "isoterm", "not-isoterm"):
        quoted = _QUOTED.search(rest)
        if quoted:
            subject = rest[: quoted.start()].strip()
            obj = quoted.group(1).strip()
        else:
            subject, obj = rest.rsplit(None, 1)
        return Claim(kind, subject.strip(), obj, line)
    if kind in ("member", "not-member"):
        subject, basis = rest.rsplit(None, 1)
        if not basis.startswith("basis."):
            raise ValueError(f"membership claim needs a basis.<name>: {line!r}")
        return Claim(kind, subject.strip(), basis[6:], line)
    if kind in ("jtrivial", "not-jtrivial", "aperiodic"):
        return Claim(kind, rest, "", line)
    # iso / not-iso: two expressions; split at top parenthesis level
    depth = 0
    for i, ch in enumerate(rest):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == " " and depth == 0 and rest[:i].count("(") == rest[:i].count(")"):
            left, right = rest[:i].strip(), rest[i:].strip()
            if left and right and not right.startswith("x "):
                return Claim(kind, left, right, line)
    raise ValueError(f"cannot split the two expressions in {line!r}")


def parse_manifest(text: str, name: str) -> Manifest:
    manifest = Manifest(name)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "budget":
            manifest.budget = int(line.split()[1])
        elif head == "node":
            _, label, x, y = line.split()
            manifest.nodes[label] = (float(x), float(y))
        elif head == "edge":
            _, a, b = line.split()
            manifest.edges.append((a, b))
        elif head == "note":
            manifest.notes.append(line[4:].strip().strip('"'))
        else:
            manifest.claims.append(parse_claim(line))
    return manifest


def _resolve_identity(token: str) -> Identity:
    if "=" in token:
        return parse_identity(token)
    return family_identity(token)


@dataclass(frozen=True)
class ClaimResult:
    verdict: str  # pass | fail | inconclusive | error
    detail: str = ""


def evaluate_claim(claim: Claim, catalog: Catalog, budget: int = DEFAULT_BUDGET) -> ClaimResult:
    try:
        return _evaluate(claim, catalog, budget)
    except (CatalogError, ValueError, KeyError) as exc:
        return ClaimResult("error", str(exc))


def _sat_result(result, want: bool):
    if result.verdict is None:
        return ClaimResult("inconclusive", f"budget exhausted after {result.products} products")
    if result.verdict == want:
        return ClaimResult("pass", "")
    return ClaimResult("fail", "")


def _evaluate(claim: Claim, catalog: Catalog, budget: int) -> ClaimResult:
    kind = claim.kind
    monoid = parse_monoid_expression(claim.subject, catalog)
    if kind in ("satisfies", "fails"):
        idy = _resolve_identity(claim.object)
        result = satisfies(monoid, idy, budget)
        out = _sat_result(result, kind == "satisfies")
        if result.counterexample is not None:
            extra = result.counterexample.render(monoid)
            return ClaimResult(out.verdict, extra)
        return out
    if kind in ("member", "not-member"):
        report = satisfies_all(monoid, catalog.basis(claim.object), budget)
        failure = report.first_failure
        if kind == "member":
            if failure is not None:
                idy, res = failure
                return ClaimResult("fail", f"fails {idy.label}: {res.counterexample.render(monoid)}")
            if report.inconclusive:
                return ClaimResult("inconclusive", "budget exhausted on some axiom")
            return ClaimResult("pass", "")
        if failure is not None:
            idy, _ = failure
            return ClaimResult("pass", f"fails {idy.label}")
        if report.inconclusive:
            return ClaimResult("inconclusive", "budget exhausted on some axiom")
        return ClaimResult("fail", "satisfies the whole basis")
    if kind in ("jtrivial", "not-jtrivial"):
        trivial = is_j_trivial(monoid)
        return ClaimResult("pass" if trivial == (kind == "jtrivial") else "fail",
                           f"jtrivial={trivial}")
    if kind == "aperiodic":
        data = aperiodicity(monoid)
        if data.aperiodic:
            return ClaimResult("pass", f"index {data.index}")
        return ClaimResult("fail", f"element {monoid.labels[data.witness]} has a cycle")
    if kind in ("isoterm", "not-isoterm"):
        result = is_isoterm(monoid, parse_word(claim.object))
        if result.status == "inconclusive":
            return ClaimResult("inconclusive", f"state cap hit at {result.states} states")
        want = "isoterm" if kind == "isoterm" else "not-isoterm"
        detail = f"states {result.states}"
        if result.witness is not None:
            detail += f", second word {result.witness}"
        return ClaimResult("pass" if result.status == want else "fail", detail)
    # iso / not-iso
    other = parse_monoid_expression(claim.object, catalog)
    mapping = find_isomorphism(monoid, other)
    found = mapping is not None
    return ClaimResult("pass" if found == (kind == "iso") else "fail",
                       "isomorphic" if found else "no isomorphism")


# ---------------------------------------------------------------------------
# manifest reports

@dataclass
class ManifestReport:
    name: str
    rows: list  # (claim_id, claim, ClaimResult, millis)
    notes: list

    def counts(self):
        totals = {"pass": 0, "fail": 0, "inconclusive": 0, "error": 0}
        for _, _, result, _ in self.rows:
            totals[result.verdict] += 1
        return totals

    @property
    def exit_code(self):
        totals = self.counts()
        if totals["error"]:
            return 3
        if totals["fail"]:
            return 1
        if totals["inconclusive"]:
            return 2
        return 0

    def human_lines(self, timings=False):
        lines = [f"manifest {self.name}: {len(self.rows)} claims"]
        for claim_id, claim, result, millis in self.rows:
            stamp = f" ({millis} ms)" if timings else ""
            detail = f"  [{result.detail}]" if result.detail else ""
            lines.append(f"  {claim_id}  {result.verdict.upper():12s} {claim.render()}{detail}{stamp}")
        totals = self.counts()
        lines.append("  summary: " + ", ".join(f"{v} {k}" for k, v in totals.items()))
        for note in self.notes:
            lines.append(f"  note: {note}")
        return lines

    def record_lines(self, timings=False):
        lines = []
        for claim_id, claim, result, millis in self.rows:
            stamp = millis if timings else 0
            detail = result.detail.replace("\t", " ")
            lines.append(f"{claim_id}\t{result.verdict}\t{stamp}\t{claim.render()}\t{detail}")
        return lines


def run_manifest(manifest: Manifest, catalog=None, jobs: int = 1,
                 budget: int | None = None) -> ManifestReport:
    catalog = catalog or load_catalog()
    budget = manifest.budget if budget is None else budget

    def work(indexed):
        index, claim = indexed
        started = time.monotonic()
        result = evaluate_claim(claim, catalog, budget)
        millis = int((time.monotonic() - started) * 1000)
        return index, result, millis

    indexed = list(enumerate(manifest.claims, start=1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(work, indexed))
    else:
        outcomes = [work(item) for item in indexed]
    outcomes.sort(key=lambda item: item[0])
    rows = [(f"{manifest.name}:{index:03d}", manifest.claims[index - 1], result, millis)
            for index, result, millis in outcomes]
    return ManifestReport(manifest.name, rows, list(manifest.notes))


# ---------------------------------------------------------------------------
# monoid enumeration and witness search

def _associativity_ok(table, n, i, j):
    # check all triples whose products are fully determined and involve (i, j)
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            if ab < 0:
                continue
            for c in range(n):
                bc = table[b][c]
                if bc < 0:
                    continue
                left = table[ab][c]
                right = table[a][bc]
                if left >= 0 and right >= 0 and left != right:
                    return False
    return True


def enumerate_monoid_tables(n):
    """All monoid tables of order n with the identity fixed at index 0,
    generated in lexicographic cell order (deterministic)."""
    if n == 1:
        yield ((0,),)
        return
    table = [[-1] * n for _ in range(n)]
    for a in range(n):
        table[0][a] = a
        table[a][0] = a
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def fill(pos):
        if pos == len(cells):
            yield tuple(tuple(row) for row in table)
            return
        i, j = cells[pos]
        for value in range(n):
            table[i][j] = value
            if _associativity_ok(table, n, i, j):
                yield from fill(pos + 1)
        table[i][j] = -1

    yield from fill(0)


def canonical_form(table):
    """Lexicographically least flattened table over permutations fixing 0."""
    n = len(table)
    best = None
    for perm in itertools.permutations(range(1, n)):
        # mapping sends new index -> old index
        mapping = (0,) + perm
        inverse = [0] * n
        for old, new in enumerate(mapping):
            inverse[new] = old
        relabelled = tuple(
            tuple(inverse[table[mapping[a]][mapping[b]]] for b in range(n))
            for a in range(n)
        )
        if best is None or relabelled < best:
            best = relabelled
    return best


def count_monoids_up_to_isomorphism(n) -> int:
    return len({canonical_form(t) for t in enumerate_monoid_tables(n)})


def count_monoids_naive(n) -> int:
    """Independent oracle: enumerate every filling of the free cells with no
    pruning, filter by direct associativity, and canonicalize."""
    if n == 1:
        return 1
    canon = set()
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    for values in itertools.product(range(n), repeat=len(cells)):
        table = [[0] * n for _ in range(n)]
        for a in range(n):
            table[0][a] = a
            table[a][0] = a
        for (i, j), v in zip(cells, values):
            table[i][j] = v
        ok = True
        for a in range(1, n):
            rowa = table[a]
            for b in range(1, n):
                ab = rowa[b]
                rowb = table[b]
                for c in range(1, n):
                    if table[ab][c] != rowa[rowb[c]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            canon.add(canonical_form(table))
    return len(canon)


@dataclass
class SearchSpec:
    must_satisfy: list  # identities
    must_fail: list
    max_order: int = 6
    budget: int = DEFAULT_BUDGET


@dataclass
class SearchOutcome:
    monoid: FiniteMonoid | None
    tables_tried: int
    inconclusive: bool  # a satisfaction budget ran out somewhere


def witness_search(spec: SearchSpec) -> SearchOutcome:
    """First monoid (ascending order, deterministic table order) satisfying
    every must_satisfy identity and failing every must_fail identity."""
    tried = 0
    sat_inconclusive = False
    for n in range(1, spec.max_order + 1):
        for table in enumerate_monoid_tables(n):
            tried += 1
            candidate = FiniteMonoid(table, 0, name=f"search[{n}]")
            ok = True
            for idy in spec.must_satisfy:
                res = satisfies(candidate, idy, spec.budget)
                if res.verdict is None:
                    sat_inconclusive = True
                if res.verdict is not True:
                    ok = False
                    break
            if ok:
                for idy in spec.must_fail:
                    res = satisfies(candidate, idy, spec.budget)
                    if res.verdict is None:
                        sat_inconclusive = True
                    if res.verdict is not False:
                        ok = False
                        break
            if ok:
                return SearchOutcome(candidate, tried, False)
    return SearchOutcome(None, tried, sat_inconclusive)
