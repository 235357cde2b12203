"""Identities, substitutions, direct deducibility, and proof chains.

An identity is an unordered pair of words.  One identity is directly
deducible from another when some substitution plus a two-sided context
turns the axiom's sides into the given pair; a proof chain strings such
steps together through pairwise distinct words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .words import EMPTY, Word, content, parse_word, reverse


class Identity:
    """Unordered pair of words, optionally labelled.

    The two sides keep their input order for display, but equality and
    hashing treat the pair as a set.
    """

    __slots__ = ("lhs", "rhs", "label")

    def __init__(self, lhs: Word, rhs: Word, label=None):
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("Identity is immutable")

    @property
    def nontrivial(self):
        return self.lhs != self.rhs

    def sides(self):
        return (self.lhs, self.rhs)

    def variables(self):
        return content(self.lhs) | content(self.rhs)

    def __eq__(self, other):
        if not isinstance(other, Identity):
            return NotImplemented
        return {self.lhs, self.rhs} == {other.lhs, other.rhs}

    def __hash__(self):
        return hash(frozenset((self.lhs, self.rhs)))

    def __str__(self):
        tag = f"{self.label}: " if self.label else ""
        return f"{tag}{self.lhs} = {self.rhs}"

    def __repr__(self):
        return f"Identity({str(self.lhs)!r}, {str(self.rhs)!r})"


def parse_identity(text: str, label=None) -> Identity:
    if "=" not in text:
        raise ValueError(f"identity needs '=': {text!r}")
    left, right = text.split("=", 1)
    return Identity(parse_word(left), parse_word(right), label)


def dualize(idy: Identity) -> Identity:
    """Reverse both sides; an involution up to the unordered-pair view."""
    return Identity(reverse(idy.lhs), reverse(idy.rhs), idy.label)


class Substitution:
    """Finite map variable -> Word, extended homomorphically to words.

    Unassigned variables map to themselves; the empty word is a legal
    image.
    """

    def __init__(self, assignment=None):
        self.assignment = dict(assignment or {})

    def __getitem__(self, variable):
        got = self.assignment.get(variable)
        return Word([variable]) if got is None else got

    def apply(self, word: Word) -> Word:
        letters = []
        for v in word.letters:
            letters.extend(self[v].letters)
        return Word(letters)

    def items(self):
        return self.assignment.items()

    def __eq__(self, other):
        return isinstance(other, Substitution) and self.assignment == other.assignment

    def __repr__(self):
        inner = ", ".join(f"{v}->{img}" for v, img in sorted(self.assignment.items()))
        return f"Substitution({inner})"


class AxiomSet:
    """Finite list of identities with unique labels."""

    def __init__(self, axioms=()):
        self.axioms = []
        self.by_label = {}
        for axiom in axioms:
            self.add(axiom)

    def add(self, axiom: Identity):
        if axiom.label is None:
            raise ValueError("axioms need labels")
        if axiom.label in self.by_label:
            raise ValueError(f"duplicate axiom label {axiom.label!r}")
        self.axioms.append(axiom)
        self.by_label[axiom.label] = axiom

    def __iter__(self):
        return iter(self.axioms)

    def __len__(self):
        return len(self.axioms)

    def __contains__(self, label):
        return label in self.by_label

    def __getitem__(self, label):
        return self.by_label[label]

    def labels(self):
        return list(self.by_label)


# ---------------------------------------------------------------------------
# identity families

_ALTERNATING = ("x", "y")


def aperiodicity_identity(n: int) -> Identity:
    """x^{n+1} = x^n; n = 0 gives x = 1."""
    if n < 0:
        raise ValueError("index must be >= 0")
    return Identity(Word(["x"] * (n + 1)), Word(["x"] * n), f"a{n}")


def eventual_commutativity_identity(n: int) -> Identity:
    """(xy)^n = (yx)^n."""
    if n < 0:
        raise ValueError("index must be >= 0")
    return Identity(Word(["x", "y"] * n), Word(["y", "x"] * n), f"c{n}")


def _tail(first: int, count: int):
    # t_i a_i factors with a_i alternating x,y,x,y,... indexed from 1
    letters = []
    for i in range(first, first + count):
        letters.append(f"t{i}")
        letters.append(_ALTERNATING[(i - 1) % 2])
    return letters


def restrictive_identity(m: int) -> Identity:
    """xy t1x t2y ... = yx t1x t2y ... with m alternating tail factors."""
    if m < 2:
        raise ValueError("restrictive family needs index >= 2")
    tail = _tail(1, m)
    return Identity(Word(["x", "y"] + tail), Word(["y", "x"] + tail), f"r{m}")


def swap_tail_identity(m: int, start: int = 1) -> Identity:
    """Like the restrictive family but any index >= 1 and a selectable
    first tail index; covers the two tail shapes used in basis reductions."""
    if m < 1:
        raise ValueError("index must be >= 1")
    tail = _tail(start, m)
    return Identity(Word(["x", "y"] + tail), Word(["y", "x"] + tail))


def scheme_identity(m: int, permutation=None) -> Identity:
    """x y_{p(1)}..y_{p(m)} x h1y1..hmym = x^2 y_{p(1)}..y_{p(m)} h1y1..hmym."""
    if m < 1:
        raise ValueError("index must be >= 1")
    if permutation is None:
        permutation = tuple(range(1, m + 1))
    if sorted(permutation) != list(range(1, m + 1)):
        raise ValueError(f"not a permutation of 1..{m}: {permutation}")
    middle = [f"y{i}" for i in permutation]
    suffix = []
    for i in range(1, m + 1):
        suffix.append(f"h{i}")
        suffix.append(f"y{i}")
    lhs = Word(["x"] + middle + ["x"] + suffix)
    rhs = Word(["x", "x"] + middle + suffix)
    return Identity(lhs, rhs, f"i{m}p" + "".join(str(i) for i in permutation))


def chain_word(m: int) -> Word:
    """x h1 x h2 x ... hm x."""
    if m < 0:
        raise ValueError("index must be >= 0")
    letters = ["x"]
    for i in range(1, m + 1):
        letters.append(f"h{i}")
        letters.append("x")
    return Word(letters)


_FAMILY_TOKEN = re.compile(r"\A(a|c|r)([0-9]+)\Z")
_SCHEME_TOKEN = re.compile(r"\Ai([0-9])(?:p([0-9]+))?\Z")


def family_identity(token: str):
    """Resolve a family token like ``a2``, ``c3``, ``r4``, ``i2p21``; a
    trailing ``~`` gives the dual instance."""
    if token.endswith("~"):
        base = family_identity(token[:-1])
        dual = dualize(base)
        return Identity(dual.lhs, dual.rhs, token)
    match = _FAMILY_TOKEN.match(token)
    if match:
        kind, index = match.group(1), int(match.group(2))
        if kind == "a":
            return aperiodicity_identity(index)
        if kind == "c":
            return eventual_commutativity_identity(index)
        return restrictive_identity(index)
    match = _SCHEME_TOKEN.match(token)
    if match:
        m = int(match.group(1))
        perm = None
        if match.group(2) is not None:
            perm = tuple(int(d) for d in match.group(2))
            if len(perm) != m:
                raise ValueError(f"permutation length mismatch in {token!r}")
        idy = scheme_identity(m, perm)
        return Identity(idy.lhs, idy.rhs, token)
    raise KeyError(token)


# ---------------------------------------------------------------------------
# direct deducibility

class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class DeductionWitness:
    prefix: Word
    suffix: Word
    phi: Substitution
    flipped: bool  # True when the axiom's rhs matched the first word

    def words(self, axiom: Identity):
        first, second = axiom.sides()
        if self.flipped:
            first, second = second, first
        make = lambda side: self.prefix * self.phi.apply(side) * self.suffix
        return make(first), make(second)


@dataclass(frozen=True)
class DeductionResult:
    deducible: bool | None  # None when the node budget ran out
    witness: DeductionWitness | None
    nodes: int

    def __bool__(self):
        return self.deducible is True


def _match_pattern(pattern, core, bindings, pos, start, counter, budget):
    """Backtracking match of a variable pattern against a concrete word.

    Bindings map variables to letter tuples; images may be empty.
    Nonempty images are tried shortest first, the empty image last.
    Yields complete binding dicts.
    """
    if pos == len(pattern):
        if start == len(core):
            yield dict(bindings)
        return
    counter[0] += 1
    if counter[0] > budget:
        raise BudgetExceeded
    var = pattern[pos]
    bound = bindings.get(var)
    if bound is not None:
        end = start + len(bound)
        if core[start:end] == bound:
            yield from _match_pattern(pattern, core, bindings, pos + 1, end, counter, budget)
        return
    remaining = len(core) - start
    for size in list(range(1, remaining + 1)) + [0]:
        bindings[var] = core[start:start + size]
        yield from _match_pattern(pattern, core, bindings, pos + 1, start + size, counter, budget)
    del bindings[var]


def directly_deducible(u: Word, v: Word, axiom: Identity, budget: int = 10**6) -> DeductionResult:
    """Decide whether {u, v} = {a phi(p) b, a phi(q) b} for axiom p = q.

    Searches factorizations of u with shorter contexts first; one axiom
    side is matched against the u-core and the other against the v-core
    under the same bindings, so variables private to the second side stay
    free.  The fixed search order makes the result deterministic.
    """
    u_letters, v_letters = u.letters, v.letters
    counter = [0]
    try:
        for i in range(len(u_letters) + 1):
            if u_letters[:i] != v_letters[:i]:
                break  # the context prefix must lead both words
            for j in range(len(u_letters), i - 1, -1):
                suffix = u_letters[j:]
                if len(v_letters) - len(suffix) < i:
                    continue
                if suffix and v_letters[-len(suffix):] != suffix:
                    continue
                core_u = u_letters[i:j]
                core_v = v_letters[i:len(v_letters) - len(suffix)]
                for flipped, (side, other) in enumerate(
                    (axiom.sides(), axiom.sides()[::-1])
                ):
                    for bindings in _match_pattern(
                        side.letters, core_u, {}, 0, 0, counter, budget
                    ):
                        for full in _match_pattern(
                            other.letters, core_v, bindings, 0, 0, counter, budget
                        ):
                            phi = Substitution({var: Word(img) for var, img in full.items()})
                            witness = DeductionWitness(
                                Word(u_letters[:i]), Word(suffix), phi, bool(flipped)
                            )
                            return DeductionResult(True, witness, counter[0])
    except BudgetExceeded:
        return DeductionResult(None, None, counter[0])
    return DeductionResult(False, None, counter[0])


def check_witness(u: Word, v: Word, axiom: Identity, witness: DeductionWitness) -> bool:
    """Re-substitute and compare; used both for explicit `via` witnesses
    and as a soundness re-check of every searched witness."""
    first, second = witness.words(axiom)
    return {first, second} == {u, v}


# ---------------------------------------------------------------------------
# proof scripts

@dataclass
class ProofStep:
    target: Word
    axiom_label: str
    via: DeductionWitness | None = None


@dataclass
class ProofScript:
    axioms: AxiomSet
    start: Word
    steps: list = field(default_factory=list)
    name: str = ""

    @property
    def chain(self):
        return [self.start] + [step.target for step in self.steps]

    def resolve_axiom(self, label: str) -> Identity:
        if label in self.axioms:
            return self.axioms[label]
        try:
            return family_identity(label)
        except (KeyError, ValueError):
            raise KeyError(f"unknown axiom label {label!r}")


@dataclass
class StepReport:
    index: int
    source: Word
    target: Word
    axiom_label: str
    ok: bool
    inconclusive: bool = False
    witness: DeductionWitness | None = None
    nodes: int = 0
    message: str = ""


@dataclass
class ScriptReport:
    name: str
    valid: bool
    steps: list
    warnings: list
    errors: list

    @property
    def endpoints(self):
        return self._endpoints

    def lines(self):
        out = [f"proof {self.name}: {'VALID' if self.valid else 'INVALID'}"]
        for step in self.steps:
            status = "ok" if step.ok else ("inconclusive" if step.inconclusive else "FAIL")
            line = f"  step {step.index}: {step.source} -> {step.target} by {step.axiom_label}: {status}"
            if step.witness is not None:
                phi = ", ".join(f"{v}->{img}" for v, img in sorted(step.witness.phi.items()))
                line += f" [a={step.witness.prefix} b={step.witness.suffix} phi: {phi}]"
            if step.message:
                line += f" ({step.message})"
            out.append(line)
        for warning in self.warnings:
            out.append(f"  warning: {warning}")
        for error in self.errors:
            out.append(f"  error: {error}")
        return out


def verify_proof_script(script: ProofScript, budget: int = 10**6, lax: bool = False) -> ScriptReport:
    """Check every consecutive pair of the chain against its named axiom.

    Chain words must be pairwise distinct; with ``lax`` only adjacent
    distinctness is enforced and other collisions become warnings.
    """
    steps = []
    warnings = []
    errors = []
    chain = script.chain

    seen = {}
    for idx, word in enumerate(chain):
        if word in seen:
            message = f"chain words {seen[word]} and {idx} coincide: {word}"
            if lax and idx - seen[word] > 1:
                warnings.append(message)
            else:
                errors.append(message)
        else:
            seen[word] = idx

    valid = not errors
    current = script.start
    for index, step in enumerate(script.steps, start=1):
        try:
            axiom = script.resolve_axiom(step.axiom_label)
        except KeyError as exc:
            errors.append(str(exc))
            steps.append(StepReport(index, current, step.target, step.axiom_label,
                                    ok=False, message="unknown axiom"))
            valid = False
            current = step.target
            continue
        if step.via is not None:
            ok = check_witness(current, step.target, axiom, step.via)
            report = StepReport(index, current, step.target, step.axiom_label, ok,
                                witness=step.via if ok else None,
                                message="" if ok else "explicit witness does not check")
        else:
            result = directly_deducible(current, step.target, axiom, budget)
            if result.deducible and not check_witness(current, step.target, axiom, result.witness):
                # the searcher only returns verified witnesses; belt and braces
                report = StepReport(index, current, step.target, step.axiom_label,
                                    ok=False, nodes=result.nodes, message="unsound witness")
            else:
                report = StepReport(
                    index, current, step.target, step.axiom_label,
                    ok=bool(result), inconclusive=result.deducible is None,
                    witness=result.witness, nodes=result.nodes,
                    message="budget exhausted" if result.deducible is None else "",
                )
        steps.append(report)
        valid = valid and report.ok
        current = step.target

    report = ScriptReport(script.name, valid, steps, warnings, errors)
    report._endpoints = Identity(chain[0], chain[-1])
    return report


# ---------------------------------------------------------------------------
# proof script files

_VIA_RE = re.compile(
    r"via\s+(?:a=\"(?P<a>[^\"]*)\"\s*)?(?:b=\"(?P<b>[^\"]*)\"\s*)?"
    r"(?:phi:\s*(?P<phi>.*))?\Z"
)
_PHI_ENTRY_RE = re.compile(r"([a-z][0-9]?)=\"([^\"]*)\"")


def _parse_via(text: str, axiom: Identity | None) -> DeductionWitness:
    match = _VIA_RE.match(text.strip())
    if not match:
        raise ValueError(f"cannot parse via clause: {text!r}")
    prefix = parse_word(match.group("a")) if match.group("a") else EMPTY
    suffix = parse_word(match.group("b")) if match.group("b") else EMPTY
    assignment = {}
    if match.group("phi"):
        for var, image in _PHI_ENTRY_RE.findall(match.group("phi")):
            assignment[var] = parse_word(image)
    return DeductionWitness(prefix, suffix, Substitution(assignment), flipped=False)


def parse_proof_script(text: str, name: str = "") -> ProofScript:
    """Line format::

        axioms:
          L: x^2 h x = x h x
        chain:
          x y h x y
          -> (x y)^2 h x y  by L
          -> ...            by a2  via a="..." b="..." phi: x="..."

    Axiom labels not declared under ``axioms:`` may be family tokens
    (``a2``, ``c2``, ``r3``), expanded when the step is checked.
    """
    axioms = AxiomSet()
    start = None
    steps = []
    section = None
    for raw_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped == "axioms:":
            section = "axioms"
            continue
        if stripped == "chain:":
            section = "chain"
            continue
        if section == "axioms":
            if ":" not in stripped:
                raise ValueError(f"line {raw_number}: axiom needs 'label: identity'")
            label, body = stripped.split(":", 1)
            axioms.add(parse_identity(body, label.strip()))
        elif section == "chain":
            if stripped.startswith("->"):
                if start is None:
                    raise ValueError(f"line {raw_number}: step before initial word")
                body = stripped[2:].strip()
                via = None
                if " via " in body:
                    body, via_text = body.split(" via ", 1)
                    via = _parse_via("via " + via_text, None)
                if " by " not in body:
                    raise ValueError(f"line {raw_number}: step needs 'by LABEL'")
                word_text, label = body.rsplit(" by ", 1)
                steps.append(ProofStep(parse_word(word_text), label.strip(), via))
            else:
                if start is not None:
                    raise ValueError(f"line {raw_number}: second initial word")
                start = parse_word(stripped)
        else:
            raise ValueError(f"line {raw_number}: text outside axioms/chain sections")
    if start is None:
        raise ValueError("proof script has no chain")
    return ProofScript(axioms, start, steps, name)
