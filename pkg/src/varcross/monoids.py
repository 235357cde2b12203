"""Finite monoids as dense multiplication tables.

Elements are indices 0..n-1; the table holds the index of each product.
Constructors cover explicit tables, Rees quotients of word sets, bounded
rewriting closure of presentations, direct products, duals, and quotients
by explicit congruence classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .words import Word, parse_word

ZERO = "0"  # right-hand marker for collapse-to-zero relations


class MonoidError(ValueError):
    pass


class ClosureError(MonoidError):
    """Presentation closure hit its cap: result is inconclusive."""


class FiniteMonoid:
    """Validated multiplication table; treated as read-only after construction."""

    __slots__ = ("order", "table", "identity", "zero", "labels", "name",
                 "_np", "_green", "_label_index")

    def __init__(self, table, identity, labels=None, name=""):
        order = len(table)
        table = tuple(tuple(row) for row in table)
        if labels is None:
            labels = tuple(str(i) for i in range(order))
        else:
            labels = tuple(labels)
        if len(labels) != order or len(set(labels)) != order:
            raise MonoidError("labels must be distinct and match the order")
        self.order = order
        self.table = table
        self.identity = identity
        self.labels = labels
        self.name = name or "M"
        self._np = None
        self._green = None
        self._label_index = {lab: i for i, lab in enumerate(labels)}
        self.zero = self._detect_zero()
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self):
        n = self.order
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise MonoidError(f"row {i} has length {len(row)}, expected {n}")
            for value in row:
                if not (0 <= value < n):
                    raise MonoidError(f"entry {value} out of range in row {i}")
        e = self.identity
        if not (0 <= e < n):
            raise MonoidError(f"identity index {e} out of range")
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise MonoidError(
                    f"identity law fails at {self.labels[a]}: "
                    f"{self.labels[e]}*{self.labels[a]} or the mirror is wrong")
        t = self.np_table
        left = t[t, :]          # left[a,b,c] = (ab)c
        right = t[:, t]         # right[a,b,c] = a(bc)
        if not np.array_equal(left, right):
            a, b, c = (int(x) for x in np.argwhere(left != right)[0])
            la, lb, lc = self.labels[a], self.labels[b], self.labels[c]
            raise MonoidError(
                f"not associative: ({la}*{lb})*{lc} = {self.labels[left[a, b, c]]} "
                f"but {la}*({lb}*{lc}) = {self.labels[right[a, b, c]]}")

    def _detect_zero(self):
        for z in range(self.order):
            row, col = self.table[z], [self.table[a][z] for a in range(self.order)]
            if all(v == z for v in row) and all(v == z for v in col):
                return z
        return None

    @property
    def np_table(self):
        if self._np is None:
            self._np = np.asarray(self.table, dtype=np.int64)
        return self._np

    # -- arithmetic --------------------------------------------------------

    def mul(self, a, b):
        return self.table[a][b]

    def power(self, a, k):
        result = self.identity
        for _ in range(k):
            result = self.table[result][a]
        return result

    def eval_word(self, word: Word, assignment) -> int:
        """Image of a word under a variable -> element-index assignment."""
        result = self.identity
        for v in word.letters:
            result = self.table[result][assignment[v]]
        return result

    def element(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise MonoidError(f"{self.name} has no element labelled {label!r}")

    def idempotents(self):
        return [a for a in range(self.order) if self.table[a][a] == a]

    def __eq__(self, other):
        return (isinstance(other, FiniteMonoid) and self.table == other.table
                and self.identity == other.identity)

    def __hash__(self):
        return hash((self.table, self.identity))

    def __repr__(self):
        return f"FiniteMonoid({self.name}, order={self.order})"


def from_table(table, identity, labels=None, name="") -> FiniteMonoid:
    return FiniteMonoid(table, identity, labels, name)


# ---------------------------------------------------------------------------
# constructors

def rees_quotient(words, name=None) -> FiniteMonoid:
    """Monoid of all factors of the given words plus a zero; products fall
    to zero when the concatenation is not itself a factor."""
    words = [parse_word(w) if isinstance(w, str) else w for w in words]
    factors = {()}
    for word in words:
        letters = word.letters
        for i in range(len(letters)):
            for j in range(i + 1, len(letters) + 1):
                factors.add(letters[i:j])
    ordered = sorted(factors, key=lambda f: (len(f), f))
    index = {f: i for i, f in enumerate(ordered)}
    zero = len(ordered)
    n = zero + 1
    table = [[zero] * n for _ in range(n)]
    for fa, a in index.items():
        for fb, b in index.items():
            table[a][b] = index.get(fa + fb, zero)
    labels = ["1"] + ["".join(f) for f in ordered[1:]] + ["0"]
    if name is None:
        name = "Rq{" + ",".join(str(w) for w in words) + "}"
    return FiniteMonoid(table, identity=0, labels=labels, name=name)


def _orient(lhs: Word, rhs):
    if rhs == ZERO:
        return lhs.letters, ZERO
    a, b = lhs.letters, rhs.letters
    if (len(a), a) < (len(b), b):
        a, b = b, a
    return a, b


def _reduce(letters, rules, zero_rules):
    """Apply the first matching rule at the leftmost position, repeatedly.
    Every rule strictly decreases the shortlex rank, so this terminates."""
    changed = True
    while changed:
        changed = False
        for pos in range(len(letters)):
            for lhs, rhs in zero_rules:
                if letters[pos:pos + len(lhs)] == lhs:
                    return None
            for lhs, rhs in rules:
                if letters[pos:pos + len(lhs)] == lhs:
                    letters = letters[:pos] + rhs + letters[pos + len(lhs):]
                    changed = True
                    break
            if changed:
                break
    return letters


def close_presentation(generators, relations, cap=10000, expected=None, name="") -> FiniteMonoid:
    """Bounded rewriting closure of a monoid presentation.

    Relations are pairs (Word, Word) or (Word, "0"); they are oriented
    longer-to-shorter automatically.  The closure multiplies normal forms
    and reduces until no new element appears; exceeding ``cap`` raises
    ClosureError rather than returning a wrong monoid.  When ``expected``
    labels are given the computed element set must match them exactly.
    """
    rules = []
    zero_rules = []
    for lhs, rhs in relations:
        if isinstance(lhs, str):
            lhs = parse_word(lhs)
        if isinstance(rhs, str) and rhs != ZERO:
            rhs = parse_word(rhs)
        left, right = _orient(lhs, rhs)
        if right == ZERO:
            zero_rules.append((left, ZERO))
        elif left != right:
            rules.append((left, right))

    def reduce_word(letters):
        return _reduce(letters, rules, zero_rules)

    elements = [()]
    seen = {()}
    has_zero = False
    queue = []
    for g in generators:
        form = reduce_word((g,))
        if form is None:
            has_zero = True
        elif form not in seen:
            seen.add(form)
            elements.append(form)
            queue.append(form)

    while queue:
        if len(elements) > cap:
            raise ClosureError(f"presentation closure exceeded cap {cap}")
        u = queue.pop(0)
        for v in list(elements):
            for prod in (u + v, v + u):
                form = reduce_word(prod)
                if form is None:
                    has_zero = True
                elif form not in seen:
                    seen.add(form)
                    elements.append(form)
                    queue.append(form)

    ordered = sorted(elements, key=lambda f: (len(f), f))
    if has_zero:
        ordered.append(ZERO)
    index = {f: i for i, f in enumerate(ordered)}
    n = len(ordered)
    table = [[0] * n for _ in range(n)]
    for fa, a in index.items():
        for fb, b in index.items():
            if fa == ZERO or fb == ZERO:
                table[a][b] = index[ZERO]
                continue
            form = reduce_word(fa + fb)
            table[a][b] = index[ZERO] if form is None else index[form]
    labels = ["1"] + ["".join(f) for f in ordered[1:] if f != ZERO]
    if has_zero:
        labels.append("0")
    monoid = FiniteMonoid(table, identity=0, labels=labels, name=name or "presented")
    if expected is not None:
        got, want = set(labels), set(expected)
        if got != want:
            raise MonoidError(
                f"presentation closure mismatch: extra {sorted(got - want)}, "
                f"missing {sorted(want - got)}")
    return monoid


def direct_product(m1: FiniteMonoid, m2: FiniteMonoid) -> FiniteMonoid:
    n1, n2 = m1.order, m2.order
    table = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for a1 in range(n1):
        for a2 in range(n2):
            a = a1 * n2 + a2
            row1, row2 = m1.table[a1], m2.table[a2]
            for b1 in range(n1):
                for b2 in range(n2):
                    table[a][b1 * n2 + b2] = row1[b1] * n2 + row2[b2]
    labels = [f"({m1.labels[a1]},{m2.labels[a2]})"
              for a1 in range(n1) for a2 in range(n2)]
    return FiniteMonoid(table, identity=m1.identity * n2 + m2.identity,
                        labels=labels, name=f"{m1.name} x {m2.name}")


def dual_monoid(m: FiniteMonoid) -> FiniteMonoid:
    table = [[m.table[b][a] for b in range(m.order)] for a in range(m.order)]
    name = m.name[5:-1] if m.name.startswith("dual(") and m.name.endswith(")") else f"dual({m.name})"
    return FiniteMonoid(table, m.identity, m.labels, name=name)


def quotient_by_classes(m: FiniteMonoid, classes, name="") -> FiniteMonoid:
    """Quotient by the partition whose non-singleton blocks are given as
    lists of element labels; verifies that the partition is a congruence."""
    block_of = list(range(m.order))
    for cls in classes:
        members = [m.element(lab) for lab in cls]
        rep = min(members)
        for member in members:
            block_of[member] = rep
    reps = sorted(set(block_of))
    rep_index = {rep: i for i, rep in enumerate(reps)}
    for a in range(m.order):
        for b in range(m.order):
            if block_of[m.table[a][b]] != block_of[m.table[block_of[a]][block_of[b]]]:
                raise MonoidError(
                    f"not a congruence: products of {m.labels[a]},{m.labels[b]} "
                    "land in different classes")
    table = [[rep_index[block_of[m.table[ra][rb]]] for rb in reps] for ra in reps]
    labels = [m.labels[rep] for rep in reps]
    return FiniteMonoid(table, rep_index[block_of[m.identity]], labels,
                        name=name or f"{m.name}/~")


# ---------------------------------------------------------------------------
# Green's relations and structural predicates

@dataclass(frozen=True)
class GreenData:
    left_ideals: tuple
    right_ideals: tuple
    two_sided_ideals: tuple
    l_classes: tuple
    r_classes: tuple
    j_classes: tuple
    h_classes: tuple


def green(m: FiniteMonoid) -> GreenData:
    if m._green is not None:
        return m._green
    n = m.order
    left = []
    right = []
    two = []
    for a in range(n):
        left.append(frozenset(m.table[x][a] for x in range(n)))
        right.append(frozenset(m.table[a][x] for x in range(n)))
        two.append(frozenset(m.table[m.table[x][a]][y]
                             for x in range(n) for y in range(n)))

    def classes(key):
        buckets = {}
        for a in range(n):
            buckets.setdefault(key(a), []).append(a)
        return tuple(tuple(v) for v in sorted(buckets.values()))

    data = GreenData(
        tuple(left), tuple(right), tuple(two),
        classes(lambda a: left[a]),
        classes(lambda a: right[a]),
        classes(lambda a: two[a]),
        classes(lambda a: (left[a], right[a])),
    )
    m._green = data
    return data


def is_j_trivial(m: FiniteMonoid) -> bool:
    return all(len(cls) == 1 for cls in green(m).j_classes)


@dataclass(frozen=True)
class Aperiodicity:
    aperiodic: bool
    index: int | None  # least n with x^(n+1) = x^n for every element
    witness: int | None  # an element with period > 1, when not aperiodic


def aperiodicity(m: FiniteMonoid) -> Aperiodicity:
    best = 0
    for a in range(m.order):
        seen = {m.identity: 0}
        value = m.identity
        exponent = 0
        while True:
            value = m.table[value][a]
            exponent += 1
            if value in seen:
                period = exponent - seen[value]
                if period != 1:
                    return Aperiodicity(False, None, a)
                best = max(best, seen[value])
                break
            seen[value] = exponent
    return Aperiodicity(True, best, None)


def is_aperiodic(m: FiniteMonoid, n=None) -> bool:
    result = aperiodicity(m)
    if not result.aperiodic:
        return False
    return True if n is None else result.index <= n


def is_completely_regular(m: FiniteMonoid) -> bool:
    idem = set(m.idempotents())
    return all(any(a in idem for a in cls) for cls in green(m).h_classes)


def idempotents_commute(m: FiniteMonoid) -> bool:
    idem = m.idempotents()
    return all(m.table[e][f] == m.table[f][e] for e in idem for f in idem)


def idempotents_central(m: FiniteMonoid) -> bool:
    idem = m.idempotents()
    return all(m.table[e][a] == m.table[a][e]
               for e in idem for a in range(m.order))


# ---------------------------------------------------------------------------
# isomorphism search

def _element_profile(m: FiniteMonoid, data: GreenData, a):
    seen = {m.identity: 0}
    value = m.identity
    exponent = 0
    while True:
        value = m.table[value][a]
        exponent += 1
        if value in seen:
            index, period = seen[value], exponent - seen[value]
            break
        seen[value] = exponent
    return (m.table[a][a] == a, index, period,
            len(data.left_ideals[a]), len(data.right_ideals[a]),
            len(data.two_sided_ideals[a]))


def find_isomorphism(m1: FiniteMonoid, m2: FiniteMonoid):
    """Backtracking search for a table isomorphism; None when there is none.
    The identity (and the zero, when present) are matched up front."""
    if m1.order != m2.order:
        return None
    if (m1.zero is None) != (m2.zero is None):
        return None
    d1, d2 = green(m1), green(m2)
    profiles1 = [_element_profile(m1, d1, a) for a in range(m1.order)]
    profiles2 = [_element_profile(m2, d2, a) for a in range(m2.order)]
    if sorted(profiles1) != sorted(profiles2):
        return None
    n = m1.order
    mapping = [None] * n
    used = [False] * n

    def assign(a, b):
        mapping[a] = b
        used[b] = True

    assign(m1.identity, m2.identity)
    if m1.zero is not None and m1.zero != m1.identity:
        if used[m2.zero]:
            return None
        assign(m1.zero, m2.zero)

    free = [a for a in range(n) if mapping[a] is None]

    def consistent(a):
        fa = mapping[a]
        for b in range(n):
            fb = mapping[b]
            if fb is None:
                continue
            ab, ba = m1.table[a][b], m1.table[b][a]
            if mapping[ab] is not None and m2.table[fa][fb] != mapping[ab]:
                return False
            if mapping[ba] is not None and m2.table[fb][fa] != mapping[ba]:
                return False
        return True

    def backtrack(i):
        if i == len(free):
            return True
        a = free[i]
        for b in range(n):
            if used[b] or profiles2[b] != profiles1[a]:
                continue
            assign(a, b)
            if consistent(a) and backtrack(i + 1):
                return True
            mapping[a] = None
            used[b] = False
        return False

    if not backtrack(0):
        return None
    # closure products may have been skipped while partial; verify fully
    for a in range(n):
        for b in range(n):
            if mapping[m1.table[a][b]] != m2.table[mapping[a]][mapping[b]]:
                return None
    return list(mapping)


# ---------------------------------------------------------------------------
# table files

def parse_monoid_file(text: str, name=""):
    """Parse the table file format; returns (monoid, presentation, checks).

    ``presentation`` is (generators, relations) when the file carries one,
    for cross-validation against the stored table.  ``checks`` collects
    optional ``check`` lines (order, jtrivial, aperiodic-index).
    """
    order = None
    identity = None
    labels = None
    rows = []
    generators = None
    relations = []
    checks = {}
    section = "head"
    for raw_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "table":
            section = "table"
            continue
        if line == "presentation":
            section = "presentation"
            continue
        parts = line.split()
        if section == "head":
            if parts[0] == "order":
                order = int(parts[1])
            elif parts[0] == "identity":
                identity = int(parts[1])
            elif parts[0] == "names":
                labels = parts[1:]
            elif parts[0] == "name":
                name = parts[1]
            elif parts[0] == "check":
                checks[parts[1]] = parts[2]
            else:
                raise MonoidError(f"line {raw_number}: unknown directive {parts[0]!r}")
        elif section == "table":
            if parts[0] == "check":
                checks[parts[1]] = parts[2]
                continue
            rows.append([int(p) for p in parts])
            if order is not None and len(rows) == order:
                section = "head"
        elif section == "presentation":
            if parts[0] == "generators":
                generators = parts[1:]
            elif parts[0] == "rel":
                body = line[len("rel"):].strip()
                left, right = body.split("=", 1)
                right = right.strip()
                relations.append((parse_word(left),
                                  ZERO if right == ZERO else parse_word(right)))
            elif parts[0] == "check":
                checks[parts[1]] = parts[2]
            else:
                raise MonoidError(f"line {raw_number}: unknown directive {parts[0]!r}")
    if order is None or identity is None:
        raise MonoidError("file needs 'order' and 'identity' lines")
    if len(rows) != order:
        raise MonoidError(f"expected {order} table rows, got {len(rows)}")
    monoid = FiniteMonoid(rows, identity, labels, name=name)
    presentation = (generators, relations) if generators else None
    return monoid, presentation, checks


def format_monoid_file(m: FiniteMonoid) -> str:
    lines = [f"order {m.order}", f"identity {m.identity}",
             "names " + " ".join(m.labels), "table"]
    for row in m.table:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"
