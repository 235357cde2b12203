"""Relatively free objects of var(M) as deterministic transition systems.

A state is the vector of evaluations of a word under every substitution
of the k generators into M; two words land in the same state exactly when
M satisfies the identity equating them.  Breadth-first closure from the
empty-word state builds the whole object when it fits under the state
cap; a blown cap yields partial statistics, never a wrong answer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .monoids import FiniteMonoid
from .words import Word

DEFAULT_STATE_CAP = 200_000


@dataclass
class FreeObject:
    monoid: FiniteMonoid
    generators: tuple
    transitions: list  # transitions[state][gen] -> state
    parents: list      # parents[state] = (prev_state, gen) or None for start
    complete: bool
    states_explored: int

    start = 0

    @property
    def n_states(self):
        return len(self.transitions)

    def step(self, state, gen_index):
        return self.transitions[state][gen_index]

    def run(self, word: Word):
        gen_index = {g: i for i, g in enumerate(self.generators)}
        state = self.start
        for v in word.letters:
            state = self.transitions[state][gen_index[v]]
        return state

    def representative(self, state) -> Word:
        letters = []
        while self.parents[state] is not None:
            state, gen = self.parents[state]
            letters.append(self.generators[gen])
        return Word(reversed(letters))

    def dump(self):
        lines = []
        for s in range(self.n_states):
            arrows = " ".join(f"{g} -> {self.transitions[s][j]}"
                              for j, g in enumerate(self.generators))
            lines.append(f"{s} [{self.representative(s)}] : {arrows}".rstrip(" :"))
        return lines


def build_free_object(m: FiniteMonoid, k: int, state_cap: int = DEFAULT_STATE_CAP,
                      generators=None) -> FreeObject:
    """BFS closure of the k-generated free object of var(M)."""
    if k < 0:
        raise ValueError("generator count must be >= 0")
    if generators is None:
        generators = tuple(f"g{i + 1}" for i in range(k))
    else:
        generators = tuple(generators)
        if len(generators) != k:
            raise ValueError("generator name count must equal k")
    n = m.order
    coords = n**k
    table = m.np_table
    # column j of the substitution grid, in lexicographic substitution order
    columns = [(np.arange(coords, dtype=np.int64) // (n ** (k - 1 - j))) % n
               for j in range(k)]
    start = np.full(coords, m.identity, dtype=np.int64)
    index = {start.tobytes(): 0}
    vectors = [start]
    transitions = []
    parents = [None]
    queue = deque([0])
    complete = True
    while queue:
        state = queue.popleft()
        while len(transitions) <= state:
            transitions.append([None] * k)
        vector = vectors[state]
        for j in range(k):
            succ = table[vector, columns[j]]
            key = succ.tobytes()
            to = index.get(key)
            if to is None:
                if len(vectors) >= state_cap:
                    complete = False
                    transitions[state][j] = None
                    continue
                to = len(vectors)
                index[key] = to
                vectors.append(succ)
                parents.append((state, j))
                queue.append(to)
            transitions[state][j] = to
    return FreeObject(m, generators, transitions, parents, complete, len(vectors))


# ---------------------------------------------------------------------------
# isoterm decision and word-class counting

@dataclass(frozen=True)
class IsotermResult:
    status: str  # "isoterm" | "not-isoterm" | "inconclusive"
    witness: Word | None = None
    states: int = 0


def _generators_for(word: Word):
    # variables in order of first occurrence; a fresh generator covers the
    # empty word, whose only candidate partners are powers of one variable
    seen = list(dict.fromkeys(word.letters))
    return tuple(seen) if seen else ("x",)


def _saturating_counts(auto: FreeObject):
    """Number of words reaching each state, saturated at 2 (least fixpoint
    of count(t) = [t is start] + sum of counts over incoming edges)."""
    incoming = [[] for _ in range(auto.n_states)]
    for s in range(auto.n_states):
        for to in auto.transitions[s]:
            if to is not None:
                incoming[to].append(s)
    counts = [0] * auto.n_states
    counts[auto.start] = 1
    queue = deque([auto.start])
    while queue:
        s = queue.popleft()
        for j in range(len(auto.generators)):
            to = auto.transitions[s][j]
            if to is None:
                continue
            fresh = min(2, (1 if to == auto.start else 0)
                        + sum(counts[u] for u in incoming[to]))
            if fresh != counts[to]:
                counts[to] = fresh
                queue.append(to)
    return counts


def _second_word(auto: FreeObject, word: Word, target):
    """Shortest word other than ``word`` reaching ``target`` (BFS over the
    product of the automaton with the prefix tracker of ``word``)."""
    gen_index = {g: i for i, g in enumerate(auto.generators)}
    letters = [gen_index[v] for v in word.letters]
    diverged = len(word) + 1
    start_node = (auto.start, 0)
    parent = {start_node: None}
    queue = deque([start_node])

    def accepted(node):
        state, matched = node
        return state == target and matched != len(letters)

    if accepted(start_node):
        return Word([])
    while queue:
        node = queue.popleft()
        state, matched = node
        for j in range(len(auto.generators)):
            to = auto.transitions[state][j]
            if to is None:
                continue
            if matched < len(letters) and letters[matched] == j:
                new_matched = matched + 1
            else:
                new_matched = diverged
            nxt = (to, new_matched)
            if nxt in parent:
                continue
            parent[nxt] = (node, j)
            if accepted(nxt):
                path = []
                walk = nxt
                while parent[walk] is not None:
                    walk, j = parent[walk]
                    path.append(auto.generators[j])
                return Word(reversed(path))
            queue.append(nxt)
    return None


def is_isoterm(m: FiniteMonoid, word: Word, state_cap: int = DEFAULT_STATE_CAP) -> IsotermResult:
    """A word is an isoterm for var(M) when no other word reaches its state."""
    auto = build_free_object(m, len(_generators_for(word)), state_cap,
                             _generators_for(word))
    if not auto.complete:
        return IsotermResult("inconclusive", states=auto.states_explored)
    target = auto.run(word)
    if _saturating_counts(auto)[target] <= 1:
        return IsotermResult("isoterm", states=auto.n_states)
    witness = _second_word(auto, word, target)
    return IsotermResult("not-isoterm", witness=witness, states=auto.n_states)


@dataclass(frozen=True)
class ClassCount:
    kind: str  # "finite" | "at-least" | "infinite" | "inconclusive"
    value: int | None = None

    def __str__(self):
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "at-least":
            return f">= {self.value}"
        return self.kind


def word_class_count(m: FiniteMonoid, word: Word, cap: int = 10**6,
                     state_cap: int = DEFAULT_STATE_CAP) -> ClassCount:
    """How many words var(M) equates with ``word``: an exact count when the
    relevant subgraph is acyclic, infinite when a cycle lies on some
    accepting path, "at least cap" when the exact count overflows."""
    auto = build_free_object(m, len(_generators_for(word)), state_cap,
                             _generators_for(word))
    if not auto.complete:
        return ClassCount("inconclusive")
    target = auto.run(word)

    reachable = {auto.start}
    queue = deque([auto.start])
    while queue:
        state = queue.popleft()
        for to in auto.transitions[state]:
            if to is not None and to not in reachable:
                reachable.add(to)
                queue.append(to)
    incoming = {s: [] for s in reachable}
    for s in reachable:
        for to in auto.transitions[s]:
            if to in incoming:
                incoming[to].append(s)
    coreachable = {target}
    queue = deque([target])
    while queue:
        state = queue.popleft()
        for s in incoming[state]:
            if s not in coreachable:
                coreachable.add(s)
                queue.append(s)
    relevant = reachable & coreachable

    # cycle within the relevant subgraph forces infinitely many words
    WHITE, GREY, BLACK = 0, 1, 2
    color = {s: WHITE for s in relevant}
    order = []

    def visit(root):
        stack = [(root, iter([t for t in auto.transitions[root] if t in relevant]))]
        color[root] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for to in it:
                if color[to] == GREY:
                    return False
                if color[to] == WHITE:
                    color[to] = GREY
                    stack.append((to, iter([t for t in auto.transitions[to] if t in relevant])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                order.append(node)
                stack.pop()
        return True

    for s in sorted(relevant):
        if color[s] == WHITE and not visit(s):
            return ClassCount("infinite")

    counts = {s: 0 for s in relevant}
    counts[auto.start] = 1
    for s in reversed(order):  # topological order
        for to in auto.transitions[s]:
            if to in counts:
                counts[to] += counts[s]
    total = counts[target]
    if total > cap:
        return ClassCount("at-least", cap)
    return ClassCount("finite", total)
