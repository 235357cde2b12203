"""Words over a countable variable alphabet.

A variable is a short identifier: one lowercase letter with an optional
single digit suffix (``x``, ``h1``, ``t7``).  A word is a finite sequence
of variables; the empty word is the multiplicative identity and is
written ``1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_VARIABLE_RE = re.compile(r"[a-z][0-9]?\Z")


def is_variable_name(name: str) -> bool:
    return bool(_VARIABLE_RE.match(name))


class WordError(ValueError):
    """Lexical or structural error in word text; carries the offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class Word:
    """Immutable sequence of variables; concatenation via ``*``.

    Equality is letter-sequence equality and words hash accordingly, so
    they are safe dictionary keys.  Ordering is shortlex, which gives a
    canonical "smallest witness" everywhere one is reported.
    """

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        letters = tuple(letters)
        for v in letters:
            if not is_variable_name(v):
                raise WordError(f"bad variable name {v!r}")
        object.__setattr__(self, "letters", letters)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        got = self.letters[i]
        return Word(got) if isinstance(i, slice) else got

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __lt__(self, other):
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __bool__(self):
        return bool(self.letters)

    def __str__(self):
        return " ".join(self.letters) if self.letters else "1"

    def __repr__(self):
        return f"Word({str(self)!r})"


EMPTY = Word()


def parse_word(text: str) -> Word:
    """Parse word text: powers expand eagerly, ``1`` is the empty word.

    Grammar: ``word := "1" | atom+``; ``atom := group | letterdigit``;
    ``group := "(" word ")" power?``; ``power := "^" [1-9][0-9]*``.
    Whitespace between atoms is ignored.
    """
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def parse_power():
        # returns exponent, defaulting to 1 when no "^" follows
        nonlocal pos
        if pos < n and text[pos] == "^":
            pos += 1
            start = pos
            if pos < n and text[pos] == "-":
                pos += 1
            while pos < n and text[pos].isdigit():
                pos += 1
            if start == pos:
                raise WordError("expected exponent after '^'", start)
            value = int(text[start:pos])
            if value <= 0:
                raise WordError(f"zero or negative exponent {value}", start)
            return value
        return 1

    def parse_atoms(stop_at_paren):
        nonlocal pos
        letters = []
        seen_any = False
        while True:
            skip_ws()
            if pos >= n:
                break
            ch = text[pos]
            if ch == ")":
                if stop_at_paren:
                    break
                raise WordError("unbalanced ')'", pos)
            if ch == "(":
                open_at = pos
                pos += 1
                inner = parse_atoms(stop_at_paren=True)
                skip_ws()
                if pos >= n or text[pos] != ")":
                    raise WordError("unclosed '('", open_at)
                pos += 1
                letters.extend(inner * parse_power())
            elif ch == "1":
                # "1" is only legal as a whole (sub)word
                if seen_any:
                    raise WordError("'1' cannot follow other atoms", pos)
                pos += 1
                skip_ws()
                if pos < n and not (stop_at_paren and text[pos] == ")"):
                    raise WordError("'1' must stand alone", pos)
                return []
            elif "a" <= ch <= "z":
                start = pos
                pos += 1
                if pos < n and text[pos].isdigit():
                    pos += 1
                name = text[start:pos]
                letters.extend([name] * parse_power())
            else:
                raise WordError(f"unexpected character {ch!r}", pos)
            seen_any = True
        if not seen_any:
            raise WordError("empty word text; write '1' for the empty word", pos)
        return letters

    return Word(parse_atoms(stop_at_paren=False))


def w(text: str) -> Word:
    """Shorthand parser, handy in tests and data loaders."""
    return parse_word(text)


def content(word: Word) -> frozenset:
    return frozenset(word.letters)


def occurrences(word: Word, variable: str) -> int:
    return word.letters.count(variable)


def simple_variables(word: Word):
    """Variables occurring exactly once, in order of appearance."""
    return [v for v in dict.fromkeys(word.letters) if occurrences(word, v) == 1]


def reverse(word: Word) -> Word:
    return Word(reversed(word.letters))


@dataclass(frozen=True)
class NaturalForm:
    """Decomposition u0 h1 u1 ... hm um: blocks of non-simple variables
    separated by the simple variables of the source word."""

    core_blocks: tuple
    separators: tuple

    def reassemble(self) -> Word:
        word = self.core_blocks[0]
        for sep, block in zip(self.separators, self.core_blocks[1:]):
            word = word * Word([sep]) * block
        return word


def natural_form(word: Word) -> NaturalForm:
    counts = {}
    for v in word.letters:
        counts[v] = counts.get(v, 0) + 1
    blocks = []
    separators = []
    current = []
    for v in word.letters:
        if counts[v] == 1:
            blocks.append(Word(current))
            separators.append(v)
            current = []
        else:
            current.append(v)
    blocks.append(Word(current))
    return NaturalForm(tuple(blocks), tuple(separators))
