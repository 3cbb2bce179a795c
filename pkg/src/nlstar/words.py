"""Words over a finite letter alphabet extended with binder tokens.

A word is a tuple of tokens.  Tokens are plain Python values:

* letters are lowercase identifiers (``"a"``, ``"req1"``, ...),
* register references are positive ints (``1`` refers to the outermost
  open binder, ``2`` to the next one, ...),
* ``OPEN`` allocates a fresh register and ``CLOSE`` deallocates the most
  recent one.

A word is *legal* when, scanning left to right with a counter of open
binders, the counter never goes negative and every register reference
``i`` satisfies ``i <= counter``.  Legal words may end with binders
still open; they are exactly the prefixes of fully bracketed words.

Because canonical words always name the k-th nested binder ``k``, the
level allocated by an ``OPEN`` is determined by its position; the token
itself carries no payload.  The serializer prints the level after
``<<`` purely as documentation (``<<1.``) and the parser accepts both
the bare and the decorated spelling.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

OPEN = "<<"
CLOSE = ">>"

Token = str | int
Word = tuple[Token, ...]

EPSILON: Word = ()

_LETTER_RE = re.compile(r"[a-z][a-z0-9]*\Z")
_DECORATED_OPEN_RE = re.compile(r"<<(\d+)\.\Z")


class IllegalWordError(ValueError):
    """Raised when an operation requires a legal word and got an illegal one."""


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    """Token alphabet: letters plus, when ``n > 0``, binders and registers 1..n."""

    sigma: frozenset
    n: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sigma", frozenset(self.sigma))
        if self.n < 0:
            raise ValueError("register bound must be non-negative")
        for letter in self.sigma:
            if not isinstance(letter, str) or not _LETTER_RE.match(letter):
                raise ValueError(f"invalid letter {letter!r}")

    def tokens(self) -> tuple:
        """All tokens in the fixed scan order: letters, registers, OPEN, CLOSE."""
        out = list(sorted(self.sigma))
        if self.n > 0:
            out.extend(range(1, self.n + 1))
            out.append(OPEN)
            out.append(CLOSE)
        return tuple(out)

    def with_depth(self, n: int) -> "Alphabet":
        return Alphabet(self.sigma, n)


def _scan(word):
    """Counter trace of ``word``; returns (final, peak) or None if ill-formed."""
    count = 0
    peak = 0
    for tok in word:
        if tok == OPEN:
            count += 1
            if count > peak:
                peak = count
        elif tok == CLOSE:
            count -= 1
            if count < 0:
                return None
        elif isinstance(tok, int):
            if not 1 <= tok <= count:
                return None
    return count, peak


def is_legal(word, alphabet: Alphabet) -> bool:
    """True iff ``word`` is legal and fits the alphabet (letters and depth)."""
    scanned = _scan(word)
    if scanned is None:
        return False
    _, peak = scanned
    if peak > alphabet.n:
        return False
    for tok in word:
        if isinstance(tok, str) and tok not in (OPEN, CLOSE) and tok not in alphabet.sigma:
            return False
    return True


def reg(word) -> int:
    """Number of binders still open at the end of a legal word."""
    scanned = _scan(word)
    if scanned is None:
        raise IllegalWordError(f"illegal word: {serialize_word(word)!r}")
    return scanned[0]


def depth(word) -> int:
    """Maximum binder nesting reached while scanning a legal word."""
    scanned = _scan(word)
    if scanned is None:
        raise IllegalWordError(f"illegal word: {serialize_word(word)!r}")
    return scanned[1]


def concat(s, e, alphabet: Alphabet):
    """``s + e`` if the result is legal for ``alphabet``, else None.

    None is the table-cell marker for cells that can never be queried.
    """
    word = tuple(s) + tuple(e)
    if not is_legal(word, alphabet):
        return None
    return word


def prefixes(word) -> list:
    """All prefixes of ``word``, shortest first, including epsilon and ``word``."""
    word = tuple(word)
    return [word[:i] for i in range(len(word) + 1)]


def serialize_word(word) -> str:
    """Render a word in the whitespace-separated text form.

    OPEN tokens of legal words are decorated with the register level they
    allocate (``<<2.``); ill-bracketed tails fall back to the bare ``<<``.
    """
    parts = []
    count = 0
    for tok in word:
        if tok == OPEN:
            count += 1
            parts.append(f"<<{count}." if count > 0 else OPEN)
        elif tok == CLOSE:
            count -= 1
            parts.append(CLOSE)
        elif isinstance(tok, int):
            parts.append(str(tok))
        else:
            parts.append(str(tok))
    return " ".join(parts)


def parse_word(text: str) -> tuple:
    """Parse the whitespace-separated word grammar.

    letter ::= [a-z][a-z0-9]*, "<<" opens, ">>" closes, integers are
    register references.  An open may carry its level as documentation
    ("<<1." or "<< 1 ."); the stated level must match the actual nesting.
    Legality is not enforced here: ">>" parses fine and is rejected later.
    """
    pieces = [(m.group(0), m.start()) for m in re.finditer(r"\S+", text)]
    out = []
    count = 0
    i = 0
    while i < len(pieces):
        piece, pos = pieces[i]
        decorated = _DECORATED_OPEN_RE.match(piece)
        if piece == OPEN or decorated:
            level = None
            if decorated:
                level = int(decorated.group(1))
                i += 1
            elif (
                i + 2 < len(pieces)
                and pieces[i + 1][0].isdigit()
                and pieces[i + 2][0] == "."
            ):
                level = int(pieces[i + 1][0])
                i += 3
            else:
                i += 1
            count += 1
            if level is not None and level != count:
                raise WordSyntaxError(
                    f"binder decorated with level {level} but {count} binders are open", pos
                )
            out.append(OPEN)
        elif piece == CLOSE:
            count -= 1
            out.append(CLOSE)
            i += 1
        elif piece.isdigit():
            idx = int(piece)
            if idx < 1:
                raise WordSyntaxError("register references start at 1", pos)
            out.append(idx)
            i += 1
        elif _LETTER_RE.match(piece):
            out.append(piece)
            i += 1
        else:
            raise WordSyntaxError(f"unrecognised token {piece!r}", pos)
    return tuple(out)
