"""Regular expressions with name binders.

AST nodes are frozen dataclasses.  Expressions come in two flavours
sharing the same node types:

* *nominal* expressions use identifier names (``Binder("n", Name("n"))``),
* *canonical* expressions use integer register levels: the binder at
  nesting depth d carries level d and every reference under it is an int
  in 1..d.  ``canonicalize`` turns a closed nominal expression into its
  canonical form; alpha-equivalent inputs map to the same tree.

Text grammar (precedence: star > juxtaposition > '+')::

    expr ::= '0' | 'eps' | letter | name | expr '+' expr
           | expr expr | expr '*' | '<' name '.' expr '>' | '(' expr ')'

Adjacent letters may be written without spaces when they split uniquely
into declared alphabet letters ("ab" over sigma={a,b}).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .words import CLOSE, OPEN, _LETTER_RE


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Letter:
    symbol: str


@dataclass(frozen=True)
class Name:
    ident: "str | int"


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


@dataclass(frozen=True)
class Concat:
    left: object
    right: object


@dataclass(frozen=True)
class Star:
    body: object


@dataclass(frozen=True)
class Binder:
    name: "str | int"
    body: object


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class FreeNameError(ValueError):
    """Raised when a closed expression is required but free names occur."""


class NotCanonicalError(ValueError):
    """Raised when an operation requires a canonical expression."""


# ---------------------------------------------------------------------------
# lexer / parser

_SYMBOLS = "<>.+*()"


def _lex(text: str):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _SYMBOLS:
            toks.append(("sym", ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif "a" <= ch <= "z":
            j = i
            while j < len(text) and (text[j].isdigit() or "a" <= text[j] <= "z"):
                j += 1
            toks.append(("ident", text[i:j], i))
            i = j
        else:
            raise RegexSyntaxError(f"unexpected character {ch!r}", i)
    return toks


def _split_letters(run: str, sigma: frozenset):
    """Split an identifier run into declared letters; None if impossible."""
    if run == "":
        return []
    for cut in range(len(run), 0, -1):
        if run[:cut] in sigma:
            rest = _split_letters(run[cut:], sigma)
            if rest is not None:
                return [run[:cut]] + rest
    return None


class _Parser:
    def __init__(self, toks, sigma, length):
        self.toks = toks
        self.sigma = sigma
        self.pos = 0
        self.length = length

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, self.length)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, symbol):
        kind, value, at = self.take()
        if kind != "sym" or value != symbol:
            raise RegexSyntaxError(f"expected {symbol!r}", at)

    def parse(self):
        node = self.sum()
        kind, value, at = self.peek()
        if kind is not None:
            raise RegexSyntaxError(f"unexpected {value!r}", at)
        return node

    def sum(self):
        node = self.cat()
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value == "+":
                self.take()
                node = Sum(node, self.cat())
            else:
                return node

    def cat(self):
        node = self.postfix()
        while self._starts_atom():
            node = Concat(node, self.postfix())
        return node

    def _starts_atom(self):
        kind, value, _ = self.peek()
        if kind in ("ident", "int"):
            return True
        return kind == "sym" and value in ("<", "(")

    def postfix(self):
        node = self.atom()
        while True:
            kind, value, _ = self.peek()
            if kind == "sym" and value == "*":
                self.take()
                node = Star(node)
            else:
                return node

    def atom(self):
        kind, value, at = self.take()
        if kind == "int":
            return Empty() if value == 0 else Name(value)
        if kind == "ident":
            if value == "eps":
                return Epsilon()
            split = _split_letters(value, self.sigma)
            if split is None:
                return Name(value)
            node = Letter(split[0])
            for sym in split[1:]:
                node = Concat(node, Letter(sym))
            return node
        if kind == "sym" and value == "(":
            node = self.sum()
            self.expect(")")
            return node
        if kind == "sym" and value == "<":
            hkind, head, hat = self.take()
            if hkind == "int":
                if head < 1:
                    raise RegexSyntaxError("binder levels start at 1", hat)
            elif hkind == "ident":
                if head in self.sigma:
                    raise RegexSyntaxError(f"binder name {head!r} collides with a letter", hat)
            else:
                raise RegexSyntaxError("expected a binder name", hat)
            self.expect(".")
            body = self.sum()
            self.expect(">")
            return Binder(head, body)
        raise RegexSyntaxError(f"unexpected {value!r}", at)


def parse_regex(text: str, sigma):
    """Parse ``text`` over the declared letter set ``sigma``."""
    sigma = frozenset(sigma)
    for letter in sigma:
        if not _LETTER_RE.match(letter):
            raise ValueError(f"invalid letter {letter!r}")
    return _Parser(_lex(text), sigma, len(text)).parse()


def infer_sigma(text: str) -> frozenset:
    """Guess the letter set of an expression text: binder-bound identifiers
    are names, every other identifier run splits into single-char letters."""
    toks = _lex(text)
    names = set()
    for i, (kind, value, _) in enumerate(toks):
        if kind == "sym" and value == "<" and i + 1 < len(toks):
            nkind, nvalue, _ = toks[i + 1]
            if nkind == "ident":
                names.add(nvalue)
    sigma = set()
    for i, (kind, value, at) in enumerate(toks):
        if kind != "ident" or value in names or value == "eps":
            continue
        if i > 0 and toks[i - 1][0] == "sym" and toks[i - 1][1] == "<":
            continue
        for ch in value:
            if not ("a" <= ch <= "z"):
                raise RegexSyntaxError(
                    f"cannot infer single-char letters from {value!r}", at
                )
            sigma.add(ch)
    clash = sigma & names
    if clash:
        raise RegexSyntaxError(f"names {sorted(clash)} collide with inferred letters", 0)
    return frozenset(sigma)


# ---------------------------------------------------------------------------
# structural queries

def free_names(node) -> frozenset:
    def walk(node, bound):
        if isinstance(node, Name):
            return frozenset() if node.ident in bound else frozenset([node.ident])
        if isinstance(node, Binder):
            return walk(node.body, bound | {node.name})
        if isinstance(node, (Sum, Concat)):
            return walk(node.left, bound) | walk(node.right, bound)
        if isinstance(node, Star):
            return walk(node.body, bound)
        return frozenset()

    return walk(node, frozenset())


def is_closed(node) -> bool:
    return not free_names(node)


def letters_of(node) -> frozenset:
    if isinstance(node, Letter):
        return frozenset([node.symbol])
    if isinstance(node, (Sum, Concat)):
        return letters_of(node.left) | letters_of(node.right)
    if isinstance(node, (Star,)):
        return letters_of(node.body)
    if isinstance(node, Binder):
        return letters_of(node.body)
    return frozenset()


def canonicalize(node):
    """Rename bound names to their nesting levels (outermost binder = 1).

    The rewrite is capture-avoiding: shadowed names resolve to the
    innermost enclosing binder.  The tree shape is preserved node for
    node; only binder names and references change.
    """
    missing = free_names(node)
    if missing:
        raise FreeNameError(f"expression has free names: {sorted(map(str, missing))}")

    def walk(node, level, env):
        if isinstance(node, Name):
            return Name(env[node.ident])
        if isinstance(node, Binder):
            body = walk(node.body, level + 1, {**env, node.name: level + 1})
            return Binder(level + 1, body)
        if isinstance(node, Sum):
            return Sum(walk(node.left, level, env), walk(node.right, level, env))
        if isinstance(node, Concat):
            return Concat(walk(node.left, level, env), walk(node.right, level, env))
        if isinstance(node, Star):
            return Star(walk(node.body, level, env))
        return node

    return walk(node, 0, {})


def is_canonical(node) -> bool:
    def walk(node, level):
        if isinstance(node, Name):
            return isinstance(node.ident, int) and 1 <= node.ident <= level
        if isinstance(node, Binder):
            return node.name == level + 1 and walk(node.body, level + 1)
        if isinstance(node, (Sum, Concat)):
            return walk(node.left, level) and walk(node.right, level)
        if isinstance(node, Star):
            return walk(node.body, level)
        return True

    return walk(node, 0)


def theta(node) -> int:
    """Binder-nesting depth bound of an expression."""
    if isinstance(node, (Sum, Concat)):
        return max(theta(node.left), theta(node.right))
    if isinstance(node, Star):
        return theta(node.body)
    if isinstance(node, Binder):
        return 1 + theta(node.body)
    return 0


def format_regex(node) -> str:
    """Render an expression; canonical trees print with integer names."""

    def fmt(node, prec):
        if isinstance(node, Empty):
            return "0"
        if isinstance(node, Epsilon):
            return "eps"
        if isinstance(node, Letter):
            return node.symbol
        if isinstance(node, Name):
            return str(node.ident)
        if isinstance(node, Binder):
            return f"<{node.name}. {fmt(node.body, 0)}>"
        if isinstance(node, Star):
            return fmt(node.body, 3) + "*"
        if isinstance(node, Concat):
            text = f"{fmt(node.left, 1)} {fmt(node.right, 2)}"
            return f"({text})" if prec > 1 else text
        if isinstance(node, Sum):
            text = f"{fmt(node.left, 0)} + {fmt(node.right, 1)}"
            return f"({text})" if prec > 0 else text
        raise TypeError(f"not a regex node: {node!r}")

    return fmt(node, 0)


# ---------------------------------------------------------------------------
# bounded denotation

def denote_bounded(cne, max_len: int) -> frozenset:
    """Exactly the denoted words of token-length <= max_len.

    Structural recursion; the star case iterates concatenation to a
    fixpoint, which terminates because only finitely many words fit the
    bound.  Binder bodies lose two tokens of budget for OPEN/CLOSE.
    """
    if not is_canonical(cne):
        raise NotCanonicalError(f"not canonical: {format_regex(cne)}")
    return _denote(cne, max_len)


@lru_cache(maxsize=65536)
def _denote(node, max_len):
    if max_len < 0:
        return frozenset()
    if isinstance(node, Empty):
        return frozenset()
    if isinstance(node, Epsilon):
        return frozenset([()])
    if isinstance(node, Letter):
        return frozenset([(node.symbol,)]) if max_len >= 1 else frozenset()
    if isinstance(node, Name):
        return frozenset([(node.ident,)]) if max_len >= 1 else frozenset()
    if isinstance(node, Sum):
        return _denote(node.left, max_len) | _denote(node.right, max_len)
    if isinstance(node, Concat):
        left = _denote(node.left, max_len)
        right = _denote(node.right, max_len)
        return frozenset(u + v for u in left for v in right if len(u) + len(v) <= max_len)
    if isinstance(node, Star):
        base = _denote(node.body, max_len)
        out = {()}
        frontier = {()}
        while frontier:
            new = set()
            for u in frontier:
                for v in base:
                    w = u + v
                    if len(w) <= max_len and w not in out:
                        out.add(w)
                        new.add(w)
            frontier = new
        return frozenset(out)
    if isinstance(node, Binder):
        inner = _denote(node.body, max_len - 2)
        return frozenset((OPEN,) + w + (CLOSE,) for w in inner)
    raise TypeError(f"not a regex node: {node!r}")
