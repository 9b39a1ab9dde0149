"""Terms of the sector calculus and their prefix text form.

A term is a word over four kinds of atoms: algebra generators ``Gen``,
intertwiners ``Uni``, adjoints ``Star`` of either, and sector applications
``App(π, q, t)`` standing for π_q(t). The empty word is the unit.

Text form::

    (one)                      the empty word
    (gen x) (uni u)            atoms
    (star (uni u))             adjoint of an atom
    (app pi q'+1 <term>)       π applied at region q'+1
    (mul <atom> <atom> ...)    a word of two or more factors
"""

import re
from dataclasses import dataclass
from typing import Iterator, Union

from sector_verifier.errors import MalformedScript, RewriteError

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
NAME = re.compile(rf"^{_NAME}$")
_REF = re.compile(rf"^({_NAME})('?)(?:\+(\d+))?$")
_TOKEN = re.compile(r"\(|\)|[^\s()]+")


@dataclass(frozen=True, order=True)
class RegionRef:
    """A declared region name, optionally inverted, then enlarged ``plus`` times."""

    name: str
    inv: bool = False
    plus: int = 0

    @classmethod
    def parse(cls, text: str) -> "RegionRef":
        m = _REF.match(text.strip())
        if not m:
            raise MalformedScript(f"bad region reference {text!r}")
        return cls(m.group(1), bool(m.group(2)), int(m.group(3) or 0))

    def enlarged(self, times: int = 1) -> "RegionRef":
        return RegionRef(self.name, self.inv, self.plus + times)

    def flipped(self) -> "RegionRef":
        """The involution of this reference; only defined without enlargement."""
        if self.plus:
            raise RewriteError(f"cannot take the involution of enlarged region {self}")
        return RegionRef(self.name, not self.inv)

    def __str__(self) -> str:
        text = self.name + ("'" if self.inv else "")
        return f"{text}+{self.plus}" if self.plus else text


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Uni:
    """An intertwiner symbol; unitary or not, as declared in the net."""

    name: str


@dataclass(frozen=True)
class Star:
    atom: Union[Gen, Uni]


@dataclass(frozen=True)
class App:
    sector: str
    region: RegionRef
    body: "Term"


Atom = Union[Gen, Uni, Star, App]


@dataclass(frozen=True)
class Term:
    factors: tuple = ()

    @classmethod
    def of(cls, *atoms: Atom) -> "Term":
        return cls(tuple(atoms))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.factors)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Term(self.factors[index])
        return self.factors[index]

    def __add__(self, other: "Term") -> "Term":
        return Term(self.factors + other.factors)

    def replace(self, start: int, end: int, new: "Term") -> "Term":
        return Term(self.factors[:start] + new.factors + self.factors[end:])

    def star(self) -> "Term":
        return Term(tuple(star_atom(a) for a in reversed(self.factors)))

    def __str__(self) -> str:
        return format_term(self)


ONE = Term()


def star_atom(atom: Atom) -> Atom:
    if isinstance(atom, Star):
        return atom.atom
    if isinstance(atom, App):
        return App(atom.sector, atom.region, atom.body.star())
    return Star(atom)


def app(sector: str, region: str | RegionRef, *body: Atom) -> App:
    """Shorthand used by builders: ``app("pi", "q'", Gen("x"))``."""
    ref = region if isinstance(region, RegionRef) else RegionRef.parse(region)
    return App(sector, ref, Term(body))


def is_intertwiner(atom: Atom) -> bool:
    return isinstance(atom, Uni) or (isinstance(atom, Star) and isinstance(atom.atom, Uni))


def generators(term: Term) -> list[tuple[str, bool]]:
    """Every generator occurrence with its star flag, depth first."""
    out: list[tuple[str, bool]] = []
    for atom in term:
        if isinstance(atom, Gen):
            out.append((atom.name, False))
        elif isinstance(atom, Star) and isinstance(atom.atom, Gen):
            out.append((atom.atom.name, True))
        elif isinstance(atom, App):
            out.extend(generators(atom.body))
    return out


# Paths ------------------------------------------------------------------

Path = tuple[int, ...]


def parse_path(text: str) -> Path:
    try:
        path = tuple(int(part) for part in text.strip().split("/"))
    except ValueError as e:
        raise MalformedScript(f"bad path {text!r}") from e
    if any(i < 0 for i in path):
        raise MalformedScript(f"bad path {text!r}")
    return path


def format_path(path: Path) -> str:
    return "/".join(str(i) for i in path)


def word_at(term: Term, path: Path) -> tuple[Term, int]:
    """The word addressed by all but the last index, and that last index."""
    for depth, i in enumerate(path[:-1]):
        if i >= len(term) or not isinstance(term[i], App):
            raise RewriteError(f"path {format_path(path)} does not descend into an application at depth {depth}")
        term = term[i].body
    return term, path[-1]


def edit_at(term: Term, path: Path, fn) -> Term:
    """Rebuilds ``term`` with ``fn(word, index)`` substituted at ``path``."""
    if not path:
        raise RewriteError("empty path")
    if len(path) == 1:
        return fn(term, path[0])
    i = path[0]
    if i >= len(term) or not isinstance(term[i], App):
        raise RewriteError(f"index {i} is not an application")
    atom = term[i]
    body = edit_at(atom.body, path[1:], fn)
    return term.replace(i, i + 1, Term.of(App(atom.sector, atom.region, body)))


def walk_apps(term: Term) -> Iterator[App]:
    for atom in term:
        if isinstance(atom, App):
            yield atom
            yield from walk_apps(atom.body)


# Text form --------------------------------------------------------------


def format_atom(atom: Atom) -> str:
    if isinstance(atom, Gen):
        return f"(gen {atom.name})"
    if isinstance(atom, Uni):
        return f"(uni {atom.name})"
    if isinstance(atom, Star):
        return f"(star {format_atom(atom.atom)})"
    return f"(app {atom.sector} {atom.region} {format_term(atom.body)})"


def format_term(term: Term) -> str:
    if not term.factors:
        return "(one)"
    if len(term) == 1:
        return format_atom(term[0])
    return "(mul " + " ".join(format_atom(a) for a in term) + ")"


class _Reader:
    def __init__(self, text: str):
        self.tokens = _TOKEN.findall(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise MalformedScript("unexpected end of term")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.take()
        if got != tok:
            raise MalformedScript(f"expected {tok!r}, got {got!r}")

    def name(self) -> str:
        tok = self.take()
        if not NAME.match(tok):
            raise MalformedScript(f"bad symbol name {tok!r}")
        return tok

    def term(self) -> Term:
        self.expect("(")
        head = self.take()
        if head == "one":
            self.expect(")")
            return ONE
        if head == "mul":
            factors: list[Atom] = []
            while self.peek() != ")":
                factors.extend(self.term().factors)
            self.take()
            return Term(tuple(factors))
        return Term.of(self._atom_tail(head))

    def atom(self) -> Atom:
        self.expect("(")
        return self._atom_tail(self.take())

    def _atom_tail(self, head: str) -> Atom:
        if head == "gen":
            atom: Atom = Gen(self.name())
        elif head == "uni":
            atom = Uni(self.name())
        elif head == "star":
            inner = self.atom()
            if not isinstance(inner, (Gen, Uni)):
                raise MalformedScript("star applies to a generator or an intertwiner")
            atom = Star(inner)
        elif head == "app":
            sector = self.name()
            region = RegionRef.parse(self.take())
            atom = App(sector, region, self.term())
        else:
            raise MalformedScript(f"unknown term head {head!r}")
        self.expect(")")
        return atom


def parse_term(text: str) -> Term:
    """Parses the prefix text form.

    Raises:
        MalformedScript: On any syntax error or trailing input.
    """
    reader = _Reader(text)
    term = reader.term()
    if reader.peek() is not None:
        raise MalformedScript(f"trailing input after term: {reader.peek()!r}")
    return term
