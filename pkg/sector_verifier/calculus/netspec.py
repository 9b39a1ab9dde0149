"""Declared nets: regions, sector and intertwiner symbols, and poset facts.

A NetSpec names every region a term may mention and answers the poset
facts the rewrite rules ask for. Facts are evaluated on resolved regions
through the backend, never on names.
"""

import json
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from pydantic import BaseModel, Field

from sector_verifier.errors import (
    DegenerateGeometry,
    MalformedScript,
    NoCommonRegion,
    PreconditionViolated,
    RewriteError,
)
from sector_verifier.calculus.terms import RegionRef, Star, Term, Uni, format_term, parse_term
from sector_verifier.geometry.text import format_region, make_backend, parse_region
from sector_verifier.posets.core import Element, PosetBackend, check_backend, is_disjoint
from sector_verifier.posets.finite import FinitePoset, parse_finite_poset

logger = logging.getLogger(__name__)

_FACT = re.compile(r"^\s*(!?)(leq|disjoint)\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*$")


@dataclass(frozen=True)
class SectorSym:
    """A sector symbol, localized in a declared region or ambient.

    ``transport_of`` names the sector of the ambient net this one is
    transported from; ``identity`` marks the trivial sector.
    """

    name: str
    localization: str | None = None
    transport_of: str | None = None
    identity: bool = False

    @property
    def loc(self) -> RegionRef | None:
        return RegionRef.parse(self.localization) if self.localization else None


@dataclass(frozen=True)
class UnitarySym:
    """An intertwiner ``source → target``.

    A composite carries its defining word; it is read right to left, each
    ``Uni`` mapping its source to its target and each ``Star`` the reverse.
    """

    name: str
    source: str
    target: str
    region: str | None = None
    definition: Term | None = None
    unitary: bool = True


@dataclass(frozen=True)
class AlgSym:
    name: str
    region: RegionRef
    adjointable: bool = True


@dataclass(frozen=True)
class Fact:
    """A poset fact ``leq(a, b)`` or ``disjoint(a, b)``, possibly negated.

    ``origin`` is ``side`` for a rule's own side condition and ``member``
    for a fact produced by a membership computation.
    """

    kind: str
    left: RegionRef
    right: RegionRef
    origin: str = "side"
    negated: bool = False

    @classmethod
    def parse(cls, text: str, origin: str = "side") -> "Fact":
        m = _FACT.match(text)
        if not m:
            raise MalformedScript(f"bad fact {text!r}")
        return cls(m.group(2), RegionRef.parse(m.group(3)), RegionRef.parse(m.group(4)), origin, bool(m.group(1)))

    @property
    def key(self) -> tuple:
        return self.kind, self.left, self.right, self.negated

    def __str__(self) -> str:
        return f"{'!' if self.negated else ''}{self.kind}({self.left}, {self.right})"


def leq(a: RegionRef, b: RegionRef, origin: str = "side") -> Fact:
    return Fact("leq", a, b, origin)


def disjoint(a: RegionRef, b: RegionRef, origin: str = "side") -> Fact:
    return Fact("disjoint", a, b, origin)


@dataclass(frozen=True)
class Override:
    """``override name = [~]ref``: rebinds a declared region for one run."""

    name: str
    ref: RegionRef
    inverted: bool = False

    def __str__(self) -> str:
        return f"override {self.name} = {'~' if self.inverted else ''}{self.ref}"


class NetSpec:
    """A net of algebras over a backend, described by its symbols.

    Args:
        name: Identifier scripts use in their ``net`` line.
        backend: The poset the regions live in.
        regions: Declared region names and their elements.
        spread: 0 for strict duality, else the enlargement length.
        sectors, unitaries, generators: The symbols terms may use.
        transport_steps: Enlargements applied by the transport rules.

    Raises:
        ValueError: On duplicate symbol names.
        PreconditionViolated: On references to undeclared symbols.
        BackendMismatch: If a region is not an element of the backend.
    """

    def __init__(
        self,
        name: str,
        backend: PosetBackend,
        regions: dict[str, Element],
        spread=0,
        sectors: Iterable[SectorSym] = (),
        unitaries: Iterable[UnitarySym] = (),
        generators: Iterable[AlgSym] = (),
        transport_steps: int = 1,
    ):
        self.name = name
        self.backend = backend
        self.regions = dict(regions)
        self.spread = Fraction(spread) if not isinstance(spread, float) else spread
        if self.spread < 0:
            raise PreconditionViolated("spread must be >= 0")
        self.sectors = _index(sectors, "sector")
        self.unitaries = _index(unitaries, "unitary")
        self.generators = _index(generators, "generator")
        self.transport_steps = transport_steps
        self.notes: list[str] = []
        self._resolved: dict[RegionRef, Element] = {}
        self._holds: dict[tuple, bool] = {}
        self._unitary_regions: dict[str, RegionRef] = {}
        self._validate()

    def _validate(self) -> None:
        check_backend(self.backend, *self.regions.values())

        def declared(ref: RegionRef) -> bool:
            return ref.name in self.regions

        for s in self.sectors.values():
            if s.loc is not None and not declared(s.loc):
                raise PreconditionViolated(f"sector {s.name} is localized in undeclared region {s.loc}")
            if s.transport_of is not None and s.transport_of not in self.sectors:
                raise PreconditionViolated(f"sector {s.name} is transported from undeclared {s.transport_of}")
        for g in self.generators.values():
            if not declared(g.region):
                raise PreconditionViolated(f"generator {g.name} lives in undeclared region {g.region}")
        for u in self.unitaries.values():
            for end in (u.source, u.target):
                if end not in self.sectors:
                    raise PreconditionViolated(f"intertwiner {u.name} uses undeclared sector {end}")
            if u.region is not None and not declared(RegionRef.parse(u.region)):
                raise PreconditionViolated(f"intertwiner {u.name} tagged with undeclared region {u.region}")
        for u in self.unitaries.values():
            if u.definition is not None:
                self._check_definition(u)

    def _check_definition(self, u: UnitarySym) -> None:
        current = u.source
        for atom in reversed(u.definition.factors):
            inner = atom.atom if isinstance(atom, Star) else atom
            if not isinstance(inner, Uni) or inner.name not in self.unitaries or inner.name == u.name:
                raise PreconditionViolated(f"composite {u.name} may only use other declared intertwiners")
            part = self.unitaries[inner.name]
            come, go = (part.target, part.source) if isinstance(atom, Star) else (part.source, part.target)
            if come != current:
                raise PreconditionViolated(f"composite {u.name}: {inner.name} does not start at {current}")
            current = go
        if current != u.target:
            raise PreconditionViolated(f"composite {u.name} ends at {current}, not {u.target}")

    # symbols ---------------------------------------------------------------

    def sector(self, name: str) -> SectorSym:
        try:
            return self.sectors[name]
        except KeyError:
            raise RewriteError(f"undeclared sector {name}") from None

    def unitary(self, name: str) -> UnitarySym:
        try:
            return self.unitaries[name]
        except KeyError:
            raise RewriteError(f"undeclared intertwiner {name}") from None

    def generator(self, name: str) -> AlgSym:
        try:
            return self.generators[name]
        except KeyError:
            raise RewriteError(f"undeclared generator {name}") from None

    def is_unitary(self, name: str) -> bool:
        """A composite is unitary only when every part is."""
        u = self.unitary(name)
        if u.definition is None:
            return u.unitary
        parts = (a.atom if isinstance(a, Star) else a for a in u.definition)
        return u.unitary and all(self.is_unitary(p.name) for p in parts)

    def refs(self) -> list[RegionRef]:
        """Every declared name, plain then inverted, in name order."""
        return [RegionRef(n, inv) for n in sorted(self.regions) for inv in (False, True)]

    # regions ---------------------------------------------------------------

    def resolve(self, ref: RegionRef) -> Element:
        """The element a reference denotes: base, then involution, then enlargement.

        Raises:
            PreconditionViolated: For an undeclared name, or enlargement
                without a spread model.
            DegenerateGeometry: If enlargement degenerates.
        """
        if ref in self._resolved:
            return self._resolved[ref]
        if ref.name not in self.regions:
            raise PreconditionViolated(f"undeclared region {ref.name}")
        element = self.regions[ref.name]
        if ref.inv:
            element = self.backend.involution(element)
        element = self.enlarge(element, ref.plus)
        self._resolved[ref] = element
        return element

    def enlarge(self, element: Element, times: int = 1) -> Element:
        if times == 0 or self.spread == 0:
            return element
        if isinstance(self.backend, FinitePoset):
            return self.backend.enlarge(element, times)
        grow = getattr(self.backend, "enlarge", None)
        if grow is None:
            raise PreconditionViolated(f"the {self.backend.name} backend has no enlargement")
        for _ in range(times):
            element = grow(element, self.spread)
        return element

    def holds(self, fact: Fact) -> bool:
        if fact.key in self._holds:
            return self._holds[fact.key]
        a, b = self.resolve(fact.left), self.resolve(fact.right)
        if fact.kind == "leq":
            value = self.backend.leq(a, b)
        else:
            value = is_disjoint(self.backend, a, b)
        value = value != fact.negated
        self._holds[fact.key] = value
        return value

    def minimal(self, candidates: list[RegionRef], what: str) -> RegionRef:
        """The first candidate no other candidate lies strictly below; ties go to notes."""
        def below(a: RegionRef, b: RegionRef) -> bool:
            return self.holds(leq(a, b))

        mins = [c for c in candidates if not any(below(d, c) and not below(c, d) for d in candidates if d != c)]
        if len(mins) > 1:
            note = f"{what}: tie between {', '.join(str(m) for m in mins)}; using {mins[0]}"
            if note not in self.notes:
                self.notes.append(note)
        return mins[0]

    def unitary_region(self, name: str) -> RegionRef:
        """The region tagging an intertwiner.

        The declared region if there is one, else the smallest declared
        reference containing the localizations of both ends.

        Raises:
            NoCommonRegion: When the ends are not both localized or no
                declared reference contains them.
        """
        if name in self._unitary_regions:
            return self._unitary_regions[name]
        u = self.unitary(name)
        if u.region is not None:
            ref = RegionRef.parse(u.region)
        else:
            ends = [self.sector(u.source).loc, self.sector(u.target).loc]
            if None in ends:
                raise NoCommonRegion(f"intertwiner {name} has an ambient end and no declared region")
            found = [r for r in self.refs() if all(self.holds(leq(e, r)) for e in ends)]
            if not found:
                raise NoCommonRegion(f"no declared region contains both ends of {name}")
            ref = self.minimal(found, f"region of {name}")
        self._unitary_regions[name] = ref
        return ref

    def with_overrides(self, overrides: Iterable[Override]) -> "NetSpec":
        """A copy with some regions rebound; values resolve against this net."""
        regions = dict(self.regions)
        for o in overrides:
            if o.name not in self.regions:
                raise PreconditionViolated(f"override of undeclared region {o.name}")
            value = self.resolve(o.ref)
            regions[o.name] = self.backend.involution(value) if o.inverted else value
        return NetSpec(
            self.name,
            self.backend,
            regions,
            self.spread,
            self.sectors.values(),
            self.unitaries.values(),
            self.generators.values(),
            self.transport_steps,
        )

    def with_spread(self, spread) -> "NetSpec":
        return NetSpec(
            self.name,
            self.backend,
            self.regions,
            spread,
            self.sectors.values(),
            self.unitaries.values(),
            self.generators.values(),
            self.transport_steps,
        )

    # serialization -----------------------------------------------------------

    def to_file(self) -> "NetFile":
        finite = isinstance(self.backend, FinitePoset)
        return NetFile(
            name=self.name,
            backend="finite" if finite else self.backend.name,
            poset=self.backend.to_text() if finite else None,
            regions={k: format_region(self.backend, v) for k, v in sorted(self.regions.items())},
            spread=str(self.spread),
            transport_steps=self.transport_steps,
            sectors=[SectorModel(**vars(s)) for s in self.sectors.values()],
            unitaries=[
                UnitaryModel(
                    name=u.name,
                    source=u.source,
                    target=u.target,
                    region=u.region,
                    definition=format_term(u.definition) if u.definition is not None else None,
                    unitary=u.unitary,
                )
                for u in self.unitaries.values()
            ],
            generators=[
                GeneratorModel(name=g.name, region=str(g.region), adjointable=g.adjointable)
                for g in self.generators.values()
            ],
        )

    @classmethod
    def from_file(cls, data: "NetFile") -> "NetSpec":
        """Rebuilds a net from its file model.

        Raises:
            MalformedScript: If a region or term does not parse.
        """
        if data.backend == "finite":
            if data.poset is None:
                raise MalformedScript(f"net {data.name}: finite backend without a poset")
            backend = parse_finite_poset(data.poset, data.name)
        else:
            backend = make_backend(data.backend)
        try:
            regions = {k: parse_region(v, backend) for k, v in data.regions.items()}
        except (ValueError, DegenerateGeometry) as e:
            raise MalformedScript(f"net {data.name}: {e}") from e
        return cls(
            data.name,
            backend,
            regions,
            Fraction(data.spread),
            [SectorSym(**s.model_dump()) for s in data.sectors],
            [
                UnitarySym(
                    u.name,
                    u.source,
                    u.target,
                    u.region,
                    parse_term(u.definition) if u.definition is not None else None,
                    u.unitary,
                )
                for u in data.unitaries
            ],
            [AlgSym(g.name, RegionRef.parse(g.region), g.adjointable) for g in data.generators],
            data.transport_steps,
        )

    def __repr__(self) -> str:
        return f"NetSpec({self.name!r}, {self.backend.name}, spread={self.spread})"


def _index(items: Iterable, what: str) -> dict:
    out: dict = {}
    for item in items:
        if item.name in out:
            raise ValueError(f"{what} {item.name} is declared twice")
        out[item.name] = item
    return out


class SectorModel(BaseModel):
    name: str
    localization: str | None = None
    transport_of: str | None = None
    identity: bool = False


class UnitaryModel(BaseModel):
    name: str
    source: str
    target: str
    region: str | None = None
    definition: str | None = None
    unitary: bool = True


class GeneratorModel(BaseModel):
    name: str
    region: str
    adjointable: bool = True


class NetFile(BaseModel):
    """On-disk form of a NetSpec; regions are stored in structured text."""

    name: str
    backend: str
    poset: str | None = None
    regions: dict[str, str]
    spread: str = "0"
    transport_steps: int = 1
    sectors: list[SectorModel] = Field(default_factory=list)
    unitaries: list[UnitaryModel] = Field(default_factory=list)
    generators: list[GeneratorModel] = Field(default_factory=list)


def save_net(net: NetSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(net.to_file().model_dump(), indent=2, sort_keys=True) + "\n")


def load_net(path: str | Path) -> NetSpec:
    """Reads a net file.

    Raises:
        MalformedScript: If the file is not a well-formed net.
    """
    path = Path(path)
    try:
        return NetSpec.from_file(NetFile.model_validate_json(path.read_text()))
    except ValueError as e:
        raise MalformedScript(f"{path.name}: {e}") from e
