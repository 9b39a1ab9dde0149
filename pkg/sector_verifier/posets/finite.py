"""Finite posets with involution: the brute-force oracle backend.

File format, one declaration per line (``#`` starts a comment)::

    nodes a b c a' b' c'
    order a b
    involution a a'
    spread a b

``order`` pairs are closed transitively, ``involution`` pairs are symmetric,
and the optional ``spread`` pairs define the monotone endomap used for
spread arithmetic in the sector calculus.
"""

import itertools
import logging
import random
from collections import deque
from pathlib import Path
from typing import Iterable, Iterator

import networkx as nx

from sector_verifier.errors import ConstructionFailed, InvalidPoset
from sector_verifier.posets.core import (
    MutuallyDisjointZigZag,
    PosetBackend,
    ZigZag,
    is_q_small,
)

logger = logging.getLogger(__name__)


class FinitePoset(PosetBackend):
    """An explicit finite poset with an order-reversing involution."""

    exhaustive = True

    def __init__(
        self,
        nodes: Iterable[str],
        order: Iterable[tuple[str, str]],
        involution: dict[str, str],
        spread: dict[str, str] | None = None,
        name: str = "finite",
    ):
        self.name = name
        self.nodes: tuple[str, ...] = tuple(dict.fromkeys(nodes))
        self._index = {n: i for i, n in enumerate(self.nodes)}
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        for a, b in order:
            for n in (a, b):
                if n not in self._index:
                    raise InvalidPoset(f"order mentions undeclared node {n!r}")
            if a != b:
                graph.add_edge(a, b)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise InvalidPoset(f"order is not antisymmetric: cycle {cycle}")
        closure = nx.transitive_closure_dag(graph)
        self._up = {n: frozenset(closure.successors(n)) | {n} for n in self.nodes}
        self._down = {n: frozenset(closure.predecessors(n)) | {n} for n in self.nodes}
        self._inv = dict(involution)
        self._check_involution()
        self._spread = dict(spread or {})
        self._check_spread()

    def _check_involution(self) -> None:
        for n in self.nodes:
            if n not in self._inv:
                raise InvalidPoset(f"involution undefined on {n!r}")
            m = self._inv[n]
            if m not in self._index:
                raise InvalidPoset(f"involution maps {n!r} outside the poset")
            if self._inv.get(m) != n:
                raise InvalidPoset(f"involution is not involutive at {n!r}")
        for a in self.nodes:
            for b in self._up[a]:
                if self._inv[a] not in self._up[self._inv[b]]:
                    raise InvalidPoset(f"involution does not reverse {a!r} <= {b!r}")

    def _check_spread(self) -> None:
        if not self._spread:
            return
        for n in self.nodes:
            image = self._spread.get(n)
            if image is None:
                raise InvalidPoset(f"spread map undefined on {n!r}")
            if not self.leq(n, image):
                raise InvalidPoset(f"spread map is not enlarging at {n!r}")
        for a in self.nodes:
            for b in self._up[a]:
                if not self.leq(self._spread[a], self._spread[b]):
                    raise InvalidPoset(f"spread map is not monotone at {a!r} <= {b!r}")

    def leq(self, p: str, q: str) -> bool:
        return q in self._up[p]

    def involution(self, p: str) -> str:
        return self._inv[p]

    def owns(self, p) -> bool:
        return isinstance(p, str) and p in self._index

    def equal(self, p: str, q: str) -> bool:
        return p == q

    def elements(self) -> tuple[str, ...]:
        return self.nodes

    def down(self, p: str) -> list[str]:
        """Elements below p, in declaration order."""
        return [n for n in self.nodes if n in self._down[p]]

    def up(self, p: str) -> list[str]:
        return [n for n in self.nodes if n in self._up[p]]

    def enlarge(self, p: str, times: int = 1) -> str:
        if not self._spread:
            if times == 0:
                return p
            raise InvalidPoset(f"{self.name} declares no spread map")
        for _ in range(times):
            p = self._spread[p]
        return p

    @property
    def has_spread(self) -> bool:
        return bool(self._spread)

    def cap_candidate(self, p: str, q: str) -> str | None:
        common = [n for n in self.nodes if n in self._down[p] and n in self._down[q]]
        if not common:
            return None
        # prefer a maximal common lower bound
        for n in common:
            if not any(m != n and self.leq(n, m) for m in common):
                return n
        return common[0]

    def split(self, p: str) -> tuple[str, str] | None:
        below = self.down(p)
        for r, s in itertools.combinations(below, 2):
            if self.leq(r, self._inv[s]):
                return r, s
        return None

    def random_element(self, rng: random.Random) -> str:
        return rng.choice(self.nodes)

    def random_below(self, p: str, rng: random.Random) -> str:
        return rng.choice(self.down(p))

    def ga3_zigzag(self, pt: str, ph: str, p: str, q: str) -> ZigZag:
        zz = search_ga3_zigzag(self, pt, ph, p, q)
        if zz is None:
            raise ConstructionFailed(
                f"no GA3 zig-zag from {pt} to {ph} inside {p} for {q}", ["finite ga3 search: disconnected"]
            )
        return zz

    def to_text(self) -> str:
        lines = ["nodes " + " ".join(self.nodes)]
        for a in self.nodes:
            for b in self.nodes:
                if a != b and self.leq(a, b):
                    lines.append(f"order {a} {b}")
        done: set[str] = set()
        for a in self.nodes:
            if a not in done:
                lines.append(f"involution {a} {self._inv[a]}")
                done.update((a, self._inv[a]))
        if self._spread:
            for a in self.nodes:
                lines.append(f"spread {a} {self._spread[a]}")
        return "\n".join(lines) + "\n"


def parse_finite_poset(text: str, name: str = "finite") -> FinitePoset:
    """Parses the line format described in the module docstring.

    Raises:
        InvalidPoset: On unknown keywords, wrong arity or failed poset laws.
    """
    nodes: list[str] = []
    order: list[tuple[str, str]] = []
    involution: dict[str, str] = {}
    spread: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *args = line.split()
        if keyword == "nodes":
            nodes.extend(args)
        elif keyword in ("order", "involution", "spread"):
            if len(args) != 2:
                raise InvalidPoset(f"line {lineno}: {keyword} takes two nodes")
            a, b = args
            if keyword == "order":
                order.append((a, b))
            elif keyword == "spread":
                spread[a] = b
            else:
                for x, y in ((a, b), (b, a)):
                    if involution.get(x, y) != y:
                        raise InvalidPoset(f"line {lineno}: {x!r} has two involution images")
                    involution[x] = y
        else:
            raise InvalidPoset(f"line {lineno}: unknown keyword {keyword!r}")
    if not nodes:
        raise InvalidPoset("no nodes declared")
    return FinitePoset(nodes, order, involution, spread or None, name=name)


def load_finite_poset(path: str | Path) -> FinitePoset:
    path = Path(path)
    logger.info("Loading finite poset from %s", path)
    return parse_finite_poset(path.read_text(), name=f"finite:{path.name}")


def discretized_circle(n: int) -> FinitePoset:
    """Arcs of a regular n-gon ordered by inclusion, involution = complement.

    Node ``a{i}_{k}`` is the arc of k consecutive edges starting at vertex i.
    """
    if n < 2:
        raise InvalidPoset("a discretized circle needs at least two edges")

    def node(i: int, k: int) -> str:
        return f"a{i % n}_{k}"

    def edges(i: int, k: int) -> frozenset[int]:
        return frozenset((i + t) % n for t in range(k))

    arcs = [(i, k) for k in range(1, n) for i in range(n)]
    sets = {node(i, k): edges(i, k) for i, k in arcs}
    order = [(a, b) for a in sets for b in sets if a != b and sets[a] < sets[b]]
    involution = {node(i, k): node(i + k, n - k) for i, k in arcs}
    return FinitePoset(sets, order, involution, name=f"circle{n}")


def chain_with_involution(k: int) -> FinitePoset:
    """A chain c0 < … < c{k-1} together with its mirrored chain of complements."""
    lower = [f"c{i}" for i in range(k)]
    upper = [f"c{i}'" for i in range(k)]
    order = [(lower[i], lower[i + 1]) for i in range(k - 1)]
    order += [(upper[i + 1], upper[i]) for i in range(k - 1)]
    involution = {a: b for a, b in zip(lower, upper)} | {b: a for a, b in zip(lower, upper)}
    return FinitePoset(lower + upper, order, involution, name=f"chain{k}")


def random_involutive_poset(rng: random.Random, orbits: int, attempts: int = 30) -> FinitePoset:
    """A random poset on ``orbits`` involution pairs without fixed points.

    Relations are inserted together with their mirror image and kept only
    while the order stays acyclic.
    """
    nodes = [f"x{i}" for i in range(orbits)] + [f"x{i}'" for i in range(orbits)]
    involution = {f"x{i}": f"x{i}'" for i in range(orbits)} | {f"x{i}'": f"x{i}" for i in range(orbits)}
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    for _ in range(attempts):
        a, b = rng.sample(nodes, 2)
        if b == involution[a] or graph.has_edge(a, b):
            continue
        mirror = (involution[b], involution[a])
        had_mirror = graph.has_edge(*mirror)
        graph.add_edges_from([(a, b), mirror])
        if not nx.is_directed_acyclic_graph(graph):
            graph.remove_edge(a, b)
            if not had_mirror:
                graph.remove_edge(*mirror)
    return FinitePoset(nodes, list(graph.edges), involution, name=f"random{orbits}")


def oracle_family(seed: int = 7, random_count: int = 46) -> list[FinitePoset]:
    """Discretized circles n = 3..6 plus seeded random involutive posets."""
    family = [discretized_circle(n) for n in range(3, 7)]
    family.append(chain_with_involution(3))
    rng = random.Random(seed)
    for i in range(random_count):
        family.append(random_involutive_poset(rng, orbits=2 + i % 3))
    return family


# Brute-force existence checks. Each one enumerates the whole poset.


def brute_caps(poset: FinitePoset, p: str, q: str) -> list[str]:
    return [n for n in poset.nodes if poset.leq(n, p) and poset.leq(n, q)]


def brute_splittings(poset: FinitePoset, p: str) -> Iterator[tuple[str, str]]:
    below = poset.down(p)
    for r in below:
        for s in below:
            if poset.leq(r, poset.involution(s)):
                yield r, s


def brute_q_small(poset: FinitePoset, p: str, q: str) -> bool:
    qi = poset.involution(q)
    has_r = any(poset.leq(p, r) and poset.leq(q, r) for r in poset.nodes)
    has_s = any(poset.leq(p, s) and poset.leq(qi, s) for s in poset.nodes)
    return has_r and has_s


def brute_small_indicators(poset: FinitePoset, p: str, q: str) -> list[str]:
    qi = poset.involution(q)
    return [
        n
        for n in poset.down(p)
        if (poset.leq(n, q) or poset.leq(n, qi)) and brute_q_small(poset, n, q)
    ]


def _ga3_graph(poset: FinitePoset, p: str, q: str) -> nx.Graph:
    qi = poset.involution(q)
    below = poset.down(p)
    indicators = [n for n in below if poset.leq(n, q) or poset.leq(n, qi)]
    smalls = [n for n in below if is_q_small(poset, n, q) is not None]
    graph = nx.Graph()
    graph.add_nodes_from(("z", n) for n in indicators)
    for y in smalls:
        for z in indicators:
            if poset.leq(z, y):
                graph.add_edge(("z", z), ("y", y))
    return graph


def search_ga3_zigzag(poset: FinitePoset, pt: str, ph: str, p: str, q: str) -> ZigZag | None:
    """Shortest zig-zag of q-indicators over q-small elements inside p."""
    if pt == ph:
        return ZigZag.trivial(pt)
    graph = _ga3_graph(poset, p, q)
    if ("z", pt) not in graph or ("z", ph) not in graph:
        return None
    try:
        path = nx.shortest_path(graph, ("z", pt), ("z", ph))
    except nx.NetworkXNoPath:
        return None
    return ZigZag.from_sequence([n for _, n in path])


def brute_reflection_exists(poset: FinitePoset, p: str) -> bool:
    pi = poset.involution(p)
    for c in poset.nodes:
        ci = poset.involution(c)
        if all(brute_caps(poset, x, y) for x, y in ((p, c), (p, ci), (pi, c), (pi, ci))):
            return True
    return False


def _mdz_moves(poset: FinitePoset, p: str, x: str, z: str) -> Iterator[tuple[tuple[str, str], tuple, tuple]]:
    """One-link moves from the state (x, z), changing one row at a time."""
    below = poset.down(p)
    for w in below:
        if poset.leq(x, w) and poset.leq(w, poset.involution(z)):
            for x2 in below:
                if poset.leq(x2, w) and x2 != x:
                    yield (x2, z), (w, x2), (z, z)
    for y in below:
        if poset.leq(z, y) and poset.leq(y, poset.involution(x)):
            for z2 in below:
                if poset.leq(z2, y) and z2 != z:
                    yield (x, z2), (x, x), (y, z2)


def search_mdz(
    poset: FinitePoset, p: str, start: tuple[str, str], targets: Iterable[tuple[str, str]]
) -> MutuallyDisjointZigZag | None:
    """Breadth-first search over disjoint pairs below p."""
    goal = set(targets)
    parents: dict[tuple[str, str], tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state in goal:
            links = []
            while parents[state] is not None:
                prev, top_link, bottom_link = parents[state]
                links.append((top_link, bottom_link))
                state = prev
            top, bottom = [start[0]], [start[1]]
            for top_link, bottom_link in reversed(links):
                top.extend(top_link)
                bottom.extend(bottom_link)
            return MutuallyDisjointZigZag.from_rows(top, bottom)
        for nxt, top_link, bottom_link in _mdz_moves(poset, p, *state):
            if nxt not in parents:
                parents[nxt] = (state, top_link, bottom_link)
                queue.append(nxt)
    return None
