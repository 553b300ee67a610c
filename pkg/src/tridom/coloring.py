"""Proper 4-colorings and the partial coloring that feeds the assembly stage.

The partial coloring is built on an auxiliary triangulation G': delete a
maximal independent set I of 4-vertices (none next to a 3-vertex), close
every resulting 4-face with a chord between two degree->=6 corners, color
G', improve it by local recoloring on the resulting "special" 4-cycles and
finally color each deleted vertex whose link shows only three colors.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Mapping

from .errors import BudgetExhausted, NoHeavyDiagonal, PsiInvariantViolation
from .planar import PlaneGraph, Triangulation, delete_vertices

COLORS = (1, 2, 3, 4)
ALL_COLORS = frozenset(COLORS)

DEFAULT_RESTARTS = 32
NODES_PER_VERTEX = 200

Adjacency = Mapping[int, set[int]]


@dataclass
class Coloring:
    assignment: dict[int, int]
    restart: int = 0
    method: str = "kempe"
    nodes: int = 0

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]


@dataclass
class PartialColoring:
    assignment: dict[int, int | None]

    @property
    def uncolored(self) -> set[int]:
        return {v for v, c in self.assignment.items() if c is None}

    def color_class(self, i: int) -> set[int]:
        return {v for v, c in self.assignment.items() if c == i}

    @property
    def classes(self) -> dict[int, set[int]]:
        return {i: self.color_class(i) for i in COLORS}

    def seen(self, v: int, adj: Adjacency) -> set[int]:
        """Colors present in the closed neighborhood of v."""
        res = {self.assignment[w] for w in adj[v]}
        res.add(self.assignment[v])
        res.discard(None)
        return res  # type: ignore[return-value]


@dataclass
class SpecialCycleIndex:
    cycles: dict[int, tuple[int, int, int, int]] = field(default_factory=dict)
    diagonals: dict[int, tuple[int, int]] = field(default_factory=dict)
    by_vertex: dict[int, list[int]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.cycles)


def _as_adjacency(g: PlaneGraph | Adjacency) -> dict[int, set[int]]:
    if isinstance(g, PlaneGraph):
        return g.adjacency()
    return {v: set(ws) for v, ws in g.items()}


def is_proper(adj: Adjacency, color: Mapping[int, int | None]) -> bool:
    return all(color[u] is None or color[u] != color[w] for u in adj for w in adj[u])


# -- 4-coloring ----------------------------------------------------------

def _smallest_last(adj: Adjacency, rng: random.Random) -> list[int]:
    deg = {v: len(ws) for v, ws in adj.items()}
    tie = {v: rng.random() for v in adj}
    heap = [(d, tie[v], v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed: set[int] = set()
    order = []
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        for w in adj[v]:
            if w not in removed:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], tie[w], w))
    return order


def _kempe_chain(adj: Adjacency, color: dict[int, int], start: int, a: int, b: int) -> set[int]:
    chain = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in chain and color.get(y) in (a, b):
                chain.add(y)
                stack.append(y)
    return chain


def _free_by_kempe(adj: Adjacency, color: dict[int, int], v: int) -> int | None:
    """Try to free a color at v by swapping {a, b} Kempe chains that hold every
    a-neighbor of v but no b-neighbor."""
    nbrs = [w for w in adj[v] if w in color]
    for a in COLORS:
        starts = [w for w in nbrs if color[w] == a]
        for b in COLORS:
            if b == a:
                continue
            chain: set[int] = set()
            for w in starts:
                if w not in chain:
                    chain |= _kempe_chain(adj, color, w, a, b)
            if any(color[w] == b for w in nbrs if w in chain):
                continue
            for x in chain:
                color[x] = b if color[x] == a else a
            return a
    return None


def _kempe_pass(adj: Adjacency, rng: random.Random, budget: int) -> tuple[dict[int, int] | None, int]:
    order = _smallest_last(adj, rng)
    color: dict[int, int] = {}
    nodes = 0
    for v in reversed(order):
        nodes += 1
        used = {color[w] for w in adj[v] if w in color}
        free = [c for c in COLORS if c not in used]
        if free:
            color[v] = free[0]
            continue
        nodes += 1
        c = _free_by_kempe(adj, color, v)
        if c is None or nodes > budget:
            return None, nodes
        color[v] = c
    return color, nodes


def _dsatur_backtrack(adj: Adjacency, rng: random.Random, budget: int) -> tuple[dict[int, int] | None, int]:
    verts = list(adj)
    tie = {v: rng.random() for v in verts}
    color: dict[int, int] = {}
    # stack frames: (vertex, remaining colors to try)
    stack: list[tuple[int, list[int]]] = []
    nodes = 0

    def pick() -> int | None:
        best, key = None, None
        for v in verts:
            if v in color:
                continue
            sat = len({color[w] for w in adj[v] if w in color})
            k = (sat, len(adj[v]), tie[v])
            if key is None or k > key:
                best, key = v, k
        return best

    v = pick()
    if v is None:
        return color, 0
    stack.append((v, [c for c in COLORS if c not in {color.get(w) for w in adj[v]}]))
    while stack:
        nodes += 1
        if nodes > budget:
            return None, nodes
        v, options = stack[-1]
        color.pop(v, None)
        if not options:
            stack.pop()
            continue
        color[v] = options.pop(0)
        w = pick()
        if w is None:
            return color, nodes
        stack.append((w, [c for c in COLORS if c not in {color.get(x) for x in adj[w]}]))
    return None, nodes


def four_color(g: PlaneGraph | Adjacency, budget: int | None = None,
               restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> Coloring:
    """Proper coloring with colors 1..4 of a planar (multi)graph.

    Each restart colors in reverse smallest-last order, resolving any vertex
    that sees all four colors with a Kempe-chain interchange.  If no
    interchange works the restart falls back to DSATUR-ordered backtracking.
    ``budget`` caps the search nodes per restart (default ``200 n``).
    """
    adj = _as_adjacency(g)
    if budget is None:
        budget = NODES_PER_VERTEX * max(len(adj), 1)
    total = 0
    for r in range(restarts):
        rng = random.Random(seed * 1_000_003 + r)
        color, nodes = _kempe_pass(adj, rng, budget)
        total += nodes
        if color is not None:
            return Coloring(color, restart=r, method="kempe", nodes=total)
        color, nodes = _dsatur_backtrack(adj, rng, budget)
        total += nodes
        if color is not None:
            return Coloring(color, restart=r, method="dsatur", nodes=total)
    raise BudgetExhausted(f"no 4-coloring found in {restarts} restarts of {budget} nodes")


# -- the partial coloring ------------------------------------------------

def select_I(t: PlaneGraph) -> list[int]:
    """Greedy (ascending label) maximal independent set of 4-vertices that
    have no 3-vertex neighbor."""
    chosen: list[int] = []
    blocked: set[int] = set()
    for v in t.vertices():
        if t.degree(v) != 4 or v in blocked:
            continue
        nbrs = t.neighbors(v)
        if any(t.degree(w) == 3 for w in nbrs):
            continue
        chosen.append(v)
        blocked |= nbrs
    return chosen


def build_Gprime(t: Triangulation, independent: list[int]) -> tuple[Triangulation, SpecialCycleIndex]:
    """Delete I and close each 4-face with a chord joining two 6+-vertices.

    When both diagonals of a 4-face are heavy the one with the smaller sorted
    label pair is used.  The chords may duplicate existing edges.
    """
    index = SpecialCycleIndex()
    if not independent:
        return t, index
    links = {frozenset(t.neighbors(u)): u for u in independent}
    if len(links) != len(independent):
        raise NoHeavyDiagonal("two deleted vertices share the same link")
    g, patches = delete_vertices(t, independent)
    g.simple = False
    for patch in patches:
        u = links[frozenset(patch.walk)]
        b = tuple(patch.walk)
        pairs = []
        for i in (0, 1):
            p, q = b[i], b[i + 2]
            if t.degree(p) >= 6 and t.degree(q) >= 6:
                pairs.append((min(p, q), max(p, q), i))
        if not pairs:
            raise NoHeavyDiagonal(f"4-face {list(b)} around {u} has no heavy diagonal")
        p, q, i = min(pairs)
        g._insert_in_corners(patch.darts, i, i + 2)
        index.cycles[u] = b  # type: ignore[assignment]
        index.diagonals[u] = (p, q)
        for v in b:
            index.by_vertex.setdefault(v, []).append(u)
    return g.as_triangulation(simple=False), index


def count_three_colored(index: SpecialCycleIndex, phi: Mapping[int, int]) -> int:
    return sum(len({phi[x] for x in b}) == 3 for b in index.cycles.values())


def optimize_special_cycles(gprime: PlaneGraph | Adjacency, phi: Mapping[int, int],
                            index: SpecialCycleIndex, degree: Mapping[int, int]) -> tuple[dict[int, int], int]:
    """Local search for more 3-colored special cycles.

    A move recolors a 5^- vertex v (degree taken in the original graph G)
    lying on a 4-colored special cycle when v lies on no 3-colored special
    cycle and its closed G'-neighborhood misses some color.  Every move
    strictly raises the number of 3-colored special cycles, so the loop stops
    after at most ``len(index)`` moves.  Returns the coloring at the fixpoint
    and the number of moves made.
    """
    adj = _as_adjacency(gprime)
    phi = dict(phi)

    def colors_of(u: int) -> int:
        return len({phi[x] for x in index.cycles[u]})

    moves = 0
    count = count_three_colored(index, phi)
    progress = True
    while progress:
        progress = False
        for u in sorted(index.cycles):
            if colors_of(u) != 4:
                continue
            for v in index.cycles[u]:
                if degree[v] > 5:
                    continue
                missing = ALL_COLORS - {phi[w] for w in adj[v]} - {phi[v]}
                if not missing:
                    continue
                if any(colors_of(w) == 3 for w in index.by_vertex[v]):
                    continue
                phi[v] = min(missing)
                moves += 1
                new_count = count_three_colored(index, phi)
                assert new_count > count, "recoloring did not add a 3-colored special cycle"
                count = new_count
                progress = True
                break
    return phi, moves


def check_psi(t: PlaneGraph | Adjacency, psi: PartialColoring) -> None:
    """Raise PsiInvariantViolation unless psi is proper, leaves only
    4-vertices uncolored, shows every vertex at least three colors and shows
    every 5^- vertex all four."""
    adj = _as_adjacency(t)
    col = psi.assignment
    for v, ws in adj.items():
        c = col[v]
        if c is not None and any(col[w] == c for w in ws):
            raise PsiInvariantViolation(f"vertex {v} shares color {c} with a neighbor", v)
        if c is None and len(ws) != 4:
            raise PsiInvariantViolation(f"uncolored vertex {v} has degree {len(ws)}", v)
        seen = len(psi.seen(v, adj))
        if seen < 3:
            raise PsiInvariantViolation(f"vertex {v} sees only {seen} colors", v)
        if len(ws) <= 5 and seen != 4:
            raise PsiInvariantViolation(f"{len(ws)}-vertex {v} sees only {seen} colors", v)


def build_psi(t: PlaneGraph, independent: list[int], phi: Mapping[int, int],
              index: SpecialCycleIndex) -> PartialColoring:
    """Extend the G'-coloring to G: each deleted vertex takes the fourth color
    when its link is 3-colored and stays uncolored otherwise."""
    inside = set(independent)
    assignment: dict[int, int | None] = {v: phi[v] for v in t.vertices() if v not in inside}
    for u in independent:
        seen = {phi[w] for w in t.neighbors(u)}
        assignment[u] = min(ALL_COLORS - seen) if len(seen) == 3 else None
    psi = PartialColoring(assignment)
    if t.simple:
        check_psi(t, psi)
    return psi


@dataclass
class ColoringStage:
    independent: list[int]
    gprime: Triangulation
    index: SpecialCycleIndex
    phi: Coloring
    moves: int
    psi: PartialColoring


def partial_coloring(t: Triangulation, seed: int = 0, budget: int | None = None,
                     restarts: int = DEFAULT_RESTARTS) -> ColoringStage:
    """select_I -> build_Gprime -> four_color -> optimize -> build_psi."""
    independent = select_I(t)
    gprime, index = build_Gprime(t, independent)
    adj = gprime.adjacency()
    phi = four_color(adj, budget=budget, restarts=restarts, seed=seed)
    best, moves = optimize_special_cycles(adj, phi.assignment, index, t.deg)
    psi = build_psi(t, independent, best, index)
    return ColoringStage(independent, gprime, index, phi, moves, psi)
