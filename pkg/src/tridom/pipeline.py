"""Certified construction of an independent dominating set of size at most
floor(n/3) in a simple triangulation.

``solve`` peels off facial triangles with degree vector (4,4,4), (4,4,5) or
(4,5,5) until none is left (or the graph is small enough for the exact
oracle), handles the remainder through the partial-coloring assembly, and
then unwinds the reductions, adding at most one vertex per level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .coloring import COLORS, ColoringStage, PartialColoring, partial_coloring
from .errors import (
    AssemblyInvariantViolation,
    CertificationFailed,
    CoverTooLarge,
    ExtensionFailed,
    NotBipartite,
    UnreducibleFace,
)
from .oracle import iota_exact
from .planar import (
    CYCLE3,
    CYCLE3_PENDANT,
    CYCLE4,
    CYCLE5,
    PATH3,
    PatchBoundary,
    PlaneGraph,
    Triangulation,
    add_chord,
    chord_faces,
    classify_boundary,
    delete_vertices,
    find_forbidden_face,
)

BASE_CASE_MAX_N = 12

C1_CYCLE3 = "C1_Cycle3"
C2_PATH3 = "C2_Path3"
C2_CYCLE4 = "C2_Cycle4"
C3_CYCLE5 = "C3_Cycle5"
C3_CYCLE3_PENDANT = "C3_Cycle3Pendant"

ANY = "any"          # lowest-label vertex of the deleted triangle
X_END = "x-end"      # lowest-label triangle neighbor of the pendant vertex

# (D' ∩ V(B) as role names) -> triangle vertex to add, None for nothing
CYCLE4_RULE: dict[frozenset[str], str | None] = {
    frozenset(): ANY,
    frozenset({"b12"}): "v3",
    frozenset({"b23"}): "v1",
    frozenset({"b31"}): "v2",
    frozenset({"b3"}): "v1",
    frozenset({"b12", "b3"}): None,
    frozenset({"b23", "b31"}): None,
}

CYCLE5_RULE: dict[frozenset[str], str | None] = {
    frozenset(): ANY,
    frozenset({"b12"}): "v3",
    frozenset({"b2"}): "v3",
    frozenset({"b23"}): "v1",
    frozenset({"b3"}): "v2",
    frozenset({"b31"}): "v2",
    frozenset({"b2", "b3"}): "v1",
    frozenset({"b12", "b23"}): None,
    frozenset({"b12", "b3"}): None,
    frozenset({"b2", "b31"}): None,
    frozenset({"b23", "b31"}): None,
}

# keyed by the role of the pendant vertex x, then by D' ∩ V(B')
PENDANT_RULE: dict[str, dict[frozenset[str], str | None]] = {
    "b23": {
        frozenset(): X_END,
        frozenset({"y"}): "v1",
        frozenset({"b12"}): "v3",
        frozenset({"b31"}): "v2",
    },
    "b12": {
        frozenset(): X_END,
        frozenset({"y"}): None,
        frozenset({"b3"}): "v1",
        frozenset({"b23"}): "v1",
    },
    "b31": {
        frozenset(): X_END,
        frozenset({"y"}): None,
        frozenset({"b2"}): "v1",
        frozenset({"b23"}): "v1",
    },
}


@dataclass
class ReductionStep:
    case_tag: str
    triangle: tuple[int, int, int]
    deleted: tuple[int, ...]
    boundary: PatchBoundary
    added_chords: list[tuple[int, int]] = field(default_factory=list)
    local_adj: dict[int, set[int]] = field(default_factory=dict)
    terminal: list[int] | None = None

    @property
    def pendant(self) -> int | None:
        return self.boundary.role_map.get("x")

    def pattern(self, dprime: Iterable[int]) -> frozenset[str]:
        """Role names of the boundary vertices that lie in D'."""
        inv = {v: r for r, v in self.boundary.role_map.items()}
        if self.case_tag == C3_CYCLE3_PENDANT:
            inv = {v: r for r, v in self.boundary.role_map.items() if r not in ("x",)}
            inv[self.boundary.role_map["y"]] = "y"
        return frozenset(inv[v] for v in dprime if v in inv)

    def rule(self) -> dict[frozenset[str], str | None] | None:
        if self.case_tag == C2_CYCLE4:
            return CYCLE4_RULE
        if self.case_tag == C3_CYCLE5:
            return CYCLE5_RULE
        if self.case_tag == C3_CYCLE3_PENDANT:
            return PENDANT_RULE[self.x_role]
        return None

    @property
    def x_role(self) -> str:
        x = self.boundary.role_map["x"]
        return next(r for r, v in self.boundary.role_map.items() if v == x and r.startswith("b"))

    def summary(self) -> dict:
        return {
            "case": self.case_tag,
            "triangle": list(self.triangle),
            "deleted": list(self.deleted),
            "boundary": list(self.boundary.walk),
            "chords": [list(c) for c in self.added_chords],
        }


# -- reduction engine ----------------------------------------------------

def _first_missing(g: PlaneGraph, pairs: Iterable[tuple[int, int]]) -> tuple[int, int] | None:
    for p, q in sorted((min(a, b), max(a, b)) for a, b in pairs):
        if not g.has_edge(p, q):
            return p, q
    return None


def reduce_once(t: PlaneGraph, face: tuple[int, int, int]) -> tuple[Triangulation | None, ReductionStep]:
    """Delete a forbidden facial triangle and re-triangulate the hole.

    Returns the smaller triangulation G' and the step needed to extend a
    solution of G' back to ``t``.  The (4,4,5) case whose hole is bounded by
    a path can only happen on six vertices; it returns ``None`` for G' and a
    ``terminal`` answer {v3}.
    """
    v1, v2, v3 = face
    tri = (v1, v2, v3)
    degs = tuple(t.degree(v) for v in tri)
    if tuple(sorted(degs)) != degs or degs not in ((4, 4, 4), (4, 4, 5), (4, 5, 5)):
        raise UnreducibleFace(f"triangle {tri} with degrees {degs} is not forbidden")
    tset = set(tri)
    region = set(tri)
    for v in tri:
        region |= t.neighbors(v)
    inner = {w: t.neighbors(w) & tset for w in region - tset}
    gm, patches = delete_vertices(t, tri)
    if len(patches) != 1:
        raise UnreducibleFace(f"deleting {tri} opened {len(patches)} faces")
    patch = patches[0]
    s = sum(degs)
    if len(patch.walk) != s - 9:
        raise UnreducibleFace(f"hole of length {len(patch.walk)} after deleting degree sum {s}")
    shape, roles = classify_boundary(patch.walk, inner, tri)
    patch.shape, patch.role_map = shape, roles
    local_adj = {v: t.neighbors(v) for v in region}
    step = ReductionStep("", tri, tri, patch, local_adj=local_adj)

    if degs == (4, 4, 4):
        if shape != CYCLE3:
            raise UnreducibleFace(f"(4,4,4) hole has shape {shape}")
        step.case_tag = C1_CYCLE3
        return gm.as_triangulation(), step

    if degs == (4, 4, 5):
        if shape == PATH3:
            step.case_tag = C2_PATH3
            step.terminal = [v3]
            return None, step
        if shape != CYCLE4:
            raise UnreducibleFace(f"(4,4,5) hole has shape {shape}")
        step.case_tag = C2_CYCLE4
        chord = _first_missing(gm, [(roles["b12"], roles["b3"]), (roles["b23"], roles["b31"])])
        if chord is None:
            raise UnreducibleFace(f"both diagonals of {patch.walk} already exist")
        step.added_chords.append(chord)
        return add_chord(gm, patch, *chord).as_triangulation(), step

    if shape == CYCLE5:
        step.case_tag = C3_CYCLE5
        w = patch.walk
        non_consecutive = [(w[i], w[j]) for i, j in combinations(range(5), 2) if (j - i) % 5 not in (1, 4)]
        chord = _first_missing(gm, non_consecutive)
        if chord is None:
            raise UnreducibleFace(f"all chords of the 5-face {w} already exist")
        g1 = add_chord(gm, patch, *chord)
        quad = next(f for f in chord_faces(g1) if len(f) == 4)
        qv = g1.walk_vertices(quad)
        second = _first_missing(g1, [(qv[0], qv[2]), (qv[1], qv[3])])
        if second is None:
            raise UnreducibleFace(f"both diagonals of the residual face {qv} already exist")
        step.added_chords += [chord, second]
        return add_chord(g1, quad, *second).as_triangulation(), step

    if shape == CYCLE3_PENDANT:
        step.case_tag = C3_CYCLE3_PENDANT
        x = roles["x"]
        step.deleted = tri + (x,)
        local_adj[x] = t.neighbors(x)
        g2, _ = delete_vertices(gm, [x])
        return g2.as_triangulation(), step

    raise UnreducibleFace(f"(4,5,5) hole has shape {shape}")


def _locally_valid(step: ReductionStep, d: set[int]) -> int | None:
    """First vertex near the step that breaks independence or domination."""
    adj = step.local_adj
    for v in sorted(adj):
        if v in d and adj[v] & d:
            return v
        if v not in d and not adj[v] & d:
            if v in step.deleted or v in step.boundary.walk:
                return v
    return None


def extend(dprime: Iterable[int], step: ReductionStep) -> set[int]:
    """Lift a certified solution of G' to the graph before the reduction,
    adding at most one vertex of the deleted triangle."""
    d = set(dprime)
    if step.terminal is not None:
        return set(step.terminal)
    v1, v2, v3 = step.triangle
    names = {"v1": v1, "v2": v2, "v3": v3}
    adj = step.local_adj
    if step.case_tag == C1_CYCLE3:
        undominated = [v for v in step.triangle if not adj[v] & d]
        choice = min(undominated) if undominated else None
    else:
        rule = step.rule()
        assert rule is not None
        pattern = step.pattern(d)
        target = rule.get(pattern)
        if target == ANY:
            choice = min(step.triangle)
        elif target == X_END:
            choice = min(adj[step.pendant] & set(step.triangle))  # type: ignore[index]
        elif target is None:
            choice = None
        else:
            choice = names[target]
    if choice is not None:
        d.add(choice)
    bad = _locally_valid(step, d)
    if bad is not None:
        raise ExtensionFailed(f"{step.case_tag}: vertex {bad} breaks the extension", bad)
    return d


# -- assembly over the partial coloring ------------------------------------

@dataclass
class MissingSets:
    sets: dict[int, set[int]]

    @property
    def union(self) -> set[int]:
        return set().union(*self.sets.values())

    def missing(self, v: int) -> int | None:
        for i, s in self.sets.items():
            if v in s:
                return i
        return None


def missing_sets(g: PlaneGraph, psi: PartialColoring) -> MissingSets:
    """U_i: vertices not colored i and with no neighbor colored i."""
    col = psi.assignment
    sets: dict[int, set[int]] = {i: set() for i in COLORS}
    adj = g.adjacency()
    for v in g.vertices():
        seen = {col[w] for w in adj[v]}
        seen.add(col[v])
        for i in COLORS:
            if i not in seen:
                sets[i].add(v)
    ms = MissingSets(sets)
    uncolored = psi.uncolored
    for v in ms.union:
        if v in uncolored:
            raise AssemblyInvariantViolation(f"uncolored vertex {v} misses a color")
        if sum(v in s for s in sets.values()) > 1:
            raise AssemblyInvariantViolation(f"vertex {v} misses two colors")
        if g.degree(v) < 6:
            raise AssemblyInvariantViolation(f"{g.degree(v)}-vertex {v} misses a color")
    return ms


@dataclass
class BadSubgraph:
    vertices: set[int]
    edges: list[tuple[int, int]]
    components: list[list[int]]
    parts: list[tuple[set[int], set[int]]]
    cover: set[int]
    apexes: dict[tuple[int, int], tuple[int, int]]
    support: dict[int, set[int]]


def bad_subgraph(g: PlaneGraph, psi: PartialColoring, ms: MissingSets) -> BadSubgraph:
    """Edges joining vertices that miss different colors, their bipartition
    by color pattern and a vertex cover J taking one part per component."""
    col = psi.assignment
    miss = {v: i for i, s in ms.sets.items() for v in s}
    edges = []
    apexes = {}
    for d in range(0, len(g.head), 2):
        u, v = g.tail(d), g.head[d]
        if v < 0 or u not in miss or v not in miss or miss[u] == miss[v]:
            continue
        a = g.head[g.face_next(d)]
        b = g.head[g.face_next(d ^ 1)]
        if col[a] is not None or col[b] is not None:
            raise AssemblyInvariantViolation(f"bad edge {u}-{v} borders a colored apex")
        e = (min(u, v), max(u, v))
        edges.append(e)
        apexes[e] = (a, b)
    nbrs: dict[int, set[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, set()).add(v)
        nbrs.setdefault(v, set()).add(u)

    components, parts = [], []
    cover: set[int] = set()
    seen: set[int] = set()
    for x in sorted(nbrs):
        if x in seen:
            continue
        comp = {x}
        stack = [x]
        while stack:
            y = stack.pop()
            for z in nbrs[y]:
                if z not in comp:
                    comp.add(z)
                    stack.append(z)
        seen |= comp
        a, c = col[x], miss[x]
        side0 = {a, c}
        v0, v1 = set(), set()
        for y in comp:
            pattern = {col[y], miss[y]}
            if pattern == side0:
                v0.add(y)
            elif not pattern & side0:
                v1.add(y)
            else:
                raise NotBipartite(f"vertex {y} fits neither color-pattern part")
        for y in comp:
            if any((z in v0) == (y in v0) for z in nbrs[y]):
                raise NotBipartite(f"bad edge inside one part at vertex {y}")
        components.append(sorted(comp))
        parts.append((v0, v1))
        if len(v0) != len(v1):
            cover |= v0 if len(v0) < len(v1) else v1
        else:
            cover |= v0 if min(v0) < min(v1) else v1

    support: dict[int, set[int]] = {}
    edge_set = set(edges)
    for x in psi.uncolored:
        ring = g.rotation(x)
        hits = set()
        for i in range(len(ring)):
            e = (min(ring[i], ring[i - 1]), max(ring[i], ring[i - 1]))
            if e in edge_set:
                hits |= set(e) & cover
        support[x] = hits
    uncolored = psi.uncolored
    if len(cover) > len(uncolored):
        raise CoverTooLarge(f"|J|={len(cover)} exceeds {len(uncolored)} uncolored vertices")
    for x, hits in support.items():
        if len(hits) > 2:
            raise CoverTooLarge(f"uncolored vertex {x} supports {len(hits)} cover vertices")
    for y in cover:
        if sum(y in hits for hits in support.values()) < 2:
            raise CoverTooLarge(f"cover vertex {y} lies on fewer than two critical cycles")
    return BadSubgraph(set(nbrs), sorted(edges), components, parts, cover, apexes, support)


def _greedy_independent(adj: Mapping[int, set[int]], pool: Iterable[int], start: set[int]) -> set[int]:
    chosen = set(start)
    for v in sorted(pool):
        if v not in chosen and not adj[v] & chosen:
            chosen.add(v)
    return chosen


@dataclass
class Assembly:
    candidates: dict[int, set[int]]
    independent: dict[int, set[int]]
    independent_plus: dict[int, set[int]]
    total: int

    def smallest(self) -> tuple[int, set[int]]:
        i = min(COLORS, key=lambda c: (len(self.candidates[c]), c))
        return i, self.candidates[i]


def assemble(g: PlaneGraph, psi: PartialColoring, ms: MissingSets, cover: set[int]) -> Assembly:
    """D_i = C_i plus a maximal independent subset of U_i chosen outside J
    first; the four candidates together have at most (4n - 2) / 3 vertices."""
    adj = g.adjacency()
    n = g.n
    cands, inds, plus = {}, {}, {}
    for i in COLORS:
        u = ms.sets[i]
        inds[i] = _greedy_independent(adj, u - cover, set())
        plus[i] = _greedy_independent(adj, u & cover, inds[i])
        cands[i] = psi.color_class(i) | plus[i]
        report = verify(g, cands[i], check_bound=False)
        if not report:
            raise AssemblyInvariantViolation(f"D_{i} is not independent dominating: {report}")
    union = set().union(*inds.values())
    if any(adj[v] & union for v in union):
        raise AssemblyInvariantViolation("the sets I_i are not mutually independent")
    if 3 * len(union) > n - 2:
        raise AssemblyInvariantViolation(f"|I|={len(union)} exceeds (n-2)/3")
    total = sum(len(c) for c in cands.values())
    if 3 * total > 4 * n - 2:
        raise AssemblyInvariantViolation(f"sum |D_i| = {total} exceeds (4n-2)/3")
    return Assembly(cands, inds, plus, total)


# -- verification and the top-level solver ---------------------------------

@dataclass
class VerifyReport:
    size: int
    bound: int
    adjacent_pairs: list[tuple[int, int]]
    undominated: list[int]
    unknown: list[int]
    check_bound: bool = True

    @property
    def independent(self) -> bool:
        return not self.adjacent_pairs

    @property
    def dominating(self) -> bool:
        return not self.undominated and not self.unknown

    @property
    def within_bound(self) -> bool:
        return self.size <= self.bound

    @property
    def ok(self) -> bool:
        return self.independent and self.dominating and (self.within_bound or not self.check_bound)

    def __bool__(self) -> bool:
        return self.ok


def verify(g: PlaneGraph, d: Iterable[int], check_bound: bool = True) -> VerifyReport:
    """Check independence, domination and |D| <= floor(n/3), listing every
    violation."""
    d = set(d)
    unknown = sorted(v for v in d if v not in g)
    d -= set(unknown)
    adj = g.adjacency()
    pairs = sorted({(min(u, w), max(u, w)) for u in d for w in adj[u] if w in d})
    undominated = [v for v in g.vertices() if v not in d and not adj[v] & d]
    return VerifyReport(len(d) + len(unknown), g.n // 3, pairs, undominated, unknown, check_bound)


@dataclass
class IdomCertificate:
    D: list[int]
    n: int
    bound: int
    trace: list[dict]
    stats: dict = field(default_factory=dict)

    @property
    def path(self) -> list[str]:
        return [s["case"] for s in self.trace] + [self.stats.get("base", "")]


def coloring_stage(g: Triangulation, seed: int = 0, budget: int | None = None) -> tuple[set[int], dict, ColoringStage]:
    """Run the partial coloring and the assembly on a graph without forbidden
    faces; returns the smallest candidate together with its statistics."""
    if find_forbidden_face(g) is not None:
        raise UnreducibleFace("coloring stage reached with a forbidden face present")
    stage = partial_coloring(g, seed=seed, budget=budget)
    ms = missing_sets(g, stage.psi)
    bad = bad_subgraph(g, stage.psi, ms)
    asm = assemble(g, stage.psi, ms, bad.cover)
    i, d = asm.smallest()
    stats = {
        "base": "coloring",
        "n": g.n,
        "I": len(stage.independent),
        "uncolored": len(stage.psi.uncolored),
        "cover": len(bad.cover),
        "bad_edges": len(bad.edges),
        "moves": stage.moves,
        "restart": stage.phi.restart,
        "method": stage.phi.method,
        "I_sizes": [len(asm.independent[c]) for c in COLORS],
        "D_sizes": [len(asm.candidates[c]) for c in COLORS],
        "D_total": asm.total,
        "color": i,
    }
    return d, stats, stage


def reduce_to_core(t: Triangulation, base_max: int = BASE_CASE_MAX_N) -> tuple[Triangulation | None, list[ReductionStep]]:
    """Apply reductions while the graph is larger than ``base_max`` and has a
    forbidden face.  The core is ``None`` after the six-vertex terminal case."""
    steps: list[ReductionStep] = []
    g: Triangulation | None = t
    while g is not None and g.n > base_max:
        face = find_forbidden_face(g)
        if face is None:
            break
        g, step = reduce_once(g, face)
        steps.append(step)
    return g, steps


def solve(t: Triangulation, seed: int = 0, budget: int | None = None,
          base_max: int = BASE_CASE_MAX_N) -> IdomCertificate:
    """Independent dominating set of size at most floor(n/3), re-verified."""
    if not t.simple:
        raise ValueError("solve needs a simple triangulation")
    if t.n < 3:
        raise ValueError("solve needs at least three vertices")
    g, steps = reduce_to_core(t, base_max)
    d: set[int]
    if g is None:
        d = set()
        stats: dict = {"base": "terminal", "n": 6}
    elif g.n <= base_max:
        res = iota_exact(g)
        d = set(res.witness)
        if 3 * len(d) > g.n:
            raise CertificationFailed(f"oracle found iota={len(d)} above n/3 on n={g.n}")
        stats = {"base": "oracle", "n": g.n, "iota": res.value}
    else:
        d, stats, _ = coloring_stage(g, seed=seed, budget=budget)
    for step in reversed(steps):
        d = extend(d, step)
    report = verify(t, d)
    if not report:
        raise CertificationFailed(f"final check failed: {report}")
    return IdomCertificate(sorted(d), t.n, t.n // 3, [s.summary() for s in steps], stats)
