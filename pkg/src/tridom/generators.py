"""Named polyhedra, random stacked and flip-mixed triangulations, and the
non-simple gadget family built over a perfect matching."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from .errors import NoPerfectMatching, UnknownName
from .planar import PlaneGraph, Triangulation, from_faces


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int = 4
    seed: int = 0
    name: str | None = None
    flips: int = 0

    def __post_init__(self):
        if self.kind not in ("named", "stacked", "flipmix", "gadget"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind != "named" and self.n < 3:
            raise ValueError("n must be at least 3")
        if self.flips < 0:
            raise ValueError("flips must be non-negative")

    @property
    def id(self) -> str:
        if self.kind == "named":
            return str(self.name)
        if self.kind == "gadget":
            return f"gadget-{self.name}"
        tag = f"{self.kind}-n{self.n}-s{self.seed}"
        return f"{tag}-f{self.flips}" if self.kind == "flipmix" else tag


# -- named graphs --------------------------------------------------------

def _doublewheel_faces(k: int) -> list[tuple[int, int, int]]:
    top, bottom = k, k + 1
    res = []
    for i in range(k):
        j = (i + 1) % k
        res.append((top, i, j))
        res.append((bottom, j, i))
    return res


def _icosahedron_faces() -> list[tuple[int, int, int]]:
    top, bottom = 0, 11
    up = [1, 2, 3, 4, 5]
    lo = [6, 7, 8, 9, 10]
    res = []
    for i in range(5):
        j = (i + 1) % 5
        res.append((top, up[i], up[j]))
        res.append((up[j], up[i], lo[i]))
        res.append((up[j], lo[i], lo[j]))
        res.append((bottom, lo[j], lo[i]))
    return res


_K4_FACES = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
_STACKED5_FACES = [(0, 1, 4), (1, 2, 4), (2, 0, 4), (0, 2, 3), (0, 3, 1), (1, 3, 2)]

NAMES = ("triangle", "K4", "stacked5", "octahedron", "icosahedron", "doublewheel_k")


def named(name: str) -> Triangulation:
    """Canonical rotation system of a named triangulation.

    ``doublewheel_<k>`` (k >= 3) is the bipyramid over a k-cycle; the
    octahedron is ``doublewheel_4`` with the same labelling.
    """
    if name == "triangle":
        return from_faces([(0, 1, 2), (0, 2, 1)])
    if name == "K4":
        return from_faces(_K4_FACES)
    if name == "stacked5":
        return from_faces(_STACKED5_FACES)
    if name == "octahedron":
        return from_faces(_doublewheel_faces(4))
    if name == "icosahedron":
        return from_faces(_icosahedron_faces())
    m = re.fullmatch(r"doublewheel_(\d+)", name)
    if m and int(m.group(1)) >= 3:
        return from_faces(_doublewheel_faces(int(m.group(1))))
    raise UnknownName(f"unknown triangulation name {name!r}")


# -- random generators ---------------------------------------------------

def _stacked_mutable(n: int, rng: random.Random) -> PlaneGraph:
    g = PlaneGraph.copy(named("K4"))
    reps = [walk[0] for walk in g.face_darts()]
    for _ in range(n - 4):
        idx = rng.randrange(len(reps))
        walk = g.face_of(reps[idx])
        g._star_face(walk)
        reps[idx] = walk[0]
        reps.append(walk[1])
        reps.append(walk[2])
    return g


def stacked(n: int, seed: int = 0) -> Triangulation:
    """Random stacked triangulation: repeatedly subdivide a uniformly random
    face of K4 with a new degree-3 vertex."""
    if n < 4:
        raise ValueError("stacked triangulations need n >= 4")
    return _stacked_mutable(n, random.Random(seed)).as_triangulation()


def flipmix(n: int, seed: int = 0, flips: int = 0) -> Triangulation:
    """``stacked(n, seed)`` followed by ``flips`` attempted random edge flips.

    A flip is skipped when it would create a parallel edge or push a degree
    below 3.
    """
    if n < 4:
        raise ValueError("flipmix triangulations need n >= 4")
    rng = random.Random(seed)
    g = _stacked_mutable(n, rng)
    n_edges = len(g.head) // 2
    for _ in range(flips):
        g._flip(2 * rng.randrange(n_edges))
    return g.as_triangulation()


# -- gadget family -------------------------------------------------------

def perfect_matching(t: PlaneGraph) -> list[tuple[int, int]]:
    """A perfect matching of ``t``: greedy by lowest label, then augmented
    with a maximum-cardinality matcher when greedy falls short."""
    adj = t.adjacency()
    matched: dict[int, int] = {}
    for u in sorted(adj):
        if u in matched:
            continue
        for v in sorted(adj[u]):
            if v not in matched and v != u:
                matched[u], matched[v] = v, u
                break
    if len(matched) < len(adj):
        g = nx.Graph()
        g.add_nodes_from(sorted(adj))
        g.add_edges_from((u, v) for u in sorted(adj) for v in sorted(adj[u]) if u < v)
        mate = nx.max_weight_matching(g, maxcardinality=True)
        matched = {}
        for u, v in mate:
            matched[u], matched[v] = v, u
    if len(matched) < len(adj):
        raise NoPerfectMatching(f"graph on {len(adj)} vertices has no perfect matching")
    return sorted((u, v) for u, v in matched.items() if u < v)


def gadget_family(t: PlaneGraph, matching: Iterable[tuple[int, int]] | None = None) -> Triangulation:
    """Replace every matching edge xy by a lens (x, y, x) holding a new vertex
    z joined to both ends.  The result is a non-simple triangulation on
    ``3k`` vertices when ``t`` has ``2k``."""
    matching = perfect_matching(t) if matching is None else [tuple(e) for e in matching]
    covered = [v for e in matching for v in e]
    if len(set(covered)) != len(covered) or set(covered) != set(t.vertices()):
        raise NoPerfectMatching("supplied edge set is not a perfect matching")
    g = PlaneGraph.copy(t)
    g.simple = False
    for x, y in matching:
        d = g.dart_between(x, y)
        e = g._new_edge(x, y, d, g.pred[d ^ 1])
        g._star_face(g.face_of(e))
    return g.as_triangulation()


def generate(spec: GenSpec) -> Triangulation:
    if spec.kind == "named":
        return named(spec.name or "")
    if spec.kind == "stacked":
        return stacked(spec.n, spec.seed)
    if spec.kind == "flipmix":
        return flipmix(spec.n, spec.seed, spec.flips)
    if spec.name is None:
        raise UnknownName("gadget specs need a base triangulation name")
    base = named(spec.name) if spec.name in NAMES or spec.name.startswith("doublewheel_") \
        else None
    if base is None:
        m = re.fullmatch(r"stacked(\d+)", spec.name)
        if not m:
            raise UnknownName(f"unknown gadget base {spec.name!r}")
        base = stacked(int(m.group(1)), spec.seed)
    return gadget_family(base)
