"""Embedded planar (multi)graphs as dart-based rotation systems.

Every edge is a pair of darts ``2e`` and ``2e + 1`` (twins differ in the
lowest bit).  Each vertex owns a cyclic doubly-linked list of its outgoing
darts in embedding order.  Faces are traced with ``face_next(d) =
succ[twin(d)]``, so a facial triangle ``a -> b -> c`` means that ``c``
follows ``a`` in the rotation at ``b``.

Vertex labels are stable: deleting a vertex retires its label for good, so
reduction traces can always refer back to vertices of the input graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    Disconnected,
    DisconnectingDeletion,
    InconsistentRotation,
    MultiEdgeCreated,
    MultiEdgeInSimpleMode,
    NonTriangularFace,
    NotOnFace,
    UnclassifiableWalk,
)

DEAD = -1

FORBIDDEN_DEGREES = {(4, 4, 4), (4, 4, 5), (4, 5, 5)}

# boundary shapes of the hole left by deleting a facial triangle
CYCLE3 = "Cycle3"
CYCLE4 = "Cycle4"
CYCLE5 = "Cycle5"
PATH3 = "Path3"
CYCLE3_PENDANT = "Cycle3Pendant"


class PlaneGraph:
    """A connected plane multigraph without loops, given by its rotations."""

    __slots__ = ("head", "succ", "pred", "out", "deg", "simple", "next_label")

    def __init__(self, simple: bool = True):
        self.head: list[int] = []
        self.succ: list[int] = []
        self.pred: list[int] = []
        self.out: dict[int, int] = {}
        self.deg: dict[int, int] = {}
        self.simple = simple
        self.next_label = 0

    # -- basic queries ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.out)

    @property
    def m(self) -> int:
        return sum(self.deg.values()) // 2

    def vertices(self) -> list[int]:
        return sorted(self.out)

    def __contains__(self, v: int) -> bool:
        return v in self.out

    def degree(self, v: int) -> int:
        return self.deg[v]

    def tail(self, d: int) -> int:
        return self.head[d ^ 1]

    def face_next(self, d: int) -> int:
        return self.succ[d ^ 1]

    def darts(self) -> Iterator[int]:
        return (d for d, h in enumerate(self.head) if h != DEAD)

    def out_darts(self, v: int) -> list[int]:
        start = self.out[v]
        res = [start]
        d = self.succ[start]
        while d != start:
            res.append(d)
            d = self.succ[d]
        return res

    def rotation(self, v: int) -> list[int]:
        """Neighbor labels of ``v`` in rotation order (with repeats for
        parallel edges)."""
        return [self.head[d] for d in self.out_darts(v)]

    def neighbors(self, v: int) -> set[int]:
        return set(self.rotation(v))

    def adjacency(self) -> dict[int, set[int]]:
        return {v: self.neighbors(v) for v in self.out}

    def edges(self) -> list[tuple[int, int]]:
        """One ``(tail, head)`` pair per edge, parallel edges repeated."""
        return [(self.head[d ^ 1], self.head[d]) for d in range(0, len(self.head), 2)
                if self.head[d] != DEAD]

    def has_edge(self, u: int, v: int) -> bool:
        if self.deg[u] > self.deg[v]:
            u, v = v, u
        return any(self.head[d] == v for d in self.out_darts(u))

    def dart_between(self, u: int, v: int) -> int:
        for d in self.out_darts(u):
            if self.head[d] == v:
                return d
        raise KeyError((u, v))

    # -- faces -----------------------------------------------------------

    def face_of(self, d: int) -> list[int]:
        res = [d]
        e = self.face_next(d)
        while e != d:
            res.append(e)
            e = self.face_next(e)
        return res

    def face_darts(self) -> list[list[int]]:
        """All faces as dart cycles, ordered by their lowest dart."""
        seen = [False] * len(self.head)
        res = []
        for d, h in enumerate(self.head):
            if h == DEAD or seen[d]:
                continue
            walk = self.face_of(d)
            for e in walk:
                seen[e] = True
            res.append(walk)
        return res

    def faces(self) -> list[list[int]]:
        return [[self.head[d ^ 1] for d in walk] for walk in self.face_darts()]

    def walk_vertices(self, walk: Sequence[int]) -> list[int]:
        return [self.head[d ^ 1] for d in walk]

    # -- structure checks ------------------------------------------------

    def is_connected(self) -> bool:
        if not self.out:
            return True
        start = next(iter(self.out))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.rotation(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.out)

    def euler_characteristic(self) -> int:
        return self.n - self.m + len(self.face_darts())

    def validate(self, triangulation: bool = True) -> None:
        """Check the combinatorial-map invariants, raising on the first
        violation."""
        for d, h in enumerate(self.head):
            if h == DEAD:
                continue
            if self.head[d ^ 1] == DEAD or self.head[d ^ 1] == h:
                raise InconsistentRotation(f"dart {d} has no proper twin")
        if self.simple:
            for v in self.out:
                rot = self.rotation(v)
                if len(set(rot)) != len(rot):
                    raise MultiEdgeInSimpleMode(f"parallel edges at vertex {v}")
        if not self.is_connected():
            raise Disconnected("graph is not connected")
        fcs = self.face_darts()
        if triangulation:
            for walk in fcs:
                if len(walk) != 3:
                    raise NonTriangularFace(
                        f"face {self.walk_vertices(walk)} has length {len(walk)}")
        if self.n - self.m + len(fcs) != 2:
            raise InconsistentRotation("Euler relation fails; rotations are not planar")
        if triangulation and self.simple and self.n >= 3 and self.m != 3 * self.n - 6:
            raise InconsistentRotation(f"simple triangulation needs 3n-6 edges, has {self.m}")

    # -- copying and low-level mutation ----------------------------------

    def copy(self) -> "PlaneGraph":
        return self._copy_into(PlaneGraph(self.simple))

    def _copy_into(self, g: "PlaneGraph") -> "PlaneGraph":
        g.head = self.head[:]
        g.succ = self.succ[:]
        g.pred = self.pred[:]
        g.out = dict(self.out)
        g.deg = dict(self.deg)
        g.simple = self.simple
        g.next_label = self.next_label
        return g

    def as_triangulation(self, simple: bool | None = None) -> "Triangulation":
        """Validated copy as a Triangulation."""
        t = self._copy_into(Triangulation(self.simple))
        if simple is not None:
            t.simple = simple
        t.validate(triangulation=True)
        return t

    def _new_vertex(self, label: int | None = None) -> int:
        if label is None:
            label = self.next_label
        self.next_label = max(self.next_label, label + 1)
        self.deg[label] = 0
        return label

    def _link_after(self, d: int, after: int | None, v: int) -> None:
        if after is None:
            self.succ[d] = self.pred[d] = d
            self.out[v] = d
        else:
            s = self.succ[after]
            self.succ[after] = d
            self.pred[d] = after
            self.succ[d] = s
            self.pred[s] = d
        self.deg[v] += 1

    def _unlink(self, d: int) -> None:
        v = self.head[d ^ 1]
        p, s = self.pred[d], self.succ[d]
        self.succ[p] = s
        self.pred[s] = p
        self.deg[v] -= 1
        if self.out[v] == d:
            self.out[v] = s if s != d else DEAD

    def _new_edge(self, u: int, v: int, after_u: int | None, after_v: int | None) -> int:
        """Create edge u-v; its dart u->v goes right after ``after_u`` in the
        rotation at u (likewise at v).  Returns the dart u->v."""
        a = len(self.head)
        self.head.extend((v, u))
        self.succ.extend((a, a + 1))
        self.pred.extend((a, a + 1))
        self._link_after(a, after_u, u)
        self._link_after(a + 1, after_v, v)
        return a

    def _remove_edge(self, d: int) -> None:
        self._unlink(d)
        self._unlink(d ^ 1)
        self.head[d] = self.head[d ^ 1] = DEAD

    def _insert_in_corners(self, walk: Sequence[int], i: int, j: int) -> int:
        """Join the corners at positions i and j of a face dart cycle."""
        k = len(walk)
        u, v = self.tail(walk[i]), self.tail(walk[j])
        return self._new_edge(u, v, walk[(i - 1) % k] ^ 1, walk[(j - 1) % k] ^ 1)

    def _star_face(self, walk: Sequence[int], label: int | None = None) -> int:
        """Insert a new vertex inside the face and join it to every corner."""
        z = self._new_vertex(label)
        k = len(walk)
        prev_z = None
        # z's rotation runs against the face order
        for i in reversed(range(k)):
            t = self.tail(walk[i])
            a = self._new_edge(t, z, walk[(i - 1) % k] ^ 1, prev_z)
            prev_z = a ^ 1
        return z

    def _flip(self, d: int) -> bool:
        """Flip the edge of dart d inside its two triangles; in place."""
        t = d ^ 1
        f1, f2 = self.face_of(d), self.face_of(t)
        if len(f1) != 3 or len(f2) != 3:
            return False
        a = self.head[f1[1]]
        b = self.head[f2[1]]
        u, v = self.tail(d), self.head[d]
        if a == b or self.deg[u] <= 3 or self.deg[v] <= 3 or self.has_edge(a, b):
            return False
        after_a = f1[1] ^ 1          # dart a->v
        after_b = f2[1] ^ 1          # dart b->u
        self._unlink(d)
        self._unlink(t)
        self.head[d], self.head[t] = b, a
        self._link_after(d, after_a, a)
        self._link_after(t, after_b, b)
        return True

    def remove_vertex_inplace(self, v: int) -> list[int]:
        """Delete v; returns surviving darts that now lie on the new face."""
        touched = []
        for d in self.out_darts(v):
            w = self.head[d]
            if w == v or w == DEAD:
                continue
            t = d ^ 1
            s = self.succ[t]
            self._unlink(t)
            if s != t:
                touched.append(s)
            self.head[d] = self.head[t] = DEAD
        del self.out[v]
        del self.deg[v]
        return touched

    def __repr__(self) -> str:
        kind = "simple" if self.simple else "multi"
        return f"<{type(self).__name__} n={self.n} m={self.m} {kind}>"


class Triangulation(PlaneGraph):
    """A validated plane graph all of whose faces are triangles."""

    __slots__ = ()

    def copy(self) -> "Triangulation":
        return self._copy_into(Triangulation(self.simple))


@dataclass
class PatchBoundary:
    """The face left behind after deleting a set of vertices."""

    walk: list[int]
    darts: list[int]
    shape: str | None = None
    role_map: dict[str, int] = field(default_factory=dict)
    degree_sum: int | None = None

    def __len__(self) -> int:
        return len(self.walk)


# -- construction --------------------------------------------------------

def _pair_slots(rot: Mapping[int, Sequence[int]], simple: bool) -> dict[tuple[int, int], tuple[int, int]]:
    """Match each rotation slot (u, i) to its twin slot (v, j)."""
    groups: dict[tuple[int, int], tuple[list[int], list[int]]] = {}
    for u, nbrs in rot.items():
        for i, v in enumerate(nbrs):
            if v == u:
                raise InconsistentRotation(f"loop at vertex {u}")
            if v not in rot:
                raise InconsistentRotation(f"vertex {u} lists unknown vertex {v}")
            key = (min(u, v), max(u, v))
            grp = groups.setdefault(key, ([], []))
            grp[0 if u == key[0] else 1].append(i)

    partner: dict[tuple[int, int], tuple[int, int]] = {}
    ambiguous = []
    for (u, v), (us, vs) in groups.items():
        if len(us) != len(vs):
            raise InconsistentRotation(
                f"vertex {u} lists {v} {len(us)} times but {v} lists {u} {len(vs)} times")
        if len(us) == 1:
            partner[(u, us[0])] = (v, vs[0])
            continue
        if simple:
            raise MultiEdgeInSimpleMode(f"parallel edges between {u} and {v}")
        ru, rv = rot[u], rot[v]

        def fits(i: int, j: int) -> bool:
            return (rv[(j + 1) % len(rv)] == ru[(i - 1) % len(ru)]
                    and rv[(j - 1) % len(rv)] == ru[(i + 1) % len(ru)])

        cands = [[j for j in vs if fits(i, j)] for i in us]
        if all(len(c) == 1 for c in cands) and len({c[0] for c in cands}) == len(us):
            for i, c in zip(us, cands):
                partner[(u, i)] = (v, c[0])
        else:
            ambiguous.append((u, v, us, vs))
    if not ambiguous:
        return partner

    # cyclic shifts of the reversed order are the only planar pairings
    options = []
    for u, v, us, vs in ambiguous:
        k = len(us)
        opts = []
        for s in range(k):
            opts.append({(u, us[i]): (v, vs[(s - i) % k]) for i in range(k)})
        options.append(opts)
    for choice in product(*options):
        trial = dict(partner)
        for c in choice:
            trial.update(c)
        if _try_build(rot, trial, simple) is not None:
            return trial
    raise InconsistentRotation("no planar pairing of parallel edges exists")


def _assemble(rot: Mapping[int, Sequence[int]], partner: dict, simple: bool) -> PlaneGraph:
    g = PlaneGraph(simple)
    back = {t: s for s, t in partner.items()}
    slot_dart: dict[tuple[int, int], int] = {}
    for u in sorted(rot):
        for i in range(len(rot[u])):
            s = (u, i)
            if s in slot_dart:
                continue
            a = len(g.head)
            t = partner[s] if s in partner else back[s]
            g.head.extend((rot[u][i], u))
            g.succ.extend((a, a + 1))
            g.pred.extend((a, a + 1))
            slot_dart[s] = a
            slot_dart[t] = a + 1
    for u in sorted(rot):
        g._new_vertex(u)
        ds = [slot_dart[(u, i)] for i in range(len(rot[u]))]
        if not ds:
            raise Disconnected(f"vertex {u} is isolated")
        for k, d in enumerate(ds):
            g.succ[d] = ds[(k + 1) % len(ds)]
            g.pred[d] = ds[k - 1]
        g.out[u] = ds[0]
        g.deg[u] = len(ds)
    return g


def _try_build(rot, partner, simple) -> PlaneGraph | None:
    g = _assemble(rot, partner, simple)
    try:
        g.validate(triangulation=True)
    except Exception:
        return None
    return g


def build_from_rotation(rotations: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
                        simple: bool = True) -> Triangulation:
    """Build and validate a triangulation from per-vertex neighbor rotations.

    ``rotations`` maps each vertex label to its neighbors in cyclic order, or
    is a list indexed by label.  Parallel edges are allowed only when
    ``simple`` is false; their twin ends are matched by the surrounding
    labels, falling back to a search over planar pairings.
    """
    if not isinstance(rotations, Mapping):
        rotations = dict(enumerate(rotations))
    rot = {int(u): [int(v) for v in nbrs] for u, nbrs in rotations.items()}
    partner = _pair_slots(rot, simple)
    g = _assemble(rot, partner, simple)
    return g.as_triangulation()


def rotation_from_faces(face_list: Iterable[Sequence[int]]) -> dict[int, list[int]]:
    """Rotations of a simple triangulation given its consistently oriented
    triangles."""
    nxt: dict[int, dict[int, int]] = {}
    for face in face_list:
        face = list(face)
        for k in range(3):
            v, x, y = face[k], face[(k + 1) % 3], face[(k + 2) % 3]
            slot = nxt.setdefault(v, {})
            if y in slot:
                raise InconsistentRotation(f"faces are not consistently oriented at {v}")
            slot[y] = x
    rot = {}
    for v, slot in nxt.items():
        start = min(slot)
        order = [start]
        w = slot[start]
        while w != start:
            order.append(w)
            if len(order) > len(slot):
                raise InconsistentRotation(f"link of {v} is not a single cycle")
            w = slot[w]
        if len(order) != len(slot):
            raise InconsistentRotation(f"link of {v} is not a single cycle")
        rot[v] = order
    return rot


def orient_faces(face_list: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Reorder triangles so that faces sharing an edge traverse it in
    opposite directions (breadth-first from the first face)."""
    fl = [tuple(f) for f in face_list]
    by_edge: dict[frozenset[int], list[int]] = {}
    for i, f in enumerate(fl):
        for k in range(3):
            by_edge.setdefault(frozenset((f[k], f[(k + 1) % 3])), []).append(i)
    done = {0: fl[0]} if fl else {}
    queue = [0]
    while queue:
        i = queue.pop()
        f = done[i]
        for k in range(3):
            a, b = f[k], f[(k + 1) % 3]
            for j in by_edge[frozenset((a, b))]:
                if j in done:
                    continue
                g = fl[j]
                uses_ab = any(g[r] == a and g[(r + 1) % 3] == b for r in range(3))
                done[j] = g[::-1] if uses_ab else g
                queue.append(j)
    if len(done) != len(fl):
        raise InconsistentRotation("face list is not connected")
    return [done[i] for i in range(len(fl))]


def from_faces(face_list: Iterable[Sequence[int]], orient: bool = False) -> Triangulation:
    """Simple triangulation from its triangles; with ``orient`` the input
    orientation is ignored and fixed up first."""
    if orient:
        face_list = orient_faces(face_list)
    return build_from_rotation(rotation_from_faces(face_list), simple=True)


# -- operations on triangulations ----------------------------------------

def faces(t: PlaneGraph) -> list[list[int]]:
    """Facial walks (vertex sequences) in face-id order."""
    return t.faces()


def find_forbidden_face(t: PlaneGraph) -> tuple[int, int, int] | None:
    """First facial triangle with degree vector (4,4,4), (4,4,5) or (4,5,5).

    Faces are ranked by their lowest dart, which is the face-id order of
    ``faces``.  The triple comes back sorted by degree, then label.
    """
    best = None
    head, deg = t.head, t.deg
    for v, dv in deg.items():
        if dv != 4:
            continue
        for d in t.out_darts(v):
            d2 = t.face_next(d)
            d3 = t.face_next(d2)
            if t.face_next(d3) != d:
                continue
            key = min(d, d2, d3)
            if best is not None and key >= best[0]:
                continue
            tri = (v, head[d], head[d2])
            if tuple(sorted(deg[x] for x in tri)) in FORBIDDEN_DEGREES:
                best = (key, tri)
    if best is None:
        return None
    return tuple(sorted(best[1], key=lambda x: (deg[x], x)))  # type: ignore[return-value]


def delete_vertices(t: PlaneGraph, s: Iterable[int]) -> tuple[PlaneGraph, list[PatchBoundary]]:
    """Remove ``s`` and report every face created by the removal.

    The reported boundaries carry the walk and its darts only; shapes are
    filled in by ``classify_boundary``.
    """
    s = set(s)
    g = PlaneGraph.copy(t)
    degree_sum = sum(t.deg[v] for v in s)
    touched: list[int] = []
    for v in sorted(s):
        touched.extend(g.remove_vertex_inplace(v))
    if not g.out or any(dv == 0 for dv in g.deg.values()) or not g.is_connected():
        raise DisconnectingDeletion(f"deleting {sorted(s)} disconnects the graph")
    seen: set[int] = set()
    patches = []
    for d in sorted(touched):
        if g.head[d] == DEAD or d in seen:
            continue
        walk = g.face_of(d)
        seen.update(walk)
        lo = walk.index(min(walk))
        walk = walk[lo:] + walk[:lo]
        patches.append(PatchBoundary(walk=g.walk_vertices(walk), darts=walk,
                                     degree_sum=degree_sum))
    patches.sort(key=lambda p: p.darts[0])
    return g, patches


def _role_name(adj: frozenset[int], triangle: Sequence[int]) -> str:
    idx = sorted(triangle.index(x) + 1 for x in adj)
    if len(idx) == 1:
        return f"b{idx[0]}"
    if len(idx) == 2:
        i, j = idx
        return "b31" if (i, j) == (1, 3) else f"b{i}{j}"
    raise UnclassifiableWalk(f"walk vertex adjacent to {len(idx)} triangle vertices")


def classify_boundary(walk: Sequence[int],
                      adjacency: Mapping[int, Iterable[int]] | None = None,
                      triangle: Sequence[int] | None = None) -> tuple[str, dict[str, int]]:
    """Shape of a closed walk of length 3, 4 or 5 plus the role of each vertex.

    ``adjacency`` gives, for each walk vertex, its neighbors inside the deleted
    triangle ``triangle = (v1, v2, v3)``; without it only the shape is
    computed.  Roles follow the naming ``b12``/``b23``/``b31`` for vertices
    seeing two triangle vertices and ``b1``/``b2``/``b3`` for those seeing one.
    A pendant walk also gets ``x`` (the pendant) and ``y`` (its parent).
    """
    k = len(walk)
    distinct = len(set(walk))
    if k == 3 and distinct == 3:
        shape = CYCLE3
    elif k == 4 and distinct == 4:
        shape = CYCLE4
    elif k == 4 and distinct == 3 and (walk[0] == walk[2] or walk[1] == walk[3]):
        shape = PATH3
    elif k == 5 and distinct == 5:
        shape = CYCLE5
    elif k == 5 and distinct == 4:
        shape = CYCLE3_PENDANT
    else:
        raise UnclassifiableWalk(f"closed walk {list(walk)} matches no known shape")

    roles: dict[str, int] = {}
    pendant = parent = None
    if shape == PATH3:
        roles["center"] = walk[1] if walk[1] == walk[3] else walk[0]
        return shape, roles
    if shape == CYCLE3_PENDANT:
        for i in range(k):
            if walk[(i - 1) % k] == walk[(i + 1) % k]:
                pendant, parent = walk[i], walk[(i + 1) % k]
        if pendant is None or walk.count(parent) != 2:
            raise UnclassifiableWalk(f"closed walk {list(walk)} matches no known shape")
        roles["x"], roles["y"] = pendant, parent
    if adjacency is None or triangle is None:
        return shape, roles
    triangle = list(triangle)
    for v in dict.fromkeys(walk):
        if v == parent:
            continue
        adj = frozenset(x for x in adjacency[v] if x in triangle)
        name = _role_name(adj, triangle)
        if name in roles:
            raise UnclassifiableWalk(f"role {name} assigned twice on walk {list(walk)}")
        roles[name] = v
    return shape, roles


def add_chord(g: PlaneGraph, face: PatchBoundary | Sequence[int], u: int, v: int) -> PlaneGraph:
    """Split ``face`` by a new edge u-v drawn inside it.

    ``face`` is a PatchBoundary or a dart cycle of ``g``.  The result is a new
    graph; ``g`` is left untouched.
    """
    walk = face.darts if isinstance(face, PatchBoundary) else list(face)
    verts = g.walk_vertices(walk)
    if u not in verts or v not in verts or u == v:
        raise NotOnFace(f"{u} and {v} are not two corners of face {verts}")
    i, j = verts.index(u), verts.index(v)
    k = len(verts)
    if (i - j) % k in (1, k - 1):
        raise NotOnFace(f"{u} and {v} are consecutive on face {verts}")
    if g.simple and g.has_edge(u, v):
        raise MultiEdgeCreated(f"edge {u}-{v} already exists")
    h = g.copy()
    h._insert_in_corners(walk, i, j)
    return h


def chord_faces(g: PlaneGraph) -> tuple[list[int], list[int]]:
    """The two faces on either side of the most recently added edge."""
    a = len(g.head) - 2
    return g.face_of(a), g.face_of(a + 1)
