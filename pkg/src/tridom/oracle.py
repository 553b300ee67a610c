"""Exact brute-force oracles for small graphs.

Vertices are mapped to bit positions in ascending label order so every
set operation is a bitmask operation.  Parallel edges collapse: only the
closed neighborhood as a vertex set matters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import TooLarge
from .planar import PlaneGraph, delete_vertices

DEFAULT_LIMIT = 32


@dataclass
class OracleResult:
    value: int
    witness: list[int]
    nodes_explored: int = 0


class _Masks:
    def __init__(self, g: PlaneGraph, limit: int | None):
        if limit is not None and g.n > limit:
            raise TooLarge(f"n={g.n} exceeds oracle limit {limit}")
        self.labels = g.vertices()
        index = {v: i for i, v in enumerate(self.labels)}
        self.n = len(self.labels)
        self.full = (1 << self.n) - 1
        self.closed = [0] * self.n
        for v in self.labels:
            i = index[v]
            mask = 1 << i
            for w in g.neighbors(v):
                mask |= 1 << index[w]
            self.closed[i] = mask
        self.open = [c & ~(1 << i) for i, c in enumerate(self.closed)]

    def to_labels(self, mask: int) -> list[int]:
        return [self.labels[i] for i in range(self.n) if mask >> i & 1]

    def members(self, mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low


def _min_dominating(g: PlaneGraph, independent: bool, limit: int | None) -> OracleResult:
    mk = _Masks(g, limit)
    best = [mk.n + 1, 0]
    nodes = [0]

    def rec(chosen: int, dominated: int, size: int) -> None:
        nodes[0] += 1
        if dominated == mk.full:
            if size < best[0]:
                best[0], best[1] = size, chosen
            return
        if size + 1 >= best[0]:
            return
        undominated = mk.full & ~dominated
        v = (undominated & -undominated).bit_length() - 1
        options = mk.closed[v]
        if independent:
            options &= undominated
        for w in mk.members(options):
            rec(chosen | 1 << w, dominated | mk.closed[w], size + 1)

    rec(0, 0, 0)
    return OracleResult(best[0], mk.to_labels(best[1]), nodes[0])


def iota_exact(g: PlaneGraph, limit: int | None = DEFAULT_LIMIT) -> OracleResult:
    """Independent domination number: the smallest maximal independent set.

    Branch-and-bound on the lowest-label undominated vertex v: some vertex of
    N[v] must join the set, and it must itself be undominated so far.
    """
    return _min_dominating(g, True, limit)


def gamma_exact(g: PlaneGraph, limit: int | None = DEFAULT_LIMIT) -> OracleResult:
    """Domination number, by the same branching without independence."""
    return _min_dominating(g, False, limit)


def _max_independent(mk: _Masks, candidates: int) -> tuple[int, int, int]:
    best = [0, 0]
    nodes = [0]

    def rec(cand: int, chosen: int, size: int) -> None:
        nodes[0] += 1
        if size + bin(cand).count("1") <= best[0]:
            return
        if not cand:
            best[0], best[1] = size, chosen
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & ~mk.closed[v], chosen | 1 << v, size + 1)
        rec(cand & ~(1 << v), chosen, size)

    rec(candidates, 0, 0)
    return best[0], best[1], nodes[0]


def alpha_exact(g: PlaneGraph, limit: int | None = DEFAULT_LIMIT,
                restrict: set[int] | None = None) -> OracleResult:
    """Independence number, optionally over the vertices in ``restrict``."""
    mk = _Masks(g, limit)
    cand = mk.full
    if restrict is not None:
        cand = sum(1 << i for i, v in enumerate(mk.labels) if v in restrict)
    value, mask, nodes = _max_independent(mk, cand)
    return OracleResult(value, mk.to_labels(mask), nodes)


# -- naive enumeration, used to cross-check the branch-and-bound ------------

def enumerate_maximal_independent_sets(g: PlaneGraph, limit: int = 16) -> list[list[int]]:
    mk = _Masks(g, limit)
    res = []
    for mask in range(1 << mk.n):
        dominated = 0
        ok = True
        for i in mk.members(mask):
            if mk.open[i] & mask:
                ok = False
                break
            dominated |= mk.closed[i]
        if ok and dominated == mk.full:
            res.append(mk.to_labels(mask))
    return res


def naive_numbers(g: PlaneGraph, limit: int = 16) -> dict[str, int]:
    """iota, gamma and alpha by scanning every vertex subset."""
    mk = _Masks(g, limit)
    iota = gamma = mk.n
    alpha = 0
    for mask in range(1 << mk.n):
        size = bin(mask).count("1")
        dominated = 0
        independent = True
        for i in mk.members(mask):
            dominated |= mk.closed[i]
            if mk.open[i] & mask:
                independent = False
        if independent:
            alpha = max(alpha, size)
        if dominated == mk.full:
            gamma = min(gamma, size)
            if independent:
                iota = min(iota, size)
    return {"iota": iota, "gamma": gamma, "alpha": alpha}


@dataclass
class Obs1Result:
    holds: bool
    max_size: int
    witness: list[int]
    n: int
    h_vertices: int = 0
    h_edges: int = 0
    f3: int = 0
    f6plus: int = 0
    other_faces: int = 0
    details: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds


def check_obs1(g: PlaneGraph, limit: int | None = DEFAULT_LIMIT) -> Obs1Result:
    """Check that independent sets of degree->=6 vertices stay within
    (n - 2) / 3, via the face census of the graph with such a set removed.

    The largest restricted independent set is found exhaustively; on the
    deletion graph H the Euler identity |V(H)| - 2 = |E(H)| - (f3 + f6+),
    the double count 2|E(H)| >= 3 f3 + 6 f6+ and f6+ = |I| are all checked.
    """
    heavy = {v for v in g.vertices() if g.degree(v) >= 6}
    best = alpha_exact(g, limit, restrict=heavy)
    res = Obs1Result(holds=True, max_size=best.value, witness=best.witness, n=g.n)
    h = delete_vertices(g, best.witness)[0] if best.witness else g
    res.h_vertices, res.h_edges = h.n, h.m
    for walk in h.face_darts():
        if len(walk) == 3:
            res.f3 += 1
        elif len(walk) >= 6:
            res.f6plus += 1
        else:
            res.other_faces += 1
    checks = {
        "euler": res.h_vertices - 2 == res.h_edges - (res.f3 + res.f6plus),
        "double-count": 2 * res.h_edges >= 3 * res.f3 + 6 * res.f6plus,
        "hole-faces": res.f6plus == best.value and res.other_faces == 0,
        "vertex-count": res.h_vertices == g.n - best.value,
        "bound": 3 * best.value <= g.n - 2 - res.f3 / 2 and 3 * best.value <= g.n - 2,
    }
    res.details = [name for name, ok in checks.items() if not ok]
    res.holds = not res.details
    return res


def brute_force_forbidden_faces(g: PlaneGraph) -> list[tuple[int, ...]]:
    """Every facial triangle with a forbidden degree vector (slow reference)."""
    res = []
    for walk in g.faces():
        if len(walk) == 3 and tuple(sorted(g.degree(v) for v in walk)) in {
                (4, 4, 4), (4, 4, 5), (4, 5, 5)}:
            res.append(tuple(walk))
    return res
