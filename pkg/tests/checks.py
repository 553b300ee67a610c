"""Independent restatements of the partial-coloring and assembly
properties, written against the graph and the coloring only."""

import networkx as nx

COLORS = (1, 2, 3, 4)


def psi_violations(t, psi):
    col = psi.assignment
    out = []
    for v in t.vertices():
        nbrs = t.neighbors(v)
        if col[v] is not None and any(col[w] == col[v] for w in nbrs):
            out.append((v, "improper"))
        if col[v] is None and t.degree(v) != 4:
            out.append((v, "uncolored vertex of degree %d" % t.degree(v)))
        seen = {col[w] for w in nbrs | {v}} - {None}
        if len(seen) < 3:
            out.append((v, "sees fewer than three colors"))
        if t.degree(v) <= 5 and len(seen) != 4:
            out.append((v, "5- vertex misses a color"))
    return out


def missing_color(t, psi):
    col = psi.assignment
    miss = {}
    for v in t.vertices():
        seen = {col[w] for w in t.neighbors(v) | {v}}
        lost = [c for c in COLORS if c not in seen]
        if lost:
            miss[v] = lost
    return miss


def bad_structure_violations(t, psi, cover, candidates):
    """Bad edges, their bipartition, critical cycles, the cover and the sum
    of the four candidate sets.  Returns (violations, number of bad edges)."""
    col = psi.assignment
    out = []
    miss = missing_color(t, psi)
    for v, lost in miss.items():
        if len(lost) != 1:
            out.append((v, "misses %d colors" % len(lost)))
    miss = {v: lost[0] for v, lost in miss.items()}
    bad = nx.Graph()
    for u, v in t.edges():
        if u in miss and v in miss and miss[u] != miss[v]:
            bad.add_edge(u, v)
    uncolored = {v for v, c in col.items() if c is None}
    for comp in nx.connected_components(bad):
        sub = bad.subgraph(comp)
        if not nx.is_bipartite(sub):
            out.append((min(comp), "bad component not bipartite"))
            continue
        side_a, side_b = nx.bipartite.sets(sub)
        pattern_a = {frozenset((col[v], miss[v])) for v in side_a}
        pattern_b = {frozenset((col[v], miss[v])) for v in side_b}
        if len(pattern_a) != 1 or len(pattern_b) != 1 or pattern_a & pattern_b or \
                set().union(*pattern_a, *pattern_b) != set(COLORS):
            out.append((min(comp), "parts are not unions of two color classes"))
    for u, v in bad.edges():
        rings = [x for x in uncolored if {u, v} <= t.neighbors(x)]
        if len(rings) < 2:
            out.append(((u, v), "bad edge on %d critical cycles" % len(rings)))
        if u not in cover and v not in cover:
            out.append(((u, v), "bad edge not covered"))
    if len(cover) > len(uncolored):
        out.append(("J", "|J|=%d > %d uncolored" % (len(cover), len(uncolored))))
    n = t.n
    total = 0
    for i, d in candidates.items():
        total += len(d)
        if any(t.neighbors(v) & d for v in d):
            out.append((i, "D_i not independent"))
        if any(v not in d and not t.neighbors(v) & d for v in t.vertices()):
            out.append((i, "D_i not dominating"))
    if 3 * total > 4 * n - 2:
        out.append(("sum", "sum |D_i| = %d > (4n-2)/3" % total))
    return out, bad.number_of_edges()
