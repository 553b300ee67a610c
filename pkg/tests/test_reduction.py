"""Extension rules on hand-built configurations around the triangle (1,2,3).

For every configuration all maximal independent sets of the reduced graph
are enumerated, so each row of the rule tables is met by several D'.
"""

import pytest

import configs as C
from tridom.errors import ExtensionFailed, UnreducibleFace
from tridom.generators import flipmix, named, stacked
from tridom.oracle import brute_force_forbidden_faces, enumerate_maximal_independent_sets
from tridom.pipeline import (
    C1_CYCLE3,
    C2_CYCLE4,
    C2_PATH3,
    C3_CYCLE3_PENDANT,
    C3_CYCLE5,
    extend,
    reduce_once,
    verify,
)

TRI = (C.V1, C.V2, C.V3)
NAMES = {"v1": C.V1, "v2": C.V2, "v3": C.V3}

# (pattern, vertices that may stay undominated, vertex to add)
FIVE_CYCLE_ROWS = [
    ({"b12"}, {"v3", "b3", "b23"}, "v3"),
    ({"b2"}, {"v1", "v3", "b3", "b31"}, "v3"),
    ({"b23"}, {"v1", "b12", "b31"}, "v1"),
    ({"b3"}, {"v1", "v2", "b2", "b12"}, "v2"),
    ({"b31"}, {"v2", "b2", "b23"}, "v2"),
]
PENDANT_ROWS = {
    "b23": [({"y"}, {"v1"}, "v1"), ({"b12"}, {"v3", "x"}, "v3"), ({"b31"}, {"v2", "x"}, "v2")],
    "b12": [({"y"}, set(), None), ({"b3"}, {"x", "v1", "v2"}, "v1"), ({"b23"}, {"x", "v1"}, "v1")],
    "b31": [({"y"}, set(), None), ({"b2"}, {"x", "v1", "v3"}, "v1"), ({"b23"}, {"x", "v1"}, "v1")],
}
CYCLE4_ROWS = [
    ({"b12"}, "v3"), ({"b23"}, "v1"), ({"b31"}, "v2"), ({"b3"}, "v1"),
    ({"b12", "b3"}, None), ({"b23", "b31"}, None),
]


def by_pattern(g, step, gprime):
    rows = {}
    for dp in enumerate_maximal_independent_sets(gprime, limit=24):
        rows.setdefault(step.pattern(dp), []).append(dp)
    return rows


def undominated_roles(g, step, dprime):
    """Roles of T, B and x left undominated in G by D' alone."""
    d = set(dprime)
    roles = dict(step.boundary.role_map)
    if "x" in roles:
        # the pendant also carries its b-role; keep only the name x
        roles = {r: v for r, v in roles.items() if r == "x" or v != roles["x"]}
    roles.update({"v1": step.triangle[0], "v2": step.triangle[1], "v3": step.triangle[2]})
    out = set()
    for name, v in roles.items():
        if v not in d and not g.neighbors(v) & d:
            out.add(name)
    return out


def check_row(g, step, dprime, add):
    d = extend(dprime, step)
    added = d - set(dprime)
    if add is None:
        assert added == set()
    else:
        assert added == {NAMES[add]}
    report = verify(g, d, check_bound=False)
    assert report.ok, report


def reduced(cfg, relabel=None):
    g = C.build(*cfg, relabel=relabel)
    tri = TRI if relabel is None else tuple(relabel.get(v, v) for v in TRI)
    gprime, step = reduce_once(g, tri)
    return g, gprime, step


# -- (4,4,4): hole is a triangle ---------------------------------------------

def test_cycle3_shape():
    g, gp, step = reduced(C.CASE1)
    assert step.case_tag == C1_CYCLE3
    assert step.boundary.role_map == {"b12": C.B12, "b23": C.B23, "b31": C.B31}
    assert gp.n == g.n - 3 and gp.m == 3 * gp.n - 6
    gp.validate()


@pytest.mark.parametrize("pattern, add", [({"b12"}, "v3"), ({"b23"}, "v1"), ({"b31"}, "v2")])
def test_cycle3_single_boundary_vertex(pattern, add):
    # b_ij dominates v_i and v_j; v_k is the one undominated vertex
    g, gp, step = reduced(C.CASE1)
    for dp in by_pattern(g, step, gp)[frozenset(pattern)]:
        assert undominated_roles(g, step, dp) == {add}
        check_row(g, step, dp, add)


def test_cycle3_undominated_triangle_adds_lowest():
    g, gp, step = reduced(C.CASE1)
    for dp in by_pattern(g, step, gp)[frozenset()]:
        check_row(g, step, dp, "v1")


# -- (4,4,5): hole is a 4-cycle or a path ------------------------------------

def test_path3_terminal_case():
    g = C.path3_graph()
    assert g.n == 6
    gp, step = reduce_once(g, TRI)
    assert step.case_tag == C2_PATH3 and gp is None
    d = extend(set(), step)
    assert d == {C.V3}
    assert verify(g, d).ok


def test_cycle4_shape_and_chord():
    g, gp, step = reduced(C.CYCLE4)
    assert step.case_tag == C2_CYCLE4
    assert step.boundary.role_map == {"b12": C.B12, "b23": C.B23, "b3": C.B3, "b31": C.B31}
    # b12 b3 is absent, so it is the diagonal
    assert step.added_chords == [(C.B12, C.B3)]
    gp.validate()
    assert gp.simple and gp.m == 3 * gp.n - 6


CYCLE4_LABELINGS = {
    "b12-b3 chord": None,
    "b23-b31 chord": {C.B23: 5, C.B31: 6},
}


def _cycle4_rows():
    seen = {}
    for relabel in CYCLE4_LABELINGS.values():
        g, gp, step = reduced(C.CYCLE4, relabel)
        for pattern, dps in by_pattern(g, step, gp).items():
            seen.setdefault(pattern, []).extend((g, step, dp) for dp in dps)
    return seen


def test_cycle4_second_labeling_flips_the_chord():
    g, gp, step = reduced(C.CYCLE4, CYCLE4_LABELINGS["b23-b31 chord"])
    assert step.added_chords == [(5, 6)]


@pytest.mark.parametrize("pattern, add", CYCLE4_ROWS, ids=lambda x: str(x))
def test_cycle4_rows(pattern, add):
    rows = _cycle4_rows()
    assert frozenset(pattern) in rows, f"no D' realizes {pattern}"
    for g, step, dp in rows[frozenset(pattern)]:
        check_row(g, step, dp, add)


def test_cycle4_empty_pattern_adds_any_vertex():
    for g, step, dp in _cycle4_rows()[frozenset()]:
        check_row(g, step, dp, "v1")


# -- (4,5,5): hole is a 5-cycle ----------------------------------------------

def test_cycle5_shape_and_chords():
    g, gp, step = reduced(C.CYCLE5)
    assert step.case_tag == C3_CYCLE5
    assert step.boundary.role_map == {"b12": C.B12, "b2": C.B2, "b23": C.B23,
                                      "b3": C.B3, "b31": C.B31}
    assert step.boundary.walk == [C.B12, C.B2, C.B23, C.B3, C.B31]
    # first absent non-consecutive pair, then the residual 4-face diagonal
    assert step.added_chords == [(C.B12, C.B23), (C.B12, C.B3)]
    gp.validate()
    assert gp.simple and gp.n == g.n - 3


@pytest.mark.parametrize("pattern, undominated, add", FIVE_CYCLE_ROWS, ids=lambda x: str(x))
def test_five_cycle_rows(pattern, undominated, add):
    g, gp, step = reduced(C.CYCLE5)
    dps = by_pattern(g, step, gp)[frozenset(pattern)]
    for dp in dps:
        assert undominated_roles(g, step, dp) <= undominated
        check_row(g, step, dp, add)


def test_cycle5_b2_b3_adds_v1():
    g, gp, step = reduced(C.CYCLE5)
    for dp in by_pattern(g, step, gp)[frozenset({"b2", "b3"})]:
        assert undominated_roles(g, step, dp) == {"v1"}
        check_row(g, step, dp, "v1")


def test_cycle5_other_pairs_need_nothing():
    g, gp, step = reduced(C.CYCLE5)
    rows = by_pattern(g, step, gp)
    pairs = [p for p in rows if len(p) == 2 and p != {"b2", "b3"}]
    assert pairs
    for p in pairs:
        for dp in rows[p]:
            check_row(g, step, dp, None)


def test_cycle5_empty_pattern():
    g, gp, step = reduced(C.CYCLE5)
    for dp in by_pattern(g, step, gp)[frozenset()]:
        check_row(g, step, dp, "v1")


# -- (4,5,5): hole is a triangle with a pendant ------------------------------

@pytest.mark.parametrize("x_role", sorted(C.PENDANT))
def test_pendant_shape(x_role):
    g, gp, step = reduced(C.PENDANT[x_role])
    assert step.case_tag == C3_CYCLE3_PENDANT
    assert step.x_role == x_role
    assert step.pendant == C.X and step.boundary.role_map["y"] == C.Y
    assert set(step.deleted) == set(TRI) | {C.X}
    assert gp.n == g.n - 4
    gp.validate()


PENDANT_CASES = [(x, *row) for x, rows in PENDANT_ROWS.items() for row in rows]


@pytest.mark.parametrize("x_role, pattern, undominated, add", PENDANT_CASES, ids=lambda x: str(x))
def test_pendant_rows(x_role, pattern, undominated, add):
    g, gp, step = reduced(C.PENDANT[x_role])
    dps = by_pattern(g, step, gp)[frozenset(pattern)]
    for dp in dps:
        assert undominated_roles(g, step, dp) - {"y"} <= undominated
        check_row(g, step, dp, add)


@pytest.mark.parametrize("x_role", sorted(C.PENDANT))
def test_pendant_empty_pattern_covers_x(x_role):
    g, gp, step = reduced(C.PENDANT[x_role])
    x_nbrs = g.neighbors(C.X) & set(TRI)
    for dp in by_pattern(g, step, gp)[frozenset()]:
        d = extend(dp, step)
        (added,) = d - set(dp)
        assert added == min(x_nbrs)
        assert verify(g, d, check_bound=False).ok


# -- all configurations together ---------------------------------------------------

ALL_CONFIGS = [C.CASE1, C.CYCLE4, C.CYCLE5, *C.PENDANT.values()]


@pytest.mark.parametrize("cfg", ALL_CONFIGS)
def test_every_dprime_extends(cfg):
    g = C.build(*cfg)
    gp, step = reduce_once(g, TRI)
    for dp in enumerate_maximal_independent_sets(gp, limit=24):
        d = extend(dp, step)
        assert len(d) <= len(dp) + 1
        assert verify(g, d, check_bound=False).ok


def test_generated_forbidden_faces_extend():
    # every forbidden face of small generated graphs, every D' of G'
    tags = set()
    for n in range(7, 17):
        for seed in range(12):
            for t in (stacked(n, seed), flipmix(n, seed, 4 * n)):
                for tri in brute_force_forbidden_faces(t):
                    tri = tuple(sorted(tri, key=lambda v: (t.degree(v), v)))
                    gp, step = reduce_once(t, tri)
                    tags.add(step.case_tag)
                    if gp is None:
                        assert verify(t, extend(set(), step)).ok
                        continue
                    for dp in enumerate_maximal_independent_sets(gp, limit=16):
                        assert verify(t, extend(dp, step), check_bound=False).ok
    assert tags >= {C1_CYCLE3, C2_CYCLE4, C3_CYCLE5, C3_CYCLE3_PENDANT}


def test_extend_rejects_a_broken_dprime():
    g, gp, step = reduced(C.CYCLE4)
    with pytest.raises(ExtensionFailed):
        extend({C.B12, C.B23}, step)


def test_reduce_rejects_non_forbidden_face():
    t = named("icosahedron")
    with pytest.raises(UnreducibleFace):
        reduce_once(t, tuple(t.faces()[0]))


def test_reduce_rejects_mis_ordered_triangle():
    g = C.build(*C.CYCLE4)
    with pytest.raises(UnreducibleFace):
        reduce_once(g, (C.V3, C.V1, C.V2))
